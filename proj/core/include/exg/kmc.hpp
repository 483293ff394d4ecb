#ifndef EXG_KMC_HPP
#define EXG_KMC_HPP

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "exg/greens.hpp"
#include "exg/local_function.hpp"
#include "exg/model.hpp"

namespace exg {

struct Event {
  enum Kind : uint8_t { Swap, Flip };
  Kind kind;
  int64_t x;
  int64_t y;  // swap partner, unused for flips
};

// Observers see every state change with its exact event time.  advance(dt)
// runs over the constancy interval before the change; apply() receives the
// configuration after the change.
class Observer {
 public:
  virtual ~Observer() = default;
  virtual void init(const LatticeConfig& config, const ModelParams& params) = 0;
  virtual void advance(double dt) = 0;
  virtual void apply(const LatticeConfig& config, const Event& ev, double t) = 0;
  virtual void sample(const LatticeConfig& config, double t, size_t index) = 0;
};

struct Trajectory {
  uint64_t master_seed = 0;
  uint64_t replica = 0;
  ModelParams params;
  double horizon = 0.0;
  uint64_t event_count = 0;  // every clock firing, including rejected thinning
                             // proposals and equal-occupancy swaps
  uint64_t swap_count = 0;       // swaps that changed the state
  uint64_t flip_proposals = 0;
  uint64_t flip_accepted = 0;
  std::vector<double> sample_times;
  std::vector<double> gamma;  // occupation time at the sample times
  double gamma_horizon = 0.0;
};

struct SimOptions {
  std::vector<double> sample_times;  // distinct, in (0, T]
  uint64_t event_budget = uint64_t(1) << 33;
  std::vector<Observer*> observers;
};

// Exact event-driven CTMC sample path of n^2 L_ex + L_r: each unordered bond
// swaps at rate n^2, each site proposes flips at the uniform bound
// a + lambda^+ + b and accepts by thinning.  Initial configuration is
// i.i.d. Bernoulli(rho*) drawn from the (master_seed, replica) stream.
Trajectory simulate(const ModelParams& params, double T, uint64_t master_seed,
                    uint64_t replica, const SimOptions& options);

// Gamma^n(t) at a sample time of the trajectory (out-of-horizon beyond T;
// t must lie on the recorded grid, the path is not retained between samples)
double occupation_time(const Trajectory& traj, double t);

// density fluctuation field pairing at sample times, d=1 only
class FieldPairingObserver : public Observer {
 public:
  FieldPairingObserver(std::function<double(double)> H);
  void init(const LatticeConfig& config, const ModelParams& params) override;
  void advance(double) override {}
  void apply(const LatticeConfig&, const Event&, double) override {}
  void sample(const LatticeConfig& config, double t, size_t index) override;

  const std::vector<double>& values() const { return values_; }

 private:
  std::function<double(double)> H_;
  double rho_ = 0.5;
  std::vector<double> values_;
};

// Gamma^n_f(t) = beta int_0^t [f(eta(s)) - phi_f(rho*)] ds for a local f,
// d=1, window radius <= 3.  Throws degree-one-violation when
// |phi_f(rho*)| > 1e-10.
class AdditiveFunctionalObserver : public Observer {
 public:
  explicit AdditiveFunctionalObserver(const LocalFunction& f);
  void init(const LatticeConfig& config, const ModelParams& params) override;
  void advance(double dt) override;
  void apply(const LatticeConfig& config, const Event& ev, double t) override;
  void sample(const LatticeConfig& config, double t, size_t index) override;

  const std::vector<double>& values() const { return values_; }

 private:
  void recompute(const LatticeConfig& config);
  LocalFunction f_;
  double phi_star_ = 0.0;
  double beta_ = 1.0;
  double current_ = 0.0;
  double integral_ = 0.0;
  int n_ = 0;
  std::vector<double> values_;
};

struct MartingaleTrack {
  std::vector<double> times;
  std::vector<double> M;   // M_n(t)
  std::vector<double> QV;  // <M_n>(t)
};

// Dynkin martingale of G_n(eta) = sum_x g_n(x) etabar_x with the drift
// integral accumulated in closed form (n^2 L_ex G_n = G_n - etabar_0,
// L_r G_n = sum g_n c_x (1-2 eta_x)) and the quadratic variation from the
// exclusion-gradient and Glauber sums.
class MartingaleObserver : public Observer {
 public:
  explicit MartingaleObserver(const GreenTable& table);
  void init(const LatticeConfig& config, const ModelParams& params) override;
  void advance(double dt) override;
  void apply(const LatticeConfig& config, const Event& ev, double t) override;
  void sample(const LatticeConfig& config, double t, size_t index) override;

  const MartingaleTrack& track() const { return track_; }

 private:
  void refresh_site(const LatticeConfig& config, int64_t z);
  void refresh_bonds_at(const LatticeConfig& config, int64_t z);

  const GreenTable* table_;
  ModelParams params_;
  Torus torus_;
  std::unique_ptr<NeighborTable> nbr_;
  double beta_ = 1.0, n2_ = 1.0, rho_ = 0.5;
  double G_ = 0.0, G0_ = 0.0;
  double etabar0_ = 0.0;
  double S_ = 0.0;  // sum_x g c_x (1-2 eta_x)
  double U_ = 0.0;  // sum over bonds (grad g)^2 (eta_x - eta_y)^2
  double W_ = 0.0;  // sum_x c_x g^2
  std::vector<double> site_s_, site_w_;
  std::vector<double> bond_u_;  // per (site, axis)
  double drift_integral_ = 0.0;
  double qv_integral_ = 0.0;
  MartingaleTrack track_;
};

// per-event conservation checks, test support
class InvariantCheckObserver : public Observer {
 public:
  void init(const LatticeConfig& config, const ModelParams&) override;
  void advance(double) override {}
  void apply(const LatticeConfig& config, const Event& ev, double t) override;
  void sample(const LatticeConfig&, double, size_t) override {}

  uint64_t violations() const { return violations_; }

 private:
  int64_t count_ = 0;
  uint64_t violations_ = 0;
};

}  // namespace exg

#endif
