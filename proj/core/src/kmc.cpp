#include "exg/kmc.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace exg {

Trajectory simulate(const ModelParams& params, double T, uint64_t master_seed,
                    uint64_t replica, const SimOptions& options) {
  if (!(T > 0.0)) throw std::invalid_argument("simulate: T > 0 required");
  const Torus torus = params.torus();
  const int64_t N = torus.sites();
  const int64_t n_bonds = torus.bonds();
  const int d = params.d;
  const double n2 = static_cast<double>(params.n) * params.n;
  const double cbar = params.flip_rate_bound();

  const double rate_swap = static_cast<double>(n_bonds) * n2;
  const double rate_flip = static_cast<double>(N) * cbar;
  const double rate_total = rate_swap + rate_flip;

  if (rate_total * T > static_cast<double>(options.event_budget))
    throw std::runtime_error("horizon-overflow: predicted event count exceeds budget");

  std::vector<double> samples(options.sample_times);
  std::sort(samples.begin(), samples.end());
  for (double s : samples)
    if (s < 0.0 || s > T) throw std::invalid_argument("simulate: sample times in [0,T]");

  Philox rng(master_seed, replica);
  LatticeConfig config = LatticeConfig::bernoulli(torus, params.rho_star, rng);
  NeighborTable nbr(torus);

  for (Observer* ob : options.observers) ob->init(config, params);

  Trajectory traj;
  traj.master_seed = master_seed;
  traj.replica = replica;
  traj.params = params;
  traj.horizon = T;
  traj.sample_times = samples;
  traj.gamma.resize(samples.size(), 0.0);

  const double rho = params.rho_star;
  const double inv2d = 1.0 / (2.0 * d);

  double t_cur = 0.0;           // time accounted in the integrals
  double occ0 = config.occ(0);  // occupancy at the origin
  double gamma_acc = 0.0;       // unscaled int_0^t etabar_0
  size_t next_sample = 0;

  auto advance_to = [&](double t) {
    double dt = t - t_cur;
    gamma_acc += (occ0 - rho) * dt;
    for (Observer* ob : options.observers) ob->advance(dt);
    t_cur = t;
  };
  auto emit_samples_up_to = [&](double t_limit) {
    while (next_sample < samples.size() && samples[next_sample] <= t_limit) {
      advance_to(samples[next_sample]);
      traj.gamma[next_sample] = params.beta_dn * gamma_acc;
      for (Observer* ob : options.observers)
        ob->sample(config, samples[next_sample], next_sample);
      ++next_sample;
    }
  };

  const bool has_observers = !options.observers.empty();
  double t_event = 0.0;
  while (true) {
    t_event += rng.exponential(rate_total);
    if (t_event >= T) break;
    emit_samples_up_to(t_event);
    ++traj.event_count;

    double v = rng.uniform() * rate_total;
    if (v < rate_swap) {
      int64_t bond = std::min<int64_t>(static_cast<int64_t>(v / n2), n_bonds - 1);
      int axis = static_cast<int>(bond % d);
      int64_t x = bond / d;
      int64_t y = nbr.plus[axis][x];
      if (config.occupied(x) != config.occupied(y)) {
        advance_to(t_event);
        config.swap_sites(x, y);
        ++traj.swap_count;
        if (x == 0 || y == 0) occ0 = config.occ(0);
        if (has_observers) {
          Event ev{Event::Swap, x, y};
          for (Observer* ob : options.observers) ob->apply(config, ev, t_event);
        }
      }
    } else {
      ++traj.flip_proposals;
      int64_t x = std::min<int64_t>(static_cast<int64_t>((v - rate_swap) / cbar), N - 1);
      int occ_x = config.occ(x);
      double c;
      if (occ_x) {
        c = params.b;
      } else {
        int nbsum = 0;
        for (int ax = 0; ax < d; ++ax)
          nbsum += config.occ(nbr.plus[ax][x]) + config.occ(nbr.minus[ax][x]);
        c = params.a + params.lambda * inv2d * nbsum;
      }
      if (rng.uniform() * cbar < c) {
        advance_to(t_event);
        config.flip(x);
        ++traj.flip_accepted;
        if (x == 0) occ0 = config.occ(0);
        if (has_observers) {
          Event ev{Event::Flip, x, 0};
          for (Observer* ob : options.observers) ob->apply(config, ev, t_event);
        }
      }
    }
  }
  emit_samples_up_to(T);
  advance_to(T);
  traj.gamma_horizon = params.beta_dn * gamma_acc;
  return traj;
}

double occupation_time(const Trajectory& traj, double t) {
  if (t > traj.horizon) throw std::out_of_range("out-of-horizon");
  if (t == 0.0) return 0.0;
  for (size_t i = 0; i < traj.sample_times.size(); ++i)
    if (std::abs(traj.sample_times[i] - t) < 1e-12) return traj.gamma[i];
  if (t == traj.horizon) return traj.gamma_horizon;
  throw std::invalid_argument("occupation_time: t not on the recorded sample grid");
}

FieldPairingObserver::FieldPairingObserver(std::function<double(double)> H)
    : H_(std::move(H)) {}

void FieldPairingObserver::init(const LatticeConfig& config, const ModelParams& params) {
  if (params.d != 1) throw std::invalid_argument("dimension-mismatch: field pairing is d=1");
  rho_ = params.rho_star;
  values_.clear();
  (void)config;
}

void FieldPairingObserver::sample(const LatticeConfig& config, double, size_t index) {
  const int64_t n = config.sites();
  double acc = 0.0;
  for (int64_t x = 0; x < n; ++x)
    acc += (config.occ(x) - rho_) * H_(static_cast<double>(x) / n);
  if (values_.size() <= index) values_.resize(index + 1, 0.0);
  values_[index] = acc / std::sqrt(static_cast<double>(n));
}

AdditiveFunctionalObserver::AdditiveFunctionalObserver(const LocalFunction& f) : f_(f) {}

void AdditiveFunctionalObserver::init(const LatticeConfig& config,
                                      const ModelParams& params) {
  if (params.d != 1)
    throw std::invalid_argument("dimension-mismatch: additive functionals are d=1");
  phi_star_ = f_.phi(params.rho_star);
  if (std::abs(phi_star_) > 1e-10)
    throw std::invalid_argument("degree-one-violation: phi_f(rho*) != 0");
  beta_ = params.beta_dn;
  n_ = params.n;
  integral_ = 0.0;
  values_.clear();
  recompute(config);
}

void AdditiveFunctionalObserver::recompute(const LatticeConfig& config) {
  current_ = f_.eval(config, 0);
}

void AdditiveFunctionalObserver::advance(double dt) {
  integral_ += (current_ - phi_star_) * dt;
}

void AdditiveFunctionalObserver::apply(const LatticeConfig& config, const Event& ev,
                                       double) {
  // recompute when a changed site lies in the window around the origin
  const int r = f_.radius();
  auto in_window = [&](int64_t s) {
    int x = static_cast<int>(s);
    int dist = std::min(x, n_ - x);
    return dist <= r;
  };
  if (in_window(ev.x) || (ev.kind == Event::Swap && in_window(ev.y)))
    recompute(config);
}

void AdditiveFunctionalObserver::sample(const LatticeConfig&, double, size_t index) {
  if (values_.size() <= index) values_.resize(index + 1, 0.0);
  values_[index] = beta_ * integral_;
}

MartingaleObserver::MartingaleObserver(const GreenTable& table) : table_(&table) {}

void MartingaleObserver::init(const LatticeConfig& config, const ModelParams& params) {
  if (table_->n != params.n || table_->d != params.d)
    throw std::invalid_argument("missing-green-table: table does not match (n,d)");
  params_ = params;
  torus_ = params.torus();
  nbr_ = std::make_unique<NeighborTable>(torus_);
  beta_ = params.beta_dn;
  n2_ = static_cast<double>(params.n) * params.n;
  rho_ = params.rho_star;
  const int64_t N = torus_.sites();
  site_s_.assign(N, 0.0);
  site_w_.assign(N, 0.0);
  bond_u_.assign(N * params.d, 0.0);
  G_ = 0.0;
  S_ = 0.0;
  U_ = 0.0;
  W_ = 0.0;
  for (int64_t z = 0; z < N; ++z) {
    G_ += table_->at(z) * (config.occ(z) - rho_);
    double c = flip_rate(config, z, params_, *nbr_);
    double g = table_->at(z);
    site_s_[z] = g * c * (1.0 - 2.0 * config.occ(z));
    site_w_[z] = c * g * g;
    S_ += site_s_[z];
    W_ += site_w_[z];
    for (int ax = 0; ax < params.d; ++ax) {
      int64_t y = nbr_->plus[ax][z];
      double dg = table_->at(z) - table_->at(y);
      int de = config.occ(z) - config.occ(y);
      bond_u_[z * params.d + ax] = dg * dg * (de * de);
      U_ += bond_u_[z * params.d + ax];
    }
  }
  etabar0_ = config.occ(0) - rho_;
  G0_ = G_;
  drift_integral_ = 0.0;
  qv_integral_ = 0.0;
  track_ = MartingaleTrack{};
}

void MartingaleObserver::advance(double dt) {
  // L_n G = (G - etabar_0) + S in closed form; <M>' = beta^2 (n^2 U + W)
  drift_integral_ += dt * (G_ - etabar0_ + S_);
  qv_integral_ += dt * (n2_ * U_ + W_);
}

void MartingaleObserver::refresh_site(const LatticeConfig& config, int64_t z) {
  double c = flip_rate(config, z, params_, *nbr_);
  double g = table_->at(z);
  double s_new = g * c * (1.0 - 2.0 * config.occ(z));
  double w_new = c * g * g;
  S_ += s_new - site_s_[z];
  W_ += w_new - site_w_[z];
  site_s_[z] = s_new;
  site_w_[z] = w_new;
}

void MartingaleObserver::refresh_bonds_at(const LatticeConfig& config, int64_t z) {
  for (int ax = 0; ax < params_.d; ++ax) {
    int64_t yp = nbr_->plus[ax][z];
    double dgp = table_->at(z) - table_->at(yp);
    int dep = config.occ(z) - config.occ(yp);
    double up = dgp * dgp * (dep * dep);
    U_ += up - bond_u_[z * params_.d + ax];
    bond_u_[z * params_.d + ax] = up;
    int64_t ym = nbr_->minus[ax][z];
    double dgm = table_->at(ym) - table_->at(z);
    int dem = config.occ(ym) - config.occ(z);
    double um = dgm * dgm * (dem * dem);
    U_ += um - bond_u_[ym * params_.d + ax];
    bond_u_[ym * params_.d + ax] = um;
  }
}

void MartingaleObserver::apply(const LatticeConfig& config, const Event& ev, double) {
  // update G and refresh local site/bond caches around the changed sites
  if (ev.kind == Event::Swap) {
    double dG = (table_->at(ev.x) - table_->at(ev.y)) *
                (config.occ(ev.x) - config.occ(ev.y));
    G_ += dG;
    refresh_site(config, ev.x);
    refresh_site(config, ev.y);
    for (int ax = 0; ax < params_.d; ++ax) {
      refresh_site(config, nbr_->plus[ax][ev.x]);
      refresh_site(config, nbr_->minus[ax][ev.x]);
      refresh_site(config, nbr_->plus[ax][ev.y]);
      refresh_site(config, nbr_->minus[ax][ev.y]);
    }
    refresh_bonds_at(config, ev.x);
    refresh_bonds_at(config, ev.y);
    if (ev.x == 0 || ev.y == 0) etabar0_ = config.occ(0) - rho_;
  } else {
    G_ += table_->at(ev.x) * (2.0 * config.occ(ev.x) - 1.0);
    refresh_site(config, ev.x);
    for (int ax = 0; ax < params_.d; ++ax) {
      refresh_site(config, nbr_->plus[ax][ev.x]);
      refresh_site(config, nbr_->minus[ax][ev.x]);
    }
    refresh_bonds_at(config, ev.x);
    if (ev.x == 0) etabar0_ = config.occ(0) - rho_;
  }
}

void MartingaleObserver::sample(const LatticeConfig&, double t, size_t) {
  track_.times.push_back(t);
  track_.M.push_back(beta_ * (G_ - G0_ - drift_integral_));
  track_.QV.push_back(beta_ * beta_ * qv_integral_);
}

void InvariantCheckObserver::init(const LatticeConfig& config, const ModelParams&) {
  count_ = config.particle_count();
  violations_ = 0;
}

void InvariantCheckObserver::apply(const LatticeConfig& config, const Event& ev, double) {
  int64_t now = config.particle_count();
  if (ev.kind == Event::Swap) {
    if (now != count_) ++violations_;
  } else {
    if (std::abs(now - count_) != 1) ++violations_;
  }
  if (now != config.count_particles()) ++violations_;
  count_ = now;
}

}  // namespace exg
