#ifndef EXG_TORUS_HPP
#define EXG_TORUS_HPP

#include <array>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace exg {

// Discrete torus T_n^d, d in {1,2,3}.  Sites are indexed row-major with the
// last coordinate fastest: idx = (x0*n + x1)*n + x2.  All displacements wrap
// modulo n.
struct Torus {
  int n = 0;
  int d = 0;

  Torus() = default;
  Torus(int n_, int d_) : n(n_), d(d_) {
    if (d < 1 || d > 3) throw std::invalid_argument("torus: d must be 1, 2 or 3");
    if (n < 3) throw std::invalid_argument("torus: n >= 3 required");
  }

  int64_t sites() const {
    int64_t s = 1;
    for (int i = 0; i < d; ++i) s *= n;
    return s;
  }
  int64_t bonds() const { return static_cast<int64_t>(d) * sites(); }

  std::array<int, 3> coords(int64_t idx) const {
    std::array<int, 3> x{0, 0, 0};
    for (int i = d - 1; i >= 0; --i) {
      x[i] = static_cast<int>(idx % n);
      idx /= n;
    }
    return x;
  }

  int64_t index(const std::array<int, 3>& x) const {
    int64_t idx = 0;
    for (int i = 0; i < d; ++i) idx = idx * n + mod(x[i]);
    return idx;
  }

  int mod(int v) const {
    int m = v % n;
    return m < 0 ? m + n : m;
  }

  // neighbor of idx shifted by +1 or -1 along axis
  int64_t neighbor(int64_t idx, int axis, int dir) const {
    auto x = coords(idx);
    x[axis] = mod(x[axis] + dir);
    return index(x);
  }

  int64_t translate(int64_t idx, const std::array<int, 3>& shift) const {
    auto x = coords(idx);
    for (int i = 0; i < d; ++i) x[i] = mod(x[i] + shift[i]);
    return index(x);
  }
};

// Precomputed +1/-1 neighbor tables, one pair per axis.
struct NeighborTable {
  explicit NeighborTable(const Torus& t) {
    const int64_t N = t.sites();
    for (int ax = 0; ax < t.d; ++ax) {
      plus[ax].resize(N);
      minus[ax].resize(N);
      for (int64_t s = 0; s < N; ++s) {
        plus[ax][s] = static_cast<int32_t>(t.neighbor(s, ax, +1));
        minus[ax][s] = static_cast<int32_t>(t.neighbor(s, ax, -1));
      }
    }
  }
  std::array<std::vector<int32_t>, 3> plus;
  std::array<std::vector<int32_t>, 3> minus;
};

}  // namespace exg

#endif
