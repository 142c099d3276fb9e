#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/model.hpp"
#include "srwalk/stationary.hpp"

namespace srw {

/// SplitMix64 step: x += 0x9e3779b97f4a7c15, then two xor-shift-multiply
/// rounds with constants 0xbf58476d1ce4e5b9 and 0x94d049bb133111eb.
inline std::uint64_t splitmix64(std::uint64_t& x) noexcept {
  std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// xoshiro256** by Blackman and Vigna. Output rotl(s1 * 5, 7) * 9; the
/// state is seeded with four consecutive splitmix64 outputs.
class Xoshiro256StarStar {
 public:
  explicit Xoshiro256StarStar(std::uint64_t seed) noexcept {
    for (auto& word : s_) word = splitmix64(seed);
  }
  explicit Xoshiro256StarStar(const std::array<std::uint64_t, 4>& state) noexcept : s_(state) {}

  std::uint64_t operator()() noexcept {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  /// Uniform on [0,1) from the top 53 bits.
  double uniform() noexcept { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }
  std::array<std::uint64_t, 4> s_{};
};

/// Dense probability table on {0..size}^2.
struct GridDistribution {
  int size = 0;
  std::vector<double> values;
  double residual = 0.0;
  bool empty = false;
  double outside_mass = 0.0;
  long iterations = 0;

  double at(int n1, int n2) const {
    return values[static_cast<std::size_t>(n1) * static_cast<std::size_t>(size + 1) +
                  static_cast<std::size_t>(n2)];
  }
  double& at(int n1, int n2) {
    return values[static_cast<std::size_t>(n1) * static_cast<std::size_t>(size + 1) +
                  static_cast<std::size_t>(n2)];
  }
};

inline GridDistribution make_grid(int size) {
  GridDistribution g;
  g.size = size;
  g.values.assign(static_cast<std::size_t>(size + 1) * static_cast<std::size_t>(size + 1), 0.0);
  return g;
}

/// Transition lists of the chain censored to {0..N}^2. Transitions that
/// would leave the grid stay put instead, so each row still sums to one.
struct CensoredKernel {
  struct Edge {
    std::uint32_t target;
    double p;
  };
  int size = 0;
  std::vector<std::vector<Edge>> rows;

  double row_sum(std::size_t state) const {
    double total = 0.0;
    for (const auto& e : rows[state]) total += e.p;
    return total;
  }
};

inline CensoredKernel censored_kernel(const ReflectingWalkModel& m, int n) {
  const int w = n + 1;
  CensoredKernel k;
  k.size = n;
  k.rows.resize(static_cast<std::size_t>(w) * static_cast<std::size_t>(w));
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) {
      const auto& law = m.face(face_of(a, b));
      const auto src = static_cast<std::uint32_t>(a * w + b);
      auto& row = k.rows[src];
      double moved = 0.0;
      for (Step s : kSteps) {
        const double p = law.at(s);
        const int c = a + s.i;
        const int d = b + s.j;
        if (p == 0.0 || c > n || d > n || (s.i == 0 && s.j == 0)) continue;
        row.push_back({static_cast<std::uint32_t>(c * w + d), p});
        moved += p;
      }
      // The diagonal absorbs the off-grid mass and the self-loop.
      const double stay = std::max(0.0, 1.0 - moved);
      if (stay > 0.0) row.push_back({src, stay});
    }
  }
  return k;
}

/// Stationary vector of the censored chain by the lazy synchronous iteration
/// pi <- (pi + pi P) / 2. It has the same fixed point as pi P = pi and also
/// converges for periodic chains. Stops when the L1 change is at most tol.
inline GridDistribution truncated_stationary(const ReflectingWalkModel& m, int n,
                                             double tol = 1e-13, long max_iters = 2'000'000) {
  if (n < 8) throw Error(ErrorKind::InvalidArgument, "grid size must be at least 8");
  const auto kernel = censored_kernel(m, n);
  const std::size_t states = kernel.rows.size();

  std::vector<double> pi(states, 1.0 / static_cast<double>(states));
  std::vector<double> next(states);
  GridDistribution g = make_grid(n);
  bool converged = false;
  for (long it = 0; it < max_iters; ++it) {
    std::fill(next.begin(), next.end(), 0.0);
    for (std::size_t src = 0; src < states; ++src) {
      const double mass = 0.5 * pi[src];
      next[src] += mass;
      for (const auto& e : kernel.rows[src]) next[e.target] += mass * e.p;
    }
    double change = 0.0;
    for (std::size_t k = 0; k < states; ++k) change += std::abs(next[k] - pi[k]);
    pi.swap(next);
    g.iterations = it + 1;
    if (change <= tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw Error(ErrorKind::NotConverged,
                "power iteration did not converge in " + std::to_string(max_iters) + " sweeps");
  }
  double total = 0.0;
  for (double v : pi) total += v;
  for (std::size_t k = 0; k < states; ++k) g.values[k] = pi[k] / total;

  // Residual of the true (uncensored) balance equations away from the cut.
  auto lookup = [&](long a, long b) { return g.at(static_cast<int>(a), static_cast<int>(b)); };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      g.residual = std::max(g.residual,
                            static_cast<double>(std::abs(balance_residual(m, lookup, a, b))));
    }
  }
  return g;
}

/// Occupation frequencies of one trajectory started at the origin. The
/// first burn_in of the `steps` transitions are discarded. Frequencies are
/// fractions of all recorded visits; visits outside {0..grid}^2 are counted
/// in outside_mass.
inline GridDistribution simulate(const ReflectingWalkModel& m, long steps, std::uint64_t seed,
                                 long burn_in = 0, int grid = 60) {
  if (steps < burn_in || burn_in < 0) {
    throw Error(ErrorKind::InvalidArgument, "need 0 <= burn_in <= steps");
  }
  if (grid < 1) throw Error(ErrorKind::InvalidArgument, "grid must be positive");
  GridDistribution g = make_grid(grid);
  if (steps == burn_in) {
    g.empty = true;
    return g;
  }
  std::array<std::array<double, 9>, 4> cumulative{};
  for (Face f : kFaces) {
    double acc = 0.0;
    for (std::size_t k = 0; k < kSteps.size(); ++k) {
      acc += m.face(f).at(kSteps[k]);
      cumulative[face_index(f)][k] = acc;
    }
  }
  Xoshiro256StarStar rng(seed);
  long n1 = 0;
  long n2 = 0;
  std::vector<std::uint64_t> counts(g.values.size(), 0);
  std::uint64_t outside = 0;
  for (long t = 0; t < steps; ++t) {
    const auto& cum = cumulative[face_index(face_of(n1, n2))];
    const double u = rng.uniform() * cum.back();
    std::size_t k = 0;
    while (k + 1 < cum.size() && u >= cum[k]) ++k;
    n1 += kSteps[k].i;
    n2 += kSteps[k].j;
    if (t < burn_in) continue;
    if (n1 <= grid && n2 <= grid) {
      ++counts[static_cast<std::size_t>(n1) * static_cast<std::size_t>(grid + 1) +
               static_cast<std::size_t>(n2)];
    } else {
      ++outside;
    }
  }
  const double total = static_cast<double>(steps - burn_in);
  for (std::size_t k = 0; k < counts.size(); ++k) g.values[k] = static_cast<double>(counts[k]) / total;
  g.outside_mass = static_cast<double>(outside) / total;
  return g;
}

/// Closed form tabulated on {0..n}^2 (not renormalized).
inline GridDistribution tabulate(const StationaryDistribution& d, int n) {
  GridDistribution g = make_grid(n);
  for (int a = 0; a <= n; ++a) {
    for (int b = 0; b <= n; ++b) g.at(a, b) = pi_at(d, a, b);
  }
  return g;
}

/// Half the L1 distance on {0..window}^2 after renormalizing both tables
/// over the window.
inline double total_variation(const GridDistribution& a, const GridDistribution& b, int window) {
  if (window < 0 || window > a.size || window > b.size) {
    throw Error(ErrorKind::WindowMismatch, "window " + std::to_string(window) +
                                               " exceeds a grid of size " +
                                               std::to_string(std::min(a.size, b.size)));
  }
  long double ma = 0.0L;
  long double mb = 0.0L;
  for (int i = 0; i <= window; ++i) {
    for (int j = 0; j <= window; ++j) {
      ma += a.at(i, j);
      mb += b.at(i, j);
    }
  }
  if (!(ma > 0.0L) || !(mb > 0.0L)) {
    throw Error(ErrorKind::ZeroMass, "a table has no mass inside the window");
  }
  long double tv = 0.0L;
  for (int i = 0; i <= window; ++i) {
    for (int j = 0; j <= window; ++j) tv += std::abs(a.at(i, j) / ma - b.at(i, j) / mb);
  }
  return static_cast<double>(0.5L * tv);
}

inline void write_grid_csv(std::ostream& os, const GridDistribution& g) {
  os << "n1,n2,probability\n";
  os.precision(17);
  for (int a = 0; a <= g.size; ++a) {
    for (int b = 0; b <= g.size; ++b) os << a << ',' << b << ',' << g.at(a, b) << '\n';
  }
}

}  // namespace srw
