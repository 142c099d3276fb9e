#pragma once

// Shared fixtures and seeded generators for the test suites.

#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "srwalk/srwalk.hpp"

namespace srw::testing {

/// Four unit interior steps; blocked boundary mass goes to the self-loop.
inline ReflectingWalkModel symmetric_walk() {
  ReflectingWalkModel m;
  m.label = "symmetric-walk";
  m.pplus = FaceDistribution(Face::Interior,
                             {{{1, 0}, 0.25}, {{-1, 0}, 0.25}, {{0, 1}, 0.25}, {{0, -1}, 0.25}});
  m.p1 = FaceDistribution(Face::Horizontal,
                          {{{1, 0}, 0.25}, {{-1, 0}, 0.25}, {{0, 1}, 0.25}, {{0, 0}, 0.25}});
  m.p2 = FaceDistribution(Face::Vertical,
                          {{{1, 0}, 0.25}, {{0, 1}, 0.25}, {{0, -1}, 0.25}, {{0, 0}, 0.25}});
  m.p0 = FaceDistribution(Face::Origin, {{{1, 0}, 0.25}, {{0, 1}, 0.25}, {{0, 0}, 0.5}});
  return m;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng_); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

  /// Probability vector over the allowed steps of a face, rounded to at
  /// most 15 significant digits, with the diagonal absorbing the slack.
  FaceDistribution face(Face f, bool strictly_positive) {
    FaceDistribution d(f);
    double total = 0.0;
    std::array<double, 9> w{};
    for (Step s : kSteps) {
      if (!step_allowed(f, s)) continue;
      double x = uniform(0.05, 1.0);
      if (!strictly_positive && !(s == Step{0, 0}) && coin(0.25)) x = 0.0;
      w[step_index(s)] = x;
      total += x;
    }
    for (Step s : kSteps) d.set(s, round_digits(w[step_index(s)] / total, 12));
    d.set({0, 0}, 0.0);
    d.set({0, 0}, 1.0 - d.sum());
    return d;
  }

  ReflectingWalkModel model(bool strictly_positive) {
    ReflectingWalkModel m;
    m.label = "random";
    for (Face f : kFaces) m.face(f) = face(f, strictly_positive);
    return m;
  }

  /// Stable Jackson network with strictly positive parameters.
  JacksonParameters jackson_params() {
    for (;;) {
      JacksonParameters p;
      std::array<double, 4> w{};
      double t = 0.0;
      for (auto& x : w) t += (x = uniform(0.05, 1.0));
      p.lambda1 = w[0] / t * 0.5;
      p.lambda2 = w[1] / t * 0.5;
      p.mu1 = w[2] / t;
      p.mu2 = 1.0 - p.lambda1 - p.lambda2 - p.mu1;
      for (auto& row : p.r) {
        const double a = uniform(0.1, 1.0);
        const double b = uniform(0.1, 1.0);
        const double c = uniform(0.1, 1.0);
        row = {a / (a + b + c), b / (a + b + c), 0.0};
        row[2] = 1.0 - row[0] - row[1];
      }
      const auto t2 = solve_traffic(p);
      if (t2.rho1 < 0.9 && t2.rho2 < 0.9) return p;
    }
  }

  /// Structure-reversible walk built backwards from a point (z1, z2) of
  /// gamma_+ = 1: the boundary faces are proportional to the interior on
  /// the rows (a1) and (a2) tie together, and the free entries p1(1,0),
  /// p2(0,1) are solved so that gamma_1 = gamma_2 = 1 at that point.
  /// gamma_0 = 1 then follows from global flux balance. Returns nullopt when
  /// a draw produces a negative probability.
  std::optional<ReflectingWalkModel> structure_reversible_candidate() {
    ReflectingWalkModel m;
    m.label = "random-sr";
    m.pplus = face(Face::Interior, false);
    const auto& p = m.pplus;
    if (p(1, 0) == 0.0 || p(-1, 0) == 0.0 || p(0, 1) == 0.0 || p(0, -1) == 0.0) return std::nullopt;

    const double z1 = uniform(1.1, 4.0);
    LaurentPolynomial g;
    for (Step s : kSteps) g.at(s.i, s.j) = p.at(s);
    const double a = g.column(1, z1);
    const double b = g.column(0, z1) - 1.0;
    const double c = g.column(-1, z1);
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0 || a <= 0.0) return std::nullopt;
    const double z2 = (-b + std::sqrt(disc)) / (2.0 * a);
    if (!(z2 > 1.05)) return std::nullopt;

    const double c1p = uniform(0.5, 2.0);
    const double c2p = uniform(0.5, 2.0);
    double up1 = 0.0;
    double right2 = 0.0;
    for (int i = -1; i <= 1; ++i) {
      m.p1.set({i, 1}, c1p * p(i, 1));
      m.p2.set({1, i}, c2p * p(1, i));
      up1 += p(i, 1);
      right2 += p(1, i);
    }
    const double down1 = (p(1, -1) * z1 + p(0, -1) + p(-1, -1) / z1) / z2;
    const double left2 = (p(-1, 1) * z2 + p(-1, 0) + p(-1, -1) / z2) / z1;
    const double q1 = uniform(0.05, 0.4);
    const double q2 = uniform(0.05, 0.4);
    m.p1.set({-1, 0}, q1);
    m.p1.set({1, 0}, (q1 * (1.0 - 1.0 / z1) - c1p * (down1 - up1)) / (z1 - 1.0));
    m.p2.set({0, -1}, q2);
    m.p2.set({0, 1}, (q2 * (1.0 - 1.0 / z2) - c2p * (left2 - right2)) / (z2 - 1.0));
    m.p1.set({0, 0}, 1.0 - m.p1.off_diagonal_mass());
    m.p2.set({0, 0}, 1.0 - m.p2.off_diagonal_mass());

    const double c10 = uniform(0.3, 2.0);
    const double c20 = c10 * c1p / c2p;
    m.p0.set({1, 0}, c10 * m.p1(1, 0));
    m.p0.set({0, 1}, c20 * m.p2(0, 1));
    m.p0.set({1, 1}, c10 * c1p * p(1, 1));
    m.p0.set({0, 0}, 1.0 - m.p0.off_diagonal_mass());

    for (Face f : kFaces) {
      for (Step s : kSteps) {
        if (m.face(f).at(s) < 0.0 || m.face(f).at(s) > 1.0) return std::nullopt;
      }
    }
    if (m.p1(1, 0) <= 0.0 || m.p2(0, 1) <= 0.0) return std::nullopt;
    return m;
  }

  std::mt19937_64& engine() { return rng_; }

  static double round_digits(double x, int digits) {
    if (x == 0.0) return 0.0;
    const double scale = std::pow(10.0, digits - 1 - static_cast<int>(std::floor(std::log10(std::abs(x)))));
    return std::round(x * scale) / scale;
  }

 private:
  std::mt19937_64 rng_;
};

/// Rejection-sampled corpus of walks the pipeline accepts as
/// structure-reversible.
inline std::vector<ReflectingWalkModel> random_sr_corpus(std::size_t count, std::uint64_t seed) {
  Gen gen(seed);
  std::vector<ReflectingWalkModel> out;
  while (out.size() < count) {
    auto m = gen.structure_reversible_candidate();
    if (!m) continue;
    const auto report = analyze(*m);
    if (report.verdict == Verdict::StructureReversible) out.push_back(*m);
  }
  return out;
}

inline ReversibilityConstants constants_of(const ReflectingWalkModel& m, double tol = 1e-9) {
  return compute_constants(m, tol);
}

}  // namespace srw::testing
