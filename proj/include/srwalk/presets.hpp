#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/model.hpp"

namespace srw {

/// Two-node discrete-time Jackson network. r[0] = (r10, r11, r12) and
/// r[1] = (r20, r21, r22); index 0 means leaving the network.
struct JacksonParameters {
  double lambda1 = 0.0;
  double lambda2 = 0.0;
  double mu1 = 0.0;
  double mu2 = 0.0;
  std::array<std::array<double, 3>, 2> r{};
};

struct TrafficSolution {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double rho1 = 0.0;
  double rho2 = 0.0;
  bool stable = false;
};

inline constexpr double kParameterTolerance = 1e-12;

inline void check_parameters(const JacksonParameters& p) {
  auto fail = [](const std::string& why) { throw Error(ErrorKind::InvalidParameters, why); };
  for (double v : {p.lambda1, p.lambda2, p.mu1, p.mu2}) {
    if (!(v >= 0.0 && v <= 1.0)) fail("rates must lie in [0,1]");
  }
  if (std::abs(p.lambda1 + p.lambda2 + p.mu1 + p.mu2 - 1.0) > kParameterTolerance) {
    fail("lambda1 + lambda2 + mu1 + mu2 must equal 1");
  }
  for (const auto& row : p.r) {
    for (double v : row) {
      if (!(v >= 0.0 && v <= 1.0)) fail("routing probabilities must lie in [0,1]");
    }
    if (std::abs(row[0] + row[1] + row[2] - 1.0) > kParameterTolerance) {
      fail("each routing row must sum to 1");
    }
  }
}

/// Throughputs from the traffic equations
///   a1 = l1 + a2 r21 + a1 r11,  a2 = l2 + a1 r12 + a2 r22,
/// solved as a 2x2 linear system and checked by substitution.
inline TrafficSolution solve_traffic(const JacksonParameters& p) {
  check_parameters(p);
  const double r11 = p.r[0][1];
  const double r12 = p.r[0][2];
  const double r21 = p.r[1][1];
  const double r22 = p.r[1][2];
  const double det = (1.0 - r11) * (1.0 - r22) - r12 * r21;
  if (!(det > 0.0)) {
    throw Error(ErrorKind::DegenerateRouting, "routing never lets customers leave");
  }
  TrafficSolution t;
  t.alpha1 = (p.lambda1 * (1.0 - r22) + p.lambda2 * r21) / det;
  t.alpha2 = (p.lambda2 * (1.0 - r11) + p.lambda1 * r12) / det;
  const double e1 = t.alpha1 - (p.lambda1 + t.alpha2 * r21 + t.alpha1 * r11);
  const double e2 = t.alpha2 - (p.lambda2 + t.alpha1 * r12 + t.alpha2 * r22);
  const double scale = std::max({1.0, t.alpha1, t.alpha2});
  if (std::abs(e1) > 1e-12 * scale || std::abs(e2) > 1e-12 * scale) {
    throw Error(ErrorKind::DegenerateRouting, "traffic equations are ill-conditioned");
  }
  t.rho1 = p.mu1 > 0.0 ? t.alpha1 / p.mu1 : std::numeric_limits<double>::infinity();
  t.rho2 = p.mu2 > 0.0 ? t.alpha2 / p.mu2 : std::numeric_limits<double>::infinity();
  t.stable = t.rho1 < 1.0 && t.rho2 < 1.0;
  return t;
}

namespace detail {

inline void set_jackson_interior(const JacksonParameters& p, FaceDistribution& f) {
  f.set({1, 0}, p.lambda1);
  f.set({0, 1}, p.lambda2);
  f.set({-1, 0}, p.mu1 * p.r[0][0]);
  f.set({-1, 1}, p.mu1 * p.r[0][2]);
  f.set({0, -1}, p.mu2 * p.r[1][0]);
  f.set({1, -1}, p.mu2 * p.r[1][1]);
  f.set({0, 0}, p.mu1 * p.r[0][1] + p.mu2 * p.r[1][2]);
}

}  // namespace detail

/// Jackson network as a reflecting walk. A service at an empty node is a
/// self-loop, so each boundary face keeps the blocked service mass on its
/// diagonal.
inline ReflectingWalkModel jackson(const JacksonParameters& p) {
  check_parameters(p);
  ReflectingWalkModel m;
  m.label = "jackson";
  detail::set_jackson_interior(p, m.pplus);

  m.p1.set({1, 0}, p.lambda1);
  m.p1.set({0, 1}, p.lambda2);
  m.p1.set({-1, 0}, p.mu1 * p.r[0][0]);
  m.p1.set({-1, 1}, p.mu1 * p.r[0][2]);
  m.p1.set({0, 0}, p.mu1 * p.r[0][1] + p.mu2);

  m.p2.set({1, 0}, p.lambda1);
  m.p2.set({0, 1}, p.lambda2);
  m.p2.set({0, -1}, p.mu2 * p.r[1][0]);
  m.p2.set({1, -1}, p.mu2 * p.r[1][1]);
  m.p2.set({0, 0}, p.mu1 + p.mu2 * p.r[1][2]);

  m.p0.set({1, 0}, p.lambda1);
  m.p0.set({0, 1}, p.lambda2);
  m.p0.set({0, 0}, p.mu1 + p.mu2);
  return m;
}

/// lambda2_1: extra arrivals to node 2 while node 2 is empty and node 1 busy;
/// lambda1_2 symmetric; lambda1_0, lambda2_0: extra arrivals when both are
/// empty.
struct ExtraArrivalParameters {
  JacksonParameters base;
  double lambda2_1 = 0.0;
  double lambda1_2 = 0.0;
  double lambda1_0 = 0.0;
  double lambda2_0 = 0.0;
};

inline ReflectingWalkModel jackson_extra_arrivals(const ExtraArrivalParameters& e) {
  const auto& p = e.base;
  check_parameters(p);
  for (double v : {e.lambda2_1, e.lambda1_2, e.lambda1_0, e.lambda2_0}) {
    if (!(v >= 0.0)) throw Error(ErrorKind::NegativeProbability, "extra arrival rates must be >= 0");
  }
  if (e.lambda2_1 > p.mu2) {
    throw Error(ErrorKind::NegativeProbability, "lambda2_1 exceeds mu2");
  }
  if (e.lambda1_2 > p.mu1) {
    throw Error(ErrorKind::NegativeProbability, "lambda1_2 exceeds mu1");
  }
  if (e.lambda1_0 + e.lambda2_0 > p.mu1 + p.mu2) {
    throw Error(ErrorKind::NegativeProbability, "lambda1_0 + lambda2_0 exceeds mu1 + mu2");
  }
  ReflectingWalkModel m;
  m.label = "jackson-extra-arrivals";
  detail::set_jackson_interior(p, m.pplus);

  m.p1.set({1, 0}, p.lambda1);
  m.p1.set({0, 1}, p.lambda2 + e.lambda2_1);
  m.p1.set({-1, 0}, p.mu1 * p.r[0][0]);
  m.p1.set({-1, 1}, p.mu1 * (p.r[0][2] + p.r[0][1]));
  m.p1.set({0, 0}, p.mu2 - e.lambda2_1);

  m.p2.set({0, 1}, p.lambda2);
  m.p2.set({1, 0}, p.lambda1 + e.lambda1_2);
  m.p2.set({0, -1}, p.mu2 * p.r[1][0]);
  m.p2.set({1, -1}, p.mu2 * (p.r[1][1] + p.r[1][2]));
  m.p2.set({0, 0}, p.mu1 - e.lambda1_2);

  m.p0.set({1, 0}, p.lambda1 + e.lambda1_0);
  m.p0.set({0, 1}, p.lambda2 + e.lambda2_0);
  m.p0.set({0, 0}, p.mu1 + p.mu2 - e.lambda1_0 - e.lambda2_0);
  return m;
}

/// Extra arrivals that make the network structure-reversible for equal
/// exogenous rates lambda and routing with r12/r10 = r21/r20 (then the
/// decay rates are the loads): lambda1_2 = (r22/r21) lambda,
/// lambda2_1 = (r11/r12) lambda, and lambda2_0 chosen so that
/// (lambda + lambda1_0)/(lambda + lambda2_0) = (lambda + lambda1_2)/(lambda + lambda2_1).
inline ExtraArrivalParameters reversible_extra_arrivals(const JacksonParameters& base,
                                                        double lambda1_0) {
  if (std::abs(base.lambda1 - base.lambda2) > kParameterTolerance) {
    throw Error(ErrorKind::InvalidParameters, "needs lambda1 = lambda2");
  }
  if (!(base.r[0][2] > 0.0) || !(base.r[1][1] > 0.0)) {
    throw Error(ErrorKind::InvalidParameters, "needs r12 > 0 and r21 > 0");
  }
  if (std::abs(base.r[0][2] * base.r[1][0] - base.r[1][1] * base.r[0][0]) > kParameterTolerance) {
    throw Error(ErrorKind::InvalidParameters, "needs r12/r10 = r21/r20");
  }
  const double lambda = base.lambda1;
  ExtraArrivalParameters e;
  e.base = base;
  e.lambda1_2 = base.r[1][2] / base.r[1][1] * lambda;
  e.lambda2_1 = base.r[0][1] / base.r[0][2] * lambda;
  e.lambda1_0 = lambda1_0;
  e.lambda2_0 = (lambda + lambda1_0) * (lambda + e.lambda2_1) / (lambda + e.lambda1_2) - lambda;
  return e;
}

/// Exact rational base rates of the extra-arrivals instance; their 4-digit
/// roundings are lambda = 0.0667, mu = (0.4, 0.4667), r1 = (0.368, 0.3158,
/// 0.3158), r2 = (0.3784, 0.3243, 0.2973).
inline JacksonParameters instance_5_10_base() {
  JacksonParameters p;
  p.lambda1 = p.lambda2 = 1.0 / 15.0;
  p.mu1 = 6.0 / 15.0;
  p.mu2 = 7.0 / 15.0;
  p.r[0] = {7.0 / 19.0, 6.0 / 19.0, 6.0 / 19.0};
  p.r[1] = {14.0 / 37.0, 12.0 / 37.0, 11.0 / 37.0};
  return p;
}

inline constexpr double kInstance510Lambda10 = 0.21043;

inline ReflectingWalkModel appendix_d_model() {
  ReflectingWalkModel m;
  m.label = "appendixD-product-nonreversible";
  m.p0 = FaceDistribution(Face::Origin, {{{1, 0}, 0.49716}, {{0, 1}, 0.188503}, {{1, 1}, 0.230255}});
  m.p1 = FaceDistribution(Face::Horizontal, {{{1, 0}, 0.126693},
                                             {{0, 1}, 0.216346},
                                             {{1, 1}, 0.15534},
                                             {{-1, 0}, 0.1205},
                                             {{-1, 1}, 0.297039}});
  m.p2 = FaceDistribution(Face::Vertical, {{{1, 0}, 0.267565},
                                           {{0, 1}, 0.0246397},
                                           {{1, 1}, 0.025552},
                                           {{0, -1}, 0.223309},
                                           {{1, -1}, 0.0957827}});
  m.pplus = FaceDistribution(Face::Interior, {{{1, 0}, 0.0449179},
                                              {{0, 1}, 0.00497654},
                                              {{1, 1}, 0.012212},
                                              {{-1, 0}, 0.398019},
                                              {{-1, 1}, 0.0045338},
                                              {{0, -1}, 0.0380278},
                                              {{1, -1}, 0.0278023}});
  // Entries are rounded to six digits; the self-loops take the slack so
  // every face sums to one.
  for (Face f : kFaces) m.face(f).absorb_slack_into_diagonal();
  return m;
}

inline ReflectingWalkModel singular_demo_model() {
  ReflectingWalkModel m;
  m.label = "singular-A-demo";
  m.pplus = FaceDistribution(Face::Interior, {{{1, 0}, 0.2}, {{-1, 0}, 0.5}, {{0, 0}, 0.3}});
  m.p1 = FaceDistribution(Face::Horizontal, {{{1, 0}, 0.2}, {{-1, 0}, 0.4}, {{0, 0}, 0.4}});
  m.p2 = FaceDistribution(Face::Vertical,
                          {{{0, 1}, 0.1}, {{0, -1}, 0.3}, {{1, 0}, 0.2}, {{0, 0}, 0.4}});
  m.p0 = FaceDistribution(Face::Origin, {{{1, 0}, 0.3}, {{0, 1}, 0.3}, {{0, 0}, 0.4}});
  return m;
}

inline const std::vector<std::string>& reference_instance_names() {
  static const std::vector<std::string> names = {
      "jackson-extra-5.10", "appendixD-product-nonreversible", "singular-A-demo"};
  return names;
}

inline ReflectingWalkModel reference_instance(std::string_view name) {
  if (name == "jackson-extra-5.10") {
    auto m = jackson_extra_arrivals(reversible_extra_arrivals(instance_5_10_base(),
                                                              kInstance510Lambda10));
    m.label = "jackson-extra-5.10";
    return m;
  }
  if (name == "appendixD-product-nonreversible") return appendix_d_model();
  if (name == "singular-A-demo") return singular_demo_model();
  throw Error(ErrorKind::UnknownInstance, "unknown instance \"" + std::string(name) + "\"");
}

/// Reference instances plus the plain Jackson network on the same base rates.
inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"jackson-extra-5.10",
                                                 "appendixD-product-nonreversible",
                                                 "singular-A-demo", "jackson-standard"};
  return names;
}

inline ReflectingWalkModel preset(std::string_view name) {
  if (name == "jackson-standard") {
    auto m = jackson(instance_5_10_base());
    m.label = "jackson-standard";
    return m;
  }
  return reference_instance(name);
}

/// Source note shipped with each preset document.
inline std::string preset_note(std::string_view name) {
  if (name == "jackson-extra-5.10") {
    return "Jackson network with extra arrivals at empty nodes, exact rational form: "
           "lambda = 1/15, mu = (6/15, 7/15), r1 = (7,6,6)/19, r2 = (14,12,11)/37, "
           "lambda2_1 = (r11/r12) lambda, lambda1_2 = (r22/r21) lambda, lambda1_0 = 0.21043, "
           "lambda2_0 from the ratio condition. Rounds to r20 = 0.3784 and mu2 = 0.4667.";
  }
  if (name == "appendixD-product-nonreversible") {
    return "Product-form but not structure-reversible walk. Off-diagonal entries are given "
           "to six digits; each self-loop is 1 minus the off-diagonal mass.";
  }
  if (name == "singular-A-demo") {
    return "Singular walk with horizontal-only interior steps; eta = (0.4, 1/3), alpha1 = 0.5.";
  }
  if (name == "jackson-standard") {
    return "Plain Jackson network on the base rates of jackson-extra-5.10.";
  }
  throw Error(ErrorKind::UnknownInstance, "unknown instance \"" + std::string(name) + "\"");
}

}  // namespace srw
