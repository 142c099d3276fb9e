#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/model.hpp"
#include "srwalk/reversibility.hpp"
#include "srwalk/stationary.hpp"

namespace srw {

/// Kernel of the time-reversed chain at state n:
/// step d has probability pi(n + d) P(n + d -> n) / pi(n).
inline FaceDistribution reversed_kernel_at(const ReflectingWalkModel& m,
                                           const StationaryDistribution& d, long n1, long n2) {
  const long double here = pi_at_extended(d, n1, n2);
  if (!(here > 0.0L)) {
    throw Error(ErrorKind::ZeroMass, "pi(" + std::to_string(n1) + "," + std::to_string(n2) +
                                         ") is zero");
  }
  FaceDistribution k(face_of(n1, n2));
  for (Step s : kSteps) {
    const long a = n1 + s.i;
    const long b = n2 + s.j;
    if (a < 0 || b < 0) continue;
    const double p = m.face(face_of(a, b)).at(negate(s));
    if (p == 0.0) continue;
    k.set(s, static_cast<double>(pi_at_extended(d, a, b) * p / here));
  }
  return k;
}

struct ReversedModel {
  ReflectingWalkModel model;
  double homogeneity_residual = 0.0;
  double row_sum_error = 0.0;
  /// The reversed walk coincides with the forward one (detailed balance).
  bool strictly_reversible = false;
};

/// States sampled per face. The first one defines the reversed face law; the
/// others must agree with it. Because pi is geometric on each face, agreement
/// at states whose neighbours cover every face adjacency (the bulk, the rows
/// next to each axis, and the states next to the origin) implies agreement at
/// every state of that face.
inline std::vector<std::pair<long, long>> homogeneity_states(Face f) {
  switch (f) {
    case Face::Interior: return {{3, 3}, {4, 5}, {3, 1}, {5, 1}, {1, 3}, {1, 5}, {1, 1}};
    case Face::Horizontal: return {{3, 0}, {5, 0}, {1, 0}, {2, 0}};
    case Face::Vertical: return {{0, 3}, {0, 5}, {0, 1}, {0, 2}};
    case Face::Origin: return {{0, 0}};
  }
  return {};
}

inline ReversedModel build_reversed_model(const ReflectingWalkModel& m,
                                          const StationaryDistribution& d, double tol = 1e-9) {
  ReversedModel out;
  out.model.label = m.label.empty() ? std::string("reversed") : m.label + " (reversed)";
  for (Face f : kFaces) {
    const auto states = homogeneity_states(f);
    const auto ref = reversed_kernel_at(m, d, states.front().first, states.front().second);
    for (std::size_t k = 1; k < states.size(); ++k) {
      const auto other = reversed_kernel_at(m, d, states[k].first, states[k].second);
      for (Step s : kSteps) {
        out.homogeneity_residual =
            std::max(out.homogeneity_residual, std::abs(other.at(s) - ref.at(s)));
      }
    }
    out.model.face(f) = ref;
  }
  if (out.homogeneity_residual > tol) {
    throw Error(ErrorKind::NotHomogeneous,
                "reversed kernel differs across a face by " +
                    detail::format_number(out.homogeneity_residual));
  }
  for (Face f : kFaces) {
    out.row_sum_error = std::max(out.row_sum_error, std::abs(out.model.face(f).sum() - 1.0));
  }
  if (out.row_sum_error > std::max(tol, 1e-10)) {
    throw Error(ErrorKind::NotStationary, "reversed rows sum to 1 only within " +
                                              detail::format_number(out.row_sum_error));
  }
  double diff = 0.0;
  for (Face f : kFaces) {
    for (Step s : kSteps) diff = std::max(diff, std::abs(out.model.face(f).at(s) - m.face(f).at(s)));
  }
  out.strictly_reversible = diff <= tol;
  return out;
}

/// Entries rounded to 15 significant digits; the rounding slack of each face
/// goes to its largest entry so every face sums to one again.
inline ReflectingWalkModel rounded_for_output(const ReflectingWalkModel& m) {
  ReflectingWalkModel out = m;
  for (Face f : kFaces) {
    auto& face = out.face(f);
    Step largest{0, 0};
    for (Step s : kSteps) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.14e", face.at(s));
      face.set(s, std::strtod(buf, nullptr));
      if (face.at(s) > face.at(largest)) largest = s;
    }
    double rest = 0.0;
    for (Step s : kSteps) {
      if (!(s == largest)) rest += face.at(s);
    }
    face.set(largest, 1.0 - rest);
  }
  return out;
}

/// Closed-form solution of the singular walk whose interior moves along one
/// axis only. For the vertical-only pattern the fields describe the
/// transposed model.
struct SingularSolution {
  bool transposed = false;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double alpha1 = 0.0;
  double c2plus = 0.0;
  double c10 = 0.0;
  double c20 = 0.0;
  bool required_zeros_ok = false;
};

namespace detail {

inline bool horizontal_singular_pattern(const ReflectingWalkModel& m) {
  for (int i = -1; i <= 1; ++i) {
    if (m.pplus(i, 1) != 0.0 || m.pplus(i, -1) != 0.0) return false;
    if (!(m.pplus(i, 0) > 0.0)) return false;
  }
  return true;
}

inline SingularSolution analyze_horizontal_singular(const ReflectingWalkModel& m) {
  SingularSolution s;
  s.required_zeros_ok = m.p1(-1, 1) == 0.0 && m.p1(0, 1) == 0.0 && m.p1(1, 1) == 0.0 &&
                        m.p2(1, 1) == 0.0 && m.p2(1, -1) == 0.0 && m.p0(1, 1) == 0.0;
  if (!s.required_zeros_ok) {
    throw Error(ErrorKind::NotStructureReversible,
                "singular walk needs p1(i,1) = 0, p2(1,+-1) = 0 and p0(1,1) = 0");
  }
  auto ratio = [](double a, double b) { return b > 0.0 ? a / b : 0.0; };
  s.eta1 = ratio(m.pplus(1, 0), m.pplus(-1, 0));
  s.eta2 = ratio(m.p2(0, 1), m.p2(0, -1));
  s.alpha1 = ratio(m.p1(1, 0), m.p1(-1, 0));
  s.c2plus = ratio(m.p2(1, 0), m.pplus(1, 0));
  s.c10 = ratio(m.p0(1, 0), m.p1(1, 0));
  s.c20 = ratio(m.p0(0, 1), m.p2(0, 1));
  for (double rate : {s.eta1, s.eta2, s.alpha1}) {
    if (!(rate > 0.0 && rate < 1.0)) {
      throw Error(ErrorKind::NotStructureReversible, "singular decay rate " +
                                                         format_number(rate) + " is not in (0,1)");
    }
  }
  for (double c : {s.c2plus, s.c10, s.c20}) {
    if (!(c > 0.0)) {
      throw Error(ErrorKind::NotStructureReversible, "singular constant is not positive");
    }
  }
  return s;
}

}  // namespace detail

inline SingularSolution analyze_singular(const ReflectingWalkModel& m) {
  if (detail::horizontal_singular_pattern(m)) return detail::analyze_horizontal_singular(m);
  const auto t = transpose(m);
  if (detail::horizontal_singular_pattern(t)) {
    auto s = detail::analyze_horizontal_singular(t);
    s.transposed = true;
    return s;
  }
  throw Error(ErrorKind::NotApplicable, "interior law does not move along a single axis");
}

/// Stationary distribution of a singular walk, in the original coordinates.
inline StationaryDistribution singular_stationary(const SingularSolution& s) {
  StationaryDistribution d;
  d.eta1 = s.eta1;
  d.eta2 = s.eta2;
  d.axis_rate1 = s.alpha1;
  d.axis_rate2 = s.eta2;
  d.k_h = s.c10;
  d.k_v = s.c20;
  d.k_int = s.c20 * s.c2plus;
  if (s.transposed) {
    std::swap(d.eta1, d.eta2);
    std::swap(d.axis_rate1, d.axis_rate2);
    std::swap(d.k_h, d.k_v);
  }
  normalize(d);
  return d;
}

}  // namespace srw
