#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/model.hpp"

namespace srw {

inline constexpr double kDefaultRatioTolerance = 1e-9;

enum class Status { Pass, Fail, NotApplicable };

constexpr std::string_view status_name(Status s) noexcept {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::NotApplicable: return "not-applicable";
  }
  return "?";
}

enum class ConstantFailure { None, RatioMismatch, SupportMismatch, AllZeroRow, NotIrreducible };

constexpr std::string_view failure_name(ConstantFailure f) noexcept {
  switch (f) {
    case ConstantFailure::None: return "None";
    case ConstantFailure::RatioMismatch: return "RatioMismatch";
    case ConstantFailure::SupportMismatch: return "SupportMismatch";
    case ConstantFailure::AllZeroRow: return "AllZeroRow";
    case ConstantFailure::NotIrreducible: return "NotIrreducible";
  }
  return "?";
}

/// One numerator/denominator pair entering a proportionality constant.
struct RatioWitness {
  Step step;
  double numerator = 0.0;
  double denominator = 0.0;

  double ratio() const noexcept {
    return denominator > 0.0 ? numerator / denominator : 0.0;
  }
};

/// A ratio constant together with the evidence used to obtain it.
struct ConstantEstimate {
  std::string name;
  double value = 0.0;
  ConstantFailure failure = ConstantFailure::None;
  std::vector<RatioWitness> witnesses;
  std::string detail;

  bool ok() const noexcept { return failure == ConstantFailure::None; }
};

namespace detail {

// Common ratio num/den over the supplied pairs. The reference is the pair
// with the largest denominator so tiny denominators cannot dominate.
inline ConstantEstimate common_ratio(std::string name, const std::vector<RatioWitness>& pairs,
                                     double tol) {
  ConstantEstimate est;
  est.name = std::move(name);
  est.witnesses = pairs;
  const RatioWitness* ref = nullptr;
  for (const auto& w : pairs) {
    if ((w.numerator > 0.0) != (w.denominator > 0.0)) {
      est.failure = ConstantFailure::SupportMismatch;
      est.detail = est.name + ": step " + step_key(w.step) + " has numerator " +
                   format_number(w.numerator) + " but denominator " +
                   format_number(w.denominator);
      return est;
    }
    if (w.denominator > 0.0 && (ref == nullptr || w.denominator > ref->denominator)) ref = &w;
  }
  if (ref == nullptr) {
    est.failure = ConstantFailure::AllZeroRow;
    est.detail = est.name + ": every entry of the row is zero";
    return est;
  }
  est.value = ref->ratio();
  for (const auto& w : pairs) {
    if (w.denominator <= 0.0) continue;
    const double r = w.ratio();
    if (std::abs(r - est.value) > tol * std::max(std::abs(r), std::abs(est.value))) {
      if (est.failure == ConstantFailure::None) {
        est.failure = ConstantFailure::RatioMismatch;
        est.detail = est.name + ": ratio at step " + step_key(w.step) + " is " +
                     format_number(r) + ", expected " + format_number(est.value) +
                     " (from step " + step_key(ref->step) + ")";
      }
    }
  }
  return est;
}

}  // namespace detail

struct InteriorConstants {
  ConstantEstimate c1plus;
  ConstantEstimate c2plus;

  bool ok() const noexcept { return c1plus.ok() && c2plus.ok(); }
};

/// c1+ = p1(i,1)/p+(i,1) and c2+ = p2(1,i)/p+(1,i), i in {-1,0,1}.
inline InteriorConstants face_interior_constants(const ReflectingWalkModel& m,
                                                 double tol = kDefaultRatioTolerance) {
  std::vector<RatioWitness> h;
  std::vector<RatioWitness> v;
  for (int i = -1; i <= 1; ++i) {
    h.push_back({{i, 1}, m.p1(i, 1), m.pplus(i, 1)});
    v.push_back({{1, i}, m.p2(1, i), m.pplus(1, i)});
  }
  return {detail::common_ratio("c1plus", h, tol), detail::common_ratio("c2plus", v, tol)};
}

struct OriginConstants {
  ConstantEstimate c10;
  ConstantEstimate c20;
  ConstantFailure failure = ConstantFailure::None;
  std::string detail;

  bool ok() const noexcept { return failure == ConstantFailure::None; }
};

/// c10 = p0(1,j)/p1(1,j) and c20 = p0(j,1)/p2(j,1), j in {0,1}. A row that
/// is zero in both faces gives the constant 0; both constants zero means the
/// chain cannot leave the origin's row and column consistently.
inline OriginConstants boundary_origin_constants(const ReflectingWalkModel& m,
                                                 double tol = kDefaultRatioTolerance) {
  std::vector<RatioWitness> h;
  std::vector<RatioWitness> v;
  for (int j = 0; j <= 1; ++j) {
    h.push_back({{1, j}, m.p0(1, j), m.p1(1, j)});
    v.push_back({{j, 1}, m.p0(j, 1), m.p2(j, 1)});
  }
  OriginConstants out{detail::common_ratio("c10", h, tol), detail::common_ratio("c20", v, tol)};
  for (auto* c : {&out.c10, &out.c20}) {
    if (c->failure == ConstantFailure::AllZeroRow) {
      c->failure = ConstantFailure::None;
      c->value = 0.0;
      c->detail.clear();
    }
  }
  if (!out.c10.ok()) {
    out.failure = out.c10.failure;
    out.detail = out.c10.detail;
  } else if (!out.c20.ok()) {
    out.failure = out.c20.failure;
    out.detail = out.c20.detail;
  } else if (out.c10.value == 0.0 && out.c20.value == 0.0) {
    out.failure = ConstantFailure::NotIrreducible;
    out.detail = "c10 = c20 = 0: the origin never moves right or up";
  }
  return out;
}

struct ReversibilityConstants {
  double c1plus = 0.0;
  double c2plus = 0.0;
  double c10 = 0.0;
  double c20 = 0.0;
  double c0 = 0.0;
  double tolerance_used = kDefaultRatioTolerance;

  double product1() const noexcept { return c10 * c1plus; }
  double product2() const noexcept { return c20 * c2plus; }
};

inline ReversibilityConstants make_constants(double c1plus, double c2plus, double c10, double c20,
                                             double tol = kDefaultRatioTolerance) {
  ReversibilityConstants c{c1plus, c2plus, c10, c20, 0.0, tol};
  c.c0 = std::max(c.product1(), c.product2());
  return c;
}

inline ReversibilityConstants transpose(const ReversibilityConstants& c) {
  return make_constants(c.c2plus, c.c1plus, c.c20, c.c10, c.tolerance_used);
}

inline Status check_a3(const ReversibilityConstants& c, double tol = kDefaultRatioTolerance) {
  if (c.c10 == 0.0 || c.c20 == 0.0) return Status::Pass;
  const double a = c.product1();
  const double b = c.product2();
  return std::abs(a - b) <= tol * std::max(a, b) ? Status::Pass : Status::Fail;
}

struct ConditionResult {
  Status status = Status::NotApplicable;
  std::string detail;
  std::vector<ConstantEstimate> constants;
  std::map<std::string, double> values;
};

struct FlexibleBoundaryResult {
  ConditionResult b1;
  ConditionResult b2;
};

namespace detail {

inline bool cross_ratio_equal(double a, double b, double c, double d, double tol) {
  // a/b == c/d without dividing.
  const double lhs = a * d;
  const double rhs = c * b;
  return std::abs(lhs - rhs) <= tol * std::max(std::abs(lhs), std::abs(rhs));
}

}  // namespace detail

/// Simplified boundary conditions for the Jackson-type template: no (1,1)
/// jumps on any face and no (-1,-1) jump in the interior.
inline FlexibleBoundaryResult check_flexible_boundary(const ReflectingWalkModel& m,
                                                      double tol = kDefaultRatioTolerance) {
  FlexibleBoundaryResult out;
  bool matches = m.pplus(-1, -1) == 0.0;
  for (Face f : kFaces) matches = matches && m.face(f)(1, 1) == 0.0;
  matches = matches && m.pplus(-1, 1) > 0.0 && m.pplus(1, -1) > 0.0;
  if (!matches) {
    out.b1.detail = "model does not follow the Jackson-type template";
    out.b2.detail = out.b1.detail;
    return out;
  }

  // lambda2/(mu1 r12) and lambda1/(mu2 r21) are read off the interior law.
  const bool h = m.p1(-1, 1) > 0.0 &&
                 detail::cross_ratio_equal(m.p1(0, 1), m.p1(-1, 1), m.pplus(0, 1), m.pplus(-1, 1), tol);
  const bool v = m.p2(1, -1) > 0.0 &&
                 detail::cross_ratio_equal(m.p2(1, 0), m.p2(1, -1), m.pplus(1, 0), m.pplus(1, -1), tol);
  out.b1.status = h && v ? Status::Pass : Status::Fail;
  out.b1.values = {{"face1_ratio", m.p1(-1, 1) > 0.0 ? m.p1(0, 1) / m.p1(-1, 1) : 0.0},
                   {"face2_ratio", m.p2(1, -1) > 0.0 ? m.p2(1, 0) / m.p2(1, -1) : 0.0},
                   {"lambda2_over_mu1r12", m.pplus(0, 1) / m.pplus(-1, 1)},
                   {"lambda1_over_mu2r21", m.pplus(1, 0) / m.pplus(1, -1)}};
  if (!h) out.b1.detail = "p1(0,1)/p1(-1,1) differs from p+(0,1)/p+(-1,1)";
  if (!v) out.b1.detail += std::string(out.b1.detail.empty() ? "" : "; ") +
                           "p2(1,0)/p2(1,-1) differs from p+(1,0)/p+(1,-1)";

  const bool zh = (m.p1(1, 0) == 0.0) == (m.p0(1, 0) == 0.0);
  const bool zv = (m.p2(0, 1) == 0.0) == (m.p0(0, 1) == 0.0);
  out.b2.status = zh && zv ? Status::Pass : Status::Fail;
  if (!zh) out.b2.detail = "exactly one of p1(1,0), p0(1,0) is zero";
  if (!zv) out.b2.detail += std::string(out.b2.detail.empty() ? "" : "; ") +
                            "exactly one of p2(0,1), p0(0,1) is zero";
  return out;
}

struct ConditionReport {
  ConditionResult a1;
  ConditionResult a2;
  ConditionResult a3;
  ConditionResult b1;
  ConditionResult b2;
  std::optional<ReversibilityConstants> constants;
  bool singular_row = false;

  bool passed() const noexcept {
    return a1.status == Status::Pass && a2.status == Status::Pass && a3.status == Status::Pass;
  }
};

inline ConditionReport check_conditions(const ReflectingWalkModel& m,
                                        double tol = kDefaultRatioTolerance) {
  ConditionReport r;
  const auto interior = face_interior_constants(m, tol);
  r.a1.constants = {interior.c1plus, interior.c2plus};
  r.a1.status = interior.ok() ? Status::Pass : Status::Fail;
  if (!interior.c1plus.ok()) r.a1.detail = interior.c1plus.detail;
  if (!interior.c2plus.ok()) {
    r.a1.detail += std::string(r.a1.detail.empty() ? "" : "; ") + interior.c2plus.detail;
  }
  r.singular_row = interior.c1plus.failure == ConstantFailure::AllZeroRow ||
                   interior.c2plus.failure == ConstantFailure::AllZeroRow;
  if (interior.ok()) {
    r.a1.values = {{"c1plus", interior.c1plus.value}, {"c2plus", interior.c2plus.value}};
  }

  const auto origin = boundary_origin_constants(m, tol);
  r.a2.constants = {origin.c10, origin.c20};
  r.a2.status = origin.ok() ? Status::Pass : Status::Fail;
  r.a2.detail = origin.detail;
  if (origin.ok()) r.a2.values = {{"c10", origin.c10.value}, {"c20", origin.c20.value}};

  if (interior.ok() && origin.ok()) {
    const auto c = make_constants(interior.c1plus.value, interior.c2plus.value, origin.c10.value,
                                  origin.c20.value, tol);
    r.a3.status = check_a3(c, tol);
    r.a3.values = {{"c10_c1plus", c.product1()}, {"c20_c2plus", c.product2()}};
    if (r.a3.status == Status::Fail) {
      r.a3.detail = "c10*c1plus = " + detail::format_number(c.product1()) +
                    " but c20*c2plus = " + detail::format_number(c.product2());
    }
    if (r.a3.status == Status::Pass) r.constants = c;
  } else {
    r.a3.detail = "constants unavailable";
  }

  auto flex = check_flexible_boundary(m, tol);
  r.b1 = std::move(flex.b1);
  r.b2 = std::move(flex.b2);
  return r;
}

/// Throws NotStructureReversible when (a1)-(a3) do not all hold.
inline ReversibilityConstants compute_constants(const ReflectingWalkModel& m,
                                                double tol = kDefaultRatioTolerance) {
  auto report = check_conditions(m, tol);
  if (!report.constants) {
    std::string why = report.a1.status == Status::Fail   ? report.a1.detail
                      : report.a2.status == Status::Fail ? report.a2.detail
                                                         : report.a3.detail;
    throw Error(ErrorKind::NotStructureReversible, why);
  }
  return *report.constants;
}

}  // namespace srw
