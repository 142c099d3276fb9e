#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/geometry.hpp"
#include "srwalk/model.hpp"
#include "srwalk/reversal.hpp"
#include "srwalk/reversibility.hpp"
#include "srwalk/stationary.hpp"

namespace srw {

enum class Verdict { StructureReversible, Singular, NotStructureReversible, Invalid };

constexpr std::string_view verdict_name(Verdict v) noexcept {
  switch (v) {
    case Verdict::StructureReversible: return "StructureReversible";
    case Verdict::Singular: return "Singular";
    case Verdict::NotStructureReversible: return "NotStructureReversible";
    case Verdict::Invalid: return "Invalid";
  }
  return "?";
}

struct AnalysisOptions {
  /// Relative tolerance for ratio comparisons; also loosens the gamma
  /// cross-check and balance checks for rounded input data.
  double tol = kDefaultRatioTolerance;
  SolverOptions solver;
};

struct AnalysisReport {
  ValidationReport validation;
  std::optional<ConditionReport> conditions;
  std::optional<GeometricSolution> solution;
  std::vector<RootCandidate> rejected_roots;
  std::optional<SingularSolution> singular;
  std::optional<StationaryDistribution> stationary;
  std::optional<BalanceReport> balance;
  std::optional<bool> product_form;
  std::optional<ReversedModel> reversed;
  std::optional<std::string> reversed_model_path;
  std::optional<double> oracle_tv;
  Verdict verdict = Verdict::Invalid;
  std::string reason;
};

inline double balance_tolerance(const AnalysisOptions& opt) { return std::max(1e-9, opt.tol); }

namespace detail {

inline void finish_with_distribution(const ReflectingWalkModel& m, const AnalysisOptions& opt,
                                     AnalysisReport& r, Verdict success) {
  r.balance = verify_stationary_equations(m, *r.stationary, balance_tolerance(opt));
  if (!r.balance->ok) {
    r.verdict = Verdict::NotStructureReversible;
    r.reason = "closed form violates the balance equations by " +
               format_number(r.balance->max_residual);
    return;
  }
  try {
    r.reversed = build_reversed_model(m, *r.stationary, balance_tolerance(opt));
  } catch (const Error& e) {
    r.verdict = Verdict::NotStructureReversible;
    r.reason = e.what();
    return;
  }
  r.verdict = success;
}

}  // namespace detail

/// Full pipeline: validation, irreducibility, conditions (a1)-(a3), the
/// geometric solve, the closed form and its balance check, and the reversed
/// walk. Walks whose interior moves along one axis take the singular route.
inline AnalysisReport analyze(const ReflectingWalkModel& m, const AnalysisOptions& opt = {}) {
  AnalysisReport r;
  r.validation = validate(m);
  if (!r.validation.ok) {
    r.verdict = Verdict::Invalid;
    r.reason = r.validation.violations.front().description;
    return r;
  }
  r.conditions = check_conditions(m, opt.tol);
  // A reducible chain breaks the model's standing assumption.
  if (r.validation.chain_irreducible == TriState::No) {
    r.verdict = Verdict::Invalid;
    r.reason = "the reflecting walk is not irreducible";
    return r;
  }

  if (!r.validation.free_walk_irreducible) {
    try {
      r.singular = analyze_singular(m);
    } catch (const Error& e) {
      r.verdict = Verdict::NotStructureReversible;
      r.reason = e.kind() == ErrorKind::NotApplicable
                     ? std::string("free walk is not irreducible and the walk is not singular")
                     : std::string(e.what());
      return r;
    }
    r.stationary = singular_stationary(*r.singular);
    detail::finish_with_distribution(m, opt, r, Verdict::Singular);
    return r;
  }

  if (!r.conditions->passed()) {
    r.verdict = Verdict::NotStructureReversible;
    for (const auto* c : {&r.conditions->a1, &r.conditions->a2, &r.conditions->a3}) {
      if (c->status != Status::Pass) {
        r.reason = c->detail;
        break;
      }
    }
    return r;
  }
  const auto& constants = *r.conditions->constants;
  SolverOptions solver = opt.solver;
  solver.cross_check_tol = std::max(solver.cross_check_tol, opt.tol);
  try {
    r.solution = solve_eta(m, constants, solver);
  } catch (const EtaSolveError& e) {
    r.verdict = Verdict::NotStructureReversible;
    r.reason = e.what();
    r.rejected_roots = e.candidates();
    return r;
  }
  r.stationary = build_stationary(constants, *r.solution);
  r.product_form = product_form_test(constants, opt.tol);
  detail::finish_with_distribution(m, opt, r, Verdict::StructureReversible);
  return r;
}

/// Exit status of the CLI as a function of the verdict alone.
constexpr int verdict_exit_code(Verdict v) noexcept {
  switch (v) {
    case Verdict::StructureReversible:
    case Verdict::Singular: return 0;
    case Verdict::NotStructureReversible: return 1;
    case Verdict::Invalid: return 2;
  }
  return 2;
}

}  // namespace srw
