#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <utility>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/geometry.hpp"
#include "srwalk/model.hpp"
#include "srwalk/reversibility.hpp"

namespace srw {

/// Closed-form stationary distribution:
///   pi(0,0)   = pi00
///   pi(n,0)   = k_h   * a1^n * pi00
///   pi(0,n)   = k_v   * a2^n * pi00
///   pi(n1,n2) = k_int * eta1^n1 * eta2^n2 * pi00
/// The axis rates a1, a2 equal eta1, eta2 except in the singular case.
struct StationaryDistribution {
  double pi00 = 0.0;
  double eta1 = 0.0;
  double eta2 = 0.0;
  double axis_rate1 = 0.0;
  double axis_rate2 = 0.0;
  double k_h = 0.0;
  double k_v = 0.0;
  double k_int = 0.0;
};

inline long double pi_at_extended(const StationaryDistribution& d, long n1, long n2) {
  if (n1 < 0 || n2 < 0) return 0.0L;
  const long double p = d.pi00;
  if (n1 == 0 && n2 == 0) return p;
  if (n2 == 0) return d.k_h * std::pow(static_cast<long double>(d.axis_rate1), n1) * p;
  if (n1 == 0) return d.k_v * std::pow(static_cast<long double>(d.axis_rate2), n2) * p;
  return d.k_int * std::pow(static_cast<long double>(d.eta1), n1) *
         std::pow(static_cast<long double>(d.eta2), n2) * p;
}

inline double pi_at(const StationaryDistribution& d, long n1, long n2) {
  return static_cast<double>(pi_at_extended(d, n1, n2));
}

/// Sets pi00 from the four geometric sums.
inline void normalize(StationaryDistribution& d) {
  const long double a1 = d.axis_rate1;
  const long double a2 = d.axis_rate2;
  const long double e1 = d.eta1;
  const long double e2 = d.eta2;
  const long double mass = 1.0L + d.k_h * a1 / (1.0L - a1) + d.k_v * a2 / (1.0L - a2) +
                           d.k_int * e1 * e2 / ((1.0L - e1) * (1.0L - e2));
  d.pi00 = static_cast<double>(1.0L / mass);
}

/// Mass of the closed form, summed in closed form.
inline double total_mass(const StationaryDistribution& d) {
  const long double a1 = d.axis_rate1;
  const long double a2 = d.axis_rate2;
  const long double e1 = d.eta1;
  const long double e2 = d.eta2;
  const long double mass = 1.0L + d.k_h * a1 / (1.0L - a1) + d.k_v * a2 / (1.0L - a2) +
                           d.k_int * e1 * e2 / ((1.0L - e1) * (1.0L - e2));
  return static_cast<double>(mass * d.pi00);
}

inline StationaryDistribution build_stationary(const ReversibilityConstants& c, double eta1,
                                               double eta2) {
  if (!(eta1 > 0.0 && eta1 < 1.0 && eta2 > 0.0 && eta2 < 1.0)) {
    throw Error(ErrorKind::InvalidArgument, "decay rates must lie in (0,1)");
  }
  StationaryDistribution d;
  d.eta1 = d.axis_rate1 = eta1;
  d.eta2 = d.axis_rate2 = eta2;
  if (c.c10 > 0.0) {
    d.k_h = c.c10;
    d.k_v = c.c10 * c.c1plus / c.c2plus;
  } else if (c.c20 > 0.0) {
    d.k_h = c.c20 * c.c2plus / c.c1plus;
    d.k_v = c.c20;
  } else {
    throw Error(ErrorKind::BothConstantsZero, "c10 = c20 = 0");
  }
  d.k_int = c.c0;
  normalize(d);
  return d;
}

inline StationaryDistribution build_stationary(const ReversibilityConstants& c,
                                               const GeometricSolution& sol) {
  return build_stationary(c, sol.eta1, sol.eta2);
}

struct StateResidual {
  long n1 = 0;
  long n2 = 0;
  double residual = 0.0;
};

struct BalanceReport {
  double max_residual = 0.0;
  long worst_n1 = 0;
  long worst_n2 = 0;
  std::vector<StateResidual> states;
  bool ok = false;
};

/// The four corner cases, the axis rows and boundary-adjacent rows for
/// n = 2..5, and the interior block {2..5}^2.
inline std::vector<std::pair<long, long>> balance_states() {
  std::vector<std::pair<long, long>> s = {{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  for (long n = 2; n <= 5; ++n) {
    s.insert(s.end(), {{n, 0}, {0, n}, {n, 1}, {1, n}});
  }
  for (long a = 2; a <= 5; ++a) {
    for (long b = 2; b <= 5; ++b) s.emplace_back(a, b);
  }
  return s;
}

/// Global balance residual sum_{n'} pi(n') P(n' -> n) - pi(n).
template <class Pi>
long double balance_residual(const ReflectingWalkModel& m, Pi&& pi, long n1, long n2) {
  long double inflow = 0.0L;
  for (Step s : kSteps) {
    const long a = n1 - s.i;
    const long b = n2 - s.j;
    if (a < 0 || b < 0) continue;
    const double p = m.face(face_of(a, b)).at(s);
    if (p != 0.0) inflow += static_cast<long double>(pi(a, b)) * p;
  }
  return inflow - static_cast<long double>(pi(n1, n2));
}

inline BalanceReport verify_stationary_equations(const ReflectingWalkModel& m,
                                                 const StationaryDistribution& d,
                                                 double tol = 1e-10) {
  BalanceReport r;
  auto pi = [&](long a, long b) { return pi_at_extended(d, a, b); };
  for (auto [a, b] : balance_states()) {
    const double res = static_cast<double>(std::abs(balance_residual(m, pi, a, b)));
    r.states.push_back({a, b, res});
    if (res > r.max_residual) {
      r.max_residual = res;
      r.worst_n1 = a;
      r.worst_n2 = b;
    }
  }
  r.ok = r.max_residual <= tol;
  return r;
}

inline bool product_form_test(const ReversibilityConstants& c, double tol = 1e-9) {
  auto close = [tol](double x, double y) {
    return std::abs(x - y) <= tol * std::max(std::abs(x), std::abs(y));
  };
  return (c.c20 == 0.0 || close(c.c1plus, c.c20)) && (c.c10 == 0.0 || close(c.c2plus, c.c10));
}

struct GeometricFit {
  StationaryDistribution dist;
  double max_residual = 0.0;
  int iterations = 0;
};

namespace detail {

// Balance residuals of the unnormalized form (pi00 = 1) at the
// representative states, as a function of (eta1, eta2, k_h, k_v, k_int).
inline Eigen::VectorXd fit_residuals(const ReflectingWalkModel& m, const Eigen::VectorXd& x) {
  StationaryDistribution d;
  d.pi00 = 1.0;
  d.eta1 = d.axis_rate1 = x(0);
  d.eta2 = d.axis_rate2 = x(1);
  d.k_h = x(2);
  d.k_v = x(3);
  d.k_int = x(4);
  const auto states = balance_states();
  Eigen::VectorXd r(static_cast<Eigen::Index>(states.size()));
  auto pi = [&](long a, long b) { return pi_at_extended(d, a, b); };
  for (std::size_t k = 0; k < states.size(); ++k) {
    r(static_cast<Eigen::Index>(k)) =
        static_cast<double>(balance_residual(m, pi, states[k].first, states[k].second));
  }
  return r;
}

// With the rates fixed the residuals are affine in the three prefactors.
inline Eigen::Vector3d fit_prefactors(const ReflectingWalkModel& m, double eta1, double eta2) {
  Eigen::VectorXd x(5);
  x << eta1, eta2, 0.0, 0.0, 0.0;
  const Eigen::VectorXd base = fit_residuals(m, x);
  Eigen::MatrixXd a(base.size(), 3);
  for (int k = 0; k < 3; ++k) {
    Eigen::VectorXd xk = x;
    xk(2 + k) = 1.0;
    a.col(k) = fit_residuals(m, xk) - base;
  }
  return a.colPivHouseholderQr().solve(-base);
}

}  // namespace detail

/// Least-squares geometric form for a model whose stationary distribution is
/// believed to be geometric without the model being structure-reversible.
/// Starts from the given rates, fits the prefactors linearly, then refines
/// all five parameters by Gauss-Newton on the balance residuals.
inline GeometricFit fit_geometric_form(const ReflectingWalkModel& m, double eta1, double eta2,
                                       int max_iters = 50) {
  Eigen::VectorXd x(5);
  const Eigen::Vector3d k = detail::fit_prefactors(m, eta1, eta2);
  x << eta1, eta2, k(0), k(1), k(2);
  GeometricFit fit;
  Eigen::VectorXd r = detail::fit_residuals(m, x);
  for (int it = 0; it < max_iters; ++it) {
    Eigen::MatrixXd jac(r.size(), 5);
    for (int c = 0; c < 5; ++c) {
      const double h = 1e-7 * std::max(1.0, std::abs(x(c)));
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp(c) += h;
      xm(c) -= h;
      jac.col(c) = (detail::fit_residuals(m, xp) - detail::fit_residuals(m, xm)) / (2.0 * h);
    }
    const Eigen::VectorXd step = jac.colPivHouseholderQr().solve(-r);
    Eigen::VectorXd next = x + step;
    next(0) = std::clamp(next(0), 1e-9, 1.0 - 1e-9);
    next(1) = std::clamp(next(1), 1e-9, 1.0 - 1e-9);
    const Eigen::VectorXd rn = detail::fit_residuals(m, next);
    fit.iterations = it + 1;
    if (rn.squaredNorm() >= r.squaredNorm()) break;
    x = next;
    r = rn;
    if (step.norm() <= 1e-15 * x.norm()) break;
  }
  fit.dist.eta1 = fit.dist.axis_rate1 = x(0);
  fit.dist.eta2 = fit.dist.axis_rate2 = x(1);
  fit.dist.k_h = x(2);
  fit.dist.k_v = x(3);
  fit.dist.k_int = x(4);
  normalize(fit.dist);
  fit.max_residual = verify_stationary_equations(m, fit.dist).max_residual;
  return fit;
}

}  // namespace srw
