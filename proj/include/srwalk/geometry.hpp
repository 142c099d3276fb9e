#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "srwalk/error.hpp"
#include "srwalk/model.hpp"
#include "srwalk/reversibility.hpp"

namespace srw {

/// Laurent polynomial sum a_ij z1^i z2^j over i, j in {-1, 0, 1}.
struct LaurentPolynomial {
  std::array<double, 9> coeff{};

  double& at(int i, int j) noexcept { return coeff[step_index({i, j})]; }
  double at(int i, int j) const noexcept { return coeff[step_index({i, j})]; }

  double operator()(double z1, double z2) const noexcept {
    const double x[3] = {1.0 / z1, 1.0, z1};
    const double y[3] = {1.0 / z2, 1.0, z2};
    double total = 0.0;
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) total += coeff[static_cast<std::size_t>(i * 3 + j)] * x[i] * y[j];
    }
    return total;
  }

  /// Coefficient of z2^j once z1 is fixed.
  double column(int j, double z1) const noexcept {
    return at(-1, j) / z1 + at(0, j) + at(1, j) * z1;
  }
};

/// Generating-function boundary of one face, with the boundary terms scaled
/// by the reversibility constants.
inline LaurentPolynomial gamma_polynomial(const ReflectingWalkModel& m,
                                          const ReversibilityConstants& c, Face face) {
  LaurentPolynomial g;
  const auto& p = m.pplus;
  switch (face) {
    case Face::Interior:
      for (Step s : kSteps) g.at(s.i, s.j) = p.at(s);
      break;
    case Face::Horizontal:
      g.at(0, 0) = m.p1(0, 0);
      g.at(1, 0) = m.p1(1, 0);
      g.at(-1, 0) = m.p1(-1, 0);
      for (int i = -1; i <= 1; ++i) g.at(i, -1) = c.c1plus * p(i, -1);
      break;
    case Face::Vertical:
      g.at(0, 0) = m.p2(0, 0);
      g.at(0, 1) = m.p2(0, 1);
      g.at(0, -1) = m.p2(0, -1);
      for (int j = -1; j <= 1; ++j) g.at(-1, j) = c.c2plus * p(-1, j);
      break;
    case Face::Origin: {
      // c0/c1+ equals c10 whenever c10 > 0, and symmetrically for c20.
      const double h = c.c10 > 0.0 ? c.c10 : c.c0 / c.c1plus;
      const double v = c.c20 > 0.0 ? c.c20 : c.c0 / c.c2plus;
      g.at(0, 0) = m.p0(0, 0);
      g.at(-1, 0) = h * m.p1(-1, 0);
      g.at(0, -1) = v * m.p2(0, -1);
      g.at(-1, -1) = c.c0 * p(-1, -1);
      break;
    }
  }
  return g;
}

inline double gamma(const ReflectingWalkModel& m, const ReversibilityConstants& c, Face face,
                    double z1, double z2) {
  if (!(z1 > 0.0) || !(z2 > 0.0)) {
    throw Error(ErrorKind::NonpositiveArgument, "gamma needs z1, z2 > 0");
  }
  return gamma_polynomial(m, c, face)(z1, z2);
}

inline std::array<double, 4> gamma_residuals(const ReflectingWalkModel& m,
                                             const ReversibilityConstants& c, double z1,
                                             double z2) {
  std::array<double, 4> r{};
  for (Face f : kFaces) r[face_index(f)] = std::abs(gamma(m, c, f, z1, z2) - 1.0);
  return r;
}

struct SolverOptions {
  double residual_tol = 1e-10;
  double cross_check_tol = 1e-10;
  double z_min = 1.0 + 1e-9;
  double z_max = 1e6;
  int grid_points = 4096;
  /// Face whose boundary is eliminated; Vertical solves the transposed
  /// problem and swaps the answer back.
  Face eliminate = Face::Horizontal;
};

struct RootCandidate {
  double z1 = 0.0;
  double z2 = 0.0;
  std::array<double, 4> residuals{};
  bool verified = false;
};

struct GeometricSolution {
  double eta1 = 0.0;
  double eta2 = 0.0;
  std::array<double, 4> residuals{};
  std::string multiplicity_note;
  std::vector<RootCandidate> roots;

  double residual(Face f) const noexcept { return residuals[face_index(f)]; }
  double max_residual() const noexcept {
    return *std::max_element(residuals.begin(), residuals.end());
  }
};

/// Carries every candidate examined so callers can report residuals.
class EtaSolveError : public Error {
 public:
  EtaSolveError(ErrorKind kind, const std::string& message, std::vector<RootCandidate> candidates)
      : Error(kind, message), candidates_(std::move(candidates)) {}

  const std::vector<RootCandidate>& candidates() const noexcept { return candidates_; }

 private:
  std::vector<RootCandidate> candidates_;
};

namespace detail {

// Solution of gamma_1 = 1 for z2 at fixed z1, or nullopt when it is not a
// positive finite number.
inline std::optional<double> eliminate_z2(const LaurentPolynomial& g1, double z1) {
  const double b_minus = g1.column(-1, z1);
  const double slack = 1.0 - g1.column(0, z1);
  if (!(b_minus > 0.0) || !(slack > 0.0)) return std::nullopt;
  const double z2 = b_minus / slack;
  if (!std::isfinite(z2)) return std::nullopt;
  return z2;
}

// Bracketed root of f on [a, b]: secant steps while they stay inside the
// bracket and shrink it fast enough, bisection otherwise.
template <class F>
double bracketed_root(F&& f, double a, double b, double fa, double fb) {
  for (int iter = 0; iter < 300; ++iter) {
    if (fa == 0.0) return a;
    if (fb == 0.0) return b;
    const double width = b - a;
    if (width <= 4.0 * std::numeric_limits<double>::epsilon() * std::abs(b)) break;
    double x = b - fb * (b - a) / (fb - fa);
    const bool secant_ok = std::isfinite(x) && x > a + 0.01 * width && x < b - 0.01 * width &&
                           iter % 3 != 2;
    if (!secant_ok) x = 0.5 * (a + b);
    const double fx = f(x);
    if ((fx < 0.0) == (fa < 0.0)) {
      a = x;
      fa = fx;
    } else {
      b = x;
      fb = fx;
    }
  }
  return std::abs(fa) < std::abs(fb) ? a : b;
}

inline GeometricSolution solve_eta_horizontal(const ReflectingWalkModel& m,
                                              const ReversibilityConstants& c,
                                              const SolverOptions& opt) {
  const auto g1 = gamma_polynomial(m, c, Face::Horizontal);
  const auto gp = gamma_polynomial(m, c, Face::Interior);
  auto f = [&](double z1) -> std::optional<double> {
    auto z2 = eliminate_z2(g1, z1);
    if (!z2) return std::nullopt;
    return gp(z1, *z2) - 1.0;
  };

  std::vector<RootCandidate> candidates;
  const int n = std::max(opt.grid_points, 2);
  const double log_lo = std::log(opt.z_min);
  const double log_hi = std::log(opt.z_max);
  std::optional<std::pair<double, double>> prev;
  for (int k = 0; k < n; ++k) {
    const double z1 = std::exp(log_lo + (log_hi - log_lo) * k / (n - 1));
    const auto fz = f(z1);
    if (!fz) {
      prev.reset();
      continue;
    }
    if (prev && ((prev->second < 0.0) != (*fz < 0.0) || *fz == 0.0)) {
      auto fd = [&](double x) { return f(x).value_or(std::numeric_limits<double>::quiet_NaN()); };
      const double root = bracketed_root(fd, prev->first, z1, prev->second, *fz);
      const auto z2 = eliminate_z2(g1, root);
      // z1 = 1 always solves the eliminated equation; it is not a decay rate.
      if (z2 && root > 1.0 + 1e-7 && *z2 > 1.0) {
        RootCandidate cand{root, *z2, gamma_residuals(m, c, root, *z2), false};
        const bool on_curves = cand.residuals[face_index(Face::Interior)] <= opt.residual_tol &&
                               cand.residuals[face_index(Face::Horizontal)] <= opt.residual_tol;
        const bool cross = cand.residuals[face_index(Face::Vertical)] <= opt.cross_check_tol &&
                           cand.residuals[face_index(Face::Origin)] <= opt.cross_check_tol;
        // A sign change across a pole of the eliminated function is not a root.
        if (on_curves) {
          cand.verified = cross;
          candidates.push_back(cand);
        }
      }
    }
    prev = std::make_pair(z1, *fz);
  }

  if (candidates.empty()) {
    throw EtaSolveError(ErrorKind::NoRoot,
                        "no solution of gamma_+ = gamma_1 = 1 with z1, z2 > 1 in the search box",
                        candidates);
  }
  std::vector<const RootCandidate*> verified;
  for (const auto& cand : candidates) {
    if (cand.verified) verified.push_back(&cand);
  }
  if (verified.empty()) {
    const auto& first = candidates.front();
    std::ostringstream os;
    os.precision(6);
    os << "root (" << first.z1 << ", " << first.z2
       << ") of gamma_+ = gamma_1 = 1 misses gamma_2 by "
       << first.residuals[face_index(Face::Vertical)] << " and gamma_0 by "
       << first.residuals[face_index(Face::Origin)];
    throw EtaSolveError(ErrorKind::CrossCheckFailed, os.str(), candidates);
  }
  GeometricSolution sol;
  sol.eta1 = 1.0 / verified.front()->z1;
  sol.eta2 = 1.0 / verified.front()->z2;
  sol.residuals = verified.front()->residuals;
  sol.roots = candidates;
  if (verified.size() > 1) {
    sol.multiplicity_note = std::to_string(verified.size()) +
                            " verified solutions found; returning the one with smallest z1";
  }
  return sol;
}

}  // namespace detail

/// Solves condition (a5): gamma_i(1/eta1, 1/eta2) = 1 for all four faces.
///
/// gamma_1 is linear in 1/z2, so z2 is eliminated in closed form and
/// gamma_+ - 1 is scanned along z1 for sign changes on a log grid. Each
/// bracketed root is refined and then checked against gamma_2 and gamma_0.
inline GeometricSolution solve_eta(const ReflectingWalkModel& m, const ReversibilityConstants& c,
                                   const SolverOptions& opt = {}) {
  if (opt.eliminate == Face::Vertical) {
    auto sol = detail::solve_eta_horizontal(transpose(m), transpose(c), opt);
    std::swap(sol.eta1, sol.eta2);
    std::swap(sol.residuals[face_index(Face::Horizontal)],
              sol.residuals[face_index(Face::Vertical)]);
    for (auto& r : sol.roots) {
      std::swap(r.z1, r.z2);
      std::swap(r.residuals[face_index(Face::Horizontal)], r.residuals[face_index(Face::Vertical)]);
    }
    return sol;
  }
  if (opt.eliminate != Face::Horizontal) {
    throw Error(ErrorKind::InvalidArgument, "only a boundary face can be eliminated");
  }
  return detail::solve_eta_horizontal(m, c, opt);
}

struct CurveSample {
  Face face = Face::Interior;
  std::vector<std::pair<double, double>> points;
  std::size_t skipped = 0;
};

inline constexpr double kCurveTolerance = 1e-10;

/// Points of the level set gamma_face = 1 above each abscissa. For fixed z1
/// the equation is B1 z2^2 + (B0 - 1) z2 + B-1 = 0, which covers the
/// quadratic interior case and the boundary faces uniformly. Every positive
/// root is polished by Newton steps and kept only if it re-evaluates within
/// the curve tolerance.
inline CurveSample sample_curve(const ReflectingWalkModel& m, const ReversibilityConstants& c,
                                Face face, const std::vector<double>& z1_grid) {
  CurveSample out;
  out.face = face;
  const auto g = gamma_polynomial(m, c, face);
  for (double z1 : z1_grid) {
    if (!(z1 > 0.0)) {
      ++out.skipped;
      continue;
    }
    const double a = g.column(1, z1);
    const double b = g.column(0, z1) - 1.0;
    const double cc = g.column(-1, z1);
    std::vector<double> roots;
    if (a == 0.0 && b == 0.0 && cc == 0.0) {
      // The whole vertical line lies on the curve; z2 = 1 represents it.
      roots.push_back(1.0);
    } else if (a == 0.0) {
      if (b != 0.0) roots.push_back(-cc / b);
    } else {
      const double disc = b * b - 4.0 * a * cc;
      if (disc >= 0.0) {
        const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
        if (q != 0.0) {
          roots.push_back(q / a);
          roots.push_back(cc / q);
        } else {
          roots.push_back(0.0);
        }
      }
    }
    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
    bool any = false;
    for (double z2 : roots) {
      if (!(z2 > 0.0) || !std::isfinite(z2)) continue;
      for (int it = 0; it < 4; ++it) {
        const double val = a * z2 + b + cc / z2;
        const double der = a - cc / (z2 * z2);
        if (der == 0.0 || val == 0.0) break;
        const double next = z2 - val / der;
        if (!(next > 0.0)) break;
        z2 = next;
      }
      if (std::abs(g(z1, z2) - 1.0) <= kCurveTolerance) {
        out.points.emplace_back(z1, z2);
        any = true;
      }
    }
    if (!any) ++out.skipped;
  }
  return out;
}

/// Log-spaced abscissae on [z_min, z_max] plus the point 1 and any extras.
inline std::vector<double> curve_grid(double z_min, double z_max, int points,
                                      const std::vector<double>& extra = {}) {
  if (!(z_min > 0.0) || !(z_max > z_min) || points < 2) {
    throw Error(ErrorKind::InvalidArgument, "curve grid needs 0 < z_min < z_max and >= 2 points");
  }
  std::vector<double> grid;
  const double lo = std::log(z_min);
  const double hi = std::log(z_max);
  for (int k = 0; k < points; ++k) grid.push_back(std::exp(lo + (hi - lo) * k / (points - 1)));
  grid.push_back(1.0);
  grid.insert(grid.end(), extra.begin(), extra.end());
  std::sort(grid.begin(), grid.end());
  grid.erase(std::unique(grid.begin(), grid.end()), grid.end());
  return grid;
}

inline void write_curve_csv(std::ostream& os, const CurveSample& sample) {
  os << "face,z1,z2\n";
  os.precision(17);
  for (const auto& [z1, z2] : sample.points) {
    os << face_name(sample.face) << ',' << z1 << ',' << z2 << '\n';
  }
}

}  // namespace srw
