#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <queue>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "srwalk/error.hpp"

namespace srw {

/// The four homogeneity regions of the quadrant: the origin, the positive
/// horizontal axis, the positive vertical axis and the open interior.
enum class Face { Origin = 0, Horizontal = 1, Vertical = 2, Interior = 3 };

inline constexpr std::array<Face, 4> kFaces = {Face::Origin, Face::Horizontal,
                                               Face::Vertical, Face::Interior};

constexpr std::string_view face_name(Face face) noexcept {
  switch (face) {
    case Face::Origin: return "Origin";
    case Face::Horizontal: return "Horizontal";
    case Face::Vertical: return "Vertical";
    case Face::Interior: return "Interior";
  }
  return "?";
}

constexpr std::size_t face_index(Face face) noexcept {
  return static_cast<std::size_t>(face);
}

/// Face that governs transitions out of state (n1, n2).
constexpr Face face_of(long n1, long n2) noexcept {
  if (n1 == 0 && n2 == 0) return Face::Origin;
  if (n2 == 0) return Face::Horizontal;
  if (n1 == 0) return Face::Vertical;
  return Face::Interior;
}

/// A skip-free increment; both coordinates lie in {-1, 0, 1}.
struct Step {
  int i = 0;
  int j = 0;

  constexpr bool operator==(const Step&) const = default;
};

inline constexpr std::array<Step, 9> kSteps = {
    Step{-1, -1}, Step{-1, 0}, Step{-1, 1}, Step{0, -1}, Step{0, 0},
    Step{0, 1},   Step{1, -1}, Step{1, 0},  Step{1, 1}};

constexpr bool is_valid_step(Step s) noexcept {
  return s.i >= -1 && s.i <= 1 && s.j >= -1 && s.j <= 1;
}

constexpr std::size_t step_index(Step s) noexcept {
  return static_cast<std::size_t>((s.i + 1) * 3 + (s.j + 1));
}

constexpr Step negate(Step s) noexcept { return {-s.i, -s.j}; }

/// Whether a face may put mass on a step without leaving the quadrant.
constexpr bool step_allowed(Face face, Step s) noexcept {
  switch (face) {
    case Face::Origin: return s.i >= 0 && s.j >= 0;
    case Face::Horizontal: return s.j >= 0;
    case Face::Vertical: return s.i >= 0;
    case Face::Interior: return true;
  }
  return false;
}

inline std::string step_key(Step s) {
  return std::to_string(s.i) + "," + std::to_string(s.j);
}

/// Absolute tolerance on the total mass of a face distribution.
inline constexpr double kSumTolerance = 1e-12;

/// Increment distribution of one face, stored densely over {-1,0,1}^2.
class FaceDistribution {
 public:
  constexpr FaceDistribution() = default;
  constexpr explicit FaceDistribution(Face face) : face_(face) {}
  FaceDistribution(Face face, std::initializer_list<std::pair<Step, double>> entries)
      : face_(face) {
    for (const auto& [step, p] : entries) set(step, p);
  }

  constexpr Face face() const noexcept { return face_; }

  constexpr double operator()(int i, int j) const noexcept {
    return probs_[step_index({i, j})];
  }
  constexpr double at(Step s) const noexcept { return probs_[step_index(s)]; }

  void set(Step s, double p) {
    if (!is_valid_step(s)) {
      throw Error(ErrorKind::UnknownStepKey, "step " + step_key(s) + " is not skip-free");
    }
    probs_[step_index(s)] = p;
  }

  constexpr const std::array<double, 9>& probs() const noexcept { return probs_; }

  double sum() const noexcept {
    double total = 0.0;
    for (double p : probs_) total += p;
    return total;
  }

  double off_diagonal_mass() const noexcept {
    double total = 0.0;
    for (Step s : kSteps) {
      if (!(s == Step{0, 0})) total += at(s);
    }
    return total;
  }

  /// Sets the self-loop so that the face sums to one. Used for instances
  /// whose entries are rounded.
  void absorb_slack_into_diagonal() { set({0, 0}, 1.0 - off_diagonal_mass()); }

  bool operator==(const FaceDistribution&) const = default;

 private:
  Face face_ = Face::Interior;
  std::array<double, 9> probs_{};
};

/// Two-dimensional skip-free reflecting random walk on the quadrant.
struct ReflectingWalkModel {
  FaceDistribution p0{Face::Origin};
  FaceDistribution p1{Face::Horizontal};
  FaceDistribution p2{Face::Vertical};
  FaceDistribution pplus{Face::Interior};
  std::string label;

  const FaceDistribution& face(Face f) const noexcept {
    switch (f) {
      case Face::Origin: return p0;
      case Face::Horizontal: return p1;
      case Face::Vertical: return p2;
      case Face::Interior: break;
    }
    return pplus;
  }
  FaceDistribution& face(Face f) noexcept {
    return const_cast<FaceDistribution&>(std::as_const(*this).face(f));
  }

  /// One-step transition probability from (n1, n2) to (m1, m2).
  double transition(long n1, long n2, long m1, long m2) const noexcept {
    if (n1 < 0 || n2 < 0 || m1 < 0 || m2 < 0) return 0.0;
    const long di = m1 - n1;
    const long dj = m2 - n2;
    if (di < -1 || di > 1 || dj < -1 || dj > 1) return 0.0;
    return face(face_of(n1, n2))(static_cast<int>(di), static_cast<int>(dj));
  }

  /// Same transition law; the label is ignored.
  friend bool operator==(const ReflectingWalkModel& a, const ReflectingWalkModel& b) noexcept {
    return a.p0 == b.p0 && a.p1 == b.p1 && a.p2 == b.p2 && a.pplus == b.pplus;
  }
};

/// Mirror image across the diagonal: steps (i,j) -> (j,i), faces S1 <-> S2.
inline ReflectingWalkModel transpose(const ReflectingWalkModel& model) {
  auto swap_face = [](const FaceDistribution& src, Face target) {
    FaceDistribution out(target);
    for (Step s : kSteps) out.set({s.j, s.i}, src.at(s));
    return out;
  };
  ReflectingWalkModel t;
  t.p0 = swap_face(model.p0, Face::Origin);
  t.p1 = swap_face(model.p2, Face::Horizontal);
  t.p2 = swap_face(model.p1, Face::Vertical);
  t.pplus = swap_face(model.pplus, Face::Interior);
  t.label = model.label.empty() ? std::string{} : model.label + " (transposed)";
  return t;
}

enum class TriState { Yes, No, Undetermined };

constexpr std::string_view tri_state_name(TriState t) noexcept {
  switch (t) {
    case TriState::Yes: return "Yes";
    case TriState::No: return "No";
    case TriState::Undetermined: return "Undetermined";
  }
  return "?";
}

struct Violation {
  Face face;
  std::string description;
};

struct ValidationReport {
  bool ok = true;
  std::vector<Violation> violations;
  TriState chain_irreducible = TriState::Undetermined;
  bool free_walk_irreducible = false;
};

namespace detail {

inline std::string format_number(double x) {
  std::ostringstream os;
  os.precision(12);
  os << x;
  return os.str();
}

inline std::vector<Violation> face_violations(const FaceDistribution& dist, Face expected) {
  std::vector<Violation> out;
  if (dist.face() != expected) {
    out.push_back({expected, "distribution tagged " + std::string(face_name(dist.face())) +
                                 " stored in the " + std::string(face_name(expected)) + " slot"});
  }
  for (Step s : kSteps) {
    const double p = dist.at(s);
    if (!std::isfinite(p) || p < 0.0 || p > 1.0) {
      out.push_back({expected, "probability of step " + step_key(s) + " is " +
                                   format_number(p) + ", outside [0,1]"});
    } else if (p > 0.0 && !step_allowed(expected, s)) {
      out.push_back({expected, "step " + step_key(s) + " leaves the quadrant from face " +
                                   std::string(face_name(expected))});
    }
  }
  const double total = dist.sum();
  if (!(std::abs(total - 1.0) <= kSumTolerance)) {
    out.push_back({expected, "face " + std::string(face_name(expected)) + " sums to " +
                                 format_number(total)});
  }
  return out;
}

}  // namespace detail

/// Whether the free walk driven by the interior law reaches every point of
/// Z^2. Breadth-first search over partial sums in [-16,16]^2 with paths of
/// length at most 32; the walk is irreducible iff all four unit vectors are
/// reachable, and any such witness for skip-free generators fits in that box.
inline bool check_free_walk_irreducible(const ReflectingWalkModel& model) {
  const auto& p = model.pplus;
  if (p(1, 0) == 0.0 && p(-1, 0) == 0.0 && p(0, 1) == 0.0 && p(0, -1) == 0.0) {
    return false;
  }
  constexpr int kRadius = 16;
  constexpr int kMaxLength = 32;
  constexpr int kWidth = 2 * kRadius + 1;
  std::vector<int> depth(kWidth * kWidth, -1);
  auto cell = [&](int x, int y) { return (x + kRadius) * kWidth + (y + kRadius); };

  std::vector<Step> support;
  for (Step s : kSteps) {
    if (p.at(s) > 0.0 && !(s == Step{0, 0})) support.push_back(s);
  }
  std::queue<std::pair<int, int>> frontier;
  // Empty sums are not part of the semigroup; seed with single steps.
  for (Step s : support) {
    if (depth[cell(s.i, s.j)] < 0) {
      depth[cell(s.i, s.j)] = 1;
      frontier.emplace(s.i, s.j);
    }
  }
  while (!frontier.empty()) {
    auto [x, y] = frontier.front();
    frontier.pop();
    const int d = depth[cell(x, y)];
    if (d >= kMaxLength) continue;
    for (Step s : support) {
      const int nx = x + s.i;
      const int ny = y + s.j;
      if (std::abs(nx) > kRadius || std::abs(ny) > kRadius) continue;
      if (depth[cell(nx, ny)] < 0) {
        depth[cell(nx, ny)] = d + 1;
        frontier.emplace(nx, ny);
      }
    }
  }
  return depth[cell(1, 0)] > 0 && depth[cell(-1, 0)] > 0 && depth[cell(0, 1)] > 0 &&
         depth[cell(0, -1)] > 0;
}

namespace detail {

// States of {0..limit}^2 reachable from `start` (forward) or reaching it
// (backward), using only transitions that stay inside the box.
inline std::vector<char> box_reach(const ReflectingWalkModel& model, int limit, bool forward) {
  const int width = limit + 1;
  std::vector<char> seen(static_cast<std::size_t>(width * width), 0);
  std::queue<std::pair<int, int>> frontier;
  seen[0] = 1;
  frontier.emplace(0, 0);
  while (!frontier.empty()) {
    auto [a, b] = frontier.front();
    frontier.pop();
    for (Step s : kSteps) {
      const int c = a + s.i;
      const int d = b + s.j;
      if (c < 0 || d < 0 || c > limit || d > limit) continue;
      const double p = forward ? model.transition(a, b, c, d) : model.transition(c, d, a, b);
      if (p <= 0.0) continue;
      auto& flag = seen[static_cast<std::size_t>(c * width + d)];
      if (!flag) {
        flag = 1;
        frontier.emplace(c, d);
      }
    }
  }
  return seen;
}

inline bool box_states_connected(const ReflectingWalkModel& model, int box, int limit) {
  const auto fwd = box_reach(model, limit, true);
  const auto bwd = box_reach(model, limit, false);
  const int width = limit + 1;
  for (int a = 0; a <= box; ++a) {
    for (int b = 0; b <= box; ++b) {
      const auto k = static_cast<std::size_t>(a * width + b);
      if (!fwd[k] || !bwd[k]) return false;
    }
  }
  return true;
}

inline bool no_mass(const FaceDistribution& f, int axis, int value) {
  for (Step s : kSteps) {
    const int coord = axis == 0 ? s.i : s.j;
    if (coord == value && f.at(s) > 0.0) return false;
  }
  return true;
}

// Closed proper subsets whose closedness is decided exactly by the face laws.
inline bool has_closed_set_witness(const ReflectingWalkModel& m) {
  // {n2 = 0} closed: nothing leaves the horizontal axis upwards.
  if (no_mass(m.p0, 1, 1) && no_mass(m.p1, 1, 1)) return true;
  if (no_mass(m.p0, 0, 1) && no_mass(m.p2, 0, 1)) return true;
  // {n2 >= 1} closed: nothing above the axis moves down.
  if (no_mass(m.pplus, 1, -1) && no_mass(m.p2, 1, -1)) return true;
  if (no_mass(m.pplus, 0, -1) && no_mass(m.p1, 0, -1)) return true;
  // {n2 <= 1} closed: nothing above the axis moves up.
  if (no_mass(m.pplus, 1, 1) && no_mass(m.p2, 1, 1)) return true;
  if (no_mass(m.pplus, 0, 1) && no_mass(m.p1, 0, 1)) return true;
  return false;
}

}  // namespace detail

/// Finite check of irreducibility of the reflecting walk itself.
///
/// Yes when every state of {0..6}^2 reaches and is reached from the origin
/// (paths may not leave the box, so every path found is a real path; face
/// homogeneity makes the pattern repeat further out). No when the face laws
/// exhibit a closed proper subset of the quadrant (an axis that cannot be
/// left, a half-plane that cannot be left, or a band that cannot be left).
/// If neither is conclusive the box is widened to 24 once; after that the
/// answer is Undetermined.
inline TriState check_chain_irreducible(const ReflectingWalkModel& model) {
  constexpr int kBox = 6;
  if (detail::box_states_connected(model, kBox, kBox)) return TriState::Yes;
  if (detail::has_closed_set_witness(model)) return TriState::No;
  if (detail::box_states_connected(model, kBox, 4 * kBox)) return TriState::Yes;
  return TriState::Undetermined;
}

/// Lists every violated invariant; never throws and never mutates the model.
inline ValidationReport validate(const ReflectingWalkModel& model) {
  ValidationReport report;
  for (Face f : kFaces) {
    auto v = detail::face_violations(model.face(f), f);
    report.violations.insert(report.violations.end(), v.begin(), v.end());
  }
  report.ok = report.violations.empty();
  report.free_walk_irreducible = check_free_walk_irreducible(model);
  report.chain_irreducible = check_chain_irreducible(model);
  return report;
}

}  // namespace srw
