#include <gtest/gtest.h>

#include <cmath>

#include "support.hpp"

namespace srw {
namespace {

StationaryDistribution closed_form(const ReflectingWalkModel& m) {
  const auto c = compute_constants(m);
  return build_stationary(c, solve_eta(m, c));
}

double max_entry_difference(const ReflectingWalkModel& a, const ReflectingWalkModel& b) {
  double diff = 0.0;
  for (Face f : kFaces) {
    for (Step s : kSteps) diff = std::max(diff, std::abs(a.face(f).at(s) - b.face(f).at(s)));
  }
  return diff;
}

// Two independent birth-death coordinates: detailed balance holds.
ReflectingWalkModel birth_death_pair() {
  ReflectingWalkModel m;
  m.pplus = FaceDistribution(Face::Interior, {{{1, 0}, 0.1}, {{-1, 0}, 0.3}, {{0, 1}, 0.15},
                                              {{0, -1}, 0.25}, {{0, 0}, 0.2}});
  m.p1 = FaceDistribution(Face::Horizontal, {{{1, 0}, 0.1}, {{-1, 0}, 0.3}, {{0, 1}, 0.15},
                                             {{0, 0}, 0.45}});
  m.p2 = FaceDistribution(Face::Vertical, {{{1, 0}, 0.1}, {{0, 1}, 0.15}, {{0, -1}, 0.25},
                                           {{0, 0}, 0.5}});
  m.p0 = FaceDistribution(Face::Origin, {{{1, 0}, 0.1}, {{0, 1}, 0.15}, {{0, 0}, 0.75}});
  return m;
}

TEST(ReversedKernelTest, DetailedBalanceModelIsItsOwnReversal) {
  const auto m = birth_death_pair();
  const auto d = closed_form(m);
  EXPECT_NEAR(d.eta1, 0.1 / 0.3, 1e-12);
  EXPECT_NEAR(d.eta2, 0.15 / 0.25, 1e-12);
  const auto k = reversed_kernel_at(m, d, 3, 3);
  for (Step s : kSteps) EXPECT_NEAR(k.at(s), m.pplus.at(s), 1e-12);
  const auto r = build_reversed_model(m, d);
  EXPECT_TRUE(r.strictly_reversible);
}

TEST(ReversedKernelTest, InteriorStepsFollowRates) {
  const auto m = preset("jackson-extra-5.10");
  const auto d = closed_form(m);
  const auto k = reversed_kernel_at(m, d, 5, 5);
  for (Step s : kSteps) {
    const double expected =
        std::pow(d.eta1, s.i) * std::pow(d.eta2, s.j) * m.pplus.at(negate(s));
    EXPECT_NEAR(k.at(s), expected, 1e-12);
  }
}

TEST(ReversedKernelTest, AxisStateSumsToOne) {
  const auto m = preset("jackson-extra-5.10");
  EXPECT_NEAR(reversed_kernel_at(m, closed_form(m), 4, 0).sum(), 1.0, 1e-10);
}

TEST(ReversedKernelTest, ZeroMassIsAnError) {
  StationaryDistribution d;
  try {
    reversed_kernel_at(birth_death_pair(), d, 0, 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ZeroMass);
  }
}

// The shipped base rates satisfy alpha_i r_i0 = lambda_i, so that network
// is in detailed balance and its reversal is itself.
TEST(BuildReversedTest, BaseJacksonIsReversible) {
  const auto p = instance_5_10_base();
  const auto t = solve_traffic(p);
  EXPECT_NEAR(t.alpha1 * p.r[0][0], p.lambda1, 1e-15);
  const auto m = jackson(p);
  const auto r = build_reversed_model(m, closed_form(m));
  EXPECT_TRUE(r.strictly_reversible);
}

TEST(BuildReversedTest, RandomJacksonNetworks) {
  testing::Gen gen(0x5eed0403);
  for (int trial = 0; trial < 20; ++trial) {
    const auto p = gen.jackson_params();
    const auto m = jackson(p);
    const auto t = solve_traffic(p);
    const auto r = build_reversed_model(m, closed_form(m));
    EXPECT_LE(r.homogeneity_residual, 1e-12);
    EXPECT_LE(r.row_sum_error, 1e-12);
    // p~(1,0) = eta1 p(-1,0) = rho1 mu1 r10 = alpha1 r10: reversed arrivals
    // are the forward departures to the outside.
    EXPECT_NEAR(r.model.pplus(1, 0), t.alpha1 * p.r[0][0], 1e-12);
    EXPECT_NEAR(r.model.pplus(0, 1), t.alpha2 * p.r[1][0], 1e-12);
    // p~(-1,0) = p(1,0) / eta1.
    EXPECT_NEAR(r.model.pplus(-1, 0), p.lambda1 / t.rho1, 1e-12);
    EXPECT_FALSE(r.strictly_reversible);
  }
}

TEST(BuildReversedTest, AppendixIsNotHomogeneous) {
  const auto m = preset("appendixD-product-nonreversible");
  const auto fit = fit_geometric_form(m, 0.3, 0.2);
  try {
    build_reversed_model(m, fit.dist);
    FAIL() << "expected NotHomogeneous";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotHomogeneous);
  }
}

TEST(BuildReversedTest, WrongDistributionIsNotStationary) {
  const auto m = preset("jackson-extra-5.10");
  const auto c = compute_constants(m);
  const auto sol = solve_eta(m, c);
  EXPECT_THROW(build_reversed_model(m, build_stationary(c, sol.eta1 * 1.01, sol.eta2)), Error);
}

TEST(BuildReversedTest, RoundedOutputSumsToOne) {
  const auto m = preset("jackson-extra-5.10");
  const auto r = rounded_for_output(build_reversed_model(m, closed_form(m)).model);
  for (Face f : kFaces) EXPECT_NEAR(r.face(f).sum(), 1.0, 1e-15);
  EXPECT_TRUE(validate(parse_model(serialize(r))).ok);
}

TEST(ReversalProperty, ReversedModelIsStructureReversibleWithSameRates) {
  for (const auto& m : testing::random_sr_corpus(20, 0x5eed0401)) {
    const auto d = closed_form(m);
    const auto r = build_reversed_model(m, d);
    const auto report = analyze(r.model);
    ASSERT_EQ(report.verdict, Verdict::StructureReversible) << report.reason;
    EXPECT_NEAR(report.stationary->eta1, d.eta1, 1e-9);
    EXPECT_NEAR(report.stationary->eta2, d.eta2, 1e-9);
    EXPECT_NEAR(report.stationary->pi00, d.pi00, 1e-9);
  }
}

TEST(ReversalProperty, Involution) {
  for (const auto& m : testing::random_sr_corpus(20, 0x5eed0402)) {
    const auto d = closed_form(m);
    const auto once = build_reversed_model(m, d);
    const auto twice = build_reversed_model(once.model, d);
    EXPECT_LE(max_entry_difference(twice.model, m), 1e-9);
    EXPECT_LE(once.homogeneity_residual, 1e-9);
    EXPECT_LE(once.row_sum_error, 1e-10);
  }
}

TEST(SingularTest, DemoRates) {
  const auto s = analyze_singular(singular_demo_model());
  EXPECT_FALSE(s.transposed);
  EXPECT_DOUBLE_EQ(s.eta1, 0.2 / 0.5);
  EXPECT_DOUBLE_EQ(s.eta2, 0.1 / 0.3);
  EXPECT_DOUBLE_EQ(s.alpha1, 0.2 / 0.4);
  EXPECT_TRUE(s.required_zeros_ok);
}

TEST(SingularTest, DemoStationaryBalances) {
  const auto m = singular_demo_model();
  auto d = singular_stationary(analyze_singular(m));
  EXPECT_NEAR(total_mass(d), 1.0, 1e-14);
  EXPECT_LE(verify_stationary_equations(m, d).max_residual, 1e-12);
  // Balance on a wider box too, since the axis rate differs from eta1.
  auto pi = [&](long a, long b) { return pi_at_extended(d, a, b); };
  for (long a = 0; a <= 12; ++a) {
    for (long b = 0; b <= 12; ++b) {
      EXPECT_LE(std::abs(static_cast<double>(balance_residual(m, pi, a, b))), 1e-12);
    }
  }
}

TEST(SingularTest, VerticalPatternIsTransposed) {
  const auto m = transpose(singular_demo_model());
  const auto s = analyze_singular(m);
  EXPECT_TRUE(s.transposed);
  const auto d = singular_stationary(s);
  EXPECT_DOUBLE_EQ(d.eta2, 0.4);
  EXPECT_DOUBLE_EQ(d.eta1, 0.1 / 0.3);
  EXPECT_DOUBLE_EQ(d.axis_rate2, 0.5);
  EXPECT_LE(verify_stationary_equations(m, d).max_residual, 1e-12);
}

TEST(SingularTest, UpwardMoveOnAxisIsRejected) {
  auto m = singular_demo_model();
  m.p1.set({0, 1}, 0.1);
  m.p1.set({0, 0}, 0.3);
  try {
    analyze_singular(m);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotStructureReversible);
  }
}

TEST(SingularTest, DiagonalInteriorIsNotApplicable) {
  try {
    analyze_singular(preset("jackson-extra-5.10"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotApplicable);
  }
}

}  // namespace
}  // namespace srw
