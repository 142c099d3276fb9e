#include <gtest/gtest.h>

#include <cmath>
#include <cstdint>
#include <string>

#include "support.hpp"

#ifndef SRWALK_PRESET_DIR
#error "SRWALK_PRESET_DIR must point at the shipped presets/ directory"
#endif

namespace srw {
namespace {

// Closed-form throughput for node 1, written from the two-node solution.
double alpha1_formula(const JacksonParameters& p) {
  const double r11 = p.r[0][1], r12 = p.r[0][2], r21 = p.r[1][1], r22 = p.r[1][2];
  const double d = 1 - r11 - r22 - r12 * r21 + r11 * r22;
  return (p.lambda1 * (1 - r22) + p.lambda2 * r21) / d;
}

std::uint64_t fnv1a(const std::string& bytes, std::uint64_t h = 0xcbf29ce484222325ULL) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorKind::InvalidArgument;
}

TEST(TrafficTest, ExtraArrivalBaseLoads) {
  const auto t = solve_traffic(instance_5_10_base());
  EXPECT_NEAR(1.0 / t.rho1, 2.2105, 1e-4);
  EXPECT_NEAR(1.0 / t.rho2, 2.6486, 1e-4);
  EXPECT_TRUE(t.stable);
}

TEST(TrafficTest, NoFeedback) {
  JacksonParameters p;
  p.lambda1 = 0.1;
  p.lambda2 = 0.2;
  p.mu1 = 0.3;
  p.mu2 = 0.4;
  p.r[0] = {1.0, 0.0, 0.0};
  p.r[1] = {1.0, 0.0, 0.0};
  const auto t = solve_traffic(p);
  EXPECT_DOUBLE_EQ(t.alpha1, 0.1);
  EXPECT_DOUBLE_EQ(t.alpha2, 0.2);
}

TEST(TrafficTest, SymmetricNodes) {
  JacksonParameters p;
  p.lambda1 = p.lambda2 = 0.1;
  p.mu1 = p.mu2 = 0.4;
  p.r[0] = {0.5, 0.2, 0.3};
  p.r[1] = {0.5, 0.3, 0.2};
  const auto t = solve_traffic(p);
  EXPECT_NEAR(t.alpha1, t.alpha2, 1e-15);
}

TEST(TrafficTest, Errors) {
  JacksonParameters p;
  p.lambda1 = p.lambda2 = 0.1;
  p.mu1 = p.mu2 = 0.4;
  p.r[0] = {0.0, 0.5, 0.5};
  p.r[1] = {0.0, 0.5, 0.5};
  EXPECT_EQ(kind_of([&] { solve_traffic(p); }), ErrorKind::DegenerateRouting);
  p.r[0] = {0.5, 0.5, 0.5};
  EXPECT_EQ(kind_of([&] { solve_traffic(p); }), ErrorKind::InvalidParameters);
  p.r[0] = {0.5, 0.25, 0.25};
  p.mu1 = 0.5;
  EXPECT_EQ(kind_of([&] { solve_traffic(p); }), ErrorKind::InvalidParameters);
}

TEST(TrafficProperty, MatchesClosedFormAndBalances) {
  testing::Gen gen(0x5eed0601);
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = gen.jackson_params();
    const auto t = solve_traffic(p);
    EXPECT_NEAR(t.alpha1, alpha1_formula(p), 1e-14);
    // Total throughput to the outside equals total exogenous arrivals.
    EXPECT_NEAR(t.alpha1 * p.r[0][0] + t.alpha2 * p.r[1][0], p.lambda1 + p.lambda2, 1e-14);
  }
}

TEST(JacksonTest, FacesSumToOne) {
  testing::Gen gen(0x5eed0602);
  for (int trial = 0; trial < 50; ++trial) {
    const auto m = jackson(gen.jackson_params());
    for (Face f : kFaces) EXPECT_NEAR(m.face(f).sum(), 1.0, 1e-15);
    EXPECT_TRUE(validate(m).ok);
  }
}

TEST(JacksonTest, ConstantsAndProductForm) {
  testing::Gen gen(0x5eed0603);
  for (int trial = 0; trial < 30; ++trial) {
    const auto p = gen.jackson_params();
    const auto m = jackson(p);
    const auto c = compute_constants(m);
    EXPECT_NEAR(c.c1plus, 1.0, 1e-12);
    EXPECT_NEAR(c.c2plus, 1.0, 1e-12);
    EXPECT_NEAR(c.c10, 1.0, 1e-12);
    EXPECT_NEAR(c.c20, 1.0, 1e-12);
    EXPECT_TRUE(product_form_test(c));
    const auto t = solve_traffic(p);
    const auto sol = solve_eta(m, c);
    EXPECT_NEAR(sol.eta1, t.rho1, 1e-9);
    EXPECT_NEAR(sol.eta2, t.rho2, 1e-9);
  }
}

// Each gamma equals one at the inverse loads.
TEST(JacksonTest, GammaIdentitiesAtInverseLoads) {
  const auto m = preset("jackson-extra-5.10");
  const auto c = compute_constants(m);
  const auto t = solve_traffic(instance_5_10_base());
  for (Face f : kFaces) EXPECT_NEAR(gamma(m, c, f, 1.0 / t.rho1, 1.0 / t.rho2), 1.0, 1e-12);
}

TEST(ExtraArrivalTest, ZeroExtrasMoveFeedbackOffTheDiagonal) {
  const auto base = instance_5_10_base();
  ExtraArrivalParameters e;
  e.base = base;
  const auto x = jackson_extra_arrivals(e);
  const auto j = jackson(base);
  EXPECT_EQ(x.pplus, j.pplus);
  EXPECT_EQ(x.p0, j.p0);
  const double t1 = base.mu1 * base.r[0][1];
  const double t2 = base.mu2 * base.r[1][2];
  for (Step s : kSteps) {
    double d1 = 0.0;
    double d2 = 0.0;
    if (s == Step{-1, 1}) d1 = t1;
    if (s == Step{0, 0}) d1 = -t1;
    if (s == Step{1, -1}) d2 = t2;
    if (s == Step{0, 0}) d2 = -t2;
    EXPECT_NEAR(x.p1.at(s) - j.p1.at(s), d1, 1e-15) << step_key(s);
    EXPECT_NEAR(x.p2.at(s) - j.p2.at(s), d2, 1e-15) << step_key(s);
  }
}

TEST(ExtraArrivalTest, ReversibleChoicePassesConditions) {
  const auto e = reversible_extra_arrivals(instance_5_10_base(), 0.1);
  const auto r = check_conditions(jackson_extra_arrivals(e), 1e-14);
  EXPECT_EQ(r.b1.status, Status::Pass);
  EXPECT_EQ(r.a1.status, Status::Pass);
  EXPECT_EQ(r.a3.status, Status::Pass);
  const double l = e.base.lambda1;
  EXPECT_NEAR(e.lambda1_2, e.base.r[1][2] / e.base.r[1][1] * l, 1e-15);
  EXPECT_NEAR(e.lambda2_1, e.base.r[0][1] / e.base.r[0][2] * l, 1e-15);
}

TEST(ExtraArrivalTest, RejectsOversizedExtras) {
  ExtraArrivalParameters e;
  e.base = instance_5_10_base();
  e.lambda2_1 = e.base.mu2 + 0.01;
  EXPECT_EQ(kind_of([&] { jackson_extra_arrivals(e); }), ErrorKind::NegativeProbability);
  e.lambda2_1 = -0.01;
  EXPECT_EQ(kind_of([&] { jackson_extra_arrivals(e); }), ErrorKind::NegativeProbability);
}

TEST(ExtraArrivalTest, RequiresMatchedRoutingRatios) {
  auto p = instance_5_10_base();
  p.r[1] = {0.5, 0.3, 0.2};
  EXPECT_EQ(kind_of([&] { reversible_extra_arrivals(p, 0.1); }), ErrorKind::InvalidParameters);
  p = instance_5_10_base();
  p.lambda2 = p.lambda1 + 0.01;
  p.mu2 -= 0.01;
  EXPECT_EQ(kind_of([&] { reversible_extra_arrivals(p, 0.1); }), ErrorKind::InvalidParameters);
}

// lambda1 = lambda2 and r12/r10 = r21/r20: the loads are the decay rates.
TEST(ExtraArrivalProperty, RandomReversibleChoicesAreStructureReversible) {
  testing::Gen gen(0x5eed0604);
  int checked = 0;
  while (checked < 20) {
    JacksonParameters p;
    p.lambda1 = p.lambda2 = gen.uniform(0.02, 0.1);
    p.mu1 = gen.uniform(0.2, 0.6);
    p.mu2 = 1.0 - 2.0 * p.lambda1 - p.mu1;
    const double r10 = gen.uniform(0.3, 0.7);
    const double r12 = gen.uniform(0.1, 1.0 - r10);
    const double r20 = gen.uniform(0.3, 0.7);
    const double r21 = r20 * r12 / r10;
    if (!(p.mu2 > 0.1) || r10 + r12 > 0.95 || r20 + r21 > 0.95) continue;
    p.r[0] = {r10, 1.0 - r10 - r12, r12};
    p.r[1] = {r20, r21, 1.0 - r20 - r21};
    const auto t = solve_traffic(p);
    if (!(t.rho1 < 0.9 && t.rho2 < 0.9)) continue;
    ExtraArrivalParameters e;
    ReflectingWalkModel m;
    try {
      e = reversible_extra_arrivals(p, gen.uniform(0.0, 0.05));
      m = jackson_extra_arrivals(e);
    } catch (const Error&) {
      continue;
    }
    ++checked;
    const auto report = analyze(m);
    ASSERT_EQ(report.verdict, Verdict::StructureReversible) << report.reason;
    EXPECT_EQ(report.conditions->b1.status, Status::Pass);
    EXPECT_NEAR(report.stationary->eta1, t.rho1, 1e-9);
    EXPECT_NEAR(report.stationary->eta2, t.rho2, 1e-9);
    const auto c = *report.conditions->constants;
    for (Face f : kFaces) EXPECT_NEAR(gamma(m, c, f, 1.0 / t.rho1, 1.0 / t.rho2), 1.0, 1e-12);
  }
}

TEST(InstanceTest, ReferenceValues) {
  EXPECT_NEAR(preset("appendixD-product-nonreversible").pplus(0, 0), 0.469511, 1e-6);
  const auto m = preset("jackson-extra-5.10");
  EXPECT_NEAR(instance_5_10_base().mu2, 0.4667, 1e-4);
  EXPECT_NEAR(m.pplus(1, 0), 0.0667, 1e-4);
  EXPECT_EQ(kind_of([] { preset("unknown"); }), ErrorKind::UnknownInstance);
  EXPECT_EQ(kind_of([] { reference_instance("jackson-standard"); }), ErrorKind::UnknownInstance);
}

TEST(InstanceTest, EveryPresetValidates) {
  for (const auto& name : preset_names()) {
    const auto m = preset(name);
    EXPECT_EQ(m.label, name);
    EXPECT_TRUE(validate(m).ok) << name;
    EXPECT_FALSE(preset_note(name).empty());
  }
}

// The shipped documents are exactly what the code generates.
TEST(PresetFilesTest, MatchGeneratedDocuments) {
  std::uint64_t digest = 0xcbf29ce484222325ULL;
  for (const auto& name : preset_names()) {
    const std::string path = std::string(SRWALK_PRESET_DIR) + "/" + name + ".json";
    const std::string text = read_text_file(path);
    EXPECT_EQ(text, serialize(preset(name), preset_note(name))) << path;
    EXPECT_EQ(parse_model(text), preset(name));
    digest = fnv1a(text, digest);
  }
  EXPECT_EQ(digest, 0x0114ceff7c4bd02eULL);
}

}  // namespace
}  // namespace srw
