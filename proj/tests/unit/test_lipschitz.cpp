#include <gtest/gtest.h>

#include <cmath>

#include "hrlab/lipschitz/decomposition.hpp"

using namespace hrlab;

namespace {

EstimateOptions opts(std::size_t n, std::uint64_t seed = 1) {
  EstimateOptions o;
  o.n_pairs = n;
  o.seed = seed;
  return o;
}

}  // namespace

TEST(Lipschitz, LinearFunctionWithinTwoPercent) {
  Vec c = Vec::LinSpaced(6, -1.0, 2.0);
  auto f = [c](const ConstVecRef& z) { return c.dot(z); };
  auto box = CompactBox::cube(6, -1, 1);
  const auto est = estimate_lipschitz(f, box, opts(5000));
  EXPECT_LE(est.constant_hat, c.norm() * (1 + 1e-9));
  EXPECT_GE(est.constant_hat, 0.98 * c.norm());
  // Long pairs, short pairs, then climb_starts x climb_iterations ascent steps.
  EXPECT_EQ(est.pairs_or_points, 5000u + 500u + 8u * 200u);
}

TEST(Lipschitz, AscentReachesCornerPeak) {
  // |grad f| peaks at the corner u = 0, p = 1 with value 0.9 sqrt(8).
  auto f = [](const ConstVecRef& z) {
    double s = 0.0;
    for (int i = 0; i < 8; ++i) s += -0.9 * std::tanh(z[i]) * z[8 + i];
    return s;
  };
  auto box = CompactBox::cube(16, 0, 1);
  const double exact = 0.9 * std::sqrt(8.0);
  auto o = opts(5000);
  o.climb_iterations = 0;
  const double plain = estimate_lipschitz(f, box, o).constant_hat;
  o.climb_iterations = 200;
  const double climbed = estimate_lipschitz(f, box, o).constant_hat;
  EXPECT_GT(climbed, plain);
  EXPECT_LE(climbed, exact * (1 + 1e-6));
  EXPECT_GE(climbed, 0.9 * exact);
}

TEST(Lipschitz, WeightedMetricUsesDualNorm) {
  Vec c = Vec::Ones(4);
  auto f = [c](const ConstVecRef& z) { return c.dot(z); };
  auto box = CompactBox::cube(4, -1, 1, Metric::weighted(2.0, 0.5));
  // d = |w ⊙ Δ|, w = (1/2, 1/2, 2, 2); dual norm of c is |c / w|.
  const double exact = std::sqrt(4.0 + 4.0 + 0.25 + 0.25);
  const auto est = estimate_lipschitz(f, box, opts(4000));
  EXPECT_NEAR(est.constant_hat, exact, 0.02 * exact);
  EXPECT_LE(est.constant_hat, exact * (1 + 1e-9));
}

TEST(Lipschitz, GradientNormMethod) {
  Vec c = Vec::LinSpaced(3, 1.0, 3.0);
  auto f = [c](const ConstVecRef& z) { return c.dot(z); };
  auto o = opts(200);
  o.method = LipschitzMethod::gradient_norm;
  const auto est = estimate_lipschitz(f, CompactBox::cube(3, 0, 1), o);
  EXPECT_NEAR(est.constant_hat, c.norm(), 1e-6);
  EXPECT_EQ(est.method, LipschitzMethod::gradient_norm);
}

TEST(Lipschitz, ConstantAndNorm) {
  auto box = CompactBox::cube(5, -1, 1);
  EXPECT_EQ(estimate_lipschitz([](const ConstVecRef&) { return 3.0; }, box, opts(1000)).constant_hat, 0.0);
  const auto est = estimate_lipschitz([](const ConstVecRef& z) { return z.norm(); }, box, opts(5000));
  EXPECT_LE(est.constant_hat, 1.0 + 1e-9);
  EXPECT_GE(est.constant_hat, 0.98);
}

TEST(Lipschitz, DeterministicAcrossThreadCounts) {
  auto f = [](const ConstVecRef& z) { return std::sin(3 * z[0]) * z[1] + z.squaredNorm(); };
  auto box = CompactBox::cube(4, -2, 2);
  auto a = opts(5000, 9), b = opts(5000, 9);
  b.threads = 4;
  EXPECT_EQ(estimate_lipschitz(f, box, a).constant_hat, estimate_lipschitz(f, box, b).constant_hat);
}

TEST(Lipschitz, Normalize) {
  auto f = [](const ConstVecRef& z) { return 4.0 * z[0]; };
  auto box = CompactBox::cube(2, 0, 1);
  const auto est = estimate_lipschitz(f, box, opts(2000));
  const auto g = normalize_to_one_lipschitz(f, est);
  EXPECT_NEAR(g.scale, 4.0, 0.08);
  EXPECT_LE(estimate_lipschitz(g.as_function(), box, opts(2000, 2)).constant_hat, 1.0 + 1e-9);
  LipschitzEstimate small;
  small.constant_hat = 0.3;
  EXPECT_EQ(normalize_to_one_lipschitz(f, small).scale, 1.0);
}

TEST(Lipschitz, DegenerateSamplerThrows) {
  PointSampler fixed = [](Rng&, Vec& out) { out = Vec::Zero(2); };
  auto o = opts(10);
  o.refine_pairs = 0;
  EXPECT_THROW(estimate_lipschitz_with([](const ConstVecRef&) { return 0.0; }, fixed, 2, Vec::Ones(2), 1.0, o),
               EstimationError);
}

TEST(Projection, MatchesDenseBoundaryGrid) {
  for (const Metric& metric : {Metric::euclidean(), Metric::weighted(0.5, 3.0)}) {
    CompactBox box(Vec::Constant(2, -1.0), (Vec(2) << 2.0, 0.5).finished(), metric);
    Rng rng = make_rng(3, "test/projection");
    std::uniform_real_distribution<double> coord(-6.0, 6.0);
    for (int trial = 0; trial < 50; ++trial) {
      Vec z(2);
      z << coord(rng), coord(rng);
      const auto proj = project_to_box(z, box);
      double best = box.contains(z) ? 0.0 : 1e300;
      constexpr int kGrid = 20000;
      for (int k = 0; k <= kGrid && !box.contains(z); ++k) {
        const double s = static_cast<double>(k) / kGrid;
        const double x = -1.0 + 3.0 * s, y = -1.0 + 1.5 * s;
        for (const Vec& b : {(Vec(2) << x, -1.0).finished(), (Vec(2) << x, 0.5).finished(),
                             (Vec(2) << -1.0, y).finished(), (Vec(2) << 2.0, y).finished()})
          best = std::min(best, box.distance(z, b));
      }
      EXPECT_NEAR(proj.distance, best, 1e-3) << metric.name();
      EXPECT_LE(proj.distance, best + 1e-12);
      EXPECT_TRUE(box.contains(proj.point));
    }
  }
}

TEST(Decomposition, IdentityHoldsEverywhere) {
  auto h = [](const ConstVecRef& z) { return std::tanh(z[0]) * z[1] + 0.3 * z[2] * z[2]; };
  auto d = radial_decomposition(h, CompactBox::cube(4, -1, 1), ScaleProfile::reciprocal(0.7));
  EXPECT_LT(identity_max_residual(d, 20000, 5, 3.0), 1e-12);
}

TEST(Decomposition, InteriorHasNoMatterPart) {
  auto h = [](const ConstVecRef& z) { return z.sum() + 2.0; };
  auto d = radial_decomposition(h, CompactBox::cube(3, -1, 1), ScaleProfile::reciprocal(1.0));
  const auto v = d.values(Vec::Constant(3, 0.4));
  EXPECT_EQ(v.rho, 0.0);
  EXPECT_EQ(v.lipschitz_part, h(Vec::Constant(3, 0.4)));
  EXPECT_EQ(v.matter_part, 0.0);
}

TEST(Decomposition, ConstantHamiltonianOutsideTheBox) {
  auto d = radial_decomposition([](const ConstVecRef&) { return 2.0; }, CompactBox::cube(2, 0, 1),
                                ScaleProfile::reciprocal(0.5));
  Vec z(2);
  z << 4.0, 0.5;
  const auto v = d.values(z);
  EXPECT_DOUBLE_EQ(v.rho, 3.0);
  EXPECT_DOUBLE_EQ(v.lipschitz_part, 2.0 / (1.0 + 6.0));
  EXPECT_DOUBLE_EQ(v.matter_part, 2.0 - 2.0 / 7.0);
  const auto n = d.normalized_view(z);
  EXPECT_DOUBLE_EQ(n.projected_hamiltonian, 2.0);
}

TEST(Decomposition, BadProfilesAreRejected) {
  auto box = CompactBox::cube(2, 0, 1);
  auto h = [](const ConstVecRef&) { return 1.0; };
  EXPECT_THROW(ScaleProfile::reciprocal(0.0), ProfileError);
  EXPECT_THROW(radial_decomposition(h, box, ScaleProfile::custom("two", 1, [](double) { return 2.0; })),
               ProfileError);
  EXPECT_THROW(radial_decomposition(h, box, ScaleProfile::custom("up", 1, [](double r) { return 1.0 + r; })),
               ProfileError);
  EXPECT_THROW(radial_decomposition(h, box, ScaleProfile::custom("neg", 1, [](double r) { return 1.0 - r; })),
               ProfileError);
  EXPECT_NO_THROW(
      radial_decomposition(h, box, ScaleProfile::custom("gauss", 1, [](double r) { return std::exp(-r * r); })));
}

TEST(Decomposition, GlobalConstantFallsWithRho0) {
  auto h = [](const ConstVecRef& z) { return 5.0 + 0.1 * z[0]; };
  auto box = CompactBox::cube(4, -1, 1);
  double prev = 1e300;
  for (double rho0 : {0.1, 0.3, 1.0, 3.0, 10.0, 30.0}) {
    const double c =
        global_lipschitz_estimate(radial_decomposition(h, box, ScaleProfile::reciprocal(rho0)), opts(4000)).constant_hat;
    EXPECT_LE(c, prev);
    prev = c;
  }
}

TEST(Decomposition, TuneFindsSmallestRho0) {
  auto h = [](const ConstVecRef& z) { return 5.0 + 0.1 * z[0]; };
  auto box = CompactBox::cube(4, -1, 1);
  TuneOptions t;
  t.estimate = opts(3000);
  const auto r = auto_tune_rho0(h, box, t);
  ASSERT_TRUE(r.reached);
  EXPECT_LE(r.constant, 1.0);
  const auto below = global_lipschitz_estimate(radial_decomposition(h, box, ScaleProfile::reciprocal(0.99 * r.rho0)),
                                               t.estimate, t.outer_scale);
  EXPECT_GT(below.constant_hat, 1.0);
}

TEST(Decomposition, TuneReportsUnreachableTarget) {
  auto h = [](const ConstVecRef& z) { return 10.0 * z[0]; };
  auto box = CompactBox::cube(2, -1, 1);
  TuneOptions t;
  t.estimate = opts(2000);
  const auto r = auto_tune_rho0(h, box, t);
  EXPECT_FALSE(r.reached);
  EXPECT_DOUBLE_EQ(r.rho0, 1e4 * box.diameter());
  EXPECT_GT(r.constant, 1.0);
}

TEST(Decomposition, ConstraintSplitAtSnapshots) {
  TanhField field(1, 0.9);
  auto sched = CycleSchedule::sinusoidal(1.0);
  Vec u0 = Vec::Random(8), p0 = Vec::Random(8);
  auto run = run_cycles(field, sched, make_flow_state(PhasePoint(u0, p0), sched), 5, 0.05);
  ScalarFunction h = [&field](const ConstVecRef& z) {
    const Eigen::Index d = z.size() / 2;
    Vec beta(d);
    field.evaluate(z.head(d), beta);
    return beta.dot(z.tail(d));
  };
  auto box = box_from_snapshots(run.snapshots);
  for (const auto& s : run.snapshots) EXPECT_TRUE(box.contains(s.state.point.z()));
  auto decomp = radial_decomposition(h, box, ScaleProfile::reciprocal(1.0));
  const auto report = check_constraint_split(decomp, sched, run.snapshots);
  ASSERT_EQ(report.entries.size(), 5u);
  EXPECT_TRUE(report.all_vanish);
  for (std::size_t i = 0; i < report.entries.size(); ++i) {
    const auto& e = report.entries[i];
    EXPECT_EQ(e.matter_part_unscaled, 0.0);
    EXPECT_EQ(e.lipschitz_part_unscaled, h(run.snapshots[i].state.point.z()));
    EXPECT_LE(std::abs(e.hamiltonian), e.tolerance);
  }
}
