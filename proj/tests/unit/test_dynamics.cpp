#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "hrlab/dynamics/flow.hpp"

using namespace hrlab;

namespace {

// Matrix exponential by scaling and squaring of a truncated Taylor series.
Mat expm(const Mat& a) {
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  while (norm / std::pow(2.0, squarings) > 0.25) ++squarings;
  const Mat s = a / std::pow(2.0, squarings);
  Mat term = Mat::Identity(a.rows(), a.cols());
  Mat sum = term;
  for (int k = 1; k <= 20; ++k) {
    term = term * s / k;
    sum += term;
  }
  for (int i = 0; i < squarings; ++i) sum = sum * sum;
  return sum;
}

}  // namespace

TEST(Schedule, KappaValuesAndEquilibria) {
  auto s = CycleSchedule::sinusoidal(2.0);
  EXPECT_DOUBLE_EQ(s.kappa(0.0), 0.0);
  EXPECT_NEAR(s.kappa(2.0), 1.0, 1e-15);
  EXPECT_NEAR(s.kappa(1.0), 0.5, 1e-15);
  EXPECT_LT(s.one_minus_kappa(2.0), 1e-30);
  EXPECT_DOUBLE_EQ(s.equilibrium_time(3), 14.0);
  EXPECT_DOUBLE_EQ(s.tau(s.equilibrium_time(3)), 3.0);
  EXPECT_EQ(s.cycle_index(3.99), 0);
  EXPECT_EQ(s.cycle_index(4.0), 1);
  for (double t = 0; t < 20; t += 0.137) {
    EXPECT_GE(s.kappa(t), 0.0);
    EXPECT_LE(s.kappa(t), 1.0);
  }
}

TEST(Schedule, RejectsBadInputs) {
  EXPECT_THROW(CycleSchedule::sinusoidal(0.0), ValidationError);
  EXPECT_THROW(CycleSchedule::frozen(1.0, 1.5), ScheduleError);
  auto bad = CycleSchedule::custom(1.0, [](double, long) { return 2.0; });
  EXPECT_THROW(bad.check_range(0.3), ScheduleError);
  EXPECT_THROW(flow_speed(bad, 0.3), ScheduleError);
}

TEST(Schedule, ReparameterizationInverse) {
  auto s = CycleSchedule::sinusoidal(1.0);
  for (double tt = 0.01; tt <= 0.5; tt += 0.01) {
    const double t = reparameterize_time(tt, s);
    EXPECT_NEAR(t, tt / std::pow(std::cos(std::numbers::pi * tt / 2.0), 2), 1e-12);
    EXPECT_NEAR(raw_time(t, s), tt, 1e-12);
  }
  EXPECT_THROW(reparameterize_time(1.0, s), SingularReparameterization);
}

TEST(Flow, LinearFieldMatchesMatrixExponential) {
  // Over one half cycle ∫√(1-κ) dt = 2T/π, so u(T) = exp(2T A/π) u0 and
  // p(T) = exp(-2T Aᵀ/π) p0.
  Eigen::MatrixXd a = 0.3 * Mat::Random(8, 8);
  LinearField f(a);
  auto s = CycleSchedule::sinusoidal(1.0);
  Vec u0 = Vec::Random(8), p0 = Vec::Random(8);
  auto run = run_cycles(f, s, make_flow_state(PhasePoint(u0, p0), s), 1, 1e-3);
  ASSERT_EQ(run.snapshots.size(), 1u);
  const auto& snap = run.snapshots[0].state;
  EXPECT_DOUBLE_EQ(snap.t, 1.0);
  const double w = 2.0 / std::numbers::pi;
  EXPECT_LT((snap.point.u() - expm(w * a) * u0).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_LT((snap.point.p() - expm(-w * a.transpose()) * p0).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(Flow, RawOdeLinear) {
  Mat a = 0.5 * Mat::Random(8, 8);
  LinearField f(a);
  auto s = CycleSchedule::sinusoidal(1.0);
  Vec u0 = Vec::Random(8);
  StepOptions opt;
  opt.raw_ode = true;
  FlowState st = make_flow_state(PhasePoint(u0, Vec::Zero(8)), s);
  for (int k = 0; k < 100; ++k) st = step_flow(f, s, st, 0.01, opt);
  EXPECT_LT((st.point.u() - expm(a) * u0).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_EQ(st.step, 100u);
}

TEST(Flow, FrozenKappaConservesHamiltonian) {
  auto s = CycleSchedule::frozen(1.0, 0.3);
  TanhField f(2, 0.8);
  FlowState st = make_flow_state(PhasePoint(Vec::Random(16), Vec::Random(16)), s);
  const double h0 = hamiltonian(f, s, st);
  for (int k = 0; k < 400; ++k) st = step_flow(f, s, st, 0.01);
  EXPECT_NEAR(hamiltonian(f, s, st), h0, 1e-8 * (1 + std::abs(h0)));
}

TEST(Flow, SnapshotsAtOddMultiplesWithVanishingH) {
  auto s = CycleSchedule::sinusoidal(1.0);
  TanhField f(3, 0.9);
  RunOptions opt;
  opt.store_stride = 10;
  auto run = run_cycles(f, s, make_flow_state(PhasePoint(Vec::Random(24), Vec::Random(24)), s), 4, 0.05, opt);
  ASSERT_EQ(run.snapshots.size(), 4u);
  for (std::size_t n = 0; n < 4; ++n) {
    const auto& snap = run.snapshots[n];
    EXPECT_EQ(snap.cycle, static_cast<long>(n));
    EXPECT_DOUBLE_EQ(snap.state.t, 2.0 * n + 1.0);
    EXPECT_DOUBLE_EQ(snap.state.tau, static_cast<double>(n));
    EXPECT_TRUE(snap.vanishes);
    EXPECT_EQ(effective_cycle_hamiltonian(f, s, snap.state), 0.0);
  }
  EXPECT_DOUBLE_EQ(run.trajectory.back().t, 8.0);
  EXPECT_EQ(run.trajectory.back().step, 160u);
}

TEST(Flow, StepBoundedByFieldBound) {
  auto s = CycleSchedule::sinusoidal(1.0);
  const double b = 0.9, dt = 0.1;
  TanhField f(2, b);
  auto run = run_cycles(f, s, make_flow_state(PhasePoint(5 * Vec::Random(16), Vec::Zero(16)), s), 3, dt);
  for (std::size_t k = 1; k < run.trajectory.size(); ++k) {
    const double du = (run.trajectory[k].point.u() - run.trajectory[k - 1].point.u()).cwiseAbs().maxCoeff();
    EXPECT_LE(du, b * dt * (1 + 1e-12));
  }
}

TEST(Flow, ValidatesDtAndStart) {
  auto s = CycleSchedule::sinusoidal(1.0);
  ZeroField f(8);
  auto st = make_flow_state(PhasePoint(1), s);
  EXPECT_THROW(run_cycles(f, s, st, 1, 0.3), ValidationError);
  EXPECT_THROW(run_cycles(f, s, st, 0, 0.25), ValidationError);
  EXPECT_THROW(run_cycles(f, s, make_flow_state(PhasePoint(1), s, 1.0), 1, 0.25), ValidationError);
  EXPECT_THROW(step_flow(TanhField(2, 0.5), s, st, 0.1), ValidationError);
  EXPECT_EQ(steps_per_half_cycle(s, 0.25), 4u);
}

TEST(Flow, BlowUpIsReported) {
  auto s = CycleSchedule::sinusoidal(1.0);
  LinearField f(1e200 * Mat::Identity(8, 8));
  StepOptions opt;
  opt.raw_ode = true;
  Vec u = Vec::Constant(8, 1e200);
  try {
    step_flow(f, s, make_flow_state(PhasePoint(u, Vec::Zero(8)), s), 1.0, opt);
    FAIL();
  } catch (const BlowUpError& e) {
    EXPECT_EQ(e.step_index, 1u);
  }
}

TEST(Flow, TrajectoryCsvShape) {
  auto s = CycleSchedule::sinusoidal(1.0);
  ZeroField f(8);
  auto run = run_cycles(f, s, make_flow_state(PhasePoint(1), s), 1, 0.5);
  const std::string csv = trajectory_csv(f, s, run.trajectory);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 1 + 5);
  EXPECT_EQ(csv.substr(0, 12), "t,tau,cycle,");
}
