#include <gtest/gtest.h>

#include <cmath>

#include "hrlab/geometry/randers.hpp"

using namespace hrlab;

TEST(PhasePoint, ValidatesShape) {
  EXPECT_THROW(PhasePoint(0), ValidationError);
  EXPECT_THROW(PhasePoint(Vec::Zero(7), Vec::Zero(7)), ValidationError);
  EXPECT_THROW(PhasePoint(Vec::Zero(8), Vec::Zero(16)), ValidationError);
  Vec u = Vec::Zero(8);
  u[0] = NAN;
  EXPECT_THROW(PhasePoint(u, Vec::Zero(8)), ValidationError);
  PhasePoint p(3);
  EXPECT_EQ(p.n_molecules(), 3u);
  EXPECT_EQ(p.dimension(), 24u);
}

TEST(PhasePoint, PositionIsTheFirstFourCoordinates) {
  Vec u = Vec::LinSpaced(16, 0, 15);
  PhasePoint p(u, Vec::Zero(16));
  EXPECT_EQ(p.position(1), Vec4(8, 9, 10, 11));
  EXPECT_EQ(PhasePoint::from_z(p.z()).u(), u);
}

TEST(Fields, TanhBoundHoldsOnADenseGrid) {
  // Oracle: dense 1-D grid sup of |0.9 tanh(x)| over a wide range, per
  // coordinate. tanh rounds to exactly 1 beyond |x| ~ 19, so the sup is attained.
  TanhField f(1, 0.9);
  double sup = 0.0;
  Vec u(8), out(8);
  for (int k = -20000; k <= 20000; ++k) {
    u.setConstant(k * 1e-3);
    f.evaluate(u, out);
    sup = std::max(sup, out.cwiseAbs().maxCoeff());
  }
  EXPECT_LE(sup, 0.9);
  EXPECT_GT(sup, 0.9 * (1 - 1e-12));
  EXPECT_EQ(*f.certified_bound(), 0.9);
}

TEST(Fields, PullbackMatchesJacobianTranspose) {
  TanhField::Block w = TanhField::Block::Random();
  TanhField::BlockVec c = TanhField::BlockVec::Random();
  for (const Field& f : {Field(TanhField(2, 0.7, w, c)), Field(TanhField(2, 0.7)),
                         Field(LinearField(Mat::Random(16, 16)))}) {
    Vec u = Vec::Random(16), p = Vec::Random(16), got(16);
    f.pullback(u, p, got);
    const Vec want = numerical_jacobian(f, u).transpose() * p;
    EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-7) << f.name();
  }
}

TEST(Fields, FunctionFieldFiniteDifferencePullback) {
  FunctionField f(8, [](const ConstVecRef& u, VecRef out) { out = 0.5 * u.array().sin().matrix(); }, 0.5);
  Vec u = Vec::Random(8), p = Vec::Random(8), got(8);
  f.pullback(u, p, got);
  const Vec want = (0.5 * u.array().cos() * p.array()).matrix();
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-8);
}

TEST(Randers, ValidationPassesBelowOneAndFailsAbove) {
  EXPECT_TRUE(validate_randers(RandersField(TanhField(2, 0.9)), 2000, 1).pass);
  const auto bad = validate_randers(RandersField(TanhField(2, 1.5)), 2000, 1);
  EXPECT_FALSE(bad.pass);
  EXPECT_GT(bad.max_abs, 1.0);
  Vec c = Vec::Constant(8, 0.2);
  c[5] = -1.0;
  const auto edge = validate_randers(RandersField(ConstantField(c)), 10, 3);
  EXPECT_FALSE(edge.pass);
  EXPECT_EQ(edge.argmax_component, 5u);
}

TEST(Randers, NonFiniteFieldIsAnEvaluationError) {
  FunctionField f(8, [](const ConstVecRef&, VecRef out) { out.setConstant(NAN); });
  try {
    validate_randers(RandersField(Field(f)), 5, 0);
    FAIL();
  } catch (const EvaluationError& e) {
    EXPECT_EQ(e.sample_index, 0u);
  }
}

TEST(Randers, MetricMustBeSymmetricPositive) {
  Mat eta = Mat::Identity(8, 8);
  eta(0, 1) = 0.5;
  EXPECT_THROW(RandersField(ZeroField(8), eta), ValidationError);
  EXPECT_THROW(RandersField(ZeroField(8), -Mat::Identity(8, 8)), ValidationError);
  EXPECT_NO_THROW(RandersField(ZeroField(8), -Mat::Identity(8, 8), false));
}

TEST(Randers, FunctionOnAndOffTheCone) {
  HamiltonRandersStructure hrs{RandersField(ConstantField(Vec::Constant(8, 0.1)))};
  Vec theta = Vec::Zero(8);
  theta[0] = 3.0;
  theta[1] = 4.0;
  EXPECT_NEAR(randers_function(hrs, Vec::Zero(8), theta), 5.0 + 0.7, 1e-14);
  EXPECT_THROW(randers_function(hrs, Vec::Zero(8), Vec::Zero(8)), ConeViolation);
}

TEST(Randers, FundamentalTensorMatchesClosedForm) {
  // F = |θ| + b·θ: ½∂²F² = ∇F∇Fᵀ + F·(I − θ̂θ̂ᵀ)/|θ|.
  Vec b = 0.1 * Vec::LinSpaced(8, -1, 1);
  HamiltonRandersStructure hrs{RandersField(ConstantField(b))};
  Vec theta = Vec::LinSpaced(8, 0.3, 1.1);
  const double n = theta.norm();
  const Vec grad = theta / n + b;
  const double f = n + b.dot(theta);
  const Mat want = grad * grad.transpose() + f * (Mat::Identity(8, 8) - theta * theta.transpose() / (n * n)) / n;
  const Mat got = fundamental_tensor(hrs, Vec::Zero(8), theta);
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-6);
  EXPECT_LT((got - got.transpose()).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Randers, StencilLeavingTheConeThrows) {
  HamiltonRandersStructure hrs{RandersField(ZeroField(8))};
  Vec theta = Vec::Zero(8);
  theta[0] = 1e-7;
  EXPECT_THROW(fundamental_tensor(hrs, Vec::Zero(8), theta), StencilError);
}
