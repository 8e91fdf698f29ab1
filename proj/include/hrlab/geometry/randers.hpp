#ifndef HRLAB_GEOMETRY_RANDERS_HPP
#define HRLAB_GEOMETRY_RANDERS_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>

#include "hrlab/core/random.hpp"
#include "hrlab/geometry/fields.hpp"

namespace hrlab {

/// Drift β together with the metric η that defines α(u, θ) = sqrt(θᵀ η θ).
/// η defaults to the Euclidean identity and is then never materialized.
class RandersField {
 public:
  explicit RandersField(Field drift) : drift_(std::move(drift)) {}

  RandersField(Field drift, Mat eta, bool euclidean_signature = true)
      : drift_(std::move(drift)), eta_(std::move(eta)), euclidean_(euclidean_signature) {
    const auto d = static_cast<Eigen::Index>(drift_.dimension());
    if (eta_->rows() != d || eta_->cols() != d)
      throw ValidationError("RandersField: eta must be " + std::to_string(d) + "x" + std::to_string(d));
    if (!eta_->allFinite()) throw ValidationError("RandersField: eta has non-finite entries");
    const double scale = std::max(1.0, eta_->cwiseAbs().maxCoeff());
    if ((*eta_ - eta_->transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ValidationError("RandersField: eta is not symmetric");
    if (euclidean_ && eta_->llt().info() != Eigen::Success)
      throw ValidationError("RandersField: Euclidean-signature eta is not positive definite");
  }

  const Field& drift() const { return drift_; }
  std::size_t dimension() const { return drift_.dimension(); }
  std::optional<double> beta_bound() const { return drift_.certified_bound(); }
  bool euclidean_signature() const { return euclidean_; }
  bool has_identity_metric() const { return !eta_.has_value(); }

  Mat eta() const {
    if (eta_) return *eta_;
    const auto d = static_cast<Eigen::Index>(dimension());
    return Mat::Identity(d, d);
  }

  double alpha_squared(const ConstVecRef& theta) const {
    if (!eta_) return theta.squaredNorm();
    return theta.dot(*eta_ * theta);
  }

 private:
  Field drift_;
  std::optional<Mat> eta_;
  bool euclidean_ = true;
};

struct RandersValidation {
  double max_abs = 0.0;
  std::size_t argmax_sample = 0;
  std::size_t argmax_component = 0;
  Vec argmax_point;
  std::size_t samples = 0;
  bool pass = false;
};

struct RandersValidationOptions {
  /// Points are drawn uniformly from [-radius, radius]^d.
  double sample_radius = 10.0;
};

/// Checks the Randers condition max_i |β^i(u)| < 1 on random points.
inline RandersValidation validate_randers(const RandersField& field, std::size_t samples,
                                          std::uint64_t seed,
                                          const RandersValidationOptions& options = {}) {
  if (samples == 0) throw ValidationError("validate_randers: samples must be >= 1");
  const auto d = static_cast<Eigen::Index>(field.dimension());
  Rng rng = make_rng(seed, "geometry/validate_randers");
  std::uniform_real_distribution<double> coord(-options.sample_radius, options.sample_radius);
  Vec u(d), beta(d);
  RandersValidation report;
  report.samples = samples;
  report.argmax_point = Vec::Zero(d);
  for (std::size_t s = 0; s < samples; ++s) {
    for (Eigen::Index i = 0; i < d; ++i) u[i] = coord(rng);
    field.drift().evaluate(u, beta);
    if (!beta.allFinite()) throw EvaluationError("validate_randers: non-finite field output", s);
    Eigen::Index arg = 0;
    const double m = beta.cwiseAbs().maxCoeff(&arg);
    if (s == 0 || m > report.max_abs) {
      report.max_abs = m;
      report.argmax_sample = s;
      report.argmax_component = static_cast<std::size_t>(arg);
      report.argmax_point = u;
    }
  }
  report.pass = report.max_abs < 1.0;
  return report;
}

/// Hamilton–Randers function F = α + β on the time-like cone α² > tolerance.
struct HamiltonRandersStructure {
  RandersField field;
  double cone_tolerance = 1e-12;
};

inline bool in_time_like_cone(const HamiltonRandersStructure& hrs, const ConstVecRef& theta) {
  return hrs.field.alpha_squared(theta) > hrs.cone_tolerance;
}

inline double randers_function(const HamiltonRandersStructure& hrs, const ConstVecRef& u,
                               const ConstVecRef& theta) {
  const double a2 = hrs.field.alpha_squared(theta);
  if (!(a2 > hrs.cone_tolerance))
    throw ConeViolation("randers_function: theta outside the time-like cone (alpha^2 = " +
                        std::to_string(a2) + ")");
  Vec beta(u.size());
  hrs.field.drift().evaluate(u, beta);
  return std::sqrt(a2) + beta.dot(theta);
}

/// g^{ij}(u, θ) = ½ ∂²F²/∂θ_i∂θ_j by central second differences, symmetrized.
/// Default step h = 1e-4·(1 + |θ|).
inline Mat fundamental_tensor(const HamiltonRandersStructure& hrs, const ConstVecRef& u,
                              const ConstVecRef& theta, std::optional<double> step = std::nullopt) {
  const double h = step.value_or(1e-4 * (1.0 + theta.norm()));
  if (!(h > 0.0)) throw ValidationError("fundamental_tensor: step must be positive");
  const auto d = theta.size();
  Vec beta(d);
  hrs.field.drift().evaluate(u, beta);

  Vec work = theta;
  auto f2 = [&](const Vec& th) {
    const double a2 = hrs.field.alpha_squared(th);
    if (!(a2 > hrs.cone_tolerance))
      throw StencilError("fundamental_tensor: stencil point leaves the time-like cone");
    const double f = std::sqrt(a2) + beta.dot(th);
    return f * f;
  };

  const double center = f2(work);
  Mat g(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    work[i] = theta[i] + h;
    const double fp = f2(work);
    work[i] = theta[i] - h;
    const double fm = f2(work);
    work[i] = theta[i];
    g(i, i) = 0.5 * (fp - 2.0 * center + fm) / (h * h);
  }
  for (Eigen::Index i = 0; i < d; ++i) {
    for (Eigen::Index j = i + 1; j < d; ++j) {
      auto corner = [&](double si, double sj) {
        work[i] = theta[i] + si * h;
        work[j] = theta[j] + sj * h;
        const double v = f2(work);
        work[i] = theta[i];
        work[j] = theta[j];
        return v;
      };
      const double mixed = (corner(1, 1) - corner(1, -1) - corner(-1, 1) + corner(-1, -1)) / (4.0 * h * h);
      g(i, j) = 0.5 * mixed;
      g(j, i) = 0.5 * mixed;
    }
  }
  return 0.5 * (g + g.transpose());
}

}  // namespace hrlab

#endif  // HRLAB_GEOMETRY_RANDERS_HPP
