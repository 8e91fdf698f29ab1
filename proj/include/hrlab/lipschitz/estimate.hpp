#ifndef HRLAB_LIPSCHITZ_ESTIMATE_HPP
#define HRLAB_LIPSCHITZ_ESTIMATE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hrlab/core/parallel.hpp"
#include "hrlab/core/random.hpp"
#include "hrlab/geometry/phase_point.hpp"

namespace hrlab {

using ConstVecRef = Eigen::Ref<const Vec>;
using ScalarFunction = std::function<double(const ConstVecRef&)>;

/// Euclidean distance, optionally with separate scales for the u half and the
/// p half of a phase-space coordinate: d² = Σ(Δu/u_scale)² + Σ(Δp/p_scale)².
class Metric {
 public:
  static Metric euclidean() { return Metric(); }

  static Metric weighted(double u_scale, double p_scale) {
    if (!(u_scale > 0.0) || !(p_scale > 0.0)) throw ValidationError("weighted metric: scales must be positive");
    Metric m;
    m.weighted_ = true;
    m.u_scale_ = u_scale;
    m.p_scale_ = p_scale;
    return m;
  }

  bool is_weighted() const { return weighted_; }
  double u_scale() const { return u_scale_; }
  double p_scale() const { return p_scale_; }
  std::string name() const { return weighted_ ? "weighted" : "euclidean"; }

  /// Per-coordinate weights w with d(a, b) = |w ⊙ (a − b)|.
  Vec weights(Eigen::Index dim) const {
    if (!weighted_) return Vec::Ones(dim);
    if (dim % 2 != 0) throw ValidationError("weighted metric needs an even (u, p) dimension");
    Vec w(dim);
    w.head(dim / 2).setConstant(1.0 / u_scale_);
    w.tail(dim / 2).setConstant(1.0 / p_scale_);
    return w;
  }

  double distance(const ConstVecRef& a, const ConstVecRef& b) const {
    if (!weighted_) return (a - b).norm();
    return weights(a.size()).cwiseProduct(a - b).norm();
  }

 private:
  bool weighted_ = false;
  double u_scale_ = 1.0;
  double p_scale_ = 1.0;
};

/// Axis-aligned compact box lower ≤ z ≤ upper in phase space.
class CompactBox {
 public:
  CompactBox(Vec lower, Vec upper, Metric metric = Metric::euclidean())
      : lower_(std::move(lower)), upper_(std::move(upper)), metric_(metric) {
    if (lower_.size() == 0 || lower_.size() != upper_.size())
      throw ValidationError("CompactBox: bounds must be non-empty and of equal length");
    if (!lower_.allFinite() || !upper_.allFinite()) throw ValidationError("CompactBox: non-finite bound");
    for (Eigen::Index i = 0; i < lower_.size(); ++i)
      if (!(lower_[i] < upper_[i]))
        throw ValidationError("CompactBox: lower < upper violated at coordinate " + std::to_string(i));
    weights_ = metric_.weights(lower_.size());
  }

  static CompactBox cube(Eigen::Index dim, double lo, double hi, Metric metric = Metric::euclidean()) {
    return CompactBox(Vec::Constant(dim, lo), Vec::Constant(dim, hi), metric);
  }

  const Vec& lower() const { return lower_; }
  const Vec& upper() const { return upper_; }
  const Metric& metric() const { return metric_; }
  const Vec& weights() const { return weights_; }
  Eigen::Index dimension() const { return lower_.size(); }
  Vec center() const { return 0.5 * (lower_ + upper_); }
  Vec half_width() const { return 0.5 * (upper_ - lower_); }
  double diameter() const { return distance(lower_, upper_); }

  double distance(const ConstVecRef& a, const ConstVecRef& b) const {
    return weights_.cwiseProduct(a - b).norm();
  }

  bool contains(const ConstVecRef& z) const {
    return (z.array() >= lower_.array()).all() && (z.array() <= upper_.array()).all();
  }

  Vec clamp(const ConstVecRef& z) const { return z.cwiseMax(lower_).cwiseMin(upper_); }

  /// Box grown by `fraction` of its width on every side.
  CompactBox dilated(double fraction) const {
    const Vec pad = fraction * (upper_ - lower_);
    return CompactBox(lower_ - pad, upper_ + pad, metric_);
  }

  void sample(Rng& rng, Vec& out) const {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    out.resize(lower_.size());
    for (Eigen::Index i = 0; i < lower_.size(); ++i) out[i] = lower_[i] + unit(rng) * (upper_[i] - lower_[i]);
  }

 private:
  Vec lower_;
  Vec upper_;
  Metric metric_;
  Vec weights_;
};

struct BoxProjection {
  Vec point;
  double distance = 0.0;
};

/// Nearest point of the box and the distance to it. Clamping is the exact
/// minimizer for any diagonal-weighted Euclidean metric.
inline BoxProjection project_to_box(const ConstVecRef& z, const CompactBox& box) {
  if (z.size() != box.dimension()) throw ValidationError("project_to_box: dimension mismatch");
  BoxProjection out;
  out.point = box.clamp(z);
  out.distance = box.distance(z, out.point);
  return out;
}

enum class LipschitzMethod { pair_sampling, gradient_norm };

inline std::string to_string(LipschitzMethod m) {
  return m == LipschitzMethod::pair_sampling ? "pair_sampling" : "gradient_norm";
}

struct LipschitzEstimate {
  double constant_hat = 0.0;
  LipschitzMethod method = LipschitzMethod::pair_sampling;
  std::size_t pairs_or_points = 0;
  std::string confidence_note;
};

struct EstimateOptions {
  std::size_t n_pairs = 10000;
  std::uint64_t seed = 0;
  LipschitzMethod method = LipschitzMethod::pair_sampling;
  /// Short gradient-aligned pairs added on top of n_pairs; default n_pairs/10.
  std::optional<std::size_t> refine_pairs;
  /// |δ| of a short pair as a fraction of the sampling diameter.
  double short_separation = 1e-4;
  /// Best short-pair points used as starts for local ascent of the slope.
  std::size_t climb_starts = 8;
  std::size_t climb_iterations = 200;
  unsigned threads = 1;
};

/// Draws one sample point.
using PointSampler = std::function<void(Rng&, Vec&)>;

namespace detail {

inline constexpr std::size_t kPairChunk = 1024;

/// Central-difference gradient with step 1e-6·(1+|z_i|).
inline void fd_gradient(const ScalarFunction& f, const Vec& z, Vec& work, Vec& grad) {
  work = z;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double h = 1e-6 * (1.0 + std::abs(z[i]));
    work[i] = z[i] + h;
    const double fp = f(work);
    work[i] = z[i] - h;
    const double fm = f(work);
    work[i] = z[i];
    grad[i] = (fp - fm) / (2.0 * h);
  }
}

struct Start {
  double ratio = 0.0;
  Vec point;
};

struct ChunkResult {
  double max_ratio = 0.0;
  std::size_t used = 0;
  std::vector<Start> best;  // descending by ratio, at most climb_starts
};

inline void keep_best(std::vector<Start>& best, std::size_t cap, double ratio, const Vec& z) {
  if (cap == 0 || (best.size() == cap && ratio <= best.back().ratio)) return;
  auto it = std::find_if(best.begin(), best.end(), [ratio](const Start& s) { return ratio > s.ratio; });
  best.insert(it, Start{ratio, z});
  if (best.size() > cap) best.pop_back();
}

}  // namespace detail

/// Sampled Lipschitz estimate with a caller-provided point distribution.
///
/// pair_sampling: max of |f(z₁) − f(z₂)| / d(z₁, z₂) over n_pairs independent
/// pairs plus refine_pairs short pairs (z, z + δ) with δ along the metric-dual
/// finite-difference gradient and |δ| = short_separation · diameter, then a
/// local ascent of the short-pair slope from the climb_starts best short
/// pairs. Always a lower bound on the true constant.
/// gradient_norm: max of the dual norm of the finite-difference gradient over
/// n_pairs points; a valid surrogate only for smooth f.
///
/// `keep_in` (optional) clips short-pair partners back into a box.
inline LipschitzEstimate estimate_lipschitz_with(const ScalarFunction& f, const PointSampler& sampler,
                                                 Eigen::Index dim, const Vec& weights, double diameter,
                                                 const EstimateOptions& options,
                                                 const CompactBox* keep_in = nullptr) {
  if (options.n_pairs == 0) throw ValidationError("estimate_lipschitz: n_pairs must be >= 1");
  if (!(diameter > 0.0)) throw ValidationError("estimate_lipschitz: diameter must be positive");
  const Vec inv_w2 = weights.cwiseProduct(weights).cwiseInverse();
  auto dist = [&](const Vec& a, const Vec& b) { return weights.cwiseProduct(a - b).norm(); };

  const bool pairs = options.method == LipschitzMethod::pair_sampling;
  const std::size_t n_long = options.n_pairs;
  const std::size_t n_short = pairs ? options.refine_pairs.value_or(std::max<std::size_t>(1, n_long / 10)) : 0;
  const std::size_t long_chunks = (n_long + detail::kPairChunk - 1) / detail::kPairChunk;
  const std::size_t short_chunks = (n_short + detail::kPairChunk - 1) / detail::kPairChunk;
  std::vector<detail::ChunkResult> results(long_chunks + short_chunks);

  // Ratio of the short pair at z, partner along the dual gradient.
  auto short_ratio = [&](const Vec& a, Vec& b, Vec& work, Vec& grad, Rng& rng) {
    std::normal_distribution<double> gauss;
    detail::fd_gradient(f, a, work, grad);
    Vec dir = grad.cwiseProduct(inv_w2);
    if (!(dir.squaredNorm() > 0.0) || !dir.allFinite())
      for (Eigen::Index i = 0; i < dim; ++i) dir[i] = gauss(rng);
    const double len = weights.cwiseProduct(dir).norm();
    const Vec delta = (options.short_separation * diameter / len) * dir;
    b = a + delta;
    if (keep_in && !keep_in->contains(b)) {
      b = a - delta;
      if (!keep_in->contains(b)) b = keep_in->clamp(b);
    }
    const double d = dist(a, b);
    if (!(d > 0.0)) return -1.0;
    const double ratio = std::abs(f(a) - f(b)) / d;
    if (!std::isfinite(ratio)) throw EstimationError("estimate_lipschitz: non-finite function value");
    return ratio;
  };

  parallel_for(results.size(), options.threads, [&](std::size_t c) {
    const bool is_long = c < long_chunks;
    const std::size_t chunk = is_long ? c : c - long_chunks;
    const std::size_t total = is_long ? n_long : n_short;
    const std::size_t begin = chunk * detail::kPairChunk;
    const std::size_t end = std::min(total, begin + detail::kPairChunk);
    Rng rng = make_rng(options.seed, is_long ? "lipschitz/primary" : "lipschitz/short", chunk);
    Vec a(dim), b(dim), work(dim), grad(dim);
    detail::ChunkResult r;
    for (std::size_t k = begin; k < end; ++k) {
      sampler(rng, a);
      if (!pairs) {
        detail::fd_gradient(f, a, work, grad);
        const double g = weights.cwiseInverse().cwiseProduct(grad).norm();
        if (!std::isfinite(g)) throw EstimationError("estimate_lipschitz: non-finite gradient");
        r.max_ratio = std::max(r.max_ratio, g);
        ++r.used;
        continue;
      }
      double ratio;
      if (is_long) {
        sampler(rng, b);
        const double d = dist(a, b);
        if (!(d > 0.0)) continue;
        ratio = std::abs(f(a) - f(b)) / d;
        if (!std::isfinite(ratio)) throw EstimationError("estimate_lipschitz: non-finite function value");
      } else {
        ratio = short_ratio(a, b, work, grad, rng);
        if (ratio < 0.0) continue;
        detail::keep_best(r.best, options.climb_starts, ratio, a);
      }
      r.max_ratio = std::max(r.max_ratio, ratio);
      ++r.used;
    }
    results[c] = std::move(r);
  });

  // Local (1+1) ascent of the short-pair slope from the best starts, clipped
  // to keep_in. Each accepted point is still a genuine pair, so the result
  // stays a lower bound.
  std::vector<detail::Start> starts;
  for (const auto& r : results)
    for (const auto& s : r.best) detail::keep_best(starts, options.climb_starts, s.ratio, s.point);
  std::vector<detail::ChunkResult> climbs(options.climb_iterations > 0 ? starts.size() : 0);
  parallel_for(climbs.size(), options.threads, [&](std::size_t c) {
    Rng rng = make_rng(options.seed, "lipschitz/climb", c);
    std::normal_distribution<double> gauss;
    Vec z = starts[c].point, trial(dim), b(dim), work(dim), grad(dim);
    double best = starts[c].ratio;
    double sigma = 0.1 * diameter / std::sqrt(static_cast<double>(dim));
    const Vec inv_w = weights.cwiseInverse();
    detail::ChunkResult r;
    for (std::size_t it = 0; it < options.climb_iterations; ++it) {
      for (Eigen::Index i = 0; i < dim; ++i) trial[i] = z[i] + sigma * inv_w[i] * gauss(rng);
      if (keep_in) trial = keep_in->clamp(trial);
      const double ratio = short_ratio(trial, b, work, grad, rng);
      ++r.used;
      if (ratio > best) {
        best = ratio;
        z = trial;
        sigma *= 1.5;
      } else {
        sigma *= 0.9;
      }
    }
    r.max_ratio = best;
    climbs[c] = std::move(r);
  });
  results.insert(results.end(), climbs.begin(), climbs.end());

  LipschitzEstimate est;
  est.method = options.method;
  for (const auto& r : results) {
    est.constant_hat = std::max(est.constant_hat, r.max_ratio);
    est.pairs_or_points += r.used;
  }
  if (est.pairs_or_points == 0) throw EstimationError("estimate_lipschitz: every sampled pair was degenerate");
  est.confidence_note =
      pairs ? "lower bound: max ratio over " + std::to_string(n_long) + " random pairs and " +
                  std::to_string(n_short) + " gradient-aligned short pairs, locally refined from " +
                  std::to_string(climbs.size()) + " starts"
            : "gradient-norm surrogate over " + std::to_string(n_long) +
                  " points; an upper-type bound only for smooth f";
  return est;
}

inline LipschitzEstimate estimate_lipschitz(const ScalarFunction& f, const CompactBox& domain,
                                            const EstimateOptions& options = {}) {
  const PointSampler sampler = [&domain](Rng& rng, Vec& out) { domain.sample(rng, out); };
  return estimate_lipschitz_with(f, sampler, domain.dimension(), domain.weights(), domain.diameter(), options,
                                 &domain);
}

/// g = f / M with M = max{1, constant_hat}. Dividing H by a constant rescales
/// time only; the orbits and the Randers condition are unchanged.
struct NormalizedFunction {
  ScalarFunction base;
  double scale = 1.0;

  double operator()(const ConstVecRef& z) const { return base(z) / scale; }
  ScalarFunction as_function() const {
    return [f = base, s = scale](const ConstVecRef& z) { return f(z) / s; };
  }
};

inline NormalizedFunction normalize_to_one_lipschitz(ScalarFunction f, const LipschitzEstimate& estimate) {
  return NormalizedFunction{std::move(f), std::max(1.0, estimate.constant_hat)};
}

}  // namespace hrlab

#endif  // HRLAB_LIPSCHITZ_ESTIMATE_HPP
