#ifndef HRLAB_CONCENTRATION_PROFILE_HPP
#define HRLAB_CONCENTRATION_PROFILE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hrlab/core/io.hpp"
#include "hrlab/core/parallel.hpp"
#include "hrlab/core/random.hpp"
#include "hrlab/geometry/phase_point.hpp"

namespace hrlab {

using ConstVecRef = Eigen::Ref<const Vec>;

/// Sampler for a metric-measure space: the uniform measure on S^N ⊂ ℝ^{N+1},
/// an isotropic Gaussian on ℝ^d, or the uniform measure on a box.
class MMSpaceSampler {
 public:
  enum class Kind { sphere, gaussian, product_uniform };

  static MMSpaceSampler sphere(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DimensionError("sphere sampler: N must be >= 1");
    MMSpaceSampler s(Kind::sphere, n + 1, seed);
    s.intrinsic_ = n;
    return s;
  }

  static MMSpaceSampler gaussian(std::size_t d, double sigma, std::uint64_t seed) {
    if (d < 1) throw DimensionError("gaussian sampler: d must be >= 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma)) throw ValidationError("gaussian sampler: sigma must be positive");
    MMSpaceSampler s(Kind::gaussian, d, seed);
    s.intrinsic_ = d;
    s.sigma_ = sigma;
    return s;
  }

  static MMSpaceSampler product_uniform(Vec lower, Vec upper, std::uint64_t seed) {
    if (lower.size() == 0 || lower.size() != upper.size())
      throw DimensionError("product_uniform sampler: bounds must be non-empty and of equal length");
    if (!((upper - lower).array() > 0.0).all()) throw ValidationError("product_uniform sampler: lower < upper violated");
    MMSpaceSampler s(Kind::product_uniform, static_cast<std::size_t>(lower.size()), seed);
    s.intrinsic_ = s.ambient_;
    s.lower_ = std::move(lower);
    s.upper_ = std::move(upper);
    return s;
  }

  Kind kind() const { return kind_; }
  /// Length of the sample vectors.
  std::size_t dimension() const { return ambient_; }
  /// N for S^N, d otherwise.
  std::size_t intrinsic_dimension() const { return intrinsic_; }
  double sigma() const { return sigma_; }
  std::uint64_t seed() const { return seed_; }

  std::string name() const {
    switch (kind_) {
      case Kind::sphere: return "sphere";
      case Kind::gaussian: return "gaussian";
      case Kind::product_uniform: return "product_uniform";
    }
    return "unknown";
  }

  void sample(Rng& rng, Vec& out) const {
    const auto d = static_cast<Eigen::Index>(ambient_);
    out.resize(d);
    switch (kind_) {
      case Kind::sphere: {
        std::normal_distribution<double> g;
        double n2 = 0.0;
        do {
          for (Eigen::Index i = 0; i < d; ++i) out[i] = g(rng);
          n2 = out.squaredNorm();
        } while (!(n2 > 0.0));
        out /= std::sqrt(n2);
        break;
      }
      case Kind::gaussian: {
        std::normal_distribution<double> g(0.0, sigma_);
        for (Eigen::Index i = 0; i < d; ++i) out[i] = g(rng);
        break;
      }
      case Kind::product_uniform: {
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (Eigen::Index i = 0; i < d; ++i) out[i] = lower_[i] + u(rng) * (upper_[i] - lower_[i]);
        break;
      }
    }
  }

 private:
  MMSpaceSampler(Kind kind, std::size_t ambient, std::uint64_t seed) : kind_(kind), ambient_(ambient), seed_(seed) {}

  Kind kind_;
  std::size_t ambient_;
  std::size_t intrinsic_ = 0;
  std::uint64_t seed_;
  double sigma_ = 1.0;
  Vec lower_;
  Vec upper_;
};

using SampleFunction = std::function<double(const ConstVecRef&)>;

inline constexpr std::size_t kSampleChunk = 4096;

/// f evaluated on n samples from the stream `tag`. Chunk c always draws from
/// derive_seed(seed, tag, c), so the values do not depend on `threads`.
inline std::vector<double> sample_values(const SampleFunction& f, const MMSpaceSampler& sampler, std::size_t n,
                                         const std::string& tag, unsigned threads = 1) {
  std::vector<double> values(n);
  const std::size_t chunks = (n + kSampleChunk - 1) / kSampleChunk;
  parallel_for(chunks, threads, [&](std::size_t c) {
    Rng rng = make_rng(sampler.seed(), tag, c);
    Vec x;
    const std::size_t end = std::min(n, (c + 1) * kSampleChunk);
    for (std::size_t k = c * kSampleChunk; k < end; ++k) {
      sampler.sample(rng, x);
      const double v = f(x);
      if (!std::isfinite(v)) throw EvaluationError("non-finite function value on sample " + std::to_string(k), k);
      values[k] = v;
    }
  });
  return values;
}

/// Median of a sample (mean of the two central order statistics for even n).
inline double sample_median(std::vector<double> values) {
  if (values.empty()) throw ValidationError("median of an empty sample");
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double hi = values[mid];
  if (values.size() % 2 == 1) return hi;
  const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lo + hi);
}

struct MedianEstimate {
  double median_hat = 0.0;
  double fraction_above = 0.0;
  double fraction_below = 0.0;
  std::size_t n = 0;
};

inline MedianEstimate median_of(const std::vector<double>& values) {
  MedianEstimate m;
  m.n = values.size();
  m.median_hat = sample_median(values);
  std::size_t above = 0, below = 0;
  for (double v : values) {
    above += v > m.median_hat;
    below += v < m.median_hat;
  }
  m.fraction_above = static_cast<double>(above) / static_cast<double>(m.n);
  m.fraction_below = static_cast<double>(below) / static_cast<double>(m.n);
  return m;
}

/// Lévy mean M_f estimated as the empirical median of n samples.
inline MedianEstimate levy_median(const SampleFunction& f, const MMSpaceSampler& sampler, std::size_t n,
                                  unsigned threads = 1) {
  if (n < 100) throw ValidationError("levy_median: n must be >= 100");
  return median_of(sample_values(f, sampler, n, "concentration/median", threads));
}

struct DecayFit {
  double C1_hat = 0.0;
  double C2_hat = 0.0;
  /// Standard error of C2_hat from the regression residuals.
  double stderr_C2 = 0.0;
  double r_squared = 1.0;
  std::size_t points = 0;
};

struct ConcentrationProfile {
  std::vector<double> rho_grid;
  std::vector<double> tail_prob;
  std::vector<std::size_t> n_exceed;
  double median_hat = 0.0;
  /// Samples used for the tail counts (the median uses an independent set).
  std::size_t n_samples = 0;
  std::size_t n_median_samples = 0;
  double sigma_f = 1.0;
  double rho_p = 1.0;
  std::uint64_t seed = 0;
  std::optional<DecayFit> fit;

  /// 2 exp(−ρ²/(2ρ_p²)); with ρ_p² = 1/(N−1) this is the S^N bound.
  double bound_sphere(double rho) const { return 2.0 * std::exp(-rho * rho / (2.0 * rho_p * rho_p)); }
  /// ½ exp(−ρ²/(2σ_f²)).
  double bound_gaussian(double rho) const { return 0.5 * std::exp(-rho * rho / (2.0 * sigma_f * sigma_f)); }
  /// Binomial standard error of tail_prob[i].
  double standard_error(std::size_t i) const {
    const double p = tail_prob[i];
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_samples));
  }
};

inline constexpr std::size_t kMinExceedances = 10;

/// log tail = log C1 − C2·ρ²/(2ρ_p²), least squares over the grid points with
/// at least 10 exceedances. Needs 3 such points.
inline DecayFit fit_decay_constant(const ConcentrationProfile& profile) {
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < profile.rho_grid.size(); ++i) {
    if (profile.n_exceed[i] < kMinExceedances || !(profile.tail_prob[i] > 0.0)) continue;
    const double r = profile.rho_grid[i];
    xs.push_back(r * r / (2.0 * profile.rho_p * profile.rho_p));
    ys.push_back(std::log(profile.tail_prob[i]));
  }
  const std::size_t n = xs.size();
  if (n < 3) throw FitError("fit_decay_constant: " + std::to_string(n) + " usable grid points, need >= 3");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw FitError("fit_decay_constant: degenerate regression (all rho equal)");
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    sse += r * r;
  }
  DecayFit fit;
  fit.points = n;
  fit.C2_hat = -slope;
  fit.C1_hat = std::exp(intercept);
  fit.stderr_C2 = n > 2 ? std::sqrt(sse / static_cast<double>(n - 2) / sxx) : 0.0;
  fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  return fit;
}

/// Tail counts P(|v − median| > ρ) of precomputed values over an ascending grid.
inline ConcentrationProfile tail_profile(const std::vector<double>& values, double median,
                                         const std::vector<double>& rho_grid, double sigma_f, double rho_p) {
  if (values.empty()) throw ValidationError("tail_profile: no samples");
  if (rho_grid.empty()) throw ValidationError("tail_profile: empty rho grid");
  for (std::size_t i = 0; i < rho_grid.size(); ++i) {
    if (!(rho_grid[i] > 0.0) || !std::isfinite(rho_grid[i]))
      throw ValidationError("tail_profile: rho_grid[" + std::to_string(i) + "] must be positive");
    if (i > 0 && !(rho_grid[i] > rho_grid[i - 1]))
      throw ValidationError("tail_profile: rho_grid must be strictly ascending");
  }
  if (!(sigma_f > 0.0) || !(rho_p > 0.0)) throw ValidationError("tail_profile: sigma_f and rho_p must be positive");
  std::vector<double> dev(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) dev[i] = std::abs(values[i] - median);
  std::sort(dev.begin(), dev.end());

  ConcentrationProfile p;
  p.rho_grid = rho_grid;
  p.median_hat = median;
  p.n_samples = values.size();
  p.sigma_f = sigma_f;
  p.rho_p = rho_p;
  for (double r : rho_grid) {
    const auto above = static_cast<std::size_t>(dev.end() - std::upper_bound(dev.begin(), dev.end(), r));
    p.n_exceed.push_back(above);
    p.tail_prob.push_back(static_cast<double>(above) / static_cast<double>(values.size()));
  }
  try {
    p.fit = fit_decay_constant(p);
  } catch (const FitError&) {
    p.fit.reset();
  }
  return p;
}

/// Default ρ_p: 1/√(N−1) on S^N, σ_f otherwise.
inline double default_rho_p(const MMSpaceSampler& sampler, double sigma_f) {
  if (sampler.kind() == MMSpaceSampler::Kind::sphere) {
    if (sampler.intrinsic_dimension() < 2) throw DimensionError("default rho_p needs N >= 2 on spheres");
    return 1.0 / std::sqrt(static_cast<double>(sampler.intrinsic_dimension() - 1));
  }
  return sigma_f;
}

/// Empirical concentration profile of f. The median comes from n/2 samples of
/// one stream, tails are counted on n − n/2 samples of another.
inline ConcentrationProfile concentration_profile(const SampleFunction& f, const MMSpaceSampler& sampler,
                                                  const std::vector<double>& rho_grid, std::size_t n, double sigma_f,
                                                  std::optional<double> rho_p = std::nullopt, unsigned threads = 1) {
  if (n < 200) throw ValidationError("concentration_profile: n must be >= 200");
  const std::size_t n_med = n / 2;
  const std::vector<double> med_values = sample_values(f, sampler, n_med, "concentration/median", threads);
  const std::vector<double> tail_values = sample_values(f, sampler, n - n_med, "concentration/tail", threads);
  const double median = sample_median(med_values);
  ConcentrationProfile p = tail_profile(tail_values, median, rho_grid, sigma_f,
                                        rho_p.value_or(default_rho_p(sampler, sigma_f)));
  p.n_median_samples = n_med;
  p.seed = sampler.seed();
  return p;
}

/// CSV columns rho, tail_prob, bound_sphere, bound_gaussian, n_exceed.
inline std::string profile_csv(const ConcentrationProfile& p) {
  io::CsvWriter csv({"rho", "tail_prob", "bound_sphere", "bound_gaussian", "n_exceed"});
  for (std::size_t i = 0; i < p.rho_grid.size(); ++i) {
    csv.cell(p.rho_grid[i]).cell(p.tail_prob[i]).cell(p.bound_sphere(p.rho_grid[i]));
    csv.cell(p.bound_gaussian(p.rho_grid[i])).cell(p.n_exceed[i]);
    csv.end_row();
  }
  return csv.str();
}

/// 1 − √(π/8)·exp(−ε²(N−1)/2).
inline double sphere_isoperimetric_bound(std::size_t n, double epsilon) {
  return 1.0 - std::sqrt(std::numbers::pi / 8.0) * std::exp(-epsilon * epsilon * static_cast<double>(n - 1) / 2.0);
}

struct IsoperimetricEntry {
  double epsilon = 0.0;
  double bound = 0.0;
  double measure = 0.0;
  double stderr_measure = 0.0;
  bool pass = false;
};

struct IsoperimetricReport {
  std::size_t n_dim = 0;
  std::size_t n_samples = 0;
  std::uint64_t seed = 0;
  std::vector<IsoperimetricEntry> entries;
  bool all_pass = true;
};

/// A = {x ∈ S^N : x₁ ≤ 0}, the half-sphere below the median of x₁, so μ(A) = ½.
/// The geodesic distance to this cap is exact: d(x, A) = max(0, π/2 − arccos x₁).
/// μ(A_ε) is the fraction of n uniform samples with d(x, A) ≤ ε, compared to
/// the bound minus 3 binomial standard errors of the bound.
inline IsoperimetricReport sphere_isoperimetric_check(std::size_t n_dim, const std::vector<double>& epsilons,
                                                      std::size_t n, std::uint64_t seed, unsigned threads = 1) {
  if (n_dim < 2) throw DimensionError("sphere_isoperimetric_check: N must be >= 2");
  if (n == 0) throw ValidationError("sphere_isoperimetric_check: n must be >= 1");
  const MMSpaceSampler sampler = MMSpaceSampler::sphere(n_dim, seed);
  const double cap = std::numbers::pi / 2.0;
  const SampleFunction dist = [cap](const ConstVecRef& x) {
    return std::max(0.0, cap - std::acos(std::clamp(x[0], -1.0, 1.0)));
  };
  std::vector<double> d = sample_values(dist, sampler, n, "concentration/isoperimetric", threads);
  std::sort(d.begin(), d.end());

  IsoperimetricReport report;
  report.n_dim = n_dim;
  report.n_samples = n;
  report.seed = seed;
  for (double eps : epsilons) {
    if (!(eps >= 0.0)) throw ValidationError("sphere_isoperimetric_check: epsilon must be >= 0");
    IsoperimetricEntry e;
    e.epsilon = eps;
    e.bound = sphere_isoperimetric_bound(n_dim, eps);
    const auto inside = static_cast<std::size_t>(std::upper_bound(d.begin(), d.end(), eps) - d.begin());
    e.measure = static_cast<double>(inside) / static_cast<double>(n);
    const double b = std::clamp(e.bound, 0.0, 1.0);
    e.stderr_measure = std::sqrt(b * (1.0 - b) / static_cast<double>(n));
    e.pass = e.measure >= e.bound - 3.0 * e.stderr_measure;
    report.all_pass = report.all_pass && e.pass;
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace hrlab

#endif  // HRLAB_CONCENTRATION_PROFILE_HPP
