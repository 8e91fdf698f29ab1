#ifndef HRLAB_LIPSCHITZ_DECOMPOSITION_HPP
#define HRLAB_LIPSCHITZ_DECOMPOSITION_HPP

#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "hrlab/dynamics/flow.hpp"
#include "hrlab/lipschitz/estimate.hpp"

namespace hrlab {

/// Radial damping R(ϱ): positive, nonincreasing, R(0) = 1.
class ScaleProfile {
 public:
  using Fn = std::function<double(double)>;

  /// R(ϱ) = 1 / (1 + ϱ/ϱ₀).
  static ScaleProfile reciprocal(double rho0) {
    if (!(rho0 > 0.0) || !std::isfinite(rho0)) throw ProfileError("reciprocal profile: rho0 must be positive");
    return ScaleProfile("reciprocal", rho0, [rho0](double rho) { return 1.0 / (1.0 + rho / rho0); });
  }

  static ScaleProfile custom(std::string family, double rho0, Fn fn) {
    if (!fn) throw ProfileError("custom profile: empty function");
    return ScaleProfile(std::move(family), rho0, std::move(fn));
  }

  const std::string& family() const { return family_; }
  double rho0() const { return rho0_; }
  double operator()(double rho) const { return fn_(rho); }

  /// R(0) = 1 to 1e-12, and R positive and nonincreasing on a grid over
  /// [0, span].
  void check(double span) const {
    const double r0 = fn_(0.0);
    if (!(std::abs(r0 - 1.0) <= 1e-12))
      throw ProfileError("scale profile '" + family_ + "': R(0) = " + std::to_string(r0) + ", expected 1");
    constexpr int kGrid = 256;
    double prev = r0;
    for (int i = 1; i <= kGrid; ++i) {
      const double r = fn_(span * i / kGrid);
      if (!(r > 0.0) || !std::isfinite(r)) throw ProfileError("scale profile '" + family_ + "' is not positive");
      if (r > prev * (1.0 + 1e-12)) throw ProfileError("scale profile '" + family_ + "' is increasing");
      prev = r;
    }
  }

 private:
  ScaleProfile(std::string family, double rho0, Fn fn)
      : family_(std::move(family)), rho0_(rho0), fn_(std::move(fn)) {}

  std::string family_;
  double rho0_;
  Fn fn_;
};

struct DecompositionValues {
  double hamiltonian = 0.0;
  double lipschitz_part = 0.0;
  double matter_part = 0.0;
  double rho = 0.0;
  double profile = 1.0;
};

/// H(z) = R(ϱ(z))·H(z̄) + δH(z), with z̄ the box projection and ϱ its distance.
class HamiltonianDecomposition {
 public:
  HamiltonianDecomposition(ScalarFunction h, CompactBox box, ScaleProfile profile)
      : h_(std::move(h)), box_(std::move(box)), profile_(std::move(profile)) {
    if (!h_) throw ValidationError("radial_decomposition: empty Hamiltonian");
    profile_.check(16.0 * box_.diameter());
  }

  const CompactBox& box() const { return box_; }
  const ScaleProfile& profile() const { return profile_; }
  const ScalarFunction& hamiltonian() const { return h_; }

  DecompositionValues values(const ConstVecRef& z) const {
    const BoxProjection proj = project_to_box(z, box_);
    DecompositionValues v;
    v.rho = proj.distance;
    v.profile = v.rho == 0.0 ? 1.0 : profile_(v.rho);
    v.hamiltonian = h_(z);
    v.lipschitz_part = v.profile * (v.rho == 0.0 ? v.hamiltonian : h_(proj.point));
    v.matter_part = v.hamiltonian - v.lipschitz_part;
    return v;
  }

  double lipschitz_part(const ConstVecRef& z) const {
    const BoxProjection proj = project_to_box(z, box_);
    if (proj.distance == 0.0) return h_(z);
    return profile_(proj.distance) * h_(proj.point);
  }

  double matter_part(const ConstVecRef& z) const { return values(z).matter_part; }

  /// Normalized view H/R = H(z̄) + δH/R.
  struct NormalizedView {
    double scaled_hamiltonian = 0.0;
    double projected_hamiltonian = 0.0;
    double scaled_matter = 0.0;
  };

  NormalizedView normalized_view(const ConstVecRef& z) const {
    const DecompositionValues v = values(z);
    return {v.hamiltonian / v.profile, v.lipschitz_part / v.profile, v.matter_part / v.profile};
  }

 private:
  ScalarFunction h_;
  CompactBox box_;
  ScaleProfile profile_;
};

inline HamiltonianDecomposition radial_decomposition(ScalarFunction h, const CompactBox& box,
                                                     const ScaleProfile& profile) {
  return HamiltonianDecomposition(std::move(h), box, profile);
}

/// Global sampling region around K′: a third of the draws inside the box, a
/// third in a thin shell (up to 10% beyond each face), a third in the box
/// inflated about its center by up to (1 + 2·outer_scale).
inline PointSampler global_sampler(const CompactBox& box, double outer_scale = 1.0) {
  return [center = box.center(), half = box.half_width(), outer_scale](Rng& rng, Vec& out) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> sym(-1.0, 1.0);
    const double pick = unit(rng);
    const double grow = unit(rng);
    double s = 1.0;
    if (pick >= 2.0 / 3.0)
      s = 1.0 + 2.0 * outer_scale * grow;
    else if (pick >= 1.0 / 3.0)
      s = 1.0 + 0.1 * grow;
    out.resize(center.size());
    for (Eigen::Index i = 0; i < center.size(); ++i) out[i] = center[i] + s * half[i] * sym(rng);
  };
}

/// Sampled Lipschitz constant of lipschitz_part over the global region.
inline LipschitzEstimate global_lipschitz_estimate(const HamiltonianDecomposition& decomp,
                                                   const EstimateOptions& options, double outer_scale = 1.0) {
  const CompactBox& box = decomp.box();
  const ScalarFunction part = [&decomp](const ConstVecRef& z) { return decomp.lipschitz_part(z); };
  const double diameter = box.diameter() * (1.0 + 2.0 * outer_scale);
  const CompactBox outer = box.dilated(outer_scale);
  return estimate_lipschitz_with(part, global_sampler(box, outer_scale), box.dimension(), box.weights(), diameter,
                                 options, &outer);
}

/// max |H − (lipschitz_part + matter_part)| over n global samples.
inline double identity_max_residual(const HamiltonianDecomposition& decomp, std::size_t n, std::uint64_t seed,
                                    double outer_scale = 1.0) {
  Rng rng = make_rng(seed, "lipschitz/identity");
  const PointSampler sampler = global_sampler(decomp.box(), outer_scale);
  Vec z;
  double worst = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sampler(rng, z);
    const DecompositionValues v = decomp.values(z);
    worst = std::max(worst, std::abs(v.hamiltonian - (v.lipschitz_part + v.matter_part)));
  }
  return worst;
}

struct TuneOptions {
  EstimateOptions estimate;
  /// Search bracket as multiples of the box diameter.
  double rho_lo_factor = 1e-3;
  double rho_hi_factor = 1e4;
  double target = 1.0;
  int iterations = 40;
  double outer_scale = 1.0;
};

struct TuneResult {
  double rho0 = 0.0;
  double constant = 0.0;
  /// False when even the upper end of the bracket misses the target.
  bool reached = false;
  int evaluations = 0;
};

/// Smallest ϱ₀ (log-bisection) whose sampled global constant of
/// R(ϱ)·H(z̄) is ≤ target. Every evaluation reuses the same seed, so the
/// comparison across ϱ₀ is on one sample set.
inline TuneResult auto_tune_rho0(const ScalarFunction& h, const CompactBox& box, const TuneOptions& options = {}) {
  TuneResult result;
  auto constant_at = [&](double rho0) {
    ++result.evaluations;
    return global_lipschitz_estimate(radial_decomposition(h, box, ScaleProfile::reciprocal(rho0)), options.estimate,
                                     options.outer_scale)
        .constant_hat;
  };
  double lo = options.rho_lo_factor * box.diameter();
  double hi = options.rho_hi_factor * box.diameter();
  const double c_hi = constant_at(hi);
  if (c_hi > options.target) {
    result.rho0 = hi;
    result.constant = c_hi;
    return result;
  }
  const double c_lo = constant_at(lo);
  if (c_lo <= options.target) {
    result.rho0 = lo;
    result.constant = c_lo;
    result.reached = true;
    return result;
  }
  double best = c_hi;
  for (int it = 0; it < options.iterations; ++it) {
    const double mid = std::sqrt(lo * hi);
    const double c = constant_at(mid);
    if (c <= options.target) {
      hi = mid;
      best = c;
    } else {
      lo = mid;
    }
    if (hi / lo < 1.0 + 1e-6) break;
  }
  result.rho0 = hi;
  result.constant = best;
  result.reached = true;
  return result;
}

/// Box around a set of points, grown by `dilation` of its width per side;
/// degenerate coordinates get a pad of dilation·max(1, |value|).
inline CompactBox bounding_box(const std::vector<Vec>& points, double dilation = 0.1,
                               Metric metric = Metric::euclidean()) {
  if (points.empty()) throw ValidationError("bounding_box: no points");
  Vec lo = points.front();
  Vec hi = points.front();
  for (const auto& p : points) {
    if (p.size() != lo.size()) throw ValidationError("bounding_box: inconsistent dimensions");
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  for (Eigen::Index i = 0; i < lo.size(); ++i) {
    const double w = hi[i] - lo[i];
    const double pad = w > 0.0 ? dilation * w : dilation * std::max(1.0, std::abs(lo[i]));
    lo[i] -= pad;
    hi[i] += pad;
  }
  return CompactBox(lo, hi, metric);
}

/// Default K′: box around the equilibrium snapshots (u, p) of a run, +10%.
inline CompactBox box_from_snapshots(const std::vector<Snapshot>& snaps, double dilation = 0.1,
                                     Metric metric = Metric::euclidean()) {
  std::vector<Vec> points;
  points.reserve(snaps.size());
  for (const auto& s : snaps) points.push_back(s.state.point.z());
  return bounding_box(points, dilation, metric);
}

struct SplitEntry {
  double t = 0.0;
  double tau = 0.0;
  /// Time-dependent values, carrying the factor (1 − κ(t))^{1/2}.
  double hamiltonian = 0.0;
  double lipschitz_part = 0.0;
  double matter_part = 0.0;
  /// The same split of the κ-free shape function.
  double lipschitz_part_unscaled = 0.0;
  double matter_part_unscaled = 0.0;
  double tolerance = 0.0;
  bool vanishes = false;
};

struct ConstraintSplitReport {
  std::vector<SplitEntry> entries;
  bool all_vanish = true;
  /// Sign report: snapshots with matter_part > 0, and among them those with
  /// lipschitz_part ≤ 0 (unscaled values).
  std::size_t matter_positive = 0;
  std::size_t matter_positive_lipschitz_nonpositive = 0;
};

/// At each equilibrium snapshot, H_t = (1 − κ)^{1/2}·h(z) must vanish while
/// the two parts of h are reported individually.
inline ConstraintSplitReport check_constraint_split(const HamiltonianDecomposition& decomp,
                                                    const CycleSchedule& schedule,
                                                    const std::vector<Snapshot>& snaps) {
  ConstraintSplitReport report;
  for (const auto& snap : snaps) {
    const Vec z = snap.state.point.z();
    const DecompositionValues v = decomp.values(z);
    const double s = flow_speed(schedule, snap.state.t);
    SplitEntry e;
    e.t = snap.state.t;
    e.tau = snap.state.tau;
    e.hamiltonian = s * v.hamiltonian;
    e.lipschitz_part = s * v.lipschitz_part;
    e.matter_part = s * v.matter_part;
    e.lipschitz_part_unscaled = v.lipschitz_part;
    e.matter_part_unscaled = v.matter_part;
    e.tolerance = snapshot_tolerance(snap.state.point.p());
    e.vanishes = std::abs(e.lipschitz_part + e.matter_part) <= e.tolerance && std::abs(e.hamiltonian) <= e.tolerance;
    report.all_vanish = report.all_vanish && e.vanishes;
    if (v.matter_part > 0.0) {
      ++report.matter_positive;
      if (v.lipschitz_part <= 0.0) ++report.matter_positive_lipschitz_nonpositive;
    }
    report.entries.push_back(e);
  }
  return report;
}

}  // namespace hrlab

#endif  // HRLAB_LIPSCHITZ_DECOMPOSITION_HPP
