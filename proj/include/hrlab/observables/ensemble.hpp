#ifndef HRLAB_OBSERVABLES_ENSEMBLE_HPP
#define HRLAB_OBSERVABLES_ENSEMBLE_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "hrlab/core/random.hpp"
#include "hrlab/geometry/phase_point.hpp"

namespace hrlab {

using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat8 = Eigen::Matrix<double, 8, 8>;

/// Per-molecule preparation measure μ_P: Gaussian on ℝ⁸ with the given mean
/// and positive semi-definite covariance.
class Preparation {
 public:
  Preparation(Vec8 mean, Mat8 covariance) : mean_(mean), cov_(covariance) {
    if (!mean_.allFinite() || !cov_.allFinite()) throw ValidationError("Preparation: non-finite mean or covariance");
    const double scale = std::max(1.0, cov_.cwiseAbs().maxCoeff());
    if ((cov_ - cov_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
      throw ValidationError("Preparation: covariance is not symmetric");
    Eigen::SelfAdjointEigenSolver<Mat8> eig(cov_);
    if (eig.eigenvalues().minCoeff() < -1e-12 * scale)
      throw ValidationError("Preparation: covariance is not positive semi-definite");
    root_ = eig.eigenvectors() * eig.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal();
  }

  /// Isotropic preparation: positions x^μ ~ N(position_mean, σ_x²), velocities
  /// y^μ ~ N(0, σ_y²).
  static Preparation isotropic(double position_mean, double sigma_x, double sigma_y) {
    Vec8 m = Vec8::Zero();
    m.head<4>().setConstant(position_mean);
    Vec8 var;
    var.head<4>().setConstant(sigma_x * sigma_x);
    var.tail<4>().setConstant(sigma_y * sigma_y);
    return Preparation(m, var.asDiagonal());
  }

  const Vec8& mean() const { return mean_; }
  const Mat8& covariance() const { return cov_; }
  Vec4 position_mean() const { return mean_.head<4>(); }

  Vec8 draw(Rng& rng) const {
    std::normal_distribution<double> g;
    Vec8 z;
    for (int i = 0; i < 8; ++i) z[i] = g(rng);
    return mean_ + root_ * z;
  }

 private:
  Vec8 mean_;
  Mat8 cov_;
  Mat8 root_;
};

enum class Tag { A, B, S };

inline std::string to_string(Tag t) {
  switch (t) {
    case Tag::A: return "A";
    case Tag::B: return "B";
    case Tag::S: return "S";
  }
  return "?";
}

enum class Normalization { per_tag, per_total };

inline std::string to_string(Normalization n) { return n == Normalization::per_tag ? "1/N_tag" : "1/N_total"; }

struct MembershipEvent {
  enum class Kind { added, removed, reweighted };
  Kind kind = Kind::added;
  std::size_t molecule = 0;
  long tau = 0;
  double weight = 0.0;
};

inline std::string to_string(MembershipEvent::Kind k) {
  switch (k) {
    case MembershipEvent::Kind::added: return "added";
    case MembershipEvent::Kind::removed: return "removed";
    case MembershipEvent::Kind::reweighted: return "reweighted";
  }
  return "?";
}

/// 𝒮 = A ⊔ B: N molecules, each tagged A or B, with per-molecule weights and
/// a log of every membership change.
class Ensemble {
 public:
  Ensemble(PhasePoint state, std::vector<Tag> labels, std::optional<Preparation> prep = std::nullopt)
      : state_(std::move(state)), labels_(std::move(labels)), prep_(std::move(prep)) {
    if (labels_.size() != state_.n_molecules())
      throw ValidationError("Ensemble: one label per molecule required");
    for (Tag t : labels_) {
      if (t == Tag::S) throw ValidationError("Ensemble: molecules are tagged A or B, never S");
      (t == Tag::A ? n_a_ : n_b_) += 1;
    }
    if (n_a_ == 0 || n_b_ == 0) throw SubsetError("Ensemble: both A and B need at least one molecule");
    weights_.assign(labels_.size(), 1.0 / static_cast<double>(labels_.size()));
    initial_weights_ = weights_;
  }

  /// N i.i.d. draws from `prep`; the first n_a molecules are tagged A.
  static Ensemble prepare(const Preparation& prep, std::size_t n_a, std::size_t n_b, Rng& rng) {
    if (n_a == 0 || n_b == 0) throw SubsetError("Ensemble::prepare: N_A and N_B must be >= 1");
    const std::size_t n = n_a + n_b;
    PhasePoint state(n);
    Vec u(static_cast<Eigen::Index>(8 * n));
    for (std::size_t k = 0; k < n; ++k) u.segment<8>(static_cast<Eigen::Index>(8 * k)) = prep.draw(rng);
    std::vector<Tag> labels(n, Tag::B);
    std::fill(labels.begin(), labels.begin() + static_cast<std::ptrdiff_t>(n_a), Tag::A);
    return Ensemble(PhasePoint(std::move(u), Vec::Zero(static_cast<Eigen::Index>(8 * n))), std::move(labels), prep);
  }

  std::size_t n_molecules() const { return labels_.size(); }
  std::size_t n_a() const { return n_a_; }
  std::size_t n_b() const { return n_b_; }
  std::size_t count(Tag t) const { return t == Tag::A ? n_a_ : t == Tag::B ? n_b_ : labels_.size(); }
  const std::vector<Tag>& labels() const { return labels_; }
  const PhasePoint& state() const { return state_; }
  const std::optional<Preparation>& preparation() const { return prep_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& initial_weights() const { return initial_weights_; }
  const std::vector<MembershipEvent>& events() const { return events_; }

  void set_state(PhasePoint state) {
    if (state.n_molecules() != labels_.size()) throw ValidationError("Ensemble::set_state: molecule count changed");
    state_ = std::move(state);
  }

  /// Bookkeeping for an exchange with the environment. These break free
  /// evolution and are only ever used to exercise the detector.
  void record_addition(std::size_t molecule, long tau) {
    events_.push_back({MembershipEvent::Kind::added, molecule, tau, 0.0});
  }
  void record_removal(std::size_t molecule, long tau) {
    check_index(molecule);
    events_.push_back({MembershipEvent::Kind::removed, molecule, tau, weights_[molecule]});
    weights_[molecule] = 0.0;
  }
  void reweight(std::size_t molecule, double weight, long tau) {
    check_index(molecule);
    weights_[molecule] = weight;
    events_.push_back({MembershipEvent::Kind::reweighted, molecule, tau, weight});
  }

 private:
  void check_index(std::size_t k) const {
    if (k >= labels_.size()) throw ValidationError("Ensemble: molecule index out of range");
  }

  PhasePoint state_;
  std::vector<Tag> labels_;
  std::optional<Preparation> prep_;
  std::size_t n_a_ = 0;
  std::size_t n_b_ = 0;
  std::vector<double> weights_;
  std::vector<double> initial_weights_;
  std::vector<MembershipEvent> events_;
};

/// X^μ: average of the position blocks x^μ of the tagged molecules.
inline Vec4 center_of_mass(const Ensemble& ensemble, const PhasePoint& snapshot, Tag tag,
                           Normalization norm = Normalization::per_tag) {
  if (snapshot.n_molecules() != ensemble.n_molecules())
    throw ValidationError("center_of_mass: snapshot does not match the ensemble");
  const std::size_t members = ensemble.count(tag);
  if (members == 0) throw SubsetError("center_of_mass: empty subset " + to_string(tag));
  Vec4 sum = Vec4::Zero();
  const auto& labels = ensemble.labels();
  for (std::size_t k = 0; k < labels.size(); ++k)
    if (tag == Tag::S || labels[k] == tag) sum += snapshot.position(k);
  const double denom = static_cast<double>(norm == Normalization::per_tag ? members : ensemble.n_molecules());
  return sum / denom;
}

struct FreeEvolutionReport {
  bool free = true;
  std::vector<MembershipEvent> events;
  /// Index of the first event, if any.
  std::optional<std::size_t> first_event;
  /// max_k |w_k − w_k(0)|.
  double weight_drift = 0.0;

  std::string describe() const {
    if (free) return "free evolution";
    std::string s = "membership changed: " + std::to_string(events.size()) + " event(s)";
    if (!events.empty())
      s += ", first " + to_string(events.front().kind) + " of molecule " + std::to_string(events.front().molecule) +
           " at tau " + std::to_string(events.front().tau);
    if (weight_drift > 0.0) s += ", weight drift " + std::to_string(weight_drift);
    return s;
  }
};

/// dμ_P(k)/dτ = 0: no molecule added, removed, or re-weighted.
inline FreeEvolutionReport check_free_evolution(const Ensemble& ensemble) {
  FreeEvolutionReport r;
  r.events = ensemble.events();
  if (!r.events.empty()) r.first_event = 0;
  const auto& w = ensemble.weights();
  const auto& w0 = ensemble.initial_weights();
  for (std::size_t k = 0; k < w.size(); ++k) r.weight_drift = std::max(r.weight_drift, std::abs(w[k] - w0[k]));
  r.free = r.events.empty() && r.weight_drift == 0.0;
  return r;
}

/// X^μ(τ) at the equilibrium indices τ = tau_grid[i].
struct ObservableTrajectory {
  std::vector<long> tau_grid;
  std::vector<Vec4> X;
  std::vector<Vec4> M;
  Tag tag = Tag::S;
  Normalization normalization = Normalization::per_tag;

  /// Linear interpolation between equilibrium indices; M may be
  /// discontinuous, so this is a convenience only.
  Vec4 at(double tau) const {
    if (tau_grid.empty()) throw ValidationError("ObservableTrajectory: empty");
    if (tau <= static_cast<double>(tau_grid.front())) return X.front();
    for (std::size_t i = 1; i < tau_grid.size(); ++i) {
      const auto t1 = static_cast<double>(tau_grid[i]);
      if (tau <= t1) {
        const auto t0 = static_cast<double>(tau_grid[i - 1]);
        const double w = (tau - t0) / (t1 - t0);
        return (1.0 - w) * X[i - 1] + w * X[i];
      }
    }
    return X.back();
  }

  /// max over τ-steps and μ of |X^μ(τ+1) − X^μ(τ)|.
  double max_step() const {
    double m = 0.0;
    for (std::size_t i = 1; i < X.size(); ++i) m = std::max(m, (X[i] - X[i - 1]).cwiseAbs().maxCoeff());
    return m;
  }
};

}  // namespace hrlab

#endif  // HRLAB_OBSERVABLES_ENSEMBLE_HPP
