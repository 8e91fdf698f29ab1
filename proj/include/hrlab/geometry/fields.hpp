#ifndef HRLAB_GEOMETRY_FIELDS_HPP
#define HRLAB_GEOMETRY_FIELDS_HPP

#include <cmath>
#include <concepts>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>

#include "hrlab/geometry/phase_point.hpp"

namespace hrlab {

using ConstVecRef = Eigen::Ref<const Vec>;
using VecRef = Eigen::Ref<Vec>;

/// A drift vector field β : ℝ^d → ℝ^d together with the cotangent pullback
/// p ↦ (∂β/∂u)ᵀ p that drives the momentum equation.
template <class F>
concept DriftField = requires(const F& f, const Vec& u, const Vec& p, Vec& out) {
  { f.dimension() } -> std::convertible_to<std::size_t>;
  { f.certified_bound() } -> std::same_as<std::optional<double>>;
  { f.name() } -> std::convertible_to<std::string>;
  f.evaluate(u, out);
  f.pullback(u, p, out);
};

class ZeroField {
 public:
  explicit ZeroField(std::size_t dimension) : dim_(dimension) {}
  std::size_t dimension() const { return dim_; }
  std::optional<double> certified_bound() const { return 0.0; }
  std::string name() const { return "zero"; }
  void evaluate(const ConstVecRef&, VecRef out) const { out.setZero(); }
  void pullback(const ConstVecRef&, const ConstVecRef&, VecRef out) const { out.setZero(); }

 private:
  std::size_t dim_;
};

class ConstantField {
 public:
  explicit ConstantField(Vec value) : value_(std::move(value)) {
    if (!value_.allFinite()) throw ValidationError("ConstantField: non-finite component");
  }
  std::size_t dimension() const { return static_cast<std::size_t>(value_.size()); }
  std::optional<double> certified_bound() const { return value_.cwiseAbs().maxCoeff(); }
  std::string name() const { return "constant"; }
  void evaluate(const ConstVecRef&, VecRef out) const { out = value_; }
  void pullback(const ConstVecRef&, const ConstVecRef&, VecRef out) const { out.setZero(); }
  const Vec& value() const { return value_; }

 private:
  Vec value_;
};

/// β = amplitude · tanh(W u_k + c) on every 8-block u_k, with one coupling
/// block W and offset c shared by all molecules. |β^i| < amplitude always, so
/// the amplitude is a certified sup-norm bound.
class TanhField {
 public:
  using Block = Eigen::Matrix<double, 8, 8>;
  using BlockVec = Eigen::Matrix<double, 8, 1>;

  TanhField(std::size_t n_molecules, double amplitude, Block coupling = Block::Identity(),
            BlockVec offset = BlockVec::Zero())
      : n_(n_molecules), amplitude_(amplitude), coupling_(coupling), offset_(offset) {
    if (n_molecules == 0) throw ValidationError("TanhField: n_molecules must be positive");
    if (!(amplitude >= 0.0) || !std::isfinite(amplitude))
      throw ValidationError("TanhField: amplitude must be finite and non-negative");
    if (!coupling_.allFinite() || !offset_.allFinite())
      throw ValidationError("TanhField: non-finite coupling or offset");
    diagonal_ = coupling_.isIdentity(0.0);
  }

  std::size_t dimension() const { return kMoleculeBlock * n_; }
  std::optional<double> certified_bound() const { return amplitude_; }
  std::string name() const { return "tanh"; }
  std::size_t n_molecules() const { return n_; }
  double amplitude() const { return amplitude_; }
  const Block& coupling() const { return coupling_; }
  const BlockVec& offset() const { return offset_; }

  void evaluate(const ConstVecRef& u, VecRef out) const {
    for (std::size_t k = 0; k < n_; ++k) {
      const auto i = static_cast<Eigen::Index>(kMoleculeBlock * k);
      out.segment<8>(i) = amplitude_ * argument(u.segment<8>(i)).array().tanh().matrix();
    }
  }

  void pullback(const ConstVecRef& u, const ConstVecRef& p, VecRef out) const {
    for (std::size_t k = 0; k < n_; ++k) {
      const auto i = static_cast<Eigen::Index>(kMoleculeBlock * k);
      const BlockVec th = argument(u.segment<8>(i)).array().tanh().matrix();
      const BlockVec w = (amplitude_ * (1.0 - th.array().square()) * p.segment<8>(i).array()).matrix();
      if (diagonal_)
        out.segment<8>(i) = w;
      else
        out.segment<8>(i) = coupling_.transpose() * w;
    }
  }

 private:
  template <class Seg>
  BlockVec argument(const Seg& ub) const {
    if (diagonal_) return ub + offset_;
    return coupling_ * ub + offset_;
  }

  std::size_t n_;
  double amplitude_;
  Block coupling_;
  BlockVec offset_;
  bool diagonal_ = true;
};

/// β(u) = A u. Not Randers-admissible globally (unbounded); used where an
/// exact matrix-exponential solution is wanted.
class LinearField {
 public:
  explicit LinearField(Mat a) : a_(std::move(a)) {
    if (a_.rows() != a_.cols() || a_.rows() == 0) throw ValidationError("LinearField: matrix must be square");
    if (!a_.allFinite()) throw ValidationError("LinearField: non-finite entry");
  }
  std::size_t dimension() const { return static_cast<std::size_t>(a_.rows()); }
  std::optional<double> certified_bound() const { return std::nullopt; }
  std::string name() const { return "linear"; }
  void evaluate(const ConstVecRef& u, VecRef out) const { out.noalias() = a_ * u; }
  void pullback(const ConstVecRef&, const ConstVecRef& p, VecRef out) const { out.noalias() = a_.transpose() * p; }
  const Mat& matrix() const { return a_; }

 private:
  Mat a_;
};

/// Arbitrary closure. The pullback uses central differences of β with step
/// 1e-6·(1+|u_j|) per coordinate.
class FunctionField {
 public:
  using Fn = std::function<void(const ConstVecRef&, VecRef)>;

  FunctionField(std::size_t dimension, Fn fn, std::optional<double> bound = std::nullopt,
                std::string name = "function")
      : dim_(dimension), fn_(std::move(fn)), bound_(bound), name_(std::move(name)) {
    if (dim_ == 0) throw ValidationError("FunctionField: dimension must be positive");
  }
  std::size_t dimension() const { return dim_; }
  std::optional<double> certified_bound() const { return bound_; }
  std::string name() const { return name_; }
  void evaluate(const ConstVecRef& u, VecRef out) const { fn_(u, out); }

  void pullback(const ConstVecRef& u, const ConstVecRef& p, VecRef out) const {
    const auto d = static_cast<Eigen::Index>(dim_);
    Vec shifted = u;
    Vec plus(d), minus(d);
    for (Eigen::Index j = 0; j < d; ++j) {
      const double h = 1e-6 * (1.0 + std::abs(u[j]));
      shifted[j] = u[j] + h;
      fn_(shifted, plus);
      shifted[j] = u[j] - h;
      fn_(shifted, minus);
      shifted[j] = u[j];
      out[j] = (plus - minus).dot(p) / (2.0 * h);
    }
  }

 private:
  std::size_t dim_;
  Fn fn_;
  std::optional<double> bound_;
  std::string name_;
};

/// Closed set of field families behind one value type.
class Field {
 public:
  using Variant = std::variant<ZeroField, ConstantField, TanhField, LinearField, FunctionField>;

  template <class F>
    requires(!std::same_as<std::remove_cvref_t<F>, Field>)
  Field(F&& f) : v_(std::forward<F>(f)) {}  // NOLINT(google-explicit-constructor)

  std::size_t dimension() const {
    return std::visit([](const auto& f) { return f.dimension(); }, v_);
  }
  std::optional<double> certified_bound() const {
    return std::visit([](const auto& f) { return f.certified_bound(); }, v_);
  }
  std::string name() const {
    return std::visit([](const auto& f) { return std::string(f.name()); }, v_);
  }
  void evaluate(const ConstVecRef& u, VecRef out) const {
    std::visit([&](const auto& f) { f.evaluate(u, out); }, v_);
  }
  void pullback(const ConstVecRef& u, const ConstVecRef& p, VecRef out) const {
    std::visit([&](const auto& f) { f.pullback(u, p, out); }, v_);
  }

  Vec operator()(const ConstVecRef& u) const {
    Vec out(u.size());
    evaluate(u, out);
    return out;
  }

  const Variant& variant() const { return v_; }

 private:
  Variant v_;
};

static_assert(DriftField<ZeroField> && DriftField<ConstantField> && DriftField<TanhField> &&
              DriftField<LinearField> && DriftField<FunctionField> && DriftField<Field>);

/// Central-difference Jacobian ∂β_i/∂u_j.
template <DriftField F>
Mat numerical_jacobian(const F& field, const ConstVecRef& u) {
  const auto d = u.size();
  Mat jac(d, d);
  Vec shifted = u;
  Vec plus(d), minus(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const double h = 1e-6 * (1.0 + std::abs(u[j]));
    shifted[j] = u[j] + h;
    field.evaluate(shifted, plus);
    shifted[j] = u[j] - h;
    field.evaluate(shifted, minus);
    shifted[j] = u[j];
    jac.col(j) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

}  // namespace hrlab

#endif  // HRLAB_GEOMETRY_FIELDS_HPP
