#ifndef HRLAB_GEOMETRY_PHASE_POINT_HPP
#define HRLAB_GEOMETRY_PHASE_POINT_HPP

#include <cstddef>
#include <string>

#include <Eigen/Dense>

#include "hrlab/core/error.hpp"

namespace hrlab {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using Vec4 = Eigen::Vector4d;

/// Coordinates per sub-quantum molecule: (x⁰..x³, y⁰..y³).
inline constexpr std::size_t kMoleculeBlock = 8;
inline constexpr std::size_t kSpacetimeDim = 4;

inline bool all_finite(const Eigen::Ref<const Vec>& v) { return v.allFinite(); }

/// State (u, p) ∈ ℝ^{8N} × ℝ^{8N} of N molecules in a single flat chart.
class PhasePoint {
 public:
  explicit PhasePoint(std::size_t n_molecules)
      : u_(Vec::Zero(static_cast<Eigen::Index>(kMoleculeBlock * n_molecules))),
        p_(Vec::Zero(static_cast<Eigen::Index>(kMoleculeBlock * n_molecules))),
        n_(n_molecules) {
    if (n_molecules == 0) throw ValidationError("PhasePoint: n_molecules must be positive");
  }

  PhasePoint(Vec u, Vec p) : u_(std::move(u)), p_(std::move(p)) {
    if (u_.size() == 0 || u_.size() % static_cast<Eigen::Index>(kMoleculeBlock) != 0)
      throw ValidationError("PhasePoint: length of u must be a positive multiple of 8, got " +
                            std::to_string(u_.size()));
    if (p_.size() != u_.size())
      throw ValidationError("PhasePoint: u and p lengths differ (" + std::to_string(u_.size()) +
                            " vs " + std::to_string(p_.size()) + ")");
    if (!u_.allFinite() || !p_.allFinite())
      throw ValidationError("PhasePoint: non-finite component");
    n_ = static_cast<std::size_t>(u_.size()) / kMoleculeBlock;
  }

  const Vec& u() const { return u_; }
  const Vec& p() const { return p_; }
  std::size_t n_molecules() const { return n_; }
  std::size_t dimension() const { return static_cast<std::size_t>(u_.size()); }

  /// Concatenated phase-space coordinate z = (u, p) ∈ ℝ^{16N}.
  Vec z() const {
    Vec out(u_.size() + p_.size());
    out << u_, p_;
    return out;
  }

  static PhasePoint from_z(const Eigen::Ref<const Vec>& z) {
    const Eigen::Index half = z.size() / 2;
    return PhasePoint(z.head(half), z.tail(half));
  }

  /// Position block x^μ of molecule k.
  Vec4 position(std::size_t k) const {
    return u_.segment<4>(static_cast<Eigen::Index>(kMoleculeBlock * k));
  }

 private:
  Vec u_;
  Vec p_;
  std::size_t n_ = 0;
};

}  // namespace hrlab

#endif  // HRLAB_GEOMETRY_PHASE_POINT_HPP
