#ifndef HRLAB_GRAVITY_SCALES_HPP
#define HRLAB_GRAVITY_SCALES_HPP

#include <cmath>
#include <string>
#include <vector>

#include "hrlab/core/error.hpp"
#include "hrlab/core/io.hpp"

namespace hrlab {

/// Units as multiples of SI: one length unit is `length_m` metres, etc.
struct UnitScale {
  std::string name = "SI";
  double length_m = 1.0;
  double mass_kg = 1.0;
  double time_s = 1.0;
};

/// G, c, ħ and the Planck scales derived from them, in some unit system.
struct PhysicalConstants {
  double G = 6.67430e-11;      // m³ kg⁻¹ s⁻²
  double c = 299792458.0;      // m s⁻¹
  double hbar = 1.054571817e-34;  // J s
  UnitScale units;

  /// CODATA 2018 recommended values, SI.
  static PhysicalConstants codata2018() { return {}; }

  double planck_length() const { return std::sqrt(hbar * G / (c * c * c)); }
  double planck_force() const { return c * c * c * c / G; }
  double planck_mass() const { return std::sqrt(hbar * c / G); }
  double planck_energy() const { return planck_mass() * c * c; }
  double planck_density() const {
    const double l = planck_length();
    return planck_mass() / (l * l * l);
  }

  /// The same constants expressed in `target` units (target given in SI).
  PhysicalConstants in_units(const UnitScale& target) const {
    if (units.name != "SI") throw ValidationError("in_units: convert from SI constants only");
    const double L = target.length_m, M = target.mass_kg, T = target.time_s;
    PhysicalConstants out;
    out.G = G * M * T * T / (L * L * L);
    out.c = c * T / L;
    out.hbar = hbar * T / (M * L * L);
    out.units = target;
    return out;
  }

  /// G = c = 1 with the metre as length unit.
  UnitScale geometrized() const { return {"geometrized", 1.0, c * c / G, 1.0 / c}; }
  static UnitScale cgs() { return {"CGS", 1e-2, 1e-3, 1.0}; }
};

enum class DensityConvention { r1, r2 };

inline std::string to_string(DensityConvention d) { return d == DensityConvention::r1 ? "r1" : "r2"; }

/// Two masses m, M at separations r1 = λ·r2 and r2.
struct GravityScaleCase {
  std::string name;
  double m = 0.0;
  double M = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double lambda = 1.0;
  DensityConvention density = DensityConvention::r1;

  static GravityScaleCase make(std::string name, double m, double M, double r2, double lambda,
                               DensityConvention density = DensityConvention::r1) {
    GravityScaleCase c{std::move(name), m, M, lambda * r2, r2, lambda, density};
    c.validate();
    return c;
  }

  void validate() const {
    if (!(m >= 0.0) || !(M >= 0.0) || !std::isfinite(m) || !std::isfinite(M))
      throw ValidationError("gravity case '" + name + "': masses must be finite and >= 0");
    if (!(r1 > 0.0) || !(r2 > 0.0)) throw DomainError("gravity case '" + name + "': radii must be positive");
    if (!(lambda > 0.0)) throw DomainError("gravity case '" + name + "': lambda must be positive");
    if (std::abs(r1 / r2 - lambda) > 1e-12 * lambda)
      throw ValidationError("gravity case '" + name + "': lambda != r1/r2");
  }

  /// The same physical case in other units (target given in SI).
  GravityScaleCase in_units(const UnitScale& u) const {
    GravityScaleCase out = *this;
    out.m = m / u.mass_kg;
    out.M = M / u.mass_kg;
    out.r1 = r1 / u.length_m;
    out.r2 = r2 / u.length_m;
    return out;
  }
};

/// α = ((1+λ)/λ³)·(D/D_P)·(E/E_P), D = m/r³ at the convention radius, E = mc².
/// Defined for m = M only.
inline double alpha_closed_form(const GravityScaleCase& cs, const PhysicalConstants& k) {
  if (!(cs.r1 > 0.0) || !(cs.r2 > 0.0)) throw DomainError("alpha_closed_form: zero radius");
  if (!(cs.lambda > 0.0)) throw DomainError("alpha_closed_form: lambda must be positive");
  if (std::abs(cs.m - cs.M) > 1e-12 * std::max(cs.m, cs.M))
    throw ValidationError("alpha_closed_form: requires m = M (case '" + cs.name + "')");
  const double r = cs.density == DensityConvention::r1 ? cs.r1 : cs.r2;
  const double density = cs.m / (r * r * r);
  const double energy = cs.m * k.c * k.c;
  const double l = cs.lambda;
  return ((1.0 + l) / (l * l * l)) * (density / k.planck_density()) * (energy / k.planck_energy());
}

/// (|F(r2) − F(r1)|/F_P) ÷ (|r2 − r1|/l_P) with F = G m M / r².
inline double alpha_oracle(const GravityScaleCase& cs, const PhysicalConstants& k) {
  if (!(cs.r1 > 0.0) || !(cs.r2 > 0.0)) throw DomainError("alpha_oracle: zero radius");
  if (cs.r1 == cs.r2) throw SingularCaseError("alpha_oracle: r1 = r2 is singular (case '" + cs.name + "')");
  const double f1 = k.G * cs.m * cs.M / (cs.r1 * cs.r1);
  const double f2 = k.G * cs.m * cs.M / (cs.r2 * cs.r2);
  return (std::abs(f2 - f1) / k.planck_force()) / (std::abs(cs.r2 - cs.r1) / k.planck_length());
}

struct SweepRow {
  GravityScaleCase scase;
  /// Closed form with D at r1, and at r2.
  double alpha_formula = 0.0;
  double alpha_formula_r2 = 0.0;
  double alpha_oracle = 0.0;
  double ratio = 0.0;
  double ratio_r2 = 0.0;
};

/// Electron/Bohr radius, proton/1 fm, 1 kg/1 m, Earth, and Planck mass at
/// r1 = l_P; all with λ = 1/2.
inline std::vector<GravityScaleCase> default_gravity_cases(const PhysicalConstants& k) {
  const double lam = 0.5;
  return {
      GravityScaleCase::make("electron_atomic", 9.1093837015e-31, 9.1093837015e-31, 5.29177210903e-11, lam),
      GravityScaleCase::make("proton_nuclear", 1.67262192369e-27, 1.67262192369e-27, 1e-15, lam),
      GravityScaleCase::make("kilogram_meter", 1.0, 1.0, 1.0, lam),
      GravityScaleCase::make("earth", 5.9722e24, 5.9722e24, 6.371e6, lam),
      GravityScaleCase::make("planck", k.planck_mass(), k.planck_mass(), 2.0 * k.planck_length(), lam),
  };
}

inline SweepRow evaluate_case(const GravityScaleCase& cs, const PhysicalConstants& k) {
  cs.validate();
  SweepRow row;
  row.scase = cs;
  GravityScaleCase a = cs, b = cs;
  a.density = DensityConvention::r1;
  b.density = DensityConvention::r2;
  row.alpha_formula = alpha_closed_form(a, k);
  row.alpha_formula_r2 = alpha_closed_form(b, k);
  row.alpha_oracle = alpha_oracle(cs, k);
  row.ratio = row.alpha_oracle > 0.0 ? row.alpha_formula / row.alpha_oracle : 0.0;
  row.ratio_r2 = row.alpha_oracle > 0.0 ? row.alpha_formula_r2 / row.alpha_oracle : 0.0;
  return row;
}

inline std::vector<SweepRow> scale_sweep(const std::vector<GravityScaleCase>& cases, const PhysicalConstants& k) {
  std::vector<SweepRow> rows;
  rows.reserve(cases.size());
  for (const auto& c : cases) rows.push_back(evaluate_case(c, k));
  return rows;
}

/// CSV columns name, m_kg, M_kg, r1_m, r2_m, lambda, alpha_formula,
/// alpha_oracle, ratio, then the r2-density variants alpha_formula_r2, ratio_r2.
inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
  io::CsvWriter csv({"name", "m_kg", "M_kg", "r1_m", "r2_m", "lambda", "alpha_formula", "alpha_oracle", "ratio",
                     "alpha_formula_r2", "ratio_r2"});
  for (const auto& r : rows) {
    const auto& c = r.scase;
    csv.cell(c.name).cell(c.m).cell(c.M).cell(c.r1).cell(c.r2).cell(c.lambda);
    csv.cell(r.alpha_formula).cell(r.alpha_oracle).cell(r.ratio).cell(r.alpha_formula_r2).cell(r.ratio_r2);
    csv.end_row();
  }
  return csv.str();
}

}  // namespace hrlab

#endif  // HRLAB_GRAVITY_SCALES_HPP
