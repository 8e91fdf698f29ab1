#ifndef HRLAB_DYNAMICS_SCHEDULE_HPP
#define HRLAB_DYNAMICS_SCHEDULE_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <string>

#include "hrlab/core/error.hpp"

namespace hrlab {

/// The conformal factor κ(t, τ) regulating the U_t flow.
///
/// One fundamental cycle spans 2T of external time. Equilibrium (metastable)
/// instants sit at odd multiples (2n+1)T where κ = 1 and the Hamiltonian
/// vanishes; the cycle with index n is [2nT, 2(n+1)T).
class CycleSchedule {
 public:
  enum class Kind { sinusoidal, frozen, custom };
  using KappaFn = std::function<double(double t, long tau_index)>;

  /// κ(t) = sin²(π t / 2T).
  static CycleSchedule sinusoidal(double period) { return CycleSchedule(Kind::sinusoidal, period, 0.0, {}); }

  /// κ held constant in t.
  static CycleSchedule frozen(double period, double kappa) {
    if (!(kappa >= 0.0 && kappa <= 1.0)) throw ScheduleError("frozen schedule: kappa outside [0,1]");
    return CycleSchedule(Kind::frozen, period, kappa, {});
  }

  static CycleSchedule custom(double period, KappaFn kappa) {
    if (!kappa) throw ValidationError("custom schedule: empty kappa function");
    return CycleSchedule(Kind::custom, period, 0.0, std::move(kappa));
  }

  Kind kind() const { return kind_; }
  double period() const { return period_; }
  double frozen_value() const { return frozen_; }

  std::string name() const {
    switch (kind_) {
      case Kind::sinusoidal: return "sinusoidal";
      case Kind::frozen: return "frozen";
      case Kind::custom: return "custom";
    }
    return "unknown";
  }

  long cycle_index(double t) const { return static_cast<long>(std::floor(t / (2.0 * period_))); }

  /// Continuous emergent time: τ = n exactly at the n-th equilibrium instant.
  double tau(double t) const { return (t - period_) / (2.0 * period_); }

  double equilibrium_time(long n) const { return (2.0 * static_cast<double>(n) + 1.0) * period_; }

  double kappa(double t) const {
    switch (kind_) {
      case Kind::sinusoidal: {
        const double s = std::sin(phase(t));
        return s * s;
      }
      case Kind::frozen: return frozen_;
      case Kind::custom: return custom_(t, cycle_index(t));
    }
    return 0.0;
  }

  /// 1 − κ(t). For the sinusoidal schedule this is cos², evaluated directly so
  /// that it is ~1e-32 rather than ~1e-16 at the equilibrium instants.
  double one_minus_kappa(double t) const {
    if (kind_ == Kind::sinusoidal) {
      const double c = std::cos(phase(t));
      return c * c;
    }
    return 1.0 - kappa(t);
  }

  /// Throws ScheduleError unless κ(t) ∈ [0, 1].
  void check_range(double t) const {
    const double k = kappa(t);
    if (!(k >= 0.0 && k <= 1.0))
      throw ScheduleError("kappa(" + std::to_string(t) + ") = " + std::to_string(k) + " outside [0,1]");
  }

 private:
  CycleSchedule(Kind kind, double period, double frozen, KappaFn fn)
      : kind_(kind), period_(period), frozen_(frozen), custom_(std::move(fn)) {
    if (!(period > 0.0) || !std::isfinite(period)) throw ValidationError("schedule: period T must be positive");
  }

  // π t / 2T with t reduced modulo the 2T cycle first (fmod is exact).
  double phase(double t) const {
    const double r = std::fmod(t, 2.0 * period_);
    return std::numbers::pi * r / (2.0 * period_);
  }

  Kind kind_;
  double period_;
  double frozen_;
  KappaFn custom_;
};

/// t = t̃ (1 − κ̃(t̃))^{-1}. Undefined where κ̃ = 1.
inline double reparameterize_time(double t_tilde, const CycleSchedule& schedule) {
  schedule.check_range(t_tilde);
  const double gap = schedule.one_minus_kappa(t_tilde);
  if (!(gap > 1e-14))
    throw SingularReparameterization("reparameterize_time: kappa reaches 1 at t_tilde = " +
                                     std::to_string(t_tilde) + " (equilibrium instant)");
  return t_tilde / gap;
}

/// Inverse of reparameterize_time within the cycle containing t: returns
/// 2nT + s̃ where s̃ is the smallest solution of s̃ / (1 − κ(s̃)) = t − 2nT.
/// Returns NaN when no solution exists inside the cycle.
inline double raw_time(double t, const CycleSchedule& schedule) {
  const double two_t = 2.0 * schedule.period();
  const double origin = two_t * static_cast<double>(schedule.cycle_index(t));
  const double target = t - origin;
  if (target <= 0.0) return origin;
  auto excess = [&](double s) {
    const double gap = schedule.one_minus_kappa(origin + s);
    if (!(gap > 1e-14)) return 1.0;  // beyond every finite target
    return s / gap > target ? 1.0 : -1.0;
  };
  constexpr int kScan = 512;
  double lo = 0.0;
  double hi = -1.0;
  for (int i = 1; i <= kScan; ++i) {
    const double s = two_t * i / kScan;
    if (excess(s) > 0.0) {
      hi = s;
      break;
    }
    lo = s;
  }
  if (hi < 0.0) return std::nan("");
  for (int it = 0; it < 200 && hi - lo > 1e-15 * two_t; ++it) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) > 0.0 ? hi : lo) = mid;
  }
  return origin + 0.5 * (lo + hi);
}

}  // namespace hrlab

#endif  // HRLAB_DYNAMICS_SCHEDULE_HPP
