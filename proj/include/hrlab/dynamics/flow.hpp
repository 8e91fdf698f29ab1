#ifndef HRLAB_DYNAMICS_FLOW_HPP
#define HRLAB_DYNAMICS_FLOW_HPP

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "hrlab/core/io.hpp"
#include "hrlab/dynamics/schedule.hpp"
#include "hrlab/geometry/fields.hpp"

namespace hrlab {

enum class Integrator { rk4, euler };

inline std::string to_string(Integrator i) { return i == Integrator::rk4 ? "rk4" : "euler"; }

struct StepOptions {
  Integrator integrator = Integrator::rk4;
  /// Integrate u̇ = β(u), ṗ = −(∂β/∂u)ᵀ p verbatim. When false both right-hand
  /// sides carry the factor (1 − κ(t))^{1/2}, i.e. Hamilton's equations of H_t.
  bool raw_ode = false;
  /// Skip the cotangent equation entirely (u is autonomous).
  bool track_momenta = true;
};

struct FlowState {
  PhasePoint point;
  double t = 0.0;
  double t_tilde = 0.0;
  double tau = 0.0;
  std::uint64_t step = 0;
};

inline FlowState make_flow_state(PhasePoint point, const CycleSchedule& schedule, double t = 0.0,
                                 std::uint64_t step = 0) {
  return FlowState{std::move(point), t, raw_time(t, schedule), schedule.tau(t), step};
}

/// √(1 − κ(t)), with the schedule range enforced.
inline double flow_speed(const CycleSchedule& schedule, double t) {
  const double gap = schedule.one_minus_kappa(t);
  if (!(gap >= -1e-15 && gap <= 1.0 + 1e-15))
    throw ScheduleError("kappa(" + std::to_string(t) + ") = " + std::to_string(1.0 - gap) + " outside [0,1]");
  return std::sqrt(std::max(0.0, gap));
}

/// H_t(u, p) = (1 − κ(t))^{1/2} Σ_k β^k(u) p_k.
template <DriftField F>
double hamiltonian_at(const F& field, const CycleSchedule& schedule, const ConstVecRef& u,
                      const ConstVecRef& p, double t) {
  const double s = flow_speed(schedule, t);
  Vec beta(u.size());
  field.evaluate(u, beta);
  return s * beta.dot(p);
}

template <DriftField F>
double hamiltonian(const F& field, const CycleSchedule& schedule, const FlowState& state) {
  return hamiltonian_at(field, schedule, state.point.u(), state.point.p(), state.t);
}

/// Piecewise cycle Hamiltonian: Σ β^i p_i away from the instants t = nT and
/// exactly 0 within 1e-9 of them.
template <DriftField F>
double effective_cycle_hamiltonian(const F& field, const CycleSchedule& schedule, const FlowState& state) {
  const double n = std::round(state.t / schedule.period());
  if (std::abs(state.t - n * schedule.period()) <= 1e-9) return 0.0;
  Vec beta(state.point.u().size());
  field.evaluate(state.point.u(), beta);
  return beta.dot(state.point.p());
}

/// Fixed-step integrator for the (u, p) system. Owns its stage buffers, so
/// one stepper per thread.
template <DriftField F>
class FlowStepper {
 public:
  FlowStepper(const F& field, const CycleSchedule& schedule, StepOptions options = {})
      : field_(field), schedule_(schedule), options_(options) {
    const auto d = static_cast<Eigen::Index>(field.dimension());
    for (Vec* v : {&k1u_, &k2u_, &k3u_, &k4u_, &k1p_, &k2p_, &k3p_, &k4p_, &tu_, &tp_}) v->resize(d);
  }

  const StepOptions& options() const { return options_; }

  /// Advances (u, p) from t to t + dt in place.
  void advance(Vec& u, Vec& p, double t, double dt) {
    const bool mom = options_.track_momenta;
    if (options_.integrator == Integrator::euler) {
      const double s = speed(t);
      rhs(u, p, s, k1u_, k1p_);
      u += dt * k1u_;
      if (mom) p += dt * k1p_;
      return;
    }
    const double half = 0.5 * dt;
    const double s1 = speed(t);
    const double s2 = speed(t + half);
    const double s4 = speed(t + dt);

    rhs(u, p, s1, k1u_, k1p_);
    tu_ = u + half * k1u_;
    if (mom) tp_ = p + half * k1p_;
    rhs(tu_, tp_, s2, k2u_, k2p_);
    tu_ = u + half * k2u_;
    if (mom) tp_ = p + half * k2p_;
    rhs(tu_, tp_, s2, k3u_, k3p_);
    tu_ = u + dt * k3u_;
    if (mom) tp_ = p + dt * k3p_;
    rhs(tu_, tp_, s4, k4u_, k4p_);

    u += (dt / 6.0) * (k1u_ + 2.0 * k2u_ + 2.0 * k3u_ + k4u_);
    if (mom) p += (dt / 6.0) * (k1p_ + 2.0 * k2p_ + 2.0 * k3p_ + k4p_);
  }

 private:
  double speed(double t) const { return options_.raw_ode ? 1.0 : flow_speed(schedule_, t); }

  void rhs(const Vec& u, const Vec& p, double s, Vec& du, Vec& dp) {
    field_.evaluate(u, du);
    if (s != 1.0) du *= s;
    if (options_.track_momenta) {
      field_.pullback(u, p, dp);
      dp *= -s;
    }
  }

  const F& field_;
  const CycleSchedule& schedule_;
  StepOptions options_;
  Vec k1u_, k2u_, k3u_, k4u_, k1p_, k2p_, k3p_, k4p_, tu_, tp_;
};

/// One step of the flow starting at state.t.
template <DriftField F>
FlowState step_flow(const F& field, const CycleSchedule& schedule, const FlowState& state, double dt,
                    StepOptions options = {}) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("step_flow: dt must be positive");
  if (state.point.dimension() != field.dimension())
    throw ValidationError("step_flow: state dimension does not match the field");
  Vec u = state.point.u();
  Vec p = state.point.p();
  FlowStepper<F> stepper(field, schedule, options);
  stepper.advance(u, p, state.t, dt);
  const std::uint64_t step = state.step + 1;
  if (!u.allFinite() || !p.allFinite()) throw BlowUpError("step_flow: non-finite state", step);
  return make_flow_state(PhasePoint(std::move(u), std::move(p)), schedule, state.t + dt, step);
}

/// Number of steps per half cycle T; dt must divide T to within 1e-12.
inline std::uint64_t steps_per_half_cycle(const CycleSchedule& schedule, double dt) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("dt must be positive");
  const double ratio = schedule.period() / dt;
  const double steps = std::round(ratio);
  if (steps < 1.0 || std::abs(steps * dt - schedule.period()) > 1e-12 * std::max(1.0, schedule.period()))
    throw ValidationError("dt = " + io::format_double(dt) + " does not divide the period T = " +
                          io::format_double(schedule.period()));
  return static_cast<std::uint64_t>(steps);
}

struct Snapshot {
  FlowState state;
  long cycle = 0;
  double hamiltonian = 0.0;
  /// |H| ≤ 1e-9 (1 + |p|).
  bool vanishes = false;
};

struct CycleRun {
  std::vector<FlowState> trajectory;
  std::vector<Snapshot> snapshots;
};

struct RunOptions {
  StepOptions step;
  /// Keep every stride-th state (the first and last are always kept).
  std::size_t store_stride = 1;
  bool store_trajectory = true;
};

inline double snapshot_tolerance(const ConstVecRef& p) { return 1e-9 * (1.0 + p.norm()); }

/// Integrates n_cycles fundamental cycles from `initial` (which must sit at the
/// start of a cycle, t = 2mT) and records a snapshot at every equilibrium
/// instant (2n+1)T.
template <DriftField F>
CycleRun run_cycles(const F& field, const CycleSchedule& schedule, const FlowState& initial,
                    std::size_t n_cycles, double dt, const RunOptions& options = {}) {
  if (n_cycles == 0) throw ValidationError("run_cycles: n_cycles must be >= 1");
  if (initial.point.dimension() != field.dimension())
    throw ValidationError("run_cycles: state dimension does not match the field");
  const std::uint64_t per_half = steps_per_half_cycle(schedule, dt);
  const double two_t = 2.0 * schedule.period();
  const double cycles_before = initial.t / two_t;
  if (std::abs(cycles_before - std::round(cycles_before)) > 1e-12)
    throw ValidationError("run_cycles: initial time must be an even multiple of T");
  const long first_cycle = std::lround(cycles_before);
  const std::size_t stride = std::max<std::size_t>(1, options.store_stride);

  CycleRun run;
  Vec u = initial.point.u();
  Vec p = initial.point.p();
  FlowStepper<F> stepper(field, schedule, options.step);
  const std::uint64_t total = 2 * per_half * n_cycles;
  if (options.store_trajectory) run.trajectory.push_back(initial);

  for (std::uint64_t k = 1; k <= total; ++k) {
    const double t_prev = initial.t + static_cast<double>(k - 1) * dt;
    stepper.advance(u, p, t_prev, dt);
    const std::uint64_t step = initial.step + k;
    if (!u.allFinite() || !p.allFinite()) throw BlowUpError("run_cycles: non-finite state", step);

    const bool at_half = k % per_half == 0;
    const std::uint64_t halves = k / per_half;
    const bool equilibrium = at_half && (halves % 2 == 1);
    double t = initial.t + static_cast<double>(k) * dt;
    if (at_half) t = initial.t + static_cast<double>(halves) * schedule.period();

    const bool keep = options.store_trajectory && (k % stride == 0 || k == total || equilibrium);
    if (!keep && !equilibrium) continue;
    FlowState state = make_flow_state(PhasePoint(u, p), schedule, t, step);
    if (equilibrium) {
      Snapshot snap{state};
      snap.cycle = first_cycle + static_cast<long>(halves / 2);
      snap.state.tau = static_cast<double>(snap.cycle);
      snap.hamiltonian = hamiltonian_at(field, schedule, u, p, t);
      snap.vanishes = std::abs(snap.hamiltonian) <= snapshot_tolerance(p);
      run.snapshots.push_back(std::move(snap));
    }
    if (keep) run.trajectory.push_back(std::move(state));
  }
  return run;
}

/// CSV with columns t, tau, cycle, u_0..u_{d-1}, p_0..p_{d-1}, H.
template <DriftField F>
std::string trajectory_csv(const F& field, const CycleSchedule& schedule,
                           const std::vector<FlowState>& states) {
  const std::size_t d = field.dimension();
  std::vector<std::string> header{"t", "tau", "cycle"};
  for (std::size_t i = 0; i < d; ++i) header.push_back("u_" + std::to_string(i));
  for (std::size_t i = 0; i < d; ++i) header.push_back("p_" + std::to_string(i));
  header.push_back("H");
  io::CsvWriter csv(header);
  for (const auto& s : states) {
    csv.cell(s.t).cell(s.tau).cell(static_cast<long long>(schedule.cycle_index(s.t)));
    for (std::size_t i = 0; i < d; ++i) csv.cell(s.point.u()[static_cast<Eigen::Index>(i)]);
    for (std::size_t i = 0; i < d; ++i) csv.cell(s.point.p()[static_cast<Eigen::Index>(i)]);
    csv.cell(hamiltonian(field, schedule, s));
    csv.end_row();
  }
  return csv.str();
}

template <DriftField F>
std::string snapshots_csv(const F& field, const CycleSchedule& schedule, const std::vector<Snapshot>& snaps) {
  std::vector<FlowState> states;
  states.reserve(snaps.size());
  for (const auto& s : snaps) states.push_back(s.state);
  return trajectory_csv(field, schedule, states);
}

}  // namespace hrlab

#endif  // HRLAB_DYNAMICS_FLOW_HPP
