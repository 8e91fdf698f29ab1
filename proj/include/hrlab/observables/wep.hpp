#ifndef HRLAB_OBSERVABLES_WEP_HPP
#define HRLAB_OBSERVABLES_WEP_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hrlab/concentration/profile.hpp"
#include "hrlab/core/io.hpp"
#include "hrlab/core/parallel.hpp"
#include "hrlab/dynamics/flow.hpp"
#include "hrlab/observables/ensemble.hpp"

namespace hrlab {

/// The drift acting on one molecule. All molecules share it, so an ensemble
/// evolves as N independent copies of this 8-dimensional system.
struct MoleculeFieldSpec {
  enum class Family { tanh, zero, constant };
  Family family = Family::tanh;
  double amplitude = 0.9;
  Mat8 coupling = -Mat8::Identity();
  Vec8 offset = Vec8::Zero();
  /// Used by the constant family.
  Vec8 value = Vec8::Zero();

  Field make() const {
    switch (family) {
      case Family::tanh: return TanhField(1, amplitude, coupling, offset);
      case Family::zero: return ZeroField(kMoleculeBlock);
      case Family::constant: return ConstantField(Vec(value));
    }
    throw ValidationError("unknown field family");
  }

  double beta_bound() const {
    switch (family) {
      case Family::tanh: return amplitude;
      case Family::zero: return 0.0;
      case Family::constant: return value.cwiseAbs().maxCoeff();
    }
    return 0.0;
  }

  std::string name() const {
    switch (family) {
      case Family::tanh: return "tanh";
      case Family::zero: return "zero";
      case Family::constant: return "constant";
    }
    return "?";
  }
};

/// Evolves one molecule over n_cycles cycles from t = 0 and reports its
/// position block at every equilibrium instant (2n+1)T, n = 0..n_cycles−1.
template <DriftField F>
class MoleculeEvolver {
 public:
  MoleculeEvolver(const F& field, const CycleSchedule& schedule, double dt, std::size_t n_cycles,
                  StepOptions options = {})
      : schedule_(schedule), dt_(dt), n_cycles_(n_cycles), per_half_(steps_per_half_cycle(schedule, dt)),
        stepper_(field, schedule, with_frozen_momenta(options)), u_(8), p_(Vec::Zero(8)) {
    if (field.dimension() != kMoleculeBlock) throw ValidationError("MoleculeEvolver: field must act on one molecule");
    if (n_cycles == 0) throw ValidationError("MoleculeEvolver: n_cycles must be >= 1");
  }

  /// positions must hold n_cycles entries.
  void run(const Vec8& u0, Vec4* positions) {
    u_ = u0;
    const std::uint64_t total = (2 * n_cycles_ - 1) * per_half_;
    for (std::uint64_t k = 1; k <= total; ++k) {
      stepper_.advance(u_, p_, static_cast<double>(k - 1) * dt_, dt_);
      if (k % per_half_ != 0) continue;
      const std::uint64_t halves = k / per_half_;
      if (halves % 2 == 1) positions[halves / 2] = u_.head<4>();
    }
    if (!u_.allFinite()) throw BlowUpError("molecule evolution produced a non-finite state", total);
  }

 private:
  static StepOptions with_frozen_momenta(StepOptions o) {
    o.track_momenta = false;
    return o;
  }

  const CycleSchedule& schedule_;
  double dt_;
  std::size_t n_cycles_;
  std::uint64_t per_half_;
  FlowStepper<F> stepper_;
  Vec u_;
  Vec p_;
};

struct MeanGuide {
  std::vector<Vec4> M;
  /// Standard error of each M^μ(τ): sample deviation / √n.
  std::vector<Vec4> stderr_M;
  std::size_t n_reference = 0;
};

inline constexpr std::size_t kReferenceChunk = 4096;

/// M^μ(τ) = E_{μ_P}[x^μ at the τ-th equilibrium], estimated from a reference
/// ensemble of i.i.d. molecules drawn from `stream`. Tags play no role.
inline MeanGuide mean_guide(const Preparation& prep, const Field& field, const CycleSchedule& schedule,
                            std::size_t n_cycles, double dt, std::size_t reference_size, std::uint64_t seed,
                            unsigned threads = 1, StepOptions options = {},
                            const std::string& stream = "wep/reference") {
  if (reference_size < 2) throw ValidationError("mean_guide: reference ensemble needs >= 2 molecules");
  const std::size_t chunks = (reference_size + kReferenceChunk - 1) / kReferenceChunk;
  struct Partial {
    std::vector<Vec4> sum, sq;
  };
  std::vector<Partial> parts(chunks);
  parallel_for(chunks, threads, [&](std::size_t c) {
    Partial part{std::vector<Vec4>(n_cycles, Vec4::Zero()), std::vector<Vec4>(n_cycles, Vec4::Zero())};
    std::vector<Vec4> pos(n_cycles);
    Rng rng = make_rng(seed, stream, c);
    std::visit(
        [&](const auto& f) {
          MoleculeEvolver ev(f, schedule, dt, n_cycles, options);
          const std::size_t end = std::min(reference_size, (c + 1) * kReferenceChunk);
          for (std::size_t k = c * kReferenceChunk; k < end; ++k) {
            ev.run(prep.draw(rng), pos.data());
            for (std::size_t t = 0; t < n_cycles; ++t) {
              part.sum[t] += pos[t];
              part.sq[t] += pos[t].cwiseProduct(pos[t]);
            }
          }
        },
        field.variant());
    parts[c] = std::move(part);
  });
  MeanGuide guide;
  guide.n_reference = reference_size;
  const auto n = static_cast<double>(reference_size);
  for (std::size_t t = 0; t < n_cycles; ++t) {
    Vec4 sum = Vec4::Zero(), sq = Vec4::Zero();
    for (const auto& p : parts) {
      sum += p.sum[t];
      sq += p.sq[t];
    }
    const Vec4 mean = sum / n;
    const Vec4 var = ((sq - n * mean.cwiseProduct(mean)) / (n - 1.0)).cwiseMax(0.0);
    guide.M.push_back(mean);
    guide.stderr_M.push_back((var / n).cwiseSqrt());
  }
  return guide;
}

struct WepConfig {
  std::vector<std::size_t> n_list{100, 1000, 10000};
  std::size_t n_trials = 200;
  std::size_t n_cycles = 8;
  double period = 1.0;
  double dt = 0.25;
  MoleculeFieldSpec field;
  Preparation preparation = Preparation::isotropic(0.3, 0.1, 0.1);
  std::vector<double> rho_grid = default_rho_grid();
  std::size_t reference_size = 100000;
  std::uint64_t seed = 0;
  unsigned threads = 1;
  StepOptions step;
  /// Test hook: called once per τ of every trial; may record membership
  /// events on the ensemble, which then aborts the experiment.
  std::function<void(Ensemble&, long tau, std::size_t n, std::size_t trial)> event_injector;

  static std::vector<double> default_rho_grid() {
    std::vector<double> g;
    for (int i = 1; i <= 20; ++i) g.push_back(0.25 * i);
    return g;
  }

  void validate() const {
    if (n_list.empty()) throw ValidationError("wep: N_list must be non-empty");
    for (std::size_t n : n_list)
      if (n < 2) throw ValidationError("wep: every N must be >= 2");
    if (n_trials < 2) throw ValidationError("wep: n_trials must be >= 2");
    if (n_cycles < 1) throw ValidationError("wep: n_cycles must be >= 1");
    if (reference_size < 2) throw ValidationError("wep: reference_size must be >= 2");
    steps_per_half_cycle(CycleSchedule::sinusoidal(period), dt);
  }
};

struct WepRow {
  std::size_t n = 0;
  std::size_t trial = 0;
  long tau = 0;
  Vec4 x_a, x_b, x_s, m;
  double d_ab = 0.0;
  double d_am = 0.0;
  double d_bm = 0.0;
  double d_sm = 0.0;
};

struct WepNSummary {
  std::size_t n = 0;
  std::size_t n_a = 0;
  std::size_t n_b = 0;
  /// Per-μ standard deviation across trials of X(τ = 0), per system.
  Vec4 sigma_x_a, sigma_x_b, sigma_x_s;
  double median_sup_d_ab = 0.0;
  double median_sup_d_sm = 0.0;
  std::vector<double> sup_d_ab;
  std::vector<double> sup_d_sm;
  /// Tails of D_iM/σ_X pooled over (trial, τ), with ρ_p = σ_f = 1.
  ConcentrationProfile profile_am, profile_bm, profile_sm;
};

struct MonotonicityTable {
  std::vector<std::size_t> n;
  std::vector<double> median_sup_d_ab;
  std::size_t inversions = 0;
  std::size_t allowed = 0;
  bool pass = true;
};

struct WepReport {
  WepConfig config;
  MeanGuide guide;
  std::vector<WepRow> rows;
  std::vector<WepNSummary> per_n;
  MonotonicityTable monotonicity;
  /// max over all trials, systems, τ-steps and μ of |X^μ(τ+1) − X^μ(τ)|.
  double max_observable_step = 0.0;
  double observable_step_bound = 0.0;
  bool observable_steps_pass = true;
  bool free_evolution = true;
};

namespace detail {

struct TrialObservables {
  std::vector<Vec4> x_a, x_b, x_s;
  double max_step = 0.0;
};

inline double max_step_of(const std::vector<Vec4>& xs) {
  double m = 0.0;
  for (std::size_t i = 1; i < xs.size(); ++i) m = std::max(m, (xs[i] - xs[i - 1]).cwiseAbs().maxCoeff());
  return m;
}

inline Vec4 std_across(const std::vector<Vec4>& xs) {
  const auto n = static_cast<double>(xs.size());
  Vec4 mean = Vec4::Zero();
  for (const auto& x : xs) mean += x;
  mean /= n;
  Vec4 var = Vec4::Zero();
  for (const auto& x : xs) var += (x - mean).cwiseProduct(x - mean);
  return (var / (n - 1.0)).cwiseSqrt();
}

inline double median_of_values(std::vector<double> v) { return sample_median(std::move(v)); }

}  // namespace detail

/// Runs one trial: prepares 𝒮 = A ⊔ B with N_A = N/2 and returns X_A, X_B, X_S
/// (each under 1/N_tag) at τ = 0..n_cycles−1.
inline detail::TrialObservables run_wep_trial(const WepConfig& cfg, const Field& field,
                                              const CycleSchedule& schedule, std::size_t n, std::size_t trial) {
  Rng rng = make_rng(cfg.seed, "wep/trial/N=" + std::to_string(n), trial);
  Ensemble ens = Ensemble::prepare(cfg.preparation, n / 2, n - n / 2, rng);
  const std::size_t nc = cfg.n_cycles;
  std::vector<Vec4> sum_a(nc, Vec4::Zero()), sum_b(nc, Vec4::Zero());
  std::vector<Vec4> pos(nc);
  std::visit(
      [&](const auto& f) {
        MoleculeEvolver ev(f, schedule, cfg.dt, nc, cfg.step);
        const Vec& u = ens.state().u();
        for (std::size_t k = 0; k < n; ++k) {
          ev.run(u.segment<8>(static_cast<Eigen::Index>(8 * k)), pos.data());
          auto& sum = ens.labels()[k] == Tag::A ? sum_a : sum_b;
          for (std::size_t t = 0; t < nc; ++t) sum[t] += pos[t];
        }
      },
      field.variant());
  if (cfg.event_injector)
    for (std::size_t t = 0; t < nc; ++t) cfg.event_injector(ens, static_cast<long>(t), n, trial);
  const FreeEvolutionReport free = check_free_evolution(ens);
  if (!free.free)
    throw ExperimentAborted("wep: N = " + std::to_string(n) + ", trial " + std::to_string(trial) + ": " +
                            free.describe());

  detail::TrialObservables obs;
  const auto na = static_cast<double>(ens.n_a());
  const auto nb = static_cast<double>(ens.n_b());
  for (std::size_t t = 0; t < nc; ++t) {
    obs.x_a.push_back(sum_a[t] / na);
    obs.x_b.push_back(sum_b[t] / nb);
    obs.x_s.push_back((sum_a[t] + sum_b[t]) / static_cast<double>(n));
  }
  obs.max_step = std::max({detail::max_step_of(obs.x_a), detail::max_step_of(obs.x_b), detail::max_step_of(obs.x_s)});
  return obs;
}

/// The weak-equivalence-principle concentration experiment.
inline WepReport wep_experiment(const WepConfig& cfg) {
  cfg.validate();
  const CycleSchedule schedule = CycleSchedule::sinusoidal(cfg.period);
  const Field field = cfg.field.make();
  WepReport report;
  report.config = cfg;
  report.guide = mean_guide(cfg.preparation, field, schedule, cfg.n_cycles, cfg.dt, cfg.reference_size, cfg.seed,
                            cfg.threads, cfg.step);

  const std::size_t n_n = cfg.n_list.size();
  std::vector<detail::TrialObservables> trials(n_n * cfg.n_trials);
  parallel_for(trials.size(), cfg.threads, [&](std::size_t task) {
    trials[task] = run_wep_trial(cfg, field, schedule, cfg.n_list[task / cfg.n_trials], task % cfg.n_trials);
  });

  report.observable_step_bound = cfg.field.beta_bound() * cfg.period * (1.0 + 1e-6);
  auto dev = [](const Vec4& x, const Vec4& y) { return (x - y).cwiseAbs().maxCoeff(); };
  auto scaled_dev = [](const Vec4& x, const Vec4& y, const Vec4& s) {
    return (x - y).cwiseAbs().cwiseQuotient(s).maxCoeff();
  };

  for (std::size_t i = 0; i < n_n; ++i) {
    const std::size_t n = cfg.n_list[i];
    WepNSummary sum;
    sum.n = n;
    sum.n_a = n / 2;
    sum.n_b = n - n / 2;
    std::vector<Vec4> a0, b0, s0;
    for (std::size_t tr = 0; tr < cfg.n_trials; ++tr) {
      const auto& obs = trials[i * cfg.n_trials + tr];
      a0.push_back(obs.x_a.front());
      b0.push_back(obs.x_b.front());
      s0.push_back(obs.x_s.front());
    }
    sum.sigma_x_a = detail::std_across(a0);
    sum.sigma_x_b = detail::std_across(b0);
    sum.sigma_x_s = detail::std_across(s0);
    for (const Vec4* s : {&sum.sigma_x_a, &sum.sigma_x_b, &sum.sigma_x_s})
      if (!(s->minCoeff() > 0.0))
        throw NumericError("wep: sigma_X vanishes at N = " + std::to_string(n) + " (degenerate preparation)");

    std::vector<double> am, bm, sm;
    for (std::size_t tr = 0; tr < cfg.n_trials; ++tr) {
      const auto& obs = trials[i * cfg.n_trials + tr];
      report.max_observable_step = std::max(report.max_observable_step, obs.max_step);
      double sup_ab = 0.0, sup_sm = 0.0;
      for (std::size_t t = 0; t < cfg.n_cycles; ++t) {
        WepRow row;
        row.n = n;
        row.trial = tr;
        row.tau = static_cast<long>(t);
        row.x_a = obs.x_a[t];
        row.x_b = obs.x_b[t];
        row.x_s = obs.x_s[t];
        row.m = report.guide.M[t];
        row.d_ab = dev(row.x_a, row.x_b);
        row.d_am = dev(row.x_a, row.m);
        row.d_bm = dev(row.x_b, row.m);
        row.d_sm = dev(row.x_s, row.m);
        sup_ab = std::max(sup_ab, row.d_ab);
        sup_sm = std::max(sup_sm, row.d_sm);
        am.push_back(scaled_dev(row.x_a, row.m, sum.sigma_x_a));
        bm.push_back(scaled_dev(row.x_b, row.m, sum.sigma_x_b));
        sm.push_back(scaled_dev(row.x_s, row.m, sum.sigma_x_s));
        report.rows.push_back(row);
      }
      sum.sup_d_ab.push_back(sup_ab);
      sum.sup_d_sm.push_back(sup_sm);
    }
    sum.median_sup_d_ab = detail::median_of_values(sum.sup_d_ab);
    sum.median_sup_d_sm = detail::median_of_values(sum.sup_d_sm);
    sum.profile_am = tail_profile(am, 0.0, cfg.rho_grid, 1.0, 1.0);
    sum.profile_bm = tail_profile(bm, 0.0, cfg.rho_grid, 1.0, 1.0);
    sum.profile_sm = tail_profile(sm, 0.0, cfg.rho_grid, 1.0, 1.0);
    for (auto* p : {&sum.profile_am, &sum.profile_bm, &sum.profile_sm}) p->seed = cfg.seed;
    report.per_n.push_back(std::move(sum));
  }

  auto& mono = report.monotonicity;
  for (const auto& s : report.per_n) {
    mono.n.push_back(s.n);
    mono.median_sup_d_ab.push_back(s.median_sup_d_ab);
  }
  const std::size_t pairs = mono.n.size() > 0 ? mono.n.size() - 1 : 0;
  for (std::size_t i = 0; i < pairs; ++i)
    if (mono.median_sup_d_ab[i + 1] > mono.median_sup_d_ab[i]) ++mono.inversions;
  mono.allowed = (pairs + 9) / 10;
  mono.pass = mono.inversions <= mono.allowed;
  report.observable_steps_pass = report.max_observable_step <= report.observable_step_bound;
  return report;
}

/// CSV columns N, trial, tau, X_A_mu0..3, X_B_mu0..3, X_S_mu0..3, M_mu0..3, D_AB, D_SM.
inline std::string wep_csv(const WepReport& report) {
  std::vector<std::string> header{"N", "trial", "tau"};
  for (const char* sys : {"X_A", "X_B", "X_S", "M"})
    for (int mu = 0; mu < 4; ++mu) header.push_back(std::string(sys) + "_mu" + std::to_string(mu));
  header.push_back("D_AB");
  header.push_back("D_SM");
  io::CsvWriter csv(header);
  for (const auto& r : report.rows) {
    csv.cell(r.n).cell(r.trial).cell(static_cast<long long>(r.tau));
    for (const Vec4* v : {&r.x_a, &r.x_b, &r.x_s, &r.m})
      for (int mu = 0; mu < 4; ++mu) csv.cell((*v)[mu]);
    csv.cell(r.d_ab).cell(r.d_sm);
    csv.end_row();
  }
  return csv.str();
}

struct TailCurve {
  double n = 0.0;
  std::vector<double> rho;
  std::vector<double> tail;
};

struct ScaleRelationEntry {
  double n = 0.0;
  double rho_star = 0.0;
};

struct ScaleRelationReport {
  bool available = false;
  std::string reason;
  double threshold = 0.0;
  std::vector<ScaleRelationEntry> entries;
  /// Fitted exponent e in ρ* ∝ N^e.
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  /// "clt" (e ≈ −1/2, error ∼ exp(−cN)), "n_squared" (e ≈ −1, error ∼
  /// exp(−cN²)), or "other".
  std::string regime;
  bool consistent_with_n_squared = false;
};

namespace detail {

inline void classify_scaling(ScaleRelationReport& r) {
  const std::size_t k = r.entries.size();
  if (k < 3) {
    r.available = false;
    r.reason = "need at least 3 values of N, have " + std::to_string(k);
    return;
  }
  double mx = 0.0, my = 0.0;
  std::vector<double> xs, ys;
  for (const auto& e : r.entries) {
    if (!(e.rho_star > 0.0)) {
      r.available = false;
      r.reason = "rho* vanishes at N = " + io::format_double(e.n);
      return;
    }
    xs.push_back(std::log(e.n));
    ys.push_back(std::log(e.rho_star));
    mx += xs.back();
    my += ys.back();
  }
  mx /= static_cast<double>(k);
  my /= static_cast<double>(k);
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) {
    r.available = false;
    r.reason = "all N equal";
    return;
  }
  r.exponent = sxy / sxx;
  double sse = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    const double res = ys[i] - (my + r.exponent * (xs[i] - mx));
    sse += res * res;
  }
  r.exponent_stderr = k > 2 ? std::sqrt(sse / static_cast<double>(k - 2) / sxx) : 0.0;
  const double to_clt = std::abs(r.exponent + 0.5);
  const double to_n2 = std::abs(r.exponent + 1.0);
  if (std::min(to_clt, to_n2) > 0.2)
    r.regime = "other";
  else
    r.regime = to_clt <= to_n2 ? "clt" : "n_squared";
  r.consistent_with_n_squared = r.regime == "n_squared";
  r.available = true;
}

}  // namespace detail

/// ρ* per N from tail curves: the first ρ where the tail drops below
/// `threshold`, with log-linear interpolation between grid points.
inline ScaleRelationReport scale_relation_from_tails(const std::vector<TailCurve>& curves, double threshold) {
  ScaleRelationReport r;
  r.threshold = threshold;
  for (const auto& c : curves) {
    if (c.rho.size() != c.tail.size() || c.rho.empty()) throw ValidationError("scale relation: malformed tail curve");
    std::optional<double> star;
    for (std::size_t i = 0; i < c.rho.size(); ++i) {
      if (c.tail[i] >= threshold) continue;
      if (i == 0 || !(c.tail[i] > 0.0)) {
        star = c.rho[i];
      } else {
        const double l0 = std::log(c.tail[i - 1]), l1 = std::log(c.tail[i]), lt = std::log(threshold);
        star = c.rho[i - 1] + (c.rho[i] - c.rho[i - 1]) * (lt - l0) / (l1 - l0);
      }
      break;
    }
    if (!star) {
      r.available = false;
      r.reason = "tail never drops below the threshold at N = " + io::format_double(c.n);
      return r;
    }
    r.entries.push_back({c.n, *star});
  }
  detail::classify_scaling(r);
  return r;
}

/// ρ* per N from the WEP run: the deviation level sup_τ D_SM exceeded by
/// fewer than 10 of n_trials trials, i.e. where the empirical tail first
/// drops below 10/n_trials (the 10th-largest value).
inline ScaleRelationReport scale_relation_check(const WepReport& report) {
  ScaleRelationReport r;
  const std::size_t trials = report.config.n_trials;
  r.threshold = 10.0 / static_cast<double>(trials);
  if (trials < 10) {
    r.reason = "need at least 10 trials";
    return r;
  }
  for (const auto& s : report.per_n) {
    std::vector<double> v = s.sup_d_sm;
    std::sort(v.begin(), v.end(), std::greater<>());
    r.entries.push_back({static_cast<double>(s.n), v[9]});
  }
  detail::classify_scaling(r);
  return r;
}

}  // namespace hrlab

#endif  // HRLAB_OBSERVABLES_WEP_HPP
