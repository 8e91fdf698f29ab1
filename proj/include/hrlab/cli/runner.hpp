#ifndef HRLAB_CLI_RUNNER_HPP
#define HRLAB_CLI_RUNNER_HPP

#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "hrlab/cli/config.hpp"
#include "hrlab/concentration/profile.hpp"
#include "hrlab/core/version.hpp"
#include "hrlab/geometry/randers.hpp"
#include "hrlab/gravity/scales.hpp"
#include "hrlab/lipschitz/decomposition.hpp"

namespace hrlab::cli {

struct ExperimentOutput {
  /// (file name, content), written in this order.
  std::vector<std::pair<std::string, std::string>> files;
  json summary = json::object();
  std::vector<std::string> streams;
};

struct RunManifest {
  std::string experiment;
  std::string config_hash;
  std::string tool_version = kVersion;
  std::string timestamp;
  std::uint64_t seed = 0;
  std::vector<std::string> streams;
  std::vector<std::string> outputs;
  json summary;

  json to_json() const {
    return {{"tool", "hrlab"},
            {"tool_version", tool_version},
            {"experiment", experiment},
            {"config_hash", config_hash},
            {"timestamp", timestamp},
            {"seeds",
             {{"root", seed},
              {"derivation", "splitmix64(splitmix64(root ^ fnv1a64(tag)) ^ splitmix64(index + 0x632BE59BD9B4E019))"},
              {"streams", streams}}},
            {"outputs", outputs},
            {"summary", summary}};
  }
};

inline std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

/// FNV-1a of the canonical (key-sorted, compact) dump.
inline std::string config_hash(const json& j) { return hex64(fnv1a64(j.dump())); }

inline std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline json vec_json(const Eigen::Ref<const Vec>& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json vec4_json(const Vec4& v) { return {v[0], v[1], v[2], v[3]}; }

inline json fit_json(const std::optional<DecayFit>& fit) {
  if (!fit) return nullptr;
  return {{"C1_hat", fit->C1_hat}, {"C2_hat", fit->C2_hat}, {"stderr", fit->stderr_C2},
          {"r_squared", fit->r_squared}, {"points", fit->points}};
}

inline json estimate_json(const LipschitzEstimate& e) {
  return {{"constant_hat", e.constant_hat}, {"method", to_string(e.method)},
          {"pairs_or_points", e.pairs_or_points}, {"confidence_note", e.confidence_note}};
}

/// Builds the field for 8·n_molecules coordinates.
inline Field make_field(const FieldParams& p, std::size_t n_molecules) {
  const auto dim = static_cast<Eigen::Index>(8 * n_molecules);
  if (p.family == "tanh") return TanhField(n_molecules, p.amplitude, p.coupling, p.offset);
  if (p.family == "zero") return ZeroField(static_cast<std::size_t>(dim));
  if (p.family == "constant") {
    Vec v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v[i] = p.value.size() == 1 ? p.value[0] : p.value[static_cast<std::size_t>(i)];
    return ConstantField(v);
  }
  if (p.family == "linear") {
    if (!p.matrix) throw ValidationError("linear field needs a matrix");
    return LinearField(*p.matrix);
  }
  throw ValidationError("unknown field family '" + p.family + "'");
}

inline ExperimentOutput run_flow(const FlowParams& p, std::uint64_t seed) {
  ExperimentOutput out;
  const Field field = make_field(p.field, p.n_molecules);
  const CycleSchedule schedule = p.schedule.make();
  const auto dim = static_cast<Eigen::Index>(8 * p.n_molecules);
  Vec u(dim), q(dim);
  Rng rng = make_rng(seed, "flow/initial");
  out.streams.push_back("flow/initial");
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < dim; ++i) u[i] = p.u_mean + p.u_sigma * g(rng);
  for (Eigen::Index i = 0; i < dim; ++i) q[i] = p.p_sigma * g(rng);
  if (p.u0) u = Eigen::Map<const Vec>(p.u0->data(), dim);
  if (p.p0) q = Eigen::Map<const Vec>(p.p0->data(), dim);

  RunOptions opts;
  opts.step = p.step;
  opts.store_stride = p.store_stride;
  const CycleRun run = run_cycles(field, schedule, make_flow_state(PhasePoint(u, q), schedule, 0.0), p.n_cycles, p.dt, opts);

  double max_h = 0.0;
  bool vanish = true;
  for (const auto& s : run.snapshots) {
    max_h = std::max(max_h, std::abs(s.hamiltonian));
    vanish = vanish && s.vanishes;
  }
  double max_speed = 0.0;
  for (std::size_t k = 1; k < run.trajectory.size(); ++k) {
    const double dt = run.trajectory[k].t - run.trajectory[k - 1].t;
    const double du = (run.trajectory[k].point.u() - run.trajectory[k - 1].point.u()).cwiseAbs().maxCoeff();
    max_speed = std::max(max_speed, du / dt);
  }
  const auto bound = field.certified_bound();
  out.files.emplace_back("trajectory.csv", trajectory_csv(field, schedule, run.trajectory));
  out.files.emplace_back("snapshots.csv", snapshots_csv(field, schedule, run.snapshots));
  out.summary = {{"field", field.name()},
                 {"beta_bound", bound ? json(*bound) : json(nullptr)},
                 {"randers_admissible", bound && *bound < 1.0},
                 {"schedule", schedule.name()},
                 {"integrator", to_string(p.step.integrator)},
                 {"raw_ode", p.step.raw_ode},
                 {"states", run.trajectory.size()},
                 {"snapshots", run.snapshots.size()},
                 {"max_abs_snapshot_H", max_h},
                 {"all_snapshots_vanish", vanish},
                 {"max_component_speed", max_speed}};
  return out;
}

inline ExperimentOutput run_lipschitz(const LipschitzParams& p, std::uint64_t seed, unsigned threads) {
  ExperimentOutput out;
  const Field field = make_field(p.field, p.n_molecules);
  const auto dim = static_cast<Eigen::Index>(8 * p.n_molecules);
  const CycleSchedule schedule = CycleSchedule::sinusoidal(p.period);

  Rng rng = make_rng(seed, "lipschitz/reference");
  out.streams = {"lipschitz/reference", "lipschitz/primary", "lipschitz/short", "lipschitz/identity",
                 "lipschitz/in_box"};
  std::normal_distribution<double> g;
  Vec u(dim), q(dim);
  for (Eigen::Index i = 0; i < dim; ++i) u[i] = p.u_mean + p.u_sigma * g(rng);
  for (Eigen::Index i = 0; i < dim; ++i) q[i] = p.p_sigma * g(rng);
  RunOptions ro;
  ro.store_trajectory = false;
  const CycleRun run = run_cycles(field, schedule, make_flow_state(PhasePoint(u, q), schedule, 0.0), p.n_cycles, p.dt, ro);

  const Metric metric = p.metric == "weighted" ? Metric::weighted(p.u_scale, p.p_scale) : Metric::euclidean();
  const CompactBox box = p.box_kind == "snapshots" ? box_from_snapshots(run.snapshots, p.dilation, metric)
                         : p.box_kind == "unit"    ? CompactBox::cube(2 * dim, 0.0, 1.0, metric)
                                                   : CompactBox(Eigen::Map<const Vec>(p.lower.data(), 2 * dim),
                                                                Eigen::Map<const Vec>(p.upper.data(), 2 * dim), metric);

  // κ-free shape h(u, p) = Σ β^i(u) p_i.
  const ScalarFunction h = [&field, dim](const ConstVecRef& z) {
    Vec beta(dim);
    field.evaluate(z.head(dim), beta);
    return beta.dot(z.tail(dim));
  };
  EstimateOptions eo;
  eo.n_pairs = p.n_pairs;
  eo.seed = seed;
  eo.method = p.method;
  eo.threads = threads;
  const LipschitzEstimate on_box = estimate_lipschitz(h, box, eo);
  const NormalizedFunction normalized = normalize_to_one_lipschitz(h, on_box);
  const ScalarFunction hn = normalized.as_function();
  const LipschitzEstimate renormalized = estimate_lipschitz(hn, box, eo);

  TuneOptions to;
  to.estimate = eo;
  to.estimate.method = LipschitzMethod::pair_sampling;
  to.target = p.tune_target;
  to.iterations = p.tune_iterations;
  to.outer_scale = p.outer_scale;
  const TuneResult tuned = auto_tune_rho0(hn, box, to);
  const HamiltonianDecomposition decomp = radial_decomposition(hn, box, ScaleProfile::reciprocal(tuned.rho0));
  const LipschitzEstimate global = global_lipschitz_estimate(decomp, to.estimate, p.outer_scale);
  const double residual = identity_max_residual(decomp, p.identity_samples, seed, p.outer_scale);

  Rng in_rng = make_rng(seed, "lipschitz/in_box");
  Vec z;
  double matter_in_box = 0.0;
  for (std::size_t k = 0; k < p.identity_samples; ++k) {
    box.sample(in_rng, z);
    matter_in_box = std::max(matter_in_box, std::abs(decomp.matter_part(z)));
  }
  const ConstraintSplitReport split = check_constraint_split(decomp, schedule, run.snapshots);

  io::CsvWriter csv({"t", "tau", "H", "lipschitz_part", "matter_part", "lipschitz_part_unscaled",
                     "matter_part_unscaled", "tolerance", "vanishes"});
  json snaps = json::array();
  for (const auto& e : split.entries) {
    csv.cell(e.t).cell(e.tau).cell(e.hamiltonian).cell(e.lipschitz_part).cell(e.matter_part);
    csv.cell(e.lipschitz_part_unscaled).cell(e.matter_part_unscaled).cell(e.tolerance).cell(e.vanishes ? 1 : 0);
    csv.end_row();
    snaps.push_back({{"t", e.t},
                     {"H", e.hamiltonian},
                     {"lipschitz_part", e.lipschitz_part},
                     {"matter_part", e.matter_part},
                     {"lipschitz_part_unscaled", e.lipschitz_part_unscaled},
                     {"matter_part_unscaled", e.matter_part_unscaled}});
  }
  json metric_json = {{"kind", metric.name()}};
  if (metric.is_weighted()) {
    metric_json["u_scale"] = metric.u_scale();
    metric_json["p_scale"] = metric.p_scale();
  }
  const json report = {
      {"box", {{"kind", p.box_kind}, {"lower", vec_json(box.lower())}, {"upper", vec_json(box.upper())}}},
      {"metric", metric_json},
      {"profile", {{"family", decomp.profile().family()}, {"rho0", decomp.profile().rho0()}}},
      {"normalization", {{"estimate_on_box", estimate_json(on_box)}, {"M", normalized.scale},
                         {"renormalized_estimate", estimate_json(renormalized)}}},
      {"tuning", {{"reached", tuned.reached}, {"constant", tuned.constant}, {"evaluations", tuned.evaluations},
                  {"target", p.tune_target}}},
      {"lipschitz_estimate_global", global.constant_hat},
      {"identity_max_abs_residual", residual},
      {"matter_part_max_abs_in_box", matter_in_box},
      {"sign_report", {{"matter_positive", split.matter_positive},
                       {"matter_positive_lipschitz_nonpositive", split.matter_positive_lipschitz_nonpositive}}},
      {"snapshots", snaps}};
  out.files.emplace_back("split.csv", csv.str());
  out.files.emplace_back("decomposition.json", report.dump(2) + "\n");
  out.summary = {{"estimate_on_box", on_box.constant_hat},
                 {"M", normalized.scale},
                 {"renormalized_estimate", renormalized.constant_hat},
                 {"rho0", tuned.rho0},
                 {"tuning_reached", tuned.reached},
                 {"lipschitz_estimate_global", global.constant_hat},
                 {"identity_max_abs_residual", residual},
                 {"matter_part_max_abs_in_box", matter_in_box},
                 {"all_snapshots_vanish", split.all_vanish}};
  return out;
}

inline SampleFunction named_function(const std::string& name) {
  if (name == "mean") return [](const ConstVecRef& x) { return x.mean(); };
  if (name == "norm") return [](const ConstVecRef& x) { return x.norm(); };
  return [](const ConstVecRef& x) { return x[0]; };
}

inline ExperimentOutput run_concentration(const ConcentrationParams& p, std::uint64_t seed, unsigned threads) {
  ExperimentOutput out;
  const MMSpaceSampler sampler =
      p.space == "sphere"     ? MMSpaceSampler::sphere(p.dimension, seed)
      : p.space == "gaussian" ? MMSpaceSampler::gaussian(p.dimension, p.sigma, seed)
                              : MMSpaceSampler::product_uniform(Eigen::Map<const Vec>(p.lower.data(), static_cast<Eigen::Index>(p.dimension)),
                                                                Eigen::Map<const Vec>(p.upper.data(), static_cast<Eigen::Index>(p.dimension)), seed);
  const SampleFunction f = named_function(p.function);
  out.streams = {"concentration/median", "concentration/tail"};
  double sigma_f = 0.0;
  if (p.sigma_f) {
    sigma_f = *p.sigma_f;
  } else {
    // Resolution scale defaults to the standard deviation of f.
    out.streams.push_back("concentration/scale");
    const std::vector<double> v =
        sample_values(f, sampler, std::min<std::size_t>(p.n_samples, 20000), "concentration/scale", threads);
    double m = 0.0, s = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    for (double x : v) s += (x - m) * (x - m);
    sigma_f = std::sqrt(s / static_cast<double>(v.size() - 1));
    if (!(sigma_f > 0.0)) throw NumericError("concentration: f has zero spread; pass sigma_f explicitly");
  }
  const double rho_p = p.rho_p.value_or(default_rho_p(sampler, sigma_f));
  std::vector<double> grid = p.rho_grid;
  if (grid.empty())
    for (int k = 1; k <= 20; ++k) grid.push_back(0.25 * k * rho_p);
  const ConcentrationProfile prof = concentration_profile(f, sampler, grid, p.n_samples, sigma_f, rho_p, threads);
  if (!prof.fit) throw FitError("concentration: fewer than 3 grid points with >= 10 exceedances; fit unavailable");
  const MedianEstimate med = median_of(sample_values(f, sampler, prof.n_median_samples, "concentration/median", threads));
  const json fit = {{"median_hat", prof.median_hat},
                    {"C1_hat", prof.fit->C1_hat},
                    {"C2_hat", prof.fit->C2_hat},
                    {"stderr", prof.fit->stderr_C2},
                    {"r_squared", prof.fit->r_squared},
                    {"fit_points", prof.fit->points},
                    {"n_samples", prof.n_samples + prof.n_median_samples},
                    {"seed", seed},
                    {"space", sampler.name()},
                    {"dimension", sampler.intrinsic_dimension()},
                    {"function", p.function},
                    {"sigma_f", sigma_f},
                    {"rho_p", rho_p},
                    {"median_fraction_above", med.fraction_above},
                    {"median_fraction_below", med.fraction_below}};
  out.files.emplace_back("profile.csv", profile_csv(prof));
  out.files.emplace_back("fit.json", fit.dump(2) + "\n");
  out.summary = fit;
  return out;
}

inline ExperimentOutput run_sphere(const SphereParams& p, std::uint64_t seed, unsigned threads) {
  ExperimentOutput out;
  out.streams = {"concentration/isoperimetric"};
  const IsoperimetricReport r = sphere_isoperimetric_check(p.dimension, p.epsilons, p.n_samples, seed, threads);
  io::CsvWriter csv({"epsilon", "bound", "measure", "stderr", "pass"});
  for (const auto& e : r.entries) {
    csv.cell(e.epsilon).cell(e.bound).cell(e.measure).cell(e.stderr_measure).cell(e.pass ? 1 : 0);
    csv.end_row();
  }
  out.files.emplace_back("isoperimetric.csv", csv.str());
  out.summary = {{"N", p.dimension},
                 {"n_samples", p.n_samples},
                 {"all_pass", r.all_pass},
                 {"bound_at_zero", sphere_isoperimetric_bound(p.dimension, 0.0)}};
  return out;
}

inline json scale_relation_json(const ScaleRelationReport& s) {
  json entries = json::array();
  for (const auto& e : s.entries) entries.push_back({{"N", e.n}, {"rho_star", e.rho_star}});
  return {{"available", s.available}, {"reason", s.reason},       {"threshold", s.threshold},
          {"entries", entries},       {"exponent", s.exponent},   {"exponent_stderr", s.exponent_stderr},
          {"regime", s.regime},       {"consistent_with_n_squared", s.consistent_with_n_squared}};
}

inline json wep_summary_json(const WepReport& r) {
  const WepConfig& c = r.config;
  json per_n = json::array();
  for (const auto& s : r.per_n) {
    per_n.push_back({{"N", s.n},
                     {"N_A", s.n_a},
                     {"N_B", s.n_b},
                     {"sigma_X_S", vec4_json(s.sigma_x_s)},
                     {"sigma_X_A", vec4_json(s.sigma_x_a)},
                     {"sigma_X_B", vec4_json(s.sigma_x_b)},
                     {"median_sup_D_AB", s.median_sup_d_ab},
                     {"median_sup_D_SM", s.median_sup_d_sm},
                     {"fits", {{"S", fit_json(s.profile_sm.fit)}, {"A", fit_json(s.profile_am.fit)},
                               {"B", fit_json(s.profile_bm.fit)}}}});
  }
  json guide = json::array();
  for (std::size_t t = 0; t < r.guide.M.size(); ++t)
    guide.push_back({{"tau", t}, {"M", vec4_json(r.guide.M[t])}, {"stderr", vec4_json(r.guide.stderr_M[t])}});
  json mono = json::array();
  for (std::size_t i = 0; i < r.monotonicity.n.size(); ++i)
    mono.push_back({{"N", r.monotonicity.n[i]}, {"median_sup_D_AB", r.monotonicity.median_sup_d_ab[i]}});
  return {{"field", c.field.name()},
          {"beta_bound", c.field.beta_bound()},
          {"T", c.period},
          {"dt", c.dt},
          {"n_cycles", c.n_cycles},
          {"n_trials", c.n_trials},
          {"reference_size", c.reference_size},
          {"normalization", "1/N_tag"},
          {"tau_interpolation", "linear between equilibrium indices (convenience only)"},
          {"guide", guide},
          {"per_N", per_n},
          {"monotonicity", {{"table", mono}, {"inversions", r.monotonicity.inversions},
                            {"allowed", r.monotonicity.allowed}, {"pass", r.monotonicity.pass}}},
          {"observable_steps", {{"max", r.max_observable_step}, {"bound", r.observable_step_bound},
                                {"pass", r.observable_steps_pass}}},
          {"free_evolution", r.free_evolution},
          {"scale_relation", scale_relation_json(scale_relation_check(r))}};
}

inline std::string wep_profiles_csv(const WepReport& r) {
  io::CsvWriter csv({"N", "system", "rho", "tail_prob", "n_exceed"});
  for (const auto& s : r.per_n) {
    const std::pair<const char*, const ConcentrationProfile*> systems[] = {
        {"A", &s.profile_am}, {"B", &s.profile_bm}, {"S", &s.profile_sm}};
    for (const auto& [name, prof] : systems)
      for (std::size_t i = 0; i < prof->rho_grid.size(); ++i) {
        csv.cell(s.n).cell(std::string_view(name)).cell(prof->rho_grid[i]).cell(prof->tail_prob[i]);
        csv.cell(prof->n_exceed[i]);
        csv.end_row();
      }
  }
  return csv.str();
}

inline ExperimentOutput run_wep(const WepParams& p, std::uint64_t seed, unsigned threads) {
  ExperimentOutput out;
  WepConfig cfg = p.config;
  cfg.seed = seed;
  cfg.threads = threads;
  out.streams = {"wep/reference"};
  for (std::size_t n : cfg.n_list) out.streams.push_back("wep/trial/N=" + std::to_string(n));
  const WepReport r = wep_experiment(cfg);
  const json summary = wep_summary_json(r);
  out.files.emplace_back("wep.csv", wep_csv(r));
  out.files.emplace_back("wep_profiles.csv", wep_profiles_csv(r));
  out.files.emplace_back("wep_summary.json", summary.dump(2) + "\n");
  out.summary = {{"monotonicity_pass", r.monotonicity.pass},
                 {"observable_steps_pass", r.observable_steps_pass},
                 {"free_evolution", r.free_evolution},
                 {"scale_regime", summary["scale_relation"]["regime"]}};
  return out;
}

inline json constants_json(const PhysicalConstants& k) {
  return {{"source", "CODATA 2018"},
          {"units", {{"name", k.units.name}, {"length_m", k.units.length_m}, {"mass_kg", k.units.mass_kg},
                     {"time_s", k.units.time_s}}},
          {"G", k.G},
          {"c", k.c},
          {"hbar", k.hbar},
          {"planck_length", k.planck_length()},
          {"planck_force", k.planck_force()},
          {"planck_mass", k.planck_mass()},
          {"planck_energy", k.planck_energy()},
          {"planck_density", k.planck_density()}};
}

inline ExperimentOutput run_gravity(const GravityParams& p) {
  ExperimentOutput out;
  const PhysicalConstants si = PhysicalConstants::codata2018();
  std::vector<GravityScaleCase> cases;
  if (p.default_cases)
    cases = default_gravity_cases(si);
  else
    for (const auto& c : p.cases) cases.push_back(GravityScaleCase::make(c.name, c.m, c.M, c.r2, c.lambda));

  const UnitScale units = p.unit_system == "CGS" ? PhysicalConstants::cgs()
                          : p.unit_system == "geometrized" ? si.geometrized()
                                                           : UnitScale{};
  const PhysicalConstants k = p.unit_system == "SI" ? si : si.in_units(units);
  std::vector<SweepRow> rows;
  for (const auto& c : cases) {
    SweepRow row = evaluate_case(p.unit_system == "SI" ? c : c.in_units(units), k);
    row.scase = c;  // report masses and radii in SI
    rows.push_back(row);
  }
  out.files.emplace_back("sweep.csv", sweep_csv(rows));
  out.files.emplace_back("constants.json", constants_json(k).dump(2) + "\n");
  json alphas = json::object();
  for (const auto& r : rows) alphas[r.scase.name] = r.alpha_oracle;
  out.summary = {{"cases", rows.size()}, {"unit_system", p.unit_system}, {"alpha_oracle", alphas}};
  return out;
}

inline ExperimentOutput run_experiment(const RunConfig& cfg, unsigned threads) {
  return std::visit(
      [&](const auto& p) -> ExperimentOutput {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, FlowParams>) return run_flow(p, cfg.seed);
        else if constexpr (std::is_same_v<P, LipschitzParams>) return run_lipschitz(p, cfg.seed, threads);
        else if constexpr (std::is_same_v<P, ConcentrationParams>) return run_concentration(p, cfg.seed, threads);
        else if constexpr (std::is_same_v<P, SphereParams>) return run_sphere(p, cfg.seed, threads);
        else if constexpr (std::is_same_v<P, WepParams>) return run_wep(p, cfg.seed, threads);
        else return run_gravity(p);
      },
      cfg.parameters);
}

/// Runs the experiment and writes its outputs, then manifest.json, into
/// out_dir. Every file goes through temp-file + rename.
inline RunManifest run(const RunConfig& cfg, const std::filesystem::path& out_dir, unsigned threads = 1) {
  const ExperimentOutput result = run_experiment(cfg, threads);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory " + out_dir.string() + ": " + ec.message());

  RunManifest m;
  m.experiment = cfg.experiment;
  m.config_hash = config_hash(cfg.source);
  m.timestamp = utc_timestamp();
  m.seed = cfg.seed;
  m.streams = result.streams;
  m.summary = result.summary;
  for (const auto& [name, content] : result.files) {
    io::write_file_atomic(out_dir / name, content);
    m.outputs.push_back(name);
  }
  io::write_file_atomic(out_dir / "manifest.json", m.to_json().dump(2) + "\n");
  return m;
}

}  // namespace hrlab::cli

#endif  // HRLAB_CLI_RUNNER_HPP
