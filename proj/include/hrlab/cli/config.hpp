#ifndef HRLAB_CLI_CONFIG_HPP
#define HRLAB_CLI_CONFIG_HPP

#include <cmath>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hrlab/dynamics/flow.hpp"
#include "hrlab/lipschitz/estimate.hpp"
#include "hrlab/observables/wep.hpp"

namespace hrlab::cli {

using json = nlohmann::json;

struct Violation {
  std::string path;
  std::string message;
};

inline std::string join_violations(const std::vector<Violation>& v) {
  std::string s;
  for (const auto& x : v) s += "\n  " + x.path + ": " + x.message;
  return s;
}

/// Strict reader over one JSON object. Every key must be consumed; finish()
/// reports the rest as unknown. Type and range problems are collected, not
/// thrown, so one pass lists every violation.
class ObjectReader {
 public:
  ObjectReader(const json* obj, std::string path, std::vector<Violation>& out)
      : obj_(obj), path_(std::move(path)), out_(&out) {
    if (obj_ && !obj_->is_object()) {
      add(path_, "expected an object");
      obj_ = nullptr;
    }
  }

  const std::string& path() const { return path_; }
  std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  void add(const std::string& path, const std::string& msg) { out_->push_back({path, msg}); }
  bool has(const std::string& key) const { return obj_ && obj_->contains(key); }

  const json* raw(const std::string& key) {
    seen_.insert(key);
    if (!obj_) return nullptr;
    auto it = obj_->find(key);
    return it == obj_->end() ? nullptr : &*it;
  }

  std::optional<double> number(const std::string& key, std::optional<double> def = std::nullopt,
                               bool required = false) {
    const json* j = raw(key);
    if (!j) {
      if (required) add(at(key), "required");
      return def;
    }
    if (!j->is_number()) {
      add(at(key), "expected a number");
      return def;
    }
    const double v = j->get<double>();
    if (!std::isfinite(v)) add(at(key), "must be finite");
    return v;
  }

  double positive(const std::string& key, double def) {
    const double v = number(key, def).value_or(def);
    if (!(v > 0.0)) add(at(key), "must be > 0 (got " + io::format_double(v) + ")");
    return v;
  }

  std::optional<std::int64_t> integer(const std::string& key, std::optional<std::int64_t> def = std::nullopt,
                                      bool required = false) {
    const json* j = raw(key);
    if (!j) {
      if (required) add(at(key), "required");
      return def;
    }
    if (!j->is_number_integer()) {
      add(at(key), "expected an integer");
      return def;
    }
    return j->get<std::int64_t>();
  }

  std::size_t count(const std::string& key, std::int64_t def, std::int64_t min) {
    const std::int64_t v = integer(key, def).value_or(def);
    if (v < min) {
      add(at(key), "must be >= " + std::to_string(min) + " (got " + std::to_string(v) + ")");
      return static_cast<std::size_t>(std::max<std::int64_t>(min, 0));
    }
    return static_cast<std::size_t>(v);
  }

  std::string string(const std::string& key, const std::string& def, const std::vector<std::string>& allowed = {}) {
    const json* j = raw(key);
    if (!j) return def;
    if (!j->is_string()) {
      add(at(key), "expected a string");
      return def;
    }
    std::string v = j->get<std::string>();
    if (!allowed.empty() && std::find(allowed.begin(), allowed.end(), v) == allowed.end()) {
      std::string opts;
      for (const auto& a : allowed) opts += (opts.empty() ? "" : ", ") + a;
      add(at(key), "unknown value '" + v + "' (expected one of: " + opts + ")");
      return def;
    }
    return v;
  }

  bool boolean(const std::string& key, bool def) {
    const json* j = raw(key);
    if (!j) return def;
    if (!j->is_boolean()) {
      add(at(key), "expected true or false");
      return def;
    }
    return j->get<bool>();
  }

  std::optional<std::vector<double>> numbers(const std::string& key) {
    const json* j = raw(key);
    if (!j) return std::nullopt;
    return as_numbers(*j, at(key));
  }

  std::optional<std::vector<double>> as_numbers(const json& j, const std::string& path) {
    if (!j.is_array()) {
      add(path, "expected an array of numbers");
      return std::nullopt;
    }
    std::vector<double> v;
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_number() || !std::isfinite(j[i].get<double>())) {
        add(path + "[" + std::to_string(i) + "]", "expected a finite number");
        return std::nullopt;
      }
      v.push_back(j[i].get<double>());
    }
    return v;
  }

  std::optional<Mat> matrix(const std::string& key, Eigen::Index rows, Eigen::Index cols) {
    const json* j = raw(key);
    if (!j) return std::nullopt;
    return as_matrix(*j, at(key), rows, cols);
  }

  std::optional<Mat> as_matrix(const json& j, const std::string& p, Eigen::Index rows, Eigen::Index cols) {
    if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows) {
      add(p, "expected an array of " + std::to_string(rows) + " rows");
      return std::nullopt;
    }
    Mat m(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r) {
      auto row = as_numbers(j[static_cast<std::size_t>(r)], p + "[" + std::to_string(r) + "]");
      if (!row) return std::nullopt;
      if (static_cast<Eigen::Index>(row->size()) != cols) {
        add(p + "[" + std::to_string(r) + "]", "expected " + std::to_string(cols) + " entries");
        return std::nullopt;
      }
      for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = (*row)[static_cast<std::size_t>(c)];
    }
    return m;
  }

  /// Reader for a nested value already fetched with raw().
  ObjectReader child(const json* j, const std::string& key) { return ObjectReader(j, at(key), *out_); }

  ObjectReader sub(const std::string& key) { return ObjectReader(raw(key), at(key), *out_); }

  void finish() {
    if (!obj_) return;
    for (auto it = obj_->begin(); it != obj_->end(); ++it)
      if (!seen_.count(it.key())) add(at(it.key()), "unknown key");
  }

 private:
  const json* obj_;
  std::string path_;
  std::vector<Violation>* out_;
  std::set<std::string> seen_;
};

/// Ascending positive grid, as an explicit array or {start, stop, count}
/// (count points, evenly spaced, both ends included).
inline std::vector<double> read_grid(ObjectReader& r, const std::string& key, std::vector<double> def) {
  const json* j = r.raw(key);
  if (!j) return def;
  std::vector<double> g;
  if (j->is_array()) {
    auto v = r.as_numbers(*j, r.at(key));
    if (!v) return def;
    g = *v;
  } else {
    ObjectReader s = r.child(j, key);
    const double start = s.number("start", std::nullopt, true).value_or(1.0);
    const double stop = s.number("stop", std::nullopt, true).value_or(2.0);
    const std::size_t n = s.count("count", 2, 2);
    s.finish();
    if (!(stop > start)) {
      r.add(r.at(key), "stop must exceed start");
      return def;
    }
    for (std::size_t i = 0; i < n; ++i) g.push_back(start + (stop - start) * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  if (g.empty()) r.add(r.at(key), "must be non-empty");
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (!(g[i] > 0.0)) r.add(r.at(key) + "[" + std::to_string(i) + "]", "must be > 0");
    if (i > 0 && !(g[i] > g[i - 1])) r.add(r.at(key), "must be strictly ascending");
  }
  return g;
}

struct FieldParams {
  std::string family = "tanh";
  double amplitude = 0.9;
  Mat8 coupling = -Mat8::Identity();
  Vec8 offset = Vec8::Zero();
  /// constant family: one value per coordinate, or a broadcast scalar.
  std::vector<double> value{0.0};
  std::optional<Mat> matrix;
};

struct ScheduleParams {
  std::string kind = "sinusoidal";
  double period = 1.0;
  double kappa = 0.0;

  CycleSchedule make() const {
    return kind == "frozen" ? CycleSchedule::frozen(period, kappa) : CycleSchedule::sinusoidal(period);
  }
};

struct FlowParams {
  std::size_t n_molecules = 1;
  FieldParams field;
  ScheduleParams schedule;
  double dt = 0.01;
  std::size_t n_cycles = 4;
  std::size_t store_stride = 1;
  StepOptions step;
  std::optional<std::vector<double>> u0, p0;
  double u_mean = 0.0, u_sigma = 1.0, p_sigma = 1.0;
};

struct LipschitzParams {
  std::size_t n_molecules = 1;
  FieldParams field;
  std::string box_kind = "snapshots";
  std::vector<double> lower{0.0}, upper{1.0};
  double dilation = 0.1;
  std::string metric = "euclidean";
  double u_scale = 1.0, p_scale = 1.0;
  std::size_t n_pairs = 10000;
  LipschitzMethod method = LipschitzMethod::pair_sampling;
  std::size_t identity_samples = 100000;
  double tune_target = 1.0;
  int tune_iterations = 40;
  double outer_scale = 1.0;
  /// Reference run providing the snapshots (and K′ when box_kind = snapshots).
  double period = 1.0, dt = 0.01;
  std::size_t n_cycles = 8;
  double u_mean = 0.3, u_sigma = 0.1, p_sigma = 1.0;
};

struct ConcentrationParams {
  std::string space = "sphere";
  std::size_t dimension = 64;
  double sigma = 1.0;
  std::vector<double> lower{0.0}, upper{1.0};
  std::string function = "x1";
  std::size_t n_samples = 100000;
  std::vector<double> rho_grid;
  std::optional<double> sigma_f, rho_p;
};

struct SphereParams {
  std::size_t dimension = 256;
  std::vector<double> epsilons{0.0, 0.1, 0.2, 0.3};
  std::size_t n_samples = 100000;
};

struct GravityCaseParams {
  std::string name;
  double m = 0.0, M = 0.0, r2 = 1.0, lambda = 0.5;
};

struct GravityParams {
  bool default_cases = true;
  std::vector<GravityCaseParams> cases;
  std::string unit_system = "SI";
};

struct WepParams {
  WepConfig config;
  FieldParams field;
};

using Parameters = std::variant<FlowParams, LipschitzParams, ConcentrationParams, SphereParams, WepParams, GravityParams>;

struct RunConfig {
  std::string experiment;
  std::uint64_t seed = 0;
  std::string output_dir = "out";
  Parameters parameters;
  json source;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"flow", "lipschitz", "concentration", "sphere", "wep", "gravity"};
  return names;
}

namespace detail {

inline FieldParams read_field(ObjectReader r, bool allow_linear, Eigen::Index dim) {
  FieldParams f;
  std::vector<std::string> families{"tanh", "zero", "constant"};
  if (allow_linear) families.push_back("linear");
  f.family = r.string("family", "tanh", families);
  f.amplitude = r.number("amplitude", 0.9).value_or(0.9);
  if (!(f.amplitude >= 0.0)) r.add(r.at("amplitude"), "must be >= 0");
  if (const json* c = r.raw("coupling")) {
    if (c->is_string()) {
      const std::string s = c->get<std::string>();
      if (s == "identity")
        f.coupling = Mat8::Identity();
      else if (s == "negative_identity")
        f.coupling = -Mat8::Identity();
      else
        r.add(r.at("coupling"), "unknown value '" + s + "' (expected identity, negative_identity or an 8x8 array)");
    } else if (auto m = r.as_matrix(*c, r.at("coupling"), 8, 8)) {
      f.coupling = *m;
    }
  }
  if (auto off = r.numbers("offset")) {
    if (off->size() != 8)
      r.add(r.at("offset"), "expected 8 entries");
    else
      for (int i = 0; i < 8; ++i) f.offset[i] = (*off)[static_cast<std::size_t>(i)];
  }
  if (const json* v = r.raw("value")) {
    if (v->is_number())
      f.value = {v->get<double>()};
    else
      f.value = r.as_numbers(*v, r.at("value")).value_or(f.value);
    if (f.value.size() != 1 && static_cast<Eigen::Index>(f.value.size()) != dim)
      r.add(r.at("value"), "expected a number or " + std::to_string(dim) + " entries");
  }
  if (allow_linear) {
    f.matrix = r.matrix("matrix", dim, dim);
    if (f.family == "linear" && !f.matrix) r.add(r.at("matrix"), "required for the linear family");
  }
  r.finish();
  return f;
}

inline void check_divides(ObjectReader& r, double period, double dt, const std::string& t_key,
                          const std::string& dt_key) {
  if (!(period > 0.0) || !(dt > 0.0)) return;
  const double steps = std::round(period / dt);
  if (steps < 1.0 || std::abs(steps * dt - period) > 1e-12 * std::max(1.0, period))
    r.add(r.at(dt_key), "dt = " + io::format_double(dt) + " does not divide " + r.at(t_key) + " = " +
                            io::format_double(period));
}

inline StepOptions read_step(ObjectReader& r) {
  StepOptions o;
  o.integrator = r.string("integrator", "rk4", {"rk4", "euler"}) == "euler" ? Integrator::euler : Integrator::rk4;
  o.raw_ode = r.boolean("raw_ode", false);
  return o;
}

inline FlowParams read_flow(ObjectReader r) {
  FlowParams f;
  f.n_molecules = r.count("n_molecules", 1, 1);
  const auto dim = static_cast<Eigen::Index>(8 * f.n_molecules);
  f.field = read_field(r.sub("field"), true, dim);
  {
    ObjectReader s = r.sub("schedule");
    f.schedule.kind = s.string("kind", "sinusoidal", {"sinusoidal", "frozen"});
    f.schedule.period = s.positive("T", 1.0);
    f.schedule.kappa = s.number("kappa", 0.0).value_or(0.0);
    if (!(f.schedule.kappa >= 0.0 && f.schedule.kappa <= 1.0)) s.add(s.at("kappa"), "must lie in [0, 1]");
    s.finish();
  }
  f.dt = r.positive("dt", 0.01);
  check_divides(r, f.schedule.period, f.dt, "schedule.T", "dt");
  f.n_cycles = r.count("n_cycles", 4, 1);
  f.store_stride = r.count("store_stride", 1, 1);
  f.step = read_step(r);
  {
    ObjectReader s = r.sub("initial");
    f.u0 = s.numbers("u");
    f.p0 = s.numbers("p");
    for (const auto* v : {&f.u0, &f.p0})
      if (*v && static_cast<Eigen::Index>((*v)->size()) != dim)
        s.add(s.at(v == &f.u0 ? "u" : "p"), "expected " + std::to_string(dim) + " entries");
    f.u_mean = s.number("u_mean", 0.0).value_or(0.0);
    f.u_sigma = s.number("u_sigma", 1.0).value_or(1.0);
    f.p_sigma = s.number("p_sigma", 1.0).value_or(1.0);
    if (f.u_sigma < 0.0) s.add(s.at("u_sigma"), "must be >= 0");
    if (f.p_sigma < 0.0) s.add(s.at("p_sigma"), "must be >= 0");
    s.finish();
  }
  r.finish();
  return f;
}

inline std::vector<double> read_bound(ObjectReader& r, const std::string& key, double def, std::size_t dim) {
  const json* j = r.raw(key);
  if (!j) return std::vector<double>(dim, def);
  if (j->is_number()) return std::vector<double>(dim, j->get<double>());
  auto v = r.as_numbers(*j, r.at(key));
  if (!v) return std::vector<double>(dim, def);
  if (v->size() != dim) {
    r.add(r.at(key), "expected a number or " + std::to_string(dim) + " entries");
    return std::vector<double>(dim, def);
  }
  return *v;
}

inline LipschitzParams read_lipschitz(ObjectReader r) {
  LipschitzParams l;
  l.n_molecules = r.count("n_molecules", 1, 1);
  const auto dim = static_cast<Eigen::Index>(8 * l.n_molecules);
  l.field = read_field(r.sub("field"), false, dim);
  {
    ObjectReader b = r.sub("box");
    l.box_kind = b.string("kind", "snapshots", {"snapshots", "unit", "explicit"});
    const auto zdim = static_cast<std::size_t>(2 * dim);
    l.lower = read_bound(b, "lower", 0.0, zdim);
    l.upper = read_bound(b, "upper", 1.0, zdim);
    for (std::size_t i = 0; i < zdim; ++i)
      if (!(l.lower[i] < l.upper[i])) {
        b.add(b.at("lower"), "lower < upper violated at coordinate " + std::to_string(i));
        break;
      }
    l.dilation = b.number("dilation", 0.1).value_or(0.1);
    if (l.dilation < 0.0) b.add(b.at("dilation"), "must be >= 0");
    b.finish();
  }
  {
    ObjectReader m = r.sub("metric");
    l.metric = m.string("kind", "euclidean", {"euclidean", "weighted"});
    l.u_scale = m.positive("u_scale", 1.0);
    l.p_scale = m.positive("p_scale", 1.0);
    m.finish();
  }
  l.n_pairs = r.count("n_pairs", 10000, 1);
  l.method = r.string("method", "pair_sampling", {"pair_sampling", "gradient_norm"}) == "gradient_norm"
                 ? LipschitzMethod::gradient_norm
                 : LipschitzMethod::pair_sampling;
  l.identity_samples = r.count("identity_samples", 100000, 1);
  {
    ObjectReader t = r.sub("tune");
    l.tune_target = t.positive("target", 1.0);
    l.tune_iterations = static_cast<int>(t.count("iterations", 40, 1));
    l.outer_scale = t.positive("outer_scale", 1.0);
    t.finish();
  }
  {
    ObjectReader s = r.sub("run");
    l.period = s.positive("T", 1.0);
    l.dt = s.positive("dt", 0.01);
    check_divides(s, l.period, l.dt, "T", "dt");
    l.n_cycles = s.count("n_cycles", 8, 1);
    l.u_mean = s.number("u_mean", 0.3).value_or(0.3);
    l.u_sigma = s.number("u_sigma", 0.1).value_or(0.1);
    l.p_sigma = s.number("p_sigma", 1.0).value_or(1.0);
    if (l.u_sigma < 0.0) s.add(s.at("u_sigma"), "must be >= 0");
    if (l.p_sigma < 0.0) s.add(s.at("p_sigma"), "must be >= 0");
    s.finish();
  }
  r.finish();
  return l;
}

inline ConcentrationParams read_concentration(ObjectReader r) {
  ConcentrationParams c;
  {
    ObjectReader s = r.sub("space");
    c.space = s.string("kind", "sphere", {"sphere", "gaussian", "product_uniform"});
    if (c.space == "sphere") {
      c.dimension = s.count("N", 64, 2);
    } else if (c.space == "gaussian") {
      c.dimension = s.count("d", 100, 1);
      c.sigma = s.positive("sigma", 1.0);
    } else {
      c.dimension = s.count("d", 2, 1);
      c.lower = read_bound(s, "lower", 0.0, c.dimension);
      c.upper = read_bound(s, "upper", 1.0, c.dimension);
      for (std::size_t i = 0; i < c.dimension; ++i)
        if (!(c.lower[i] < c.upper[i])) {
          s.add(s.at("lower"), "lower < upper violated at coordinate " + std::to_string(i));
          break;
        }
    }
    s.finish();
  }
  c.function = r.string("function", "x1", {"x1", "mean", "norm"});
  c.n_samples = r.count("n_samples", 100000, 200);
  c.rho_grid = read_grid(r, "rho_grid", {});
  if (r.has("sigma_f")) c.sigma_f = r.positive("sigma_f", 1.0);
  if (r.has("rho_p")) c.rho_p = r.positive("rho_p", 1.0);
  r.finish();
  return c;
}

inline SphereParams read_sphere(ObjectReader r) {
  SphereParams s;
  s.dimension = r.count("N", 256, 2);
  if (auto e = r.numbers("epsilons")) {
    s.epsilons = *e;
    for (std::size_t i = 0; i < e->size(); ++i)
      if ((*e)[i] < 0.0) r.add(r.at("epsilons") + "[" + std::to_string(i) + "]", "must be >= 0");
  }
  s.n_samples = r.count("n_samples", 100000, 1);
  r.finish();
  return s;
}

inline std::optional<Preparation> read_preparation(ObjectReader r) {
  const bool explicit_form = r.has("mean") || r.has("covariance");
  std::optional<Preparation> prep;
  if (explicit_form) {
    auto mean = r.numbers("mean");
    auto cov = r.matrix("covariance", 8, 8);
    if (!mean || mean->size() != 8) r.add(r.at("mean"), "expected 8 entries");
    if (!cov) r.add(r.at("covariance"), "required with mean");
    if (mean && mean->size() == 8 && cov) {
      Vec8 m;
      for (int i = 0; i < 8; ++i) m[i] = (*mean)[static_cast<std::size_t>(i)];
      try {
        prep = Preparation(m, Mat8(*cov));
      } catch (const Error& e) {
        r.add(r.at("covariance"), e.what());
      }
    }
  } else {
    const double pm = r.number("position_mean", 0.3).value_or(0.3);
    const double sx = r.number("sigma_x", 0.1).value_or(0.1);
    const double sy = r.number("sigma_y", 0.1).value_or(0.1);
    if (sx < 0.0) r.add(r.at("sigma_x"), "must be >= 0");
    if (sy < 0.0) r.add(r.at("sigma_y"), "must be >= 0");
    prep = Preparation::isotropic(pm, std::abs(sx), std::abs(sy));
  }
  r.finish();
  return prep;
}

inline WepParams read_wep(ObjectReader r) {
  WepParams w;
  WepConfig& c = w.config;
  if (const json* nl = r.raw("N_list")) {
    if (!nl->is_array() || nl->empty()) {
      r.add(r.at("N_list"), "expected a non-empty array of integers");
    } else {
      c.n_list.clear();
      for (std::size_t i = 0; i < nl->size(); ++i) {
        const std::string p = r.at("N_list") + "[" + std::to_string(i) + "]";
        if (!(*nl)[i].is_number_integer()) {
          r.add(p, "expected an integer");
          continue;
        }
        const auto n = (*nl)[i].get<std::int64_t>();
        if (n < 2) {
          r.add(p, "N must be >= 2 (got " + std::to_string(n) + ")");
          continue;
        }
        c.n_list.push_back(static_cast<std::size_t>(n));
      }
    }
  }
  c.n_trials = r.count("n_trials", 200, 2);
  c.n_cycles = r.count("n_cycles", 8, 1);
  c.period = r.positive("T", 1.0);
  c.dt = r.positive("dt", 0.25);
  check_divides(r, c.period, c.dt, "T", "dt");
  w.field = read_field(r.sub("field"), false, 8);
  if (auto prep = read_preparation(r.sub("preparation"))) c.preparation = *prep;
  c.rho_grid = read_grid(r, "rho_grid", WepConfig::default_rho_grid());
  c.reference_size = r.count("reference_size", 100000, 2);
  c.step = read_step(r);
  r.finish();

  MoleculeFieldSpec& spec = c.field;
  spec.family = w.field.family == "zero"       ? MoleculeFieldSpec::Family::zero
                : w.field.family == "constant" ? MoleculeFieldSpec::Family::constant
                                               : MoleculeFieldSpec::Family::tanh;
  spec.amplitude = w.field.amplitude;
  spec.coupling = w.field.coupling;
  spec.offset = w.field.offset;
  for (int i = 0; i < 8; ++i)
    spec.value[i] = w.field.value.size() == 1 ? w.field.value[0] : w.field.value[static_cast<std::size_t>(i)];
  return w;
}

inline GravityParams read_gravity(ObjectReader r) {
  GravityParams g;
  if (const json* cs = r.raw("cases")) {
    if (cs->is_string()) {
      if (cs->get<std::string>() != "default") r.add(r.at("cases"), "expected \"default\" or an array of cases");
    } else if (!cs->is_array()) {
      r.add(r.at("cases"), "expected \"default\" or an array of cases");
    } else {
      g.default_cases = false;
      for (std::size_t i = 0; i < cs->size(); ++i) {
        ObjectReader c = r.child(&(*cs)[i], "cases[" + std::to_string(i) + "]");
        GravityCaseParams p;
        p.name = c.string("name", "case" + std::to_string(i));
        p.m = c.number("m", std::nullopt, true).value_or(0.0);
        p.M = c.number("M", p.m).value_or(p.m);
        p.r2 = c.positive("r2", 1.0);
        p.lambda = c.positive("lambda", 0.5);
        if (p.m < 0.0) c.add(c.at("m"), "must be >= 0");
        if (p.M < 0.0) c.add(c.at("M"), "must be >= 0");
        c.finish();
        g.cases.push_back(p);
      }
    }
  }
  g.unit_system = r.string("unit_system", "SI", {"SI", "CGS", "geometrized"});
  r.finish();
  return g;
}

}  // namespace detail

/// Parses {"experiment", "seed", "output_dir"?, "parameters"} and collects
/// every violation. The returned config is only meaningful when none were found.
inline RunConfig read_config(const json& root, std::vector<Violation>& violations) {
  RunConfig cfg;
  cfg.source = root;
  ObjectReader r(&root, "", violations);
  if (!root.is_object()) return cfg;
  cfg.experiment = r.string("experiment", "", experiment_names());
  if (!r.has("experiment")) r.add("experiment", "required");
  if (const json* s = r.raw("seed")) {
    if (!s->is_number_integer() || (s->is_number_integer() && !s->is_number_unsigned() && s->get<std::int64_t>() < 0))
      r.add("seed", "expected a non-negative integer");
    else
      cfg.seed = s->get<std::uint64_t>();
  } else {
    r.add("seed", "required");
  }
  cfg.output_dir = r.string("output_dir", "out");
  ObjectReader p = r.sub("parameters");
  const std::string& e = cfg.experiment;
  if (e == "flow")
    cfg.parameters = detail::read_flow(std::move(p));
  else if (e == "lipschitz")
    cfg.parameters = detail::read_lipschitz(std::move(p));
  else if (e == "concentration")
    cfg.parameters = detail::read_concentration(std::move(p));
  else if (e == "sphere")
    cfg.parameters = detail::read_sphere(std::move(p));
  else if (e == "wep")
    cfg.parameters = detail::read_wep(std::move(p));
  else if (e == "gravity")
    cfg.parameters = detail::read_gravity(std::move(p));
  r.finish();
  return cfg;
}

inline std::vector<Violation> validate_config(const json& root) {
  std::vector<Violation> v;
  read_config(root, v);
  return v;
}

/// Throws ValidationError listing every violation.
inline RunConfig parse_config(const json& root) {
  std::vector<Violation> v;
  RunConfig cfg = read_config(root, v);
  if (!v.empty()) throw ValidationError("invalid config:" + join_violations(v));
  return cfg;
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(origin + ": malformed JSON: " + e.what());
  }
}

}  // namespace hrlab::cli

#endif  // HRLAB_CLI_CONFIG_HPP
