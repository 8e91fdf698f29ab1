// hrlab: seeded, reproducible experiment runner.
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "hrlab/cli/runner.hpp"

namespace {

int exit_code(hrlab::ErrorCategory c) {
  switch (c) {
    case hrlab::ErrorCategory::validation: return 2;
    case hrlab::ErrorCategory::numeric:
    case hrlab::ErrorCategory::domain: return 3;
    case hrlab::ErrorCategory::io: return 4;
  }
  return 1;
}

struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  unsigned threads = 1;
};

hrlab::cli::json load(const GlobalFlags& flags) {
  if (flags.config.empty()) throw hrlab::ValidationError("--config is required");
  auto j = hrlab::cli::parse_json_text(hrlab::io::read_file(flags.config), flags.config);
  if (flags.seed && j.is_object()) j["seed"] = *flags.seed;
  return j;
}

int run_experiment(const std::string& name, const GlobalFlags& flags) {
  const auto j = load(flags);
  std::vector<hrlab::cli::Violation> violations;
  hrlab::cli::RunConfig cfg = hrlab::cli::read_config(j, violations);
  if (violations.empty() && cfg.experiment != name)
    violations.push_back({"experiment", "config is for '" + cfg.experiment + "', subcommand is '" + name + "'"});
  if (!violations.empty()) throw hrlab::ValidationError("invalid config:" + hrlab::cli::join_violations(violations));
  const std::string out = flags.out.empty() ? cfg.output_dir : flags.out;
  const auto manifest = hrlab::cli::run(cfg, out, flags.threads);
  std::cout << name << ": wrote";
  for (const auto& f : manifest.outputs) std::cout << ' ' << f;
  std::cout << " manifest.json to " << out << '\n' << manifest.summary.dump(2) << '\n';
  return 0;
}

int validate(const GlobalFlags& flags) {
  const auto violations = hrlab::cli::validate_config(load(flags));
  if (violations.empty()) {
    std::cout << flags.config << ": valid\n";
    return 0;
  }
  std::cout << flags.config << ": " << violations.size() << " violation(s)" << hrlab::cli::join_violations(violations)
            << '\n';
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hamilton-Randers numerical laboratory"};
  app.set_version_flag("--version", hrlab::kVersion);
  app.require_subcommand(1);
  GlobalFlags flags;
  app.add_option("--config", flags.config, "JSON run configuration");
  app.add_option("--seed", flags.seed, "root seed (overrides the config)");
  app.add_option("--out", flags.out, "output directory (overrides the config)");
  app.add_option("--threads", flags.threads, "worker threads")->check(CLI::PositiveNumber);

  std::string chosen;
  for (const auto& name : hrlab::cli::experiment_names()) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->fallthrough();
    sub->callback([&chosen, name] { chosen = name; });
  }
  auto* val = app.add_subcommand("validate", "check a configuration without running it");
  val->fallthrough();
  val->callback([&chosen] { chosen = "validate"; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (chosen == "validate") return validate(flags);
    return run_experiment(chosen, flags);
  } catch (const hrlab::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return exit_code(e.category());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
