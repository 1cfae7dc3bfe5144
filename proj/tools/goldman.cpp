// goldman: build a surface-group representation into the dual affine group,
// certify it, sample its invariant curve, render it and report on flags.

#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "goldman/config.hpp"
#include "goldman/pipeline.hpp"

namespace {

struct Overrides {
  std::optional<std::string> out, mode, zoom, chart, twist, cocycle_file, coboundary;
  std::optional<int> max_len, threads, twist_generator;
  std::optional<long long> seed;
  std::optional<double> amplitude;
  std::optional<std::size_t> flags;
  std::vector<std::string> sets;
};

void apply(goldman::RunConfig& cfg, const Overrides& o) {
  auto put = [&](const char* key, const auto& v) {
    if (v) {
      if constexpr (std::is_same_v<std::decay_t<decltype(*v)>, std::string>) {
        cfg.set(key, *v);
      } else {
        cfg.set(key, std::to_string(*v));
      }
    }
  };
  put("out", o.out);
  put("mode", o.mode);
  put("zoom", o.zoom);
  put("chart", o.chart);
  put("twist", o.twist);
  put("cocycle_file", o.cocycle_file);
  put("coboundary", o.coboundary);
  put("max_len", o.max_len);
  put("threads", o.threads);
  put("twist_generator", o.twist_generator);
  put("seed", o.seed);
  put("flags", o.flags);
  if (o.amplitude) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", *o.amplitude);
    cfg.set("amplitude", buf);
  }
  for (const auto& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw goldman::ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
}

}  // namespace

int main(int argc, char** argv) {
  const goldman::RunConfig defaults;
  CLI::App app{"Surface-group representations in the dual affine group and their invariant curves"};
  app.require_subcommand(1);
  app.fallthrough();
  app.footer("Stages: gen, deform, certify, curve, render, foliate read and write artifacts in --out;\n"
             "all runs them in one process. Exit codes: 0 ok, 1 certificate failed, 2 error.\n"
             "Precedence: defaults < --config file < flags. Any config key can be given with --set.");

  std::string config_path;
  Overrides o;
  app.add_option("--config", config_path, "config file (key = value lines, or a JSON object)");
  app.add_option("--out", o.out, "output directory")->default_str(defaults.out);
  app.add_option("--max-len", o.max_len, "word length of the sweeps (at most 10)")
      ->default_str(std::to_string(defaults.max_len));
  app.add_option("--seed", o.seed, "seed of the solved cocycle and the flag sampler")
      ->default_str(std::to_string(defaults.seed));
  app.add_option("--amplitude", o.amplitude, "norm of the solved cocycle")->default_str("0.1");
  app.add_option("--mode", o.mode, "cocycle: zero, coboundary, solved or file")
      ->default_str(goldman::to_string(defaults.mode));
  app.add_option("--coboundary", o.coboundary, "point p of mode coboundary, as x,y")->default_str("3,-1");
  app.add_option("--cocycle-file", o.cocycle_file, "JSON {\"translations\": [[u,v], ...]} for mode file");
  app.add_option("--zoom", o.zoom, "render window x0,y0,x1,y1 in chart coordinates")
      ->default_str("automatic");
  app.add_option("--chart", o.chart, "render chart: affine, affine-y or ray")
      ->default_str(goldman::to_string(defaults.chart));
  app.add_option("--threads", o.threads, "worker threads")->default_str(std::to_string(defaults.threads));
  app.add_option("--twist", o.twist, "log-homothety on one generator, or 'boundary'")
      ->default_str(defaults.twist);
  app.add_option("--twist-generator", o.twist_generator, "index of the twisted generator (0 = a1)")
      ->default_str(std::to_string(defaults.twist_generator));
  app.add_option("--flags", o.flags, "flags sampled by foliate")->default_str(std::to_string(defaults.flags));
  app.add_option("--set", o.sets, "override any config key, key=value (repeatable)");

  static const std::map<std::string, std::string> stages = {
      {"gen", "Fuchsian generators -> fuchsian.json"},
      {"deform", "attach the cocycle -> representation.json"},
      {"certify", "hyperbolicity sweep -> hyperbolicity.json"},
      {"curve", "sample the invariant curve -> curve.csv, curve_report.json"},
      {"render", "curve.csv -> curve.svg"},
      {"foliate", "flag endpoints and witnesses -> foliation.json"},
      {"all", "every stage in order"},
  };
  for (const auto& [name, help] : stages) app.add_subcommand(name, help);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : goldman::kExitError;
  }

  goldman::RunConfig cfg;
  try {
    if (!config_path.empty()) cfg = goldman::load_config(config_path, cfg);
    apply(cfg, o);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return goldman::kExitError;
  }

  const auto stage = goldman::stage_from_string(app.get_subcommands().front()->get_name());
  return goldman::run_stage(stage, cfg, std::cout);
}
