#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "clonetag/error.hpp"
#include "clonetag/pipeline.hpp"

namespace clonetag {

namespace detail {

inline std::string env_name(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  std::transform(name.begin(), name.end(), name.begin(), [](unsigned char c) { return std::toupper(c); });
  return "CLONETAG_" + name;
}

inline std::string option_names(const std::string& name) {
  std::string alias = name;
  std::replace(alias.begin(), alias.end(), '-', '_');
  return alias == name ? "--" + name : "--" + name + ",--" + alias;
}

}  // namespace detail

// Registers every pipeline setting on `app`. Config file keys mirror the flags
// (dashes or underscores); CLONETAG_<NAME> environment variables override the
// config file and command-line flags override both.
inline void add_pipeline_options(CLI::App& app, PipelineConfig& cfg) {
  auto opt = [&](const std::string& name, auto& var, const std::string& help) {
    return app.add_option(detail::option_names(name), var, help)->envname(detail::env_name(name))->capture_default_str();
  };
  auto flag = [&](const std::string& name, bool& var, const std::string& help) {
    return app.add_flag(detail::option_names(name), var, help)->envname(detail::env_name(name));
  };
  app.set_config("--config", "", "TOML/INI file with one key per flag");
  opt("target", cfg.target, "target product root");
  opt("reference", cfg.references, "reference product roots")->delimiter(',');
  opt("ext", cfg.extensions, "source file extensions")->delimiter(',');
  opt("exclude", cfg.exclude, "glob patterns to skip")->delimiter(',');
  opt("catalog", cfg.catalog, "precomputed catalog.json (skips scanning)");
  opt("clones", cfg.clones, "precomputed clone classes (skips detection)");
  opt("clones-format", cfg.clones_format, "native | import")->check(CLI::IsMember({"native", "import"}));
  opt("work-dir", cfg.work_dir, "directory for cached stage outputs");
  opt("out", cfg.out, "report path (default <work-dir>/report.json)");
  opt("source-root", cfg.source_root, "source tree laid out as <root>/<product>/<path>");
  opt("min-tokens", cfg.detection.min_tokens, "minimum clone length in tokens")->check(CLI::Range(2, 1 << 30));
  opt("min-rnr", cfg.detection.min_rnr, "minimum ratio of non-repeated 4-grams")->check(CLI::Range(0.0, 1.0));
  opt("timeout", cfg.detection.timeout_seconds, "per-pair detection timeout in seconds");
  opt("jobs", cfg.jobs, "worker threads")->check(CLI::PositiveNumber);
  opt("stride", cfg.stride, "reference sampling stride")->check(CLI::PositiveNumber);
  opt("dim", cfg.train.dimension, "embedding dimension")->check(CLI::Range(2, 1 << 16));
  opt("epochs", cfg.train.epochs, "training epochs")->check(CLI::PositiveNumber);
  opt("negative", cfg.train.negative, "negative samples per word");
  opt("alpha", cfg.train.alpha, "initial learning rate");
  opt("min-alpha", cfg.train.min_alpha, "final learning rate");
  app.add_option_function<std::uint64_t>(detail::option_names("seed"), [&cfg](std::uint64_t s) { cfg.set_seed(s); },
                                         "random seed for training, inference and k-means")
      ->envname(detail::env_name("seed"));
  opt("min-silhouette", cfg.cluster.min_silhouette, "silhouette below which a class stays one cluster");
  opt("restarts", cfg.cluster.restarts, "k-means restarts per k")->check(CLI::PositiveNumber);
  opt("top", cfg.top, "rank a tag word must reach in every cluster fragment")->check(CLI::PositiveNumber);
  opt("block", cfg.block, "rank within which other fragments block a word")->check(CLI::PositiveNumber);
  opt("budget", cfg.budget, "evaluation node budget")->check(CLI::PositiveNumber);
  flag("evaluate", cfg.evaluate, "also write eval.json");
  flag("bundle", cfg.bundle, "inline source excerpts into the report");
  flag("force", cfg.force, "recompute every stage");
}

// CLI11 lets config file values shadow environment variables; re-applies the
// environment to every option not given on the command line.
inline void apply_env_overrides(CLI::App& app, const std::vector<std::string>& args) {
  for (auto* opt : app.get_options()) {
    const auto& env = opt->get_envname();
    if (env.empty()) continue;
    const char* value = std::getenv(env.c_str());
    if (!value) continue;
    const bool on_command_line = std::any_of(args.begin(), args.end(), [&](const std::string& a) {
      for (const auto& n : opt->get_lnames())
        if (a == "--" + n || a.rfind("--" + n + "=", 0) == 0) return true;
      return false;
    });
    if (on_command_line) continue;
    opt->clear();
    opt->add_result(std::string(value));
    opt->run_callback();
  }
}

// Parses `args` (without the program name) into a pipeline configuration.
inline PipelineConfig parse_pipeline_config(std::vector<std::string> args) {
  PipelineConfig cfg;
  CLI::App app("clonetag pipeline", "run");
  add_pipeline_options(app, cfg);
  const auto given = args;
  std::reverse(args.begin(), args.end());
  try {
    app.parse(args);
    apply_env_overrides(app, given);
  } catch (const CLI::ParseError& e) {
    throw Error("config: " + std::string(e.what()));
  }
  if (cfg.top > cfg.block) throw Error("config: top must not exceed block");
  return cfg;
}

}  // namespace clonetag
