#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "instructkit/behavior_safety.hpp"
#include "instructkit/commands.hpp"
#include "instructkit/config.hpp"
#include "instructkit/errors.hpp"

using namespace instructkit;

namespace {

std::string read_input(const std::string& path) {
  if (path == "-") {
    std::ostringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    std::cout.flush();
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << text;
  if (!out) throw InputError("failed writing '" + path + "'");
}

struct Common {
  std::string config_path;
  unsigned jobs = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--config", c.config_path, "JSON config file");
  cmd->add_option("--jobs", c.jobs, "Worker threads (default 1 or config value)");
  cmd->add_option("--out", c.out, "Output path (default stdout)");
}

Config load_config(const Common& c) {
  Config cfg;
  if (!c.config_path.empty()) {
    std::string text;
    try {
      text = read_input(c.config_path);
    } catch (const InputError& e) {
      throw ConfigError(e.what());
    }
    cfg = parse_config(text);
  }
  if (c.jobs > 0) cfg.jobs = c.jobs;
  cfg.validate();
  return cfg;
}

void apply_mix(Config& cfg, const std::string& mix) {
  const auto colon = mix.find(':');
  double a = 0.0;
  double b = 0.0;
  try {
    if (colon == std::string::npos) throw std::invalid_argument(mix);
    std::size_t used = 0;
    a = std::stod(mix.substr(0, colon), &used);
    if (used != colon) throw std::invalid_argument(mix);
    const auto rest = mix.substr(colon + 1);
    b = std::stod(rest, &used);
    if (used != rest.size()) throw std::invalid_argument(mix);
  } catch (const std::exception&) {
    throw ConfigError("--mix expects two numbers as a:b, got '" + mix + "'");
  }
  if (!(a >= 0.0) || !(b >= 0.0) || !(a + b > 0.0)) {
    throw ConfigError("--mix weights must be non-negative and not both zero");
  }
  cfg.sampler.gt_fraction = a / (a + b);
  cfg.sampler.if_fraction = b / (a + b);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Instruction-conditioned trajectory dataset and evaluation toolkit"};
  app.require_subcommand(1);

  Common extract_opts, feas_opts, gen_opts, eval_opts, stats_opts, synth_opts;
  std::string extract_in = "-", feas_in = "-", gen_in = "-", stats_in = "-";

  auto* extract = app.add_subcommand("extract", "Motion attributes of every focal agent");
  add_common(extract, extract_opts);
  extract->add_option("input", extract_in, "Scenarios JSONL ('-' for stdin)");

  auto* feas = app.add_subcommand("feasibility", "GT / feasible / infeasible direction sets");
  add_common(feas, feas_opts);
  feas->add_option("input", feas_in, "Scenarios JSONL ('-' for stdin)");

  auto* gen = app.add_subcommand("gen-instructions", "Instruction/caption dataset rows");
  add_common(gen, gen_opts);
  gen->add_option("input", gen_in, "Scenarios JSONL ('-' for stdin)");
  std::string mode = "direction";
  std::string guidelines_path;
  std::string mix;
  std::optional<std::uint64_t> gen_seed;
  std::optional<std::size_t> gen_count;
  std::optional<bool> balanced;
  gen->add_option("--mode", mode, "direction or behavior")
      ->check(CLI::IsMember({"direction", "behavior"}));
  gen->add_option("--guidelines", guidelines_path, "Guideline book JSON (behavior mode)");
  gen->add_option("--mix", mix, "Sample a training mix with accept:reject weights, e.g. 70:30");
  gen->add_option("--seed", gen_seed, "Sampler seed");
  gen->add_option("--count", gen_count, "Rows to draw when sampling");
  gen->add_flag("--balanced,!--no-balanced", balanced, "Class-balance accepted draws");

  auto* eval = app.add_subcommand("evaluate", "IFR, minADE/minFDE, detection and loss report");
  add_common(eval, eval_opts);
  std::string dataset_path, predictions_path, scenarios_path, report_path;
  eval->add_option("--dataset", dataset_path, "Dataset rows JSONL")->required();
  eval->add_option("--predictions", predictions_path, "Prediction records JSONL")->required();
  eval->add_option("--scenarios", scenarios_path, "Scenarios JSONL for ground-truth futures");
  eval->add_option("--report", report_path, "Report path (same as --out)");

  auto* stats = app.add_subcommand("stats", "Per-class counts of a dataset");
  add_common(stats, stats_opts);
  stats->add_option("input", stats_in, "Dataset JSONL ('-' for stdin)");

  auto* synth = app.add_subcommand("synth", "Synthetic corpus with analytic labels");
  add_common(synth, synth_opts);
  std::string suite = "default", expected_path, synth_predictions_path;
  std::size_t synth_count = 100;
  std::uint64_t synth_seed = 0;
  synth->add_option("--suite", suite, "default or direction");
  synth->add_option("--count", synth_count, "Number of scenarios");
  synth->add_option("--seed", synth_seed, "Generator seed");
  synth->add_option("--expected", expected_path, "Expected-label sidecar path");
  synth->add_option("--predictions", synth_predictions_path, "Synthetic prediction records path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (*extract) {
      const auto cfg = load_config(extract_opts);
      write_output(extract_opts.out, cmd_extract(read_input(extract_in), cfg));
    } else if (*feas) {
      const auto cfg = load_config(feas_opts);
      write_output(feas_opts.out, cmd_feasibility(read_input(feas_in), cfg));
    } else if (*gen) {
      auto cfg = load_config(gen_opts);
      GenOptions opts;
      opts.mode = mode == "behavior" ? GenMode::kBehavior : GenMode::kDirection;
      if (!guidelines_path.empty()) {
        std::string text;
        try {
          text = read_input(guidelines_path);
        } catch (const InputError& e) {
          throw ConfigError(e.what());
        }
        try {
          opts.guidelines = load_guidelines(text);
        } catch (const Error& e) {
          throw ConfigError("guidelines: " + std::string(error_kind_name(e.kind())) + ": " +
                            e.what());
        }
      }
      if (!mix.empty()) apply_mix(cfg, mix);
      if (gen_seed) cfg.sampler.seed = *gen_seed;
      if (balanced) cfg.sampler.class_balanced = *balanced;
      cfg.validate();
      opts.sample = !mix.empty() || gen_count.has_value();
      opts.count = gen_count;
      write_output(gen_opts.out, cmd_gen(read_input(gen_in), cfg, opts));
    } else if (*eval) {
      const auto cfg = load_config(eval_opts);
      const auto dataset = read_input(dataset_path);
      const auto predictions = read_input(predictions_path);
      std::optional<std::string> scenarios;
      if (!scenarios_path.empty()) scenarios = read_input(scenarios_path);
      EvalInputs inputs{dataset, predictions, std::nullopt};
      if (scenarios) inputs.scenarios_jsonl = *scenarios;
      write_output(report_path.empty() ? eval_opts.out : report_path, cmd_evaluate(inputs, cfg));
    } else if (*stats) {
      const auto cfg = load_config(stats_opts);
      write_output(stats_opts.out, cmd_stats(read_input(stats_in), cfg));
    } else if (*synth) {
      const auto cfg = load_config(synth_opts);
      SynthOutputs out;
      try {
        out = cmd_synth(suite, synth_count, synth_seed, cfg);
      } catch (const InvalidSpec& e) {
        throw ConfigError(e.what());
      }
      write_output(synth_opts.out, out.corpus);
      if (!expected_path.empty()) write_output(expected_path, out.expected);
      if (!synth_predictions_path.empty()) write_output(synth_predictions_path, out.predictions);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << '\n';
    return kExitInput;
  } catch (const Error& e) {
    std::cerr << "input error: " << error_kind_name(e.kind()) << ": " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitInput;
  }
  return kExitOk;
}
