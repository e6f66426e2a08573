//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include <cstdint>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "revpref/dataset_io.hpp"
#include "revpref/error.hpp"
#include "revpref/report.hpp"
#include "revpref/response_parser.hpp"
#include "revpref/simulator.hpp"

namespace {
  using namespace revpref;

  struct CommonFlags {
    std::string input;
    std::string catalog;
    std::string config;
    std::string output;
    std::string format = "json";
    std::optional<std::uint64_t> seed;
    std::optional<int> resamples;
    std::optional<int> threads;
  };

  void add_common(CLI::App *cmd, CommonFlags &f, bool needs_input = true) {
    auto *in = cmd->add_option("-i,--input", f.input, "Dataset file (JSONL)");
    if (needs_input)
      in->required();
    cmd->add_option("--catalog", f.catalog,
                    "Benchmark catalog CSV (id,c_fp,c_fn,c_defer)");
    cmd->add_option("--config", f.config, "Analysis config (JSON)");
    cmd->add_option("--seed", f.seed, "Random seed");
    cmd->add_option("--resamples", f.resamples,
                    "Bootstrap resamples (0 skips intervals)");
    cmd->add_option("-o,--output", f.output,
                    "Output file (json) or directory (csv, figure)");
    cmd->add_option("--format", f.format, "json, csv or figure")
        ->check(CLI::IsMember({ "json", "csv", "figure" }));
    cmd->add_option("--threads", f.threads, "Worker threads (0 = all cores)");
  }

  std::string read_all(std::istream &in) {
    return { std::istreambuf_iterator<char>(in),
             std::istreambuf_iterator<char>() };
  }

  std::string read_file(const std::string &path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
      fail(ErrorKind::kIo, fmt::format("cannot open '{}'", path));
    return read_all(in);
  }

  std::vector<BenchmarkCost> catalog_of(const CommonFlags &f) {
    return f.catalog.empty() ? default_catalog() : load_catalog(f.catalog);
  }

  AnalysisConfig config_of(const CommonFlags &f, int default_resamples) {
    AnalysisConfig config;
    if (!f.config.empty())
      config = AnalysisConfig::from_json(read_file(f.config));
    else
      config.n_resamples = default_resamples;
    if (f.seed)
      config.seed = *f.seed;
    if (f.resamples)
      config.n_resamples = *f.resamples;
    if (f.threads)
      config.threads = *f.threads;
    return config;
  }

  void write_output(const CommonFlags &f, const ReportBundle &bundle) {
    const auto format = report_format_from_string(f.format);
    if (f.output.empty()) {
      if (format != ReportFormat::kJson)
        fail(ErrorKind::kParameter,
             "--output directory is required for csv and figure formats");
      std::cout << render_json(bundle);
      return;
    }
    emit_report(bundle, format, f.output);
  }

  void write_text(const std::string &output, const std::string &text) {
    if (output.empty())
      std::cout << text;
    else
      write_text_file(output, text);
  }

  BeliefDistribution parse_beliefs(const std::string &text) {
    if (text == "uniform")
      return UniformBeliefs {};
    const auto colon = text.find(':');
    const auto kind = text.substr(0, colon);
    std::vector<double> values;
    if (colon != std::string::npos) {
      std::stringstream ss(text.substr(colon + 1));
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          std::size_t used = 0;
          values.push_back(std::stod(item, &used));
          if (used != item.size())
            throw std::invalid_argument(item);
        } catch (const std::logic_error &) {
          fail(ErrorKind::kParse,
               fmt::format("bad number '{}' in --beliefs", item));
        }
      }
    }
    if (kind == "beta" && values.size() == 2)
      return BetaBeliefs { values[0], values[1] };
    if (kind == "grid" && !values.empty())
      return GridBeliefs { values };
    fail(ErrorKind::kParse,
         fmt::format("--beliefs must be uniform, beta:A,B or grid:P1,P2,...; "
                     "got '{}'",
                     text));
  }

  int emit_error(std::string_view kind, std::string_view message) {
    nlohmann::ordered_json j;
    j["error"]["kind"] = kind;
    j["error"]["message"] = message;
    std::cerr << j.dump() << '\n';
    return 1;
  }
}  // namespace

int main(int argc, char **argv) {
  CLI::App app { "Revealed-preference estimation of decision costs" };
  app.require_subcommand(1);

  CommonFlags flags;

  auto *fit = app.add_subcommand("fit", "Per-regime MLE with bootstrap CIs");
  add_common(fit, flags);

  auto *consistency =
      app.add_subcommand("consistency", "Implied loss-function consistency");
  add_common(consistency, flags);

  auto *counterfactual = app.add_subcommand(
      "counterfactual", "Target, steered and realized loss reductions");
  add_common(counterfactual, flags);

  auto *steering =
      app.add_subcommand("steering", "Directed progress and classification");
  add_common(steering, flags);

  auto *sensitivity =
      app.add_subcommand("sensitivity", "Gaussian belief-noise sweep");
  add_common(sensitivity, flags);
  int repetitions = 20;
  std::vector<double> noise_sds;
  sensitivity->add_option("--repetitions", repetitions,
                          "Repetitions per noise level");
  sensitivity->add_option("--noise-sds", noise_sds,
                          "Noise standard deviations (must include 0)");

  auto *report = app.add_subcommand("report", "Full analysis bundle");
  add_common(report, flags);

  auto *simulate =
      app.add_subcommand("simulate", "Write a synthetic dataset");
  add_common(simulate, flags, false);
  double c_fp = 1.0, c_fn = 4.0, c_defer = 0.5, beta = 1.0;
  int n_cases = 1000;
  std::string beliefs = "uniform";
  std::string domain = "synthetic";
  bool gumbel = false;
  bool study = false;
  std::vector<std::string> benchmark_ids;
  double steering_fraction = 0.8;
  double elicitation_sd = 0.05;
  int replicates = 5;
  simulate->add_option("--c-fp", c_fp, "Generating c_fp");
  simulate->add_option("--c-fn", c_fn, "Generating c_fn");
  simulate->add_option("--c-defer", c_defer, "Generating c_defer");
  simulate->add_option("--beta", beta, "Logit noise scale");
  simulate->add_option("-n,--cases", n_cases, "Number of cases");
  simulate->add_option("--beliefs", beliefs,
                       "uniform, beta:A,B or grid:P1,P2,...");
  simulate->add_option("--domain", domain, "Domain tag");
  simulate->add_flag("--gumbel", gumbel, "Draw explicit Gumbel shocks");
  simulate->add_flag("--study", study,
                     "Multi-regime study with elicitation noise and prompts");
  simulate->add_option("--benchmarks", benchmark_ids,
                       "Catalog ids prompted in --study mode (default: all)");
  simulate->add_option("--steering-fraction", steering_fraction,
                       "Log-space fraction moved toward each benchmark");
  simulate->add_option("--elicitation-sd", elicitation_sd,
                       "Noise on elicited beliefs in --study mode");
  simulate->add_option("--replicates", replicates,
                       "Belief replicates per case in --study mode");

  auto *parse = app.add_subcommand("parse", "Parse a raw response text");
  std::string parse_kind;
  std::string parse_input;
  std::string parse_output;
  parse->add_option("--kind", parse_kind, "Response template")
      ->required()
      ->check(CLI::IsMember({ "probability", "decision", "self-report" }));
  parse->add_option("-i,--input", parse_input,
                    "Response text file (default: stdin)");
  parse->add_option("-o,--output", parse_output, "Output file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    if (e.get_exit_code() == 0)
      return app.exit(e);
    emit_error("usage", e.what());
    return e.get_exit_code();
  }

  try {
    if (*parse) {
      const std::string text =
          parse_input.empty() ? read_all(std::cin) : read_file(parse_input);
      nlohmann::ordered_json j;
      if (parse_kind == "probability") {
        j["p_elicited"] = parse_probability_response(text).p();
      } else if (parse_kind == "decision") {
        const auto d = parse_decision_response_detail(text);
        j["action"] = to_string(d.action);
        j["forced_choice"] = to_string(d.forced_choice);
      } else {
        const auto c = parse_self_report(text);
        j["self_report"] = { c.c_fp(), c.c_fn(), c.c_defer() };
      }
      write_text(parse_output, j.dump() + '\n');
      return 0;
    }

    if (*simulate) {
      std::vector<CaseRecord> records;
      if (study) {
        StudySpec spec;
        spec.baseline_cost = CostVector(c_fp, c_fn, c_defer);
        spec.beta = beta;
        spec.n_cases = n_cases;
        spec.seed = flags.seed.value_or(0);
        spec.elicitation_sd = elicitation_sd;
        spec.n_replicates = replicates;
        spec.steering_fraction = steering_fraction;
        spec.domain = domain;
        const auto catalog = catalog_of(flags);
        if (benchmark_ids.empty())
          spec.benchmarks = catalog;
        for (const auto &id: benchmark_ids)
          spec.benchmarks.push_back(find_benchmark(catalog, id));
        records = simulate_study(spec);
      } else {
        AgentSpec spec;
        spec.cost = CostVector(c_fp, c_fn, c_defer);
        spec.beta = beta;
        spec.n_cases = n_cases;
        spec.seed = flags.seed.value_or(0);
        spec.belief_distribution = parse_beliefs(beliefs);
        spec.explicit_gumbel = gumbel;
        spec.domain = domain;
        records = simulate_dataset(spec);
      }
      write_text(flags.output, serialize_dataset(records));
      return 0;
    }

    const auto dataset = load_dataset(flags.input, catalog_of(flags));
    // Only `fit` and `report` pay for bootstrap intervals by default.
    const bool wants_intervals = *fit || *report;
    AnalysisConfig config = config_of(flags, wants_intervals ? 1000 : 0);
    if (!*report) {
      config.consistency = consistency->parsed();
      config.steering = steering->parsed();
      config.counterfactual = counterfactual->parsed();
    }
    if (*sensitivity) {
      SensitivitySpec spec =
          config.sensitivity.value_or(SensitivitySpec {});
      if (!config.sensitivity)
        spec.seed = config.seed;
      spec.n_repetitions = repetitions;
      if (!noise_sds.empty())
        spec.noise_sds = noise_sds;
      spec.validate();
      config.sensitivity = spec;
    }
    write_output(flags, run_analysis(dataset, config));
    return 0;
  } catch (const Error &e) {
    return emit_error(to_string(e.kind()), e.what());
  } catch (const std::exception &e) {
    return emit_error("internal", e.what());
  }
}
