//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/report.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include <fmt/format.h>
#include <json.hpp>

#include "revpref/error.hpp"
#include "revpref/random.hpp"

namespace revpref {
namespace {
  using Json = nlohmann::ordered_json;

  std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const char c: s) {
      h ^= static_cast<unsigned char>(c);
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  // Runs fn and prefixes any library error with the analysis cell.
  template <class Fn>
  auto in_context(std::string_view context, Fn &&fn) {
    try {
      return fn();
    } catch (const Error &e) {
      throw Error(e.kind(), fmt::format("[{}] {}", context, e.what()));
    }
  }

  template <class Fn>
  std::optional<double> unless_undefined(Fn &&fn) {
    try {
      return fn();
    } catch (const Error &e) {
      if (e.kind() != ErrorKind::kUndefinedDenominator)
        throw;
      return std::nullopt;
    }
  }

  bool is_cost_prompt(const DecisionRegime &r) {
    return r.kind == DecisionRegime::Kind::kCostFunctionPrompt;
  }

  std::vector<Action> actions_under(std::span<const CaseRecord> records,
                                    const DecisionRegime &regime) {
    std::vector<Action> out;
    out.reserve(records.size());
    for (const auto &rec: records) {
      const auto it = rec.actions.find(regime);
      if (it == rec.actions.end())
        fail(ErrorKind::kIncompleteRecord,
             fmt::format("case '{}' has no action under regime '{}'",
                         rec.case_id, regime.key()));
      out.push_back(it->second);
    }
    return out;
  }

  std::vector<Belief> beliefs_of(std::span<const CaseRecord> records,
                                 BeliefSource source) {
    std::vector<Belief> out;
    out.reserve(records.size());
    for (const auto &rec: records)
      out.push_back(belief_of(rec, source));
    return out;
  }

  std::vector<State> states_of(std::span<const CaseRecord> records) {
    std::vector<State> out;
    out.reserve(records.size());
    for (const auto &rec: records) {
      if (!rec.theta)
        fail(ErrorKind::kIncompleteRecord,
             fmt::format("case '{}' has no theta; counterfactual losses "
                         "need realized outcomes",
                         rec.case_id));
      out.push_back(*rec.theta);
    }
    return out;
  }

  double ratio_of(const CostVector &c, RatioName name) {
    return name == RatioName::kFnFp ? c.fn_fp() : c.defer_fp();
  }

  // Everything computed for one group of records (one domain, or all).
  class CellAnalysis {
  public:
    CellAnalysis(std::string domain, std::vector<CaseRecord> records,
                 const DatasetFile &dataset, const AnalysisConfig &config,
                 const std::vector<DecisionRegime> &regimes)
        : domain_(std::move(domain)), records_(std::move(records)),
          dataset_(dataset), config_(config), regimes_(regimes) { }

    void run(ReportBundle &bundle) {
      fit_all(bundle);
      if (config_.consistency)
        consistency(bundle);
      if (config_.steering)
        steering(bundle);
      if (config_.counterfactual)
        counterfactual(bundle);
      if (config_.sensitivity)
        sensitivity(bundle);
    }

  private:
    std::string context(const DecisionRegime &regime) const {
      return fmt::format("domain '{}', regime '{}'", domain_, regime.key());
    }

    bool has(const DecisionRegime &regime) const {
      return fits_.contains(regime);
    }

    const FitResult &fit_of(const DecisionRegime &regime) const {
      return fits_.at(regime);
    }

    std::vector<DecisionRegime> cost_regimes() const {
      std::vector<DecisionRegime> out;
      for (const auto &r: regimes_) {
        if (is_cost_prompt(r))
          out.push_back(r);
      }
      return out;
    }

    void require_baseline(std::string_view table) const {
      if (!has(DecisionRegime::baseline()))
        fail(ErrorKind::kIncompleteRecord,
             fmt::format("domain '{}': the {} table needs the baseline "
                         "regime",
                         domain_, table));
    }

    void fit_all(ReportBundle &bundle) {
      for (const auto &regime: regimes_) {
        in_context(context(regime), [&] {
          FitRow row;
          row.domain = domain_;
          row.regime = regime;
          row.belief_source = config_.fit_belief(regime);
          const auto obs = observations(records_, regime, row.belief_source);
          row.n = static_cast<int>(obs.size());
          row.fit = fit_mle(obs, config_.fit);
          if (config_.n_resamples > 0) {
            BootstrapOptions boot;
            boot.n_resamples = config_.n_resamples;
            boot.seed = derive_seed(config_.seed,
                                    { fnv1a(domain_), fnv1a(regime.key()) });
            boot.threads = config_.threads;
            auto [fn, defer] = bootstrap_ratios(obs, config_.fit, boot);
            row.fn_fp = fn;
            row.defer_fp = defer;
          }
          fits_.emplace(regime, row.fit);
          bundle.fitted_ratios.push_back(std::move(row));
          return 0;
        });
      }
    }

    void consistency(ReportBundle &bundle) {
      int pooled_n = 0;
      double pooled_matches = 0.0;
      for (const auto &regime: regimes_) {
        in_context(context(regime), [&] {
          IlfcRow row;
          row.domain = domain_;
          row.column = regime.key();
          row.actions_regime = regime;
          row.belief_source = config_.fit_belief(regime);
          row.n = static_cast<int>(records_.size());
          row.ilfc = ilfc(records_, regime, row.belief_source,
                          fit_of(regime).cost);
          if (is_cost_prompt(regime)) {
            pooled_n += row.n;
            pooled_matches += row.ilfc * row.n / 100.0;
          }
          bundle.ilfc_table.push_back(std::move(row));
          return 0;
        });
      }
      if (pooled_n > 0) {
        IlfcRow row;
        row.domain = domain_;
        row.column = "cost";
        row.actions_regime = DecisionRegime::cost_prompt("*");
        row.n = pooled_n;
        row.ilfc = 100.0 * pooled_matches / pooled_n;
        bundle.ilfc_table.push_back(std::move(row));
      }

      // Self-reported costs are scored against baseline decisions.
      self_report_column(bundle, "self_report_global",
                         &CaseRecord::self_report_global);
      self_report_column(bundle, "self_report_case",
                         &CaseRecord::self_report_case);
    }

    void self_report_column(ReportBundle &bundle, std::string_view column,
                            std::optional<CostVector> CaseRecord::*field) {
      const bool any = std::any_of(records_.begin(), records_.end(),
                                   [&](const auto &r) { return (r.*field).has_value(); });
      if (!any || !has(DecisionRegime::baseline()))
        return;
      in_context(fmt::format("domain '{}', {}", domain_, column), [&] {
        IlfcRow row;
        row.domain = domain_;
        row.column = std::string(column);
        row.actions_regime = DecisionRegime::baseline();
        row.belief_source = config_.fit_belief(row.actions_regime);
        row.n = static_cast<int>(records_.size());
        row.ilfc = ilfc(records_, row.actions_regime, row.belief_source,
                        [&](const CaseRecord &rec) {
                          if (!(rec.*field))
                            fail(ErrorKind::kIncompleteRecord,
                                 fmt::format("case '{}' has no {}",
                                             rec.case_id, column));
                          return *(rec.*field);
                        });
        bundle.ilfc_table.push_back(std::move(row));
        return 0;
      });
    }

    void steering(ReportBundle &bundle) {
      const auto costs = cost_regimes();
      if (costs.empty())
        return;
      require_baseline("steering");
      const auto &base = fit_of(DecisionRegime::baseline()).cost;

      std::array<SteeringTally, 2> per_ratio;
      SteeringTally pooled;
      for (const auto &regime: costs) {
        in_context(context(regime), [&] {
          const auto &bench =
              find_benchmark(dataset_.benchmark_catalog, regime.benchmark_id);
          for (const auto name: { RatioName::kFnFp, RatioName::kDeferFp }) {
            SteeringRow row;
            row.domain = domain_;
            row.benchmark_id = bench.id;
            row.ratio = name;
            row.baseline_ratio = ratio_of(base, name);
            row.steered_ratio = ratio_of(fit_of(regime).cost, name);
            row.true_ratio = ratio_of(bench.cost, name);
            try {
              row.progress = steering_progress(
                  row.baseline_ratio, row.steered_ratio, row.true_ratio);
              row.steering_class = classify_steering(*row.progress);
            } catch (const Error &e) {
              if (e.kind() != ErrorKind::kUndefinedProgress)
                throw;
            }
            per_ratio[static_cast<std::size_t>(name)].add(
                row.baseline_ratio, row.steered_ratio, row.true_ratio);
            pooled.add(row.baseline_ratio, row.steered_ratio, row.true_ratio);
            bundle.steering_table.push_back(std::move(row));
          }
          return 0;
        });
      }
      bundle.steering_counts.push_back({ domain_, "fn_fp", per_ratio[0] });
      bundle.steering_counts.push_back({ domain_, "defer_fp", per_ratio[1] });
      bundle.steering_counts.push_back({ domain_, "pooled", pooled });
    }

    void counterfactual(ReportBundle &bundle) {
      const auto states =
          in_context(fmt::format("domain '{}', counterfactual", domain_),
                     [&] { return states_of(records_); });
      const auto costs = cost_regimes();
      const bool prob = has(DecisionRegime::true_prob());
      if (costs.empty() && !prob)
        return;
      require_baseline("counterfactual");

      const auto &base_cost = fit_of(DecisionRegime::baseline()).cost;
      const auto elicited = beliefs_of(records_, BeliefSource::kElicited);
      const auto base_actions =
          actions_under(records_, DecisionRegime::baseline());
      const int n = static_cast<int>(records_.size());
      const std::size_t first_row = bundle.counterfactual_table.size();

      for (const auto &regime: costs) {
        in_context(context(regime), [&] {
          const auto &bench =
              find_benchmark(dataset_.benchmark_catalog, regime.benchmark_id);
          CounterfactualReport rep;
          rep.benchmark_id = bench.id;
          rep.intervention = Intervention::kCostPrompt;
          rep.target_prediction = unless_undefined([&] {
            return counterfactual_reduction(bench, base_cost, elicited,
                                            bench.cost, elicited, states);
          });
          rep.steered_prediction = unless_undefined([&] {
            return counterfactual_reduction(bench, base_cost, elicited,
                                            fit_of(regime).cost, elicited,
                                            states);
          });
          const auto prompted = actions_under(records_, regime);
          rep.realized_effect = unless_undefined([&] {
            return realized_reduction(bench, base_actions, prompted, states);
          });
          bundle.counterfactual_table.push_back({ domain_, n, rep });
          return 0;
        });
      }

      if (prob) {
        const auto regime = DecisionRegime::true_prob();
        in_context(context(regime), [&] {
          const auto truth = beliefs_of(records_, BeliefSource::kTrue);
          const auto prompted = actions_under(records_, regime);
          const auto &prob_cost = fit_of(regime).cost;

          std::vector<BenchmarkCost> benchmarks;
          for (const auto &r: costs)
            benchmarks.push_back(
                find_benchmark(dataset_.benchmark_catalog, r.benchmark_id));
          if (benchmarks.empty())
            benchmarks = dataset_.benchmark_catalog;

          for (const auto &bench: benchmarks) {
            CounterfactualReport rep;
            rep.benchmark_id = bench.id;
            rep.intervention = Intervention::kProbabilityPrompt;
            rep.target_prediction = unless_undefined([&] {
              return counterfactual_reduction(bench, base_cost, elicited,
                                              base_cost, truth, states);
            });
            rep.steered_prediction = unless_undefined([&] {
              return counterfactual_reduction(bench, base_cost, elicited,
                                              prob_cost, truth, states);
            });
            rep.realized_effect = unless_undefined([&] {
              return realized_reduction(bench, base_actions, prompted,
                                        states);
            });
            bundle.counterfactual_table.push_back({ domain_, n, rep });
          }
          return 0;
        });
      }

      correlations(bundle, first_row);
    }

    void correlations(ReportBundle &bundle, std::size_t first_row) {
      for (const auto intervention:
           { Intervention::kCostPrompt, Intervention::kProbabilityPrompt }) {
        for (const std::string prediction: { "target", "steered" }) {
          CorrelationRow row;
          row.domain = domain_;
          row.intervention = intervention;
          row.prediction = prediction;
          std::vector<double> x, y;
          int rows = 0;
          for (std::size_t i = first_row; i < bundle.counterfactual_table.size();
               ++i) {
            const auto &rep = bundle.counterfactual_table[i].report;
            if (rep.intervention != intervention)
              continue;
            ++rows;
            const auto &pred = prediction == "target" ? rep.target_prediction
                                                      : rep.steered_prediction;
            if (pred && rep.realized_effect) {
              x.push_back(*pred);
              y.push_back(*rep.realized_effect);
            }
          }
          if (rows == 0)
            continue;
          row.n = static_cast<int>(x.size());
          row.excluded = rows - row.n;
          try {
            row.pearson_r = pearson_r(x, y);
          } catch (const Error &e) {
            if (e.kind() != ErrorKind::kDegenerateInput
                && e.kind() != ErrorKind::kDimension)
              throw;
          }
          bundle.correlations.push_back(std::move(row));
        }
      }
    }

    void sensitivity(ReportBundle &bundle) {
      if (regimes_.empty())
        return;
      const DecisionRegime regime = has(DecisionRegime::baseline())
                                        ? DecisionRegime::baseline()
                                        : regimes_.front();
      in_context(context(regime), [&] {
        SensitivitySpec spec = *config_.sensitivity;
        spec.threads = config_.threads;
        const auto obs =
            observations(records_, regime, config_.fit_belief(regime));
        bundle.sensitivity_table.push_back(
            { domain_, regime, noise_sensitivity(obs, spec, config_.fit) });
        return 0;
      });
    }

    std::string domain_;
    std::vector<CaseRecord> records_;
    const DatasetFile &dataset_;
    const AnalysisConfig &config_;
    const std::vector<DecisionRegime> &regimes_;
    std::map<DecisionRegime, FitResult> fits_;
  };

  Json num(double x) {
    if (!std::isfinite(x))
      return nullptr;
    return x;
  }

  Json num(const std::optional<double> &x) {
    return x ? num(*x) : Json(nullptr);
  }

  // Like Json::dump(2), but floats are printed with six significant digits.
  void write_json(const Json &j, int depth, std::string &out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    if (j.is_object() && !j.empty()) {
      out += "{\n";
      bool first = true;
      for (const auto &[key, value]: j.items()) {
        if (!first)
          out += ",\n";
        first = false;
        out += pad + Json(key).dump() + ": ";
        write_json(value, depth + 1, out);
      }
      out += "\n" + close + "}";
    } else if (j.is_array() && !j.empty()) {
      out += "[\n";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i > 0)
          out += ",\n";
        out += pad;
        write_json(j[i], depth + 1, out);
      }
      out += "\n" + close + "]";
    } else if (j.is_number_float()) {
      out += fmt::format("{:.6g}", j.get<double>());
    } else {
      out += j.dump();
    }
  }

  Json interval_json(const std::optional<RatioInterval> &ci) {
    if (!ci)
      return nullptr;
    Json j;
    j["lower_95"] = num(ci->lower_95);
    j["upper_95"] = num(ci->upper_95);
    j["n_resamples"] = ci->n_resamples;
    j["n_boundary"] = ci->n_boundary;
    j["seed"] = ci->seed;
    return j;
  }

  std::string cell6(double x) { return fmt::format("{:.6g}", x); }

  std::string cell6(const std::optional<double> &x) {
    return x ? cell6(*x) : std::string();
  }

  std::string csv_text(std::string_view s) {
    if (s.find_first_of(",\"\n") == std::string_view::npos)
      return std::string(s);
    std::string out = "\"";
    for (const char c: s) {
      if (c == '"')
        out += '"';
      out += c;
    }
    return out + "\"";
  }

  std::string join(const std::vector<std::string> &cells) {
    std::string out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0)
        out += ',';
      out += cells[i];
    }
    return out + '\n';
  }
}  // namespace

BeliefSource AnalysisConfig::fit_belief(const DecisionRegime &regime) const {
  if (const auto it = fit_beliefs.find(regime); it != fit_beliefs.end())
    return it->second;
  return regime.kind == DecisionRegime::Kind::kTrueProbPrompt
             ? BeliefSource::kTrue
             : BeliefSource::kElicited;
}

AnalysisConfig AnalysisConfig::from_json(std::string_view text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    fail(ErrorKind::kParse, fmt::format("malformed config: {}", e.what()));
  }
  if (!j.is_object())
    fail(ErrorKind::kParse, "config must be a JSON object");

  static const std::set<std::string> keys = {
    "regimes",     "fit_beliefs", "n_resamples",    "seed",
    "threads",     "by_domain",   "consistency",    "steering",
    "counterfactual", "fit",      "sensitivity",
  };
  for (const auto &[key, _]: j.items()) {
    if (!keys.contains(key))
      fail(ErrorKind::kParse, fmt::format("unknown config key '{}'", key));
  }

  AnalysisConfig config;
  try {
    if (j.contains("regimes")) {
      for (const auto &k: j["regimes"])
        config.regimes.push_back(
            DecisionRegime::from_key(k.get<std::string>()));
    }
    if (j.contains("fit_beliefs")) {
      for (const auto &[k, v]: j["fit_beliefs"].items())
        config.fit_beliefs[DecisionRegime::from_key(k)] =
            belief_source_from_string(v.get<std::string>());
    }
    config.n_resamples = j.value("n_resamples", config.n_resamples);
    config.seed = j.value("seed", config.seed);
    config.threads = j.value("threads", config.threads);
    config.by_domain = j.value("by_domain", config.by_domain);
    config.consistency = j.value("consistency", config.consistency);
    config.steering = j.value("steering", config.steering);
    config.counterfactual = j.value("counterfactual", config.counterfactual);

    if (j.contains("fit")) {
      const auto &f = j["fit"];
      auto &fit = config.fit;
      fit.max_iterations = f.value("max_iterations", fit.max_iterations);
      fit.gradient_tolerance =
          f.value("gradient_tolerance", fit.gradient_tolerance);
      fit.lower_bound = f.value("lower_bound", fit.lower_bound);
      fit.upper_bound = f.value("upper_bound", fit.upper_bound);
      if (f.contains("initial_cost")) {
        const auto c = f["initial_cost"].get<std::vector<double>>();
        if (c.size() != 3)
          fail(ErrorKind::kParse, "fit.initial_cost must have 3 entries");
        fit.initial_cost = CostVector(c[0], c[1], c[2]);
      }
    }
    if (j.contains("sensitivity") && !j["sensitivity"].is_null()) {
      const auto &s = j["sensitivity"];
      SensitivitySpec spec;
      spec.noise_sds = s.value("noise_sds", spec.noise_sds);
      spec.n_repetitions = s.value("n_repetitions", spec.n_repetitions);
      spec.seed = s.value("seed", config.seed);
      spec.band_resamples = s.value("band_resamples", spec.band_resamples);
      spec.validate();
      config.sensitivity = spec;
    }
  } catch (const nlohmann::json::exception &e) {
    fail(ErrorKind::kParse, fmt::format("invalid config: {}", e.what()));
  }
  config.fit.validate();
  if (config.n_resamples < 0)
    fail(ErrorKind::kParameter, "n_resamples must be nonnegative");
  return config;
}

ReportBundle run_analysis(const DatasetFile &dataset,
                          const AnalysisConfig &config) {
  config.fit.validate();
  if (dataset.records.empty())
    fail(ErrorKind::kEmptyDataset, "dataset has no records");
  if (config.n_resamples < 0)
    fail(ErrorKind::kParameter, "n_resamples must be nonnegative");

  std::vector<DecisionRegime> regimes = config.regimes;
  if (regimes.empty()) {
    std::set<DecisionRegime> present;
    for (const auto &rec: dataset.records) {
      for (const auto &[regime, _]: rec.actions)
        present.insert(regime);
    }
    regimes.assign(present.begin(), present.end());
  }
  for (const auto &r: regimes) {
    if (r.kind == DecisionRegime::Kind::kSelfReportGlobal
        || r.kind == DecisionRegime::Kind::kSelfReportCase)
      fail(ErrorKind::kParameter,
           fmt::format("'{}' is scored from self-reports, not fitted",
                       r.key()));
  }

  std::map<std::string, std::vector<CaseRecord>> groups;
  for (const auto &rec: dataset.records)
    groups[config.by_domain ? rec.domain : std::string("all")].push_back(rec);

  ReportBundle bundle;
  bundle.seed = config.seed;
  bundle.n_resamples = config.n_resamples;
  for (auto &[domain, records]: groups) {
    CellAnalysis cell(domain, std::move(records), dataset, config, regimes);
    cell.run(bundle);
  }
  return bundle;
}

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "json")
    return ReportFormat::kJson;
  if (text == "csv")
    return ReportFormat::kCsv;
  if (text == "figure")
    return ReportFormat::kFigureData;
  fail(ErrorKind::kParameter,
       fmt::format("format must be json, csv or figure, got '{}'", text));
}

std::string render_json(const ReportBundle &bundle) {
  Json out;
  out["seed"] = bundle.seed;
  out["n_resamples"] = bundle.n_resamples;

  Json fits = Json::array();
  for (const auto &row: bundle.fitted_ratios) {
    Json j;
    j["domain"] = row.domain;
    j["regime"] = row.regime.key();
    j["belief_source"] = to_string(row.belief_source);
    j["n"] = row.n;
    j["c_fp"] = num(row.fit.cost.c_fp());
    j["c_fn"] = num(row.fit.cost.c_fn());
    j["c_defer"] = num(row.fit.cost.c_defer());
    j["fn_fp"] = num(row.fit.cost.fn_fp());
    j["defer_fp"] = num(row.fit.cost.defer_fp());
    j["log_likelihood"] = num(row.fit.log_likelihood);
    j["converged"] = row.fit.converged;
    j["iterations"] = row.fit.iterations;
    j["gradient_norm"] = num(row.fit.gradient_norm);
    Json flags = Json::array();
    for (const auto f: row.fit.boundary_flags)
      flags.push_back(to_string(f));
    j["boundary_flags"] = std::move(flags);
    j["degenerate"] = row.fit.degenerate;
    j["fn_fp_ci"] = interval_json(row.fn_fp);
    j["defer_fp_ci"] = interval_json(row.defer_fp);
    fits.push_back(std::move(j));
  }
  out["fitted_ratios"] = std::move(fits);

  Json ilfc_rows = Json::array();
  for (const auto &row: bundle.ilfc_table) {
    Json j;
    j["domain"] = row.domain;
    j["column"] = row.column;
    j["actions_regime"] = row.actions_regime.key();
    j["belief_source"] = to_string(row.belief_source);
    j["n"] = row.n;
    j["ilfc"] = num(row.ilfc);
    ilfc_rows.push_back(std::move(j));
  }
  out["ilfc_table"] = std::move(ilfc_rows);

  Json steering_rows = Json::array();
  for (const auto &row: bundle.steering_table) {
    Json j;
    j["domain"] = row.domain;
    j["benchmark_id"] = row.benchmark_id;
    j["ratio"] = to_string(row.ratio);
    j["baseline_ratio"] = num(row.baseline_ratio);
    j["steered_ratio"] = num(row.steered_ratio);
    j["true_ratio"] = num(row.true_ratio);
    j["progress"] = num(row.progress);
    j["class"] = row.steering_class
                     ? Json(std::string(to_string(*row.steering_class)))
                     : Json(nullptr);
    steering_rows.push_back(std::move(j));
  }
  out["steering_table"] = std::move(steering_rows);

  Json counts = Json::array();
  for (const auto &row: bundle.steering_counts) {
    Json j;
    j["domain"] = row.domain;
    j["ratio"] = row.ratio;
    j["wrong"] = row.tally.counts[0];
    j["under"] = row.tally.counts[1];
    j["target"] = row.tally.counts[2];
    j["over"] = row.tally.counts[3];
    j["n"] = row.tally.total();
    j["excluded"] = row.tally.excluded;
    counts.push_back(std::move(j));
  }
  out["steering_counts"] = std::move(counts);

  Json cf = Json::array();
  for (const auto &row: bundle.counterfactual_table) {
    Json j;
    j["domain"] = row.domain;
    j["intervention"] = to_string(row.report.intervention);
    j["benchmark_id"] = row.report.benchmark_id;
    j["n"] = row.n;
    j["target_prediction"] = num(row.report.target_prediction);
    j["steered_prediction"] = num(row.report.steered_prediction);
    j["realized_effect"] = num(row.report.realized_effect);
    cf.push_back(std::move(j));
  }
  out["counterfactual_table"] = std::move(cf);

  Json corr = Json::array();
  for (const auto &row: bundle.correlations) {
    Json j;
    j["domain"] = row.domain;
    j["intervention"] = to_string(row.intervention);
    j["prediction"] = row.prediction;
    j["n"] = row.n;
    j["excluded"] = row.excluded;
    j["pearson_r"] = num(row.pearson_r);
    corr.push_back(std::move(j));
  }
  out["correlations"] = std::move(corr);

  Json sens = Json::array();
  for (const auto &section: bundle.sensitivity_table) {
    Json j;
    j["domain"] = section.domain;
    j["regime"] = section.regime.key();
    j["base_fn_fp"] = num(section.table.base_fit.cost.fn_fp());
    j["base_defer_fp"] = num(section.table.base_fit.cost.defer_fp());
    j["base_at_bound"] = section.table.base_at_bound;
    Json rows = Json::array();
    for (const auto &r: section.table.rows) {
      Json row;
      row["sd"] = num(r.sd);
      row["fn_fp_median"] = num(r.fn_fp_median);
      row["fn_fp_lower"] = num(r.fn_fp_lower);
      row["fn_fp_upper"] = num(r.fn_fp_upper);
      row["defer_fp_median"] = num(r.defer_fp_median);
      row["defer_fp_lower"] = num(r.defer_fp_lower);
      row["defer_fp_upper"] = num(r.defer_fp_upper);
      row["n_repetitions"] = r.n_repetitions;
      row["n_boundary"] = r.n_boundary;
      rows.push_back(std::move(row));
    }
    j["rows"] = std::move(rows);
    sens.push_back(std::move(j));
  }
  out["sensitivity_table"] = std::move(sens);

  std::string text;
  write_json(out, 0, text);
  return text + '\n';
}

std::map<std::string, std::string> render_csv_tables(
    const ReportBundle &bundle) {
  std::map<std::string, std::string> files;

  std::string fits = join({ "domain", "regime", "belief_source", "n", "c_fp",
                            "c_fn", "c_defer", "fn_fp", "fn_fp_lower_95",
                            "fn_fp_upper_95", "defer_fp", "defer_fp_lower_95",
                            "defer_fp_upper_95", "n_boundary_resamples",
                            "log_likelihood", "converged", "flag_c_fp",
                            "flag_c_fn", "flag_c_defer", "degenerate" });
  for (const auto &row: bundle.fitted_ratios) {
    const auto &c = row.fit.cost;
    auto lo = [](const auto &ci) {
      return ci ? cell6(ci->lower_95) : std::string();
    };
    auto hi = [](const auto &ci) {
      return ci ? cell6(ci->upper_95) : std::string();
    };
    fits += join({ csv_text(row.domain), csv_text(row.regime.key()),
                   std::string(to_string(row.belief_source)),
                   std::to_string(row.n), cell6(c.c_fp()), cell6(c.c_fn()),
                   cell6(c.c_defer()), cell6(c.fn_fp()), lo(row.fn_fp),
                   hi(row.fn_fp), cell6(c.defer_fp()), lo(row.defer_fp),
                   hi(row.defer_fp),
                   row.fn_fp ? std::to_string(row.fn_fp->n_boundary) : "",
                   cell6(row.fit.log_likelihood),
                   row.fit.converged ? "true" : "false",
                   std::string(to_string(row.fit.boundary_flags[0])),
                   std::string(to_string(row.fit.boundary_flags[1])),
                   std::string(to_string(row.fit.boundary_flags[2])),
                   row.fit.degenerate ? "true" : "false" });
  }
  files["fitted_ratios.csv"] = std::move(fits);

  std::string ilfc_csv = join({ "domain", "column", "actions_regime",
                                "belief_source", "n", "ilfc" });
  for (const auto &row: bundle.ilfc_table) {
    ilfc_csv += join({ csv_text(row.domain), csv_text(row.column),
                       csv_text(row.actions_regime.key()),
                       std::string(to_string(row.belief_source)),
                       std::to_string(row.n), cell6(row.ilfc) });
  }
  files["ilfc.csv"] = std::move(ilfc_csv);

  std::string steering = join({ "domain", "benchmark_id", "ratio",
                                "baseline_ratio", "steered_ratio",
                                "true_ratio", "progress", "class" });
  for (const auto &row: bundle.steering_table) {
    steering += join({ csv_text(row.domain), csv_text(row.benchmark_id),
                       std::string(to_string(row.ratio)),
                       cell6(row.baseline_ratio), cell6(row.steered_ratio),
                       cell6(row.true_ratio), cell6(row.progress),
                       row.steering_class
                           ? std::string(to_string(*row.steering_class))
                           : std::string() });
  }
  files["steering.csv"] = std::move(steering);

  std::string counts = join({ "domain", "ratio", "wrong", "under", "target",
                              "over", "n", "excluded" });
  for (const auto &row: bundle.steering_counts) {
    const auto &t = row.tally;
    counts += join({ csv_text(row.domain), row.ratio,
                     std::to_string(t.counts[0]), std::to_string(t.counts[1]),
                     std::to_string(t.counts[2]), std::to_string(t.counts[3]),
                     std::to_string(t.total()), std::to_string(t.excluded) });
  }
  files["steering_counts.csv"] = std::move(counts);

  std::string cf = join({ "domain", "intervention", "benchmark_id", "n",
                          "target_prediction", "steered_prediction",
                          "realized_effect" });
  for (const auto &row: bundle.counterfactual_table) {
    const auto &r = row.report;
    cf += join({ csv_text(row.domain),
                 std::string(to_string(r.intervention)),
                 csv_text(r.benchmark_id), std::to_string(row.n),
                 cell6(r.target_prediction), cell6(r.steered_prediction),
                 cell6(r.realized_effect) });
  }
  files["counterfactual.csv"] = std::move(cf);

  std::string corr = join({ "domain", "intervention", "prediction", "n",
                            "excluded", "pearson_r" });
  for (const auto &row: bundle.correlations) {
    corr += join({ csv_text(row.domain),
                   std::string(to_string(row.intervention)), row.prediction,
                   std::to_string(row.n), std::to_string(row.excluded),
                   cell6(row.pearson_r) });
  }
  files["correlations.csv"] = std::move(corr);

  std::string sens = join({ "domain", "regime", "sd", "fn_fp_median",
                            "fn_fp_lower", "fn_fp_upper", "defer_fp_median",
                            "defer_fp_lower", "defer_fp_upper",
                            "n_repetitions", "n_boundary", "base_at_bound" });
  for (const auto &section: bundle.sensitivity_table) {
    for (const auto &r: section.table.rows) {
      sens += join({ csv_text(section.domain),
                     csv_text(section.regime.key()), cell6(r.sd),
                     cell6(r.fn_fp_median), cell6(r.fn_fp_lower),
                     cell6(r.fn_fp_upper), cell6(r.defer_fp_median),
                     cell6(r.defer_fp_lower), cell6(r.defer_fp_upper),
                     std::to_string(r.n_repetitions),
                     std::to_string(r.n_boundary),
                     section.table.base_at_bound ? "true" : "false" });
    }
  }
  files["sensitivity.csv"] = std::move(sens);
  return files;
}

std::map<std::string, std::string> render_figure_data(
    const ReportBundle &bundle) {
  std::map<std::string, std::string> files;

  // Progress plot: x = directed progress, y = target ratio, one panel per
  // ratio.
  std::string progress = join({ "x", "y", "group", "panel", "benchmark_id" });
  for (const auto &row: bundle.steering_table) {
    if (!row.progress)
      continue;
    progress += join({ fmt::format("{}", *row.progress),
                       fmt::format("{}", row.true_ratio),
                       csv_text(row.domain),
                       std::string(to_string(row.ratio)),
                       csv_text(row.benchmark_id) });
  }
  files["steering_progress.csv"] = std::move(progress);

  // Predicted-vs-realized scatter, one panel per (intervention, prediction).
  std::string scatter = join({ "x", "y", "group", "panel", "benchmark_id" });
  for (const auto &row: bundle.counterfactual_table) {
    const auto &r = row.report;
    if (!r.realized_effect)
      continue;
    for (const auto &[name, pred]:
         { std::pair { "target", r.target_prediction },
           std::pair { "steered", r.steered_prediction } }) {
      if (!pred)
        continue;
      scatter += join({ fmt::format("{}", *pred),
                        fmt::format("{}", *r.realized_effect),
                        csv_text(row.domain),
                        fmt::format("{}:{}", to_string(r.intervention), name),
                        csv_text(r.benchmark_id) });
    }
  }
  files["counterfactual_scatter.csv"] = std::move(scatter);
  return files;
}

void emit_report(const ReportBundle &bundle, ReportFormat format,
                 const std::filesystem::path &destination) {
  if (format == ReportFormat::kJson) {
    write_text_file(destination, render_json(bundle));
    return;
  }
  std::error_code ec;
  std::filesystem::create_directories(destination, ec);
  if (ec)
    fail(ErrorKind::kIo, fmt::format("cannot create directory '{}': {}",
                                     destination.string(), ec.message()));
  const auto files = format == ReportFormat::kCsv ? render_csv_tables(bundle)
                                                  : render_figure_data(bundle);
  for (const auto &[name, text]: files)
    write_text_file(destination / name, text);
}

}  // namespace revpref
