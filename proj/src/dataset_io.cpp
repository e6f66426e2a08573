//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/dataset_io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <optional>
#include <set>
#include <sstream>
#include <utility>

#include <fmt/format.h>
#include <json.hpp>

#include "revpref/error.hpp"

namespace revpref {
namespace {
  using Json = nlohmann::ordered_json;

  const std::set<std::string, std::less<>> kRecordKeys = {
    "case_id",          "domain",           "p_elicited",
    "p_true",           "theta",            "actions",
    "forced_choices",   "self_report_global", "self_report_case",
    "belief_replicates",
  };

  std::string_view trim(std::string_view s) {
    const auto ws = " \t\r\n";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos)
      return {};
    return s.substr(first, s.find_last_not_of(ws) - first + 1);
  }

  double number_field(const Json &j, std::string_view field) {
    if (!j.is_number())
      fail(ErrorKind::kParse,
           fmt::format("field '{}' must be a number", field));
    const double v = j.get<double>();
    if (!std::isfinite(v))
      fail(ErrorKind::kRange, fmt::format("field '{}' is not finite", field));
    return v;
  }

  Belief belief_field(const Json &j, std::string_view field) {
    const double p = number_field(j, field);
    if (p < 0.0 || p > 1.0)
      fail(ErrorKind::kRange,
           fmt::format("field '{}' = {} outside [0, 1]", field, p));
    return Belief(p);
  }

  std::optional<Belief> optional_belief(const Json &obj,
                                        std::string_view field) {
    const auto it = obj.find(field);
    if (it == obj.end() || it->is_null())
      return std::nullopt;
    return belief_field(*it, field);
  }

  std::optional<CostVector> optional_cost(const Json &obj,
                                          std::string_view field) {
    const auto it = obj.find(field);
    if (it == obj.end() || it->is_null())
      return std::nullopt;
    if (!it->is_array() || it->size() != 3)
      fail(ErrorKind::kParse,
           fmt::format("field '{}' must be [c_fp, c_fn, c_defer] or null",
                       field));
    std::array<double, 3> c {};
    for (std::size_t i = 0; i < 3; ++i) {
      c[i] = number_field((*it)[i], field);
      if (c[i] < 0.0)
        fail(ErrorKind::kRange,
             fmt::format("field '{}' has negative cost {}", field, c[i]));
    }
    return CostVector(c[0], c[1], c[2]);
  }

  Action action_value(const Json &j, std::string_view field) {
    if (j.is_string()) {
      const auto s = j.get<std::string>();
      if (s == "yes")
        return Action::kDiagnosePositive;
      if (s == "no")
        return Action::kDiagnoseNegative;
      if (s == "defer")
        return Action::kDefer;
    }
    fail(ErrorKind::kParse,
         fmt::format("field '{}' must be \"yes\", \"no\" or \"defer\", got {}",
                     field, j.dump()));
  }

  std::map<DecisionRegime, Action> action_map(const Json &obj,
                                              std::string_view field) {
    std::map<DecisionRegime, Action> out;
    const auto it = obj.find(field);
    if (it == obj.end())
      return out;
    if (!it->is_object())
      fail(ErrorKind::kParse,
           fmt::format("field '{}' must be an object", field));
    for (const auto &[key, value]: it->items()) {
      out.emplace(DecisionRegime::from_key(key),
                  action_value(value, fmt::format("{}.{}", field, key)));
    }
    return out;
  }

  Json cost_json(const std::optional<CostVector> &c) {
    if (!c)
      return nullptr;
    return Json::array({ c->c_fp(), c->c_fn(), c->c_defer() });
  }

  Json action_map_json(const std::map<DecisionRegime, Action> &actions) {
    Json out = Json::object();
    for (const auto &[regime, action]: actions)
      out[regime.key()] = std::string(to_string(action));
    return out;
  }

  std::string format_ratio(double r) { return fmt::format("{:g}", r); }
}  // namespace

std::vector<BenchmarkCost> default_catalog() {
  std::vector<BenchmarkCost> out;
  for (double fn: { 0.5, 1.0, 2.0, 4.0, 8.0 }) {
    for (double defer: { 0.1, 0.3, 0.5 }) {
      out.push_back({ fmt::format("fn{}-d{}", format_ratio(fn),
                                  format_ratio(defer)),
                      CostVector(1.0, fn, defer) });
    }
  }
  return out;
}

const BenchmarkCost &find_benchmark(std::span<const BenchmarkCost> catalog,
                                    std::string_view id) {
  const auto it = std::find_if(catalog.begin(), catalog.end(),
                               [&](const auto &b) { return b.id == id; });
  if (it == catalog.end())
    fail(ErrorKind::kIntegrity,
         fmt::format("benchmark '{}' is not in the catalog", id));
  return *it;
}

std::vector<BenchmarkCost> read_catalog(std::istream &in,
                                        std::string_view source) {
  std::vector<BenchmarkCost> out;
  std::set<std::string, std::less<>> seen;
  std::string line;
  int line_no = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++line_no;
    const auto text = trim(line);
    if (text.empty())
      continue;
    if (!header) {
      if (text != "id,c_fp,c_fn,c_defer")
        fail(ErrorKind::kParse,
             fmt::format("{}:{}: expected header 'id,c_fp,c_fn,c_defer'",
                         source, line_no));
      header = true;
      continue;
    }

    std::vector<std::string> cells;
    std::stringstream ss { std::string(text) };
    std::string cell;
    while (std::getline(ss, cell, ','))
      cells.emplace_back(trim(cell));
    if (cells.size() != 4 || cells[0].empty())
      fail(ErrorKind::kParse,
           fmt::format("{}:{}: expected 4 fields", source, line_no));

    std::array<double, 3> c {};
    for (std::size_t i = 0; i < 3; ++i) {
      std::size_t used = 0;
      try {
        c[i] = std::stod(cells[i + 1], &used);
      } catch (const std::exception &) {
        used = 0;
      }
      if (used == 0 || used != cells[i + 1].size())
        fail(ErrorKind::kParse,
             fmt::format("{}:{}: '{}' is not a number", source, line_no,
                         cells[i + 1]));
      if (!(c[i] >= 0.0) || !std::isfinite(c[i]))
        fail(ErrorKind::kRange,
             fmt::format("{}:{}: cost {} must be finite and nonnegative",
                         source, line_no, c[i]));
    }
    if (!seen.insert(cells[0]).second)
      fail(ErrorKind::kIntegrity,
           fmt::format("{}:{}: duplicate benchmark id '{}'", source, line_no,
                       cells[0]));
    out.push_back({ cells[0], CostVector(c[0], c[1], c[2]) });
  }
  if (out.empty())
    fail(ErrorKind::kParse, fmt::format("{}: empty catalog", source));
  return out;
}

std::vector<BenchmarkCost> load_catalog(const std::filesystem::path &path) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::kIo, fmt::format("cannot open catalog '{}'",
                                     path.string()));
  return read_catalog(in, path.string());
}

std::string serialize_catalog(std::span<const BenchmarkCost> catalog) {
  std::string out = "id,c_fp,c_fn,c_defer\n";
  for (const auto &b: catalog)
    out += fmt::format("{},{},{},{}\n", b.id, b.cost.c_fp(), b.cost.c_fn(),
                       b.cost.c_defer());
  return out;
}

CaseRecord parse_record(std::string_view line) {
  Json obj;
  try {
    obj = Json::parse(line);
  } catch (const Json::parse_error &e) {
    fail(ErrorKind::kParse, fmt::format("malformed JSON: {}", e.what()));
  }
  if (!obj.is_object())
    fail(ErrorKind::kParse, "record must be a JSON object");
  for (const auto &[key, _]: obj.items()) {
    if (!kRecordKeys.contains(key))
      fail(ErrorKind::kParse, fmt::format("unknown field '{}'", key));
  }

  CaseRecord rec;
  const auto id = obj.find("case_id");
  if (id == obj.end() || !id->is_string() || id->get<std::string>().empty())
    fail(ErrorKind::kParse, "field 'case_id' must be a nonempty string");
  rec.case_id = id->get<std::string>();

  const auto domain = obj.find("domain");
  if (domain == obj.end() || !domain->is_string())
    fail(ErrorKind::kParse, "field 'domain' must be a string");
  rec.domain = domain->get<std::string>();

  const auto pe = obj.find("p_elicited");
  if (pe == obj.end())
    fail(ErrorKind::kParse, "missing field 'p_elicited'");
  rec.p_elicited = belief_field(*pe, "p_elicited");
  rec.p_true = optional_belief(obj, "p_true");

  const auto theta = obj.find("theta");
  if (theta != obj.end() && !theta->is_null()) {
    const double t = number_field(*theta, "theta");
    if (t != 0.0 && t != 1.0)
      fail(ErrorKind::kRange,
           fmt::format("field 'theta' = {} must be 0 or 1", t));
    rec.theta = t == 1.0 ? State::kPresent : State::kAbsent;
  }

  if (!obj.contains("actions"))
    fail(ErrorKind::kParse, "missing field 'actions'");
  rec.actions = action_map(obj, "actions");
  rec.forced_choices = action_map(obj, "forced_choices");
  for (const auto &[regime, action]: rec.forced_choices) {
    if (action == Action::kDefer)
      fail(ErrorKind::kParse,
           fmt::format("forced choice for '{}' must be yes or no",
                       regime.key()));
  }

  rec.self_report_global = optional_cost(obj, "self_report_global");
  rec.self_report_case = optional_cost(obj, "self_report_case");

  const auto reps = obj.find("belief_replicates");
  if (reps != obj.end() && !reps->is_null()) {
    if (!reps->is_array())
      fail(ErrorKind::kParse,
           "field 'belief_replicates' must be a list or null");
    std::vector<Belief> values;
    for (const auto &v: *reps)
      values.push_back(belief_field(v, "belief_replicates"));
    rec.belief_replicates = std::move(values);
  }
  return rec;
}

std::string serialize_record(const CaseRecord &rec) {
  Json obj;
  obj["case_id"] = rec.case_id;
  obj["domain"] = rec.domain;
  obj["p_elicited"] = rec.p_elicited.p();
  obj["p_true"] = rec.p_true ? Json(rec.p_true->p()) : Json(nullptr);
  obj["theta"] =
      rec.theta ? Json(static_cast<int>(*rec.theta)) : Json(nullptr);
  obj["actions"] = action_map_json(rec.actions);
  if (!rec.forced_choices.empty())
    obj["forced_choices"] = action_map_json(rec.forced_choices);
  obj["self_report_global"] = cost_json(rec.self_report_global);
  obj["self_report_case"] = cost_json(rec.self_report_case);
  if (rec.belief_replicates) {
    Json reps = Json::array();
    for (const auto &b: *rec.belief_replicates)
      reps.push_back(b.p());
    obj["belief_replicates"] = std::move(reps);
  } else {
    obj["belief_replicates"] = nullptr;
  }
  return obj.dump();
}

std::string serialize_dataset(std::span<const CaseRecord> records) {
  std::string out;
  for (const auto &rec: records) {
    out += serialize_record(rec);
    out += '\n';
  }
  return out;
}

DatasetFile read_dataset(std::istream &in, std::vector<BenchmarkCost> catalog,
                         std::string_view source) {
  {
    std::set<std::string, std::less<>> ids;
    for (const auto &b: catalog) {
      if (!ids.insert(b.id).second)
        fail(ErrorKind::kIntegrity,
             fmt::format("duplicate benchmark id '{}' in catalog", b.id));
    }
  }

  DatasetFile file;
  file.path = std::string(source);
  file.benchmark_catalog = std::move(catalog);

  std::vector<std::pair<ErrorKind, std::string>> violations;
  auto violation = [&](ErrorKind kind, int line_no, std::string_view case_id,
                       std::string_view message) {
    violations.emplace_back(
        kind, fmt::format("{}:{} (case_id '{}'): {}", source, line_no,
                          case_id.empty() ? "?" : case_id, message));
  };

  std::set<std::string, std::less<>> seen;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;

    CaseRecord rec;
    try {
      rec = parse_record(line);
    } catch (const Error &e) {
      std::string case_id;
      try {
        const auto j = Json::parse(line);
        if (j.is_object() && j.contains("case_id") && j["case_id"].is_string())
          case_id = j["case_id"].get<std::string>();
      } catch (const Json::exception &) { }
      violation(e.kind(), line_no, case_id, e.what());
      continue;
    }

    if (!seen.insert(rec.case_id).second)
      violation(ErrorKind::kIntegrity, line_no, rec.case_id,
                "duplicate case_id");
    for (const auto &[regime, _]: rec.actions) {
      if (regime.kind != DecisionRegime::Kind::kCostFunctionPrompt)
        continue;
      const bool known = std::any_of(
          file.benchmark_catalog.begin(), file.benchmark_catalog.end(),
          [&](const auto &b) { return b.id == regime.benchmark_id; });
      if (!known)
        violation(ErrorKind::kIntegrity, line_no, rec.case_id,
                  fmt::format("regime '{}' names a benchmark absent from the "
                              "catalog",
                              regime.key()));
    }
    file.records.push_back(std::move(rec));
  }

  if (!violations.empty()) {
    std::string message = fmt::format("{} invalid record(s):",
                                      violations.size());
    for (const auto &[_, text]: violations)
      message += "\n  " + text;
    fail(violations.front().first, message);
  }
  return file;
}

DatasetFile load_dataset(const std::filesystem::path &path,
                         std::vector<BenchmarkCost> catalog) {
  std::ifstream in(path);
  if (!in)
    fail(ErrorKind::kIo,
         fmt::format("cannot open dataset '{}'", path.string()));
  return read_dataset(in, std::move(catalog), path.string());
}

void write_text_file(const std::filesystem::path &path,
                     std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorKind::kIo, fmt::format("cannot write '{}'", path.string()));
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    fail(ErrorKind::kIo, fmt::format("write to '{}' failed", path.string()));
}

}  // namespace revpref
