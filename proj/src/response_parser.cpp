//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/response_parser.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "revpref/error.hpp"

namespace revpref {
namespace {
  std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
      s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
      s.remove_suffix(1);
    return s;
  }

  bool iequals(std::string_view a, std::string_view b) {
    return a.size() == b.size()
           && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
                return std::tolower(static_cast<unsigned char>(x))
                       == std::tolower(static_cast<unsigned char>(y));
              });
  }

  std::vector<std::string_view> nonblank_lines(std::string_view text) {
    std::vector<std::string_view> lines;
    while (!text.empty()) {
      const auto eol = text.find('\n');
      const auto line = trim(text.substr(0, eol));
      if (!line.empty())
        lines.push_back(line);
      if (eol == std::string_view::npos)
        break;
      text.remove_prefix(eol + 1);
    }
    return lines;
  }

  struct Field {
    std::string_view label;
    std::string_view value;
  };

  Field split_field(std::string_view line) {
    const auto colon = line.find(':');
    if (colon == std::string_view::npos)
      fail(ErrorKind::kParse,
           fmt::format("line '{}' is not of the form '<label>: <value>'",
                       line));
    return { trim(line.substr(0, colon)), trim(line.substr(colon + 1)) };
  }

  double parse_number(std::string_view label, std::string_view value) {
    double out = 0.0;
    const auto *first = value.data();
    const auto *last = value.data() + value.size();
    if (!value.empty() && *first == '+')
      ++first;
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (value.empty() || ec != std::errc() || ptr != last
        || !std::isfinite(out))
      fail(ErrorKind::kParse,
           fmt::format("value '{}' for '{}' is not a number", value, label));
    return out;
  }

  bool parse_yes_no(std::string_view label, std::string_view value) {
    if (iequals(value, "yes"))
      return true;
    if (iequals(value, "no"))
      return false;
    fail(ErrorKind::kParse,
         fmt::format("value '{}' for '{}' is neither Yes nor No", value,
                     label));
  }

  // Matches every line to exactly one of `labels` (case-insensitive) and
  // returns the raw values in label order.
  template <std::size_t N>
  std::array<std::string_view, N> labeled_values(
      std::string_view text, const std::array<std::string_view, N> &labels) {
    const auto lines = nonblank_lines(text);
    std::array<std::optional<std::string_view>, N> found;
    for (const auto line: lines) {
      const Field field = split_field(line);
      const auto it =
          std::find_if(labels.begin(), labels.end(),
                       [&](std::string_view l) { return iequals(l, field.label); });
      if (it == labels.end())
        fail(ErrorKind::kParse,
             fmt::format("unexpected line '{}'", line));
      auto &slot = found[static_cast<std::size_t>(it - labels.begin())];
      if (slot)
        fail(ErrorKind::kParse,
             fmt::format("label '{}' appears more than once", *it));
      slot = field.value;
    }

    std::array<std::string_view, N> values;
    for (std::size_t i = 0; i < N; ++i) {
      if (!found[i])
        fail(ErrorKind::kParse,
             fmt::format("missing line '{}: ...'", labels[i]));
      values[i] = *found[i];
    }
    return values;
  }
}  // namespace

Belief parse_probability_response(std::string_view text) {
  constexpr std::array<std::string_view, 2> labels = { "No", "Yes" };
  const auto values = labeled_values(text, labels);
  const double no = parse_number("No", values[0]);
  const double yes = parse_number("Yes", values[1]);
  for (std::size_t i = 0; i < 2; ++i) {
    const double p = i == 0 ? no : yes;
    if (p < 0.0 || p > 1.0)
      fail(ErrorKind::kRange,
           fmt::format("probability {} for '{}' outside [0, 1]", p,
                       labels[i]));
  }

  const double sum = no + yes;
  if (std::abs(sum - 1.0) > 0.02 + 1e-12)
    fail(ErrorKind::kParse,
         fmt::format("probabilities sum to {}, not within 0.02 of 1", sum));
  return Belief(std::clamp(yes / sum, 0.0, 1.0));
}

DecisionResponse parse_decision_response_detail(std::string_view text) {
  constexpr std::array<std::string_view, 2> labels = { "Can decide",
                                                       "Decision" };
  const auto values = labeled_values(text, labels);
  const bool can_decide = parse_yes_no(labels[0], values[0]);
  const bool positive = parse_yes_no(labels[1], values[1]);

  DecisionResponse out;
  out.forced_choice =
      positive ? Action::kDiagnosePositive : Action::kDiagnoseNegative;
  out.action = can_decide ? out.forced_choice : Action::kDefer;
  return out;
}

Action parse_decision_response(std::string_view text) {
  return parse_decision_response_detail(text).action;
}

CostVector parse_self_report(std::string_view text) {
  constexpr std::array<std::string_view, 3> labels = {
    "False Positive", "False Negative", "Deferral"
  };
  const auto values = labeled_values(text, labels);
  std::array<double, 3> costs {};
  for (std::size_t i = 0; i < 3; ++i) {
    costs[i] = parse_number(labels[i], values[i]);
    if (costs[i] < 0.0)
      fail(ErrorKind::kRange,
           fmt::format("cost {} for '{}' is negative", costs[i], labels[i]));
  }
  return { costs[0], costs[1], costs[2] };
}

}  // namespace revpref
