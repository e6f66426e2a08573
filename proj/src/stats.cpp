//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#include "revpref/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "revpref/error.hpp"

namespace revpref {

double quantile(std::vector<double> values, double prob) {
  if (values.empty())
    fail(ErrorKind::kEmptyDataset, "quantile of an empty sample");
  if (!(prob >= 0.0 && prob <= 1.0))
    fail(ErrorKind::kParameter, "quantile probability outside [0, 1]");

  std::sort(values.begin(), values.end());
  const double h = prob * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

double median(std::span<const double> values) {
  return quantile({ values.begin(), values.end() }, 0.5);
}

double mean(std::span<const double> values) {
  if (values.empty())
    fail(ErrorKind::kEmptyDataset, "mean of an empty sample");
  return std::accumulate(values.begin(), values.end(), 0.0)
         / static_cast<double>(values.size());
}

}  // namespace revpref
