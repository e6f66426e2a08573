//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <span>
#include <vector>

namespace revpref {

// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted values.
double quantile(std::vector<double> values, double prob);

double median(std::span<const double> values);

double mean(std::span<const double> values);

}  // namespace revpref
