//
// revpref - Copyright 2026 The revpref Authors.
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "revpref/core.hpp"

namespace revpref {

// Dataset files hold one JSON object per line:
//
//   {"case_id": "c1", "domain": "heart", "p_elicited": 0.3,
//    "p_true": 0.25, "theta": 1,
//    "actions": {"baseline": "defer", "cost:fn4-d0.3": "yes"},
//    "forced_choices": {"baseline": "no"},
//    "self_report_global": [1, 10, 2], "self_report_case": null,
//    "belief_replicates": [0.3, 0.35, 0.28, 0.31, 0.3]}
//
// p_true, theta, self reports and replicates may be null or omitted;
// forced_choices may be omitted. Cost triples are (c_fp, c_fn, c_defer).
//
// Benchmark catalogs are CSV with the header "id,c_fp,c_fn,c_defer".

struct DatasetFile {
  std::string path;
  std::vector<CaseRecord> records;
  std::vector<BenchmarkCost> benchmark_catalog;
};

// c_fp = 1 with fn/fp in {0.5, 1, 2, 4, 8} and defer/fp in {0.1, 0.3, 0.5};
// ids look like "fn4-d0.3".
std::vector<BenchmarkCost> default_catalog();

const BenchmarkCost &find_benchmark(std::span<const BenchmarkCost> catalog,
                                    std::string_view id);

std::vector<BenchmarkCost> read_catalog(std::istream &in,
                                        std::string_view source = "catalog");
std::vector<BenchmarkCost> load_catalog(const std::filesystem::path &path);
std::string serialize_catalog(std::span<const BenchmarkCost> catalog);

// Validates every line and reports all violations in one error, each with
// its line number and case_id. The error kind is that of the first
// violation.
DatasetFile read_dataset(std::istream &in,
                         std::vector<BenchmarkCost> catalog,
                         std::string_view source = "dataset");
DatasetFile load_dataset(const std::filesystem::path &path,
                         std::vector<BenchmarkCost> catalog = default_catalog());

std::string serialize_record(const CaseRecord &record);
std::string serialize_dataset(std::span<const CaseRecord> records);

CaseRecord parse_record(std::string_view line);

void write_text_file(const std::filesystem::path &path, std::string_view text);

}  // namespace revpref
