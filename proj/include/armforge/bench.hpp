// Copyright 2026 The arm-forge Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARMFORGE_BENCH_HPP_
#define ARMFORGE_BENCH_HPP_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/frequent.hpp"
#include "armforge/rulegen.hpp"

namespace armforge {

enum class Algorithm { apriori, fpgrowth, faster };

std::string_view to_string(Algorithm algorithm);
// Accepts "apriori", "fpgrowth", "fptree" and "faster".
Algorithm algorithm_from_string(std::string_view text);

struct MiningResult {
  FrequentItemsets frequent;
  RuleSet rules;
};

// Mines at the rule support floor and generates rules, the unit of work the
// bench times. Class-association mode when `target` is set.
MiningResult run_pipeline(const TransactionDb& db, Algorithm algorithm, const Thresholds& thresholds,
                          const std::optional<std::string>& target, const MinerOptions& options = {});

struct TimingStats {
  // Seconds, after warm-up removal.
  std::vector<double> samples;
  double min = 0.0;
  double median = 0.0;
  double mean = 0.0;

  static TimingStats from_samples(std::vector<double> samples);
};

struct ClassTiming {
  std::string label;
  TimingStats time;
  std::size_t rules = 0;
};

struct BenchReport {
  Algorithm algorithm = Algorithm::apriori;
  std::string dataset;
  std::size_t repetitions = 0;
  TimingStats overall;
  std::vector<ClassTiming> per_class;

  std::size_t candidate_count = 0;
  std::size_t iteration_count = 0;
  std::size_t n_rows = 0;
  std::size_t distinct_items = 0;
  std::size_t frequent_itemsets = 0;
  // Pair probabilities evaluated by the prefilter (faster only).
  std::size_t prefilter_pairs = 0;
  std::size_t common_rules = 0;
  std::size_t exception_rules = 0;
  double min_prob = 0.0;
};

// Times `repetitions` runs of the full job and, when the database has a
// target, one class-targeted job per class value. With three or more
// repetitions one extra leading run is made and discarded as warm-up.
BenchReport run_bench(const TransactionDb& db, Algorithm algorithm, const Thresholds& thresholds,
                      std::size_t repetitions, std::string dataset_tag = "");

enum class ReportFormat { csv, markdown };

ReportFormat report_format_from_string(std::string_view text);

// Rows sorted by overall median time (ties by algorithm); each report gives
// an "overall" row followed by its class rows.
std::string format_report(const std::vector<BenchReport>& reports, ReportFormat format);
void emit_report(const std::vector<BenchReport>& reports, ReportFormat format, const std::string& path);

struct SyntheticSpec {
  std::size_t n_rows = 1000;
  std::size_t n_attributes = 10;
  std::size_t values_per_attribute = 3;
  // Probability of each attribute's modal value v0; the remaining mass is
  // spread evenly over v1..v{k-1}.
  double skew = 0.6;
  std::uint64_t seed = 42;

  void validate() const;
};

// Attributes A01, A02, ... with values v0, v1, ...; no target attribute.
TransactionDb gen_synthetic(const SyntheticSpec& spec);

struct CurvePoint {
  std::size_t d = 0;
  Algorithm algorithm = Algorithm::apriori;
  std::size_t candidate_count = 0;
  std::size_t iteration_count = 0;
  std::size_t frequent_itemsets = 0;
  std::size_t distinct_items = 0;
  std::size_t n_rows = 0;
};

// Work counters for every attribute count in [d_min, d_max]; the synthetic
// seed is the same at every d so smaller databases are column prefixes of
// larger ones.
std::vector<CurvePoint> synthetic_sweep(const SyntheticSpec& base, std::size_t d_min, std::size_t d_max,
                                        const std::vector<Algorithm>& algorithms, const Thresholds& thresholds);

std::string format_curve(const std::vector<CurvePoint>& points);

// Least-squares slope of log(candidate_count) against d for one algorithm.
double log_candidate_slope(const std::vector<CurvePoint>& points, Algorithm algorithm);

}  // namespace armforge

#endif  // ARMFORGE_BENCH_HPP_
