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

#include "armforge/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "armforge/apriori.hpp"
#include "armforge/csv.hpp"
#include "armforge/faster.hpp"
#include "armforge/fpgrowth.hpp"

namespace armforge {

std::string_view to_string(Algorithm algorithm) {
  switch (algorithm) {
    case Algorithm::apriori:
      return "apriori";
    case Algorithm::fpgrowth:
      return "fpgrowth";
    case Algorithm::faster:
      return "faster";
  }
  return "?";
}

Algorithm algorithm_from_string(std::string_view text) {
  if (text == "apriori") return Algorithm::apriori;
  if (text == "fpgrowth" || text == "fptree") return Algorithm::fpgrowth;
  if (text == "faster") return Algorithm::faster;
  throw Error("config", fmt::format("unknown algorithm '{}' (expected apriori, fptree or faster)", text));
}

MiningResult run_pipeline(const TransactionDb& db, Algorithm algorithm, const Thresholds& thresholds,
                          const std::optional<std::string>& target, const MinerOptions& options) {
  thresholds.validate();
  const MinCount floor{rule_support_floor(thresholds, db.n_rows())};
  MiningResult out;
  switch (algorithm) {
    case Algorithm::apriori:
      out.frequent = mine_frequent_apriori(db, floor, options);
      break;
    case Algorithm::fpgrowth:
      out.frequent = mine_fpgrowth(db, floor);
      break;
    case Algorithm::faster:
      out.frequent = mine_frequent_faster(db, thresholds, options);
      break;
  }
  out.rules = generate_rules(out.frequent, db, thresholds, target);
  return out;
}

// ---------------------------------------------------------------------------
// Timing

TimingStats TimingStats::from_samples(std::vector<double> samples) {
  TimingStats t;
  t.samples = std::move(samples);
  if (t.samples.empty()) return t;
  std::vector<double> sorted = t.samples;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = sorted.size();
  t.min = sorted.front();
  t.median = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
  t.mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / static_cast<double>(n);
  return t;
}

namespace {

template <typename Job>
TimingStats time_job(std::size_t repetitions, Job&& job) {
  const std::size_t warmup = repetitions >= 3 ? 1 : 0;
  std::vector<double> samples;
  samples.reserve(repetitions);
  for (std::size_t r = 0; r < repetitions + warmup; ++r) {
    const auto start = std::chrono::steady_clock::now();
    job();
    const auto stop = std::chrono::steady_clock::now();
    // Clock granularity can round a tiny job to zero.
    const double seconds = std::max(std::chrono::duration<double>(stop - start).count(), 1e-9);
    if (r >= warmup) samples.push_back(seconds);
  }
  return TimingStats::from_samples(std::move(samples));
}

}  // namespace

BenchReport run_bench(const TransactionDb& db, Algorithm algorithm, const Thresholds& thresholds,
                      std::size_t repetitions, std::string dataset_tag) {
  if (repetitions == 0) throw Error("config", "repetitions must be at least 1");
  thresholds.validate();
  const auto& target = db.target_attribute();

  BenchReport report;
  report.algorithm = algorithm;
  report.dataset = std::move(dataset_tag);
  report.repetitions = repetitions;
  report.min_prob = algorithm == Algorithm::faster ? thresholds.min_prob : 0.0;

  // One untimed run supplies the counters.
  const MiningResult reference = run_pipeline(db, algorithm, thresholds, target);
  report.candidate_count = reference.frequent.candidate_count;
  report.iteration_count = reference.frequent.iteration_count;
  report.n_rows = db.n_rows();
  report.distinct_items = db.distinct_items();
  report.frequent_itemsets = reference.frequent.size();
  report.common_rules = reference.rules.count(RuleKind::common);
  report.exception_rules = reference.rules.count(RuleKind::exception);
  if (algorithm == Algorithm::faster) report.prefilter_pairs = prefilter(db, thresholds.min_prob).pairs_evaluated;

  report.overall = time_job(repetitions, [&] {
    auto result = run_pipeline(db, algorithm, thresholds, target);
    return result.rules.rules.size();
  });

  if (target) {
    const ItemDictionary& dict = db.dictionary();
    for (ItemId cls : dict.items_of(*target)) {
      ClassTiming ct;
      ct.label = dict.item(cls).value;
      auto class_job = [&] {
        auto result = run_pipeline(db, algorithm, thresholds, target);
        return static_cast<std::size_t>(std::count_if(result.rules.rules.begin(), result.rules.rules.end(),
                                                      [cls](const Rule& r) { return r.consequent == cls; }));
      };
      ct.rules = class_job();
      ct.time = time_job(repetitions, class_job);
      report.per_class.push_back(std::move(ct));
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Reports

ReportFormat report_format_from_string(std::string_view text) {
  if (text == "csv") return ReportFormat::csv;
  if (text == "markdown" || text == "md") return ReportFormat::markdown;
  throw Error("config", fmt::format("unknown report format '{}'", text));
}

namespace {

const std::vector<std::string> kReportColumns = {
    "algorithm",      "dataset",          "scope",       "repetitions",     "min_s",
    "median_s",       "mean_s",           "rules",       "candidate_count", "iteration_count",
    "n_rows",         "distinct_items",   "frequent_itemsets", "prefilter_pairs", "common_rules",
    "exception_rules"};

std::vector<std::vector<std::string>> report_rows(const std::vector<BenchReport>& reports) {
  std::vector<const BenchReport*> order;
  for (const auto& r : reports) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](const BenchReport* a, const BenchReport* b) {
    if (a->overall.median != b->overall.median) return a->overall.median < b->overall.median;
    return a->algorithm < b->algorithm;
  });

  std::vector<std::vector<std::string>> rows;
  for (const BenchReport* r : order) {
    auto row = [&](const std::string& scope, const TimingStats& t, std::size_t rules) {
      return std::vector<std::string>{std::string(to_string(r->algorithm)),
                                      r->dataset,
                                      scope,
                                      std::to_string(r->repetitions),
                                      fmt::format("{:.6f}", t.min),
                                      fmt::format("{:.6f}", t.median),
                                      fmt::format("{:.6f}", t.mean),
                                      std::to_string(rules),
                                      std::to_string(r->candidate_count),
                                      std::to_string(r->iteration_count),
                                      std::to_string(r->n_rows),
                                      std::to_string(r->distinct_items),
                                      std::to_string(r->frequent_itemsets),
                                      std::to_string(r->prefilter_pairs),
                                      std::to_string(r->common_rules),
                                      std::to_string(r->exception_rules)};
    };
    rows.push_back(row("overall", r->overall, r->common_rules + r->exception_rules));
    for (const auto& c : r->per_class) rows.push_back(row("class:" + c.label, c.time, c.rules));
  }
  return rows;
}

}  // namespace

std::string format_report(const std::vector<BenchReport>& reports, ReportFormat format) {
  const auto rows = report_rows(reports);
  std::string out;
  if (format == ReportFormat::csv) {
    out += csv::join(kReportColumns) + "\n";
    for (const auto& row : rows) out += csv::join(row) + "\n";
    return out;
  }
  auto md_row = [](const std::vector<std::string>& cells) {
    std::string line = "|";
    for (const auto& c : cells) line += " " + c + " |";
    return line + "\n";
  };
  out += md_row(kReportColumns);
  out += "|";
  for (std::size_t i = 0; i < kReportColumns.size(); ++i) out += i < 3 ? " --- |" : " ---: |";
  out += "\n";
  for (const auto& row : rows) out += md_row(row);
  return out;
}

void emit_report(const std::vector<BenchReport>& reports, ReportFormat format, const std::string& path) {
  csv::write_file(path, format_report(reports, format));
}

// ---------------------------------------------------------------------------
// Synthetic databases

void SyntheticSpec::validate() const {
  if (n_attributes == 0) throw Error("synthetic", "synthetic database needs at least one attribute");
  if (n_rows == 0) throw Error("synthetic", "synthetic database needs at least one row");
  if (values_per_attribute == 0) throw Error("synthetic", "attributes need at least one value");
  if (!(skew >= 0.0 && skew <= 1.0)) throw Error("synthetic", fmt::format("skew must lie in [0,1], got {}", skew));
}

namespace {

// Top 53 bits as a double in [0,1); the standard distributions are not
// reproducible across library implementations, this is.
double unit_double(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

TransactionDb gen_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  const std::size_t d = spec.n_attributes;
  const std::size_t v = spec.values_per_attribute;

  // Column-wise draws from one stream per attribute.
  std::vector<std::vector<std::size_t>> columns(d, std::vector<std::size_t>(spec.n_rows));
  for (std::size_t a = 0; a < d; ++a) {
    std::mt19937_64 rng(spec.seed ^ (0x9e3779b97f4a7c15ULL * (a + 1)));
    for (std::size_t r = 0; r < spec.n_rows; ++r) {
      const double u = unit_double(rng);
      if (u < spec.skew || v == 1) {
        columns[a][r] = 0;
      } else {
        const double w = (u - spec.skew) / (1.0 - spec.skew);
        columns[a][r] = 1 + std::min(v - 2, static_cast<std::size_t>(w * static_cast<double>(v - 1)));
      }
    }
  }

  const int width = d < 100 ? 2 : static_cast<int>(std::to_string(d).size());
  std::vector<std::string> names;
  for (std::size_t a = 0; a < d; ++a) names.push_back(fmt::format("A{:0{}}", a + 1, width));

  TransactionDbBuilder builder;
  std::vector<std::pair<std::string, std::string>> cells(d);
  for (std::size_t r = 0; r < spec.n_rows; ++r) {
    for (std::size_t a = 0; a < d; ++a) cells[a] = {names[a], fmt::format("v{}", columns[a][r])};
    builder.add_row(cells);
  }
  return std::move(builder).build();
}

std::vector<CurvePoint> synthetic_sweep(const SyntheticSpec& base, std::size_t d_min, std::size_t d_max,
                                        const std::vector<Algorithm>& algorithms, const Thresholds& thresholds) {
  if (d_min == 0 || d_min > d_max) throw Error("config", fmt::format("invalid sweep range {}..{}", d_min, d_max));
  std::vector<CurvePoint> out;
  for (std::size_t d = d_min; d <= d_max; ++d) {
    SyntheticSpec spec = base;
    spec.n_attributes = d;
    const TransactionDb db = gen_synthetic(spec);
    for (Algorithm alg : algorithms) {
      const auto result = run_pipeline(db, alg, thresholds, std::nullopt);
      out.push_back({d, alg, result.frequent.candidate_count, result.frequent.iteration_count,
                     result.frequent.size(), db.distinct_items(), db.n_rows()});
    }
  }
  return out;
}

std::string format_curve(const std::vector<CurvePoint>& points) {
  std::string out = "d,algorithm,candidate_count,iteration_count,frequent_itemsets,distinct_items,n_rows\n";
  for (const auto& p : points) {
    out += fmt::format("{},{},{},{},{},{},{}\n", p.d, to_string(p.algorithm), p.candidate_count, p.iteration_count,
                       p.frequent_itemsets, p.distinct_items, p.n_rows);
  }
  return out;
}

double log_candidate_slope(const std::vector<CurvePoint>& points, Algorithm algorithm) {
  std::vector<double> xs;
  std::vector<double> ys;
  for (const auto& p : points) {
    if (p.algorithm != algorithm) continue;
    if (p.candidate_count == 0) throw Error("config", "log slope undefined for a zero candidate count");
    xs.push_back(static_cast<double>(p.d));
    ys.push_back(std::log(static_cast<double>(p.candidate_count)));
  }
  if (xs.size() < 2) throw Error("config", "log slope needs at least two points");
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  if (sxx == 0.0) throw Error("config", "log slope needs two distinct d values");
  return sxy / sxx;
}

}  // namespace armforge
