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

// arm_forge: preprocess -> mine -> rules -> bench -> classify.
//
// Exit status: 0 when every requested output was written, 2 for invalid
// configuration, 1 for any other failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "armforge/bench.hpp"
#include "armforge/core.hpp"
#include "armforge/csv.hpp"
#include "armforge/eval.hpp"
#include "armforge/faster.hpp"
#include "armforge/ingest.hpp"
#include "armforge/rulegen.hpp"

namespace {

using namespace armforge;

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

// Everything one invocation needs; flags override config-file values,
// which override these defaults.
struct JobConfig {
  std::vector<std::string> inputs;
  std::string schema = "builtin:dataset1";
  std::vector<std::string> algorithms;
  double min_support = 0.7;
  double min_confidence = 0.9;
  double min_cpir = 0.6;
  std::optional<double> min_prob;
  std::string exception_range = "0.2,0.4";
  std::optional<std::string> target;
  bool all_consequents = false;
  std::string out;
  std::string format;
  std::size_t reps = 10;
  std::uint64_t seed = 42;
  std::size_t folds = 10;
  std::vector<std::string> models;
  bool assert_ordering = false;
  std::string dataset_tag;

  // synth
  std::size_t rows = 1000;
  std::size_t attributes = 10;
  std::size_t values = 3;
  double skew = 0.6;
  std::string sweep;
  std::string curve_out;
};

bool is_config_error(const std::string& code) {
  static const std::set<std::string> codes = {"config", "thresholds", "synthetic", "folds", "unknown-dataset"};
  return codes.count(code) > 0;
}

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("arm_forge");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("ARM_FORGE_LOG")) {
    const auto level = spdlog::level::from_str(env);
    // from_str maps unknown names to off; only accept it when asked for.
    if (level != spdlog::level::off || std::string(env) == "off") spdlog::set_level(level);
  }
}

std::pair<double, double> parse_range(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) {
    throw Error("config", fmt::format("--exception-range expects LO,HI, got '{}'", text));
  }
  try {
    std::size_t used_lo = 0;
    std::size_t used_hi = 0;
    const std::string lo_text = text.substr(0, comma);
    const std::string hi_text = text.substr(comma + 1);
    const double lo = std::stod(lo_text, &used_lo);
    const double hi = std::stod(hi_text, &used_hi);
    if (used_lo != lo_text.size() || used_hi != hi_text.size()) throw std::invalid_argument("trailing");
    return {lo, hi};
  } catch (const std::exception&) {
    throw Error("config", fmt::format("--exception-range expects two numbers, got '{}'", text));
  }
}

Thresholds thresholds_of(const JobConfig& cfg) {
  Thresholds t;
  const auto [lo, hi] = parse_range(cfg.exception_range);
  t.min_support = cfg.min_support;
  t.min_confidence = cfg.min_confidence;
  t.min_cpir = cfg.min_cpir;
  t.exception_support = {lo, hi};
  // Default prefilter cutoff: the lowest support any emitted rule can have.
  t.min_prob = cfg.min_prob.value_or(std::min(lo, cfg.min_support));
  t.validate();
  return t;
}

std::vector<Algorithm> algorithms_of(const JobConfig& cfg, std::vector<Algorithm> fallback) {
  if (cfg.algorithms.empty()) return fallback;
  std::vector<Algorithm> out;
  for (const auto& a : cfg.algorithms) out.push_back(algorithm_from_string(a));
  return out;
}

// Schema "raw" reads every column as a categorical attribute, verbatim;
// rows with an empty cell are skipped.
TransactionDb load_raw(const RawTable& table, const std::optional<std::string>& target) {
  TransactionDbBuilder builder;
  std::vector<std::pair<std::string, std::string>> cells(table.header.size());
  for (const auto& row : table.rows) {
    bool missing = false;
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (row[c].empty()) missing = true;
      cells[c] = {table.header[c], row[c]};
    }
    if (!missing) builder.add_row(cells);
  }
  if (target && std::find(table.header.begin(), table.header.end(), *target) == table.header.end()) {
    throw Error("config", fmt::format("target '{}' is not a column", *target));
  }
  return std::move(builder).build(target);
}

struct LoadedData {
  TransactionDb db;
  std::optional<std::string> target;
};

LoadedData load_data(const JobConfig& cfg) {
  if (cfg.inputs.empty()) throw Error("config", "--input is required");
  const bool raw = cfg.schema == "raw";
  std::optional<Schema> schema;
  if (!raw) {
    schema = cfg.schema.starts_with("builtin:") ? builtin_schema(std::string_view(cfg.schema))
                                                : load_schema(cfg.schema);
    if (cfg.target && *cfg.target != schema->target) {
      if (!schema->find(*cfg.target)) throw Error("config", fmt::format("--target '{}' not in schema", *cfg.target));
      schema->target = *cfg.target;
    }
  }
  std::vector<RawTable> tables;
  for (const auto& path : cfg.inputs) tables.push_back(load_csv(path, schema ? schema->delimiter : 0));
  const RawTable merged = merge_tables(tables);

  std::optional<std::string> target;
  if (!cfg.all_consequents) target = schema ? std::optional<std::string>(schema->target) : cfg.target;
  auto db = raw ? load_raw(merged, cfg.target) : preprocess(merged, *schema);
  spdlog::info("loaded {} source rows, {} transactions, {} items", merged.n_source_rows, db.n_rows(),
               db.distinct_items());
  return {std::move(db), target};
}

void write_output(const std::string& path, const std::string& contents) {
  if (path.empty() || path == "-") {
    std::fwrite(contents.data(), 1, contents.size(), stdout);
    std::fflush(stdout);
  } else {
    csv::write_file(path, contents);
  }
}

int cmd_mine(const JobConfig& cfg) {
  const Thresholds thr = thresholds_of(cfg);
  const auto format = rule_format_from_string(cfg.format.empty() ? "csv" : cfg.format);
  const auto algorithms = algorithms_of(cfg, {Algorithm::faster});
  if (algorithms.size() != 1) throw Error("config", "mine takes exactly one --algorithm");
  const auto data = load_data(cfg);

  const auto start = std::chrono::steady_clock::now();
  const auto result = run_pipeline(data.db, algorithms.front(), thr, data.target);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_output(cfg.out, format_rules(result.rules, format));

  // Summary on stdout, unless stdout carries the rules.
  FILE* summary = cfg.out.empty() || cfg.out == "-" ? stderr : stdout;
  fmt::print(summary, "algorithm: {}\n", to_string(algorithms.front()));
  fmt::print(summary, "transactions: {}\n", data.db.n_rows());
  fmt::print(summary, "frequent itemsets: {}\n", result.frequent.size());
  fmt::print(summary, "candidates: {}\n", result.frequent.candidate_count);
  fmt::print(summary, "iterations: {}\n", result.frequent.iteration_count);
  fmt::print(summary, "common rules: {}\n", result.rules.count(RuleKind::common));
  fmt::print(summary, "exception rules: {}\n", result.rules.count(RuleKind::exception));
  spdlog::info("mining and rule generation took {:.6f} s", seconds);
  return 0;
}

int cmd_bench(const JobConfig& cfg) {
  const Thresholds thr = thresholds_of(cfg);
  const auto format = report_format_from_string(cfg.format.empty() ? "csv" : cfg.format);
  const auto algorithms = algorithms_of(cfg, {Algorithm::apriori, Algorithm::fpgrowth, Algorithm::faster});
  if (cfg.reps == 0) throw Error("config", "--reps must be at least 1");
  const auto data = load_data(cfg);
  const std::string tag = cfg.dataset_tag.empty() ? cfg.schema : cfg.dataset_tag;

  std::vector<BenchReport> reports;
  for (Algorithm a : algorithms) {
    spdlog::info("benchmarking {} ({} repetitions)", to_string(a), cfg.reps);
    reports.push_back(run_bench(data.db, a, thr, cfg.reps, tag));
  }
  write_output(cfg.out, format_report(reports, format));

  if (cfg.assert_ordering) {
    auto median_of = [&](Algorithm a) -> std::optional<double> {
      for (const auto& r : reports) {
        if (r.algorithm == a) return r.overall.median;
      }
      return std::nullopt;
    };
    const auto ap = median_of(Algorithm::apriori);
    const auto fp = median_of(Algorithm::fpgrowth);
    const auto fa = median_of(Algorithm::faster);
    if (!ap || !fp || !fa) throw Error("config", "--assert-ordering needs all three algorithms");
    if (!(*fa < *fp && *fp < *ap)) {
      spdlog::error("ordering violated: faster {:.6f} s, fptree {:.6f} s, apriori {:.6f} s", *fa, *fp, *ap);
      return kExitRuntime;
    }
  }
  return 0;
}

int cmd_classify(const JobConfig& cfg) {
  const Thresholds thr = thresholds_of(cfg);
  std::vector<Model> models;
  for (const auto& m : cfg.models.empty() ? std::vector<std::string>{"nb"} : cfg.models) {
    models.push_back(model_from_string(m));
  }
  const auto algorithms = algorithms_of(cfg, {Algorithm::faster});
  if (algorithms.size() != 1) throw Error("config", "classify takes exactly one --algorithm");
  if (cfg.folds < 2) throw Error("config", "--folds must be at least 2");
  const auto data = load_data(cfg);
  if (!data.db.target_attribute()) throw Error("config", "classify needs a target attribute");
  if (cfg.folds > data.db.n_rows()) {
    throw Error("folds", fmt::format("--folds {} exceeds {} transactions", cfg.folds, data.db.n_rows()));
  }

  const auto mined = run_pipeline(data.db, algorithms.front(), thr, data.db.target_attribute());
  const FeatureSet features = select_features(mined.rules);

  std::vector<CvResult> results;
  for (Model m : models) {
    results.push_back(kfold_cv(data.db, m, cfg.folds, std::nullopt, cfg.seed));
    results.push_back(kfold_cv(data.db, m, cfg.folds, features, cfg.seed));
  }
  write_output(cfg.out, format_cv_results(results));

  FILE* summary = cfg.out.empty() || cfg.out == "-" ? stderr : stdout;
  fmt::print(summary, "selected attributes: {}\n", features.attributes.size());
  for (const auto& a : features.attributes) fmt::print(summary, "  {}\n", a);
  for (const auto& r : results) {
    fmt::print(summary, "{} ({}, {} features): mean accuracy {:.6f}\n", to_string(r.model), to_string(r.mode),
               r.n_features, r.mean_accuracy);
  }
  return 0;
}

int cmd_synth(const JobConfig& cfg) {
  SyntheticSpec spec;
  spec.n_rows = cfg.rows;
  spec.n_attributes = cfg.attributes;
  spec.values_per_attribute = cfg.values;
  spec.skew = cfg.skew;
  spec.seed = cfg.seed;
  spec.validate();

  std::optional<std::pair<std::size_t, std::size_t>> sweep;
  Thresholds thr;
  if (!cfg.sweep.empty()) {
    const auto [lo, hi] = parse_range(cfg.sweep);
    if (lo < 1 || hi < lo || lo != static_cast<std::size_t>(lo) || hi != static_cast<std::size_t>(hi)) {
      throw Error("config", fmt::format("--sweep expects D_MIN,D_MAX with 1 <= D_MIN <= D_MAX, got '{}'", cfg.sweep));
    }
    sweep = std::pair{static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
    thr = thresholds_of(cfg);
    if (cfg.curve_out.empty()) throw Error("config", "--sweep needs --curve-out");
  }

  if (!cfg.out.empty()) write_output(cfg.out, format_csv_table(to_raw_table(gen_synthetic(spec))));
  if (sweep) {
    const auto algorithms = algorithms_of(cfg, {Algorithm::apriori, Algorithm::faster});
    const auto points = synthetic_sweep(spec, sweep->first, sweep->second, algorithms, thr);
    write_output(cfg.curve_out, format_curve(points));
    for (Algorithm a : algorithms) {
      fmt::print("{}: log(candidate_count) slope per attribute {:.6f}\n", to_string(a),
                 log_candidate_slope(points, a));
    }
  }
  if (cfg.out.empty() && !sweep) throw Error("config", "synth needs --out, --sweep or both");
  return 0;
}

void add_data_options(CLI::App* sub, JobConfig& cfg) {
  sub->add_option("--input", cfg.inputs, "Input CSV file(s); several files are merged by rows")->required();
  sub->add_option("--schema", cfg.schema, "builtin:dataset1, builtin:dataset2, raw, or a schema file path")
      ->capture_default_str();
  sub->add_option("--target", cfg.target, "Class attribute (defaults to the schema target)");
}

void add_threshold_options(CLI::App* sub, JobConfig& cfg) {
  sub->add_option("--min-support", cfg.min_support, "Common-rule support threshold")->capture_default_str();
  sub->add_option("--min-confidence", cfg.min_confidence, "Confidence threshold")->capture_default_str();
  sub->add_option("--min-cpir", cfg.min_cpir, "CPIR threshold")->capture_default_str();
  sub->add_option("--min-prob", cfg.min_prob, "Prefilter probability cutoff (default: exception LO)");
  sub->add_option("--exception-range", cfg.exception_range, "Exception-rule support interval LO,HI (LO exclusive)")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();

  JobConfig cfg;
  CLI::App app{"arm_forge: association rule mining with common and exception rules"};
  app.name("arm_forge");
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file; flags given on the command line win");
  app.set_version_flag("--version", "arm_forge 0.1.0");

  auto* mine = app.add_subcommand("mine", "Mine common and exception rules and write them out");
  add_data_options(mine, cfg);
  add_threshold_options(mine, cfg);
  mine->add_option("--algorithm", cfg.algorithms, "apriori, fptree or faster (default faster)")
      ->expected(1)
      ->check(CLI::IsMember({"apriori", "fptree", "fpgrowth", "faster"}));
  mine->add_flag("--all-consequents", cfg.all_consequents, "Allow any item as consequent, not only the target");
  mine->add_option("--out", cfg.out, "Rule file (default: standard output)");
  mine->add_option("--format", cfg.format, "csv or jsonl (default csv)")->check(CLI::IsMember({"csv", "jsonl"}));

  auto* bench = app.add_subcommand("bench", "Time the miners on one dataset");
  add_data_options(bench, cfg);
  add_threshold_options(bench, cfg);
  bench->add_option("--algorithm", cfg.algorithms, "Algorithms to time (default: all three)")
      ->delimiter(',')
      ->check(CLI::IsMember({"apriori", "fptree", "fpgrowth", "faster"}));
  bench->add_option("--reps", cfg.reps, "Timed repetitions per job")->capture_default_str();
  bench->add_option("--dataset", cfg.dataset_tag, "Dataset label for the report (default: the schema)");
  bench->add_option("--out", cfg.out, "Report file (default: standard output)");
  bench->add_option("--format", cfg.format, "csv or markdown (default csv)")
      ->check(CLI::IsMember({"csv", "markdown", "md"}));
  bench->add_flag("--assert-ordering", cfg.assert_ordering, "Fail unless median times order faster < fptree < apriori");

  auto* classify = app.add_subcommand("classify", "Cross-validate classifiers before and after rule-based feature selection");
  add_data_options(classify, cfg);
  add_threshold_options(classify, cfg);
  classify->add_option("--algorithm", cfg.algorithms, "Miner used for feature selection (default faster)")
      ->expected(1)
      ->check(CLI::IsMember({"apriori", "fptree", "fpgrowth", "faster"}));
  classify->add_option("--model", cfg.models, "nb, lr, dt or majority; repeatable (default nb)")
      ->delimiter(',')
      ->check(CLI::IsMember({"nb", "lr", "dt", "majority", "naive_bayes", "logistic_regression", "decision_tree"}));
  classify->add_option("--folds", cfg.folds, "Number of stratified folds")->capture_default_str();
  classify->add_option("--seed", cfg.seed, "Seed for fold assignment")->capture_default_str();
  classify->add_option("--out", cfg.out, "Result CSV (default: standard output)");

  auto* synth = app.add_subcommand("synth", "Generate a synthetic database and optionally sweep its width");
  synth->add_option("--rows", cfg.rows, "Number of transactions")->capture_default_str();
  synth->add_option("--attributes", cfg.attributes, "Number of attributes")->capture_default_str();
  synth->add_option("--values", cfg.values, "Values per attribute")->capture_default_str();
  synth->add_option("--skew", cfg.skew, "Probability of each attribute's modal value")->capture_default_str();
  synth->add_option("--seed", cfg.seed, "Generator seed")->capture_default_str();
  synth->add_option("--out", cfg.out, "Write the database as CSV");
  synth->add_option("--sweep", cfg.sweep, "Count mining work for every width D_MIN,D_MAX");
  synth->add_option("--curve-out", cfg.curve_out, "Curve CSV written by --sweep");
  synth->add_option("--algorithm", cfg.algorithms, "Algorithms for the sweep (default apriori,faster)")
      ->delimiter(',')
      ->check(CLI::IsMember({"apriori", "fptree", "fpgrowth", "faster"}));
  add_threshold_options(synth, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (mine->parsed()) return cmd_mine(cfg);
    if (bench->parsed()) return cmd_bench(cfg);
    if (classify->parsed()) return cmd_classify(cfg);
    return cmd_synth(cfg);
  } catch (const Error& e) {
    spdlog::error("{} ({})", e.what(), e.code());
    return is_config_error(e.code()) ? kExitConfig : kExitRuntime;
  } catch (const std::exception& e) {
    spdlog::error("{}", e.what());
    return kExitRuntime;
  }
}
