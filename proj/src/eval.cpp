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

#include "armforge/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <fmt/format.h>

#include "armforge/csv.hpp"

namespace armforge {

FeatureSet select_features(const RuleSet& rules) {
  if (rules.rules.empty()) throw Error("no-rules", "feature selection needs at least one rule");
  if (!rules.dictionary) throw Error("invalid-rules", "rule set has no item dictionary");
  const ItemDictionary& dict = *rules.dictionary;

  std::vector<bool> used(dict.attributes().size(), false);
  for (const auto& r : rules.rules) {
    for (ItemId id : r.antecedent) used[dict.attribute_index(id)] = true;
  }
  FeatureSet out;
  out.provenance = rules.fingerprint();
  for (std::size_t a = 0; a < used.size(); ++a) {
    if (!used[a]) continue;
    if (rules.target_attribute && dict.attributes()[a] == *rules.target_attribute) continue;
    out.attributes.push_back(dict.attributes()[a]);
  }
  return out;
}

std::string_view to_string(Model model) {
  switch (model) {
    case Model::naive_bayes:
      return "naive_bayes";
    case Model::logistic_regression:
      return "logistic_regression";
    case Model::decision_tree:
      return "decision_tree";
    case Model::majority:
      return "majority";
  }
  return "?";
}

Model model_from_string(std::string_view text) {
  if (text == "naive_bayes" || text == "nb") return Model::naive_bayes;
  if (text == "logistic_regression" || text == "lr") return Model::logistic_regression;
  if (text == "decision_tree" || text == "dt") return Model::decision_tree;
  if (text == "majority") return Model::majority;
  throw Error("config", fmt::format("unknown model '{}' (expected nb, lr, dt or majority)", text));
}

std::string_view to_string(FeatureMode mode) { return mode == FeatureMode::all ? "all" : "selected"; }

EncodedData encode(const TransactionDb& db, const std::optional<FeatureSet>& features) {
  if (!db.target_attribute()) throw Error("config", "classification needs a target attribute");
  const ItemDictionary& dict = db.dictionary();
  const std::string& target = *db.target_attribute();

  EncodedData out;
  if (features) {
    for (const auto& name : features->attributes) {
      if (!dict.find_attribute(name)) throw Error("unknown-attribute", fmt::format("no attribute '{}'", name));
      if (name != target) out.features.push_back(name);
    }
  } else {
    for (const auto& name : dict.attributes()) {
      if (name != target) out.features.push_back(name);
    }
  }

  constexpr std::size_t kNotFeature = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> feature_of(dict.size(), kNotFeature);
  std::vector<int> category_of(dict.size(), -1);
  for (std::size_t f = 0; f < out.features.size(); ++f) {
    const auto ids = dict.items_of(out.features[f]);
    out.cardinality.push_back(ids.size());
    for (std::size_t c = 0; c < ids.size(); ++c) {
      feature_of[ids[c]] = f;
      category_of[ids[c]] = static_cast<int>(c);
    }
  }
  const auto class_ids = dict.items_of(target);
  std::vector<int> class_of(dict.size(), -1);
  for (std::size_t c = 0; c < class_ids.size(); ++c) {
    class_of[class_ids[c]] = static_cast<int>(c);
    out.classes.push_back(dict.item(class_ids[c]).value);
  }

  out.x.reserve(db.n_rows());
  out.y.reserve(db.n_rows());
  for (const auto& t : db.transactions()) {
    std::vector<int> row(out.features.size(), -1);
    int label = -1;
    for (ItemId id : t) {
      if (class_of[id] >= 0) label = class_of[id];
      if (feature_of[id] != kNotFeature) row[feature_of[id]] = category_of[id];
    }
    out.x.push_back(std::move(row));
    out.y.push_back(label);
  }
  return out;
}

namespace {

int argmax(const std::vector<double>& scores) {
  int best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = static_cast<int>(i);
  }
  return best;
}

std::vector<std::size_t> class_counts(const EncodedData& data, std::span<const std::size_t> rows) {
  std::vector<std::size_t> counts(data.classes.size(), 0);
  for (std::size_t r : rows) ++counts[data.y[r]];
  return counts;
}

// Most frequent class, lowest index on ties.
int modal_class(const std::vector<std::size_t>& counts) {
  int best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c) {
    if (counts[c] > counts[best]) best = static_cast<int>(c);
  }
  return best;
}

class MajorityClassifier final : public Classifier {
 public:
  void fit(const EncodedData& data, std::span<const std::size_t> rows) override {
    label_ = modal_class(class_counts(data, rows));
  }
  int predict(const std::vector<int>&) const override { return label_; }

 private:
  int label_ = 0;
};

// Categorical naive Bayes with add-one smoothing. A category never seen in
// training carries no evidence and is skipped.
class NaiveBayes final : public Classifier {
 public:
  void fit(const EncodedData& data, std::span<const std::size_t> rows) override {
    n_ = rows.size();
    class_count_ = class_counts(data, rows);
    cardinality_ = data.cardinality;
    cond_.assign(data.features.size(), {});
    seen_.assign(data.features.size(), {});
    for (std::size_t f = 0; f < data.features.size(); ++f) {
      cond_[f].assign(data.cardinality[f], std::vector<std::size_t>(class_count_.size(), 0));
      seen_[f].assign(data.cardinality[f], 0);
    }
    for (std::size_t r : rows) {
      for (std::size_t f = 0; f < data.features.size(); ++f) {
        const int v = data.x[r][f];
        if (v < 0) continue;
        ++cond_[f][v][data.y[r]];
        ++seen_[f][v];
      }
    }
  }

  int predict(const std::vector<int>& x) const override {
    if (n_ == 0) return 0;
    std::vector<double> score(class_count_.size(), -std::numeric_limits<double>::infinity());
    for (std::size_t c = 0; c < class_count_.size(); ++c) {
      if (class_count_[c] == 0) continue;
      double s = std::log(static_cast<double>(class_count_[c]) / static_cast<double>(n_));
      for (std::size_t f = 0; f < x.size(); ++f) {
        const int v = x[f];
        if (v < 0 || seen_[f][v] == 0) continue;
        s += std::log((static_cast<double>(cond_[f][v][c]) + kAlpha) /
                      (static_cast<double>(class_count_[c]) + kAlpha * static_cast<double>(cardinality_[f])));
      }
      score[c] = s;
    }
    return argmax(score);
  }

 private:
  static constexpr double kAlpha = 1.0;
  std::size_t n_ = 0;
  std::vector<std::size_t> class_count_;
  std::vector<std::size_t> cardinality_;
  std::vector<std::vector<std::vector<std::size_t>>> cond_;
  std::vector<std::vector<std::size_t>> seen_;
};

double sigmoid(double z) {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// log(1 + e^a) without overflow.
double softplus(double a) { return a > 0.0 ? a + std::log1p(std::exp(-a)) : std::log1p(std::exp(a)); }

double dot(std::span<const double> w, const std::vector<double>& x) {
  double z = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) z += w[j] * x[j];
  return z;
}

}  // namespace

namespace logistic {

double loss(std::span<const double> w, const std::vector<std::vector<double>>& x, std::span<const double> y,
            double l2) {
  if (x.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double z = dot(w, x[i]);
    total += y[i] * softplus(-z) + (1.0 - y[i]) * softplus(z);
  }
  double reg = 0.0;
  for (std::size_t j = 0; j + 1 < w.size(); ++j) reg += w[j] * w[j];
  return total / static_cast<double>(x.size()) + 0.5 * l2 * reg;
}

std::vector<double> gradient(std::span<const double> w, const std::vector<std::vector<double>>& x,
                             std::span<const double> y, double l2) {
  std::vector<double> g(w.size(), 0.0);
  if (x.empty()) return g;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double residual = sigmoid(dot(w, x[i])) - y[i];
    for (std::size_t j = 0; j < w.size(); ++j) g[j] += residual * x[i][j];
  }
  const double inv_n = 1.0 / static_cast<double>(x.size());
  for (std::size_t j = 0; j < w.size(); ++j) {
    g[j] *= inv_n;
    if (j + 1 < w.size()) g[j] += l2 * w[j];
  }
  return g;
}

}  // namespace logistic

namespace {

// One-vs-rest logistic regression on one-hot encodings, full-batch gradient
// descent from zero weights.
class LogisticRegression final : public Classifier {
 public:
  explicit LogisticRegression(LogisticParams params) : params_(params) {}

  void fit(const EncodedData& data, std::span<const std::size_t> rows) override {
    offset_.assign(data.features.size(), 0);
    std::size_t dims = 0;
    for (std::size_t f = 0; f < data.features.size(); ++f) {
      offset_[f] = dims;
      dims += data.cardinality[f];
    }
    dims_ = dims + 1;

    std::vector<std::vector<double>> x;
    x.reserve(rows.size());
    for (std::size_t r : rows) x.push_back(one_hot(data.x[r]));

    weights_.assign(data.classes.size(), std::vector<double>(dims_, 0.0));
    std::vector<double> y(rows.size());
    for (std::size_t c = 0; c < data.classes.size(); ++c) {
      for (std::size_t i = 0; i < rows.size(); ++i) y[i] = data.y[rows[i]] == static_cast<int>(c) ? 1.0 : 0.0;
      auto& w = weights_[c];
      for (std::size_t epoch = 0; epoch < params_.epochs; ++epoch) {
        const auto g = logistic::gradient(w, x, y, params_.l2);
        for (std::size_t j = 0; j < dims_; ++j) w[j] -= params_.learning_rate * g[j];
      }
    }
  }

  int predict(const std::vector<int>& x) const override {
    if (weights_.empty()) return 0;
    const auto v = one_hot(x);
    std::vector<double> score(weights_.size());
    for (std::size_t c = 0; c < weights_.size(); ++c) score[c] = dot(weights_[c], v);
    return argmax(score);
  }

 private:
  std::vector<double> one_hot(const std::vector<int>& row) const {
    std::vector<double> v(dims_, 0.0);
    for (std::size_t f = 0; f < row.size(); ++f) {
      if (row[f] >= 0) v[offset_[f] + static_cast<std::size_t>(row[f])] = 1.0;
    }
    v.back() = 1.0;
    return v;
  }

  LogisticParams params_;
  std::vector<std::size_t> offset_;
  std::size_t dims_ = 1;
  std::vector<std::vector<double>> weights_;
};

double gini(const std::vector<std::size_t>& counts, std::size_t n) {
  if (n == 0) return 0.0;
  double s = 1.0;
  for (std::size_t c : counts) {
    const double p = static_cast<double>(c) / static_cast<double>(n);
    s -= p * p;
  }
  return s;
}

// CART-style tree with binary attribute == value tests.
class DecisionTree final : public Classifier {
 public:
  explicit DecisionTree(TreeParams params) : params_(params) {}

  void fit(const EncodedData& data, std::span<const std::size_t> rows) override {
    nodes_.clear();
    n_classes_ = data.classes.size();
    std::vector<std::size_t> all(rows.begin(), rows.end());
    grow(data, all, 0);
  }

  int predict(const std::vector<int>& x) const override {
    if (nodes_.empty()) return 0;
    std::size_t n = 0;
    while (nodes_[n].feature >= 0) n = x[nodes_[n].feature] == nodes_[n].category ? nodes_[n].equal : nodes_[n].other;
    return nodes_[n].label;
  }

 private:
  struct Node {
    int feature = -1;
    int category = -1;
    std::size_t equal = 0;
    std::size_t other = 0;
    int label = 0;
  };

  std::size_t grow(const EncodedData& data, const std::vector<std::size_t>& rows, std::size_t depth) {
    const std::size_t index = nodes_.size();
    nodes_.emplace_back();
    const auto counts = class_counts(data, rows);
    nodes_[index].label = modal_class(counts);
    const double parent = gini(counts, rows.size());
    if (depth >= params_.max_depth || rows.size() < 2 || parent <= 0.0) return index;

    double best_gain = 1e-12;
    int best_feature = -1;
    int best_category = -1;
    std::vector<std::size_t> left(n_classes_);
    for (std::size_t f = 0; f < data.features.size(); ++f) {
      for (std::size_t v = 0; v < data.cardinality[f]; ++v) {
        std::fill(left.begin(), left.end(), 0);
        std::size_t n_left = 0;
        for (std::size_t r : rows) {
          if (data.x[r][f] == static_cast<int>(v)) {
            ++left[data.y[r]];
            ++n_left;
          }
        }
        if (n_left == 0 || n_left == rows.size()) continue;
        std::vector<std::size_t> right(n_classes_);
        for (std::size_t c = 0; c < n_classes_; ++c) right[c] = counts[c] - left[c];
        const double n = static_cast<double>(rows.size());
        const double weighted = (static_cast<double>(n_left) / n) * gini(left, n_left) +
                                (static_cast<double>(rows.size() - n_left) / n) * gini(right, rows.size() - n_left);
        const double gain = parent - weighted;
        if (gain > best_gain) {
          best_gain = gain;
          best_feature = static_cast<int>(f);
          best_category = static_cast<int>(v);
        }
      }
    }
    if (best_feature < 0) return index;

    std::vector<std::size_t> eq;
    std::vector<std::size_t> ne;
    for (std::size_t r : rows) (data.x[r][best_feature] == best_category ? eq : ne).push_back(r);
    const std::size_t a = grow(data, eq, depth + 1);
    const std::size_t b = grow(data, ne, depth + 1);
    nodes_[index].feature = best_feature;
    nodes_[index].category = best_category;
    nodes_[index].equal = a;
    nodes_[index].other = b;
    return index;
  }

  TreeParams params_;
  std::size_t n_classes_ = 0;
  std::vector<Node> nodes_;
};

std::string params_text(Model model, const LogisticParams& lr, const TreeParams& tree) {
  switch (model) {
    case Model::naive_bayes:
      return "alpha=1";
    case Model::logistic_regression:
      return fmt::format("lr={};epochs={};l2={}", lr.learning_rate, lr.epochs, lr.l2);
    case Model::decision_tree:
      return fmt::format("max_depth={}", tree.max_depth);
    case Model::majority:
      return "";
  }
  return "";
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(Model model, const LogisticParams& lr, const TreeParams& tree) {
  switch (model) {
    case Model::naive_bayes:
      return std::make_unique<NaiveBayes>();
    case Model::logistic_regression:
      return std::make_unique<LogisticRegression>(lr);
    case Model::decision_tree:
      return std::make_unique<DecisionTree>(tree);
    case Model::majority:
      return std::make_unique<MajorityClassifier>();
  }
  throw Error("config", "unknown model");
}

std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed) {
  if (k < 2) throw Error("config", fmt::format("need at least 2 folds, got {}", k));
  if (k > y.size()) throw Error("folds", fmt::format("{} folds exceed {} rows", k, y.size()));
  const int n_classes = y.empty() ? 0 : *std::max_element(y.begin(), y.end()) + 1;
  std::vector<std::vector<std::size_t>> by_class(static_cast<std::size_t>(std::max(n_classes, 0)));
  for (std::size_t r = 0; r < y.size(); ++r) {
    if (y[r] < 0) throw Error("config", fmt::format("row {} has no class label", r + 1));
    by_class[y[r]].push_back(r);
  }
  for (std::size_t c = 0; c < by_class.size(); ++c) {
    if (!by_class[c].empty() && by_class[c].size() < k) {
      throw Error("stratification",
                  fmt::format("class {} has {} rows, fewer than {} folds", c, by_class[c].size(), k));
    }
  }

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> fold(y.size(), 0);
  std::size_t offset = 0;
  for (auto& rows : by_class) {
    // Fisher-Yates with modulo draws: portable across standard libraries.
    for (std::size_t i = rows.size(); i > 1; --i) std::swap(rows[i - 1], rows[rng() % i]);
    for (std::size_t i = 0; i < rows.size(); ++i) fold[rows[i]] = (offset + i) % k;
    offset = (offset + rows.size()) % k;
  }
  return fold;
}

CvResult kfold_cv(const TransactionDb& db, Model model, std::size_t k, const std::optional<FeatureSet>& features,
                  std::uint64_t seed, const LogisticParams& lr, const TreeParams& tree) {
  const EncodedData data = encode(db, features);
  const auto fold = stratified_folds(data.y, k, seed);

  CvResult out;
  out.model = model;
  out.mode = features ? FeatureMode::selected : FeatureMode::all;
  out.folds = k;
  out.seed = seed;
  out.n_features = data.features.size();
  out.params = params_text(model, lr, tree);

  for (std::size_t f = 0; f < k; ++f) {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    for (std::size_t r = 0; r < fold.size(); ++r) (fold[r] == f ? test : train).push_back(r);
    auto clf = make_classifier(model, lr, tree);
    clf->fit(data, train);
    std::size_t correct = 0;
    for (std::size_t r : test) correct += clf->predict(data.x[r]) == data.y[r];
    out.fold_accuracy.push_back(static_cast<double>(correct) / static_cast<double>(test.size()));
  }
  out.mean_accuracy = std::accumulate(out.fold_accuracy.begin(), out.fold_accuracy.end(), 0.0) /
                      static_cast<double>(out.fold_accuracy.size());
  return out;
}

std::string format_cv_results(const std::vector<CvResult>& results) {
  std::string out = "model,mode,fold,accuracy,mean,params\n";
  for (const auto& r : results) {
    for (std::size_t f = 0; f < r.fold_accuracy.size(); ++f) {
      out += csv::join({std::string(to_string(r.model)), std::string(to_string(r.mode)), std::to_string(f + 1),
                        fmt::format("{:.6f}", r.fold_accuracy[f]), fmt::format("{:.6f}", r.mean_accuracy), r.params});
      out += '\n';
    }
  }
  return out;
}

void export_cv_results(const std::vector<CvResult>& results, const std::string& path) {
  csv::write_file(path, format_cv_results(results));
}

}  // namespace armforge
