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

#ifndef ARMFORGE_EVAL_HPP_
#define ARMFORGE_EVAL_HPP_

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "armforge/core.hpp"
#include "armforge/rulegen.hpp"

namespace armforge {

struct FeatureSet {
  // In the database's attribute order.
  std::vector<std::string> attributes;
  // Fingerprint of the rule set the attributes came from.
  std::uint64_t provenance = 0;
};

// Attributes appearing in any antecedent, target excluded.
FeatureSet select_features(const RuleSet& rules);

enum class Model { naive_bayes, logistic_regression, decision_tree, majority };
enum class FeatureMode { all, selected };

std::string_view to_string(Model model);
Model model_from_string(std::string_view text);
std::string_view to_string(FeatureMode mode);

// Categorical design matrix: x[row][feature] is the category index of the
// row's value, or -1 when the row has no item of that attribute.
struct EncodedData {
  std::vector<std::string> features;
  std::vector<std::size_t> cardinality;
  std::vector<std::vector<int>> x;
  std::vector<int> y;
  std::vector<std::string> classes;
};

// Requires a target attribute. Features default to every other attribute.
EncodedData encode(const TransactionDb& db, const std::optional<FeatureSet>& features = std::nullopt);

class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual void fit(const EncodedData& data, std::span<const std::size_t> rows) = 0;
  virtual int predict(const std::vector<int>& x) const = 0;
};

struct LogisticParams {
  double learning_rate = 0.1;
  std::size_t epochs = 500;
  double l2 = 1e-4;
};

struct TreeParams {
  std::size_t max_depth = 8;
};

std::unique_ptr<Classifier> make_classifier(Model model, const LogisticParams& lr = {}, const TreeParams& tree = {});

// Binary logistic loss pieces, exposed for gradient checking. Rows of `x` are
// dense feature vectors whose last entry is the constant 1 bias input; the
// bias weight is not regularised.
namespace logistic {

double loss(std::span<const double> w, const std::vector<std::vector<double>>& x, std::span<const double> y,
            double l2);
std::vector<double> gradient(std::span<const double> w, const std::vector<std::vector<double>>& x,
                             std::span<const double> y, double l2);

}  // namespace logistic

struct CvResult {
  Model model = Model::majority;
  FeatureMode mode = FeatureMode::all;
  std::size_t folds = 0;
  std::uint64_t seed = 0;
  std::vector<double> fold_accuracy;
  double mean_accuracy = 0.0;
  std::size_t n_features = 0;
  // Hyperparameters, e.g. "lr=0.1;epochs=500;l2=0.0001".
  std::string params;
};

// Stratified fold index per row: each class's rows are shuffled with `seed`
// and dealt round-robin, continuing where the previous class stopped.
std::vector<std::size_t> stratified_folds(std::span<const int> y, std::size_t k, std::uint64_t seed);

CvResult kfold_cv(const TransactionDb& db, Model model, std::size_t k, const std::optional<FeatureSet>& features,
                  std::uint64_t seed, const LogisticParams& lr = {}, const TreeParams& tree = {});

// Columns model,mode,fold,accuracy,mean,params; one row per fold.
std::string format_cv_results(const std::vector<CvResult>& results);
void export_cv_results(const std::vector<CvResult>& results, const std::string& path);

}  // namespace armforge

#endif  // ARMFORGE_EVAL_HPP_
