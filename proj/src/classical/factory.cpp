/*
 * Copyright 2026 The neuma-eeg Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "neuma/classical.hpp"

#include "neuma/text_io.hpp"

#include <cmath>
#include <set>

namespace neuma::classical {

std::string to_string(Family family) {
  switch (family) {
    case Family::LogReg: return "logreg";
    case Family::Knn: return "knn";
    case Family::GaussianNb: return "gaussian_nb";
    case Family::RandomForest: return "random_forest";
    case Family::Gbt: return "gbt";
    case Family::Stacking: return "stacking";
  }
  throw Error("unknown classifier family");
}

Family family_from_string(const std::string& name) {
  for (auto f : {Family::LogReg, Family::Knn, Family::GaussianNb, Family::RandomForest, Family::Gbt,
                 Family::Stacking}) {
    if (to_string(f) == name) return f;
  }
  throw Error("unknown classifier: " + name);
}

std::string display_name(Family family) {
  switch (family) {
    case Family::LogReg: return "LR";
    case Family::Knn: return "KNN";
    case Family::GaussianNb: return "Naive Bayes";
    case Family::RandomForest: return "Random Forest";
    case Family::Gbt: return "gbt (stand-in)";
    case Family::Stacking: return "Stacking";
  }
  throw Error("unknown classifier family");
}

std::string format_hyperparameters(const Hyperparameters& params) {
  std::vector<std::string> parts;
  for (const auto& [k, v] : params) parts.push_back(k + "=" + text::format_double(v, 10));
  return text::join(parts, ";");
}

double ClassifierSpec::get(const std::string& name, double fallback) const {
  const auto it = params.find(name);
  return it == params.end() ? fallback : it->second;
}

namespace {

const std::set<std::string>& allowed_params(Family family) {
  static const std::set<std::string> logreg = {"l2", "max_iters"};
  static const std::set<std::string> knn = {"k"};
  static const std::set<std::string> none = {};
  static const std::set<std::string> forest = {"n_trees", "max_depth", "min_leaf"};
  static const std::set<std::string> gbt = {"n_rounds", "max_depth", "learning_rate", "l2"};
  static const std::set<std::string> stacking = {"n_folds"};
  switch (family) {
    case Family::LogReg: return logreg;
    case Family::Knn: return knn;
    case Family::GaussianNb: return none;
    case Family::RandomForest: return forest;
    case Family::Gbt: return gbt;
    case Family::Stacking: return stacking;
  }
  return none;
}

int as_int(const ClassifierSpec& spec, const std::string& name, int fallback) {
  const double v = spec.get(name, fallback);
  if (v != std::floor(v)) throw Error(to_string(spec.family) + ": " + name + " must be an integer");
  return static_cast<int>(v);
}

}  // namespace

std::unique_ptr<Classifier> make_classifier(const ClassifierSpec& spec) {
  const auto& allowed = allowed_params(spec.family);
  for (const auto& [name, value] : spec.params) {
    if (!allowed.count(name)) throw Error(to_string(spec.family) + ": unknown hyperparameter " + name);
  }
  switch (spec.family) {
    case Family::LogReg: {
      LogRegOptions o;
      o.l2_lambda = spec.get("l2", o.l2_lambda);
      o.max_iters = as_int(spec, "max_iters", o.max_iters);
      if (o.l2_lambda < 0) throw Error("logreg: l2 must be >= 0");
      return std::make_unique<LogisticRegression>(o);
    }
    case Family::Knn: {
      const int k = as_int(spec, "k", 5);
      if (k < 1) throw Error("knn: k must be >= 1");
      return std::make_unique<Knn>(k);
    }
    case Family::GaussianNb:
      return std::make_unique<GaussianNb>();
    case Family::RandomForest: {
      ForestOptions o;
      o.n_trees = as_int(spec, "n_trees", o.n_trees);
      o.max_depth = as_int(spec, "max_depth", o.max_depth);
      o.min_leaf = as_int(spec, "min_leaf", o.min_leaf);
      o.seed = spec.seed;
      return std::make_unique<RandomForest>(o);
    }
    case Family::Gbt: {
      GbtOptions o;
      o.n_rounds = as_int(spec, "n_rounds", o.n_rounds);
      o.max_depth = as_int(spec, "max_depth", o.max_depth);
      o.learning_rate = spec.get("learning_rate", o.learning_rate);
      o.l2 = spec.get("l2", o.l2);
      o.seed = spec.seed;
      return std::make_unique<GradientBoostedTrees>(o);
    }
    case Family::Stacking:
      return std::make_unique<Stacking>(spec.seed, as_int(spec, "n_folds", 5));
  }
  throw Error("unknown classifier family");
}

std::unique_ptr<Classifier> train(const ClassifierSpec& spec, const MatrixXd& x, const Labels& y) {
  auto model = make_classifier(spec);
  model->fit(x, y);
  return model;
}

std::vector<Hyperparameters> default_grid(Family family) {
  std::vector<Hyperparameters> grid;
  switch (family) {
    case Family::LogReg:
      for (double l2 : {0.001, 0.01, 0.1, 1.0}) grid.push_back({{"l2", l2}});
      break;
    case Family::Knn:
      for (double k : {3, 5, 7, 9}) grid.push_back({{"k", k}});
      break;
    case Family::RandomForest:
      for (double trees : {100, 300}) {
        for (double depth : {6, 12}) grid.push_back({{"n_trees", trees}, {"max_depth", depth}});
      }
      break;
    case Family::Gbt:
      for (double rounds : {100, 300}) {
        for (double depth : {3, 5}) {
          for (double lr : {0.05, 0.1}) {
            grid.push_back({{"n_rounds", rounds}, {"max_depth", depth}, {"learning_rate", lr}});
          }
        }
      }
      break;
    case Family::GaussianNb:
    case Family::Stacking:
      grid.push_back({});
      break;
  }
  return grid;
}

}  // namespace neuma::classical
