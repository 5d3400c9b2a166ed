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

#include "neuma/eval.hpp"
#include "neuma/text_io.hpp"

namespace neuma::classical {

namespace {

MatrixXd take_rows(const MatrixXd& x, const std::vector<int>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Labels take(const Labels& y, const std::vector<int>& rows) {
  Labels out;
  out.reserve(rows.size());
  for (int r : rows) out.push_back(y[static_cast<std::size_t>(r)]);
  return out;
}

}  // namespace

std::vector<CvFold> make_cv_folds(const MatrixXd& x, const Labels& y, int n_folds, std::uint64_t seed,
                                  std::optional<dimred::PipelineKind> pipeline) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("cv folds: rows and labels differ in length");
  const auto folds = eval::stratified_kfold(y, n_folds, seed);
  std::vector<CvFold> out(static_cast<std::size_t>(n_folds));
  for (int f = 0; f < n_folds; ++f) {
    const auto train_rows = eval::fold_complement(folds, f);
    const auto held_rows = eval::fold_members(folds, f);
    auto& d = out[static_cast<std::size_t>(f)];
    d.x_train = take_rows(x, train_rows);
    d.y_train = take(y, train_rows);
    d.x_held = take_rows(x, held_rows);
    d.y_held = take(y, held_rows);
    if (pipeline) {
      auto p = dimred::build_pipeline(*pipeline);
      d.x_train = p.fit_apply(d.x_train, d.y_train);
      d.x_held = p.apply(d.x_held);
    }
  }
  return out;
}

GridSearchResult grid_search(Family family, const std::vector<Hyperparameters>& grid,
                             const std::vector<CvFold>& folds, std::uint64_t seed) {
  if (grid.empty()) throw Error("grid_search: empty grid");
  if (folds.empty()) throw Error("grid_search: no folds");
  GridSearchResult result;
  double best_score = -1.0;
  for (std::size_t g = 0; g < grid.size(); ++g) {
    CvRow row;
    row.params = grid[g];
    ClassifierSpec spec{family, grid[g], seed};
    double sum = 0.0;
    for (const auto& d : folds) {
      const auto model = train(spec, d.x_train, d.y_train);
      row.fold_scores.push_back(eval::metrics(d.y_held, model->predict(d.x_held)).weighted_f1);
      sum += row.fold_scores.back();
    }
    row.mean_score = sum / static_cast<double>(folds.size());
    // Ties keep the earlier grid point.
    if (row.mean_score > best_score) {
      best_score = row.mean_score;
      result.best_index = g;
      result.best = spec;
    }
    result.table.push_back(std::move(row));
  }
  return result;
}

GridSearchResult grid_search(Family family, const std::vector<Hyperparameters>& grid, const MatrixXd& x,
                             const Labels& y, int n_folds, std::uint64_t seed,
                             std::optional<dimred::PipelineKind> pipeline) {
  return grid_search(family, grid, make_cv_folds(x, y, n_folds, seed, pipeline), seed);
}

std::string cv_table_csv(const GridSearchResult& result, std::uint64_t seed) {
  std::string out = "index,params,mean_weighted_f1,fold_scores,selected,seed\n";
  for (std::size_t i = 0; i < result.table.size(); ++i) {
    const auto& row = result.table[i];
    std::vector<std::string> scores;
    for (double s : row.fold_scores) scores.push_back(text::format_double(s, 10));
    out += std::to_string(i) + "," + format_hyperparameters(row.params) + "," +
           text::format_double(row.mean_score, 10) + "," + text::join(scores, ";") + "," +
           (i == result.best_index ? "1" : "0") + "," + std::to_string(seed) + "\n";
  }
  return out;
}

}  // namespace neuma::classical
