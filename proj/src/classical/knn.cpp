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

#include <algorithm>
#include <numeric>

namespace neuma::classical {

void Knn::fit(const MatrixXd& x, const Labels& y) {
  check_training_set(x, y);
  if (k_ < 1) throw Error("knn: k must be >= 1");
  if (static_cast<std::size_t>(k_) > y.size()) {
    throw Error("knn: k=" + std::to_string(k_) + " exceeds training size " + std::to_string(y.size()));
  }
  x_ = x;
  y_ = y;
}

std::vector<int> Knn::neighbours(const Eigen::Ref<const RowVectorXd>& query) const {
  const VectorXd dist = (x_.rowwise() - query).rowwise().squaredNorm();
  std::vector<int> idx(static_cast<std::size_t>(dist.size()));
  std::iota(idx.begin(), idx.end(), 0);
  const auto k = static_cast<long>(k_);
  std::partial_sort(idx.begin(), idx.begin() + k, idx.end(), [&](int a, int b) {
    return dist[a] < dist[b] || (dist[a] == dist[b] && a < b);
  });
  idx.resize(static_cast<std::size_t>(k));
  return idx;
}

VectorXd Knn::predict_proba(const MatrixXd& x) const {
  if (x_.size() == 0) throw Error("knn: not fitted");
  if (x.cols() != x_.cols()) throw Error("knn: feature count mismatch");
  VectorXd out(x.rows());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    int ones = 0;
    for (int j : neighbours(x.row(i))) ones += y_[static_cast<std::size_t>(j)];
    out[i] = static_cast<double>(ones) / k_;
  }
  return out;
}

std::string Knn::summary() const { return "knn k=" + std::to_string(k_) + " n_train=" + std::to_string(y_.size()); }

}  // namespace neuma::classical
