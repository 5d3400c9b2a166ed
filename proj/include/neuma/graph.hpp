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

#pragma once

#include "neuma/features.hpp"
#include "neuma/types.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <vector>

namespace neuma::graph {

enum class EdgeTransform { Raw, Abs, Clamp0 };

std::string to_string(EdgeTransform transform);
EdgeTransform edge_transform_from_string(const std::string& name);

/// Pearson correlation between every pair of rows (electrodes) over their
/// feature values. Unit diagonal; a constant row correlates as 0 with the others.
template <class Derived>
Matrix<typename Derived::Scalar> pearson_adjacency(const Eigen::MatrixBase<Derived>& features) {
  using Scalar = typename Derived::Scalar;
  if (features.cols() < 2) throw Error("pearson_adjacency: need at least 2 features per node");
  const Eigen::Index n = features.rows();
  Matrix<Scalar> centred = features.colwise() - features.rowwise().mean();
  Vector<Scalar> norms = centred.rowwise().norm();
  const Vector<Scalar> scale = features.cwiseAbs().rowwise().maxCoeff();
  std::vector<bool> flat(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    // Rounding in the mean leaves a residue of order eps * |x| on constant rows.
    flat[static_cast<std::size_t>(i)] =
        norms[i] <= Scalar(64) * std::numeric_limits<Scalar>::epsilon() * scale[i] *
                        std::sqrt(static_cast<Scalar>(features.cols()));
    if (!flat[static_cast<std::size_t>(i)]) centred.row(i) /= norms[i];
  }
  Matrix<Scalar> r = centred * centred.transpose();
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      Scalar v = flat[static_cast<std::size_t>(i)] || flat[static_cast<std::size_t>(j)]
                     ? Scalar(0)
                     : std::clamp(Scalar(0.5) * (r(i, j) + r(j, i)), Scalar(-1), Scalar(1));
      r(i, j) = v;
      r(j, i) = v;
    }
    r(i, i) = Scalar(1);
  }
  return r;
}

MatrixXd apply_edge_transform(const MatrixXd& adjacency, EdgeTransform transform);

struct BrainGraph {
  std::string segment_id;
  int label = 0;
  MatrixXd node_features;  // nodes x D
  MatrixXd adjacency;      // nodes x nodes, symmetric
  EdgeTransform edge_transform = EdgeTransform::Abs;

  Eigen::Index n_nodes() const { return adjacency.rows(); }
  Eigen::Index n_features() const { return node_features.cols(); }
};

/// Fully connected graph; no thresholding.
BrainGraph build_graph(const features::NodeFeatureMatrix& nodes,
                       EdgeTransform transform = EdgeTransform::Abs);
BrainGraph build_graph(const SegmentRecord& segment, const features::FeatureConfig& config,
                       EdgeTransform transform = EdgeTransform::Abs);

/// Two header lines, then the adjacency block (nodes rows) and the node
/// feature block (nodes rows):
///   # nodes=19 features=40 label=1 segment_id=s0001
///   # edge_transform=abs
void write_graph(const std::filesystem::path& path, const BrainGraph& graph);
BrainGraph read_graph(const std::filesystem::path& path);

}  // namespace neuma::graph
