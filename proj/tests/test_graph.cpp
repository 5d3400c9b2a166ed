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

#include <doctest.h>

#include "neuma/fixtures.hpp"
#include "neuma/graph.hpp"
#include "support.hpp"

#include <algorithm>
#include <numeric>
#include <random>

using namespace neuma;
using namespace neuma::graph;
using neuma::testing::TempDir;

TEST_CASE("pearson adjacency on hand-built rows") {
  MatrixXd x(3, 3);
  x << 1, 2, 3,
       3, 2, 1,
       2, 4, 6;
  const MatrixXd a = pearson_adjacency(x);
  CHECK(a(0, 1) == doctest::Approx(-1.0).epsilon(1e-15));
  CHECK(a(0, 2) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(a(1, 2) == doctest::Approx(-1.0).epsilon(1e-15));

  MatrixXd y(2, 4);
  y << 1, 0, 0, 0,
       0, 1, 0, 0;
  // Centred rows (3,-1,-1,-1)/4 and (-1,3,-1,-1)/4: dot -4/16 over norm^2 12/16.
  CHECK(pearson_adjacency(y)(0, 1) == doctest::Approx(-1.0 / 3.0).epsilon(1e-15));

  CHECK_THROWS_AS(pearson_adjacency(MatrixXd::Ones(3, 1)), Error);
}

TEST_CASE("pearson adjacency matches a brute-force double loop") {
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    MatrixXd x = testing::random_normal(19, 40, seed);
    x.array().colwise() *= (testing::random_normal(19, 1, seed + 100).col(0).array().abs() * 50.0 + 0.01);
    x.array().colwise() += testing::random_normal(19, 1, seed + 200).col(0).array() * 1e3;
    const MatrixXd a = pearson_adjacency(x);
    CHECK((a - testing::brute_force_pearson(x)).cwiseAbs().maxCoeff() < 1e-12);
    CHECK(a == a.transpose());
    CHECK(a.diagonal() == VectorXd::Ones(19));
    CHECK(a.cwiseAbs().maxCoeff() <= 1.0);
  }
}

TEST_CASE("constant rows correlate as zero and identical rows as one") {
  MatrixXd x = testing::random_normal(19, 40, 3);
  x.row(4).setConstant(7.25);
  x.row(9) = x.row(2);
  const MatrixXd a = pearson_adjacency(x);
  for (Eigen::Index j = 0; j < 19; ++j) {
    if (j != 4) CHECK(a(4, j) == 0.0);
  }
  CHECK(a(4, 4) == 1.0);
  CHECK(a(2, 9) == doctest::Approx(1.0).epsilon(1e-15));

  const MatrixXd same = MatrixXd::Ones(19, 1) * testing::random_normal(1, 40, 4);
  CHECK((pearson_adjacency(same).array() - 1.0).abs().maxCoeff() < 1e-14);
  CHECK(pearson_adjacency(MatrixXd::Zero(19, 40)) == MatrixXd::Identity(19, 19));
}

TEST_CASE("node permutation conjugates the adjacency and row affine maps leave it alone") {
  const MatrixXd x = testing::random_normal(19, 40, 5);
  const MatrixXd a = pearson_adjacency(x);
  std::vector<int> perm(19);
  std::iota(perm.begin(), perm.end(), 0);
  std::shuffle(perm.begin(), perm.end(), std::mt19937_64(6));
  Eigen::PermutationMatrix<Eigen::Dynamic> p(19);
  for (int i = 0; i < 19; ++i) p.indices()[i] = perm[static_cast<std::size_t>(i)];
  const MatrixXd permuted = pearson_adjacency(MatrixXd(p * x));
  CHECK((permuted - MatrixXd(p * a * p.transpose())).cwiseAbs().maxCoeff() < 1e-14);

  MatrixXd affine = x;
  for (Eigen::Index i = 0; i < 19; ++i) affine.row(i) = affine.row(i) * (0.5 + static_cast<double>(i)) - VectorXd::Constant(40, 3.0 * static_cast<double>(i)).transpose();
  CHECK((pearson_adjacency(affine) - a).cwiseAbs().maxCoeff() < 1e-13);

  MatrixXd flipped = x;
  flipped.row(0) *= -1.0;
  const MatrixXd af = pearson_adjacency(flipped);
  for (Eigen::Index j = 1; j < 19; ++j) CHECK(af(0, j) == doctest::Approx(-a(0, j)).epsilon(1e-13));
}

TEST_CASE("edge transforms") {
  MatrixXd a(2, 2);
  a << 1.0, -0.4,
       -0.4, 1.0;
  CHECK(apply_edge_transform(a, EdgeTransform::Raw) == a);
  CHECK(apply_edge_transform(a, EdgeTransform::Abs)(0, 1) == 0.4);
  CHECK(apply_edge_transform(a, EdgeTransform::Clamp0)(0, 1) == 0.0);
  CHECK(apply_edge_transform(a, EdgeTransform::Clamp0)(0, 0) == 1.0);
  for (auto t : {EdgeTransform::Raw, EdgeTransform::Abs, EdgeTransform::Clamp0}) {
    CHECK(edge_transform_from_string(to_string(t)) == t);
  }
  CHECK_THROWS_AS(edge_transform_from_string("square"), Error);
}

TEST_CASE("graphs built from segments have one node per electrode") {
  const auto segs = fixtures::synthetic_segments(fixtures::tiny());
  const BrainGraph g = build_graph(segs[0], features::FeatureConfig{});
  CHECK(g.n_nodes() == 19);
  CHECK(g.n_features() == 40);
  CHECK(g.segment_id == segs[0].segment_id);
  CHECK(g.label == static_cast<int>(segs[0].label));
  CHECK(g.adjacency.minCoeff() >= 0.0);
  CHECK(g.adjacency == g.adjacency.transpose());

  const auto nodes = features::extract_node_features(segs[0], features::FeatureConfig{});
  CHECK(build_graph(nodes, EdgeTransform::Raw).adjacency == pearson_adjacency(nodes.values));
}

TEST_CASE("graph files round trip") {
  TempDir dir("graph");
  BrainGraph g = testing::random_graph(40, 1, 8);
  g.segment_id = "seg_07";
  g.edge_transform = EdgeTransform::Clamp0;
  write_graph(dir / "g.txt", g);
  const BrainGraph back = read_graph(dir / "g.txt");
  CHECK(back.segment_id == "seg_07");
  CHECK(back.label == 1);
  CHECK(back.edge_transform == EdgeTransform::Clamp0);
  CHECK(back.adjacency == g.adjacency);
  CHECK(back.node_features == g.node_features);
  CHECK_THROWS_AS(read_graph(dir / "missing.txt"), Error);
}
