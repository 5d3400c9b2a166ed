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

#include "neuma/classical.hpp"
#include "neuma/eval.hpp"
#include "support.hpp"

#include <random>

using namespace neuma;
using namespace neuma::classical;

namespace {

double accuracy(const Labels& a, const Labels& b) {
  long hit = 0;
  for (std::size_t i = 0; i < a.size(); ++i) hit += a[i] == b[i];
  return static_cast<double>(hit) / static_cast<double>(a.size());
}

/// Two Gaussian blobs in d dimensions, centres +-shift on every axis.
void blobs(Eigen::Index n, Eigen::Index d, double shift, std::uint64_t seed, MatrixXd& x, Labels& y) {
  x = testing::random_normal(n, d, seed);
  y = testing::random_labels(static_cast<std::size_t>(n), 0.5, seed + 1);
  y[0] = 0;
  y[1] = 1;
  for (Eigen::Index i = 0; i < n; ++i) x.row(i).array() += y[static_cast<std::size_t>(i)] ? shift : -shift;
}

/// Four clusters at (+-1, +-1); label = XOR of the signs.
void xor_clusters(Eigen::Index per_cluster, std::uint64_t seed, MatrixXd& x, Labels& y) {
  const MatrixXd noise = testing::random_normal(4 * per_cluster, 2, seed) * 0.15;
  x.resize(4 * per_cluster, 2);
  y.resize(static_cast<std::size_t>(4 * per_cluster));
  for (Eigen::Index c = 0; c < 4; ++c) {
    const double sx = (c & 1) ? 1.0 : -1.0, sy = (c & 2) ? 1.0 : -1.0;
    for (Eigen::Index i = 0; i < per_cluster; ++i) {
      const Eigen::Index r = c * per_cluster + i;
      x(r, 0) = sx + noise(r, 0);
      x(r, 1) = sy + noise(r, 1);
      y[static_cast<std::size_t>(r)] = (sx > 0) != (sy > 0) ? 1 : 0;
    }
  }
}

std::vector<std::unique_ptr<Classifier>> every_family(std::uint64_t seed) {
  std::vector<std::unique_ptr<Classifier>> out;
  out.push_back(std::make_unique<LogisticRegression>());
  out.push_back(std::make_unique<Knn>(5));
  out.push_back(std::make_unique<GaussianNb>());
  ForestOptions rf;
  rf.n_trees = 25;
  rf.seed = seed;
  out.push_back(std::make_unique<RandomForest>(rf));
  GbtOptions gbt;
  gbt.n_rounds = 30;
  gbt.seed = seed;
  out.push_back(std::make_unique<GradientBoostedTrees>(gbt));
  out.push_back(std::make_unique<Stacking>(seed));
  return out;
}

}  // namespace

TEST_CASE("logistic regression separates a separable fixture and has a zero gradient at the optimum") {
  MatrixXd x;
  Labels y;
  blobs(80, 2, 2.0, 1, x, y);
  LogRegOptions options;
  options.l2_lambda = 0.1;
  LogisticRegression lr(options);
  lr.fit(x, y);
  CHECK(accuracy(lr.predict(x), y) == 1.0);

  const auto at = logistic_loss(x, y, lr.weights(), lr.bias(), 0.1);
  CHECK(at.grad_w.cwiseAbs().maxCoeff() < 1e-6);

  // Analytic gradient against central differences at an arbitrary point.
  VectorXd w(2);
  w << 0.3, -0.7;
  const double b = 0.2;
  const auto lg = logistic_loss(x, y, w, b, 0.1);
  MatrixXd wb(3, 1);
  wb << w, b;
  const MatrixXd numeric = testing::numeric_gradient(
      [&](const MatrixXd& p) { return logistic_loss(x, y, p.topRows(2).col(0), p(2, 0), 0.1).loss; }, wb, 1e-6);
  MatrixXd analytic(3, 1);
  analytic << lg.grad_w, lg.grad_b;
  CHECK(testing::max_relative_error(analytic, numeric) < 1e-5);

  CHECK_THROWS_WITH_AS(lr.fit(x, Labels(y.size(), 1)), doctest::Contains("degenerate labels"), Error);
}

TEST_CASE("logistic regression labels follow the sign of the score") {
  MatrixXd x;
  Labels y;
  blobs(60, 3, 0.4, 3, x, y);
  LogisticRegression lr;
  lr.fit(x, y);
  const VectorXd score = lr.decision_function(x);
  const Labels pred = lr.predict(x);
  for (Eigen::Index i = 0; i < score.size(); ++i) {
    CHECK(pred[static_cast<std::size_t>(i)] == (score[i] > 0.0 ? 1 : 0));
    CHECK(pred[static_cast<std::size_t>(i)] == (std::tanh(score[i]) > 0.0 ? 1 : 0));
  }
}

TEST_CASE("knn votes among hand-checked neighbours") {
  MatrixXd x(5, 2);
  x << 0, 0,
       1, 0,
       0, 1,
       3, 3,
       4, 3;
  const Labels y = {0, 1, 1, 0, 0};
  Knn one(1);
  one.fit(x, y);
  for (Eigen::Index i = 0; i < 5; ++i) CHECK(one.predict(x.row(i))[0] == y[static_cast<std::size_t>(i)]);

  Knn three(3);
  three.fit(x, y);
  RowVectorXd q(2);
  q << 0.4, 0.4;
  // Distances: p0 0.566, p1 0.721, p2 0.721, p3 3.677, p4 4.559 -> {0, 1, 2} -> votes 1:2.
  CHECK(three.neighbours(q) == std::vector<int>{0, 1, 2});
  CHECK(three.predict(q)[0] == 1);
  q << 3.2, 2.5;
  CHECK(three.neighbours(q) == std::vector<int>{3, 4, 1});
  CHECK(three.predict(q)[0] == 0);

  // Distance tie between p1 and p2 resolves to the lower index.
  Knn two(2);
  two.fit(x, y);
  q << 0.5, 0.5;
  CHECK(two.neighbours(q).size() == 2);
  CHECK(two.neighbours(q)[1] == 1);
  // Vote tie 1:1 resolves to class 0.
  Knn tie(2);
  MatrixXd xt(2, 1);
  xt << 0.0, 1.0;
  tie.fit(xt, {0, 1});
  CHECK(tie.predict(MatrixXd::Constant(1, 1, 0.5))[0] == 0);

  CHECK_THROWS_AS(Knn(6).fit(x, y), Error);
}

TEST_CASE("knn is unchanged when the training set is duplicated and k scaled") {
  MatrixXd x;
  Labels y;
  blobs(40, 3, 0.5, 5, x, y);
  const MatrixXd query = testing::random_normal(30, 3, 6);
  Knn base(3);
  base.fit(x, y);
  MatrixXd doubled(80, 3);
  doubled << x, x;
  Labels y2 = y;
  y2.insert(y2.end(), y.begin(), y.end());
  Knn twice(6);
  twice.fit(doubled, y2);
  CHECK(base.predict(query) == twice.predict(query));
}

TEST_CASE("gaussian naive bayes puts the equal-variance boundary at the midpoint") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> n0(0.0, 1.0), n1(4.0, 1.0);
  MatrixXd x(4000, 1);
  Labels y(4000);
  for (int i = 0; i < 4000; ++i) {
    y[static_cast<std::size_t>(i)] = i % 2;
    x(i, 0) = i % 2 ? n1(rng) : n0(rng);
  }
  GaussianNb nb;
  nb.fit(x, y);
  MatrixXd grid(401, 1);
  for (int i = 0; i <= 400; ++i) grid(i, 0) = i * 0.01;
  const Labels pred = nb.predict(grid);
  int first_one = -1;
  for (int i = 0; i <= 400; ++i) {
    if (pred[static_cast<std::size_t>(i)] == 1) {
      first_one = i;
      break;
    }
  }
  CHECK(std::abs(first_one * 0.01 - 2.0) <= 0.1);
}

TEST_CASE("naive bayes ignores an uninformative feature and falls back to the prior") {
  MatrixXd x;
  Labels y;
  blobs(200, 1, 1.0, 9, x, y);
  MatrixXd with_noise(200, 2);
  with_noise << x, testing::random_normal(200, 1, 10);
  const MatrixXd query = testing::random_normal(50, 1, 11) * 2.0;
  MatrixXd query2(50, 2);
  query2 << query, MatrixXd::Zero(50, 1);

  GaussianNb a, b;
  a.fit(x, y);
  b.fit(with_noise, y);
  // The noise column has the same distribution in both classes; at its centre it barely moves the posterior.
  CHECK(accuracy(a.predict(query), b.predict(query2)) >= 0.96);

  Labels skewed(30, 0);
  for (int i = 0; i < 8; ++i) skewed[static_cast<std::size_t>(i)] = 1;
  GaussianNb prior;
  prior.fit(MatrixXd::Constant(30, 3, 2.0), skewed);
  const Labels p = prior.predict(MatrixXd::Constant(5, 3, 2.0));
  CHECK(p == Labels(5, 0));
}

TEST_CASE("random forest learns XOR and a single full tree interpolates") {
  MatrixXd x;
  Labels y;
  xor_clusters(30, 12, x, y);
  ForestOptions options;
  options.n_trees = 50;
  options.max_depth = 4;
  options.seed = 3;
  RandomForest rf(options);
  rf.fit(x, y);
  CHECK(accuracy(rf.predict(x), y) >= 0.95);

  ForestOptions single;
  single.n_trees = 1;
  single.bootstrap = false;
  single.seed = 4;
  const MatrixXd noise = testing::random_normal(100, 4, 13);
  const Labels random_y = testing::random_labels(100, 0.5, 14);
  RandomForest tree(single);
  tree.fit(noise, random_y);
  CHECK(accuracy(tree.predict(noise), random_y) == 1.0);

  RandomForest again(options);
  again.fit(x, y);
  const MatrixXd query = testing::random_normal(40, 2, 15);
  CHECK(rf.predict_proba(query) == again.predict_proba(query));
}

TEST_CASE("gradient boosting lowers the training loss every round") {
  MatrixXd x;
  Labels y;
  blobs(150, 4, 0.3, 21, x, y);
  GbtOptions options;
  options.n_rounds = 60;
  options.seed = 1;
  GradientBoostedTrees gbt(options);
  gbt.fit(x, y);
  const auto& loss = gbt.training_loss();
  REQUIRE(loss.size() == 61);
  for (std::size_t r = 1; r < loss.size(); ++r) CHECK(loss[r] <= loss[r - 1] + 1e-15);

  MatrixXd sx;
  Labels sy;
  blobs(100, 2, 1.5, 22, sx, sy);
  GbtOptions fifty;
  fifty.n_rounds = 50;
  GradientBoostedTrees separable(fifty);
  separable.fit(sx, sy);
  CHECK(accuracy(separable.predict(sx), sy) >= 0.95);

  GbtOptions frozen;
  frozen.learning_rate = 0.0;
  GradientBoostedTrees flat(frozen);
  flat.fit(x, y);
  double ones = 0;
  for (int v : y) ones += v;
  const double prior = std::log(ones / (static_cast<double>(y.size()) - ones));
  CHECK((flat.raw_score(x).array() - prior).abs().maxCoeff() < 1e-12);
}

TEST_CASE("probabilities are valid and deterministic for every family") {
  MatrixXd x;
  Labels y;
  blobs(90, 3, 0.6, 31, x, y);
  const MatrixXd query = testing::random_normal(25, 3, 32);
  auto first = every_family(5);
  auto second = every_family(5);
  for (std::size_t m = 0; m < first.size(); ++m) {
    first[m]->fit(x, y);
    second[m]->fit(x, y);
    const MatrixXd pairs = first[m]->predict_proba_pairs(query);
    CHECK(pairs.minCoeff() >= 0.0);
    CHECK(pairs.maxCoeff() <= 1.0);
    CHECK((pairs.rowwise().sum().array() - 1.0).abs().maxCoeff() <= 1e-9);
    CHECK(first[m]->predict_proba(query) == second[m]->predict_proba(query));
    for (int label : first[m]->predict(query)) CHECK((label == 0 || label == 1));
  }
}

TEST_CASE("stacking builds out-of-fold meta features") {
  MatrixXd x;
  Labels y;
  blobs(100, 3, 0.5, 41, x, y);
  Stacking stack(7);
  stack.fit(x, y);
  const MatrixXd& meta = stack.meta_features();
  CHECK(meta.rows() == 100);
  CHECK(meta.cols() == 4);
  CHECK(meta.minCoeff() >= 0.0);
  CHECK(meta.maxCoeff() <= 1.0);
  REQUIRE(stack.meta_fold().size() == 100);
  for (int i = 0; i < 100; ++i) {
    const int f = stack.meta_fold()[static_cast<std::size_t>(i)];
    const auto& rows = stack.fold_training_rows()[static_cast<std::size_t>(f)];
    CHECK(std::find(rows.begin(), rows.end(), i) == rows.end());
  }
}

TEST_CASE("stacking recovers when only one base learner can solve the task") {
  // Label = stripe index parity of the first feature; 20 noise columns drown KNN,
  // and linear/Gaussian models cannot represent stripes. Trees can.
  std::mt19937_64 rng(51);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const int n = 400, d = 21;
  MatrixXd x = testing::random_normal(n, d, 52) * 3.0;
  Labels y(n);
  for (int i = 0; i < n; ++i) {
    x(i, 0) = unit(rng);
    y[static_cast<std::size_t>(i)] = static_cast<int>(std::floor(x(i, 0) * 4.0)) % 2;
  }
  const int n_train = 300;
  const MatrixXd xtr = x.topRows(n_train), xte = x.bottomRows(n - n_train);
  const Labels ytr(y.begin(), y.begin() + n_train), yte(y.begin() + n_train, y.end());

  auto bases = Stacking::make_base_learners(3);
  double worst = 1.0;
  for (auto& m : bases) {
    m->fit(xtr, ytr);
    worst = std::min(worst, accuracy(m->predict(xte), yte));
  }
  Stacking stack(3);
  stack.fit(xtr, ytr);
  const double acc = accuracy(stack.predict(xte), yte);
  CHECK(acc >= worst);
  CHECK(acc >= 0.9);
}

TEST_CASE("grid search returns the single point or the dominant one") {
  MatrixXd x;
  Labels y;
  blobs(100, 2, 0.7, 61, x, y);
  const auto one = grid_search(Family::Knn, {{{"k", 5}}}, x, y, 5, 1);
  CHECK(one.best.params.at("k") == 5);
  CHECK(one.table.size() == 1);

  // k = 1 scores every fold with leave-fold-out nearest neighbour; k = 99 exceeds every fold and
  // would throw, so a dominated but valid point is a huge k that always votes the majority.
  MatrixXd xs;
  Labels ys;
  blobs(100, 2, 2.0, 62, xs, ys);
  const auto two = grid_search(Family::Knn, {{{"k", 79}}, {{"k", 3}}}, xs, ys, 5, 1);
  CHECK(two.best_index == 1);
  for (std::size_t f = 0; f < 5; ++f) CHECK(two.table[1].fold_scores[f] > two.table[0].fold_scores[f]);

  const std::string csv = cv_table_csv(two, 1);
  CHECK(csv.rfind("index,params,mean_weighted_f1,fold_scores,selected,seed\n", 0) == 0);
}

TEST_CASE("grid ties keep the earlier point") {
  MatrixXd x;
  Labels y;
  blobs(60, 2, 3.0, 63, x, y);
  const auto r = grid_search(Family::LogReg, {{{"l2", 0.01}}, {{"l2", 0.01}}}, x, y, 5, 2);
  CHECK(r.best_index == 0);
}

TEST_CASE("cv folds fit their pipeline on training rows only") {
  MatrixXd x;
  Labels y;
  blobs(120, 30, 0.5, 71, x, y);
  const auto folds = make_cv_folds(x, y, 5, 9, dimred::PipelineKind::A);
  const auto assignment = eval::stratified_kfold(y, 5, 9);
  MatrixXd altered = x;
  for (int i = 0; i < 120; ++i) {
    if (assignment[static_cast<std::size_t>(i)] == 2) altered.row(i) *= 100.0;
  }
  const auto folds2 = make_cv_folds(altered, y, 5, 9, dimred::PipelineKind::A);
  CHECK(folds[2].x_train == folds2[2].x_train);
  CHECK(folds[0].x_train != folds2[0].x_train);
}

TEST_CASE("factory validates hyperparameters and names") {
  CHECK(display_name(Family::Gbt) == "gbt (stand-in)");
  CHECK(family_from_string("random_forest") == Family::RandomForest);
  CHECK_THROWS_AS(family_from_string("svm"), Error);
  ClassifierSpec spec;
  spec.family = Family::Knn;
  spec.params = {{"depth", 3}};
  CHECK_THROWS_AS(make_classifier(spec), Error);
  CHECK(default_grid(Family::LogReg).size() == 4);
  CHECK(default_grid(Family::Knn).size() == 4);
  CHECK(default_grid(Family::RandomForest).size() == 4);
  CHECK(default_grid(Family::Gbt).size() == 8);
}
