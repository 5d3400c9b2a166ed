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

#include "neuma/gnn/training.hpp"
#include "support.hpp"

#include <random>

using namespace neuma;
using namespace neuma::gnn;

namespace {

/// Random graphs whose class-1 members have node features shifted by `shift`.
std::vector<graph::BrainGraph> shifted_graphs(int n, double shift, std::uint64_t seed) {
  std::vector<graph::BrainGraph> out;
  const Labels y = testing::random_labels(static_cast<std::size_t>(n), 0.5, seed);
  for (int i = 0; i < n; ++i) {
    auto g = testing::random_graph(40, y[static_cast<std::size_t>(i)], seed * 1000 + static_cast<std::uint64_t>(i));
    g.node_features.array() += y[static_cast<std::size_t>(i)] * shift;
    out.push_back(std::move(g));
  }
  out[0].label = 0;
  out[1].label = 1;
  return out;
}

std::vector<int> range(int lo, int hi) {
  std::vector<int> v;
  for (int i = lo; i < hi; ++i) v.push_back(i);
  return v;
}

ArchitectureSpec small(const std::string& name) {
  ArchitectureSpec s;
  s.name = name;
  s.hidden = 16;
  return s;
}

}  // namespace

TEST_CASE("adamw first step by hand") {
  MatrixXd w0(1, 3);
  w0 << 1.0, -2.0, 0.5;
  Parameter p("w", w0);
  p.grad << 0.5, -0.1, 0.0;
  AdamWOptions opt;
  opt.weight_decay = 0.01;
  AdamW adam({&p}, opt);
  adam.step(0.1);
  CHECK(adam.steps() == 1);
  // After bias correction the first moment is g and the second is g^2.
  for (int j = 0; j < 3; ++j) {
    const double g = p.grad(0, j);
    const double expected = w0(0, j) * (1.0 - 0.1 * 0.01) - 0.1 * g / (std::abs(g) + 1e-8);
    CHECK(p.value(0, j) == doctest::Approx(expected).epsilon(1e-14));
  }
  adam.zero_grad();
  CHECK(p.grad.isZero(0.0));
}

TEST_CASE("adamw follows the textbook recursion over many steps") {
  const MatrixXd w0 = testing::random_normal(3, 2, 1);
  Parameter p("w", w0);
  AdamWOptions opt;
  opt.beta1 = 0.8;
  opt.beta2 = 0.95;
  opt.weight_decay = 0.05;
  AdamW adam({&p}, opt);
  MatrixXd w = w0, m = MatrixXd::Zero(3, 2), v = MatrixXd::Zero(3, 2);
  for (int t = 1; t <= 25; ++t) {
    const MatrixXd g = testing::random_normal(3, 2, 100 + static_cast<std::uint64_t>(t));
    const double lr = 0.01 * t;
    p.grad = g;
    adam.step(lr);
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      w(k) -= lr * 0.05 * w(k);
      m(k) = 0.8 * m(k) + 0.2 * g(k);
      v(k) = 0.95 * v(k) + 0.05 * g(k) * g(k);
      const double mh = m(k) / (1.0 - std::pow(0.8, t));
      const double vh = v(k) / (1.0 - std::pow(0.95, t));
      w(k) -= lr * mh / (std::sqrt(vh) + 1e-8);
    }
  }
  CHECK((p.value - w).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("adamw with a zero gradient only decays") {
  const MatrixXd w0 = testing::random_normal(2, 2, 2);
  Parameter p("w", w0);
  AdamWOptions opt;
  opt.weight_decay = 0.0;
  AdamW still({&p}, opt);
  still.step(0.5);
  CHECK(p.value == w0);

  opt.weight_decay = 0.1;
  AdamW decay({&p}, opt);
  for (int i = 0; i < 3; ++i) decay.step(0.2);
  CHECK((p.value - w0 * std::pow(1.0 - 0.02, 3)).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("plateau scheduler halves after five stale epochs and restarts the count") {
  PlateauScheduler s(0.001);
  std::vector<int> halvings;
  for (int e = 1; e <= 12; ++e) {
    if (s.update(0.5)) halvings.push_back(e);
  }
  CHECK(halvings == std::vector<int>{6, 11});
  CHECK(s.lr() == doctest::Approx(0.00025));

  // An improvement at epoch 5 resets the count: the first halving moves to epoch 10.
  PlateauScheduler r(0.001);
  const std::vector<double> acc{0.5, 0.5, 0.5, 0.5, 0.6, 0.6, 0.6, 0.6, 0.6, 0.6};
  halvings.clear();
  for (std::size_t e = 0; e < acc.size(); ++e) {
    if (r.update(acc[e])) halvings.push_back(static_cast<int>(e) + 1);
  }
  CHECK(halvings == std::vector<int>{10});
  CHECK(halvings == testing::plateau_reference(acc, 5));

  PlateauScheduler rising(0.001);
  for (int e = 0; e < 30; ++e) CHECK_FALSE(rising.update(0.01 * e));
  CHECK(rising.lr() == 0.001);

  PlateauScheduler floor(1e-3, 0.5, 1, 4e-4);
  floor.update(0.9);
  CHECK(floor.update(0.9));
  CHECK(floor.lr() == doctest::Approx(5e-4));
  CHECK(floor.update(0.9));
  CHECK(floor.lr() == doctest::Approx(4e-4));
  CHECK_FALSE(floor.update(0.9));
}

TEST_CASE("plateau scheduler matches the reference on random accuracy traces") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> level(0, 6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> acc(60);
    for (auto& a : acc) a = level(rng) / 6.0;
    const int patience = 1 + trial % 7;
    PlateauScheduler s(1.0, 0.5, patience, 0.0);
    std::vector<int> got;
    for (std::size_t e = 0; e < acc.size(); ++e) {
      if (s.update(acc[e])) got.push_back(static_cast<int>(e) + 1);
    }
    CHECK(got == testing::plateau_reference(acc, patience));
    CHECK(s.lr() == std::ldexp(1.0, -static_cast<int>(got.size())));
  }
}

TEST_CASE("early stopping after fifteen epochs without a strict improvement") {
  EarlyStopping stop;
  const std::vector<double> loss{1.0, 0.8, 0.7};
  int stopped = -1;
  for (int e = 1; e <= 40 && stopped < 0; ++e) {
    stop.update(e, e <= 3 ? loss[static_cast<std::size_t>(e - 1)] : 0.7);
    if (stop.should_stop()) stopped = e;
  }
  CHECK(stopped == 18);
  CHECK(stop.best_epoch() == 3);
  CHECK(stop.best_loss() == 0.7);

  EarlyStopping falling;
  for (int e = 1; e <= 100; ++e) {
    CHECK(falling.update(e, 1.0 / e));
    CHECK_FALSE(falling.should_stop());
  }

  std::mt19937_64 rng(6);
  std::uniform_int_distribution<int> level(0, 9);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> trace(80);
    for (auto& l : trace) l = level(rng);
    const int patience = 1 + trial % 15;
    EarlyStopping s(patience);
    int at = -1;
    for (std::size_t e = 0; e < trace.size() && at < 0; ++e) {
      s.update(static_cast<int>(e) + 1, trace[e]);
      if (s.should_stop()) at = static_cast<int>(e) + 1;
    }
    const auto ref = testing::early_stop_reference(trace, patience);
    CHECK(at == ref.stop_epoch);
    CHECK(s.best_epoch() == ref.best_epoch);
  }
}

TEST_CASE("class weights are inverse frequencies with mean one") {
  const auto w = class_weights({0, 0, 0, 1}, ClassWeightMode::Inverse);
  CHECK(w[0] == doctest::Approx(0.5));
  CHECK(w[1] == doctest::Approx(1.5));
  CHECK(class_weights({0, 1, 1, 0}, ClassWeightMode::Inverse) == std::vector<double>{1.0, 1.0});
  CHECK(class_weights({0, 0, 0, 1}, ClassWeightMode::None) == std::vector<double>{1.0, 1.0});
  CHECK_THROWS_AS(class_weights({1, 1}, ClassWeightMode::Inverse), Error);
  CHECK(class_weight_mode_from_string(to_string(ClassWeightMode::None)) == ClassWeightMode::None);
  CHECK_THROWS_AS(class_weight_mode_from_string("balanced"), Error);
}

TEST_CASE("node scaler standardises training nodes only") {
  auto graphs = shifted_graphs(6, 2.0, 7);
  for (auto& g : graphs) g.node_features.col(3).setConstant(4.0);
  graphs[5].node_features *= 1000.0;
  const NodeScaler s = NodeScaler::fit(graphs, {0, 1, 2, 3});
  MatrixXd stacked(4 * 19, 40);
  for (int i = 0; i < 4; ++i) stacked.middleRows(i * 19, 19) = s.apply(graphs[static_cast<std::size_t>(i)]).node_features;
  const RowVectorXd mean = stacked.colwise().mean();
  const RowVectorXd sd = ((stacked.rowwise() - mean).array().square().colwise().mean()).sqrt();
  CHECK(mean.cwiseAbs().maxCoeff() < 1e-12);
  for (Eigen::Index j = 0; j < 40; ++j) {
    if (j == 3) continue;
    CHECK(sd[j] == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(s.scale[3] == 1.0);
  CHECK((NodeScaler::fit(graphs, {0, 1, 2, 3}).mean - NodeScaler::fit(graphs, {3, 2, 1, 0}).mean).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS_AS(NodeScaler::fit(graphs, {}), Error);
  const auto id = NodeScaler::identity(40);
  CHECK(id.apply(graphs[0]).node_features == graphs[0].node_features);
}

TEST_CASE("a zero learning rate and no decay leave the weights at their initial values") {
  const auto graphs = shifted_graphs(24, 0.5, 8);
  TrainConfig config;
  config.lr = 0.0;
  config.max_epochs = 30;
  config.early_stop_patience = 4;
  config.seed = 3;
  const auto trained = train_gnn(graphs, range(0, 16), range(16, 24), small("BaselineGCN"), config);
  const auto fresh = build_architecture(small("BaselineGCN"), 3);
  const auto a = trained.model->parameters(), b = fresh->parameters();
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i]->value == b[i]->value);
  // Constant validation loss: best at epoch 1, stop once patience runs out.
  CHECK(trained.stopped_early);
  CHECK(trained.best_epoch == 1);
  CHECK(trained.log.size() == 5);
  for (const auto& e : trained.log) CHECK(e.val_loss == trained.log.front().val_loss);
}

TEST_CASE("training is deterministic, descends, and restores the best snapshot") {
  const auto graphs = shifted_graphs(40, 0.6, 9);
  TrainConfig config;
  config.lr = 0.01;
  config.max_epochs = 12;
  config.batch_size = 8;
  config.seed = 4;
  const auto train = range(0, 30), val = range(30, 40);
  for (const std::string name : {"BaselineGCN", "HybridModel"}) {
    const auto a = train_gnn(graphs, train, val, small(name), config);
    const auto b = train_gnn(graphs, train, val, small(name), config);
    INFO(name);
    CHECK(training_log_csv(a.log) == training_log_csv(b.log));
    CHECK(a.model->dump() == b.model->dump());
    CHECK(a.log.back().train_loss < a.log.front().train_loss);

    // The returned model reproduces the validation loss logged at its best epoch.
    Labels tr_labels;
    for (int i : train) tr_labels.push_back(graphs[static_cast<std::size_t>(i)].label);
    std::vector<graph::BrainGraph> scaled;
    for (int i : val) scaled.push_back(a.scaler.apply(graphs[static_cast<std::size_t>(i)]));
    const GraphBatch vb = make_batch(scaled, range(0, 10));
    Tape tape;
    const double loss = weighted_cross_entropy(tape.constant(a.model->logits(vb)), vb.y,
                                               class_weights(tr_labels, ClassWeightMode::Inverse))
                            .value()(0, 0);
    CHECK(loss == doctest::Approx(a.log[static_cast<std::size_t>(a.best_epoch - 1)].val_loss).epsilon(1e-12));

    const VectorXd p = predict_proba(a, graphs, val);
    const Labels labels = predict(a, graphs, val);
    for (Eigen::Index i = 0; i < p.size(); ++i) {
      CHECK(p[i] >= 0.0);
      CHECK(p[i] <= 1.0);
      CHECK(labels[static_cast<std::size_t>(i)] == (p[i] > 0.5 ? 1 : 0));
    }
  }
  config.seed = 5;
  const auto c = train_gnn(graphs, train, val, small("BaselineGCN"), config);
  CHECK(training_log_csv(c.log) != training_log_csv(train_gnn(graphs, train, val, small("BaselineGCN"),
                                                               TrainConfig{config.lr, config.weight_decay, 8, 12})
                                                         .log));
}

TEST_CASE("training rejects empty splits and bad settings") {
  const auto graphs = shifted_graphs(10, 0.5, 10);
  TrainConfig config;
  CHECK_THROWS_AS(train_gnn(graphs, {}, {1}, small("BaselineGCN"), config), Error);
  CHECK_THROWS_AS(train_gnn(graphs, {0, 1}, {}, small("BaselineGCN"), config), Error);
  config.batch_size = 0;
  CHECK_THROWS_AS(train_gnn(graphs, {0, 1}, {2}, small("BaselineGCN"), config), Error);
  config.batch_size = 4;
  config.lr = -1.0;
  CHECK_THROWS_AS(train_gnn(graphs, {0, 1}, {2}, small("BaselineGCN"), config), Error);
}
