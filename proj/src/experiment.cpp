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

#include "neuma/experiment.hpp"

#include "neuma/classical.hpp"
#include "neuma/gnn/training.hpp"
#include "neuma/parallel.hpp"
#include "neuma/text_io.hpp"

#include <algorithm>
#include <cctype>

namespace neuma::experiment {

namespace {

MatrixXd take_rows(const MatrixXd& x, const std::vector<int>& rows) {
  MatrixXd out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(rows[i]);
  return out;
}

Labels take(const Labels& y, const std::vector<int>& rows) {
  Labels out;
  for (int r : rows) out.push_back(y[static_cast<std::size_t>(r)]);
  return out;
}

std::string file_stem(std::string s) {
  for (auto& c : s) {
    if (!std::isalnum(static_cast<unsigned char>(c))) c = '_';
  }
  return s;
}

}  // namespace

eval::Split holdout_split(const Labels& labels, const RunConfig& config) {
  return eval::stratified_split(labels, config.test_fraction, config.seed);
}

std::vector<eval::EvalReport> run_classical(const features::FeatureMatrix& features, const RunConfig& config,
                                            const std::filesystem::path& out) {
  const auto split = holdout_split(features.labels, config);
  const MatrixXd x_train = take_rows(features.values, split.train);
  const MatrixXd x_test = take_rows(features.values, split.test);
  const Labels y_train = take(features.labels, split.train);
  const Labels y_test = take(features.labels, split.test);
  const auto digest = config_digest(config);

  std::vector<classical::Family> families = config.models;
  if (config.stacking) families.push_back(classical::Family::Stacking);

  struct Job {
    dimred::PipelineKind pipeline;
    classical::Family family;
  };
  std::vector<Job> jobs;
  for (auto p : config.pipelines) {
    for (auto f : families) jobs.push_back({p, f});
  }

  // Pipeline fits depend only on the rows, so every family shares them.
  struct Prepared {
    std::unique_ptr<dimred::Pipeline> pipeline;
    MatrixXd z_train;
    MatrixXd z_test;
    std::vector<classical::CvFold> folds;
  };
  std::vector<Prepared> prepared(config.pipelines.size());
  parallel_for(prepared.size(), config.jobs, [&](std::size_t i) {
    auto& p = prepared[i];
    p.pipeline = std::make_unique<dimred::Pipeline>(dimred::build_pipeline(config.pipelines[i]));
    p.z_train = p.pipeline->fit_apply(x_train, y_train);
    p.z_test = p.pipeline->apply(x_test);
    if (config.grid_search) {
      p.folds = classical::make_cv_folds(x_train, y_train, config.cv_folds, config.seed, config.pipelines[i]);
    }
  });

  std::vector<eval::EvalReport> reports(jobs.size());
  std::vector<std::string> cv_tables(jobs.size());
  parallel_for(jobs.size(), config.jobs, [&](std::size_t j) {
    const auto [kind, family] = jobs[j];
    const auto& p = prepared[j / families.size()];
    classical::ClassifierSpec spec{family, {}, config.seed};
    const auto grid = classical::default_grid(family);
    if (config.grid_search && grid.size() > 1) {
      const auto search = classical::grid_search(family, grid, p.folds, config.seed);
      spec = search.best;
      cv_tables[j] = classical::cv_table_csv(search, config.seed);
    }
    const auto model = classical::train(spec, p.z_train, y_train);

    auto& r = reports[j];
    r.model = classical::display_name(family);
    r.pipeline = dimred::to_string(kind);
    r.metrics = eval::metrics(y_test, model->predict(p.z_test));
    r.seed = config.seed;
    r.config_digest = digest;
    r.notes = dimred::pipeline_label(kind) + "; dims=" + std::to_string(p.pipeline->output_dim()) + "; " +
              model->summary();
    if (!spec.params.empty()) r.notes += "; " + classical::format_hyperparameters(spec.params);
  });

  if (!out.empty()) {
    for (std::size_t j = 0; j < jobs.size(); ++j) {
      const auto stem = dimred::to_string(jobs[j].pipeline) + "_" + classical::to_string(jobs[j].family);
      text::write_file(out / "reports" / (stem + ".csv"), eval::report_csv({reports[j]}));
      if (!cv_tables[j].empty()) text::write_file(out / "cv" / (stem + ".csv"), cv_tables[j]);
    }
    for (std::size_t i = 0; i < prepared.size(); ++i) {
      text::write_file(out / "pipelines" / (dimred::to_string(config.pipelines[i]) + ".txt"),
                       prepared[i].pipeline->serialize());
    }
  }
  return reports;
}

std::vector<graph::BrainGraph> build_graphs(const std::vector<features::NodeFeatureMatrix>& nodes,
                                            const RunConfig& config) {
  std::vector<graph::BrainGraph> graphs;
  graphs.reserve(nodes.size());
  for (const auto& n : nodes) graphs.push_back(graph::build_graph(n, config.edge_transform));
  return graphs;
}

std::vector<eval::EvalReport> run_gnn(const std::vector<graph::BrainGraph>& graphs, const RunConfig& config,
                                      const std::filesystem::path& out) {
  if (graphs.empty()) throw Error("run_gnn: no graphs");
  Labels labels;
  for (const auto& g : graphs) labels.push_back(g.label);
  const auto split = holdout_split(labels, config);
  const Labels y_train = take(labels, split.train);
  const Labels y_test = take(labels, split.test);
  const auto folds = eval::stratified_kfold(y_train, config.gnn_folds, config.seed);
  const auto digest = config_digest(config);

  for (const auto& name : config.architectures) {
    if (!gnn::is_architecture(name)) throw UnknownNameError("unknown architecture '" + name + "'");
  }

  struct Run {
    std::size_t arch;
    int fold;
  };
  std::vector<Run> runs;
  for (std::size_t a = 0; a < config.architectures.size(); ++a) {
    for (int f = 0; f < config.gnn_folds; ++f) runs.push_back({a, f});
  }

  struct FoldResult {
    Labels test_pred;
    double held_out_acc = 0.0;
    int best_epoch = 0;
    std::string log;
    std::string dump;
  };
  std::vector<FoldResult> results(runs.size());
  parallel_for(runs.size(), config.jobs, [&](std::size_t i) {
    const auto [a, fold] = runs[i];
    // Fold-local positions index into split.train.
    const auto fold_train = eval::fold_complement(folds, fold);
    const auto held_out = eval::fold_members(folds, fold);
    const std::uint64_t seed = config.seed + 1000 * (a + 1) + static_cast<std::uint64_t>(fold);
    const auto inner = eval::stratified_split(take(y_train, fold_train), config.val_fraction, seed);
    std::vector<int> train_idx;
    std::vector<int> val_idx;
    for (int p : inner.train) train_idx.push_back(split.train[static_cast<std::size_t>(fold_train[static_cast<std::size_t>(p)])]);
    for (int p : inner.test) val_idx.push_back(split.train[static_cast<std::size_t>(fold_train[static_cast<std::size_t>(p)])]);
    std::vector<int> held_idx;
    for (int p : held_out) held_idx.push_back(split.train[static_cast<std::size_t>(p)]);

    gnn::ArchitectureSpec arch = config.arch;
    arch.name = config.architectures[a];
    arch.input_dim = graphs.front().n_features();
    gnn::TrainConfig train = config.train;
    train.seed = seed;
    const auto trained = gnn::train_gnn(graphs, train_idx, val_idx, arch, train);

    auto& r = results[i];
    r.test_pred = gnn::predict(trained, graphs, split.test);
    r.held_out_acc = eval::metrics(take(labels, held_idx), gnn::predict(trained, graphs, held_idx)).accuracy;
    r.best_epoch = trained.best_epoch;
    r.log = gnn::training_log_csv(trained.log);
    r.dump = trained.model->dump();
  });

  std::vector<eval::EvalReport> reports;
  for (std::size_t a = 0; a < config.architectures.size(); ++a) {
    std::vector<Labels> votes;
    std::string held;
    for (std::size_t i = 0; i < runs.size(); ++i) {
      if (runs[i].arch != a) continue;
      votes.push_back(results[i].test_pred);
      held += (held.empty() ? "" : "/") + text::format_double(results[i].held_out_acc, 3);
      if (!out.empty()) {
        const auto stem = config.architectures[a] + "_fold" + std::to_string(runs[i].fold);
        text::write_file(out / "logs" / (stem + ".csv"), results[i].log);
        text::write_file(out / "models" / (stem + ".txt"), results[i].dump);
      }
    }
    eval::EvalReport r;
    r.model = config.architectures[a];
    r.pipeline = "GNN";
    r.metrics = eval::metrics(y_test, eval::majority_vote(votes));
    r.seed = config.seed;
    r.config_digest = digest;
    r.notes = "majority vote of " + std::to_string(votes.size()) + " fold models; hidden=" +
              std::to_string(config.arch.hidden) + "; dropout=" + text::format_double(config.arch.dropout, 6) +
              "; class_weights=" + gnn::to_string(config.train.class_weights) + "; fold held-out acc " + held;
    if (!out.empty()) {
      text::write_file(out / "reports" / ("GNN_" + file_stem(r.model) + ".csv"), eval::report_csv({r}));
    }
    reports.push_back(std::move(r));
  }
  return reports;
}

}  // namespace neuma::experiment
