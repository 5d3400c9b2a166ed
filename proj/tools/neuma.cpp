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

#include "neuma/config.hpp"
#include "neuma/experiment.hpp"
#include "neuma/features.hpp"
#include "neuma/fixtures.hpp"
#include "neuma/graph.hpp"
#include "neuma/ingest.hpp"
#include "neuma/parallel.hpp"
#include "neuma/text_io.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>
#include <optional>

namespace fs = std::filesystem;
using namespace neuma;

namespace {

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
  std::string out;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "configuration file");
  cmd->add_option("--seed", flags.seed, "override experiment.seed");
  cmd->add_option("--jobs", flags.jobs, "override experiment.jobs")->check(CLI::PositiveNumber);
  cmd->add_option("--out", flags.out, "override experiment.out");
}

std::string keys_footer(const std::vector<std::string>& sections) {
  std::string s = "Config keys read:\n";
  for (const auto& k : config_keys()) {
    if (std::find(sections.begin(), sections.end(), k.section) == sections.end()) continue;
    s += "  [" + k.section + "] " + k.key + " - " + k.help + "\n";
  }
  return s;
}

RunConfig resolve(const CommonFlags& flags) {
  RunConfig c = flags.config.empty() ? parse_config("", "defaults") : load_config(flags.config);
  if (flags.seed) c.seed = *flags.seed;
  if (flags.jobs) c.jobs = *flags.jobs;
  if (!flags.out.empty()) c.out = flags.out;
  return c;
}

SegmentStore open_store(const RunConfig& c) {
  if (c.store.empty()) throw Error("data.store is not set");
  if (!fs::is_directory(c.store)) throw Error("store not found: " + c.store.string());
  return load_store(c.store);
}

void write_config_echo(const RunConfig& c) {
  text::write_file(c.out / "run_config.txt", canonical_config(c) + "digest=" + config_digest(c) + "\n");
}

int cmd_extract(const RunConfig& c) {
  const auto store = open_store(c);
  const auto matrix = features::build_feature_matrix(store, c.features, c.jobs);
  features::write_feature_csv(c.out / "features.csv", matrix);
  const auto nodes = features::build_node_features(store, c.features, c.jobs);
  const auto names = features::node_feature_names(c.features);
  for (const auto& n : nodes) features::write_node_features(c.out / "node_features", n, store.montage(), names);
  write_config_echo(c);
  std::printf("extracted %zu segments x %ld features -> %s\n", matrix.segment_ids.size(),
              static_cast<long>(matrix.values.cols()), (c.out / "features.csv").c_str());
  return 0;
}

std::vector<graph::BrainGraph> load_graphs(const RunConfig& c) {
  const auto store = open_store(c);
  return experiment::build_graphs(features::build_node_features(store, c.features, c.jobs), c);
}

int cmd_graphs(const RunConfig& c) {
  const auto graphs = load_graphs(c);
  for (const auto& g : graphs) graph::write_graph(c.out / "graphs" / (g.segment_id + ".csv"), g);
  write_config_echo(c);
  std::printf("wrote %zu graphs -> %s\n", graphs.size(), (c.out / "graphs").c_str());
  return 0;
}

int cmd_train_classical(const RunConfig& c) {
  const auto store = open_store(c);
  const auto matrix = features::build_feature_matrix(store, c.features, c.jobs);
  const auto reports = experiment::run_classical(matrix, c, c.out);
  write_config_echo(c);
  for (const auto& r : reports) {
    std::printf("%-3s %-16s accuracy %.3f\n", r.pipeline.c_str(), r.model.c_str(), r.metrics.accuracy);
  }
  return 0;
}

int cmd_train_gnn(const RunConfig& c) {
  for (const auto& a : c.architectures) {
    if (!gnn::is_architecture(a)) throw UnknownNameError("unknown architecture '" + a + "'");
  }
  const auto graphs = load_graphs(c);
  const auto reports = experiment::run_gnn(graphs, c, c.out);
  write_config_echo(c);
  for (const auto& r : reports) std::printf("%-22s accuracy %.3f\n", r.model.c_str(), r.metrics.accuracy);
  return 0;
}

int cmd_report(const RunConfig& c) {
  const auto dir = c.out / "reports";
  if (!fs::is_directory(dir)) throw Error("no reports directory under " + c.out.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    // Only per-row files; the rendered tables live next to them.
    if (entry.path().extension() != ".csv" || name.rfind("pipeline_", 0) == 0 || name == "gnn.csv" ||
        name == "stacking.csv") {
      continue;
    }
    files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  std::vector<eval::EvalReport> reports;
  for (const auto& f : files) {
    auto rows = eval::parse_report_csv(text::read_file(f));
    reports.insert(reports.end(), rows.begin(), rows.end());
  }
  if (reports.empty()) throw Error("no report rows found in " + dir.string());
  std::vector<std::string> order;
  for (auto f : {classical::Family::LogReg, classical::Family::Knn, classical::Family::GaussianNb,
                 classical::Family::RandomForest, classical::Family::Gbt, classical::Family::Stacking}) {
    order.push_back(classical::display_name(f));
  }
  for (const auto& a : gnn::architecture_names()) order.push_back(a);
  eval::render_tables(reports, dir, order);
  std::printf("rendered %zu rows -> %s\n", reports.size(), (dir / "summary.md").c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EEG purchase-decision classification: spectral features, classical models and graph networks"};
  app.require_subcommand(1);

  CommonFlags flags;
  auto* extract = app.add_subcommand("extract", "write features.csv and node_features/");
  auto* graphs = app.add_subcommand("graphs", "write graphs/<segment_id>.csv");
  auto* classical_cmd = app.add_subcommand("train-classical", "pipelines x classical models + stacking");
  auto* gnn_cmd = app.add_subcommand("train-gnn", "graph networks with fold voting");
  auto* report = app.add_subcommand("report", "render tables from reports/*.csv");
  auto* fixtures_cmd = app.add_subcommand("fixtures", "synthetic segment stores");

  for (auto* cmd : {extract, graphs, classical_cmd, gnn_cmd, report}) add_common(cmd, flags);
  extract->footer(keys_footer({"data", "features", "experiment"}));
  graphs->footer(keys_footer({"data", "features", "graph", "experiment"}));
  classical_cmd->footer(keys_footer({"data", "features", "classical", "experiment"}));
  gnn_cmd->footer(keys_footer({"data", "features", "graph", "gnn", "experiment"}));
  report->footer(keys_footer({"experiment"}));

  std::string fixture_kind = "separable";
  std::string fixture_out;
  std::uint64_t fixture_seed = 7;
  int fixture_segments = 0;
  auto* generate = fixtures_cmd->add_subcommand("generate", "write a seeded synthetic store");
  fixtures_cmd->require_subcommand(1);
  generate->add_option("--kind", fixture_kind, "separable, imbalanced or tiny")->capture_default_str();
  generate->add_option("--out", fixture_out, "store directory")->required();
  generate->add_option("--seed", fixture_seed, "generator seed")->capture_default_str();
  generate->add_option("--segments", fixture_segments, "override the segment count")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (generate->parsed()) {
      auto options = fixtures::fixture_by_name(fixture_kind, fixture_seed);
      if (fixture_segments > 0) options.n_segments = fixture_segments;
      const auto segments = fixtures::write_fixture(fixture_out, options);
      std::printf("wrote %zu segments -> %s\n", segments.size(), fixture_out.c_str());
      return 0;
    }
    const auto config = resolve(flags);
    if (extract->parsed()) return cmd_extract(config);
    if (graphs->parsed()) return cmd_graphs(config);
    if (classical_cmd->parsed()) return cmd_train_classical(config);
    if (gnn_cmd->parsed()) return cmd_train_gnn(config);
    if (report->parsed()) return cmd_report(config);
  } catch (const UnknownNameError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
