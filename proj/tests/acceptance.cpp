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

// Acceptance run: one PASS/FAIL/SKIP line per criterion, nonzero exit on any failure.

#include "neuma/config.hpp"
#include "neuma/dsp.hpp"
#include "neuma/eval.hpp"
#include "neuma/experiment.hpp"
#include "neuma/features.hpp"
#include "neuma/fixtures.hpp"
#include "neuma/gnn/architectures.hpp"
#include "neuma/gnn/optim.hpp"
#include "neuma/graph.hpp"
#include "neuma/ingest.hpp"
#include "support.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numeric>
#include <random>
#include <sstream>

using namespace neuma;
using neuma::testing::TempDir;

namespace {

enum class Verdict { Pass, Fail, Skip };

struct Outcome {
  Verdict verdict = Verdict::Fail;
  std::string detail;
};

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Collects named sub-checks; the criterion passes when all of them hold.
class Checks {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok) failures_.push_back(what);
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Outcome outcome() const {
    if (failures_.empty()) return {Verdict::Pass, notes_};
    std::string d = "failed: ";
    for (std::size_t i = 0; i < failures_.size(); ++i) d += (i ? ", " : "") + failures_[i];
    if (!notes_.empty()) d += " | " + notes_;
    return {Verdict::Fail, d};
  }

 private:
  std::vector<std::string> failures_;
  std::string notes_;
};

std::string fmt(double v, int digits = 3) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::vector<int> random_permutation(int n, std::mt19937_64& rng) {
  std::vector<int> p(static_cast<std::size_t>(n));
  std::iota(p.begin(), p.end(), 0);
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

// ------------------------------------------------------------------ criteria

Outcome feature_shape() {
  Checks c;
  TempDir dir("acc_features");
  fixtures::write_fixture(dir.path(), fixtures::tiny(3));
  const Timer t;
  const SegmentStore store = load_store(dir.path());
  const features::FeatureConfig config;
  const auto m = features::build_feature_matrix(store, config);
  const double secs = t.seconds();
  c.require(m.values.rows() == 3, "3 rows");
  c.require(m.values.cols() == 760, "760 columns");
  c.require(m.values.allFinite(), "finite values");
  const auto names = features::column_names(store.montage(), config);
  const char* stats[8] = {"fft_mean", "fft_std", "fft_skew", "fft_kurt", "psd_mean", "psd_std", "psd_skew", "psd_kurt"};
  bool ordered = names.size() == 760;
  for (std::size_t ch = 0; ordered && ch < 19; ++ch) {
    for (std::size_t b = 0; b < 5; ++b) {
      for (std::size_t s = 0; s < 8; ++s) {
        const std::string expected = store.montage()[ch] + "_" + config.bands[b].name + "_" + stats[s];
        ordered = ordered && names[(ch * 5 + b) * 8 + s] == expected;
      }
    }
  }
  c.require(ordered, "channel/band/statistic ordering");
  c.require(secs < 1.0, "runtime < 1 s");
  c.note("3 x " + std::to_string(m.values.cols()) + " in " + fmt(secs) + " s");
  return c.outcome();
}

Outcome dsp_suite() {
  Checks c;
  const Timer t;
  const auto gain = [](const dsp::IirFilter& f, double hz) {
    return std::abs(testing::polynomial_response(f.b, f.a, hz, 300.0));
  };
  const auto alpha = dsp::design_butterworth_bandpass(3, 8, 13, 300);
  const auto broad = dsp::design_butterworth_bandpass(3, 0.5, 45, 300);
  c.require(gain(alpha, std::sqrt(104.0)) >= 0.95, "alpha passband");
  c.require(gain(alpha, 0.5) <= 0.01 && gain(alpha, 60.0) <= 0.01, "alpha stopband");
  c.require(gain(broad, 10.0) >= 0.95, "broadband passband");
  for (const auto& band : dsp::standard_bands()) {
    const auto f = dsp::design_butterworth_bandpass(3, band.low_hz, band.high_hz, 300);
    c.require(dsp::poles(f).cwiseAbs().maxCoeff() < 1.0, band.name + " stable");
    c.require(gain(f, std::sqrt(band.low_hz * band.high_hz)) >= 0.95, band.name + " centre gain");
  }

  const VectorXd x = testing::random_normal(1000, 1, 5).col(0);
  const Eigen::VectorXcd spectrum = dsp::fft(x);
  const double parseval = std::abs(spectrum.squaredNorm() / 1000.0 - x.squaredNorm()) / x.squaredNorm();
  c.require(parseval < 1e-9, "Parseval");

  const dsp::Spectrum psd = dsp::welch_psd(testing::sine(10.0, 300.0, 300), 300.0);
  Eigen::Index peak;
  psd.values.maxCoeff(&peak);
  Eigen::Index nearest;
  (psd.frequencies.array() - 10.0).abs().minCoeff(&nearest);
  c.require(peak == nearest, "Welch peak at the bin nearest 10 Hz");

  const VectorXd tone = testing::sine(10.0, 300.0, 900);
  const int lag = testing::xcorr_peak_lag(tone, dsp::filtfilt(alpha, tone), 30);
  c.require(lag == 0, "zero-phase lag");
  const double secs = t.seconds();
  c.require(secs < 5.0, "runtime < 5 s");
  c.note("Parseval " + fmt(parseval) + ", lag " + std::to_string(lag) + ", " + fmt(secs) + " s");
  return c.outcome();
}

Outcome pearson_oracle() {
  Checks c;
  double worst = 0.0;
  bool shape = true;
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const MatrixXd x = testing::random_normal(19, 40, 1000 + seed) * (1.0 + static_cast<double>(seed));
    const MatrixXd a = graph::pearson_adjacency(x);
    worst = std::max(worst, (a - testing::brute_force_pearson(x)).cwiseAbs().maxCoeff());
    shape = shape && a == a.transpose() && a.diagonal() == VectorXd::Ones(19);
  }
  c.require(worst < 1e-12, "max abs diff < 1e-12");
  c.require(shape, "symmetric with unit diagonal");
  c.note("max abs diff " + fmt(worst));
  return c.outcome();
}

/// Width of every hidden layer in the gradient suite.
constexpr Eigen::Index kSuiteHidden = 16;

Outcome gradient_suite() {
  Checks c;
  const Timer t;
  const auto g0 = testing::random_graph(40, 0, 41);
  const auto g1 = testing::random_graph(40, 1, 42);
  const auto batch = gnn::make_batch({&g0, &g1});
  double worst = 0.0;
  long entries = 0, skipped = 0;
  for (const auto& name : gnn::architecture_names()) {
    gnn::ArchitectureSpec spec;
    spec.name = name;
    spec.hidden = kSuiteHidden;
    const auto model = gnn::build_architecture(spec, 7);
    const auto r = testing::check_gradients(*model, batch, {0.8, 1.3}, 1e-5, 11);
    c.require(r.max_rel_error < 1e-4, name + " rel " + fmt(r.max_rel_error) + " at " + r.worst);
    c.require(r.skipped == 0, name + " skipped " + std::to_string(r.skipped) + " entries at kinks");
    worst = std::max(worst, r.max_rel_error);
    entries += r.entries;
    skipped += r.skipped;
  }
  const double secs = t.seconds();
  c.require(secs < 120.0, "runtime < 2 min");
  c.note(std::to_string(entries) + " entries, worst rel " + fmt(worst) + ", hidden " + std::to_string(kSuiteHidden) +
         ", " + fmt(secs) + " s");
  return c.outcome();
}

Outcome permutation_invariance() {
  Checks c;
  std::mt19937_64 rng(77);
  double worst = 0.0;
  for (const auto& name : gnn::architecture_names()) {
    gnn::ArchitectureSpec spec;
    spec.name = name;
    const auto model = gnn::build_architecture(spec, 3);
    const auto g = testing::random_graph(40, 1, 500);
    const MatrixXd base = model->logits(gnn::make_batch({&g}));
    double arch_worst = 0.0;
    for (int k = 0; k < 10; ++k) {
      const auto p = testing::permute_graph(g, random_permutation(19, rng));
      arch_worst = std::max(arch_worst, (model->logits(gnn::make_batch({&p})) - base).cwiseAbs().maxCoeff());
    }
    c.require(arch_worst <= 1e-9, name + " " + fmt(arch_worst));
    worst = std::max(worst, arch_worst);
  }
  c.note("worst logit change " + fmt(worst) + " over 110 permutations");
  return c.outcome();
}

Outcome optimizer_counters() {
  Checks c;
  gnn::PlateauScheduler flat(0.001);
  std::vector<int> halvings;
  for (int e = 1; e <= 12; ++e) {
    if (flat.update(0.5)) halvings.push_back(e);
  }
  c.require(halvings == std::vector<int>{6, 11}, "flat accuracy halves at epochs 6 and 11");
  c.require(halvings == testing::plateau_reference(std::vector<double>(12, 0.5), 5), "plateau reference trace");

  gnn::PlateauScheduler reset(0.001);
  bool halved = false;
  for (double a : {0.5, 0.5, 0.5, 0.5, 0.6}) halved = reset.update(a) || halved;
  c.require(!halved && reset.stale_epochs() == 0, "improvement on stall epoch 5 resets the counter");

  gnn::PlateauScheduler rising(0.001);
  for (int e = 0; e < 100; ++e) rising.update(0.001 * e);
  c.require(rising.lr() == 0.001, "improving accuracy keeps the rate");

  gnn::EarlyStopping stop(15);
  int stopped = -1;
  const std::vector<double> loss = {1.0, 0.9, 0.8};
  std::vector<double> trace;
  for (int e = 1; e <= 100 && stopped < 0; ++e) {
    const double l = e <= 3 ? loss[static_cast<std::size_t>(e - 1)] : 0.8;
    trace.push_back(l);
    stop.update(e, l);
    if (stop.should_stop()) stopped = e;
  }
  const auto ref = testing::early_stop_reference(trace, 15);
  c.require(stopped == 18 && stop.best_epoch() == 3, "flat loss from epoch 3 stops at 18 with best epoch 3");
  c.require(stopped == ref.stop_epoch && stop.best_epoch() == ref.best_epoch, "early-stop reference trace");

  gnn::EarlyStopping falling(15);
  bool early = false;
  for (int e = 1; e <= 100; ++e) {
    falling.update(e, 1.0 / e);
    early = early || falling.should_stop();
  }
  c.require(!early, "decreasing loss never stops");

  // One AdamW step on a scalar with g = 1 from zero state.
  gnn::Parameter p("w", MatrixXd::Constant(1, 1, 2.0));
  p.grad(0, 0) = 1.0;
  gnn::AdamW adam({&p}, {0.9, 0.999, 1e-8, 0.01});
  adam.step(0.1);
  const double expected = 2.0 - 0.1 * 0.01 * 2.0 - 0.1 * 1.0 / (1.0 + 1e-8);
  c.require(std::abs(p.value(0, 0) - expected) < 1e-15, "AdamW single step");
  c.note("halvings 6,11; stop 18 / best 3; AdamW step exact");
  return c.outcome();
}

RunConfig e2e_config(const std::filesystem::path& store) {
  RunConfig config;
  config.store = store;
  config.seed = 42;
  return config;
}

Outcome synthetic_end_to_end() {
  Checks c;
  const Timer t;
  TempDir dir("acc_e2e");
  fixtures::write_fixture(dir / "store", fixtures::separable(7));
  RunConfig config = e2e_config(dir / "store");
  const SegmentStore store = load_store(config.store);
  c.require(store.size() == 400, "400 segments");

  const auto matrix = features::build_feature_matrix(store, config.features);
  config.pipelines = {dimred::PipelineKind::A};
  const auto classical = experiment::run_classical(matrix, config);
  double lr_acc = -1.0, best_base = -1.0, stacking = -1.0;
  for (const auto& r : classical) {
    if (r.model == classical::display_name(classical::Family::Stacking)) {
      stacking = r.metrics.accuracy;
    } else {
      best_base = std::max(best_base, r.metrics.accuracy);
    }
    if (r.model == classical::display_name(classical::Family::LogReg)) lr_acc = r.metrics.accuracy;
  }
  c.require(lr_acc >= 0.90, "logistic regression (A) " + fmt(lr_acc));
  c.require(stacking >= best_base - 0.02, "stacking " + fmt(stacking) + " vs best base " + fmt(best_base));

  const auto graphs = experiment::build_graphs(features::build_node_features(store, config.features), config);
  config.architectures = {"BaselineGCN", "BaselineGAT", "BaselineSAGE"};
  const auto gnn_reports = experiment::run_gnn(graphs, config);
  std::string gnn_note;
  for (const auto& r : gnn_reports) {
    c.require(r.metrics.accuracy >= 0.90, r.model + " voted " + fmt(r.metrics.accuracy));
    gnn_note += " " + r.model + " " + fmt(r.metrics.accuracy);
  }
  const double secs = t.seconds();
  c.require(secs < 600.0, "runtime < 10 min");
  c.note("LR " + fmt(lr_acc) + ", stacking " + fmt(stacking) + ", best base " + fmt(best_base) + ";" + gnn_note +
         "; " + fmt(secs) + " s");
  return c.outcome();
}

Outcome imbalance_pathology() {
  Checks c;
  TempDir dir("acc_imbalance");
  fixtures::write_fixture(dir / "store", fixtures::imbalanced(11));
  RunConfig config = e2e_config(dir / "store");
  const SegmentStore store = load_store(config.store);
  const auto counts = label_counts(store);
  c.note("labels " + std::to_string(counts[0]) + "/" + std::to_string(counts[1]));

  config.pipelines = {dimred::PipelineKind::A};
  config.models = {classical::Family::RandomForest};
  config.stacking = false;
  config.grid_search = false;
  const auto rf = experiment::run_classical(features::build_feature_matrix(store, config.features), config);
  const double rf_recall = rf.front().metrics.per_class[1].recall;
  c.require(rf_recall < 0.1, "random forest class-1 recall " + fmt(rf_recall));

  config.architectures = {"BaselineGCN"};
  config.train.class_weights = gnn::ClassWeightMode::Inverse;
  const auto graphs = experiment::build_graphs(features::build_node_features(store, config.features), config);
  const auto gnn_reports = experiment::run_gnn(graphs, config);
  const double gnn_recall = gnn_reports.front().metrics.per_class[1].recall;
  c.require(gnn_recall >= 0.3, "weighted GNN class-1 recall " + fmt(gnn_recall));
  c.note("RF recall1 " + fmt(rf_recall) + ", weighted BaselineGCN recall1 " + fmt(gnn_recall));
  return c.outcome();
}

Outcome metric_arithmetic() {
  Checks c;
  long mismatches = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const std::size_t n = 10 + seed;
    const Labels t = testing::random_labels(n, 0.3, seed);
    const Labels p = testing::random_labels(n, 0.5, seed + 7777);
    const auto tally = testing::tally(t, p);
    const auto m = eval::metrics(t, p);
    const auto ratio = [](long a, long b) { return b == 0 ? 0.0 : static_cast<double>(a) / static_cast<double>(b); };
    const bool ok = m.confusion[0][0] == tally.tn && m.confusion[0][1] == tally.fp &&
                    m.confusion[1][0] == tally.fn && m.confusion[1][1] == tally.tp &&
                    m.accuracy == ratio(tally.tp + tally.tn, static_cast<long>(n)) &&
                    m.per_class[1].precision == ratio(tally.tp, tally.tp + tally.fp) &&
                    m.per_class[1].recall == ratio(tally.tp, tally.tp + tally.fn) &&
                    m.per_class[0].precision == ratio(tally.tn, tally.tn + tally.fn) &&
                    m.per_class[0].recall == ratio(tally.tn, tally.tn + tally.fp);
    mismatches += ok ? 0 : 1;
  }
  c.require(mismatches == 0, std::to_string(mismatches) + " mismatching fixtures");
  c.note("100 fixtures");
  return c.outcome();
}

/// Runs only when NEUMA_STORE points at a converted release.
Outcome release_ranges() {
  const char* env = std::getenv("NEUMA_STORE");
  if (!env || !std::filesystem::is_directory(env)) {
    return {Verdict::Skip, "NEUMA_STORE not set or not a directory; dataset-dependent check not run"};
  }
  Checks c;
  RunConfig config = e2e_config(env);
  const SegmentStore store = load_store(config.store);
  const auto classical = experiment::run_classical(features::build_feature_matrix(store, config.features), config);
  for (const auto& r : classical) {
    c.require(r.metrics.accuracy >= 0.55 && r.metrics.accuracy <= 0.85,
              r.pipeline + " " + r.model + " " + fmt(r.metrics.accuracy));
  }
  const auto graphs = experiment::build_graphs(features::build_node_features(store, config.features), config);
  for (const auto& r : experiment::run_gnn(graphs, config)) {
    c.require(r.metrics.accuracy >= 0.55 && r.metrics.accuracy <= 0.75, r.model + " " + fmt(r.metrics.accuracy));
  }
  c.note(std::to_string(store.size()) + " segments");
  return c.outcome();
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"feature shape: 760 ordered columns, 3 segments < 1 s", feature_shape},
      {"DSP suite: response bounds, Parseval, Welch peak, zero phase, < 5 s", dsp_suite},
      {"Pearson adjacency vs brute force on 25 fixtures", pearson_oracle},
      {"gradient suite: 11 architectures vs central differences, < 2 min", gradient_suite},
      {"permutation invariance: 10 permutations per architecture", permutation_invariance},
      {"optimizer, scheduler and early-stop counters", optimizer_counters},
      {"synthetic end-to-end on the separable fixture, < 10 min", synthetic_end_to_end},
      {"imbalance pathology: tree ensemble vs weighted GNN recall", imbalance_pathology},
      {"metric arithmetic on 100 random fixtures", metric_arithmetic},
      {"release accuracy ranges (optional)", release_ranges},
  };
  int failures = 0;
  for (const auto& [name, run] : criteria) {
    Outcome o;
    const Timer t;
    try {
      o = run();
    } catch (const std::exception& e) {
      o = {Verdict::Fail, std::string("exception: ") + e.what()};
    }
    const char* tag = o.verdict == Verdict::Pass ? "PASS" : o.verdict == Verdict::Skip ? "SKIP" : "FAIL";
    if (o.verdict == Verdict::Fail) ++failures;
    std::printf("%s  %s  [%s] (%.1f s)\n", tag, name.c_str(), o.detail.c_str(), t.seconds());
    std::fflush(stdout);
  }
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
