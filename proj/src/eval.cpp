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

#include "neuma/eval.hpp"

#include "neuma/text_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <random>

namespace neuma::eval {

Confusion confusion_matrix(const Labels& y_true, const Labels& y_pred) {
  if (y_true.size() != y_pred.size()) throw Error("metrics: label vectors differ in length");
  Confusion c{};
  for (std::size_t i = 0; i < y_true.size(); ++i) {
    const int t = y_true[i];
    const int p = y_pred[i];
    if ((t != 0 && t != 1) || (p != 0 && p != 1)) throw Error("metrics: labels must be 0 or 1");
    ++c[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
  }
  return c;
}

namespace {

double ratio(long num, long den) { return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den); }

}  // namespace

Metrics metrics(const Labels& y_true, const Labels& y_pred) {
  Metrics m;
  m.confusion = confusion_matrix(y_true, y_pred);
  m.n = static_cast<long>(y_true.size());
  const auto& c = m.confusion;
  m.accuracy = ratio(c[0][0] + c[1][1], m.n);
  for (std::size_t k = 0; k < 2; ++k) {
    const std::size_t o = 1 - k;
    const long tp = c[k][k];
    const long fp = c[o][k];
    const long fn = c[k][o];
    auto& cm = m.per_class[k];
    cm.precision = ratio(tp, tp + fp);
    cm.recall = ratio(tp, tp + fn);
    cm.f1 = (cm.precision + cm.recall) > 0.0
                ? 2.0 * cm.precision * cm.recall / (cm.precision + cm.recall)
                : 0.0;
    cm.support = tp + fn;
  }
  if (m.n > 0) {
    m.weighted_f1 = (m.per_class[0].f1 * m.per_class[0].support +
                     m.per_class[1].f1 * m.per_class[1].support) /
                    static_cast<double>(m.n);
  }
  return m;
}

std::vector<int> stratified_kfold(const Labels& labels, int k, std::uint64_t seed) {
  if (k < 2) throw Error("stratified_kfold: k must be >= 2");
  if (static_cast<std::size_t>(k) > labels.size()) throw Error("stratified_kfold: k exceeds sample count");
  std::mt19937_64 rng(seed);
  std::vector<int> folds(labels.size(), -1);
  int next = 0;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(static_cast<int>(i));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    for (int i : idx) {
      folds[static_cast<std::size_t>(i)] = next;
      next = (next + 1) % k;
    }
  }
  return folds;
}

std::vector<int> fold_members(const std::vector<int>& folds, int fold) {
  std::vector<int> out;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (folds[i] == fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

std::vector<int> fold_complement(const std::vector<int>& folds, int fold) {
  std::vector<int> out;
  for (std::size_t i = 0; i < folds.size(); ++i) {
    if (folds[i] != fold) out.push_back(static_cast<int>(i));
  }
  return out;
}

Split stratified_split(const Labels& labels, double test_fraction, std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0)) throw Error("stratified_split: fraction must be in (0, 1)");
  std::mt19937_64 rng(seed);
  Split s;
  for (int cls = 0; cls < 2; ++cls) {
    std::vector<int> idx;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == cls) idx.push_back(static_cast<int>(i));
    }
    std::shuffle(idx.begin(), idx.end(), rng);
    const auto n_test = static_cast<std::size_t>(std::lround(test_fraction * static_cast<double>(idx.size())));
    s.test.insert(s.test.end(), idx.begin(), idx.begin() + static_cast<long>(n_test));
    s.train.insert(s.train.end(), idx.begin() + static_cast<long>(n_test), idx.end());
  }
  std::sort(s.train.begin(), s.train.end());
  std::sort(s.test.begin(), s.test.end());
  return s;
}

Labels majority_vote(const std::vector<Labels>& predictions) {
  if (predictions.empty()) throw Error("majority_vote: no predictions");
  const auto n = predictions.front().size();
  for (const auto& p : predictions) {
    if (p.size() != n) throw Error("majority_vote: prediction vectors differ in length");
  }
  Labels out(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t ones = 0;
    for (const auto& p : predictions) ones += p[i] == 1 ? 1 : 0;
    out[i] = 2 * ones > predictions.size() ? 1 : 0;
  }
  return out;
}

namespace {

std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

}  // namespace

std::string report_csv_row(const EvalReport& r) {
  const auto& m = r.metrics;
  std::vector<std::string> f = {
      csv_safe(r.model),
      csv_safe(r.pipeline),
      text::format_double(m.accuracy),
      text::format_double(m.per_class[0].precision),
      text::format_double(m.per_class[0].recall),
      text::format_double(m.per_class[0].f1),
      text::format_double(m.per_class[1].precision),
      text::format_double(m.per_class[1].recall),
      text::format_double(m.per_class[1].f1),
      text::format_double(m.weighted_f1),
      std::to_string(m.confusion[0][0]),
      std::to_string(m.confusion[0][1]),
      std::to_string(m.confusion[1][0]),
      std::to_string(m.confusion[1][1]),
      std::to_string(m.n),
      std::to_string(r.seed),
      csv_safe(r.config_digest),
      csv_safe(r.notes)};
  return text::join(f);
}

std::string report_csv(const std::vector<EvalReport>& reports) {
  std::string out = std::string(kReportHeader) + "\n";
  for (const auto& r : reports) out += report_csv_row(r) + "\n";
  return out;
}

std::vector<EvalReport> parse_report_csv(const std::string& contents) {
  std::vector<EvalReport> out;
  const auto lines = text::split(contents, '\n');
  if (lines.empty() || text::trim(lines.front()) != kReportHeader) throw Error("report: unexpected header");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (text::trim(lines[i]).empty()) continue;
    const auto f = text::split(text::trim(lines[i]));
    if (f.size() != 18) throw Error("report line " + std::to_string(i + 1) + ": expected 18 fields");
    EvalReport r;
    r.model = f[0];
    r.pipeline = f[1];
    auto& m = r.metrics;
    m.accuracy = text::parse_double(f[2]);
    m.per_class[0] = {text::parse_double(f[3]), text::parse_double(f[4]), text::parse_double(f[5]), 0};
    m.per_class[1] = {text::parse_double(f[6]), text::parse_double(f[7]), text::parse_double(f[8]), 0};
    m.weighted_f1 = text::parse_double(f[9]);
    m.confusion[0][0] = text::parse_long(f[10]);
    m.confusion[0][1] = text::parse_long(f[11]);
    m.confusion[1][0] = text::parse_long(f[12]);
    m.confusion[1][1] = text::parse_long(f[13]);
    m.n = text::parse_long(f[14]);
    m.per_class[0].support = m.confusion[0][0] + m.confusion[0][1];
    m.per_class[1].support = m.confusion[1][0] + m.confusion[1][1];
    r.seed = static_cast<std::uint64_t>(std::stoull(f[15]));
    r.config_digest = f[16];
    r.notes = f[17];
    out.push_back(std::move(r));
  }
  return out;
}

const std::vector<std::string>& table_columns() {
  static const std::vector<std::string> cols = {"Accuracy",        "Class 0 Precision", "Class 0 Recall",
                                                "Class 0 F1",      "Class 1 Precision", "Class 1 Recall",
                                                "Class 1 F1"};
  return cols;
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, value);
  return buf;
}

std::string render_markdown_table(const std::vector<EvalReport>& reports,
                                  const std::vector<std::string>& reference_only_rows) {
  std::string out = "| Model | " + text::join(table_columns(), " | ") + " |\n";
  out += "|---|";
  for (std::size_t i = 0; i < table_columns().size(); ++i) out += "---|";
  out += "\n";
  for (const auto& r : reports) {
    const auto& m = r.metrics;
    out += "| " + r.model + " | " + format_fixed(m.accuracy, 3);
    for (const auto& c : m.per_class) {
      out += " | " + format_fixed(c.precision, 2) + " | " + format_fixed(c.recall, 2) + " | " +
             format_fixed(c.f1, 2);
    }
    out += " |\n";
  }
  for (const auto& name : reference_only_rows) {
    out += "| " + name;
    for (std::size_t i = 0; i < table_columns().size(); ++i) out += " | n/a (reference only)";
    out += " |\n";
  }
  return out;
}

void render_tables(const std::vector<EvalReport>& input, const std::filesystem::path& dir,
                   const std::vector<std::string>& model_order) {
  auto rank = [&](const EvalReport& r) {
    const auto it = std::find(model_order.begin(), model_order.end(), r.model);
    return static_cast<std::size_t>(it - model_order.begin());
  };
  auto reports = input;
  std::stable_sort(reports.begin(), reports.end(),
                   [&](const EvalReport& a, const EvalReport& b) { return rank(a) < rank(b); });
  std::map<std::string, std::vector<EvalReport>> groups;
  std::vector<EvalReport> stacking;
  for (const auto& r : reports) {
    if (r.model == "Stacking") {
      auto row = r;
      row.model = r.pipeline;
      stacking.push_back(row);
    } else {
      groups[r.pipeline].push_back(r);
    }
  }

  std::string summary = "# Results summary\n\n";
  for (const auto& [pipeline, rows] : groups) {
    const bool classical = pipeline != "GNN";
    const std::vector<std::string> reference_rows =
        classical ? std::vector<std::string>{"SVM-RBF", "Gaussian Process"} : std::vector<std::string>{};
    const auto table = render_markdown_table(rows, reference_rows);
    const std::string stem = classical ? "pipeline_" + pipeline : "gnn";
    text::write_file(dir / (stem + ".csv"), report_csv(rows));
    text::write_file(dir / (stem + ".md"), table);
    summary += classical ? "## Pipeline " + pipeline + "\n\n" : "## Graph neural networks\n\n";
    summary += table + "\n";
  }
  if (!stacking.empty()) {
    const auto table = render_markdown_table(stacking);
    text::write_file(dir / "stacking.csv", report_csv(stacking));
    text::write_file(dir / "stacking.md", table);
    summary += "## Stacking ensemble (rows are pipelines)\n\n" + table + "\n";
  }
  summary += "gbt (stand-in) is the native gradient-boosted trees family used in place of both "
             "boosting libraries. Pipeline B uses a PCA-50 stand-in reducer.\n";
  text::write_file(dir / "summary.md", summary);
}

}  // namespace neuma::eval
