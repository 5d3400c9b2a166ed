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

#include "neuma/types.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace neuma::eval {

/// confusion[true][pred]
using Confusion = std::array<std::array<long, 2>, 2>;

struct ClassMetrics {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  long support = 0;
};

struct Metrics {
  double accuracy = 0.0;
  std::array<ClassMetrics, 2> per_class{};
  double weighted_f1 = 0.0;
  Confusion confusion{};
  long n = 0;
};

Confusion confusion_matrix(const Labels& y_true, const Labels& y_pred);

/// 0/0 conventions: precision, recall and F1 are 0 when undefined.
Metrics metrics(const Labels& y_true, const Labels& y_pred);

/// Fold id per sample. Each class is shuffled (seeded) and dealt round-robin;
/// dealing continues where the previous class stopped so fold sizes stay even.
std::vector<int> stratified_kfold(const Labels& labels, int k, std::uint64_t seed);

/// Indices of samples with / without the given fold id.
std::vector<int> fold_members(const std::vector<int>& folds, int fold);
std::vector<int> fold_complement(const std::vector<int>& folds, int fold);

struct Split {
  std::vector<int> train;
  std::vector<int> test;
};

/// Per class: round(test_fraction * n_c) shuffled samples go to test. Both
/// index lists are returned in ascending order.
Split stratified_split(const Labels& labels, double test_fraction, std::uint64_t seed);

/// Element-wise modal label; ties (even K) resolve to class 0.
Labels majority_vote(const std::vector<Labels>& predictions);

struct EvalReport {
  std::string model;
  std::string pipeline;
  Metrics metrics;
  std::uint64_t seed = 0;
  std::string config_digest;
  std::string notes;
};

inline constexpr const char* kReportHeader =
    "model,pipeline,accuracy,class0_precision,class0_recall,class0_f1,class1_precision,"
    "class1_recall,class1_f1,weighted_f1,tn,fp,fn,tp,n,seed,config_digest,notes";

std::string report_csv_row(const EvalReport& report);
std::string report_csv(const std::vector<EvalReport>& reports);
std::vector<EvalReport> parse_report_csv(const std::string& text);

/// Column headers of the results tables.
const std::vector<std::string>& table_columns();

/// Markdown table: Model | Accuracy | Class 0 Precision ... Class 1 F1.
/// Accuracy has 3 decimals, per-class metrics 2.
std::string render_markdown_table(const std::vector<EvalReport>& reports,
                                  const std::vector<std::string>& reference_only_rows = {});

/// Per-pipeline CSV and markdown files plus `summary.md` under `dir`. Rows
/// follow `model_order` (models not listed keep their input order, last).
void render_tables(const std::vector<EvalReport>& reports, const std::filesystem::path& dir,
                   const std::vector<std::string>& model_order = {});

std::string format_fixed(double value, int decimals);

}  // namespace neuma::eval
