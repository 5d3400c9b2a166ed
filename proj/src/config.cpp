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

#include "neuma/text_io.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace neuma {

const std::vector<ConfigKey>& config_keys() {
  static const std::vector<ConfigKey> keys = {
      {"data", "store", "segment store directory (manifest.csv, montage.txt, data/)"},
      {"data", "min_duration_s", "segments must be strictly longer than this (seconds)"},
      {"data", "filter_short", "drop short segments before extraction (true/false)"},
      {"features", "bands", "name:low:high list, e.g. delta:0.5:4,theta:4:8"},
      {"features", "filter_order", "Butterworth prototype order"},
      {"features", "welch_segment", "Welch segment length in samples"},
      {"features", "welch_overlap", "Welch overlap fraction in [0, 1)"},
      {"features", "window", "hann or rectangular"},
      {"features", "include_dc", "include the 0 Hz bin in band statistics"},
      {"graph", "edge_transform", "raw, abs or clamp0"},
      {"classical", "pipelines", "subset of A,B,C"},
      {"classical", "models", "subset of logreg,knn,gaussian_nb,random_forest,gbt"},
      {"classical", "stacking", "also run the stacking ensemble"},
      {"classical", "grid_search", "tune hyperparameters on the default grids"},
      {"classical", "cv_folds", "folds for grid search"},
      {"gnn", "architectures", "comma separated architecture names"},
      {"gnn", "hidden", "hidden width of every layer"},
      {"gnn", "heads", "heads of the first BaselineGAT layer"},
      {"gnn", "dropout", "dropout rate of hidden layers"},
      {"gnn", "edge_bias", "GAT logit bias per unit edge weight (0 = off)"},
      {"gnn", "lr", "AdamW learning rate"},
      {"gnn", "weight_decay", "AdamW decoupled weight decay"},
      {"gnn", "batch_size", "graphs per mini-batch"},
      {"gnn", "max_epochs", "epoch cap"},
      {"gnn", "plateau_factor", "learning-rate multiplier on a validation-accuracy plateau"},
      {"gnn", "plateau_patience", "epochs without improvement before reducing the rate"},
      {"gnn", "min_lr", "learning-rate floor"},
      {"gnn", "early_stop_patience", "epochs without validation-loss improvement before stopping"},
      {"gnn", "class_weights", "inverse or none"},
      {"gnn", "scale_node_features", "z-score node features on the training graphs"},
      {"gnn", "folds", "fold models per architecture (majority vote)"},
      {"gnn", "val_fraction", "validation share of each fold's training part"},
      {"experiment", "seed", "master seed"},
      {"experiment", "test_fraction", "held-out test share (stratified)"},
      {"experiment", "jobs", "worker threads"},
      {"experiment", "out", "output directory"},
  };
  return keys;
}

namespace {

bool parse_bool(const std::string& v) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw Error("expected true or false, got '" + v + "'");
}

int parse_int(const std::string& v) {
  const long x = text::parse_long(v);
  return static_cast<int>(x);
}

std::vector<std::string> parse_list(const std::string& v) {
  std::vector<std::string> out;
  for (const auto& part : text::split(v)) {
    const auto t = std::string(text::trim(part));
    if (!t.empty()) out.push_back(t);
  }
  if (out.empty()) throw Error("empty list");
  return out;
}

dsp::Window parse_window(const std::string& v) {
  if (v == "hann") return dsp::Window::Hann;
  if (v == "rectangular") return dsp::Window::Rectangular;
  throw Error("unknown window '" + v + "'");
}

std::string window_name(dsp::Window w) { return w == dsp::Window::Hann ? "hann" : "rectangular"; }

using Setter = std::function<void(RunConfig&, const std::string&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> s = {
      {"data.store", [](RunConfig& c, const std::string& v) { c.store = v; }},
      {"data.min_duration_s", [](RunConfig& c, const std::string& v) { c.features.min_duration_s = text::parse_double(v); }},
      {"data.filter_short", [](RunConfig& c, const std::string& v) { c.features.filter_short = parse_bool(v); }},
      {"features.bands",
       [](RunConfig& c, const std::string& v) {
         std::vector<dsp::FrequencyBand> bands;
         for (const auto& item : parse_list(v)) {
           const auto f = text::split(item, ':');
           if (f.size() != 3) throw Error("band '" + item + "' is not name:low:high");
           bands.push_back({std::string(text::trim(f[0])), text::parse_double(f[1]), text::parse_double(f[2])});
         }
         c.features.bands = std::move(bands);
       }},
      {"features.filter_order", [](RunConfig& c, const std::string& v) { c.features.filter_order = parse_int(v); }},
      {"features.welch_segment", [](RunConfig& c, const std::string& v) { c.features.welch.segment_len = parse_int(v); }},
      {"features.welch_overlap", [](RunConfig& c, const std::string& v) { c.features.welch.overlap = text::parse_double(v); }},
      {"features.window", [](RunConfig& c, const std::string& v) { c.features.welch.window = parse_window(v); }},
      {"features.include_dc", [](RunConfig& c, const std::string& v) { c.features.include_dc = parse_bool(v); }},
      {"graph.edge_transform",
       [](RunConfig& c, const std::string& v) { c.edge_transform = graph::edge_transform_from_string(v); }},
      {"classical.pipelines",
       [](RunConfig& c, const std::string& v) {
         c.pipelines.clear();
         for (const auto& p : parse_list(v)) c.pipelines.push_back(dimred::pipeline_kind_from_string(p));
       }},
      {"classical.models",
       [](RunConfig& c, const std::string& v) {
         c.models.clear();
         for (const auto& m : parse_list(v)) {
           classical::Family f;
           try {
             f = classical::family_from_string(m);
           } catch (const Error&) {
             throw UnknownNameError("unknown model '" + m + "'");
           }
           if (f == classical::Family::Stacking) throw Error("stacking is enabled with classical.stacking");
           c.models.push_back(f);
         }
       }},
      {"classical.stacking", [](RunConfig& c, const std::string& v) { c.stacking = parse_bool(v); }},
      {"classical.grid_search", [](RunConfig& c, const std::string& v) { c.grid_search = parse_bool(v); }},
      {"classical.cv_folds", [](RunConfig& c, const std::string& v) { c.cv_folds = parse_int(v); }},
      {"gnn.architectures",
       [](RunConfig& c, const std::string& v) {
         c.architectures = parse_list(v);
         for (const auto& a : c.architectures) {
           if (!gnn::is_architecture(a)) throw UnknownNameError("unknown architecture '" + a + "'");
         }
       }},
      {"gnn.hidden", [](RunConfig& c, const std::string& v) { c.arch.hidden = parse_int(v); }},
      {"gnn.heads", [](RunConfig& c, const std::string& v) { c.arch.heads = parse_int(v); }},
      {"gnn.dropout", [](RunConfig& c, const std::string& v) { c.arch.dropout = text::parse_double(v); }},
      {"gnn.edge_bias", [](RunConfig& c, const std::string& v) { c.arch.edge_bias = text::parse_double(v); }},
      {"gnn.lr", [](RunConfig& c, const std::string& v) { c.train.lr = text::parse_double(v); }},
      {"gnn.weight_decay", [](RunConfig& c, const std::string& v) { c.train.weight_decay = text::parse_double(v); }},
      {"gnn.batch_size", [](RunConfig& c, const std::string& v) { c.train.batch_size = parse_int(v); }},
      {"gnn.max_epochs", [](RunConfig& c, const std::string& v) { c.train.max_epochs = parse_int(v); }},
      {"gnn.plateau_factor", [](RunConfig& c, const std::string& v) { c.train.plateau_factor = text::parse_double(v); }},
      {"gnn.plateau_patience", [](RunConfig& c, const std::string& v) { c.train.plateau_patience = parse_int(v); }},
      {"gnn.min_lr", [](RunConfig& c, const std::string& v) { c.train.min_lr = text::parse_double(v); }},
      {"gnn.early_stop_patience",
       [](RunConfig& c, const std::string& v) { c.train.early_stop_patience = parse_int(v); }},
      {"gnn.class_weights",
       [](RunConfig& c, const std::string& v) { c.train.class_weights = gnn::class_weight_mode_from_string(v); }},
      {"gnn.scale_node_features",
       [](RunConfig& c, const std::string& v) { c.train.scale_node_features = parse_bool(v); }},
      {"gnn.folds", [](RunConfig& c, const std::string& v) { c.gnn_folds = parse_int(v); }},
      {"gnn.val_fraction", [](RunConfig& c, const std::string& v) { c.val_fraction = text::parse_double(v); }},
      {"experiment.seed",
       [](RunConfig& c, const std::string& v) {
         const long s = text::parse_long(v);
         if (s < 0) throw Error("seed must be non-negative");
         c.seed = static_cast<std::uint64_t>(s);
       }},
      {"experiment.test_fraction", [](RunConfig& c, const std::string& v) { c.test_fraction = text::parse_double(v); }},
      {"experiment.jobs", [](RunConfig& c, const std::string& v) { c.jobs = parse_int(v); }},
      {"experiment.out", [](RunConfig& c, const std::string& v) { c.out = v; }},
  };
  return s;
}

void validate(const RunConfig& c) {
  if (c.features.bands.empty()) throw Error("features.bands: at least one band is required");
  if (c.features.filter_order < 1) throw Error("features.filter_order must be >= 1");
  if (c.features.welch.segment_len < 2) throw Error("features.welch_segment must be >= 2");
  if (!(c.features.welch.overlap >= 0.0 && c.features.welch.overlap < 1.0)) {
    throw Error("features.welch_overlap must be in [0, 1)");
  }
  if (c.cv_folds < 2 || c.gnn_folds < 2) throw Error("fold counts must be >= 2");
  if (!(c.test_fraction > 0.0 && c.test_fraction < 1.0)) throw Error("experiment.test_fraction must be in (0, 1)");
  if (!(c.val_fraction > 0.0 && c.val_fraction < 1.0)) throw Error("gnn.val_fraction must be in (0, 1)");
  if (c.arch.hidden < 1 || c.arch.heads < 1) throw Error("gnn.hidden and gnn.heads must be >= 1");
  if (!(c.arch.dropout >= 0.0 && c.arch.dropout < 1.0)) throw Error("gnn.dropout must be in [0, 1)");
  const auto& t = c.train;
  if (t.lr < 0 || t.weight_decay < 0 || t.batch_size < 1 || t.max_epochs < 1 || t.plateau_patience < 1 ||
      t.early_stop_patience < 1 || !(t.plateau_factor > 0 && t.plateau_factor <= 1) || t.min_lr < 0) {
    throw Error("gnn: training settings out of range");
  }
  if (c.jobs < 1) throw Error("experiment.jobs must be >= 1");
}

}  // namespace

RunConfig parse_config(const std::string& contents, const std::string& origin) {
  RunConfig config;
  std::string section;
  const auto lines = text::split(contents, '\n');
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::string where = origin + ":" + std::to_string(i + 1) + ": ";
    std::string line = lines[i];
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = std::string(text::trim(line));
    if (t.empty()) continue;
    if (t.front() == '[') {
      if (t.back() != ']') throw Error(where + "malformed section header");
      section = std::string(text::trim(std::string_view(t).substr(1, t.size() - 2)));
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw Error(where + "expected key = value");
    const auto key = std::string(text::trim(std::string_view(t).substr(0, eq)));
    const auto value = std::string(text::trim(std::string_view(t).substr(eq + 1)));
    const auto full = section + "." + key;
    const auto it = setters().find(full);
    if (it == setters().end()) throw Error(where + "unknown key '" + key + "' in section [" + section + "]");
    try {
      it->second(config, value);
    } catch (const UnknownNameError& e) {
      throw UnknownNameError(where + e.what());
    } catch (const std::exception& e) {
      throw Error(where + full + ": " + e.what());
    }
  }
  validate(config);
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  return parse_config(text::read_file(path), path.string());
}

std::string canonical_config(const RunConfig& c) {
  std::vector<std::string> lines;
  auto put = [&](const std::string& key, const std::string& value) { lines.push_back(key + "=" + value); };
  auto num = [](double v) { return text::format_double(v); };
  put("data.store", c.store.string());
  put("data.min_duration_s", num(c.features.min_duration_s));
  put("data.filter_short", c.features.filter_short ? "true" : "false");
  std::vector<std::string> bands;
  for (const auto& b : c.features.bands) bands.push_back(b.name + ":" + num(b.low_hz) + ":" + num(b.high_hz));
  put("features.bands", text::join(bands));
  put("features.filter_order", std::to_string(c.features.filter_order));
  put("features.welch_segment", std::to_string(c.features.welch.segment_len));
  put("features.welch_overlap", num(c.features.welch.overlap));
  put("features.window", window_name(c.features.welch.window));
  put("features.include_dc", c.features.include_dc ? "true" : "false");
  put("graph.edge_transform", graph::to_string(c.edge_transform));
  std::vector<std::string> pipelines;
  for (auto p : c.pipelines) pipelines.push_back(dimred::to_string(p));
  put("classical.pipelines", text::join(pipelines));
  std::vector<std::string> models;
  for (auto m : c.models) models.push_back(classical::to_string(m));
  put("classical.models", text::join(models));
  put("classical.stacking", c.stacking ? "true" : "false");
  put("classical.grid_search", c.grid_search ? "true" : "false");
  put("classical.cv_folds", std::to_string(c.cv_folds));
  put("gnn.architectures", text::join(c.architectures));
  put("gnn.hidden", std::to_string(c.arch.hidden));
  put("gnn.heads", std::to_string(c.arch.heads));
  put("gnn.dropout", num(c.arch.dropout));
  put("gnn.edge_bias", num(c.arch.edge_bias));
  put("gnn.lr", num(c.train.lr));
  put("gnn.weight_decay", num(c.train.weight_decay));
  put("gnn.batch_size", std::to_string(c.train.batch_size));
  put("gnn.max_epochs", std::to_string(c.train.max_epochs));
  put("gnn.plateau_factor", num(c.train.plateau_factor));
  put("gnn.plateau_patience", std::to_string(c.train.plateau_patience));
  put("gnn.min_lr", num(c.train.min_lr));
  put("gnn.early_stop_patience", std::to_string(c.train.early_stop_patience));
  put("gnn.class_weights", gnn::to_string(c.train.class_weights));
  put("gnn.scale_node_features", c.train.scale_node_features ? "true" : "false");
  put("gnn.folds", std::to_string(c.gnn_folds));
  put("gnn.val_fraction", num(c.val_fraction));
  put("experiment.seed", std::to_string(c.seed));
  put("experiment.test_fraction", num(c.test_fraction));
  return text::join(lines, "\n") + "\n";
}

std::string config_digest(const RunConfig& config) { return text::hex_digest(canonical_config(config)); }

}  // namespace neuma
