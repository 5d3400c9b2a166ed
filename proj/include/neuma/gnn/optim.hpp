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

#include "neuma/gnn/autograd.hpp"

#include <limits>
#include <vector>

namespace neuma::gnn {

struct AdamWOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 0.01;
};

/// Decoupled weight decay: w <- w - lr*wd*w, then the bias-corrected Adam step.
class AdamW {
 public:
  explicit AdamW(std::vector<Parameter*> params, AdamWOptions options = {})
      : params_(std::move(params)), options_(options) {}

  void step(double lr);
  void zero_grad();
  long steps() const { return t_; }

 private:
  std::vector<Parameter*> params_;
  AdamWOptions options_;
  long t_ = 0;
};

/// Multiplies the learning rate by `factor` after `patience` consecutive
/// epochs without a strict improvement of the monitored accuracy, then
/// restarts the count.
class PlateauScheduler {
 public:
  PlateauScheduler(double lr, double factor = 0.5, int patience = 5, double min_lr = 1e-6)
      : lr_(lr), factor_(factor), patience_(patience), min_lr_(min_lr) {}

  /// Feeds one epoch's accuracy; returns true when the rate was reduced.
  bool update(double accuracy);
  double lr() const { return lr_; }
  int stale_epochs() const { return stale_; }

 private:
  double lr_;
  double factor_;
  int patience_;
  double min_lr_;
  double best_ = -std::numeric_limits<double>::infinity();
  int stale_ = 0;
};

/// Stops once the monitored loss has not strictly improved for `patience` epochs.
class EarlyStopping {
 public:
  explicit EarlyStopping(int patience = 15) : patience_(patience) {}

  /// Returns true when `loss` is a new best (the caller snapshots the model).
  bool update(int epoch, double loss);
  bool should_stop() const { return stale_ >= patience_; }
  int best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_; }

 private:
  int patience_;
  double best_ = std::numeric_limits<double>::infinity();
  int best_epoch_ = 0;
  int stale_ = 0;
};

}  // namespace neuma::gnn
