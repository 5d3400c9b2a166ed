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

#include "neuma/gnn/optim.hpp"

#include <algorithm>
#include <cmath>

namespace neuma::gnn {

void AdamW::step(double lr) {
  ++t_;
  const double c1 = 1.0 - std::pow(options_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(options_.beta2, static_cast<double>(t_));
  for (auto* p : params_) {
    p->value *= 1.0 - lr * options_.weight_decay;
    p->m = options_.beta1 * p->m + (1.0 - options_.beta1) * p->grad;
    p->v = options_.beta2 * p->v + (1.0 - options_.beta2) * p->grad.cwiseAbs2();
    p->value.array() -= lr * (p->m.array() / c1) / ((p->v.array() / c2).sqrt() + options_.eps);
  }
}

void AdamW::zero_grad() {
  for (auto* p : params_) p->zero_grad();
}

bool PlateauScheduler::update(double accuracy) {
  if (accuracy > best_) {
    best_ = accuracy;
    stale_ = 0;
    return false;
  }
  if (++stale_ < patience_) return false;
  stale_ = 0;
  const double reduced = std::max(lr_ * factor_, min_lr_);
  const bool changed = reduced < lr_;
  lr_ = reduced;
  return changed;
}

bool EarlyStopping::update(int epoch, double loss) {
  if (loss < best_) {
    best_ = loss;
    best_epoch_ = epoch;
    stale_ = 0;
    return true;
  }
  ++stale_;
  return false;
}

}  // namespace neuma::gnn
