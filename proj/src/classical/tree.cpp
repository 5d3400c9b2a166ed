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

#include "neuma/classical.hpp"

#include "neuma/classical/tree_internal.hpp"

#include <algorithm>
#include <numeric>

namespace neuma::classical {

double Tree::predict(const Eigen::Ref<const RowVectorXd>& row) const {
  int node = 0;
  while (nodes[static_cast<std::size_t>(node)].feature >= 0) {
    const auto& n = nodes[static_cast<std::size_t>(node)];
    node = row[n.feature] <= n.threshold ? n.left : n.right;
  }
  return nodes[static_cast<std::size_t>(node)].value;
}

int Tree::depth() const {
  std::vector<int> d(nodes.size(), 0);
  int best = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    best = std::max(best, d[i]);
    if (nodes[i].feature >= 0) {
      d[static_cast<std::size_t>(nodes[i].left)] = d[i] + 1;
      d[static_cast<std::size_t>(nodes[i].right)] = d[i] + 1;
    }
  }
  return best;
}

int Tree::leaves() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const TreeNode& n) { return n.feature < 0; }));
}

namespace {

struct Split {
  int feature = -1;
  double threshold = 0.0;
  double score = 0.0;
};

class GiniBuilder {
 public:
  GiniBuilder(const MatrixXd& x, const Labels& y, const TreeOptions& options, std::mt19937_64& rng)
      : x_(x), y_(y), options_(options), rng_(rng) {}

  Tree build(std::vector<int> rows) {
    tree_.nodes.clear();
    grow(std::move(rows), 0);
    return std::move(tree_);
  }

 private:
  static double gini_mass(double n, double ones) {
    if (n <= 0) return 0.0;
    const double p = ones / n;
    return n * (1.0 - p * p - (1.0 - p) * (1.0 - p));
  }

  int grow(std::vector<int> rows, int depth) {
    const int id = static_cast<int>(tree_.nodes.size());
    tree_.nodes.emplace_back();
    double ones = 0;
    for (int r : rows) ones += y_[static_cast<std::size_t>(r)];
    const auto n = static_cast<double>(rows.size());
    tree_.nodes[static_cast<std::size_t>(id)].value = ones / n;

    const bool pure = ones == 0 || ones == n;
    const bool depth_capped = options_.max_depth >= 0 && depth >= options_.max_depth;
    if (pure || depth_capped || rows.size() < 2 * static_cast<std::size_t>(options_.min_leaf)) return id;

    const auto split = best_split(rows, ones);
    if (split.feature < 0) return id;

    std::vector<int> left;
    std::vector<int> right;
    for (int r : rows) (x_(r, split.feature) <= split.threshold ? left : right).push_back(r);
    rows.clear();
    rows.shrink_to_fit();
    const int l = grow(std::move(left), depth + 1);
    const int rgt = grow(std::move(right), depth + 1);
    auto& node = tree_.nodes[static_cast<std::size_t>(id)];
    node.feature = split.feature;
    node.threshold = split.threshold;
    node.left = l;
    node.right = rgt;
    return id;
  }

  Split best_split(const std::vector<int>& rows, double ones) {
    const auto d = static_cast<int>(x_.cols());
    std::vector<int> features(static_cast<std::size_t>(d));
    std::iota(features.begin(), features.end(), 0);
    const int budget = options_.max_features > 0 ? std::min(options_.max_features, d) : d;
    if (budget < d) std::shuffle(features.begin(), features.end(), rng_);

    Split best;
    best.score = std::numeric_limits<double>::infinity();
    int visited = 0;
    std::vector<int> order = rows;
    const auto n = static_cast<double>(rows.size());
    const auto min_leaf = static_cast<std::size_t>(options_.min_leaf);
    for (int f : features) {
      // Keep drawing features past the budget only while no valid split exists.
      if (visited >= budget && best.feature >= 0) break;
      std::sort(order.begin(), order.end(), [&](int a, int b) { return x_(a, f) < x_(b, f); });
      if (x_(order.front(), f) == x_(order.back(), f)) continue;
      ++visited;
      double left_ones = 0;
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        left_ones += y_[static_cast<std::size_t>(order[i])];
        const double v = x_(order[i], f);
        const double next = x_(order[i + 1], f);
        if (v == next) continue;
        const std::size_t n_left = i + 1;
        if (n_left < min_leaf || order.size() - n_left < min_leaf) continue;
        const double score = gini_mass(static_cast<double>(n_left), left_ones) +
                             gini_mass(n - static_cast<double>(n_left), ones - left_ones);
        if (score < best.score) {
          best.score = score;
          best.feature = f;
          best.threshold = 0.5 * (v + next);
          if (best.threshold >= next) best.threshold = v;
        }
      }
    }
    return best;
  }

  const MatrixXd& x_;
  const Labels& y_;
  const TreeOptions& options_;
  std::mt19937_64& rng_;
  Tree tree_;
};

}  // namespace

Tree fit_gini_tree(const MatrixXd& x, const Labels& y, const std::vector<int>& rows,
                   const TreeOptions& options, std::mt19937_64& rng) {
  if (rows.empty()) throw Error("tree: no rows");
  GiniBuilder builder(x, y, options, rng);
  return builder.build(rows);
}

std::vector<std::vector<int>> presort_columns(const MatrixXd& x) {
  std::vector<std::vector<int>> sorted(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index f = 0; f < x.cols(); ++f) {
    auto& order = sorted[static_cast<std::size_t>(f)];
    order.resize(static_cast<std::size_t>(x.rows()));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return x(a, f) < x(b, f); });
  }
  return sorted;
}

Tree fit_newton_tree_presorted(const MatrixXd& x, const VectorXd& grad, const VectorXd& hess,
                               const std::vector<int>& rows, const TreeOptions& options,
                               const std::vector<std::vector<int>>& sorted) {
  if (rows.empty()) throw Error("tree: no rows");
  std::vector<char> seen(static_cast<std::size_t>(x.rows()), 0);
  for (int r : rows) {
    if (seen[static_cast<std::size_t>(r)]++) throw Error("newton tree: rows must be unique");
  }
  const double lambda = options.l2;
  Tree tree;
  // Current node of every row; -1 = not in a growing node.
  std::vector<int> node_of(static_cast<std::size_t>(x.rows()), -1);
  for (int r : rows) node_of[static_cast<std::size_t>(r)] = 0;

  struct Stats {
    double g = 0, h = 0;
    long count = 0;
  };
  auto leaf_value = [&](const Stats& s) { return -s.g / (s.h + lambda); };
  auto score = [&](double g, double h) { return g * g / (h + lambda); };

  tree.nodes.emplace_back();
  std::vector<int> frontier = {0};
  std::vector<Stats> stats(1);
  for (int r : rows) {
    stats[0].g += grad[r];
    stats[0].h += hess[r];
    ++stats[0].count;
  }
  tree.nodes[0].value = leaf_value(stats[0]);

  for (int depth = 0; !frontier.empty(); ++depth) {
    if (options.max_depth >= 0 && depth >= options.max_depth) break;
    // frontier position of each node id
    std::vector<int> slot(tree.nodes.size(), -1);
    for (std::size_t i = 0; i < frontier.size(); ++i) slot[static_cast<std::size_t>(frontier[i])] = static_cast<int>(i);

    std::vector<Split> best(frontier.size());
    for (auto& b : best) b.score = 1e-12;  // require strictly positive gain
    std::vector<Stats> left(frontier.size());
    std::vector<double> last_value(frontier.size());
    std::vector<bool> has_last(frontier.size());

    for (std::size_t f = 0; f < sorted.size(); ++f) {
      std::fill(left.begin(), left.end(), Stats{});
      std::fill(has_last.begin(), has_last.end(), false);
      for (int r : sorted[f]) {
        const int node = node_of[static_cast<std::size_t>(r)];
        if (node < 0) continue;
        const int s = slot[static_cast<std::size_t>(node)];
        if (s < 0) continue;
        const double v = x(r, static_cast<Eigen::Index>(f));
        auto& acc = left[static_cast<std::size_t>(s)];
        if (has_last[static_cast<std::size_t>(s)] && v > last_value[static_cast<std::size_t>(s)]) {
          const auto& total = stats[static_cast<std::size_t>(s)];
          const Stats right{total.g - acc.g, total.h - acc.h, total.count - acc.count};
          if (acc.count >= options.min_leaf && right.count >= options.min_leaf &&
              acc.h >= options.min_hessian && right.h >= options.min_hessian) {
            const double gain = score(acc.g, acc.h) + score(right.g, right.h) - score(total.g, total.h);
            auto& b = best[static_cast<std::size_t>(s)];
            if (gain > b.score) {
              b.score = gain;
              b.feature = static_cast<int>(f);
              b.threshold = 0.5 * (last_value[static_cast<std::size_t>(s)] + v);
              if (b.threshold >= v) b.threshold = last_value[static_cast<std::size_t>(s)];
            }
          }
        }
        acc.g += grad[r];
        acc.h += hess[r];
        ++acc.count;
        last_value[static_cast<std::size_t>(s)] = v;
        has_last[static_cast<std::size_t>(s)] = true;
      }
    }

    std::vector<int> next_frontier;
    std::vector<Stats> next_stats;
    for (std::size_t i = 0; i < frontier.size(); ++i) {
      const auto& b = best[i];
      const int id = frontier[i];
      if (b.feature < 0) continue;
      const int l = static_cast<int>(tree.nodes.size());
      tree.nodes.emplace_back();
      tree.nodes.emplace_back();
      auto& node = tree.nodes[static_cast<std::size_t>(id)];
      node.feature = b.feature;
      node.threshold = b.threshold;
      node.left = l;
      node.right = l + 1;
      next_frontier.push_back(l);
      next_frontier.push_back(l + 1);
      next_stats.resize(next_frontier.size());
    }
    if (next_frontier.empty()) break;

    std::vector<int> stat_slot(tree.nodes.size(), -1);
    for (std::size_t i = 0; i < next_frontier.size(); ++i) stat_slot[static_cast<std::size_t>(next_frontier[i])] = static_cast<int>(i);
    for (int r : rows) {
      auto& node = node_of[static_cast<std::size_t>(r)];
      if (node < 0) continue;
      const auto& parent = tree.nodes[static_cast<std::size_t>(node)];
      if (parent.feature < 0) {
        node = -1;  // settled leaf
        continue;
      }
      node = x(r, parent.feature) <= parent.threshold ? parent.left : parent.right;
      auto& st = next_stats[static_cast<std::size_t>(stat_slot[static_cast<std::size_t>(node)])];
      st.g += grad[r];
      st.h += hess[r];
      ++st.count;
    }
    for (std::size_t i = 0; i < next_frontier.size(); ++i) {
      tree.nodes[static_cast<std::size_t>(next_frontier[i])].value = leaf_value(next_stats[i]);
    }
    frontier = std::move(next_frontier);
    stats = std::move(next_stats);
  }
  return tree;
}

Tree fit_newton_tree(const MatrixXd& x, const VectorXd& grad, const VectorXd& hess,
                     const std::vector<int>& rows, const TreeOptions& options) {
  return fit_newton_tree_presorted(x, grad, hess, rows, options, presort_columns(x));
}

}  // namespace neuma::classical
