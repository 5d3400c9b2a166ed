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

#include "neuma/dimred.hpp"

#include "neuma/special.hpp"
#include "neuma/text_io.hpp"

#include <Eigen/Jacobi>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace neuma::dimred {

std::string to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Prune: return "prune";
    case TransformKind::Scale: return "scale";
    case TransformKind::Pca: return "pca";
    case TransformKind::TtestSelect: return "ttest_select";
    case TransformKind::ReduceStub: return "reduce_stub";
  }
  return "?";
}

TransformKind transform_kind_from_string(const std::string& name) {
  for (auto k : {TransformKind::Prune, TransformKind::Scale, TransformKind::Pca,
                 TransformKind::TtestSelect, TransformKind::ReduceStub}) {
    if (to_string(k) == name) return k;
  }
  throw Error("unknown transform kind '" + name + "'");
}

MatrixXd FittedTransform::apply(const MatrixXd& x) const {
  if (x.cols() != input_dim) {
    throw Error(to_string(kind) + ": expected " + std::to_string(input_dim) + " columns, got " +
                std::to_string(x.cols()));
  }
  switch (kind) {
    case TransformKind::Prune:
    case TransformKind::TtestSelect: {
      MatrixXd out(x.rows(), static_cast<Eigen::Index>(indices.size()));
      for (std::size_t j = 0; j < indices.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = x.col(indices[j]);
      return out;
    }
    case TransformKind::Scale:
      return ((x.rowwise() - mean).array().rowwise() / scale.array()).matrix();
    case TransformKind::Pca:
    case TransformKind::ReduceStub:
      return (x.rowwise() - mean) * components;
  }
  return x;
}

EigenDecomposition jacobi_eigen(const MatrixXd& symmetric, double tol, int max_sweeps) {
  const Eigen::Index n = symmetric.rows();
  if (symmetric.cols() != n) throw Error("jacobi_eigen: matrix must be square");
  if (!symmetric.allFinite()) throw Error("jacobi_eigen: non-finite entries");
  MatrixXd a = 0.5 * (symmetric + symmetric.transpose());
  MatrixXd v = MatrixXd::Identity(n, n);
  const double target = tol * std::max(1.0, a.norm());

  auto off_norm = [&] {
    double s = 0.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < j; ++i) s += 2.0 * a(i, j) * a(i, j);
    }
    return std::sqrt(s);
  };

  EigenDecomposition out;
  while (off_norm() >= target) {
    if (out.sweeps >= max_sweeps) throw Error("jacobi_eigen: no convergence");
    ++out.sweeps;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        if (a(p, q) == 0.0) continue;
        Eigen::JacobiRotation<double> rot;
        rot.makeJacobi(a, p, q);
        // Rotate the (contiguous) columns, finish the 2x2 pivot block, then
        // mirror the two columns into their rows.
        a.applyOnTheRight(p, q, rot);
        const double app = a(p, p), aqp = a(q, p), apq = a(p, q), aqq = a(q, q);
        a(p, p) = rot.c() * app - rot.s() * aqp;
        a(q, q) = rot.s() * apq + rot.c() * aqq;
        a(p, q) = a(q, p) = 0.0;
        a.row(p) = a.col(p).transpose();
        a.row(q) = a.col(q).transpose();
        v.applyOnTheRight(p, q, rot);
      }
    }
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[static_cast<std::size_t>(k)], order[static_cast<std::size_t>(k)]);
    out.vectors.col(k) = v.col(order[static_cast<std::size_t>(k)]);
  }
  return out;
}

double column_correlation(const Eigen::Ref<const VectorXd>& a, const Eigen::Ref<const VectorXd>& b) {
  const VectorXd ca = a.array() - a.mean();
  const VectorXd cb = b.array() - b.mean();
  const double sa = ca.squaredNorm();
  const double sb = cb.squaredNorm();
  if (sa <= 0.0 || sb <= 0.0) return 0.0;
  return ca.dot(cb) / std::sqrt(sa * sb);
}

FittedTransform correlation_prune_fit(const MatrixXd& x, double threshold) {
  if (x.rows() < 2) throw Error("correlation_prune: need at least 2 rows");
  if (!(threshold > 0.0 && threshold <= 1.0)) throw Error("correlation_prune: threshold must be in (0, 1]");
  const Eigen::Index d = x.cols();

  // Correlation matrix in one product: normalise centred columns, zero-variance columns stay 0.
  MatrixXd z = x.rowwise() - x.colwise().mean();
  for (Eigen::Index j = 0; j < d; ++j) {
    const double norm = z.col(j).norm();
    if (norm > 0.0) z.col(j) /= norm;
    else z.col(j).setZero();
  }
  const MatrixXd corr = z.transpose() * z;

  std::vector<bool> kept(static_cast<std::size_t>(d), true);
  for (Eigen::Index i = 0; i < d; ++i) {
    if (!kept[static_cast<std::size_t>(i)]) continue;
    for (Eigen::Index j = i + 1; j < d; ++j) {
      if (kept[static_cast<std::size_t>(j)] && std::fabs(corr(i, j)) > threshold) {
        kept[static_cast<std::size_t>(j)] = false;
      }
    }
  }
  FittedTransform t;
  t.kind = TransformKind::Prune;
  t.input_dim = static_cast<int>(d);
  for (Eigen::Index j = 0; j < d; ++j) {
    if (kept[static_cast<std::size_t>(j)]) t.indices.push_back(static_cast<int>(j));
  }
  t.output_dim = static_cast<int>(t.indices.size());
  return t;
}

FittedTransform standard_scale_fit(const MatrixXd& x) {
  if (x.rows() < 1) throw Error("standard_scale: empty input");
  FittedTransform t;
  t.kind = TransformKind::Scale;
  t.input_dim = t.output_dim = static_cast<int>(x.cols());
  t.mean = x.colwise().mean();
  t.scale = ((x.rowwise() - t.mean).array().square().colwise().sum() / static_cast<double>(x.rows()))
                .sqrt()
                .matrix();
  for (Eigen::Index j = 0; j < t.scale.size(); ++j) {
    if (t.scale[j] < 1e-12) t.scale[j] = 1.0;
  }
  return t;
}

namespace {

struct PcaBasis {
  RowVectorXd mean;
  MatrixXd vectors;
  VectorXd ratios;
  int rank = 0;
};

PcaBasis pca_basis(const MatrixXd& x) {
  if (x.rows() < 2) throw Error("pca: need at least 2 rows");
  PcaBasis b;
  b.mean = x.colwise().mean();
  const MatrixXd centered = x.rowwise() - b.mean;
  const MatrixXd cov = centered.transpose() * centered / static_cast<double>(x.rows() - 1);
  if (!cov.allFinite()) throw Error("pca: non-finite covariance");
  auto eig = jacobi_eigen(cov);
  const VectorXd values = eig.values.cwiseMax(0.0);
  const double total = values.sum();
  b.ratios = total > 0.0 ? VectorXd(values / total) : VectorXd::Zero(values.size());
  const double cutoff = values.size() ? 1e-12 * values[0] : 0.0;
  b.rank = static_cast<int>((values.array() > cutoff).count());
  // Sign convention: largest-magnitude loading positive.
  for (Eigen::Index k = 0; k < eig.vectors.cols(); ++k) {
    Eigen::Index arg = 0;
    eig.vectors.col(k).cwiseAbs().maxCoeff(&arg);
    if (eig.vectors(arg, k) < 0.0) eig.vectors.col(k) *= -1.0;
  }
  b.vectors = std::move(eig.vectors);
  return b;
}

FittedTransform make_projection(TransformKind kind, PcaBasis basis, int k) {
  FittedTransform t;
  t.kind = kind;
  t.input_dim = static_cast<int>(basis.vectors.rows());
  t.output_dim = k;
  t.mean = std::move(basis.mean);
  t.components = basis.vectors.leftCols(k);
  t.explained_ratio = std::move(basis.ratios);
  return t;
}

}  // namespace

FittedTransform pca_fit(const MatrixXd& x, double variance_threshold) {
  if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
    throw Error("pca: variance threshold must be in (0, 1]");
  }
  auto basis = pca_basis(x);
  int k = 0;
  double cumulative = 0.0;
  while (k < basis.ratios.size() && cumulative < variance_threshold - 1e-12) cumulative += basis.ratios[k++];
  k = std::max(1, std::min(k, std::max(basis.rank, 1)));
  return make_projection(TransformKind::Pca, std::move(basis), k);
}

FittedTransform pca_fit_components(const MatrixXd& x, int n_components) {
  if (n_components < 1) throw Error("pca: n_components must be >= 1");
  auto basis = pca_basis(x);
  const int k = std::max(1, std::min(n_components, basis.rank));
  return make_projection(TransformKind::ReduceStub, std::move(basis), k);
}

TtestResult welch_ttest(const Eigen::Ref<const VectorXd>& column, const Labels& y) {
  double sum[2] = {0, 0};
  double n[2] = {0, 0};
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    sum[c] += column[i];
    n[c] += 1;
  }
  if (n[0] < 2 || n[1] < 2) throw Error("ttest: each class needs at least 2 rows");
  const double mean[2] = {sum[0] / n[0], sum[1] / n[1]};
  double ss[2] = {0, 0};
  for (Eigen::Index i = 0; i < column.size(); ++i) {
    const int c = y[static_cast<std::size_t>(i)];
    ss[c] += (column[i] - mean[c]) * (column[i] - mean[c]);
  }
  const double v0 = ss[0] / (n[0] - 1) / n[0];
  const double v1 = ss[1] / (n[1] - 1) / n[1];
  const double se2 = v0 + v1;
  const double diff = mean[1] - mean[0];

  TtestResult r;
  if (se2 <= 0.0) {
    r.df = n[0] + n[1] - 2;
    if (diff == 0.0) return r;
    r.t = diff > 0 ? INFINITY : -INFINITY;
    r.p = 0.0;
    return r;
  }
  r.t = diff / std::sqrt(se2);
  r.df = se2 * se2 / (v0 * v0 / (n[0] - 1) + v1 * v1 / (n[1] - 1));
  r.p = special::student_t_two_sided_p(r.t, r.df);
  return r;
}

FittedTransform ttest_select_fit(const MatrixXd& x, const Labels& y, int top_k, double alpha) {
  if (static_cast<std::size_t>(x.rows()) != y.size()) throw Error("ttest_select: label count mismatch");
  if (top_k < 1) throw Error("ttest_select: top_k must be >= 1");
  FittedTransform t;
  t.kind = TransformKind::TtestSelect;
  t.input_dim = static_cast<int>(x.cols());
  t.statistics.resize(x.cols());
  t.p_values.resize(x.cols());
  std::vector<int> passing;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    const auto r = welch_ttest(x.col(j), y);
    t.statistics[j] = std::fabs(r.t);
    t.p_values[j] = r.p;
    if (r.p < alpha) passing.push_back(static_cast<int>(j));
  }
  if (passing.empty()) throw Error("ttest_select: no feature passes p < " + text::format_double(alpha, 6));
  std::stable_sort(passing.begin(), passing.end(),
                   [&](int a, int b) { return t.statistics[a] > t.statistics[b]; });
  if (static_cast<int>(passing.size()) > top_k) passing.resize(static_cast<std::size_t>(top_k));
  t.indices = std::move(passing);
  t.output_dim = static_cast<int>(t.indices.size());
  return t;
}

std::string to_string(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::A: return "A";
    case PipelineKind::B: return "B";
    case PipelineKind::C: return "C";
  }
  return "?";
}

PipelineKind pipeline_kind_from_string(const std::string& name) {
  if (name == "A" || name == "a") return PipelineKind::A;
  if (name == "B" || name == "b") return PipelineKind::B;
  if (name == "C" || name == "c") return PipelineKind::C;
  throw Error("unknown pipeline '" + name + "'");
}

std::string pipeline_label(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::A: return "A (correlation + PCA 90%)";
    case PipelineKind::B: return "B (stand-in reducer)";
    case PipelineKind::C: return "C (t-test top 100 + PCA 95%)";
  }
  return "?";
}

Pipeline::Pipeline(PipelineKind kind, std::vector<StepSpec> steps)
    : kind_(kind), steps_(std::move(steps)), reducer_(pca_fit_components) {}

void Pipeline::fit(const MatrixXd& x, const Labels& y) {
  fitted_.clear();
  MatrixXd current = x;
  for (const auto& step : steps_) {
    FittedTransform t;
    switch (step.kind) {
      case TransformKind::Prune: t = correlation_prune_fit(current, step.threshold); break;
      case TransformKind::Scale: t = standard_scale_fit(current); break;
      case TransformKind::Pca: t = pca_fit(current, step.threshold); break;
      case TransformKind::TtestSelect: t = ttest_select_fit(current, y, step.count, step.alpha); break;
      case TransformKind::ReduceStub: t = reducer_(current, step.count); break;
    }
    current = t.apply(current);
    fitted_.push_back(std::move(t));
  }
}

MatrixXd Pipeline::apply(const MatrixXd& x) const {
  if (fitted_.size() != steps_.size()) throw Error("pipeline: apply before fit");
  MatrixXd current = x;
  for (const auto& t : fitted_) current = t.apply(current);
  return current;
}

MatrixXd Pipeline::fit_apply(const MatrixXd& x, const Labels& y) {
  fit(x, y);
  return apply(x);
}

int Pipeline::output_dim() const {
  if (fitted_.empty()) throw Error("pipeline: not fitted");
  return fitted_.back().output_dim;
}

namespace {

template <class Derived>
void put_array(std::ostringstream& out, const char* name, const Eigen::DenseBase<Derived>& a) {
  out << name << ' ' << a.rows() << ' ' << a.cols();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) out << ' ' << text::format_double(a(r, c));
  }
  out << '\n';
}

MatrixXd get_array(std::istringstream& in, const std::string& expected) {
  std::string name;
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  in >> name >> rows >> cols;
  if (!in || name != expected) throw Error("pipeline file: expected '" + expected + "'");
  MatrixXd m(rows, cols);
  std::string tok;
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      in >> tok;
      m(r, c) = text::parse_double(tok);
    }
  }
  return m;
}

}  // namespace

std::string Pipeline::serialize() const {
  std::ostringstream out;
  out << "pipeline " << to_string(kind_) << ' ' << fitted_.size() << '\n';
  for (std::size_t i = 0; i < fitted_.size(); ++i) {
    const auto& t = fitted_[i];
    const auto& s = steps_[i];
    out << "step " << to_string(t.kind) << ' ' << t.input_dim << ' ' << t.output_dim << ' '
        << text::format_double(s.threshold) << ' ' << s.count << ' ' << text::format_double(s.alpha)
        << '\n';
    VectorXd idx(static_cast<Eigen::Index>(t.indices.size()));
    for (std::size_t k = 0; k < t.indices.size(); ++k) idx[static_cast<Eigen::Index>(k)] = t.indices[k];
    put_array(out, "indices", idx);
    put_array(out, "mean", t.mean);
    put_array(out, "scale", t.scale);
    put_array(out, "components", t.components);
    put_array(out, "explained_ratio", t.explained_ratio);
    put_array(out, "statistics", t.statistics);
    put_array(out, "p_values", t.p_values);
  }
  return out.str();
}

Pipeline Pipeline::deserialize(const std::string& text_in) {
  std::istringstream in(text_in);
  std::string word;
  std::string kind_name;
  std::size_t n_steps = 0;
  in >> word >> kind_name >> n_steps;
  if (!in || word != "pipeline") throw Error("pipeline file: bad header");
  std::vector<StepSpec> steps;
  std::vector<FittedTransform> fitted;
  for (std::size_t i = 0; i < n_steps; ++i) {
    std::string kind;
    std::string threshold;
    std::string alpha;
    FittedTransform t;
    StepSpec s{};
    in >> word >> kind >> t.input_dim >> t.output_dim >> threshold >> s.count >> alpha;
    if (!in || word != "step") throw Error("pipeline file: bad step header");
    t.kind = s.kind = transform_kind_from_string(kind);
    s.threshold = text::parse_double(threshold);
    s.alpha = text::parse_double(alpha);
    const VectorXd idx = get_array(in, "indices").reshaped();
    for (Eigen::Index k = 0; k < idx.size(); ++k) t.indices.push_back(static_cast<int>(idx[k]));
    t.mean = get_array(in, "mean");
    t.scale = get_array(in, "scale");
    t.components = get_array(in, "components");
    t.explained_ratio = get_array(in, "explained_ratio").reshaped();
    t.statistics = get_array(in, "statistics").reshaped();
    t.p_values = get_array(in, "p_values").reshaped();
    steps.push_back(s);
    fitted.push_back(std::move(t));
  }
  Pipeline p(pipeline_kind_from_string(kind_name), std::move(steps));
  p.fitted_ = std::move(fitted);
  return p;
}

Pipeline build_pipeline(PipelineKind kind) {
  switch (kind) {
    case PipelineKind::A:
      return Pipeline(kind, {{TransformKind::Prune, 0.9}, {TransformKind::Scale}, {TransformKind::Pca, 0.90}});
    case PipelineKind::B:
      return Pipeline(kind, {{TransformKind::Prune, 0.9}, {TransformKind::Scale},
                             {TransformKind::ReduceStub, 0.0, 50}});
    case PipelineKind::C:
      return Pipeline(kind, {{TransformKind::TtestSelect, 0.0, 100, 0.05}, {TransformKind::Scale},
                             {TransformKind::Pca, 0.95}});
  }
  throw Error("unknown pipeline kind");
}

}  // namespace neuma::dimred
