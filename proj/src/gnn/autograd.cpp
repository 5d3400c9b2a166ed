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

#include "neuma/gnn/autograd.hpp"

#include <cmath>
#include <limits>

namespace neuma::gnn {

Parameter::Parameter(std::string name_, MatrixXd init)
    : name(std::move(name_)),
      value(std::move(init)),
      grad(MatrixXd::Zero(value.rows(), value.cols())),
      m(MatrixXd::Zero(value.rows(), value.cols())),
      v(MatrixXd::Zero(value.rows(), value.cols())) {}

const MatrixXd& Var::value() const { return tape->value(id); }

Var Tape::constant(MatrixXd value) {
  Node n;
  n.value = std::move(value);
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::parameter(Parameter& p) {
  Node n;
  n.value = p.value;
  n.needs_grad = true;
  n.param = &p;
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

Var Tape::record(MatrixXd value, std::vector<int> parents, Backward backward) {
  Node n;
  n.value = std::move(value);
  for (int p : parents) n.needs_grad = n.needs_grad || needs_grad(p);
  if (n.needs_grad) n.backward = std::move(backward);
  nodes_.push_back(std::move(n));
  return {this, static_cast<int>(nodes_.size()) - 1};
}

void Tape::accumulate(int id, const MatrixXd& grad) {
  auto& n = nodes_[static_cast<std::size_t>(id)];
  if (!n.needs_grad) return;
  if (n.grad.size() == 0) {
    n.grad = grad;
  } else {
    n.grad += grad;
  }
}

void Tape::backward(Var loss) {
  if (loss.tape != this) throw Error("backward: variable belongs to another tape");
  if (loss.value().size() != 1) throw Error("backward: loss must be a scalar");
  accumulate(loss.id, MatrixXd::Ones(1, 1));
  for (int i = loss.id; i >= 0; --i) {
    auto& n = nodes_[static_cast<std::size_t>(i)];
    if (n.grad.size() == 0) continue;
    if (n.param) n.param->grad += n.grad;
    if (n.backward) n.backward(*this, n.grad);
  }
}

void Tape::note_branch(std::uint64_t value) {
  branch_digest_ ^= value + 0x9e3779b97f4a7c15ULL + (branch_digest_ << 6) + (branch_digest_ >> 2);
}

namespace {

void check_same_tape(Var a, Var b) {
  if (a.tape != b.tape) throw Error("autograd: variables from different tapes");
}

std::uint64_t mask_digest(const Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>& mask) {
  std::uint64_t h = 1469598103934665603ULL;
  for (Eigen::Index i = 0; i < mask.size(); ++i) {
    h ^= mask.data()[i] ? 1u : 0u;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace

Var matmul(Var a, Var b) {
  check_same_tape(a, b);
  if (a.cols() != b.rows()) throw Error("matmul: dimension mismatch");
  Tape& t = *a.tape;
  return t.record(a.value() * b.value(), {a.id, b.id}, [a, b](Tape& tape, const MatrixXd& g) {
    if (tape.needs_grad(a.id)) tape.accumulate(a.id, g * tape.value(b.id).transpose());
    if (tape.needs_grad(b.id)) tape.accumulate(b.id, tape.value(a.id).transpose() * g);
  });
}

Var add(Var a, Var b) {
  check_same_tape(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw Error("add: shape mismatch");
  return a.tape->record(a.value() + b.value(), {a.id, b.id}, [a, b](Tape& tape, const MatrixXd& g) {
    tape.accumulate(a.id, g);
    tape.accumulate(b.id, g);
  });
}

Var add_row(Var a, Var b) {
  check_same_tape(a, b);
  if (b.rows() != 1 || a.cols() != b.cols()) throw Error("add_row: shape mismatch");
  MatrixXd out = a.value().rowwise() + b.value().row(0);
  return a.tape->record(std::move(out), {a.id, b.id}, [a, b](Tape& tape, const MatrixXd& g) {
    tape.accumulate(a.id, g);
    tape.accumulate(b.id, g.colwise().sum());
  });
}

Var scale(Var a, double s) {
  return a.tape->record(a.value() * s, {a.id}, [a, s](Tape& tape, const MatrixXd& g) { tape.accumulate(a.id, g * s); });
}

Var relu(Var a) {
  const auto mask = (a.value().array() > 0.0).eval();
  a.tape->note_branch(mask_digest(mask));
  MatrixXd out = mask.select(a.value(), 0.0);
  return a.tape->record(std::move(out), {a.id}, [a, mask](Tape& tape, const MatrixXd& g) {
    tape.accumulate(a.id, mask.select(g, 0.0));
  });
}

Var leaky_relu(Var a, double slope) {
  const auto mask = (a.value().array() > 0.0).eval();
  a.tape->note_branch(mask_digest(mask));
  MatrixXd out = mask.select(a.value(), slope * a.value());
  return a.tape->record(std::move(out), {a.id}, [a, mask, slope](Tape& tape, const MatrixXd& g) {
    tape.accumulate(a.id, mask.select(g, slope * g));
  });
}

Var elu(Var a) {
  MatrixXd out = a.value().unaryExpr([](double x) { return x > 0.0 ? x : std::expm1(x); });
  return a.tape->record(std::move(out), {a.id}, [a](Tape& tape, const MatrixXd& g) {
    const MatrixXd& x = tape.value(a.id);
    MatrixXd d = x.unaryExpr([](double v) { return v > 0.0 ? 1.0 : std::exp(v); });
    tape.accumulate(a.id, g.cwiseProduct(d));
  });
}

Var tanh(Var a) {
  MatrixXd out = a.value().array().tanh().matrix();
  const int self = static_cast<int>(a.tape->size());
  return a.tape->record(std::move(out), {a.id}, [a, self](Tape& tape, const MatrixXd& g) {
    const MatrixXd& y = tape.value(self);
    tape.accumulate(a.id, g.cwiseProduct((1.0 - y.array().square()).matrix()));
  });
}

Var dropout(Var a, double p, std::mt19937_64* rng) {
  if (rng == nullptr || p <= 0.0) return a;
  if (p >= 1.0) throw Error("dropout: p must be < 1");
  std::bernoulli_distribution keep(1.0 - p);
  MatrixXd mask(a.rows(), a.cols());
  for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = keep(*rng) ? 1.0 / (1.0 - p) : 0.0;
  MatrixXd out = a.value().cwiseProduct(mask);
  return a.tape->record(std::move(out), {a.id}, [a, mask](Tape& tape, const MatrixXd& g) {
    tape.accumulate(a.id, g.cwiseProduct(mask));
  });
}

Var concat_cols(const std::vector<Var>& parts) {
  if (parts.empty()) throw Error("concat_cols: nothing to concatenate");
  Eigen::Index cols = 0;
  std::vector<int> ids;
  for (const auto& p : parts) {
    check_same_tape(p, parts.front());
    if (p.rows() != parts.front().rows()) throw Error("concat_cols: row mismatch");
    cols += p.cols();
    ids.push_back(p.id);
  }
  MatrixXd out(parts.front().rows(), cols);
  Eigen::Index c = 0;
  for (const auto& p : parts) {
    out.middleCols(c, p.cols()) = p.value();
    c += p.cols();
  }
  return parts.front().tape->record(std::move(out), ids, [parts](Tape& tape, const MatrixXd& g) {
    Eigen::Index col = 0;
    for (const auto& p : parts) {
      tape.accumulate(p.id, g.middleCols(col, p.cols()));
      col += p.cols();
    }
  });
}

namespace {

void check_offsets(const Offsets& offsets, Eigen::Index rows) {
  if (offsets.size() < 2 || offsets.front() != 0 || offsets.back() != rows) {
    throw Error("graph batch: offsets do not cover the node rows");
  }
}

}  // namespace

Var block_left(const BlockList& blocks, const Offsets& offsets, Var a) {
  check_offsets(offsets, a.rows());
  if (blocks->size() + 1 != offsets.size()) throw Error("block_left: block count mismatch");
  MatrixXd out(a.rows(), a.cols());
  for (std::size_t g = 0; g < blocks->size(); ++g) {
    const auto n = offsets[g + 1] - offsets[g];
    if ((*blocks)[g].rows() != n || (*blocks)[g].cols() != n) throw Error("block_left: block size mismatch");
    out.middleRows(offsets[g], n).noalias() = (*blocks)[g] * a.value().middleRows(offsets[g], n);
  }
  return a.tape->record(std::move(out), {a.id}, [a, blocks, offsets](Tape& tape, const MatrixXd& g) {
    MatrixXd ga(g.rows(), g.cols());
    for (std::size_t k = 0; k < blocks->size(); ++k) {
      const auto n = offsets[k + 1] - offsets[k];
      ga.middleRows(offsets[k], n).noalias() = (*blocks)[k].transpose() * g.middleRows(offsets[k], n);
    }
    tape.accumulate(a.id, ga);
  });
}

Var graph_attention(Var wh, Var a_src, Var a_dst, int heads, const Offsets& offsets,
                    const BlockList& edge_weights, double edge_bias) {
  check_same_tape(wh, a_src);
  check_same_tape(wh, a_dst);
  check_offsets(offsets, wh.rows());
  if (heads < 1 || wh.cols() % heads != 0) throw Error("graph_attention: width not divisible by heads");
  const Eigen::Index f = wh.cols() / heads;
  if (a_src.rows() != heads || a_src.cols() != f || a_dst.rows() != heads || a_dst.cols() != f) {
    throw Error("graph_attention: attention vector shape mismatch");
  }
  if (edge_bias != 0.0 && (!edge_weights || edge_weights->size() + 1 != offsets.size())) {
    throw Error("graph_attention: edge weights required for edge bias");
  }
  const std::size_t n_graphs = offsets.size() - 1;
  const MatrixXd& h = wh.value();
  // alpha[g * heads + k]: attention matrix of head k in graph g
  auto alpha = std::make_shared<std::vector<MatrixXd>>(n_graphs * static_cast<std::size_t>(heads));
  auto slope_mask = std::make_shared<std::vector<Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>>>(alpha->size());
  MatrixXd out(h.rows(), h.cols());
  std::uint64_t digest = 0;
  for (std::size_t g = 0; g < n_graphs; ++g) {
    const auto r0 = offsets[g];
    const auto n = offsets[g + 1] - r0;
    if (n < 1) throw Error("graph_attention: empty neighbourhood");
    for (int k = 0; k < heads; ++k) {
      const auto hk = h.block(r0, k * f, n, f);
      const VectorXd s = hk * a_src.value().row(k).transpose();
      const VectorXd t = hk * a_dst.value().row(k).transpose();
      MatrixXd e = s.replicate(1, n) + t.transpose().replicate(n, 1);
      if (edge_bias != 0.0) e += edge_bias * (*edge_weights)[g];
      auto& mask = (*slope_mask)[g * static_cast<std::size_t>(heads) + static_cast<std::size_t>(k)];
      mask = e.array() > 0.0;
      digest = digest * 31 + mask_digest(mask);
      e = mask.select(e, 0.2 * e);
      const VectorXd row_max = e.rowwise().maxCoeff();
      MatrixXd p = (e.colwise() - row_max).array().exp().matrix();
      const VectorXd z = p.rowwise().sum();
      p = z.asDiagonal().inverse() * p;
      out.block(r0, k * f, n, f).noalias() = p * hk;
      (*alpha)[g * static_cast<std::size_t>(heads) + static_cast<std::size_t>(k)] = std::move(p);
    }
  }
  wh.tape->note_branch(digest);
  return wh.tape->record(
      std::move(out), {wh.id, a_src.id, a_dst.id},
      [wh, a_src, a_dst, heads, f, offsets, alpha, slope_mask](Tape& tape, const MatrixXd& grad) {
        const MatrixXd& h = tape.value(wh.id);
        MatrixXd gh = MatrixXd::Zero(h.rows(), h.cols());
        MatrixXd gsrc = MatrixXd::Zero(heads, f);
        MatrixXd gdst = MatrixXd::Zero(heads, f);
        for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
          const auto r0 = offsets[g];
          const auto n = offsets[g + 1] - r0;
          for (int k = 0; k < heads; ++k) {
            const std::size_t slot = g * static_cast<std::size_t>(heads) + static_cast<std::size_t>(k);
            const MatrixXd& p = (*alpha)[slot];
            const auto hk = h.block(r0, k * f, n, f);
            const auto go = grad.block(r0, k * f, n, f);
            gh.block(r0, k * f, n, f).noalias() += p.transpose() * go;
            const MatrixXd dp = go * hk.transpose();
            const VectorXd inner = p.cwiseProduct(dp).rowwise().sum();
            MatrixXd de = p.cwiseProduct(dp - inner.replicate(1, n));
            de = (*slope_mask)[slot].select(de, 0.2 * de);
            const VectorXd ds = de.rowwise().sum();
            const VectorXd dt = de.colwise().sum().transpose();
            gh.block(r0, k * f, n, f).noalias() +=
                ds * tape.value(a_src.id).row(k) + dt * tape.value(a_dst.id).row(k);
            gsrc.row(k).noalias() += ds.transpose() * hk;
            gdst.row(k).noalias() += dt.transpose() * hk;
          }
        }
        tape.accumulate(wh.id, gh);
        tape.accumulate(a_src.id, gsrc);
        tape.accumulate(a_dst.id, gdst);
      });
}

Var batch_norm(Var x, Var gamma, Var beta, BatchNormState& state, bool training) {
  check_same_tape(x, gamma);
  check_same_tape(x, beta);
  const Eigen::Index d = x.cols();
  if (gamma.cols() != d || beta.cols() != d) throw Error("batch_norm: shape mismatch");
  if (state.running_mean.size() != d) {
    state.running_mean = RowVectorXd::Zero(d);
    state.running_var = RowVectorXd::Ones(d);
  }
  const MatrixXd& v = x.value();
  if (!training) {
    const RowVectorXd inv = (state.running_var.array() + state.eps).rsqrt().matrix();
    const MatrixXd xhat = (v.rowwise() - state.running_mean).array().rowwise() * inv.array();
    MatrixXd out = (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() + beta.value().row(0).array();
    return x.tape->record(std::move(out), {x.id, gamma.id, beta.id},
                          [x, gamma, beta, inv, xhat](Tape& tape, const MatrixXd& g) {
                            tape.accumulate(x.id, (g.array().rowwise() *
                                                   (inv.array() * tape.value(gamma.id).row(0).array()))
                                                      .matrix());
                            tape.accumulate(gamma.id, g.cwiseProduct(xhat).colwise().sum());
                            tape.accumulate(beta.id, g.colwise().sum());
                          });
  }
  const auto n = static_cast<double>(v.rows());
  if (v.rows() < 2) throw Error("batch_norm: training mode needs at least 2 rows");
  const RowVectorXd mean = v.colwise().mean();
  const MatrixXd centred = v.rowwise() - mean;
  const RowVectorXd var = centred.array().square().colwise().sum().matrix() / n;
  state.running_mean = (1.0 - state.momentum) * state.running_mean + state.momentum * mean;
  state.running_var = (1.0 - state.momentum) * state.running_var + state.momentum * var * (n / (n - 1.0));
  const RowVectorXd inv = (var.array() + state.eps).rsqrt().matrix();
  const MatrixXd xhat = centred.array().rowwise() * inv.array();
  MatrixXd out = (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() + beta.value().row(0).array();
  return x.tape->record(std::move(out), {x.id, gamma.id, beta.id},
                        [x, gamma, beta, inv, xhat, n](Tape& tape, const MatrixXd& g) {
                          const MatrixXd dxhat = g.array().rowwise() * tape.value(gamma.id).row(0).array();
                          const RowVectorXd sum_d = dxhat.colwise().sum();
                          const RowVectorXd sum_dx = dxhat.cwiseProduct(xhat).colwise().sum();
                          MatrixXd dx = (n * dxhat).rowwise() - sum_d;
                          dx -= (xhat.array().rowwise() * sum_dx.array()).matrix();
                          dx = (dx.array().rowwise() * (inv.array() / n)).matrix();
                          tape.accumulate(x.id, dx);
                          tape.accumulate(gamma.id, g.cwiseProduct(xhat).colwise().sum());
                          tape.accumulate(beta.id, g.colwise().sum());
                        });
}

Var layer_norm(Var x, Var gamma, Var beta, double eps) {
  check_same_tape(x, gamma);
  check_same_tape(x, beta);
  const Eigen::Index d = x.cols();
  if (gamma.cols() != d || beta.cols() != d) throw Error("layer_norm: shape mismatch");
  const MatrixXd& v = x.value();
  const VectorXd mean = v.rowwise().mean();
  const MatrixXd centred = v.colwise() - mean;
  const VectorXd var = centred.array().square().rowwise().sum().matrix() / static_cast<double>(d);
  const VectorXd inv = (var.array() + eps).rsqrt().matrix();
  const MatrixXd xhat = inv.asDiagonal() * centred;
  MatrixXd out = (xhat.array().rowwise() * gamma.value().row(0).array()).rowwise() + beta.value().row(0).array();
  return x.tape->record(std::move(out), {x.id, gamma.id, beta.id},
                        [x, gamma, beta, inv, xhat, d](Tape& tape, const MatrixXd& g) {
                          const auto m = static_cast<double>(d);
                          const MatrixXd dxhat = g.array().rowwise() * tape.value(gamma.id).row(0).array();
                          const VectorXd sum_d = dxhat.rowwise().sum();
                          const VectorXd sum_dx = dxhat.cwiseProduct(xhat).rowwise().sum();
                          MatrixXd dx = (m * dxhat).colwise() - sum_d;
                          dx -= sum_dx.asDiagonal() * xhat;
                          dx = (inv / m).asDiagonal() * dx;
                          tape.accumulate(x.id, dx);
                          tape.accumulate(gamma.id, g.cwiseProduct(xhat).colwise().sum());
                          tape.accumulate(beta.id, g.colwise().sum());
                        });
}

Var mean_pool(Var x, const Offsets& offsets) {
  check_offsets(offsets, x.rows());
  const auto b = static_cast<Eigen::Index>(offsets.size() - 1);
  MatrixXd out(b, x.cols());
  for (Eigen::Index g = 0; g < b; ++g) {
    const auto n = offsets[g + 1] - offsets[g];
    out.row(g) = x.value().middleRows(offsets[g], n).colwise().mean();
  }
  return x.tape->record(std::move(out), {x.id}, [x, offsets](Tape& tape, const MatrixXd& grad) {
    MatrixXd gx(tape.value(x.id).rows(), grad.cols());
    for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
      const auto n = offsets[g + 1] - offsets[g];
      gx.middleRows(offsets[g], n) = (grad.row(static_cast<Eigen::Index>(g)) / static_cast<double>(n)).replicate(n, 1);
    }
    tape.accumulate(x.id, gx);
  });
}

Var max_pool(Var x, const Offsets& offsets) {
  check_offsets(offsets, x.rows());
  const auto b = static_cast<Eigen::Index>(offsets.size() - 1);
  const MatrixXd& v = x.value();
  MatrixXd out(b, v.cols());
  Eigen::MatrixXi winner(b, v.cols());
  std::uint64_t digest = 0;
  for (Eigen::Index g = 0; g < b; ++g) {
    for (Eigen::Index c = 0; c < v.cols(); ++c) {
      Eigen::Index best = offsets[g];
      for (Eigen::Index r = offsets[g] + 1; r < offsets[g + 1]; ++r) {
        // Rows equal up to rounding count as ties, so the winner does not flip on noise.
        const double tie = 64.0 * std::numeric_limits<double>::epsilon() * std::max(std::abs(v(r, c)), std::abs(v(best, c)));
        if (v(r, c) > v(best, c) + tie) best = r;
      }
      winner(g, c) = static_cast<int>(best);
      out(g, c) = v(best, c);
      digest = digest * 1099511628211ULL + static_cast<std::uint64_t>(best);
    }
  }
  x.tape->note_branch(digest);
  return x.tape->record(std::move(out), {x.id}, [x, winner](Tape& tape, const MatrixXd& grad) {
    MatrixXd gx = MatrixXd::Zero(tape.value(x.id).rows(), grad.cols());
    for (Eigen::Index g = 0; g < grad.rows(); ++g) {
      for (Eigen::Index c = 0; c < grad.cols(); ++c) gx(winner(g, c), c) += grad(g, c);
    }
    tape.accumulate(x.id, gx);
  });
}

Var softmax_pool(Var x, Var scores, const Offsets& offsets) {
  check_same_tape(x, scores);
  check_offsets(offsets, x.rows());
  if (scores.rows() != x.rows() || scores.cols() != 1) throw Error("softmax_pool: scores must be n x 1");
  const auto b = static_cast<Eigen::Index>(offsets.size() - 1);
  VectorXd w(x.rows());
  MatrixXd out(b, x.cols());
  for (Eigen::Index g = 0; g < b; ++g) {
    const auto n = offsets[g + 1] - offsets[g];
    const auto s = scores.value().col(0).segment(offsets[g], n);
    VectorXd e = (s.array() - s.maxCoeff()).exp().matrix();
    e /= e.sum();
    w.segment(offsets[g], n) = e;
    out.row(g) = e.transpose() * x.value().middleRows(offsets[g], n);
  }
  return x.tape->record(std::move(out), {x.id, scores.id}, [x, scores, offsets, w](Tape& tape, const MatrixXd& grad) {
    const MatrixXd& v = tape.value(x.id);
    MatrixXd gx(v.rows(), v.cols());
    MatrixXd gs(v.rows(), 1);
    for (std::size_t g = 0; g + 1 < offsets.size(); ++g) {
      const auto r0 = offsets[g];
      const auto n = offsets[g + 1] - r0;
      const auto gg = grad.row(static_cast<Eigen::Index>(g));
      const auto wg = w.segment(r0, n);
      gx.middleRows(r0, n) = wg * gg;
      const VectorXd dw = v.middleRows(r0, n) * gg.transpose();
      gs.col(0).segment(r0, n) = wg.cwiseProduct((dw.array() - wg.dot(dw)).matrix());
    }
    tape.accumulate(x.id, gx);
    tape.accumulate(scores.id, gs);
  });
}

MatrixXd softmax_rows(const MatrixXd& logits) {
  MatrixXd p = (logits.colwise() - logits.rowwise().maxCoeff()).array().exp().matrix();
  const VectorXd z = p.rowwise().sum();
  return z.asDiagonal().inverse() * p;
}

Var weighted_cross_entropy(Var logits, const Labels& labels, const std::vector<double>& class_weights) {
  const MatrixXd& z = logits.value();
  if (z.cols() != 2 || static_cast<std::size_t>(z.rows()) != labels.size()) {
    throw Error("cross_entropy: expected B x 2 logits matching the labels");
  }
  if (class_weights.size() != 2) throw Error("cross_entropy: need two class weights");
  const MatrixXd p = softmax_rows(z);
  double total_w = 0.0;
  double loss = 0.0;
  for (Eigen::Index b = 0; b < z.rows(); ++b) {
    const int y = labels[static_cast<std::size_t>(b)];
    if (y != 0 && y != 1) throw Error("cross_entropy: labels must be 0 or 1");
    const double w = class_weights[static_cast<std::size_t>(y)];
    const double m = z.row(b).maxCoeff();
    const double log_z = m + std::log((z.row(b).array() - m).exp().sum());
    loss -= w * (z(b, y) - log_z);
    total_w += w;
  }
  if (!(total_w > 0.0)) throw Error("cross_entropy: class weights sum to zero");
  MatrixXd out(1, 1);
  out(0, 0) = loss / total_w;
  return logits.tape->record(std::move(out), {logits.id},
                             [logits, labels, class_weights, p, total_w](Tape& tape, const MatrixXd& g) {
                               MatrixXd gz = p;
                               for (Eigen::Index b = 0; b < gz.rows(); ++b) {
                                 const int y = labels[static_cast<std::size_t>(b)];
                                 gz(b, y) -= 1.0;
                                 gz.row(b) *= class_weights[static_cast<std::size_t>(y)] / total_w;
                               }
                               tape.accumulate(logits.id, g(0, 0) * gz);
                             });
}

}  // namespace neuma::gnn
