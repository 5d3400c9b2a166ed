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

#include "neuma/gnn/architectures.hpp"

#include "neuma/text_io.hpp"

#include <algorithm>
#include <sstream>

namespace neuma::gnn {

const std::vector<std::string>& architecture_names() {
  static const std::vector<std::string> names = {
      "BaselineGCN",    "BaselineGAT", "BaselineSAGE", "ResidualGCN",          "HybridModel", "RegularizedGNN",
      "LightweightGCN", "BalancedGAT", "MultiGNN",     "ResidualAttentionGNN", "DeepGNN"};
  return names;
}

bool is_architecture(const std::string& name) {
  const auto& names = architecture_names();
  return std::find(names.begin(), names.end(), name) != names.end();
}

Var Model::forward(Tape& tape, const GraphBatch& batch, bool training, std::mt19937_64* rng) const {
  if (batch.x.cols() != spec_.input_dim) {
    throw Error(spec_.name + ": expected " + std::to_string(spec_.input_dim) + " node features, got " +
                std::to_string(batch.x.cols()));
  }
  ForwardContext ctx;
  ctx.training = training;
  ctx.rng = rng;
  ctx.dropout = spec_.dropout;
  ctx.edge_bias = spec_.edge_bias;
  return run(tape, batch, tape.constant(batch.x), ctx);
}

MatrixXd Model::logits(const GraphBatch& batch) const {
  Tape tape;
  return forward(tape, batch, false, nullptr).value();
}

ModelState Model::state() const {
  ModelState s;
  for (const auto* p : store_.parameters()) s.values.push_back(p->value);
  for (const auto& b : store_.buffers()) {
    s.running_mean.push_back(b->running_mean);
    s.running_var.push_back(b->running_var);
  }
  return s;
}

void Model::load_state(const ModelState& s) {
  const auto params = store_.parameters();
  if (s.values.size() != params.size() || s.running_mean.size() != store_.buffers().size()) {
    throw Error(spec_.name + ": snapshot does not match the model");
  }
  for (std::size_t i = 0; i < params.size(); ++i) params[i]->value = s.values[i];
  for (std::size_t i = 0; i < store_.buffers().size(); ++i) {
    store_.buffers()[i]->running_mean = s.running_mean[i];
    store_.buffers()[i]->running_var = s.running_var[i];
  }
}

std::string Model::dump() const {
  std::ostringstream out;
  out << "# architecture=" << spec_.name << " hidden=" << spec_.hidden << " input_dim=" << spec_.input_dim
      << " parameters=" << parameter_count() << "\n";
  auto block = [&](const std::string& name, const MatrixXd& m) {
    out << name << ' ' << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      for (Eigen::Index j = 0; j < m.cols(); ++j) out << (j ? " " : "") << text::format_double(m(i, j));
      out << '\n';
    }
  };
  for (const auto* p : store_.parameters()) block(p->name, p->value);
  for (std::size_t i = 0; i < store_.buffers().size(); ++i) {
    block("batch_norm" + std::to_string(i) + ".running_mean", store_.buffers()[i]->running_mean);
    block("batch_norm" + std::to_string(i) + ".running_var", store_.buffers()[i]->running_var);
  }
  return out.str();
}

namespace {

using Index = Eigen::Index;

std::string dims(Index in, Index out) { return "(" + std::to_string(in) + " -> " + std::to_string(out) + ")"; }

class BaselineGcn final : public Model {
 public:
  BaselineGcn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        conv1_(store_, "gcn1", s.input_dim, s.hidden),
        conv2_(store_, "gcn2", s.hidden, s.hidden),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"GCN " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "GCN " + dims(spec_.hidden, spec_.hidden) + " + ReLU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(conv1_(t, b, x)), ctx);
    x = apply_dropout(relu(conv2_(t, b, x)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  GcnConv conv1_, conv2_;
  Linear out_;
};

class BaselineGat final : public Model {
 public:
  BaselineGat(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        conv1_(store_, "gat1", s.input_dim, s.hidden, s.heads, true),
        conv2_(store_, "gat2", s.hidden * s.heads, s.hidden, 1, false),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"GAT " + std::to_string(spec_.heads) + " heads concat " + dims(spec_.input_dim, spec_.hidden * spec_.heads) +
                " + ELU + Dropout",
            "GAT 1 head " + dims(spec_.hidden * spec_.heads, spec_.hidden) + " + ELU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(elu(conv1_(t, b, x, ctx)), ctx);
    x = apply_dropout(elu(conv2_(t, b, x, ctx)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  GatConv conv1_, conv2_;
  Linear out_;
};

class BaselineSage final : public Model {
 public:
  BaselineSage(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        conv1_(store_, "sage1", s.input_dim, s.hidden),
        conv2_(store_, "sage2", s.hidden, s.hidden),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"SAGE mean " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "SAGE mean " + dims(spec_.hidden, spec_.hidden) + " + ReLU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(conv1_(t, b, x)), ctx);
    x = apply_dropout(relu(conv2_(t, b, x)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  SageConv conv1_, conv2_;
  Linear out_;
};

class ResidualGcn final : public Model {
 public:
  ResidualGcn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        conv1_(store_, "gcn1", s.input_dim, s.hidden),
        conv2_(store_, "gcn2", s.hidden, s.hidden),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"GCN " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "GCN " + dims(spec_.hidden, spec_.hidden) + " + ReLU, skip from layer 1, Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    Var h1 = apply_dropout(relu(conv1_(t, b, x)), ctx);
    Var h2 = apply_dropout(add(relu(conv2_(t, b, h1)), h1), ctx);
    return out_(t, mean_pool(h2, b.offsets));
  }

 private:
  GcnConv conv1_, conv2_;
  Linear out_;
};

class HybridModel final : public Model {
 public:
  HybridModel(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        input_(store_, "mlp", s.input_dim, s.hidden),
        gcn1_(store_, "gcn1", s.hidden, s.hidden),
        bn1_(store_, "bn1", s.hidden),
        gat_(store_, "gat", s.hidden, s.hidden, 1, true),
        bn2_(store_, "bn2", s.hidden),
        gcn2_(store_, "gcn2", s.hidden, s.hidden),
        bn3_(store_, "bn3", s.hidden),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    const auto h = dims(spec_.hidden, spec_.hidden);
    return {"Linear " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "GCN " + h + " + BatchNorm + ReLU + Dropout",
            "GAT 1 head " + h + " + BatchNorm + ELU + Dropout",
            "GCN " + h + " + BatchNorm + ReLU + Dropout",
            "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(input_(t, x)), ctx);
    x = apply_dropout(relu(bn1_(t, gcn1_(t, b, x), ctx)), ctx);
    x = apply_dropout(elu(bn2_(t, gat_(t, b, x, ctx), ctx)), ctx);
    x = apply_dropout(relu(bn3_(t, gcn2_(t, b, x), ctx)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  Linear input_;
  GcnConv gcn1_;
  BatchNorm bn1_;
  GatConv gat_;
  BatchNorm bn2_;
  GcnConv gcn2_;
  BatchNorm bn3_;
  Linear out_;
};

class RegularizedGnn final : public Model {
 public:
  RegularizedGnn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        gcn_(store_, "gcn", s.input_dim, s.hidden),
        ln1_(store_, "ln1", s.hidden),
        gat_(store_, "gat", s.hidden, s.hidden, 1, true),
        ln2_(store_, "ln2", s.hidden),
        fc1_(store_, "classifier1", s.hidden, s.hidden),
        fc2_(store_, "classifier2", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"GCN " + dims(spec_.input_dim, spec_.hidden) + " + LayerNorm + ReLU + Dropout",
            "GAT 1 head " + dims(spec_.hidden, spec_.hidden) + " + LayerNorm + ELU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, spec_.hidden) + " + ReLU + Dropout", "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(ln1_(t, gcn_(t, b, x))), ctx);
    x = apply_dropout(elu(ln2_(t, gat_(t, b, x, ctx))), ctx);
    Var g = apply_dropout(relu(fc1_(t, mean_pool(x, b.offsets))), ctx);
    return fc2_(t, g);
  }

 private:
  GcnConv gcn_;
  LayerNorm ln1_;
  GatConv gat_;
  LayerNorm ln2_;
  Linear fc1_, fc2_;
};

class LightweightGcn final : public Model {
 public:
  LightweightGcn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed), conv_(store_, "gcn", s.input_dim, s.hidden), out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"GCN " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(conv_(t, b, x)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  GcnConv conv_;
  Linear out_;
};

class BalancedGat final : public Model {
 public:
  BalancedGat(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        input_(store_, "mlp", s.input_dim, s.hidden),
        gat_(store_, "gat", s.hidden, s.hidden, 1, true),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    return {"Linear " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "GAT 1 head " + dims(spec_.hidden, spec_.hidden) + " + ELU + Dropout", "mean pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(input_(t, x)), ctx);
    x = apply_dropout(elu(gat_(t, b, x, ctx)), ctx);
    return out_(t, mean_pool(x, b.offsets));
  }

 private:
  Linear input_;
  GatConv gat_;
  Linear out_;
};

class MultiGnn final : public Model {
 public:
  MultiGnn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        encoder_(store_, "encoder", s.input_dim, s.hidden),
        gcn_(store_, "gcn", s.hidden, s.hidden),
        gat_(store_, "gat", s.hidden, s.hidden, 1, true),
        sage_(store_, "sage", s.hidden, s.hidden),
        attention_(store_, "attention_pool", s.hidden),
        fc1_(store_, "classifier1", 3 * s.hidden, s.hidden),
        fc2_(store_, "classifier2", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    const auto h = dims(spec_.hidden, spec_.hidden);
    return {"Linear encoder " + dims(spec_.input_dim, spec_.hidden) + " + ReLU + Dropout",
            "branch GCN " + h + " + ReLU -> mean pool",
            "branch GAT 1 head " + h + " + ELU -> max pool",
            "branch SAGE mean " + h + " + ReLU -> attention pool",
            "concatenate",
            "Linear " + dims(3 * spec_.hidden, spec_.hidden) + " + ReLU + Dropout",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    x = apply_dropout(relu(encoder_(t, x)), ctx);
    Var p1 = mean_pool(relu(gcn_(t, b, x)), b.offsets);
    Var p2 = max_pool(elu(gat_(t, b, x, ctx)), b.offsets);
    Var p3 = attention_(t, b, relu(sage_(t, b, x)));
    Var g = apply_dropout(relu(fc1_(t, concat_cols({p1, p2, p3}))), ctx);
    return fc2_(t, g);
  }

 private:
  Linear encoder_;
  GcnConv gcn_;
  GatConv gat_;
  SageConv sage_;
  AttentionPool attention_;
  Linear fc1_, fc2_;
};

class ResidualAttentionGnn final : public Model {
 public:
  ResidualAttentionGnn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed),
        input_(store_, "input", s.input_dim, s.hidden),
        gat1_(store_, "gat1", s.hidden, s.hidden, 1, true),
        gat2_(store_, "gat2", s.hidden, s.hidden, 1, true),
        attention_(store_, "attention_pool", s.hidden),
        out_(store_, "linear", s.hidden, 2) {}

  std::vector<std::string> layers() const override {
    const auto h = dims(spec_.hidden, spec_.hidden);
    return {"Linear " + dims(spec_.input_dim, spec_.hidden) + " + ReLU",
            "GAT 1 head " + h + " + ELU, residual, Dropout",
            "GAT 1 head " + h + " + ELU, residual, Dropout",
            "attention pool",
            "Linear " + dims(spec_.hidden, 2)};
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    Var h0 = relu(input_(t, x));
    Var h1 = apply_dropout(add(elu(gat1_(t, b, h0, ctx)), h0), ctx);
    Var h2 = apply_dropout(add(elu(gat2_(t, b, h1, ctx)), h1), ctx);
    return out_(t, attention_(t, b, h2));
  }

 private:
  Linear input_;
  GatConv gat1_, gat2_;
  AttentionPool attention_;
  Linear out_;
};

class DeepGnn final : public Model {
 public:
  DeepGnn(const ArchitectureSpec& s, std::uint64_t seed)
      : Model(s, seed), input_(store_, "input", s.input_dim, s.hidden) {
    for (int i = 0; i < kBlocks; ++i) {
      const auto tag = "block" + std::to_string(i + 1);
      gcn_.emplace_back(store_, tag + ".gcn", s.hidden, s.hidden);
      gat_.emplace_back(store_, tag + ".gat", s.hidden, s.hidden, 1, true);
      sage_.emplace_back(store_, tag + ".sage", s.hidden, s.hidden);
    }
    fc1_ = std::make_unique<Linear>(store_, "classifier1", s.hidden, s.hidden);
    fc2_ = std::make_unique<Linear>(store_, "classifier2", s.hidden, 2);
  }

  std::vector<std::string> layers() const override {
    std::vector<std::string> out = {"Linear " + dims(spec_.input_dim, spec_.hidden) + " + ReLU"};
    for (int i = 0; i < kBlocks; ++i) {
      out.push_back("block " + std::to_string(i + 1) + ": GCN + GAT 1 head + SAGE mean " +
                    dims(spec_.hidden, spec_.hidden) + " summed + ReLU + Dropout, residual");
    }
    out.push_back("mean pool");
    out.push_back("Linear " + dims(spec_.hidden, spec_.hidden) + " + ReLU + Dropout");
    out.push_back("Linear " + dims(spec_.hidden, 2));
    return out;
  }

 protected:
  Var run(Tape& t, const GraphBatch& b, Var x, const ForwardContext& ctx) const override {
    Var h = relu(input_(t, x));
    for (std::size_t i = 0; i < gcn_.size(); ++i) {
      Var s = add(add(gcn_[i](t, b, h), gat_[i](t, b, h, ctx)), sage_[i](t, b, h));
      h = add(apply_dropout(relu(s), ctx), h);
    }
    Var g = apply_dropout(relu((*fc1_)(t, mean_pool(h, b.offsets))), ctx);
    return (*fc2_)(t, g);
  }

 private:
  static constexpr int kBlocks = 3;
  Linear input_;
  std::vector<GcnConv> gcn_;
  std::vector<GatConv> gat_;
  std::vector<SageConv> sage_;
  std::unique_ptr<Linear> fc1_, fc2_;
};

}  // namespace

std::unique_ptr<Model> build_architecture(const ArchitectureSpec& spec, std::uint64_t seed) {
  if (spec.input_dim < 1 || spec.hidden < 1) throw Error("architecture dimensions must be positive");
  if (spec.heads < 1) throw Error("GAT head count must be >= 1");
  if (!(spec.dropout >= 0.0 && spec.dropout < 1.0)) throw Error("dropout must be in [0, 1)");
  const auto& n = spec.name;
  if (n == "BaselineGCN") return std::make_unique<BaselineGcn>(spec, seed);
  if (n == "BaselineGAT") return std::make_unique<BaselineGat>(spec, seed);
  if (n == "BaselineSAGE") return std::make_unique<BaselineSage>(spec, seed);
  if (n == "ResidualGCN") return std::make_unique<ResidualGcn>(spec, seed);
  if (n == "HybridModel") return std::make_unique<HybridModel>(spec, seed);
  if (n == "RegularizedGNN") return std::make_unique<RegularizedGnn>(spec, seed);
  if (n == "LightweightGCN") return std::make_unique<LightweightGcn>(spec, seed);
  if (n == "BalancedGAT") return std::make_unique<BalancedGat>(spec, seed);
  if (n == "MultiGNN") return std::make_unique<MultiGnn>(spec, seed);
  if (n == "ResidualAttentionGNN") return std::make_unique<ResidualAttentionGnn>(spec, seed);
  if (n == "DeepGNN") return std::make_unique<DeepGnn>(spec, seed);
  throw Error("unknown architecture: " + n);
}

}  // namespace neuma::gnn
