#include "maple/nn/modules.hpp"

#include <cmath>
#include <stdexcept>

namespace maple::nn {

Linear::Linear(const std::string& name, int64_t in, int64_t out, core::Rng& rng,
               double init_scale)
    : w(name + ".w", Tensor::randn({in, out}, rng, init_scale)),
      b(name + ".b", Tensor::zeros({out})) {}

Linear Linear::zero_init(const std::string& name, int64_t in, int64_t out) {
  Linear l;
  l.w = Parameter(name + ".w", Tensor::zeros({in, out}));
  l.b = Parameter(name + ".b", Tensor::zeros({out}));
  return l;
}

NodePtr Linear::forward(Graph& g, NodePtr x) {
  return g.add_rowvec(g.matmul(x, g.param(w)), g.param(b));
}

void Linear::collect(std::vector<Parameter*>& out) {
  out.push_back(&w);
  out.push_back(&b);
}

LayerNorm::LayerNorm(const std::string& name, int64_t dim)
    : gamma(name + ".gamma", Tensor::full({dim}, 1.0)),
      beta(name + ".beta", Tensor::zeros({dim})) {}

NodePtr LayerNorm::forward(Graph& g, NodePtr x) {
  return g.layer_norm(x, g.param(gamma), g.param(beta));
}

void LayerNorm::collect(std::vector<Parameter*>& out) {
  out.push_back(&gamma);
  out.push_back(&beta);
}

MultiHeadAttention::MultiHeadAttention(const std::string& name, int64_t dim, int heads,
                                       double dropout, core::Rng& rng)
    : heads(heads),
      wq(name + ".q", dim, dim, rng, 0.02),
      wk(name + ".k", dim, dim, rng, 0.02),
      wv(name + ".v", dim, dim, rng, 0.02),
      wo(name + ".o", dim, dim, rng, 0.02),
      dropout(dropout) {
  if (dim % heads != 0) throw std::invalid_argument("attention dim must divide heads");
}

NodePtr MultiHeadAttention::forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                                    std::vector<double>* row0_avg) {
  const int64_t n = x->value.rows();
  const int64_t dim = x->value.cols();
  const int64_t dk = dim / heads;
  NodePtr q = wq.forward(g, x);
  NodePtr k = wk.forward(g, x);
  NodePtr v = wv.forward(g, x);
  if (row0_avg) row0_avg->assign(static_cast<std::size_t>(n), 0.0);
  std::vector<NodePtr> head_outs;
  head_outs.reserve(heads);
  for (int h = 0; h < heads; ++h) {
    NodePtr qh = g.slice_cols(q, h * dk, (h + 1) * dk);
    NodePtr kh = g.slice_cols(k, h * dk, (h + 1) * dk);
    NodePtr vh = g.slice_cols(v, h * dk, (h + 1) * dk);
    NodePtr scores = g.scale(g.matmul(qh, kh, false, true), 1.0 / std::sqrt(static_cast<double>(dk)));
    NodePtr probs = g.softmax_rows(scores);
    if (row0_avg)
      for (int64_t j = 0; j < n; ++j)
        (*row0_avg)[static_cast<std::size_t>(j)] +=
            probs->value.data[j] / static_cast<double>(heads);
    probs = g.dropout(probs, dropout, rng, training);
    head_outs.push_back(g.matmul(probs, vh));
  }
  NodePtr merged = heads == 1 ? head_outs[0] : g.concat_cols(head_outs);
  return wo.forward(g, merged);
}

void MultiHeadAttention::collect(std::vector<Parameter*>& out) {
  wq.collect(out);
  wk.collect(out);
  wv.collect(out);
  wo.collect(out);
}

TransformerLayer::TransformerLayer(const std::string& name, int64_t dim, int heads,
                                   int64_t ffn_dim, double dropout, core::Rng& rng)
    : attn(name + ".attn", dim, heads, dropout, rng),
      ln1(name + ".ln1", dim),
      ln2(name + ".ln2", dim),
      ff1(name + ".ff1", dim, ffn_dim, rng, 0.02),
      ff2(name + ".ff2", ffn_dim, dim, rng, 0.02),
      dropout(dropout) {}

NodePtr TransformerLayer::forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                                  std::vector<double>* row0_avg) {
  NodePtr a = attn.forward(g, x, rng, training, row0_avg);
  a = g.dropout(a, dropout, rng, training);
  x = ln1.forward(g, g.add(x, a));
  NodePtr f = ff2.forward(g, g.relu(ff1.forward(g, x)));
  f = g.dropout(f, dropout, rng, training);
  return ln2.forward(g, g.add(x, f));
}

void TransformerLayer::collect(std::vector<Parameter*>& out) {
  attn.collect(out);
  ln1.collect(out);
  ln2.collect(out);
  ff1.collect(out);
  ff2.collect(out);
}

TransformerEncoder::TransformerEncoder(const std::string& name, int n_layers, int64_t dim,
                                       int heads, int64_t ffn_dim, double dropout,
                                       core::Rng& rng) {
  layers.reserve(static_cast<std::size_t>(n_layers));
  for (int i = 0; i < n_layers; ++i)
    layers.emplace_back(name + ".layer" + std::to_string(i), dim, heads, ffn_dim, dropout, rng);
}

NodePtr TransformerEncoder::forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                                    AttentionTrace* trace) {
  if (trace) trace->row0_by_layer.clear();
  for (auto& layer : layers) {
    std::vector<double> row0;
    x = layer.forward(g, x, rng, training, trace ? &row0 : nullptr);
    if (trace) trace->row0_by_layer.push_back(std::move(row0));
  }
  return x;
}

void TransformerEncoder::collect(std::vector<Parameter*>& out) {
  for (auto& layer : layers) layer.collect(out);
}

core::TensorBundle params_to_bundle(const std::vector<Parameter*>& params) {
  core::TensorBundle bundle;
  bundle.reserve(params.size());
  for (const Parameter* p : params) {
    core::TensorF t;
    t.dims.reserve(p->value.shape.size());
    for (int64_t d : p->value.shape) t.dims.push_back(static_cast<uint32_t>(d));
    t.data.reserve(p->value.data.size());
    for (double v : p->value.data) t.data.push_back(static_cast<float>(v));
    bundle.emplace_back(p->name, std::move(t));
  }
  return bundle;
}

void bundle_to_params(const core::TensorBundle& bundle, const std::vector<Parameter*>& params) {
  if (bundle.size() != params.size())
    throw std::runtime_error("checkpoint entry count does not match model");
  for (std::size_t i = 0; i < params.size(); ++i) {
    const auto& [name, t] = bundle[i];
    Parameter* p = params[i];
    if (name != p->name)
      throw std::runtime_error("checkpoint entry '" + name + "' does not match parameter '" +
                               p->name + "'");
    if (t.numel() != static_cast<std::size_t>(p->value.numel()))
      throw std::runtime_error("checkpoint entry '" + name + "' has wrong size");
    for (std::size_t j = 0; j < t.data.size(); ++j)
      p->value.data[j] = static_cast<double>(t.data[j]);
  }
}

uint32_t params_checksum(const std::vector<Parameter*>& params) {
  return core::bundle_checksum(params_to_bundle(params));
}

}  // namespace maple::nn
