#pragma once

#include <string>
#include <vector>

#include "maple/core/tensor_io.hpp"
#include "maple/nn/graph.hpp"

namespace maple::nn {

struct Linear {
  Parameter w, b;  // w: [in, out]

  Linear() = default;
  Linear(const std::string& name, int64_t in, int64_t out, core::Rng& rng, double init_scale);
  static Linear zero_init(const std::string& name, int64_t in, int64_t out);

  NodePtr forward(Graph& g, NodePtr x);
  void collect(std::vector<Parameter*>& out);
};

struct LayerNorm {
  Parameter gamma, beta;

  LayerNorm() = default;
  LayerNorm(const std::string& name, int64_t dim);

  NodePtr forward(Graph& g, NodePtr x);
  void collect(std::vector<Parameter*>& out);
};

// Summary of one attention application: softmax rows of the first query
// position, averaged over heads. Used for bag-attention inspection.
struct AttentionTrace {
  std::vector<std::vector<double>> row0_by_layer;  // [layer][key position]
};

struct MultiHeadAttention {
  int heads = 1;
  Linear wq, wk, wv, wo;
  double dropout = 0.0;

  MultiHeadAttention() = default;
  MultiHeadAttention(const std::string& name, int64_t dim, int heads, double dropout,
                     core::Rng& rng);

  NodePtr forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                  std::vector<double>* row0_avg = nullptr);
  void collect(std::vector<Parameter*>& out);
};

struct TransformerLayer {
  MultiHeadAttention attn;
  LayerNorm ln1, ln2;
  Linear ff1, ff2;
  double dropout = 0.0;

  TransformerLayer() = default;
  TransformerLayer(const std::string& name, int64_t dim, int heads, int64_t ffn_dim,
                   double dropout, core::Rng& rng);

  NodePtr forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                  std::vector<double>* row0_avg = nullptr);
  void collect(std::vector<Parameter*>& out);
};

// Stack of post-norm transformer layers. No positional encoding anywhere, so
// outputs are equivariant to input-row permutation.
struct TransformerEncoder {
  std::vector<TransformerLayer> layers;

  TransformerEncoder() = default;
  TransformerEncoder(const std::string& name, int n_layers, int64_t dim, int heads,
                     int64_t ffn_dim, double dropout, core::Rng& rng);

  NodePtr forward(Graph& g, NodePtr x, core::Rng& rng, bool training,
                  AttentionTrace* trace = nullptr);
  void collect(std::vector<Parameter*>& out);
};

// Checkpoint helpers: parameters are stored by name in a tensor bundle.
core::TensorBundle params_to_bundle(const std::vector<Parameter*>& params);
void bundle_to_params(const core::TensorBundle& bundle, const std::vector<Parameter*>& params);
uint32_t params_checksum(const std::vector<Parameter*>& params);

}  // namespace maple::nn
