#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "maple/kernels/kernels.hpp"
#include "maple/nn/tensor.hpp"

namespace maple::nn {

struct Node {
  Tensor value;
  Tensor grad;
  bool needs_grad = false;

  void ensure_grad() {
    if (grad.data.empty()) grad = Tensor::zeros(value.shape);
  }
};
using NodePtr = std::shared_ptr<Node>;

// Define-by-run reverse-mode tape. A graph lives for one forward/backward
// pass; parameter gradients are accumulated into the bound Parameter objects
// when backward() runs.
class Graph {
 public:
  NodePtr value(Tensor v);                 // constant leaf
  NodePtr param(Parameter& p);             // trainable leaf

  NodePtr add(NodePtr a, NodePtr b);
  NodePtr sub(NodePtr a, NodePtr b);
  NodePtr add_rowvec(NodePtr x, NodePtr b);           // [n,m] + [m]
  NodePtr scale(NodePtr a, double c);
  NodePtr matmul(NodePtr a, NodePtr b, bool ta = false, bool tb = false);
  NodePtr relu(NodePtr a);
  NodePtr sigmoid(NodePtr a);
  NodePtr softmax_rows(NodePtr a);
  NodePtr layer_norm(NodePtr x, NodePtr gamma, NodePtr beta, double eps = 1e-5);
  NodePtr embedding(NodePtr table, const std::vector<int>& ids);
  NodePtr mean_rows(NodePtr x);                       // [n,m] -> [1,m]
  NodePtr concat_rows(const std::vector<NodePtr>& xs);
  NodePtr slice_rows(NodePtr x, int64_t r0, int64_t r1);
  NodePtr slice_cols(NodePtr x, int64_t c0, int64_t c1);
  NodePtr concat_cols(const std::vector<NodePtr>& xs);
  NodePtr reshape(NodePtr x, std::vector<int64_t> shape);
  NodePtr dropout(NodePtr x, double rate, core::Rng& rng, bool training);
  NodePtr conv3d(NodePtr x, NodePtr w, NodePtr b, int stride, int pad);
  NodePtr convt3d(NodePtr x, NodePtr w, NodePtr b, int stride, int pad, int out_pad);

  // Scalar results have shape [1].
  NodePtr cross_entropy_logits(NodePtr logits, const std::vector<int>& targets);
  NodePtr mse(NodePtr pred, const Tensor& target);
  NodePtr sq_l2_to(NodePtr x, const std::vector<double>& y);
  NodePtr cosine(NodePtr u, NodePtr v);
  NodePtr add_scalar(NodePtr a, double c);
  NodePtr sum_scalars(const std::vector<NodePtr>& xs, double scl = 1.0);

  void backward(NodePtr root);

 private:
  NodePtr make(Tensor v, bool needs_grad);
  void record(std::function<void()> fn) { tape_.push_back(std::move(fn)); }

  std::vector<std::function<void()>> tape_;
  std::vector<std::pair<NodePtr, Parameter*>> bound_params_;
};

}  // namespace maple::nn
