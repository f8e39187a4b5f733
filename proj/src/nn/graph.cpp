#include "maple/nn/graph.hpp"

#include <cmath>
#include <stdexcept>

namespace maple::nn {

namespace {

void check(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

// C[r,c] op= A x B with transpose flags; scratch multiply then accumulate.
void mm_acc(Tensor& out, const double* A, bool ta, const double* B, bool tb,
            int r, int inner, int c) {
  std::vector<double> scratch(static_cast<std::size_t>(r) * c);
  kernels::matmul(A, B, scratch.data(), r, inner, c, ta, tb);
  for (std::size_t i = 0; i < scratch.size(); ++i) out.data[i] += scratch[i];
}

}  // namespace

NodePtr Graph::make(Tensor v, bool needs_grad) {
  auto n = std::make_shared<Node>();
  n->value = std::move(v);
  n->needs_grad = needs_grad;
  if (needs_grad) n->ensure_grad();
  return n;
}

NodePtr Graph::value(Tensor v) { return make(std::move(v), false); }

NodePtr Graph::param(Parameter& p) {
  auto n = make(p.value, true);
  bound_params_.emplace_back(n, &p);
  return n;
}

NodePtr Graph::add(NodePtr a, NodePtr b) {
  check(a->value.same_shape(b->value), "add: shape mismatch");
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] += b->value.data[i];
  auto o = make(std::move(out), a->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([a, b, o] {
      if (a->needs_grad)
        for (std::size_t i = 0; i < o->grad.data.size(); ++i) a->grad.data[i] += o->grad.data[i];
      if (b->needs_grad)
        for (std::size_t i = 0; i < o->grad.data.size(); ++i) b->grad.data[i] += o->grad.data[i];
    });
  return o;
}

NodePtr Graph::sub(NodePtr a, NodePtr b) {
  check(a->value.same_shape(b->value), "sub: shape mismatch");
  Tensor out = a->value;
  for (std::size_t i = 0; i < out.data.size(); ++i) out.data[i] -= b->value.data[i];
  auto o = make(std::move(out), a->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([a, b, o] {
      if (a->needs_grad)
        for (std::size_t i = 0; i < o->grad.data.size(); ++i) a->grad.data[i] += o->grad.data[i];
      if (b->needs_grad)
        for (std::size_t i = 0; i < o->grad.data.size(); ++i) b->grad.data[i] -= o->grad.data[i];
    });
  return o;
}

NodePtr Graph::add_rowvec(NodePtr x, NodePtr b) {
  const int64_t n = x->value.rows(), m = x->value.cols();
  check(b->value.numel() == m, "add_rowvec: bias length mismatch");
  Tensor out = x->value;
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < m; ++j) out.data[i * m + j] += b->value.data[j];
  auto o = make(std::move(out), x->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([x, b, o, n, m] {
      if (x->needs_grad)
        for (std::size_t i = 0; i < o->grad.data.size(); ++i) x->grad.data[i] += o->grad.data[i];
      if (b->needs_grad)
        for (int64_t i = 0; i < n; ++i)
          for (int64_t j = 0; j < m; ++j) b->grad.data[j] += o->grad.data[i * m + j];
    });
  return o;
}

NodePtr Graph::scale(NodePtr a, double c) {
  Tensor out = a->value;
  for (double& v : out.data) v *= c;
  auto o = make(std::move(out), a->needs_grad);
  if (o->needs_grad)
    record([a, o, c] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i) a->grad.data[i] += c * o->grad.data[i];
    });
  return o;
}

NodePtr Graph::matmul(NodePtr a, NodePtr b, bool ta, bool tb) {
  check(a->value.shape.size() == 2 && b->value.shape.size() == 2, "matmul: rank-2 only");
  const int64_t n = ta ? a->value.shape[1] : a->value.shape[0];
  const int64_t k = ta ? a->value.shape[0] : a->value.shape[1];
  const int64_t kb = tb ? b->value.shape[1] : b->value.shape[0];
  const int64_t m = tb ? b->value.shape[0] : b->value.shape[1];
  check(k == kb, "matmul: inner dimension mismatch");
  Tensor out({n, m});
  kernels::matmul(a->value.data.data(), b->value.data.data(), out.data.data(),
                  static_cast<int>(n), static_cast<int>(k), static_cast<int>(m), ta, tb);
  auto o = make(std::move(out), a->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([a, b, o, n, k, m, ta, tb] {
      const double* dC = o->grad.data.data();
      if (a->needs_grad) {
        if (!ta)
          mm_acc(a->grad, dC, false, b->value.data.data(), !tb,
                 static_cast<int>(n), static_cast<int>(m), static_cast<int>(k));
        else
          mm_acc(a->grad, b->value.data.data(), tb, dC, true,
                 static_cast<int>(k), static_cast<int>(m), static_cast<int>(n));
      }
      if (b->needs_grad) {
        if (!tb)
          mm_acc(b->grad, a->value.data.data(), !ta, dC, false,
                 static_cast<int>(k), static_cast<int>(n), static_cast<int>(m));
        else
          mm_acc(b->grad, dC, true, a->value.data.data(), ta,
                 static_cast<int>(m), static_cast<int>(n), static_cast<int>(k));
      }
    });
  return o;
}

NodePtr Graph::relu(NodePtr a) {
  Tensor out = a->value;
  for (double& v : out.data)
    if (v < 0) v = 0;
  auto o = make(std::move(out), a->needs_grad);
  if (o->needs_grad)
    record([a, o] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i)
        if (a->value.data[i] > 0) a->grad.data[i] += o->grad.data[i];
    });
  return o;
}

NodePtr Graph::sigmoid(NodePtr a) {
  Tensor out = a->value;
  for (double& v : out.data) v = 1.0 / (1.0 + std::exp(-v));
  auto o = make(std::move(out), a->needs_grad);
  if (o->needs_grad)
    record([a, o] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i) {
        double s = o->value.data[i];
        a->grad.data[i] += o->grad.data[i] * s * (1.0 - s);
      }
    });
  return o;
}

NodePtr Graph::softmax_rows(NodePtr a) {
  const int64_t n = a->value.rows(), m = a->value.cols();
  Tensor out = a->value;
  for (int64_t i = 0; i < n; ++i) {
    double mx = out.data[i * m];
    for (int64_t j = 1; j < m; ++j) mx = std::max(mx, out.data[i * m + j]);
    double z = 0;
    for (int64_t j = 0; j < m; ++j) {
      double e = std::exp(out.data[i * m + j] - mx);
      out.data[i * m + j] = e;
      z += e;
    }
    for (int64_t j = 0; j < m; ++j) out.data[i * m + j] /= z;
  }
  auto o = make(std::move(out), a->needs_grad);
  if (o->needs_grad)
    record([a, o, n, m] {
      for (int64_t i = 0; i < n; ++i) {
        double dot = 0;
        for (int64_t j = 0; j < m; ++j)
          dot += o->grad.data[i * m + j] * o->value.data[i * m + j];
        for (int64_t j = 0; j < m; ++j)
          a->grad.data[i * m + j] +=
              o->value.data[i * m + j] * (o->grad.data[i * m + j] - dot);
      }
    });
  return o;
}

NodePtr Graph::layer_norm(NodePtr x, NodePtr gamma, NodePtr beta, double eps) {
  const int64_t n = x->value.rows(), m = x->value.cols();
  check(gamma->value.numel() == m && beta->value.numel() == m, "layer_norm: affine size");
  Tensor out({n, m});
  auto xhat = std::make_shared<Tensor>(Tensor({n, m}));
  auto inv_std = std::make_shared<std::vector<double>>(n);
  for (int64_t i = 0; i < n; ++i) {
    double mu = 0;
    for (int64_t j = 0; j < m; ++j) mu += x->value.data[i * m + j];
    mu /= static_cast<double>(m);
    double var = 0;
    for (int64_t j = 0; j < m; ++j) {
      double d = x->value.data[i * m + j] - mu;
      var += d * d;
    }
    var /= static_cast<double>(m);
    double is = 1.0 / std::sqrt(var + eps);
    (*inv_std)[i] = is;
    for (int64_t j = 0; j < m; ++j) {
      double h = (x->value.data[i * m + j] - mu) * is;
      xhat->data[i * m + j] = h;
      out.data[i * m + j] = gamma->value.data[j] * h + beta->value.data[j];
    }
  }
  auto o = make(std::move(out), x->needs_grad || gamma->needs_grad || beta->needs_grad);
  if (o->needs_grad)
    record([x, gamma, beta, o, xhat, inv_std, n, m] {
      for (int64_t i = 0; i < n; ++i) {
        double mean_dh = 0, mean_dh_h = 0;
        for (int64_t j = 0; j < m; ++j) {
          double dy = o->grad.data[i * m + j];
          double h = xhat->data[i * m + j];
          if (beta->needs_grad) beta->grad.data[j] += dy;
          if (gamma->needs_grad) gamma->grad.data[j] += dy * h;
          double dh = dy * gamma->value.data[j];
          mean_dh += dh;
          mean_dh_h += dh * h;
        }
        if (!x->needs_grad) continue;
        mean_dh /= static_cast<double>(m);
        mean_dh_h /= static_cast<double>(m);
        for (int64_t j = 0; j < m; ++j) {
          double dh = o->grad.data[i * m + j] * gamma->value.data[j];
          double h = xhat->data[i * m + j];
          x->grad.data[i * m + j] += (*inv_std)[i] * (dh - mean_dh - h * mean_dh_h);
        }
      }
    });
  return o;
}

NodePtr Graph::embedding(NodePtr table, const std::vector<int>& ids) {
  const int64_t v = table->value.shape[0], d = table->value.shape[1];
  const int64_t n = static_cast<int64_t>(ids.size());
  check(n > 0, "embedding: empty id list");
  Tensor out({n, d});
  for (int64_t i = 0; i < n; ++i) {
    check(ids[i] >= 0 && ids[i] < v, "embedding: id out of range");
    for (int64_t j = 0; j < d; ++j)
      out.data[i * d + j] = table->value.data[static_cast<int64_t>(ids[i]) * d + j];
  }
  auto o = make(std::move(out), table->needs_grad);
  if (o->needs_grad)
    record([table, o, ids, d] {
      for (std::size_t i = 0; i < ids.size(); ++i)
        for (int64_t j = 0; j < d; ++j)
          table->grad.data[static_cast<int64_t>(ids[i]) * d + j] +=
              o->grad.data[static_cast<int64_t>(i) * d + j];
    });
  return o;
}

NodePtr Graph::mean_rows(NodePtr x) {
  const int64_t n = x->value.rows(), m = x->value.cols();
  Tensor out({1, m});
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < m; ++j) out.data[j] += x->value.data[i * m + j];
  for (int64_t j = 0; j < m; ++j) out.data[j] /= static_cast<double>(n);
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o, n, m] {
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < m; ++j)
          x->grad.data[i * m + j] += o->grad.data[j] / static_cast<double>(n);
    });
  return o;
}

NodePtr Graph::concat_rows(const std::vector<NodePtr>& xs) {
  check(!xs.empty(), "concat_rows: empty input");
  const int64_t m = xs[0]->value.cols();
  int64_t n = 0;
  bool ng = false;
  for (const auto& x : xs) {
    check(x->value.cols() == m, "concat_rows: column mismatch");
    n += x->value.rows();
    ng = ng || x->needs_grad;
  }
  Tensor out({n, m});
  int64_t r = 0;
  for (const auto& x : xs) {
    std::copy(x->value.data.begin(), x->value.data.end(), out.data.begin() + r * m);
    r += x->value.rows();
  }
  auto o = make(std::move(out), ng);
  if (o->needs_grad)
    record([xs, o, m] {
      int64_t r = 0;
      for (const auto& x : xs) {
        if (x->needs_grad)
          for (int64_t i = 0; i < x->value.rows(); ++i)
            for (int64_t j = 0; j < m; ++j)
              x->grad.data[i * m + j] += o->grad.data[(r + i) * m + j];
        r += x->value.rows();
      }
    });
  return o;
}

NodePtr Graph::slice_rows(NodePtr x, int64_t r0, int64_t r1) {
  const int64_t m = x->value.cols();
  check(r0 >= 0 && r1 > r0 && r1 <= x->value.rows(), "slice_rows: bad range");
  Tensor out({r1 - r0, m});
  std::copy(x->value.data.begin() + r0 * m, x->value.data.begin() + r1 * m, out.data.begin());
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o, r0, m] {
      for (int64_t i = 0; i < o->value.rows(); ++i)
        for (int64_t j = 0; j < m; ++j)
          x->grad.data[(r0 + i) * m + j] += o->grad.data[i * m + j];
    });
  return o;
}

NodePtr Graph::slice_cols(NodePtr x, int64_t c0, int64_t c1) {
  const int64_t n = x->value.rows(), m = x->value.cols();
  check(c0 >= 0 && c1 > c0 && c1 <= m, "slice_cols: bad range");
  const int64_t w = c1 - c0;
  Tensor out({n, w});
  for (int64_t i = 0; i < n; ++i)
    for (int64_t j = 0; j < w; ++j) out.data[i * w + j] = x->value.data[i * m + c0 + j];
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o, c0, n, m, w] {
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < w; ++j)
          x->grad.data[i * m + c0 + j] += o->grad.data[i * w + j];
    });
  return o;
}

NodePtr Graph::concat_cols(const std::vector<NodePtr>& xs) {
  check(!xs.empty(), "concat_cols: empty input");
  const int64_t n = xs[0]->value.rows();
  int64_t m = 0;
  bool ng = false;
  for (const auto& x : xs) {
    check(x->value.rows() == n, "concat_cols: row mismatch");
    m += x->value.cols();
    ng = ng || x->needs_grad;
  }
  Tensor out({n, m});
  int64_t c = 0;
  for (const auto& x : xs) {
    const int64_t w = x->value.cols();
    for (int64_t i = 0; i < n; ++i)
      for (int64_t j = 0; j < w; ++j) out.data[i * m + c + j] = x->value.data[i * w + j];
    c += w;
  }
  auto o = make(std::move(out), ng);
  if (o->needs_grad)
    record([xs, o, n, m] {
      int64_t c = 0;
      for (const auto& x : xs) {
        const int64_t w = x->value.cols();
        if (x->needs_grad)
          for (int64_t i = 0; i < n; ++i)
            for (int64_t j = 0; j < w; ++j)
              x->grad.data[i * w + j] += o->grad.data[i * m + c + j];
        c += w;
      }
    });
  return o;
}

NodePtr Graph::reshape(NodePtr x, std::vector<int64_t> shape) {
  Tensor out = x->value;
  out.shape = std::move(shape);
  check(out.numel() == x->value.numel(), "reshape: element count mismatch");
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i) x->grad.data[i] += o->grad.data[i];
    });
  return o;
}

NodePtr Graph::dropout(NodePtr x, double rate, core::Rng& rng, bool training) {
  if (!training || rate <= 0.0) return x;
  check(rate < 1.0, "dropout: rate must be < 1");
  auto mask = std::make_shared<std::vector<double>>(x->value.data.size());
  const double keep = 1.0 - rate;
  Tensor out = x->value;
  for (std::size_t i = 0; i < out.data.size(); ++i) {
    double m = core::runif(rng) < rate ? 0.0 : 1.0 / keep;
    (*mask)[i] = m;
    out.data[i] *= m;
  }
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o, mask] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i)
        x->grad.data[i] += o->grad.data[i] * (*mask)[i];
    });
  return o;
}

NodePtr Graph::conv3d(NodePtr x, NodePtr w, NodePtr b, int stride, int pad) {
  check(x->value.shape.size() == 4 && w->value.shape.size() == 5, "conv3d: shapes");
  kernels::Conv3dShape s;
  s.cin = static_cast<int>(x->value.shape[0]);
  s.d = static_cast<int>(x->value.shape[1]);
  s.h = static_cast<int>(x->value.shape[2]);
  s.w = static_cast<int>(x->value.shape[3]);
  s.cout = static_cast<int>(w->value.shape[0]);
  check(w->value.shape[1] == s.cin, "conv3d: cin mismatch");
  s.k = static_cast<int>(w->value.shape[2]);
  s.stride = stride;
  s.pad = pad;
  check(b->value.numel() == s.cout, "conv3d: bias size");
  Tensor out({s.cout, s.od(), s.oh(), s.ow()});
  kernels::conv3d_forward(s, x->value.data.data(), w->value.data.data(),
                          b->value.data.data(), out.data.data());
  auto o = make(std::move(out), x->needs_grad || w->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([x, w, b, o, s] {
      if (x->needs_grad)
        kernels::conv3d_backward_input(s, o->grad.data.data(), w->value.data.data(),
                                       x->grad.data.data());
      if (w->needs_grad || b->needs_grad)
        kernels::conv3d_backward_weight(s, o->grad.data.data(), x->value.data.data(),
                                        w->grad.data.data(),
                                        b->needs_grad ? b->grad.data.data() : nullptr);
    });
  return o;
}

NodePtr Graph::convt3d(NodePtr x, NodePtr w, NodePtr b, int stride, int pad, int out_pad) {
  check(x->value.shape.size() == 4 && w->value.shape.size() == 5, "convt3d: shapes");
  kernels::ConvT3dShape s;
  s.cin = static_cast<int>(x->value.shape[0]);
  s.d = static_cast<int>(x->value.shape[1]);
  s.h = static_cast<int>(x->value.shape[2]);
  s.w = static_cast<int>(x->value.shape[3]);
  check(w->value.shape[0] == s.cin, "convt3d: cin mismatch");
  s.cout = static_cast<int>(w->value.shape[1]);
  s.k = static_cast<int>(w->value.shape[2]);
  s.stride = stride;
  s.pad = pad;
  s.out_pad = out_pad;
  check(b->value.numel() == s.cout, "convt3d: bias size");
  Tensor out({s.cout, s.od(), s.oh(), s.ow()});
  kernels::convt3d_forward(s, x->value.data.data(), w->value.data.data(),
                           b->value.data.data(), out.data.data());
  auto o = make(std::move(out), x->needs_grad || w->needs_grad || b->needs_grad);
  if (o->needs_grad)
    record([x, w, b, o, s] {
      if (x->needs_grad)
        kernels::convt3d_backward_input(s, o->grad.data.data(), w->value.data.data(),
                                        x->grad.data.data());
      if (w->needs_grad || b->needs_grad)
        kernels::convt3d_backward_weight(s, o->grad.data.data(), x->value.data.data(),
                                         w->grad.data.data(),
                                         b->needs_grad ? b->grad.data.data() : nullptr);
    });
  return o;
}

NodePtr Graph::cross_entropy_logits(NodePtr logits, const std::vector<int>& targets) {
  const int64_t n = logits->value.rows(), c = logits->value.cols();
  check(static_cast<int64_t>(targets.size()) == n, "cross_entropy: target count");
  auto probs = std::make_shared<Tensor>(Tensor({n, c}));
  double loss = 0;
  for (int64_t i = 0; i < n; ++i) {
    double mx = logits->value.data[i * c];
    for (int64_t j = 1; j < c; ++j) mx = std::max(mx, logits->value.data[i * c + j]);
    double z = 0;
    for (int64_t j = 0; j < c; ++j) {
      double e = std::exp(logits->value.data[i * c + j] - mx);
      probs->data[i * c + j] = e;
      z += e;
    }
    for (int64_t j = 0; j < c; ++j) probs->data[i * c + j] /= z;
    check(targets[i] >= 0 && targets[i] < c, "cross_entropy: target out of range");
    loss -= std::log(std::max(probs->data[i * c + targets[i]], 1e-300));
  }
  Tensor out({1});
  out.data[0] = loss / static_cast<double>(n);
  auto o = make(std::move(out), logits->needs_grad);
  if (o->needs_grad)
    record([logits, o, probs, targets, n, c] {
      const double g = o->grad.data[0] / static_cast<double>(n);
      for (int64_t i = 0; i < n; ++i)
        for (int64_t j = 0; j < c; ++j) {
          double p = probs->data[i * c + j];
          logits->grad.data[i * c + j] += g * (p - (targets[i] == j ? 1.0 : 0.0));
        }
    });
  return o;
}

NodePtr Graph::mse(NodePtr pred, const Tensor& target) {
  check(pred->value.numel() == target.numel(), "mse: shape mismatch");
  const auto n = pred->value.data.size();
  double loss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    double d = pred->value.data[i] - target.data[i];
    loss += d * d;
  }
  Tensor out({1});
  out.data[0] = loss / static_cast<double>(n);
  auto tgt = std::make_shared<Tensor>(target);
  auto o = make(std::move(out), pred->needs_grad);
  if (o->needs_grad)
    record([pred, o, tgt, n] {
      const double g = 2.0 * o->grad.data[0] / static_cast<double>(n);
      for (std::size_t i = 0; i < n; ++i)
        pred->grad.data[i] += g * (pred->value.data[i] - tgt->data[i]);
    });
  return o;
}

NodePtr Graph::sq_l2_to(NodePtr x, const std::vector<double>& y) {
  check(static_cast<std::size_t>(x->value.numel()) == y.size(), "sq_l2_to: dim mismatch");
  double loss = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    double d = x->value.data[i] - y[i];
    loss += d * d;
  }
  Tensor out({1});
  out.data[0] = loss;
  auto o = make(std::move(out), x->needs_grad);
  if (o->needs_grad)
    record([x, o, y] {
      const double g = o->grad.data[0];
      for (std::size_t i = 0; i < y.size(); ++i)
        x->grad.data[i] += 2.0 * g * (x->value.data[i] - y[i]);
    });
  return o;
}

NodePtr Graph::cosine(NodePtr u, NodePtr v) {
  check(u->value.numel() == v->value.numel(), "cosine: dim mismatch");
  const auto n = u->value.data.size();
  double uu = 0, vv = 0, uv = 0;
  for (std::size_t i = 0; i < n; ++i) {
    uu += u->value.data[i] * u->value.data[i];
    vv += v->value.data[i] * v->value.data[i];
    uv += u->value.data[i] * v->value.data[i];
  }
  check(uu > 0 && vv > 0, "cosine: zero vector");
  const double nu = std::sqrt(uu), nv = std::sqrt(vv);
  const double c = uv / (nu * nv);
  Tensor out({1});
  out.data[0] = c;
  auto o = make(std::move(out), u->needs_grad || v->needs_grad);
  if (o->needs_grad)
    record([u, v, o, nu, nv, c, n] {
      const double g = o->grad.data[0];
      for (std::size_t i = 0; i < n; ++i) {
        if (u->needs_grad)
          u->grad.data[i] += g * (v->value.data[i] / (nu * nv) -
                                  c * u->value.data[i] / (nu * nu));
        if (v->needs_grad)
          v->grad.data[i] += g * (u->value.data[i] / (nu * nv) -
                                  c * v->value.data[i] / (nv * nv));
      }
    });
  return o;
}

NodePtr Graph::add_scalar(NodePtr a, double c) {
  Tensor out = a->value;
  for (double& v : out.data) v += c;
  auto o = make(std::move(out), a->needs_grad);
  if (o->needs_grad)
    record([a, o] {
      for (std::size_t i = 0; i < o->grad.data.size(); ++i) a->grad.data[i] += o->grad.data[i];
    });
  return o;
}

NodePtr Graph::sum_scalars(const std::vector<NodePtr>& xs, double scl) {
  check(!xs.empty(), "sum_scalars: empty input");
  double acc = 0;
  bool ng = false;
  for (const auto& x : xs) {
    check(x->value.numel() == 1, "sum_scalars: non-scalar input");
    acc += x->value.data[0];
    ng = ng || x->needs_grad;
  }
  Tensor out({1});
  out.data[0] = acc * scl;
  auto o = make(std::move(out), ng);
  if (o->needs_grad)
    record([xs, o, scl] {
      for (const auto& x : xs)
        if (x->needs_grad) x->grad.data[0] += scl * o->grad.data[0];
    });
  return o;
}

void Graph::backward(NodePtr root) {
  check(root->value.numel() == 1, "backward: root must be scalar");
  if (!root->needs_grad) return;
  root->ensure_grad();
  root->grad.data[0] = 1.0;
  for (auto it = tape_.rbegin(); it != tape_.rend(); ++it) (*it)();
  for (auto& [node, param] : bound_params_)
    for (std::size_t i = 0; i < param->grad.data.size(); ++i)
      param->grad.data[i] += node->grad.data[i];
}

}  // namespace maple::nn
