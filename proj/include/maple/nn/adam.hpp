#pragma once

#include <cmath>
#include <unordered_map>
#include <vector>

#include "maple/nn/tensor.hpp"

namespace maple::nn {

// Adam with L2 regularization folded into the gradient (weight_decay * w),
// matching the common framework default.
class Adam {
 public:
  Adam(double lr, double weight_decay = 0.0, double beta1 = 0.9, double beta2 = 0.999,
       double eps = 1e-8)
      : lr_(lr), wd_(weight_decay), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(const std::vector<Parameter*>& params) {
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (Parameter* p : params) {
      auto& st = state_[p];
      if (st.m.data.empty()) {
        st.m = Tensor::zeros(p->value.shape);
        st.v = Tensor::zeros(p->value.shape);
      }
      for (std::size_t i = 0; i < p->value.data.size(); ++i) {
        double g = p->grad.data[i] + wd_ * p->value.data[i];
        st.m.data[i] = beta1_ * st.m.data[i] + (1.0 - beta1_) * g;
        st.v.data[i] = beta2_ * st.v.data[i] + (1.0 - beta2_) * g * g;
        double mhat = st.m.data[i] / bc1;
        double vhat = st.v.data[i] / bc2;
        p->value.data[i] -= lr_ * mhat / (std::sqrt(vhat) + eps_);
      }
    }
  }

  static void zero_grad(const std::vector<Parameter*>& params) {
    for (Parameter* p : params) p->zero_grad();
  }

 private:
  struct State {
    Tensor m, v;
  };
  double lr_, wd_, beta1_, beta2_, eps_;
  int64_t t_ = 0;
  std::unordered_map<Parameter*, State> state_;
};

}  // namespace maple::nn
