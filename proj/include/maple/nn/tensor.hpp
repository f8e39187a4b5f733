#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "maple/core/rng.hpp"

namespace maple::nn {

// Dense row-major double tensor used for parameters and activations.
struct Tensor {
  std::vector<int64_t> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int64_t> s) : shape(std::move(s)) {
    data.assign(static_cast<std::size_t>(numel()), 0.0);
  }

  int64_t numel() const {
    int64_t n = 1;
    for (int64_t d : shape) n *= d;
    return shape.empty() ? 0 : n;
  }

  int64_t rows() const { return shape.empty() ? 0 : shape[0]; }
  int64_t cols() const {
    if (shape.size() == 1) return shape[0];
    int64_t c = 1;
    for (std::size_t i = 1; i < shape.size(); ++i) c *= shape[i];
    return c;
  }

  double& operator()(int64_t i, int64_t j) { return data[static_cast<std::size_t>(i * cols() + j)]; }
  double operator()(int64_t i, int64_t j) const { return data[static_cast<std::size_t>(i * cols() + j)]; }

  static Tensor zeros(std::vector<int64_t> s) { return Tensor(std::move(s)); }

  static Tensor full(std::vector<int64_t> s, double v) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = v;
    return t;
  }

  static Tensor randn(std::vector<int64_t> s, core::Rng& rng, double stddev) {
    Tensor t(std::move(s));
    for (double& x : t.data) x = stddev * core::rnorm(rng);
    return t;
  }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

// Trainable tensor with persistent gradient storage.
struct Parameter {
  std::string name;
  Tensor value;
  Tensor grad;

  Parameter() = default;
  Parameter(std::string n, Tensor v) : name(std::move(n)), value(std::move(v)) {
    grad = Tensor::zeros(value.shape);
  }

  void zero_grad() { std::fill(grad.data.begin(), grad.data.end(), 0.0); }
};

}  // namespace maple::nn
