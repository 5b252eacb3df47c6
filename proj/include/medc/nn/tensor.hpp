#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace medc::nn {

// Dense row-major tensor of 64-bit reals.
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;
  explicit Tensor(std::vector<int> s) : shape(std::move(s)) {
    data.assign(static_cast<size_t>(count(shape)), 0.0);
  }
  Tensor(std::vector<int> s, std::vector<double> d)
      : shape(std::move(s)), data(std::move(d)) {
    if (data.size() != static_cast<size_t>(count(shape)))
      throw std::invalid_argument("Tensor: data length does not match shape");
  }

  static int64_t count(const std::vector<int>& s) {
    int64_t n = 1;
    for (int e : s) {
      if (e <= 0) throw std::invalid_argument("Tensor: non-positive extent");
      n *= e;
    }
    return n;
  }

  int64_t size() const { return static_cast<int64_t>(data.size()); }
  double* ptr() { return data.data(); }
  const double* ptr() const { return data.data(); }

  bool same_shape(const Tensor& o) const { return shape == o.shape; }
};

}  // namespace medc::nn
