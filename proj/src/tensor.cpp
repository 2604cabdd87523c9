#include "errid/tensor.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace errid {

Tensor Tensor::scalar(double v) {
  Tensor t;
  t.data.assign(1, v);
  return t;
}

Tensor Tensor::zeros(const std::vector<int>& shape) {
  Tensor t;
  t.shape = shape;
  std::int64_t n = 1;
  for (int d : shape) {
    if (d < 0) throw std::invalid_argument("tensor: negative dimension");
    n *= d;
  }
  t.data.assign(static_cast<size_t>(n), 0.0);
  return t;
}

Tensor Tensor::vec(std::vector<double> v) {
  Tensor t;
  t.shape = {static_cast<int>(v.size())};
  t.data = std::move(v);
  return t;
}

Tensor Tensor::mat(int rows, int cols, std::vector<double> v) {
  if (static_cast<size_t>(rows) * cols != v.size())
    throw std::invalid_argument("tensor: mat data size does not match rows*cols");
  Tensor t;
  t.shape = {rows, cols};
  t.data = std::move(v);
  return t;
}

int Tensor::rows() const {
  if (shape.empty()) return 1;
  return shape[0];
}

int Tensor::cols() const {
  if (shape.size() < 2) return 1;
  return shape[1];
}

std::string Tensor::shape_str() const {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += "x";
    s += std::to_string(shape[i]);
  }
  s += "]";
  return s;
}

bool Tensor::all_finite() const {
  for (double v : data)
    if (!std::isfinite(v)) return false;
  return true;
}

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (!a.same_shape(b))
    throw std::invalid_argument(std::string(op) + ": shape mismatch " + a.shape_str() +
                                " vs " + b.shape_str());
}

}  // namespace errid
