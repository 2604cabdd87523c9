#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace errid {

// Dense row-major array of doubles, rank 0 (scalar), 1 (vector) or 2 (matrix).
struct Tensor {
  std::vector<int> shape;
  std::vector<double> data;

  Tensor() = default;

  static Tensor scalar(double v);
  static Tensor zeros(const std::vector<int>& shape);
  static Tensor vec(std::vector<double> v);
  static Tensor mat(int rows, int cols, std::vector<double> v);

  int rank() const { return static_cast<int>(shape.size()); }
  std::int64_t size() const { return static_cast<std::int64_t>(data.size()); }
  bool is_scalar() const { return shape.empty(); }

  int rows() const;
  int cols() const;

  double& at(int i) { return data[static_cast<size_t>(i)]; }
  double at(int i) const { return data[static_cast<size_t>(i)]; }
  double& at(int r, int c) { return data[static_cast<size_t>(r) * cols() + c]; }
  double at(int r, int c) const { return data[static_cast<size_t>(r) * cols() + c]; }

  bool same_shape(const Tensor& other) const { return shape == other.shape; }
  std::string shape_str() const;

  bool all_finite() const;
};

// Throws std::invalid_argument naming both shapes when they disagree.
void check_same_shape(const Tensor& a, const Tensor& b, const char* op);

}  // namespace errid
