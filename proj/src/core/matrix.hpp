#pragma once

#include <cstddef>
#include <vector>

namespace stodi {

// Minimal dense row-major matrix. Rows/columns are 0-based here; node ids are
// 1-based everywhere else, so entry for nodes (i,j) lives at (i-1, j-1).
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double e = a.data[i] - b.data[i];
    if (e < 0) e = -e;
    if (e > d) d = e;
  }
  return d;
}

}  // namespace stodi
