#pragma once

#include <cstddef>
#include <vector>

#include "mmfield/errors.hpp"

namespace mmf {

/// Dense row-major matrix of doubles. Just storage plus bounds-checked
/// construction; algorithms index it directly.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> v;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0)
      : rows(r), cols(c), v(r * c, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rr) {
    Matrix m(rr.size(), rr.empty() ? 0 : rr.front().size());
    for (std::size_t i = 0; i < rr.size(); ++i) {
      if (rr[i].size() != m.cols)
        throw InvalidInput("matrix rows have inconsistent lengths");
      for (std::size_t j = 0; j < m.cols; ++j) m.v[i * m.cols + j] = rr[i][j];
    }
    return m;
  }

  double& at(std::size_t i, std::size_t j) { return v[i * cols + j]; }
  double at(std::size_t i, std::size_t j) const { return v[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return v[i * cols + j]; }

  bool operator==(const Matrix&) const = default;
};

}  // namespace mmf
