#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "json.hpp"

namespace holispoof {

// Row-major dense matrix of doubles.
struct DenseMatrix {
  size_t rows = 0;
  size_t cols = 0;
  std::vector<double> data;

  DenseMatrix() = default;
  DenseMatrix(size_t r, size_t c, double fill = 0.0)
      : rows(r), cols(c), data(r * c, fill) {}

  double& at(size_t i, size_t j) { return data[i * cols + j]; }
  double at(size_t i, size_t j) const { return data[i * cols + j]; }

  bool operator==(const DenseMatrix&) const = default;
};

// Throws DimensionMismatch unless a.cols == b.rows.
DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b);

// Throws DimensionMismatch unless shapes agree.
DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b);

// Euclidean norm of each column.
std::vector<double> column_norms(const DenseMatrix& m);

// A base weight with a low-rank update and per-column magnitudes:
//   base d x k, up d x r, down r x k, magnitude length k.
struct DoraParams {
  DenseMatrix base;
  DenseMatrix up;
  DenseMatrix down;
  std::vector<double> magnitude;
};

// Merged weight: each column of base + up*down is scaled to unit Euclidean
// norm and then multiplied by the matching magnitude, so the merged column
// norms equal the magnitudes exactly up to rounding. Throws
// DimensionMismatch when the shapes disagree or the rank exceeds
// min(rows, cols) or is zero, and ZeroColumnNorm when a column of
// base + up*down has norm exactly 0.0 and no direction to scale.
DenseMatrix dora_merge(const DoraParams& params);

// JSON encoding: a matrix is an array of equal-length row arrays. Throws
// DimensionMismatch on ragged or empty input.
DenseMatrix matrix_from_json(const nlohmann::json& value);
nlohmann::json matrix_to_json(const DenseMatrix& m);

// Object with keys "base", "up", "down", "magnitude".
DoraParams dora_params_from_json(const nlohmann::json& value);
nlohmann::json dora_params_to_json(const DoraParams& params);

}  // namespace holispoof
