#include "holispoof/adapter_math.hpp"

#include <algorithm>
#include <cmath>

#include "holispoof/errors.hpp"

namespace holispoof {

DenseMatrix matmul(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.cols != b.rows)
    raise(ErrorCode::DimensionMismatch,
          "cannot multiply " + std::to_string(a.rows) + "x" +
              std::to_string(a.cols) + " by " + std::to_string(b.rows) + "x" +
              std::to_string(b.cols));
  DenseMatrix out(a.rows, b.cols);
  for (size_t i = 0; i < a.rows; ++i) {
    for (size_t l = 0; l < a.cols; ++l) {
      const double scale = a.at(i, l);
      if (scale == 0.0) continue;
      for (size_t j = 0; j < b.cols; ++j)
        out.at(i, j) += scale * b.at(l, j);
    }
  }
  return out;
}

DenseMatrix add(const DenseMatrix& a, const DenseMatrix& b) {
  if (a.rows != b.rows || a.cols != b.cols)
    raise(ErrorCode::DimensionMismatch, "cannot add matrices of unequal shape");
  DenseMatrix out = a;
  for (size_t i = 0; i < out.data.size(); ++i) out.data[i] += b.data[i];
  return out;
}

std::vector<double> column_norms(const DenseMatrix& m) {
  std::vector<double> norms(m.cols, 0.0);
  for (size_t i = 0; i < m.rows; ++i)
    for (size_t j = 0; j < m.cols; ++j) norms[j] += m.at(i, j) * m.at(i, j);
  for (double& n : norms) n = std::sqrt(n);
  return norms;
}

DenseMatrix dora_merge(const DoraParams& params) {
  const size_t d = params.base.rows;
  const size_t k = params.base.cols;
  const size_t r = params.up.cols;
  if (d == 0 || k == 0)
    raise(ErrorCode::DimensionMismatch, "base weight must be non-empty");
  if (params.up.rows != d || params.down.cols != k || params.down.rows != r)
    raise(ErrorCode::DimensionMismatch,
          "low-rank factors do not match the base weight shape");
  if (r == 0 || r > std::min(d, k))
    raise(ErrorCode::DimensionMismatch,
          "rank must satisfy 1 <= r <= min(rows, cols), got r=" +
              std::to_string(r));
  if (params.magnitude.size() != k)
    raise(ErrorCode::DimensionMismatch,
          "magnitude vector must have one entry per column");

  const DenseMatrix direction = add(params.base, matmul(params.up, params.down));
  const std::vector<double> norms = column_norms(direction);
  for (size_t j = 0; j < k; ++j) {
    if (norms[j] == 0.0)
      raise(ErrorCode::ZeroColumnNorm,
            "column " + std::to_string(j) +
                " of base + up*down is identically zero");
  }
  DenseMatrix merged(d, k);
  for (size_t i = 0; i < d; ++i)
    for (size_t j = 0; j < k; ++j)
      merged.at(i, j) = params.magnitude[j] * direction.at(i, j) / norms[j];
  return merged;
}

DenseMatrix matrix_from_json(const nlohmann::json& value) {
  if (!value.is_array() || value.empty())
    raise(ErrorCode::DimensionMismatch,
          "a matrix must be a non-empty array of rows");
  DenseMatrix out;
  out.rows = value.size();
  for (const nlohmann::json& row : value) {
    if (!row.is_array() || row.empty())
      raise(ErrorCode::DimensionMismatch, "every row must be a non-empty array");
    if (out.cols == 0) out.cols = row.size();
    if (row.size() != out.cols)
      raise(ErrorCode::DimensionMismatch, "rows differ in length");
    for (const nlohmann::json& cell : row) {
      if (!cell.is_number())
        raise(ErrorCode::DimensionMismatch, "matrix entries must be numbers");
      out.data.push_back(cell.get<double>());
    }
  }
  return out;
}

nlohmann::json matrix_to_json(const DenseMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (size_t i = 0; i < m.rows; ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (size_t j = 0; j < m.cols; ++j) row.push_back(m.at(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

DoraParams dora_params_from_json(const nlohmann::json& value) {
  for (const char* key : {"base", "up", "down", "magnitude"}) {
    if (!value.contains(key))
      raise(ErrorCode::DimensionMismatch,
            std::string("missing key \"") + key + "\"");
  }
  DoraParams params;
  params.base = matrix_from_json(value.at("base"));
  params.up = matrix_from_json(value.at("up"));
  params.down = matrix_from_json(value.at("down"));
  const nlohmann::json& mag = value.at("magnitude");
  if (!mag.is_array())
    raise(ErrorCode::DimensionMismatch, "\"magnitude\" must be an array");
  for (const nlohmann::json& cell : mag) {
    if (!cell.is_number())
      raise(ErrorCode::DimensionMismatch, "magnitude entries must be numbers");
    params.magnitude.push_back(cell.get<double>());
  }
  return params;
}

nlohmann::json dora_params_to_json(const DoraParams& params) {
  return nlohmann::json{{"base", matrix_to_json(params.base)},
                        {"up", matrix_to_json(params.up)},
                        {"down", matrix_to_json(params.down)},
                        {"magnitude", params.magnitude}};
}

}  // namespace holispoof
