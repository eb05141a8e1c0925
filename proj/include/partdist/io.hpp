// Copyright 2026 the partdist authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <fstream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "partdist/common.hpp"
#include "partdist/matops.hpp"
#include "partdist/measurement.hpp"
#include "partdist/states.hpp"

namespace partdist::io {

using json = nlohmann::json;

// Matrix files are JSON objects {"rows", "cols", "re", "im"?, "split_N"?}.
// "im" defaults to zeros (real-matrix shorthand); "split_N" declares the
// first-factor dimension of a bipartite operator.

inline json matrix_to_json(const Matrix& m, std::optional<int> split_n = std::nullopt) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json re_row = json::array();
    json im_row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re_row.push_back(m(r, c).real());
      im_row.push_back(m(r, c).imag());
    }
    re.push_back(std::move(re_row));
    im.push_back(std::move(im_row));
  }
  json out{{"rows", m.rows()}, {"cols", m.cols()}, {"re", std::move(re)}, {"im", std::move(im)}};
  if (split_n) out["split_N"] = *split_n;
  return out;
}

struct LoadedMatrix {
  Matrix matrix;
  std::optional<int> split_n;
};

namespace detail {

inline void fill_part(const json& rows_json, Matrix& m, bool imaginary, const char* field) {
  if (!rows_json.is_array() || static_cast<Eigen::Index>(rows_json.size()) != m.rows()) {
    throw InputError(std::string("matrix field \"") + field + "\" does not match \"rows\"");
  }
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const json& row = rows_json[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != m.cols()) {
      throw InputError(std::string("matrix field \"") + field + "\" does not match \"cols\"");
    }
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const json& cell = row[static_cast<std::size_t>(c)];
      if (!cell.is_number()) {
        throw InputError(std::string("matrix field \"") + field + "\" has a non-numeric entry");
      }
      const double value = cell.get<double>();
      if (imaginary) {
        m(r, c) = Complex(m(r, c).real(), value);
      } else {
        m(r, c) = Complex(value, m(r, c).imag());
      }
    }
  }
}

}  // namespace detail

inline LoadedMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw InputError("matrix: expected a JSON object");
  for (const char* field : {"rows", "cols"}) {
    if (!j.contains(field) || !j[field].is_number_integer()) {
      throw InputError(std::string("matrix: missing or non-integer field \"") + field + "\"");
    }
  }
  const int rows = j["rows"].get<int>();
  const int cols = j["cols"].get<int>();
  if (rows < 1 || cols < 1) throw InputError("matrix: \"rows\" and \"cols\" must be positive");
  LoadedMatrix out;
  out.matrix = Matrix::Zero(rows, cols);
  if (!j.contains("re")) throw InputError("matrix: missing field \"re\"");
  detail::fill_part(j["re"], out.matrix, false, "re");
  if (j.contains("im")) detail::fill_part(j["im"], out.matrix, true, "im");
  if (j.contains("split_N")) {
    if (!j["split_N"].is_number_integer()) throw InputError("matrix: field \"split_N\" must be an integer");
    out.split_n = j["split_N"].get<int>();
  }
  require_finite(out.matrix, "matrix file");
  return out;
}

inline json povm_to_json(const POVM& povm) {
  json elements = json::array();
  for (const Matrix& e : povm.elements()) elements.push_back(matrix_to_json(e));
  return json{{"dim", povm.dim()}, {"elements", std::move(elements)}};
}

inline POVM povm_from_json(const json& j) {
  if (!j.is_object() || !j.contains("dim") || !j.contains("elements")) {
    throw InputError("povm: expected fields \"dim\" and \"elements\"");
  }
  const int dim = j["dim"].get<int>();
  if (!j["elements"].is_array() || j["elements"].empty()) {
    throw InputError("povm: field \"elements\" must be a nonempty array");
  }
  std::vector<Matrix> elements;
  for (const json& e : j["elements"]) elements.push_back(matrix_from_json(e).matrix);
  return POVM(dim, std::move(elements));
}

inline json density_to_json(const DensityMatrix& rho) { return matrix_to_json(rho.matrix()); }

inline DensityMatrix density_from_json(const json& j) {
  return DensityMatrix(matrix_from_json(j).matrix);
}

inline json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& err) {
    throw InputError("parse error in " + path + ": " + err.what());
  }
  return j;
}

inline void save_json(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write file: " + path);
  out << j.dump(2) << "\n";
}

inline void save_matrix(const std::string& path, const Matrix& m,
                        std::optional<int> split_n = std::nullopt) {
  save_json(path, matrix_to_json(m, split_n));
}

inline LoadedMatrix load_matrix(const std::string& path) { return matrix_from_json(load_json(path)); }

inline BipartiteOperator bipartite_from_loaded(const LoadedMatrix& loaded,
                                               std::optional<int> n_override = std::nullopt) {
  const std::optional<int> n = n_override ? n_override : loaded.split_n;
  if (!n) throw InputError("bipartite operator: missing field \"split_N\" (or --N)");
  if (loaded.matrix.rows() % *n != 0) {
    throw InputError("bipartite operator: \"split_N\" does not divide the dimension");
  }
  return BipartiteOperator(*n, static_cast<int>(loaded.matrix.rows()) / *n, loaded.matrix);
}

}  // namespace partdist::io
