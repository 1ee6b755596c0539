// Copyright 2026 The qdiv Authors
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

#include "qdiv/serialize.hpp"

#include <json.hpp>

#include <cstdio>

namespace qdiv::serialize {

using nlohmann::json;

std::string sci12(double value) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.11e", value);
  return buf;
}

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
  return buf;
}

std::string witness_hash(const PureStateVector& witness) {
  std::string bytes;
  bytes.reserve(static_cast<std::size_t>(witness.dim()) * 32);
  for (Eigen::Index i = 0; i < witness.amplitudes().size(); ++i) {
    bytes += sci12(witness.amplitudes()[i].real());
    bytes += ',';
    bytes += sci12(witness.amplitudes()[i].imag());
    bytes += ';';
  }
  return fnv1a_hex(bytes);
}

namespace {

std::string complex_entry(Complex z) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g%+.6gi", z.real(), z.imag());
  return buf;
}

}  // namespace

std::string compact_matrix(const Matrix& m) {
  std::string out = "[";
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    if (r) out += ";";
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c) out += ",";
      out += complex_entry(m(r, c));
    }
  }
  return out + "]";
}

std::string compact_vector(const CVector& v) {
  std::string out = "[";
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ",";
    out += complex_entry(v[i]);
  }
  return out + "]";
}

namespace {

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

Complex complex_from_json(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw std::invalid_argument("expected a complex entry as [re, im]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Matrix matrix_from_json(const json& j, int rows, int cols) {
  if (!j.is_array() || static_cast<int>(j.size()) != rows)
    throw std::invalid_argument("matrix row count mismatch");
  Matrix m(rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      throw std::invalid_argument("matrix column count mismatch");
    for (int c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(complex_to_json(m(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

DensityOperator read_state_json(const std::string& text) {
  const json j = json::parse(text);
  if (!j.contains("dims") || !j["dims"].is_array())
    throw std::invalid_argument("state file: missing dims array");
  DimList dims;
  for (const json& d : j["dims"]) {
    if (!d.is_number_integer()) throw std::invalid_argument("state file: dims must be integers");
    dims.push_back(d.get<int>());
  }
  const int dim = total_dim(dims);
  if (!j.contains("matrix")) throw std::invalid_argument("state file: missing matrix");
  Matrix m = matrix_from_json(j["matrix"], dim, dim);
  return DensityOperator(std::move(m), std::move(dims));
}

std::string write_state_json(const DensityOperator& state, const std::string& name) {
  json j;
  j["name"] = name;
  j["dims"] = state.dims();
  j["matrix"] = matrix_to_json(state.matrix());
  return j.dump(2);
}

QuantumChannel read_channel_json(const std::string& text) {
  const json j = json::parse(text);
  for (const char* key : {"dim_in", "dim_out", "kraus"})
    if (!j.contains(key))
      throw std::invalid_argument(std::string("channel file: missing ") + key);
  const int dim_in = j["dim_in"].get<int>();
  const int dim_out = j["dim_out"].get<int>();
  if (dim_in <= 0 || dim_out <= 0)
    throw std::invalid_argument("channel file: dimensions must be positive");
  if (!j["kraus"].is_array() || j["kraus"].empty())
    throw std::invalid_argument("channel file: kraus must be a nonempty array");
  std::vector<Matrix> kraus;
  for (const json& k : j["kraus"]) kraus.push_back(matrix_from_json(k, dim_out, dim_in));
  return QuantumChannel(std::move(kraus));
}

std::string write_channel_json(const QuantumChannel& chan, const std::string& name) {
  json j;
  j["name"] = name;
  j["dim_in"] = chan.dim_in();
  j["dim_out"] = chan.dim_out();
  json kraus = json::array();
  for (const Matrix& k : chan.kraus()) kraus.push_back(matrix_to_json(k));
  j["kraus"] = std::move(kraus);
  return j.dump(2);
}

}  // namespace qdiv::serialize
