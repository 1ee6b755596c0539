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

#pragma once

#include "qdiv/qmat.hpp"

#include <cstdint>
#include <string>
#include <string_view>

namespace qdiv::serialize {

/// Fixed 12-significant-digit scientific notation (the CSV number format).
std::string sci12(double value);

/// FNV-1a 64-bit hash, hex encoded; used to fingerprint witness states.
std::string fnv1a_hex(std::string_view bytes);
std::string witness_hash(const PureStateVector& witness);

/// Compact single-line rendering of a Hermitian matrix for check witnesses.
std::string compact_matrix(const Matrix& m);
std::string compact_vector(const CVector& v);

/// State files: {"name": ..., "dims": [..], "matrix": [[[re,im],..],..]}.
DensityOperator read_state_json(const std::string& text);
std::string write_state_json(const DensityOperator& state, const std::string& name);

/// Channel files: {"name": ..., "dim_in": d, "dim_out": d',
///                 "kraus": [[[[re,im],..],..], ...]}. Loading validates the
/// CPTP invariants and rejects malformed channels.
QuantumChannel read_channel_json(const std::string& text);
std::string write_channel_json(const QuantumChannel& chan, const std::string& name);

}  // namespace qdiv::serialize
