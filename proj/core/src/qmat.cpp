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

#include "qdiv/qmat.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

namespace qdiv {

namespace {

std::string dims_to_string(const DimList& dims) {
  std::string s = "(";
  for (std::size_t i = 0; i < dims.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(dims[i]);
  }
  return s + ")";
}

// Strides of a mixed-radix index: stride[k] = prod_{j>k} dims[j].
std::vector<int> strides_of(const DimList& dims) {
  std::vector<int> strides(dims.size());
  int acc = 1;
  for (int k = static_cast<int>(dims.size()) - 1; k >= 0; --k) {
    strides[static_cast<std::size_t>(k)] = acc;
    acc *= dims[static_cast<std::size_t>(k)];
  }
  return strides;
}

void validate_subsystem_list(std::span<const int> subs, std::size_t count,
                             const char* what) {
  if (subs.empty()) throw std::invalid_argument(std::string(what) + ": empty subsystem list");
  for (std::size_t i = 0; i < subs.size(); ++i) {
    if (subs[i] < 0 || subs[i] >= static_cast<int>(count))
      throw std::invalid_argument(std::string(what) + ": subsystem index out of range");
    if (i > 0 && subs[i] <= subs[i - 1])
      throw std::invalid_argument(std::string(what) + ": subsystem indices must be strictly ascending");
  }
}

double relative_kernel_threshold(const RVector& values) {
  double scale = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i)
    scale = std::max(scale, std::abs(values[i]));
  return tol::support_rank * scale;
}

}  // namespace

int total_dim(const DimList& dims) {
  if (dims.empty()) throw std::invalid_argument("empty dims profile");
  long long acc = 1;
  for (int d : dims) {
    if (d <= 0) throw std::invalid_argument("dims entries must be positive");
    acc *= d;
    if (acc > (1 << 24)) throw std::invalid_argument("dims profile overflows");
  }
  return static_cast<int>(acc);
}

EigenSystem eigh(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success)
    throw std::runtime_error("eigendecomposition failed to converge");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

// ---------------------------------------------------------------------------
// HermitianOperator
// ---------------------------------------------------------------------------

HermitianOperator::HermitianOperator(Matrix data, DimList dims)
    : data_(std::move(data)), dims_(std::move(dims)) {
  if (data_.rows() != data_.cols())
    throw std::invalid_argument("HermitianOperator: matrix must be square");
  if (total_dim(dims_) != data_.rows())
    throw std::invalid_argument("HermitianOperator: dims profile " + dims_to_string(dims_) +
                                " does not match dimension " + std::to_string(data_.rows()));
  const double scale = std::max(1.0, data_.cwiseAbs().maxCoeff());
  const double defect = (data_ - data_.adjoint()).cwiseAbs().maxCoeff();
  if (defect > tol::hermiticity * scale)
    throw std::invalid_argument("HermitianOperator: matrix is not Hermitian (defect " +
                                std::to_string(defect) + ")");
  data_ = ((data_ + data_.adjoint()) * 0.5).eval();
}

HermitianOperator HermitianOperator::identity(DimList dims) {
  const int d = total_dim(dims);
  return HermitianOperator(Matrix::Identity(d, d), std::move(dims));
}

HermitianOperator HermitianOperator::zero(DimList dims) {
  const int d = total_dim(dims);
  return HermitianOperator(Matrix::Zero(d, d), std::move(dims));
}

HermitianOperator HermitianOperator::reshaped(DimList dims) const {
  if (total_dim(dims) != dim())
    throw std::invalid_argument("reshaped: dims profile does not match dimension");
  HermitianOperator out = *this;
  out.dims_ = std::move(dims);
  return out;
}

// ---------------------------------------------------------------------------
// DensityOperator
// ---------------------------------------------------------------------------

DensityOperator::DensityOperator(HermitianOperator op) : op_(std::move(op)), eig_() {
  EigenSystem es = eigh(op_.matrix());
  const double trace_before = es.values.sum();
  if (std::abs(trace_before - 1.0) > tol::trace_one)
    throw std::invalid_argument("DensityOperator: trace deviates from 1 by " +
                                std::to_string(std::abs(trace_before - 1.0)));
  double clamped_trace = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    if (es.values[i] < -tol::psd_clamp)
      throw std::invalid_argument("DensityOperator: negative eigenvalue " +
                                  std::to_string(es.values[i]));
    if (es.values[i] < 0.0) es.values[i] = 0.0;
    clamped_trace += es.values[i];
  }
  es.values /= clamped_trace;
  Matrix rebuilt = es.vectors * es.values.asDiagonal() * es.vectors.adjoint();
  op_ = HermitianOperator(std::move(rebuilt), op_.dims());
  eig_ = std::move(es);
}

DensityOperator DensityOperator::maximally_mixed(DimList dims) {
  const int d = total_dim(dims);
  return DensityOperator(Matrix::Identity(d, d) / static_cast<double>(d), std::move(dims));
}

DensityOperator DensityOperator::basis_state(DimList dims, int index) {
  const int d = total_dim(dims);
  if (index < 0 || index >= d) throw std::invalid_argument("basis_state: index out of range");
  Matrix m = Matrix::Zero(d, d);
  m(index, index) = 1.0;
  return DensityOperator(std::move(m), std::move(dims));
}

DensityOperator DensityOperator::reshaped(DimList dims) const {
  DensityOperator out = *this;
  out.op_ = op_.reshaped(std::move(dims));
  return out;
}

// ---------------------------------------------------------------------------
// PureStateVector
// ---------------------------------------------------------------------------

PureStateVector::PureStateVector(CVector amplitudes, DimList dims)
    : amp_(std::move(amplitudes)), dims_(std::move(dims)) {
  if (total_dim(dims_) != amp_.size())
    throw std::invalid_argument("PureStateVector: dims profile does not match length");
  const double norm = amp_.norm();
  if (std::abs(norm - 1.0) > tol::unit_norm)
    throw std::invalid_argument("PureStateVector: norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  amp_ /= norm;
}

PureStateVector PureStateVector::basis_state(DimList dims, int index) {
  const int d = total_dim(dims);
  if (index < 0 || index >= d) throw std::invalid_argument("basis_state: index out of range");
  CVector v = CVector::Zero(d);
  v[index] = 1.0;
  return PureStateVector(std::move(v), std::move(dims));
}

PureStateVector PureStateVector::maximally_entangled(int d) {
  CVector v = CVector::Zero(d * d);
  const double a = 1.0 / std::sqrt(static_cast<double>(d));
  for (int i = 0; i < d; ++i) v[i * d + i] = a;
  return PureStateVector(std::move(v), {d, d});
}

DensityOperator PureStateVector::to_density() const {
  Matrix m = amp_ * amp_.adjoint();
  return DensityOperator(std::move(m), dims_);
}

// ---------------------------------------------------------------------------
// QuantumChannel
// ---------------------------------------------------------------------------

namespace {

// Choi matrix J = sum_k vec(K_k) vec(K_k)^dag with row-major vectorization,
// i.e. vec(K)[(b,i)] = K(b,i); profile (dim_out, dim_in).
HermitianOperator choi_of(const std::vector<Matrix>& kraus, int dim_in, int dim_out) {
  Matrix j = Matrix::Zero(dim_in * dim_out, dim_in * dim_out);
  CVector w(dim_in * dim_out);
  for (const Matrix& k : kraus) {
    for (int b = 0; b < dim_out; ++b)
      for (int i = 0; i < dim_in; ++i) w[b * dim_in + i] = k(b, i);
    j += w * w.adjoint();
  }
  return HermitianOperator(std::move(j), DimList{dim_out, dim_in});
}

}  // namespace

QuantumChannel::QuantumChannel(std::vector<Matrix> kraus)
    : kraus_(std::move(kraus)),
      dim_in_(0),
      dim_out_(0),
      choi_(HermitianOperator::zero({1})) {
  if (kraus_.empty()) throw std::invalid_argument("QuantumChannel: empty Kraus list");
  dim_out_ = static_cast<int>(kraus_[0].rows());
  dim_in_ = static_cast<int>(kraus_[0].cols());
  for (const Matrix& k : kraus_)
    if (k.rows() != dim_out_ || k.cols() != dim_in_)
      throw std::invalid_argument("QuantumChannel: inconsistent Kraus shapes");

  Matrix sum = Matrix::Zero(dim_in_, dim_in_);
  for (const Matrix& k : kraus_) sum += k.adjoint() * k;
  const double tp_defect = (sum - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
  if (tp_defect > tol::cptp)
    throw std::invalid_argument("QuantumChannel: not trace preserving (defect " +
                                std::to_string(tp_defect) + ")");

  choi_ = choi_of(kraus_, dim_in_, dim_out_);
  EigenSystem es = eigh(choi_.matrix());
  const double scale = std::max(1.0, es.values.cwiseAbs().maxCoeff());
  if (es.values.minCoeff() < -tol::choi_psd * scale)
    throw std::invalid_argument("QuantumChannel: Choi matrix is not positive semidefinite");
  const HermitianOperator marginal = partial_trace(choi_, std::array<int, 1>{1});
  const double marg_defect =
      (marginal.matrix() - Matrix::Identity(dim_in_, dim_in_)).cwiseAbs().maxCoeff();
  if (marg_defect > tol::cptp)
    throw std::invalid_argument("QuantumChannel: Choi marginal is not the identity");
}

QuantumChannel QuantumChannel::identity(int dim) {
  return QuantumChannel({Matrix::Identity(dim, dim)});
}

QuantumChannel QuantumChannel::replacer(const DensityOperator& tau, int dim_in) {
  const EigenSystem& es = tau.spectrum();
  const int d_out = tau.dim();
  std::vector<Matrix> kraus;
  const double threshold = relative_kernel_threshold(es.values);
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values[k] <= threshold) continue;
    const double amp = std::sqrt(es.values[k]);
    for (int i = 0; i < dim_in; ++i) {
      Matrix op = Matrix::Zero(d_out, dim_in);
      op.col(i) = amp * es.vectors.col(k);
      kraus.push_back(std::move(op));
    }
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel QuantumChannel::depolarizing(double p, int dim) {
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("depolarizing: p outside [0,1]");
  std::vector<Matrix> kraus;
  if (p < 1.0) kraus.push_back(std::sqrt(1.0 - p) * Matrix::Identity(dim, dim));
  if (p > 0.0) {
    QuantumChannel rep = replacer(DensityOperator::maximally_mixed({dim}), dim);
    for (const Matrix& k : rep.kraus()) kraus.push_back(std::sqrt(p) * k);
  }
  return QuantumChannel(std::move(kraus));
}

QuantumChannel QuantumChannel::from_choi(const HermitianOperator& choi, int dim_in,
                                         int dim_out) {
  if (choi.dim() != dim_in * dim_out)
    throw std::invalid_argument("from_choi: dimension mismatch");
  EigenSystem es = eigh(choi.matrix());
  const double threshold = relative_kernel_threshold(es.values);
  if (es.values.minCoeff() < -std::max(tol::choi_psd, threshold))
    throw std::invalid_argument("from_choi: Choi matrix is not positive semidefinite");
  std::vector<Matrix> kraus;
  for (Eigen::Index k = 0; k < es.values.size(); ++k) {
    if (es.values[k] <= threshold) continue;
    const double amp = std::sqrt(es.values[k]);
    Matrix op(dim_out, dim_in);
    for (int b = 0; b < dim_out; ++b)
      for (int i = 0; i < dim_in; ++i) op(b, i) = amp * es.vectors(b * dim_in + i, k);
    kraus.push_back(std::move(op));
  }
  return QuantumChannel(std::move(kraus));
}

// ---------------------------------------------------------------------------
// Spectral calculus
// ---------------------------------------------------------------------------

HermitianOperator matrix_function(const HermitianOperator& h,
                                  const std::function<double(double)>& f,
                                  KernelPolicy policy) {
  EigenSystem es = eigh(h.matrix());
  const double threshold = relative_kernel_threshold(es.values);
  RVector mapped(es.values.size());
  for (Eigen::Index i = 0; i < es.values.size(); ++i) {
    const double lambda = es.values[i];
    const bool in_kernel = std::abs(lambda) <= threshold;
    if (in_kernel && policy != KernelPolicy::error_on_kernel) {
      mapped[i] = 0.0;
      continue;
    }
    const double value = f(in_kernel ? 0.0 : lambda);
    if (!std::isfinite(value))
      throw spectral_domain_error("matrix_function: f undefined at eigenvalue " +
                                  std::to_string(lambda));
    mapped[i] = value;
  }
  Matrix out = es.vectors * mapped.asDiagonal() * es.vectors.adjoint();
  return HermitianOperator(std::move(out), h.dims());
}

double positive_part_trace(const Matrix& x) {
  EigenSystem es = eigh(x);
  double acc = 0.0;
  for (Eigen::Index i = 0; i < es.values.size(); ++i)
    if (es.values[i] > 0.0) acc += es.values[i];
  return acc;
}

double positive_part_trace(const HermitianOperator& x) {
  return positive_part_trace(x.matrix());
}

double trace_norm(const HermitianOperator& x) {
  EigenSystem es = eigh(x.matrix());
  return es.values.cwiseAbs().sum();
}

// ---------------------------------------------------------------------------
// Tensor algebra
// ---------------------------------------------------------------------------

HermitianOperator tensor(const HermitianOperator& a, const HermitianOperator& b) {
  Matrix out = Eigen::kroneckerProduct(a.matrix(), b.matrix());
  DimList dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return HermitianOperator(std::move(out), std::move(dims));
}

DensityOperator tensor(const DensityOperator& a, const DensityOperator& b) {
  HermitianOperator h = tensor(a.op(), b.op());
  return DensityOperator(std::move(h));
}

PureStateVector tensor(const PureStateVector& a, const PureStateVector& b) {
  CVector out = Eigen::kroneckerProduct(a.amplitudes(), b.amplitudes());
  DimList dims = a.dims();
  dims.insert(dims.end(), b.dims().begin(), b.dims().end());
  return PureStateVector(std::move(out), std::move(dims));
}

QuantumChannel tensor(const QuantumChannel& a, const QuantumChannel& b) {
  std::vector<Matrix> kraus;
  kraus.reserve(a.kraus().size() * b.kraus().size());
  for (const Matrix& ka : a.kraus())
    for (const Matrix& kb : b.kraus())
      kraus.push_back(Eigen::kroneckerProduct(ka, kb));
  return QuantumChannel(std::move(kraus));
}

HermitianOperator tensor_power(const HermitianOperator& a, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be positive");
  HermitianOperator out = a;
  for (int i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

DensityOperator tensor_power(const DensityOperator& a, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be positive");
  DensityOperator out = a;
  for (int i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

QuantumChannel tensor_power(const QuantumChannel& a, int n) {
  if (n < 1) throw std::invalid_argument("tensor_power: n must be positive");
  QuantumChannel out = a;
  for (int i = 1; i < n; ++i) out = tensor(out, a);
  return out;
}

HermitianOperator partial_trace(const HermitianOperator& x, std::span<const int> keep) {
  const DimList& dims = x.dims();
  validate_subsystem_list(keep, dims.size(), "partial_trace");

  std::vector<int> traced;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (std::find(keep.begin(), keep.end(), s) == keep.end()) traced.push_back(s);

  if (traced.empty()) {
    DimList kept_dims;
    for (int s : keep) kept_dims.push_back(dims[static_cast<std::size_t>(s)]);
    return HermitianOperator(x.matrix(), std::move(kept_dims));
  }

  const std::vector<int> strides = strides_of(dims);
  DimList kept_dims, traced_dims;
  std::vector<int> kept_strides, traced_strides;
  for (int s : keep) {
    kept_dims.push_back(dims[static_cast<std::size_t>(s)]);
    kept_strides.push_back(strides[static_cast<std::size_t>(s)]);
  }
  for (int s : traced) {
    traced_dims.push_back(dims[static_cast<std::size_t>(s)]);
    traced_strides.push_back(strides[static_cast<std::size_t>(s)]);
  }
  const int dim_keep = total_dim(kept_dims);
  const int dim_traced = total_dim(traced_dims);

  // Offset of each compound index within the full space.
  auto offsets = [](const DimList& sub_dims, const std::vector<int>& sub_strides, int count) {
    std::vector<int> out(static_cast<std::size_t>(count));
    for (int idx = 0; idx < count; ++idx) {
      int rem = idx, offset = 0;
      for (int k = static_cast<int>(sub_dims.size()) - 1; k >= 0; --k) {
        const int coord = rem % sub_dims[static_cast<std::size_t>(k)];
        rem /= sub_dims[static_cast<std::size_t>(k)];
        offset += coord * sub_strides[static_cast<std::size_t>(k)];
      }
      out[static_cast<std::size_t>(idx)] = offset;
    }
    return out;
  };
  const std::vector<int> kept_offsets = offsets(kept_dims, kept_strides, dim_keep);
  const std::vector<int> traced_offsets = offsets(traced_dims, traced_strides, dim_traced);

  Matrix out = Matrix::Zero(dim_keep, dim_keep);
  const Matrix& m = x.matrix();
  for (int r = 0; r < dim_keep; ++r)
    for (int c = 0; c < dim_keep; ++c) {
      Complex acc = 0.0;
      for (int t = 0; t < dim_traced; ++t)
        acc += m(kept_offsets[static_cast<std::size_t>(r)] + traced_offsets[static_cast<std::size_t>(t)],
                 kept_offsets[static_cast<std::size_t>(c)] + traced_offsets[static_cast<std::size_t>(t)]);
      out(r, c) = acc;
    }
  return HermitianOperator(std::move(out), std::move(kept_dims));
}

namespace {

// index map: entry r of the permuted space reads from old index map[r]
std::vector<int> permutation_index_map(const DimList& dims, std::span<const int> new_to_old) {
  if (new_to_old.size() != dims.size())
    throw std::invalid_argument("permute_subsystems: permutation length mismatch");
  std::vector<bool> seen(dims.size(), false);
  for (int s : new_to_old) {
    if (s < 0 || s >= static_cast<int>(dims.size()) || seen[static_cast<std::size_t>(s)])
      throw std::invalid_argument("permute_subsystems: not a permutation");
    seen[static_cast<std::size_t>(s)] = true;
  }
  const std::vector<int> old_strides = strides_of(dims);
  DimList new_dims(dims.size());
  for (std::size_t j = 0; j < dims.size(); ++j)
    new_dims[j] = dims[static_cast<std::size_t>(new_to_old[j])];
  const int d = total_dim(dims);
  std::vector<int> map(static_cast<std::size_t>(d));
  for (int r = 0; r < d; ++r) {
    int rem = r, old_index = 0;
    for (int j = static_cast<int>(new_dims.size()) - 1; j >= 0; --j) {
      const int coord = rem % new_dims[static_cast<std::size_t>(j)];
      rem /= new_dims[static_cast<std::size_t>(j)];
      old_index += coord * old_strides[static_cast<std::size_t>(new_to_old[static_cast<std::size_t>(j)])];
    }
    map[static_cast<std::size_t>(r)] = old_index;
  }
  return map;
}

}  // namespace

HermitianOperator permute_subsystems(const HermitianOperator& x,
                                     std::span<const int> new_to_old) {
  const std::vector<int> map = permutation_index_map(x.dims(), new_to_old);
  DimList new_dims(x.dims().size());
  for (std::size_t j = 0; j < new_dims.size(); ++j)
    new_dims[j] = x.dims()[static_cast<std::size_t>(new_to_old[j])];
  const int d = x.dim();
  Matrix out(d, d);
  const Matrix& m = x.matrix();
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c)
      out(r, c) = m(map[static_cast<std::size_t>(r)], map[static_cast<std::size_t>(c)]);
  return HermitianOperator(std::move(out), std::move(new_dims));
}

CVector permute_subsystem_vector(const CVector& v, const DimList& dims,
                                 std::span<const int> new_to_old) {
  if (total_dim(dims) != v.size())
    throw std::invalid_argument("permute_subsystem_vector: dims do not match length");
  const std::vector<int> map = permutation_index_map(dims, new_to_old);
  CVector out(v.size());
  for (Eigen::Index r = 0; r < v.size(); ++r) out[r] = v[map[static_cast<std::size_t>(r)]];
  return out;
}

// ---------------------------------------------------------------------------
// Channel action
// ---------------------------------------------------------------------------

LiftedKraus lift_kraus(const QuantumChannel& chan, const DimList& dims,
                       std::span<const int> acting) {
  validate_subsystem_list(acting, dims.size(), "apply_channel");
  int acting_dim = 1;
  for (int s : acting) acting_dim *= dims[static_cast<std::size_t>(s)];
  if (acting_dim != chan.dim_in())
    throw std::invalid_argument("apply_channel: acting subsystems have dimension " +
                                std::to_string(acting_dim) + ", channel expects " +
                                std::to_string(chan.dim_in()));

  // Reorder so the acting block comes first, then lift K -> K (x) I_rest,
  // then put the output block back at the position of the first acting index.
  std::vector<int> rest;
  for (int s = 0; s < static_cast<int>(dims.size()); ++s)
    if (std::find(acting.begin(), acting.end(), s) == acting.end()) rest.push_back(s);

  std::vector<int> to_front(acting.begin(), acting.end());
  to_front.insert(to_front.end(), rest.begin(), rest.end());
  const std::vector<int> in_map = permutation_index_map(dims, to_front);

  int rest_dim = 1;
  for (int s : rest) rest_dim *= dims[static_cast<std::size_t>(s)];

  // Output profile before the back-permutation: (dim_out, rest...).
  DimList mid_dims{chan.dim_out()};
  for (int s : rest) mid_dims.push_back(dims[static_cast<std::size_t>(s)]);

  // Back-permutation: output block lands after the rest subsystems whose
  // original index precedes acting[0].
  int n_before = 0;
  for (int s : rest)
    if (s < acting[0]) ++n_before;
  std::vector<int> back(mid_dims.size());
  for (int j = 0; j < n_before; ++j) back[static_cast<std::size_t>(j)] = j + 1;
  back[static_cast<std::size_t>(n_before)] = 0;
  for (int j = n_before + 1; j < static_cast<int>(mid_dims.size()); ++j)
    back[static_cast<std::size_t>(j)] = j;
  // final row r reads mid row fin2mid[r]; scattering writes need the inverse
  const std::vector<int> fin2mid = permutation_index_map(mid_dims, back);
  std::vector<int> mid2fin(fin2mid.size());
  for (std::size_t r = 0; r < fin2mid.size(); ++r)
    mid2fin[static_cast<std::size_t>(fin2mid[r])] = static_cast<int>(r);

  DimList out_dims(mid_dims.size());
  for (std::size_t j = 0; j < out_dims.size(); ++j)
    out_dims[j] = mid_dims[static_cast<std::size_t>(back[j])];

  const int d_in_total = total_dim(dims);
  const int d_out_total = chan.dim_out() * rest_dim;
  LiftedKraus lifted;
  lifted.out_dims = std::move(out_dims);
  lifted.ops.reserve(chan.kraus().size());
  for (const Matrix& k : chan.kraus()) {
    Matrix full = Matrix::Zero(d_out_total, d_in_total);
    for (int b = 0; b < chan.dim_out(); ++b)
      for (int a = 0; a < chan.dim_in(); ++a) {
        const Complex entry = k(b, a);
        if (entry == Complex(0.0, 0.0)) continue;
        for (int t = 0; t < rest_dim; ++t) {
          const int mid_row = b * rest_dim + t;
          const int in_col = in_map[static_cast<std::size_t>(a * rest_dim + t)];
          full(mid2fin[static_cast<std::size_t>(mid_row)], in_col) = entry;
        }
      }
    lifted.ops.push_back(std::move(full));
  }
  return lifted;
}

DensityOperator apply_lifted(const LiftedKraus& lifted, const CVector& psi) {
  const int d_out = static_cast<int>(lifted.ops[0].rows());
  Matrix out = Matrix::Zero(d_out, d_out);
  for (const Matrix& f : lifted.ops) {
    const CVector w = f * psi;
    out.noalias() += w * w.adjoint();
  }
  return DensityOperator(std::move(out), lifted.out_dims);
}

DensityOperator apply_lifted(const LiftedKraus& lifted, const Matrix& rho) {
  const int d_out = static_cast<int>(lifted.ops[0].rows());
  Matrix out = Matrix::Zero(d_out, d_out);
  for (const Matrix& f : lifted.ops) out.noalias() += f * rho * f.adjoint();
  return DensityOperator(std::move(out), lifted.out_dims);
}

DensityOperator apply_channel(const QuantumChannel& chan, const DensityOperator& rho,
                              std::span<const int> acting) {
  const LiftedKraus lifted = lift_kraus(chan, rho.dims(), acting);
  return apply_lifted(lifted, rho.matrix());
}

// ---------------------------------------------------------------------------
// Permutation symmetry
// ---------------------------------------------------------------------------

namespace {

// Subsystem blocks of a state on n copies of a fixed block profile.
int block_size_of(const DimList& dims, int copies, const char* what) {
  if (copies < 1) throw std::invalid_argument(std::string(what) + ": copies must be positive");
  if (dims.size() % static_cast<std::size_t>(copies) != 0)
    throw std::invalid_argument(std::string(what) + ": profile does not split into copies");
  const int block = static_cast<int>(dims.size()) / copies;
  for (int c = 1; c < copies; ++c)
    for (int t = 0; t < block; ++t)
      if (dims[static_cast<std::size_t>(c * block + t)] != dims[static_cast<std::size_t>(t)])
        throw std::invalid_argument(std::string(what) + ": copies have unequal profiles");
  return block;
}

std::vector<int> block_permutation(const std::vector<int>& pi, int block) {
  std::vector<int> perm(pi.size() * static_cast<std::size_t>(block));
  for (std::size_t j = 0; j < pi.size(); ++j)
    for (int t = 0; t < block; ++t)
      perm[j * static_cast<std::size_t>(block) + static_cast<std::size_t>(t)] =
          pi[j] * block + t;
  return perm;
}

}  // namespace

DensityOperator symmetrize(const DensityOperator& psi, int copies) {
  const int block = block_size_of(psi.dims(), copies, "symmetrize");
  std::vector<int> pi(static_cast<std::size_t>(copies));
  std::iota(pi.begin(), pi.end(), 0);
  Matrix acc = Matrix::Zero(psi.dim(), psi.dim());
  int count = 0;
  do {
    const std::vector<int> perm = block_permutation(pi, block);
    acc += permute_subsystems(psi.op(), perm).matrix();
    ++count;
  } while (std::next_permutation(pi.begin(), pi.end()));
  acc /= static_cast<double>(count);
  return DensityOperator(std::move(acc), psi.dims());
}

double permutation_invariance_defect(const DensityOperator& psi, int copies) {
  const int block = block_size_of(psi.dims(), copies, "permutation_invariance_defect");
  double defect = 0.0;
  for (int i = 0; i < copies; ++i)
    for (int j = i + 1; j < copies; ++j) {
      std::vector<int> pi(static_cast<std::size_t>(copies));
      std::iota(pi.begin(), pi.end(), 0);
      std::swap(pi[static_cast<std::size_t>(i)], pi[static_cast<std::size_t>(j)]);
      const std::vector<int> perm = block_permutation(pi, block);
      const Matrix swapped = permute_subsystems(psi.op(), perm).matrix();
      defect = std::max(defect, (swapped - psi.matrix()).cwiseAbs().maxCoeff());
    }
  return defect;
}

PureStateVector symmetric_purification(const DensityOperator& omega, int copies) {
  block_size_of(omega.dims(), copies, "symmetric_purification");
  if (permutation_invariance_defect(omega, copies) > tol::permutation_invariance)
    throw std::invalid_argument(
        "symmetric_purification: input is not permutation invariant");

  const HermitianOperator root =
      matrix_function(omega.op(), [](double x) { return std::sqrt(x); },
                      KernelPolicy::map_zero_to_zero);
  const int d = omega.dim();
  CVector amp(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) amp[static_cast<Eigen::Index>(i) * d + j] = root.matrix()(i, j);
  DimList dims = omega.dims();
  dims.insert(dims.end(), omega.dims().begin(), omega.dims().end());
  return PureStateVector(std::move(amp), std::move(dims));
}

}  // namespace qdiv
