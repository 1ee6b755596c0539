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

#include "qdiv/chandiv.hpp"

#include "qdiv/random.hpp"

#include <algorithm>
#include <cmath>

namespace qdiv::chandiv {

namespace {

constexpr double kInfinity = std::numeric_limits<double>::infinity();
constexpr double kDeadValue = -1e12;  // stands in for -inf in gradient probes
constexpr double kFdStep = 1e-5;

void require_matching_channels(const QuantumChannel& n, const QuantumChannel& m) {
  if (n.dim_in() != m.dim_in() || n.dim_out() != m.dim_out())
    throw std::invalid_argument("channel divergence: channel dimension mismatch");
}

CVector complexify(const Eigen::VectorXd& x) {
  CVector v(x.size() / 2);
  for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = Complex(x[2 * i], x[2 * i + 1]);
  return v;
}

Eigen::VectorXd realify(const CVector& v) {
  Eigen::VectorXd x(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    x[2 * i] = v[i].real();
    x[2 * i + 1] = v[i].imag();
  }
  return x;
}

bool lexicographically_smaller(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  for (Eigen::Index i = 0; i < a.size() && i < b.size(); ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return a.size() < b.size();
}

}  // namespace

namespace detail {

AscentOutcome sphere_ascend(const std::function<double(const Eigen::VectorXd&)>& objective,
                            Eigen::VectorXd start, int max_iterations, double tol) {
  start.normalize();
  double value = objective(start);
  if (value == kInfinity) return {std::move(start), value};

  Eigen::VectorXd x = std::move(start);
  Eigen::VectorXd gradient(x.size());
  Eigen::VectorXd probe(x.size());
  double step = 0.25;
  int stall = 0;

  for (int iter = 0; iter < max_iterations; ++iter) {
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      probe = x;
      probe[i] = x[i] + kFdStep;
      double up = objective(probe);
      if (up == kInfinity) return {std::move(probe), up};
      probe[i] = x[i] - kFdStep;
      double down = objective(probe);
      if (down == kInfinity) return {std::move(probe), down};
      if (!std::isfinite(up)) up = kDeadValue;
      if (!std::isfinite(down)) down = kDeadValue;
      gradient[i] = (up - down) / (2.0 * kFdStep);
    }
    const double gnorm = gradient.norm();
    if (gnorm < 1e-14) break;
    gradient /= gnorm;

    bool improved = false;
    double improvement = 0.0;
    for (double s = step; s > 1e-13; s *= 0.5) {
      Eigen::VectorXd candidate = (x + s * gradient).normalized();
      const double cv = objective(candidate);
      if (cv == kInfinity) return {std::move(candidate), cv};
      if (cv > value) {
        improvement = cv - value;
        x = std::move(candidate);
        value = cv;
        step = std::min(s * 2.0, 1.0);
        improved = true;
        break;
      }
    }
    if (!improved) break;
    stall = improvement < tol ? stall + 1 : 0;
    if (stall >= 3) break;
  }
  return {std::move(x), value};
}

}  // namespace detail

ChannelDivergenceResult channel_divergence(const QuantumChannel& n,
                                           const QuantumChannel& m,
                                           const statediv::DivergenceKind& kind,
                                           const OptimizerConfig& cfg,
                                           std::span<const PureStateVector> seed_inputs) {
  require_matching_channels(n, m);
  const int ref = n.dim_in();
  const DimList in_dims{ref, n.dim_in()};
  const int d = ref * n.dim_in();
  const std::array<int, 1> acting{1};
  const LiftedKraus lifted_n = lift_kraus(n, in_dims, acting);
  const LiftedKraus lifted_m = lift_kraus(m, in_dims, acting);

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    CVector v = complexify(x);
    const double norm = v.norm();
    if (norm < 1e-12) return kDeadValue;
    v /= norm;
    const DensityOperator rho = apply_lifted(lifted_n, v);
    const DensityOperator sigma = apply_lifted(lifted_m, v);
    return statediv::state_divergence(kind, rho, sigma).value;
  };

  std::vector<Eigen::VectorXd> starts;
  for (const PureStateVector& seed : seed_inputs) {
    if (seed.dim() != d)
      throw std::invalid_argument("channel_divergence: seed input dimension mismatch");
    starts.push_back(realify(seed.amplitudes()));
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = Rng::derive(cfg.seed, static_cast<std::uint64_t>(r));
    Eigen::VectorXd x(2 * d);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    starts.push_back(std::move(x));
  }
  if (starts.empty())
    starts.push_back(realify(PureStateVector::maximally_entangled(ref).amplitudes()));

  bool have_best = false;
  detail::AscentOutcome best{Eigen::VectorXd(), -kInfinity};
  for (Eigen::VectorXd& start : starts) {
    detail::AscentOutcome outcome =
        detail::sphere_ascend(objective, std::move(start), cfg.max_iterations,
                              cfg.convergence_tol);
    const bool better =
        !have_best || outcome.value > best.value ||
        (outcome.value == best.value && lexicographically_smaller(outcome.point, best.point));
    if (better) {
      best = std::move(outcome);
      have_best = true;
    }
    if (best.value == kInfinity) break;
  }

  CVector v = complexify(best.point);
  v /= v.norm();
  PureStateVector witness(std::move(v), in_dims);
  const DensityOperator rho = apply_lifted(lifted_n, witness.amplitudes());
  const DensityOperator sigma = apply_lifted(lifted_m, witness.amplitudes());
  return {statediv::state_divergence(kind, rho, sigma), std::move(witness)};
}

PureStateVector product_input_seed(const PureStateVector& a, const PureStateVector& b) {
  if (a.dims().size() != 2 || b.dims().size() != 2)
    throw std::invalid_argument("product_input_seed: expects bipartite inputs");
  PureStateVector joint = tensor(a, b);  // (Ra, Aa, Rb, Ab)
  const std::array<int, 4> regroup{0, 2, 1, 3};
  CVector amp = permute_subsystem_vector(joint.amplitudes(), joint.dims(), regroup);
  const DimList d{a.dims()[0] * b.dims()[0], a.dims()[1] * b.dims()[1]};
  return PureStateVector(std::move(amp), d);
}

std::vector<RegularizedPoint> regularized_estimate(const QuantumChannel& n,
                                                   const QuantumChannel& m,
                                                   const statediv::DivergenceKind& kind,
                                                   int n_max, const OptimizerConfig& cfg) {
  require_matching_channels(n, m);
  if (n_max < 1) throw std::invalid_argument("regularized_estimate: n_max must be positive");
  double budget = 1.0;
  for (int k = 1; k <= n_max; ++k) {
    budget *= static_cast<double>(n.dim_in()) * n.dim_in();
    if (budget > tol::dense_dim_limit)
      throw resource_limit_error("regularized_estimate: (dim_in^2)^k exceeds the dense limit at k=" +
                                 std::to_string(k));
  }

  std::vector<RegularizedPoint> points;
  ChannelDivergenceResult single = channel_divergence(n, m, kind, cfg);
  points.push_back({1, single.value.value, single.witness});

  QuantumChannel nk = n;
  QuantumChannel mk = m;
  for (int k = 2; k <= n_max; ++k) {
    nk = tensor(nk, n);
    mk = tensor(mk, m);
    const PureStateVector seed =
        product_input_seed(points.back().witness, single.witness);
    const std::array<PureStateVector, 1> seeds{seed};
    ChannelDivergenceResult res = channel_divergence(nk, mk, kind, cfg, seeds);
    points.push_back({k, res.value.value / k, res.witness});
  }
  return points;
}

namespace {

DensityOperator state_from_parameter(const Matrix& w, const DimList& dims) {
  Matrix s = w * w.adjoint();
  const double trace = s.trace().real();
  s /= trace;
  return DensityOperator(std::move(s), dims);
}

}  // namespace

AmortizedResult amortized_lowerbound(const QuantumChannel& n, const QuantumChannel& m,
                                     const statediv::DivergenceKind& kind, int ref_dim,
                                     const OptimizerConfig& cfg,
                                     std::span<const StatePair> seed_pairs) {
  require_matching_channels(n, m);
  using Family = statediv::DivergenceKind::Family;
  if (kind.family != Family::umegaki && kind.family != Family::sandwiched)
    throw std::invalid_argument("amortized_lowerbound: kind must be umegaki or sandwiched");
  if (ref_dim < 1) throw std::invalid_argument("amortized_lowerbound: ref_dim must be positive");

  const DimList in_dims{ref_dim, n.dim_in()};
  const int d = ref_dim * n.dim_in();
  const std::array<int, 1> acting{1};
  const LiftedKraus lifted_n = lift_kraus(n, in_dims, acting);
  const LiftedKraus lifted_m = lift_kraus(m, in_dims, acting);

  // parameter layout: two d x d complex matrices, 4 d^2 reals total
  const Eigen::Index block = 2 * static_cast<Eigen::Index>(d) * d;
  auto matrix_of = [&](const Eigen::VectorXd& x, Eigen::Index offset) {
    Matrix w(d, d);
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const Eigen::Index base = offset + 2 * (static_cast<Eigen::Index>(r) * d + c);
        w(r, c) = Complex(x[base], x[base + 1]);
      }
    return w;
  };

  auto objective = [&](const Eigen::VectorXd& x) -> double {
    const Matrix w_null = matrix_of(x, 0);
    const Matrix w_alt = matrix_of(x, block);
    if (w_null.norm() < 1e-12 || w_alt.norm() < 1e-12) return kDeadValue;
    const DensityOperator psi = state_from_parameter(w_null, in_dims);
    const DensityOperator phi = state_from_parameter(w_alt, in_dims);
    const statediv::DivergenceValue inner = statediv::state_divergence(kind, psi, phi);
    if (!inner.finite()) return kDeadValue;
    const statediv::DivergenceValue outer = statediv::state_divergence(
        kind, apply_lifted(lifted_n, psi.matrix()), apply_lifted(lifted_m, phi.matrix()));
    if (!outer.finite()) return kInfinity;
    return outer.value - inner.value;
  };

  std::vector<Eigen::VectorXd> starts;
  // identical-pair seed from the one-shot witness: the subtracted term is 0
  if (ref_dim % n.dim_in() == 0) {
    const ChannelDivergenceResult one_shot = channel_divergence(n, m, kind, cfg);
    const int extra = ref_dim / n.dim_in();
    CVector amp = one_shot.witness.amplitudes();
    if (extra > 1)
      amp = tensor(PureStateVector::basis_state({extra}, 0), one_shot.witness).amplitudes();
    Eigen::VectorXd x(2 * block);
    x.setZero();
    // rank-one parameter W = amp e_0^T for both states
    for (int r = 0; r < d; ++r) {
      const Eigen::Index base = 2 * (static_cast<Eigen::Index>(r) * d);
      x[base] = amp[r].real();
      x[base + 1] = amp[r].imag();
      x[block + base] = amp[r].real();
      x[block + base + 1] = amp[r].imag();
    }
    starts.push_back(std::move(x));
  }
  // identical maximally-mixed pair
  {
    Eigen::VectorXd x(2 * block);
    x.setZero();
    for (int r = 0; r < d; ++r) {
      const Eigen::Index base = 2 * (static_cast<Eigen::Index>(r) * d + r);
      x[base] = 1.0;
      x[block + base] = 1.0;
    }
    starts.push_back(std::move(x));
  }
  // caller-provided pairs, parameterized by the PSD square roots
  for (const StatePair& pair : seed_pairs) {
    if (pair.first.dim() != d || pair.second.dim() != d)
      throw std::invalid_argument("amortized_lowerbound: seed pair dimension mismatch");
    Eigen::VectorXd x(2 * block);
    const Matrix w_null = matrix_function(pair.first.op(),
                                          [](double v) { return std::sqrt(v); },
                                          KernelPolicy::map_zero_to_zero)
                              .matrix();
    const Matrix w_alt = matrix_function(pair.second.op(),
                                         [](double v) { return std::sqrt(v); },
                                         KernelPolicy::map_zero_to_zero)
                             .matrix();
    for (int r = 0; r < d; ++r)
      for (int c = 0; c < d; ++c) {
        const Eigen::Index base = 2 * (static_cast<Eigen::Index>(r) * d + c);
        x[base] = w_null(r, c).real();
        x[base + 1] = w_null(r, c).imag();
        x[block + base] = w_alt(r, c).real();
        x[block + base + 1] = w_alt(r, c).imag();
      }
    starts.push_back(std::move(x));
  }
  for (int r = 0; r < cfg.restarts; ++r) {
    Rng rng = Rng::derive(cfg.seed ^ 0x616d6f72ULL, static_cast<std::uint64_t>(r));
    Eigen::VectorXd x(2 * block);
    for (Eigen::Index i = 0; i < x.size(); ++i) x[i] = rng.normal();
    starts.push_back(std::move(x));
  }

  bool have_best = false;
  detail::AscentOutcome best{Eigen::VectorXd(), -kInfinity};
  for (Eigen::VectorXd& start : starts) {
    detail::AscentOutcome outcome = detail::sphere_ascend(
        objective, std::move(start), cfg.max_iterations, cfg.convergence_tol);
    const bool better =
        !have_best || outcome.value > best.value ||
        (outcome.value == best.value && lexicographically_smaller(outcome.point, best.point));
    if (better) {
      best = std::move(outcome);
      have_best = true;
    }
    if (best.value == kInfinity) break;
  }

  Eigen::VectorXd x = best.point.normalized();
  const DensityOperator psi = state_from_parameter(matrix_of(x, 0), in_dims);
  const DensityOperator phi = state_from_parameter(matrix_of(x, block), in_dims);
  return {best.value, psi, phi};
}

statediv::DivergenceValue choi_dmax(const QuantumChannel& n, const QuantumChannel& m) {
  require_matching_channels(n, m);
  const double scale = 1.0 / n.dim_in();
  DensityOperator jn(n.choi().matrix() * scale, n.choi().dims());
  DensityOperator jm(m.choi().matrix() * scale, m.choi().dims());
  return statediv::dmax(jn, jm);
}

bool positivity_check(const QuantumChannel& n) {
  const EigenSystem es = eigh(n.choi().matrix());
  return es.values.minCoeff() > 1e-10;
}

ReplacerDecomposition replacer_decomposition(const QuantumChannel& n) {
  if (!positivity_check(n))
    throw std::invalid_argument("replacer_decomposition: channel is not positive definite");
  if (n.dim_out() < 2)
    throw std::invalid_argument("replacer_decomposition: output dimension must exceed 1");
  const EigenSystem es = eigh(n.choi().matrix());
  const double lambda_min = es.values.minCoeff();
  const double epsilon = std::min(n.dim_out() * lambda_min, 1.0 - 1e-6);

  const DensityOperator tau = DensityOperator::maximally_mixed({n.dim_out()});
  // J_{R_tau} = tau (x) I_in = I / dim_out in the (out, in) Choi profile
  Matrix j_res = (n.choi().matrix() -
                  (epsilon / n.dim_out()) * Matrix::Identity(n.choi().dim(), n.choi().dim())) /
                 (1.0 - epsilon);
  QuantumChannel residual = QuantumChannel::from_choi(
      HermitianOperator(std::move(j_res), n.choi().dims()), n.dim_in(), n.dim_out());
  const double b = 1.0 - epsilon + epsilon / n.dim_out();
  return {epsilon, tau, std::move(residual), b};
}

}  // namespace qdiv::chandiv
