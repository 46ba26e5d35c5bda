#pragma once

// Exact Gaussian kernel quadrature: weights solving K w = k_mu with
// K_ij = k(x_i, x_j) and [k_mu]_i = integral of k(x_i, .) against the
// standard Gaussian measure.

#include <gkq/errors.hpp>
#include <gkq/mercer.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/types.hpp>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace gkq {

/// k_mu(x) = l / sqrt(1 + l^2) * exp(-x^2 / (2 (1 + l^2))).
template <typename Scalar>
Scalar kernel_mean(Scalar length_scale, Scalar x) {
  if (!(length_scale > Scalar(0))) throw DomainError("length-scale must be positive");
  const Scalar l2 = length_scale * length_scale;
  // l / sqrt(1 + l^2) written to stay finite for huge l.
  const Scalar amplitude = Scalar(1) / std::sqrt(Scalar(1) + Scalar(1) / l2);
  return amplitude * std::exp(-x * x / (Scalar(2) * (Scalar(1) + l2)));
}

/// mu(k_mu) = l / sqrt(2 + l^2).
template <typename Scalar>
Scalar kernel_mean_mean(Scalar length_scale) {
  if (!(length_scale > Scalar(0))) throw DomainError("length-scale must be positive");
  const Scalar l2 = length_scale * length_scale;
  return Scalar(1) / std::sqrt(Scalar(1) + Scalar(2) / l2);
}

template <typename Scalar>
struct KernelSystem {
  Matrix<Scalar> kernel_matrix;
  Vector<Scalar> embedding_vector;
  Scalar condition_estimate = std::numeric_limits<Scalar>::quiet_NaN();
};

template <typename Scalar>
Matrix<Scalar> kernel_matrix(const Vector<Scalar>& nodes, Scalar length_scale) {
  const GaussianKernel<Scalar> k(length_scale);
  const Eigen::Index n = nodes.size();
  Matrix<Scalar> K(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    K(j, j) = Scalar(1);
    for (Eigen::Index i = j + 1; i < n; ++i) {
      K(i, j) = k(nodes[i], nodes[j]);
      K(j, i) = K(i, j);
    }
  }
  return K;
}

template <typename Scalar>
Vector<Scalar> kernel_mean_vector(const Vector<Scalar>& nodes, Scalar length_scale) {
  Vector<Scalar> out(nodes.size());
  for (Eigen::Index i = 0; i < nodes.size(); ++i) out[i] = kernel_mean(length_scale, nodes[i]);
  return out;
}

namespace detail {

inline constexpr int kPowerIterations = 300;

template <typename Scalar>
Vector<Scalar> start_vector(Eigen::Index n) {
  Vector<Scalar> v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = Scalar(1) + Scalar(i) / Scalar(3 * n + 1);
  return v.normalized();
}

// Dominant eigenvalue of a symmetric positive (semi)definite operator.
template <typename Scalar, typename Apply>
Scalar dominant_eigenvalue(Eigen::Index n, Apply&& apply) {
  Vector<Scalar> v = start_vector<Scalar>(n);
  Scalar estimate(0);
  for (int it = 0; it < kPowerIterations; ++it) {
    Vector<Scalar> w = apply(v);
    const Scalar next = v.dot(w);
    const Scalar norm = w.norm();
    if (!(norm > Scalar(0)) || !std::isfinite(norm)) return next;
    v = w / norm;
    if (it > 0 && std::abs(next - estimate) <= Scalar(1e-12) * std::abs(next)) {
      return next;
    }
    estimate = next;
  }
  return estimate;
}

}  // namespace detail

/// 2-norm condition estimate lambda_max / lambda_min: power iteration on K
/// for the largest eigenvalue, inverse iteration through the Cholesky
/// factor for the smallest.
template <typename Scalar>
Scalar condition_estimate(const Matrix<Scalar>& K, const Eigen::LLT<Matrix<Scalar>>& llt) {
  const Eigen::Index n = K.rows();
  if (n == 1) return Scalar(1);
  const Scalar lambda_max =
      detail::dominant_eigenvalue<Scalar>(n, [&](const Vector<Scalar>& v) { return Vector<Scalar>(K * v); });
  const Scalar inv_min = detail::dominant_eigenvalue<Scalar>(
      n, [&](const Vector<Scalar>& v) { return Vector<Scalar>(llt.solve(v)); });
  if (!(inv_min > Scalar(0)) || !std::isfinite(inv_min)) {
    return std::numeric_limits<Scalar>::infinity();
  }
  return lambda_max * inv_min;
}

/// Estimate for a matrix whose Cholesky factorization failed.
template <typename Scalar>
Scalar condition_estimate_indefinite(const Matrix<Scalar>& K) {
  Eigen::SelfAdjointEigenSolver<Matrix<Scalar>> solver(K, Eigen::EigenvaluesOnly);
  const Vector<Scalar>& ev = solver.eigenvalues();
  const Scalar lo = ev.minCoeff();
  const Scalar hi = ev.cwiseAbs().maxCoeff();
  if (!(lo > Scalar(0))) return std::numeric_limits<Scalar>::infinity();
  return hi / lo;
}

template <typename Scalar>
void require_distinct(const Vector<Scalar>& nodes) {
  std::vector<Scalar> sorted(nodes.data(), nodes.data() + nodes.size());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw DomainError("kernel quadrature nodes must be pairwise distinct");
  }
}

template <typename Scalar>
KernelSystem<Scalar> build_kernel_system(const Vector<Scalar>& nodes, Scalar length_scale) {
  KernelSystem<Scalar> sys;
  sys.kernel_matrix = kernel_matrix(nodes, length_scale);
  sys.embedding_vector = kernel_mean_vector(nodes, length_scale);
  Eigen::LLT<Matrix<Scalar>> llt(sys.kernel_matrix);
  sys.condition_estimate = llt.info() == Eigen::Success
                               ? condition_estimate(sys.kernel_matrix, llt)
                               : condition_estimate_indefinite(sys.kernel_matrix);
  return sys;
}

// Solves whose condition estimate exceeds this are reported unreliable.
template <typename Scalar>
inline constexpr Scalar kReliableConditionLimit =
    Scalar(1e-2) / std::numeric_limits<Scalar>::epsilon();

template <typename Scalar>
struct ExactWeights {
  Vector<Scalar> weights;
  Scalar condition_estimate{};
  bool reliable = true;
};

/// Solves K w = k_mu (optionally K + ridge I) by Cholesky. A failed
/// factorization throws IllConditionedError; no jitter is added.
template <typename Scalar>
ExactWeights<Scalar> exact_weights(const Vector<Scalar>& nodes, Scalar length_scale,
                                   Scalar ridge = Scalar(0)) {
  if (nodes.size() == 0) throw SizeError("kernel quadrature needs at least one node");
  if (nodes.size() > 200) throw SizeError("kernel quadrature supports at most 200 nodes");
  if (ridge < Scalar(0)) throw DomainError("ridge must be nonnegative");
  require_distinct(nodes);

  Matrix<Scalar> K = kernel_matrix(nodes, length_scale);
  if (ridge > Scalar(0)) K.diagonal().array() += ridge;
  const Vector<Scalar> kmu = kernel_mean_vector(nodes, length_scale);

  Eigen::LLT<Matrix<Scalar>> llt(K);
  if (llt.info() != Eigen::Success) {
    throw IllConditionedError("kernel matrix is not numerically positive definite",
                              static_cast<double>(condition_estimate_indefinite(K)));
  }
  ExactWeights<Scalar> out;
  out.weights = llt.solve(kmu);
  out.condition_estimate = condition_estimate(K, llt);
  out.reliable = out.condition_estimate < kReliableConditionLimit<Scalar> &&
                 out.weights.allFinite();
  return out;
}

template <typename Scalar>
QuadratureRule<Scalar> exact_rule(const Vector<Scalar>& nodes, Scalar length_scale) {
  return QuadratureRule<Scalar>{nodes, exact_weights(nodes, length_scale).weights,
                                Measure::StandardGaussian};
}

/// Equispaced nodes on [lo, hi]; a single node sits at the midpoint.
template <typename Scalar>
Vector<Scalar> uniform_nodes(Scalar lo, Scalar hi, int n) {
  if (n < 1) throw SizeError("uniform node count must be positive");
  if (n == 1) return Vector<Scalar>::Constant(1, (lo + hi) / Scalar(2));
  return Vector<Scalar>::LinSpaced(n, lo, hi);
}

}  // namespace gkq
