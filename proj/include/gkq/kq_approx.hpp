#pragma once

// Approximate Gaussian kernel quadrature at scaled Gauss-Hermite nodes.
//
// The nodes are x~_n = x_n^GH / (sqrt(2) alpha beta) and the weights make
// the rule exact for the first N Mercer eigenfunctions:
//
//   w~_n = (1 + 2 delta^2)^{-1/2} w_n^GH exp(delta^2 x~_n^2) S_N(x_n^GH),
//   S_N(x) = sum_{m=0}^{floor((N-1)/2)} gamma^m r_m h_{2m}(x),
//
// where h is the normalized Hermite polynomial and r_m = sqrt((2m)!)/(2^m m!).
// Since gamma^m r_m h_{2m}(x) = gamma^m H_{2m}(x) / (2^m m!), S_N is the
// even polynomial R_{gamma,N}; every term stays of moderate size.
//
// qr_weights handles arbitrary nodes and truncation lengths M >= N through
// a QR factorization of the eigenfunction matrix.

#include <gkq/errors.hpp>
#include <gkq/gauss_hermite.hpp>
#include <gkq/hermite.hpp>
#include <gkq/mercer.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/types.hpp>

#include <Eigen/LU>
#include <Eigen/QR>

#include <cmath>
#include <limits>
#include <string>

namespace gkq {

template <typename Scalar>
struct ApproxRule {
  QuadratureRule<Scalar> rule;
  MercerBasis<Scalar> basis;
  QuadratureRule<Scalar> gh_source;

  Eigen::Index size() const { return rule.size(); }
  const Vector<Scalar>& nodes() const { return rule.nodes; }
  const Vector<Scalar>& weights() const { return rule.weights; }
};

template <typename Scalar>
Vector<Scalar> scale_gh_nodes(const MercerBasis<Scalar>& basis, const Vector<Scalar>& gh_nodes) {
  return gh_nodes / basis.hermite_scale();
}

template <typename Scalar>
Vector<Scalar> scaled_nodes(const MercerBasis<Scalar>& basis, int n) {
  return scale_gh_nodes(basis, gh_rule<Scalar>(n).nodes);
}

/// R_{gamma,N}(x) = sum_{m=0}^{floor((N-1)/2)} gamma^m H_{2m}(x) / (2^m m!).
template <typename Scalar>
Scalar positivity_polynomial(Scalar gamma, int n, Scalar x) {
  if (n < 1) throw SizeError("positivity polynomial needs N >= 1");
  const int m_max = (n - 1) / 2;
  check_hermite_degree(2 * m_max);
  Vector<Scalar> h(2 * m_max + 1);
  hermite_normalized_fill(x, h);
  Scalar total(0);
  Scalar coeff(1);  // gamma^m r_m
  for (int m = 0; m <= m_max; ++m) {
    if (m > 0) coeff *= gamma * std::sqrt(Scalar(2 * m - 1) / Scalar(2 * m));
    total += coeff * h[2 * m];
  }
  return total;
}

template <typename Scalar>
ApproxRule<Scalar> approx_weights(const MercerBasis<Scalar>& basis, int n) {
  QuadratureRule<Scalar> gh = gh_rule<Scalar>(n);
  const Vector<Scalar> nodes = scale_gh_nodes(basis, gh.nodes);
  const Scalar lead = Scalar(1) / std::sqrt(Scalar(1) + Scalar(2) * basis.delta_sq());
  Vector<Scalar> weights(n);
  for (int i = 0; i < n; ++i) {
    const Scalar x = nodes[i];
    weights[i] = lead * gh.weights[i] * std::exp(basis.delta_sq() * x * x) *
                 positivity_polynomial(basis.gamma(), n, gh.nodes[i]);
  }
  if (!weights.allFinite()) throw NumericalFailure("approximate weights are not finite");
  return ApproxRule<Scalar>{
      QuadratureRule<Scalar>{nodes, std::move(weights), Measure::StandardGaussian}, basis,
      std::move(gh)};
}

template <typename Scalar>
ApproxRule<Scalar> approx_weights(Scalar length_scale, int n,
                                  Scalar alpha = kStandardAlpha<Scalar>) {
  return approx_weights(basis_from(length_scale, alpha), n);
}

/// |sum_i w_i phi_n(x_i) - mu(phi_n)| for any rule and any n.
template <typename Scalar>
Scalar eigen_integration_error(const QuadratureRule<Scalar>& rule,
                               const MercerBasis<Scalar>& basis, int n) {
  CompensatedSum<Scalar> sum;
  for (Eigen::Index i = 0; i < rule.size(); ++i) {
    sum += rule.weights[i] * eigenfunction(basis, n, rule.nodes[i]);
  }
  return std::abs(sum.value() - eigenfunction_mean(basis, n));
}

/// Residual of the n-th exactness condition; only n < N is enforced by
/// construction, other indices raise IndexError.
template <typename Scalar>
Scalar eigen_exactness_residual(const ApproxRule<Scalar>& approx, int n) {
  if (n < 0 || n >= approx.size()) {
    throw IndexError("exactness index " + std::to_string(n) + " outside [0, " +
                     std::to_string(approx.size()) + ")");
  }
  return eigen_integration_error(approx.rule, approx.basis, n);
}

/// Smallest M with lambda_M / lambda_0 below machine epsilon.
template <typename Scalar>
int machine_precision_truncation(const MercerBasis<Scalar>& basis) {
  const Scalar ratio = basis.eigenvalue_ratio();
  if (!(ratio > Scalar(0))) return 1;
  const Scalar m = std::log(std::numeric_limits<Scalar>::epsilon()) / std::log(ratio);
  const Scalar floor_m = std::floor(m);
  const int result = static_cast<int>(floor_m) + 1;
  return result < 1 ? 1 : result;
}

/// Weights w~^M = (Phi Lambda Phi^T)^{-1} Phi Lambda phi_mu for the M-term
/// truncated Mercer expansion, evaluated through Phi = Q [R1 R2] as
///
///   w = Q (R1^T + T R2^T)^{-1} (phi_mu[:N] + T phi_mu[N:]),
///   T = Lambda1^{-1} R1^{-1} R2 Lambda2,
///
/// with T_ij = [R1^{-1} R2]_ij ratio^{N + j - i} formed elementwise so the
/// eigenvalue diagonals never appear on their own. Rows of Phi are
/// equilibrated first; the weights are rescaled back at the end.
template <typename Scalar>
Vector<Scalar> qr_weights(const MercerBasis<Scalar>& basis, const Vector<Scalar>& nodes, int m) {
  const Eigen::Index n = nodes.size();
  if (n == 0) throw SizeError("qr_weights needs at least one node");
  if (m < n) throw DomainError("truncation length M must be at least the node count");
  check_hermite_degree(m - 1);

  Matrix<Scalar> phi(n, m);
  Vector<Scalar> row_scale(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    phi.row(i) = eigenfunction_values(basis, m, nodes[i]).transpose();
    const Scalar s = phi.row(i).cwiseAbs().maxCoeff();
    if (!(s > Scalar(0)) || !std::isfinite(s)) {
      throw NumericalFailure("eigenfunction row " + std::to_string(i) + " is degenerate");
    }
    row_scale[i] = s;
    phi.row(i) /= s;
  }
  const Vector<Scalar> phi_mu = eigenfunction_means(basis, m);

  Eigen::HouseholderQR<Matrix<Scalar>> qr(phi);
  const Matrix<Scalar> r = qr.matrixQR().template triangularView<Eigen::Upper>();
  const Matrix<Scalar> r1 = r.leftCols(n);
  const Scalar r_max = r1.diagonal().cwiseAbs().maxCoeff();
  const Scalar tol = Scalar(n) * std::numeric_limits<Scalar>::epsilon() * r_max;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(std::abs(r1(i, i)) > tol)) {
      throw NumericalFailure("eigenfunction matrix is numerically rank deficient at column " +
                             std::to_string(i));
    }
  }

  Matrix<Scalar> a = r1.transpose();
  Vector<Scalar> b = phi_mu.head(n);
  if (m > n) {
    const Matrix<Scalar> r2 = r.rightCols(m - n);
    Matrix<Scalar> t = r1.template triangularView<Eigen::Upper>().solve(r2);
    const Scalar log_ratio = std::log(basis.eigenvalue_ratio());
    for (Eigen::Index j = 0; j < m - n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        t(i, j) *= std::exp(Scalar(n + j - i) * log_ratio);
      }
    }
    a.noalias() += t * r2.transpose();
    b.noalias() += t * phi_mu.tail(m - n);
  }
  const Vector<Scalar> y = a.partialPivLu().solve(b);
  Vector<Scalar> w = qr.householderQ() * y;
  w.array() /= row_scale.array();
  if (!w.allFinite()) throw NumericalFailure("qr_weights produced non-finite weights");
  return w;
}

/// Left side of the Christoffel-Darboux identity,
/// sum_{m=0}^{M} H_m(x) H_m(y) / m! = sum h_m(x) h_m(y).
template <typename Scalar>
Scalar christoffel_darboux_sum(Scalar x, Scalar y, int m) {
  if (x == y) throw DomainError("Christoffel-Darboux check requires x != y");
  if (m < 0) throw DomainError("Christoffel-Darboux order must be nonnegative");
  check_hermite_degree(m + 1);
  Vector<Scalar> hx(m + 1), hy(m + 1);
  hermite_normalized_fill(x, hx);
  hermite_normalized_fill(y, hy);
  return hx.dot(hy);
}

/// Right side, [H_M(y) H_{M+1}(x) - H_M(x) H_{M+1}(y)] / (M! (x - y)),
/// in normalized form sqrt(M+1) [h_M(y) h_{M+1}(x) - h_M(x) h_{M+1}(y)] / (x - y).
template <typename Scalar>
Scalar christoffel_darboux_closed_form(Scalar x, Scalar y, int m) {
  if (x == y) throw DomainError("Christoffel-Darboux check requires x != y");
  if (m < 0) throw DomainError("Christoffel-Darboux order must be nonnegative");
  check_hermite_degree(m + 1);
  Vector<Scalar> hx(m + 2), hy(m + 2);
  hermite_normalized_fill(x, hx);
  hermite_normalized_fill(y, hy);
  return std::sqrt(Scalar(m + 1)) * (hy[m] * hx[m + 1] - hx[m] * hy[m + 1]) / (x - y);
}

}  // namespace gkq
