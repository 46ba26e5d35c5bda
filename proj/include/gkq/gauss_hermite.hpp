#pragma once

// N-point Gauss-Hermite rules for the standard Gaussian measure.
//
// Nodes come from the eigenvalues of the symmetric tridiagonal Jacobi
// matrix (zero diagonal, off-diagonal sqrt(k)) computed by implicit-shift
// QL iteration. Each node then receives one Newton step against h_N and
// the weights are evaluated as Christoffel numbers 1 / sum_k h_k(x)^2,
// which keeps full relative accuracy in the far tails where the squared
// eigenvector components lose it. Mirrored pairs are averaged last.

#include <gkq/errors.hpp>
#include <gkq/hermite.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/types.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

namespace gkq {

inline constexpr int kGaussHermiteMaxNodes = 200;
inline constexpr int kQlSweepCap = 50;

struct JacobiEigenResult {
  std::vector<double> eigenvalues;
  // First components of the normalized eigenvectors.
  std::vector<double> first_components;
};

namespace detail {

// Implicit QL on a symmetric tridiagonal matrix. diag has n entries,
// offdiag[i] couples rows i and i+1 (n-1 meaningful entries). Only the
// first row of the eigenvector matrix is accumulated.
template <typename Scalar>
void tridiagonal_ql(std::vector<Scalar>& diag, std::vector<Scalar> offdiag,
                    std::vector<Scalar>& first_row) {
  const int n = static_cast<int>(diag.size());
  offdiag.resize(n, Scalar(0));
  offdiag[n - 1] = Scalar(0);
  first_row.assign(n, Scalar(0));
  first_row[0] = Scalar(1);
  const Scalar eps = std::numeric_limits<Scalar>::epsilon();

  for (int l = 0; l < n; ++l) {
    int iterations = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const Scalar dd = std::abs(diag[m]) + std::abs(diag[m + 1]);
        if (std::abs(offdiag[m]) <= eps * dd) break;
      }
      if (m == l) break;
      if (iterations++ == kQlSweepCap) {
        throw NumericalFailure("tridiagonal QL did not converge for eigenvalue " +
                               std::to_string(l) + " of " + std::to_string(n) +
                               " after " + std::to_string(kQlSweepCap) +
                               " sweeps; residual coupling " +
                               std::to_string(static_cast<double>(offdiag[l])));
      }
      Scalar g = (diag[l + 1] - diag[l]) / (Scalar(2) * offdiag[l]);
      Scalar r = std::hypot(g, Scalar(1));
      g = diag[m] - diag[l] + offdiag[l] / (g + std::copysign(r, g));
      Scalar s(1), c(1), p(0);
      int i = m - 1;
      bool underflow = false;
      for (; i >= l; --i) {
        const Scalar f = s * offdiag[i];
        const Scalar b = c * offdiag[i];
        r = std::hypot(f, g);
        offdiag[i + 1] = r;
        if (r == Scalar(0)) {
          diag[i + 1] -= p;
          offdiag[m] = Scalar(0);
          underflow = true;
          break;
        }
        s = f / r;
        c = g / r;
        g = diag[i + 1] - p;
        r = (diag[i] - g) * s + Scalar(2) * c * b;
        p = s * r;
        diag[i + 1] = g + p;
        g = c * r - b;
        const Scalar z = first_row[i + 1];
        first_row[i + 1] = s * first_row[i] + c * z;
        first_row[i] = c * first_row[i] - s * z;
      }
      if (underflow) continue;
      diag[l] -= p;
      offdiag[l] = g;
      offdiag[m] = Scalar(0);
    } while (m != l);
  }
}

}  // namespace detail

/// Eigen-decomposition of the Hermite Jacobi matrix of order n.
inline JacobiEigenResult hermite_jacobi_eigen(int n) {
  std::vector<double> diag(n, 0.0);
  std::vector<double> offdiag(n, 0.0);
  for (int k = 0; k + 1 < n; ++k) offdiag[k] = std::sqrt(double(k + 1));
  std::vector<double> first_row;
  detail::tridiagonal_ql(diag, offdiag, first_row);
  return {std::move(diag), std::move(first_row)};
}

/// Christoffel number 1 / sum_{k<N} h_k(x)^2; equals the Gauss weight at a root of H_N.
template <typename Scalar>
Scalar christoffel_number(Scalar x, int n) {
  Vector<Scalar> h(n);
  hermite_normalized_fill(x, h);
  return Scalar(1) / h.squaredNorm();
}

template <typename Scalar = double>
QuadratureRule<Scalar> gh_rule(int n) {
  if (n < 1 || n > kGaussHermiteMaxNodes) {
    throw SizeError("Gauss-Hermite rule size " + std::to_string(n) +
                    " outside [1, " + std::to_string(kGaussHermiteMaxNodes) + "]");
  }
  const JacobiEigenResult eig = hermite_jacobi_eigen(n);

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return eig.eigenvalues[a] < eig.eigenvalues[b]; });

  Vector<Scalar> nodes(n);
  Vector<Scalar> weights(n);
  Vector<Scalar> h(n + 1);
  const Scalar sqrt_n = std::sqrt(Scalar(n));
  for (int i = 0; i < n; ++i) {
    Scalar x = static_cast<Scalar>(eig.eigenvalues[order[i]]);
    // h_N' = sqrt(N) h_{N-1}
    hermite_normalized_fill(x, h);
    if (h[n - 1] != Scalar(0)) x -= h[n] / (sqrt_n * h[n - 1]);
    nodes[i] = x;
    weights[i] = christoffel_number(x, n);
  }

  for (int i = 0; i < n / 2; ++i) {
    const int j = n - 1 - i;
    const Scalar half = (nodes[j] - nodes[i]) / Scalar(2);
    const Scalar w = (weights[i] + weights[j]) / Scalar(2);
    nodes[i] = -half;
    nodes[j] = half;
    weights[i] = w;
    weights[j] = w;
  }
  if (n % 2 == 1) nodes[n / 2] = Scalar(0);
  if (n % 2 == 1) weights[n / 2] = christoffel_number(Scalar(0), n);

  return QuadratureRule<Scalar>{std::move(nodes), std::move(weights),
                                Measure::StandardGaussian};
}

/// Golub-Welsch weights (squared first eigenvector components), ascending node order.
inline VectorXd golub_welsch_weights(int n) {
  const JacobiEigenResult eig = hermite_jacobi_eigen(n);
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return eig.eigenvalues[a] < eig.eigenvalues[b]; });
  VectorXd w(n);
  for (int i = 0; i < n; ++i) {
    const double z = eig.first_components[order[i]];
    w[i] = z * z;
  }
  return w;
}

/// |h_N(x_n)| / max_k |h_k(x_n)| for each node; small values mean the
/// node is an accurate root of H_N.
template <typename Scalar>
Vector<Scalar> gh_root_residuals(const QuadratureRule<Scalar>& rule) {
  const int n = static_cast<int>(rule.size());
  Vector<Scalar> out(n);
  Vector<Scalar> h(n + 1);
  for (int i = 0; i < n; ++i) {
    hermite_normalized_fill(rule.nodes[i], h);
    out[i] = std::abs(h[n]) / h.cwiseAbs().maxCoeff();
  }
  return out;
}

inline constexpr double kRootResidualFlag = 1e-8;

template <typename Scalar>
int gh_flagged_nodes(const QuadratureRule<Scalar>& rule) {
  const Vector<Scalar> r = gh_root_residuals(rule);
  return static_cast<int>((r.array() > Scalar(kRootResidualFlag)).count());
}

/// max |x_n| <= 2 sqrt(N-1).
template <typename Scalar>
bool gh_node_bound_check(const QuadratureRule<Scalar>& rule) {
  const Eigen::Index n = rule.size();
  const Scalar bound = Scalar(2) * std::sqrt(Scalar(n - 1));
  return rule.nodes.cwiseAbs().maxCoeff() <= bound;
}

}  // namespace gkq
