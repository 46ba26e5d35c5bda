#pragma once

// Probabilists' Hermite polynomials H_n, orthogonal under the standard
// Gaussian measure with <H_n, H_m> = n! delta_nm, and their normalized
// variant h_n = H_n / sqrt(n!).

#include <gkq/errors.hpp>
#include <gkq/types.hpp>

#include <cmath>

namespace gkq {

inline constexpr int kHermiteDegreeGuard = 400;

inline void check_hermite_degree(int degree) {
  if (degree < 0) {
    throw DomainError("Hermite degree must be nonnegative");
  }
  if (degree > kHermiteDegreeGuard) {
    throw DegreeOverflowError(degree, kHermiteDegreeGuard);
  }
}

/// H_n(x) by the three-term recurrence H_{n+1} = x H_n - n H_{n-1}.
/// Overflows to infinity well before the degree guard for large |x|;
/// downstream code uses the normalized path instead.
template <typename Scalar>
Scalar hermite(int n, Scalar x) {
  check_hermite_degree(n);
  if (n == 0) return Scalar(1);
  Scalar prev(1);
  Scalar curr = x;
  for (int k = 1; k < n; ++k) {
    const Scalar next = x * curr - Scalar(k) * prev;
    prev = curr;
    curr = next;
  }
  return curr;
}

/// Values h_0(x), ..., h_{degree_max}(x) (or H_n when unnormalized).
template <typename Scalar>
struct HermiteSequence {
  int degree_max = 0;
  bool normalized = true;
  Vector<Scalar> values;

  Scalar operator[](int n) const { return values[n]; }
  Eigen::Index size() const { return values.size(); }
};

/// Fills out[0..size-1] with h_n(x) using the rescaled recurrence
///   h_{n+1} = (x h_n - sqrt(n) h_{n-1}) / sqrt(n+1),
/// whose iterates stay below 1.087 e^{x^2/4} in magnitude.
template <typename Scalar, typename Derived>
void hermite_normalized_fill(Scalar x, Eigen::DenseBase<Derived>& out) {
  const Eigen::Index size = out.size();
  if (size == 0) return;
  out[0] = Scalar(1);
  if (size == 1) return;
  out[1] = x;
  Scalar sqrt_n(1);
  for (Eigen::Index n = 1; n + 1 < size; ++n) {
    const Scalar sqrt_next = std::sqrt(Scalar(n + 1));
    out[n + 1] = (x * out[n] - sqrt_n * out[n - 1]) / sqrt_next;
    sqrt_n = sqrt_next;
  }
}

template <typename Scalar>
HermiteSequence<Scalar> hermite_normalized_sequence(Scalar x, int degree_max) {
  check_hermite_degree(degree_max);
  HermiteSequence<Scalar> seq;
  seq.degree_max = degree_max;
  seq.normalized = true;
  seq.values.resize(degree_max + 1);
  hermite_normalized_fill(x, seq.values);
  return seq;
}

template <typename Scalar>
HermiteSequence<Scalar> hermite_sequence(Scalar x, int degree_max) {
  check_hermite_degree(degree_max);
  HermiteSequence<Scalar> seq;
  seq.degree_max = degree_max;
  seq.normalized = false;
  seq.values.resize(degree_max + 1);
  seq.values[0] = Scalar(1);
  if (degree_max >= 1) seq.values[1] = x;
  for (int k = 1; k < degree_max; ++k) {
    seq.values[k + 1] = x * seq.values[k] - Scalar(k) * seq.values[k - 1];
  }
  return seq;
}

template <typename Scalar>
Scalar hermite_normalized(int n, Scalar x) {
  check_hermite_degree(n);
  if (n == 0) return Scalar(1);
  Scalar prev(1);
  Scalar curr = x;
  Scalar sqrt_k(1);
  for (int k = 1; k < n; ++k) {
    const Scalar sqrt_next = std::sqrt(Scalar(k + 1));
    const Scalar next = (x * curr - sqrt_k * prev) / sqrt_next;
    prev = curr;
    curr = next;
    sqrt_k = sqrt_next;
  }
  return curr;
}

}  // namespace gkq
