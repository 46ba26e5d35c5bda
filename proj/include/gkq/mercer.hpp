#pragma once

// Gaussian kernel k(x, y) = exp(-(x - y)^2 / (2 l^2)) and its Mercer
// eigendecomposition with respect to the Gaussian measure
// d mu_alpha = alpha / sqrt(pi) exp(-alpha^2 x^2) dx:
//
//   lambda_n = sqrt(alpha^2 / (alpha^2 + delta^2 + eps^2)) * ratio^n,
//   ratio    = eps^2 / (alpha^2 + delta^2 + eps^2),
//   phi_n(x) = sqrt(beta) exp(-delta^2 x^2) h_n(sqrt(2) alpha beta x),
//
// with eps = 1 / (sqrt(2) l), beta = (1 + (2 eps / alpha)^2)^{1/4} and
// delta^2 = alpha^2 (beta^2 - 1) / 2.

#include <gkq/errors.hpp>
#include <gkq/hermite.hpp>
#include <gkq/types.hpp>

#include <cmath>
#include <limits>
#include <numbers>

namespace gkq {

template <typename Scalar = double>
class GaussianKernel {
 public:
  explicit GaussianKernel(Scalar length_scale) : length_scale_(length_scale) {
    if (!(length_scale > Scalar(0)) || !std::isfinite(length_scale)) {
      throw DomainError("kernel length-scale must be positive and finite");
    }
  }

  Scalar length_scale() const { return length_scale_; }

  Scalar operator()(Scalar x, Scalar y) const {
    const Scalar r = (x - y) / length_scale_;
    return std::exp(-r * r / Scalar(2));
  }

 private:
  Scalar length_scale_;
};

template <typename Scalar = double>
class MercerBasis {
 public:
  MercerBasis(Scalar length_scale, Scalar alpha)
      : length_scale_(length_scale), alpha_(alpha) {
    if (!(length_scale > Scalar(0)) || !std::isfinite(length_scale)) {
      throw DomainError("length-scale must be positive and finite");
    }
    if (!(alpha > Scalar(0)) || !std::isfinite(alpha)) {
      throw DomainError("alpha must be positive and finite");
    }
    epsilon_ = Scalar(1) / (std::numbers::sqrt2_v<Scalar> * length_scale);
    const Scalar t = Scalar(4) * epsilon_ * epsilon_ / (alpha * alpha);
    const Scalar root = std::sqrt(Scalar(1) + t);
    // beta^2 - 1 without cancellation in the flat limit.
    beta_sq_minus_one_ = t / (root + Scalar(1));
    beta_ = std::sqrt(root);
    delta_sq_ = alpha * alpha / Scalar(2) * beta_sq_minus_one_;
    const Scalar denom = alpha * alpha + delta_sq_ + epsilon_ * epsilon_;
    ratio_ = epsilon_ * epsilon_ / denom;
    eigen_scale_ = std::sqrt(alpha * alpha / denom);
    const Scalar a2 = alpha * alpha;
    // 2 alpha^2 - 1 vanishes for the standard alpha; drop its rounding residue
    const Scalar offset = has_standard_alpha() ? Scalar(0) : Scalar(2) * a2 - Scalar(1);
    gamma_ = (a2 * beta_sq_minus_one_ + offset) /
             (Scalar(1) + Scalar(2) * delta_sq_);
    if (!std::isfinite(beta_) || !std::isfinite(delta_sq_) || !std::isfinite(gamma_) ||
        !std::isfinite(eigen_scale_)) {
      throw NumericalFailure("Mercer constants overflow for this length-scale");
    }
  }

  Scalar length_scale() const { return length_scale_; }
  Scalar alpha() const { return alpha_; }
  Scalar epsilon() const { return epsilon_; }
  Scalar epsilon_sq() const { return epsilon_ * epsilon_; }
  Scalar beta() const { return beta_; }
  Scalar beta_sq_minus_one() const { return beta_sq_minus_one_; }
  Scalar delta_sq() const { return delta_sq_; }

  // lambda_{n+1} / lambda_n
  Scalar eigenvalue_ratio() const { return ratio_; }
  // lambda_0
  Scalar eigenvalue_scale() const { return eigen_scale_; }

  // 2 alpha^2 beta^2 / (1 + 2 delta^2) - 1; lies in (0, 1) for alpha = 1/sqrt(2).
  Scalar gamma() const { return gamma_; }

  // Argument scale sqrt(2) alpha beta of the Hermite factor.
  Scalar hermite_scale() const { return std::numbers::sqrt2_v<Scalar> * alpha_ * beta_; }

  bool has_standard_alpha() const {
    return std::abs(alpha_ - kStandardAlpha<Scalar>) <=
           Scalar(64) * std::numeric_limits<Scalar>::epsilon();
  }

 private:
  Scalar length_scale_;
  Scalar alpha_;
  Scalar epsilon_{};
  Scalar beta_{};
  Scalar beta_sq_minus_one_{};
  Scalar delta_sq_{};
  Scalar ratio_{};
  Scalar eigen_scale_{};
  Scalar gamma_{};
};

template <typename Scalar>
MercerBasis<Scalar> basis_from(Scalar length_scale, Scalar alpha = kStandardAlpha<Scalar>) {
  return MercerBasis<Scalar>(length_scale, alpha);
}

template <typename Scalar>
Scalar eigenvalue(const MercerBasis<Scalar>& basis, int n) {
  if (n < 0) throw DomainError("eigenvalue index must be nonnegative");
  return basis.eigenvalue_scale() * std::pow(basis.eigenvalue_ratio(), Scalar(n));
}

template <typename Scalar>
Scalar eigenfunction(const MercerBasis<Scalar>& basis, int n, Scalar x) {
  return std::sqrt(basis.beta()) * std::exp(-basis.delta_sq() * x * x) *
         hermite_normalized(n, basis.hermite_scale() * x);
}

/// phi_0(x), ..., phi_{count-1}(x) in one recurrence pass.
template <typename Scalar>
Vector<Scalar> eigenfunction_values(const MercerBasis<Scalar>& basis, int count, Scalar x) {
  if (count < 0) throw DomainError("eigenfunction count must be nonnegative");
  if (count > 0) check_hermite_degree(count - 1);
  Vector<Scalar> out(count);
  hermite_normalized_fill(basis.hermite_scale() * x, out);
  out *= std::sqrt(basis.beta()) * std::exp(-basis.delta_sq() * x * x);
  return out;
}

/// r_m = sqrt((2m)!) / (2^m m!) = sqrt(binom(2m, m) / 4^m) for m = 0..m_max,
/// via r_m = r_{m-1} sqrt((2m - 1) / (2m)).
template <typename Scalar = double>
Vector<Scalar> central_binomial_ratios(int m_max) {
  Vector<Scalar> r(m_max + 1);
  r[0] = Scalar(1);
  for (int m = 1; m <= m_max; ++m) {
    r[m] = r[m - 1] * std::sqrt(Scalar(2 * m - 1) / Scalar(2 * m));
  }
  return r;
}

/// Integral of phi_n against the standard Gaussian measure:
/// zero for odd n, sqrt(beta / (1 + 2 delta^2)) r_m gamma^m for n = 2m.
template <typename Scalar>
Scalar eigenfunction_mean(const MercerBasis<Scalar>& basis, int n) {
  if (n < 0) throw DomainError("eigenfunction index must be nonnegative");
  if (n % 2 == 1) return Scalar(0);
  const int m = n / 2;
  const Scalar r = central_binomial_ratios<Scalar>(m)[m];
  return std::sqrt(basis.beta() / (Scalar(1) + Scalar(2) * basis.delta_sq())) * r *
         std::pow(basis.gamma(), Scalar(m));
}

/// Vector of eigenfunction means for n = 0..count-1.
template <typename Scalar>
Vector<Scalar> eigenfunction_means(const MercerBasis<Scalar>& basis, int count) {
  Vector<Scalar> out = Vector<Scalar>::Zero(count);
  if (count == 0) return out;
  const Vector<Scalar> r = central_binomial_ratios<Scalar>((count - 1) / 2);
  const Scalar lead = std::sqrt(basis.beta() / (Scalar(1) + Scalar(2) * basis.delta_sq()));
  Scalar gamma_pow(1);
  for (int n = 0; n < count; n += 2) {
    out[n] = lead * r[n / 2] * gamma_pow;
    gamma_pow *= basis.gamma();
  }
  return out;
}

/// sum_{n<M} lambda_n phi_n(x) phi_n(y)
template <typename Scalar>
Scalar kernel_truncated(const MercerBasis<Scalar>& basis, int terms, Scalar x, Scalar y) {
  if (terms < 1) throw DomainError("truncation length must be positive");
  const Vector<Scalar> px = eigenfunction_values(basis, terms, x);
  const Vector<Scalar> py = eigenfunction_values(basis, terms, y);
  Scalar total(0);
  Scalar lambda = basis.eigenvalue_scale();
  for (int n = 0; n < terms; ++n) {
    total += lambda * px[n] * py[n];
    lambda *= basis.eigenvalue_ratio();
  }
  return total;
}

}  // namespace gkq
