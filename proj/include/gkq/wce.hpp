#pragma once

// Worst-case error in the Gaussian-kernel RKHS,
//
//   e(Q)^2 = mu(k_mu) + sum_{n,m} w_n w_m k(x_n, x_m) - 2 sum_n w_n k_mu(x_n),
//
// and the constants of the exponential convergence bounds for alpha = 1/sqrt(2).

#include <gkq/errors.hpp>
#include <gkq/kq_exact.hpp>
#include <gkq/mercer.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/tensor.hpp>
#include <gkq/types.hpp>

#include <array>
#include <cmath>
#include <limits>
#include <vector>

namespace gkq {

inline constexpr double kWceNegativeTolerance = 1e-14;

template <typename Scalar>
struct WceReport {
  Scalar wce{};
  Scalar wce_squared{};  // combined before rounding the terms
  Scalar term_mean_mean{};  // mu(k_mu)
  Scalar term_quadratic{};  // sum_{n,m} w_n w_m k(x_n, x_m)
  Scalar term_cross{};      // sum_n w_n k_mu(x_n)

  // Squared error reassembled from the rounded terms.
  Scalar squared() const { return term_mean_mean + term_quadratic - Scalar(2) * term_cross; }
};

namespace detail {

template <typename Scalar, typename Acc>
WceReport<Scalar> finish_wce(Acc mean_mean, Acc quadratic, Acc cross) {
  const Acc sq = mean_mean + quadratic - Acc(2) * cross;
  if (!std::isfinite(sq)) throw NumericalFailure("worst-case error is not finite");
  if (sq < -Acc(kWceNegativeTolerance)) {
    throw NumericalFailure("squared worst-case error is negative beyond rounding");
  }
  WceReport<Scalar> report;
  report.term_mean_mean = static_cast<Scalar>(mean_mean);
  report.term_quadratic = static_cast<Scalar>(quadratic);
  report.term_cross = static_cast<Scalar>(cross);
  report.wce_squared = sq > Acc(0) ? static_cast<Scalar>(sq) : Scalar(0);
  report.wce = sq > Acc(0) ? static_cast<Scalar>(std::sqrt(sq)) : Scalar(0);
  return report;
}

// {mu(k_mu), quadratic, cross} in extended precision.
template <typename Scalar>
std::array<accumulator_t<Scalar>, 3> wce_terms(const QuadratureRule<Scalar>& rule,
                                               Scalar length_scale) {
  using Acc = accumulator_t<Scalar>;
  if (!(length_scale > Scalar(0))) throw DomainError("length-scale must be positive");
  const Eigen::Index n = rule.size();
  if (n == 0) throw SizeError("worst-case error needs a nonempty rule");

  const Acc l = length_scale;
  const Acc inv_two_l2 = Acc(1) / (Acc(2) * l * l);
  CompensatedSum<Acc> quadratic;
  CompensatedSum<Acc> cross;
  for (Eigen::Index i = 0; i < n; ++i) {
    const Acc wi = rule.weights[i];
    const Acc xi = rule.nodes[i];
    quadratic += wi * wi;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const Acc d = xi - Acc(rule.nodes[j]);
      quadratic += Acc(2) * wi * Acc(rule.weights[j]) * std::exp(-d * d * inv_two_l2);
    }
    cross += wi * kernel_mean(l, xi);
  }
  return {kernel_mean_mean(l), quadratic.value(), cross.value()};
}

}  // namespace detail

/// Terms are accumulated with compensated sums in extended precision and
/// combined there; the square root comes last. The reported terms are
/// rounded to Scalar, so squared() agrees with wce_squared only up to
/// rounding of quantities of order one.
template <typename Scalar>
WceReport<Scalar> worst_case_error(const QuadratureRule<Scalar>& rule, Scalar length_scale) {
  const auto terms = detail::wce_terms(rule, length_scale);
  return detail::finish_wce<Scalar>(terms[0], terms[1], terms[2]);
}

/// Worst-case error of a tensor rule for the separable kernel with the
/// given per-dimension length-scales. Both sums factor over dimensions.
template <typename Scalar>
WceReport<Scalar> tensor_worst_case_error(const TensorRule<Scalar>& rule,
                                          const std::vector<Scalar>& length_scales) {
  using Acc = accumulator_t<Scalar>;
  if (length_scales.size() != std::size_t(rule.dimension())) {
    throw DomainError("one length-scale per tensor dimension required");
  }
  Acc mean_mean(1), quadratic(1), cross(1);
  for (int i = 0; i < rule.dimension(); ++i) {
    const auto terms = detail::wce_terms(rule.factor(i), length_scales[i]);
    mean_mean *= terms[0];
    quadratic *= terms[1];
    cross *= terms[2];
  }
  return detail::finish_wce<Scalar>(mean_mean, quadratic, cross);
}

// Hermite bound constant: H_n(x)^2 / n! <= K^2 exp(x^2 / 2).
inline constexpr double kHermiteBoundConstant = 1.087;

// Cap on -ln(eta) when eta underflows in the flat limit.
inline constexpr double kRateCap = 700.0;

template <typename Scalar>
struct ConvergenceConstants {
  Scalar tau{};     // sqrt(1/2 / (1/2 + delta^2 + eps^2))
  Scalar lambda{};  // eps^2 / (1/2 + delta^2 + eps^2)
  Scalar eta{};     // sqrt(lambda) exp(1 / beta^2)
  Scalar C1{};      // K sqrt(beta)
  Scalar C2{};      // sqrt(tau) / (1 - sqrt(lambda))
  Scalar log_eta{};

  // -ln(eta), capped in the flat limit.
  Scalar c_theory() const {
    const Scalar c = -log_eta;
    return c < Scalar(kRateCap) ? c : Scalar(kRateCap);
  }

  // (1 + C1 W) C2 eta^M
  Scalar bound(Scalar weight_abs_sum, int exact_count) const {
    return (Scalar(1) + C1 * weight_abs_sum) * C2 * std::exp(Scalar(exact_count) * log_eta);
  }
};

template <typename Scalar>
void require_standard_alpha(const MercerBasis<Scalar>& basis) {
  if (!basis.has_standard_alpha()) {
    throw PreconditionError("convergence constants require alpha = 1/sqrt(2)");
  }
}

template <typename Scalar>
ConvergenceConstants<Scalar> theoretical_constants(const MercerBasis<Scalar>& basis) {
  require_standard_alpha(basis);
  ConvergenceConstants<Scalar> c;
  const Scalar denom = Scalar(0.5) + basis.delta_sq() + basis.epsilon_sq();
  c.tau = std::sqrt(Scalar(0.5) / denom);
  c.lambda = basis.epsilon_sq() / denom;
  const Scalar beta_sq = basis.beta() * basis.beta();
  c.log_eta = c.lambda > Scalar(0)
                  ? Scalar(0.5) * std::log(c.lambda) + Scalar(1) / beta_sq
                  : -std::numeric_limits<Scalar>::infinity();
  c.eta = std::exp(c.log_eta);
  c.C1 = Scalar(kHermiteBoundConstant) * std::sqrt(basis.beta());
  c.C2 = std::sqrt(c.tau) / (Scalar(1) - std::sqrt(c.lambda));
  return c;
}

/// sqrt(eps^2 / (1/2 + delta^2 + eps^2)) exp(rho / (2 beta^2)) < 1, alpha = 1/sqrt(2).
template <typename Scalar>
bool eta_lemma_check(Scalar length_scale, Scalar rho) {
  const MercerBasis<Scalar> basis(length_scale, kStandardAlpha<Scalar>);
  const Scalar denom = Scalar(0.5) + basis.delta_sq() + basis.epsilon_sq();
  const Scalar value = std::sqrt(basis.epsilon_sq() / denom) *
                       std::exp(rho / (Scalar(2) * basis.beta() * basis.beta()));
  return value < Scalar(1);
}

template <typename Scalar>
struct MultivariateConstants {
  Scalar C{};
  Scalar eta{};
  int dimension = 1;
  Scalar weight_bound{1};

  // C W^d eta^M
  Scalar bound(int min_exact_count) const {
    return C * std::pow(weight_bound, Scalar(dimension)) *
           std::pow(eta, Scalar(min_exact_count));
  }
};

/// C = 2d (K sqrt(tau beta) / (1 - eta))^d and eta = sqrt(lambda) exp(1/beta^2).
template <typename Scalar>
MultivariateConstants<Scalar> multivariate_constants(const MercerBasis<Scalar>& basis, int d,
                                                     Scalar weight_bound) {
  if (d < 1) throw DomainError("dimension must be positive");
  if (!(weight_bound >= Scalar(1))) throw DomainError("weight bound W must be at least 1");
  const ConvergenceConstants<Scalar> c = theoretical_constants(basis);
  const Scalar base =
      Scalar(kHermiteBoundConstant) * std::sqrt(c.tau * basis.beta()) / (Scalar(1) - c.eta);
  MultivariateConstants<Scalar> out;
  out.C = Scalar(2 * d) * std::pow(base, Scalar(d));
  out.eta = c.eta;
  out.dimension = d;
  out.weight_bound = weight_bound;
  return out;
}

/// Least-squares slope of ln(values) against positions.
template <typename Scalar>
Scalar log_linear_slope(const std::vector<Scalar>& positions, const std::vector<Scalar>& values) {
  if (positions.size() != values.size() || positions.size() < 2) {
    throw DomainError("slope fit needs at least two matching samples");
  }
  const auto n = static_cast<Scalar>(positions.size());
  Scalar mx(0), my(0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    mx += positions[i];
    my += std::log(values[i]);
  }
  mx /= n;
  my /= n;
  Scalar sxy(0), sxx(0);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    const Scalar dx = positions[i] - mx;
    sxy += dx * (std::log(values[i]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

}  // namespace gkq
