#include <doctest.h>

#include "oracle.hpp"

#include <gkq/gauss_hermite.hpp>
#include <gkq/mercer.hpp>

#include <cmath>

using namespace gkq;

namespace {
const double kAlpha = 1 / std::sqrt(2.0);
}

TEST_CASE("constants at l = 1") {
  const auto b = basis_from(1.0);
  CHECK(b.epsilon_sq() == doctest::Approx(0.5).scale(1e-300).epsilon(1e-15));
  CHECK(b.beta() == doctest::Approx(std::pow(5.0, 0.25)).scale(1e-300).epsilon(1e-15));
  CHECK(b.beta() == doctest::Approx(1.495349).scale(1e-300).epsilon(1e-6));
  CHECK(b.delta_sq() == doctest::Approx((std::sqrt(5.0) - 1) / 4).scale(1e-300).epsilon(1e-15));
  CHECK(b.delta_sq() == doctest::Approx(0.309017).scale(1e-300).epsilon(1e-6));
  CHECK(b.beta() > 1);
  CHECK(b.delta_sq() > 0);
  CHECK(b.has_standard_alpha());
}

TEST_CASE("gamma closed form and range") {
  for (double ell : {0.01, 0.05, 0.2, 1.0, 4.0, 100.0}) {
    const auto b = basis_from(ell);
    const double e2 = b.epsilon_sq();
    const double s = std::sqrt(1 + 8 * e2);
    CHECK(b.gamma() == doctest::Approx(8 * e2 / ((1 + s) * (1 + s))).scale(1e-300).epsilon(1e-13));
    CHECK(b.gamma() > 0);
    CHECK(b.gamma() < 1);
    CHECK(b.eigenvalue_ratio() > 0);
    CHECK(b.eigenvalue_ratio() < 1);
  }
  CHECK(basis_from(0.05).gamma() == doctest::Approx(0.9512).scale(1e-300).epsilon(5e-5 / 0.9512));
}

TEST_CASE("flat limit") {
  const auto b = basis_from(1e8);
  CHECK(std::abs(b.beta() - 1) <= 1e-10);
  CHECK(std::abs(b.delta_sq()) <= 1e-10);
  CHECK(b.delta_sq() > 0);
  CHECK(eigenvalue(b, 1) <= 1e-15);
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(basis_from(0.0), DomainError);
  CHECK_THROWS_AS(basis_from(-1.0), DomainError);
  CHECK_THROWS_AS(basis_from(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(GaussianKernel<double>(0.0), DomainError);
  CHECK_THROWS_AS(eigenvalue(basis_from(1.0), -1), DomainError);
}

TEST_CASE("eigenvalues") {
  const auto b = basis_from(1.0);
  const double d2 = (std::sqrt(5.0) - 1) / 4;
  CHECK(eigenvalue(b, 0) == doctest::Approx(std::sqrt(0.5 / (1 + d2))).scale(1e-300).epsilon(1e-15));
  // sqrt(0.5 / (1 + delta^2)) = 0.6180340 (the reciprocal golden ratio)
  CHECK(eigenvalue(b, 0) == doctest::Approx(0.6180340).scale(1e-300).epsilon(1e-7));
  for (int n = 0; n < 30; ++n) {
    CHECK(eigenvalue(b, n + 1) / eigenvalue(b, n) ==
          doctest::Approx(b.eigenvalue_ratio()).scale(1e-300).epsilon(1e-13));
    CHECK(eigenvalue(b, n + 1) < eigenvalue(b, n));
  }
}

TEST_CASE("eigenfunctions") {
  for (double ell : {0.3, 1.0, 5.0}) {
    const auto b = basis_from(ell);
    CHECK(eigenfunction(b, 0, 0.0) == doctest::Approx(std::sqrt(b.beta())).scale(1e-300).epsilon(1e-15));
    CHECK(eigenfunction(b, 1, 0.0) == 0.0);
  }
  const auto b = basis_from(1.0);
  const double x = 0.7;
  const double direct = std::sqrt(b.beta() / 120.0) * std::exp(-b.delta_sq() * x * x) *
                        hermite(5, std::sqrt(2.0) * kAlpha * b.beta() * x);
  CHECK(eigenfunction(b, 5, x) == doctest::Approx(direct).scale(1e-300).epsilon(1e-12));

  const VectorXd all = eigenfunction_values(b, 12, -1.3);
  for (int n = 0; n < 12; ++n) {
    CHECK(all[n] == doctest::Approx(eigenfunction(b, n, -1.3)).scale(1e-300).epsilon(1e-14));
  }
}

TEST_CASE("orthonormality in L2(mu_alpha)") {
  const auto gh = gh_rule<double>(200);
  for (double alpha : {kAlpha, 1.0}) {
    // mu_alpha has density alpha/sqrt(pi) e^{-alpha^2 x^2}: standard nodes / (sqrt(2) alpha)
    const VectorXd nodes = gh.nodes / (std::sqrt(2.0) * alpha);
    for (double ell : {0.5, 1.0, 2.0}) {
      const auto b = basis_from(ell, alpha);
      MatrixXd phi(nodes.size(), 26);
      for (Eigen::Index i = 0; i < nodes.size(); ++i) {
        phi.row(i) = eigenfunction_values(b, 26, nodes[i]).transpose();
      }
      const MatrixXd gram = phi.transpose() * gh.weights.asDiagonal() * phi;
      CHECK((gram - MatrixXd::Identity(26, 26)).cwiseAbs().maxCoeff() <= 1e-7);
    }
  }
}

TEST_CASE("eigenfunction bound") {
  for (double ell : {0.2, 1.0, 4.0}) {
    const auto b = basis_from(ell);
    for (int i = 0; i <= 300; ++i) {
      const double x = -15 + 0.1 * i;
      const VectorXd phi = eigenfunction_values(b, 61, x);
      const double bound = 1.087 * std::sqrt(b.beta()) * std::exp(kAlpha * kAlpha * x * x / 2);
      CHECK(phi.cwiseAbs().maxCoeff() <= bound);
    }
  }
}

TEST_CASE("central binomial ratios") {
  const VectorXd r = central_binomial_ratios(40);
  double binom = 1;  // binom(2m, m) / 4^m
  for (int m = 0; m <= 40; ++m) {
    if (m > 0) binom *= (2.0 * m) * (2.0 * m - 1) / (m * m * 4.0);
    CHECK(r[m] == doctest::Approx(std::sqrt(binom)).scale(1e-300).epsilon(1e-14));
  }
}

TEST_CASE("eigenfunction means") {
  const auto b1 = basis_from(1.0);
  CHECK(eigenfunction_mean(b1, 3) == 0.0);
  CHECK(eigenfunction_mean(b1, 0) ==
        doctest::Approx(std::sqrt(b1.beta() / (1 + 2 * b1.delta_sq()))).scale(1e-300).epsilon(1e-15));

  for (double ell : {0.2, 1.0, 4.0}) {
    const auto b = basis_from(ell);
    const VectorXd means = eigenfunction_means(b, 31);
    for (int n = 0; n <= 30; ++n) {
      CHECK(means[n] == doctest::Approx(eigenfunction_mean(b, n)).scale(1e-300).epsilon(1e-14));
      if (n % 2) continue;
      const auto f = [&](double x) { return eigenfunction(b, n, x); };
      const double gk = oracle::gaussian_expectation(f);
      const double tr = oracle::trapezoid(
          [&](double x) { return f(x) * oracle::gaussian_density(x); }, -12, 12, 24000);
      REQUIRE(std::abs(gk - tr) <= 1e-8);
      CHECK(std::abs(eigenfunction_mean(b, n) - gk) <= 1e-8);
    }
  }
  const double gk4 = oracle::gaussian_expectation([&](double x) { return eigenfunction(b1, 4, x); });
  CHECK(std::abs(eigenfunction_mean(b1, 4) - gk4) <= 1e-9);
}

TEST_CASE("truncated kernel") {
  const auto b = basis_from(1.0);
  const GaussianKernel<double> k(1.0);
  CHECK(kernel_truncated(b, 1, 0.0, 0.0) ==
        doctest::Approx(eigenvalue(b, 0) * b.beta()).scale(1e-300).epsilon(1e-15));
  CHECK(std::abs(kernel_truncated(b, 60, 0.3, -0.8) - std::exp(-1.21 / 2)) <= 1e-8);
  CHECK(std::abs(kernel_truncated(basis_from(0.5), 60, 0.0, 0.0) - 1.0) <= 1e-6);
  CHECK(k(0.4, 0.4) == 1.0);
  CHECK_THROWS_AS(kernel_truncated(b, 0, 0.0, 0.0), DomainError);

  for (double ell : {0.5, 1.0, 3.0}) {
    const auto bb = basis_from(ell);
    const GaussianKernel<double> kk(ell);
    double previous = INFINITY;
    for (int m : {5, 10, 20, 40}) {
      double sup = 0;
      for (double x = -2; x <= 2; x += 0.25) {
        for (double y = -2; y <= 2; y += 0.25) {
          sup = std::max(sup, std::abs(kk(x, y) - kernel_truncated(bb, m, x, y)));
        }
      }
      CHECK(sup <= previous);
      previous = sup;
    }
  }
}
