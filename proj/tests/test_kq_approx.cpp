#include <doctest.h>

#include <gkq/kq_approx.hpp>
#include <gkq/kq_exact.hpp>

#include <cmath>

using namespace gkq;

TEST_CASE("scaled nodes") {
  const VectorXd flat = scaled_nodes(basis_from(1e8), 5);
  const VectorXd gh = gh_rule<double>(5).nodes;
  for (int i = 0; i < 5; ++i) CHECK(std::abs(flat[i] - gh[i]) <= 1e-7 * std::abs(gh[i]));
  CHECK(scaled_nodes(basis_from(0.3), 1)[0] == 0.0);

  const double beta = std::pow(5.0, 0.25);
  const VectorXd n3 = scaled_nodes(basis_from(1.0), 3);
  CHECK(n3[0] == doctest::Approx(-std::sqrt(3.0) / beta).scale(1e-300).epsilon(1e-15));
  CHECK(n3[1] == 0.0);
  CHECK(n3[2] == doctest::Approx(std::sqrt(3.0) / beta).scale(1e-300).epsilon(1e-15));
}

TEST_CASE("nodes follow the source rule exactly") {
  const auto a = approx_weights(0.4, 30);
  const double s = std::sqrt(2.0) * a.basis.alpha() * a.basis.beta();
  for (int i = 0; i < 30; ++i) CHECK(a.nodes()[i] == a.gh_source.nodes[i] / s);
}

TEST_CASE("one-point rule") {
  for (double ell : {0.1, 1.0, 7.0}) {
    const auto a = approx_weights(ell, 1);
    CHECK(a.weights()[0] ==
          doctest::Approx(1 / std::sqrt(1 + 2 * a.basis.delta_sq())).scale(1e-300).epsilon(1e-15));
  }
}

TEST_CASE("flat limit weights") {
  const auto a = approx_weights(1e8, 10);
  CHECK((a.weights() - a.gh_source.weights).cwiseAbs().maxCoeff() <= 1e-6);
  const auto b = approx_weights(1e4, 20);
  CHECK((b.weights() - b.gh_source.weights).cwiseAbs().maxCoeff() <= 1e-6);
}

TEST_CASE("N = 99 weights are positive and smooth") {
  for (double ell : {0.05, 0.4, 4.0}) {
    const auto a = approx_weights(ell, 99);
    CHECK(a.weights().allFinite());
    CHECK((a.weights().array() > 0).all());
  }
  // ell = 0.4: log-weights bend gently, no jumps
  const auto a = approx_weights(0.4, 99);
  const Eigen::ArrayXd lw = a.weights().array().log();
  for (int i = 1; i < 98; ++i) CHECK(std::abs(lw[i + 1] - 2 * lw[i] + lw[i - 1]) < 1.0);
}

TEST_CASE("exactness residuals") {
  const auto a = approx_weights(1.0, 10);
  for (int n = 0; n < 10; ++n) {
    CHECK(eigen_exactness_residual(a, n) <= 1e-9);
    if (n % 2) CHECK(eigen_exactness_residual(a, n) <= 1e-12);
  }
  CHECK_THROWS_AS(eigen_exactness_residual(a, 10), IndexError);
  CHECK_THROWS_AS(eigen_exactness_residual(a, -1), IndexError);
  // first non-enforced eigenfunction
  CHECK(eigen_integration_error(a.rule, a.basis, 10) > 1e-6);

  for (double ell : {0.2, 0.5, 1.0, 4.0}) {
    for (int N : {5, 20, 40, 60}) {
      const auto r = approx_weights(ell, N);
      for (int n = 0; n < N; ++n) CHECK(eigen_exactness_residual(r, n) <= 1e-8);
    }
  }
}

TEST_CASE("symmetry of the weights") {
  for (double ell : {0.05, 1.0, 4.0}) {
    for (int N : {7, 50, 200}) {
      const auto a = approx_weights(ell, N);
      for (int i = 0; i < N; ++i) {
        CHECK(std::abs(a.weights()[i] - a.weights()[N - 1 - i]) <= 1e-12 * a.weights()[i]);
      }
    }
  }
}

TEST_CASE("finite for the whole supported range") {
  for (double ell : {0.05, 0.3, 2.0, 10.0}) {
    for (int N : {1, 2, 50, 150, 200}) CHECK(approx_weights(ell, N).weights().allFinite());
  }
}

TEST_CASE("positivity polynomial") {
  for (double ell : {0.05, 1.0, 4.0}) {
    const double g = basis_from(ell).gamma();
    for (int N : {1, 2, 5, 10, 25, 50, 100}) {
      const double half = 2 * std::sqrt(double(N));
      for (int i = 0; i < 10000; ++i) {
        const double x = -half + 2 * half * i / 9999.0;
        CHECK(positivity_polynomial(g, N, x) > 0);
      }
    }
  }
  CHECK(positivity_polynomial(0.5, 1, 3.0) == 1.0);
  // N = 3: 1 + gamma H_2(x) / 2
  CHECK(positivity_polynomial(0.5, 3, 2.0) == doctest::Approx(1 + 0.5 * 3 / 2).scale(1e-300).epsilon(1e-15));
  CHECK_THROWS_AS(positivity_polynomial(0.5, 0, 1.0), SizeError);
}

TEST_CASE("QR weights with M = N reproduce the closed form") {
  for (double ell : {0.2, 1.0, 4.0}) {
    const auto basis = basis_from(ell);
    for (int N : {1, 5, 20, 40, 60}) {
      const auto a = approx_weights(basis, N);
      const VectorXd q = qr_weights(basis, a.nodes(), N);
      const double err = (q - a.weights()).cwiseAbs().maxCoeff() / a.weights().cwiseAbs().maxCoeff();
      CHECK(err <= 1e-9);
    }
  }
}

TEST_CASE("QR weights approach the exact weights") {
  const auto basis = basis_from(0.2);
  const auto a = approx_weights(basis, 20);
  const VectorXd q = qr_weights(basis, a.nodes(), 60);
  const auto ex = exact_weights(a.nodes(), 0.2);
  REQUIRE(ex.reliable);
  CHECK((q - ex.weights).cwiseAbs().maxCoeff() <= 1e-6);

  const auto b1 = basis_from(1.0);
  VectorXd zero(1);
  zero << 0.0;
  CHECK(qr_weights(b1, zero, 1)[0] ==
        doctest::Approx(1 / std::sqrt(1 + 2 * b1.delta_sq())).scale(1e-300).epsilon(1e-15));
  // the scalar truncation converges to k_mu(0) / k(0, 0)
  CHECK(qr_weights(b1, zero, 80)[0] == doctest::Approx(1 / std::sqrt(2.0)).scale(1e-300).epsilon(1e-12));
}

TEST_CASE("QR input checks") {
  const auto b = basis_from(1.0);
  const VectorXd nodes = scaled_nodes(b, 5);
  CHECK_THROWS_AS(qr_weights(b, nodes, 4), DomainError);
  CHECK_THROWS_AS(qr_weights(b, nodes, 402), DegreeOverflowError);
  CHECK_THROWS_AS(qr_weights(b, VectorXd(), 3), SizeError);
}

TEST_CASE("machine-precision truncation") {
  for (double ell : {0.05, 0.2, 1.0, 4.0}) {
    const auto b = basis_from(ell);
    const int m = machine_precision_truncation(b);
    const double eps = std::numeric_limits<double>::epsilon();
    CHECK(std::pow(b.eigenvalue_ratio(), m) < eps);
    CHECK(std::pow(b.eigenvalue_ratio(), m - 1) >= eps);
  }
}

TEST_CASE("Christoffel-Darboux") {
  CHECK(christoffel_darboux_sum(1.0, 0.0, 1) == 1.0);
  CHECK(christoffel_darboux_closed_form(1.0, 0.0, 1) == doctest::Approx(1.0).scale(1e-300).epsilon(1e-15));
  CHECK(christoffel_darboux_sum(2.0, -1.0, 10) ==
        doctest::Approx(christoffel_darboux_closed_form(2.0, -1.0, 10)).scale(1e-300).epsilon(1e-10));
  CHECK(std::abs(christoffel_darboux_sum(0.5, 0.4, 25) -
                 christoffel_darboux_closed_form(0.5, 0.4, 25)) <= 1e-9);
  CHECK_THROWS_AS(christoffel_darboux_sum(0.3, 0.3, 4), DomainError);
  CHECK_THROWS_AS(christoffel_darboux_closed_form(0.3, 0.3, 4), DomainError);
}
