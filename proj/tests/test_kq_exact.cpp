#include <doctest.h>

#include "oracle.hpp"

#include <gkq/kq_approx.hpp>
#include <gkq/kq_exact.hpp>
#include <gkq/wce.hpp>

#include <cmath>
#include <random>

using namespace gkq;

TEST_CASE("kernel mean closed form") {
  CHECK(kernel_mean(1.0, 0.0) == doctest::Approx(1 / std::sqrt(2.0)).scale(1e-300).epsilon(1e-15));
  CHECK(kernel_mean(1.0, 0.0) == doctest::Approx(0.7071068).scale(1e-300).epsilon(1e-7));
  CHECK(kernel_mean(1.0, 3.0) == doctest::Approx(std::exp(-9.0 / 4) / std::sqrt(2.0)).scale(1e-300).epsilon(1e-15));
  CHECK(std::abs(kernel_mean(1e8, 0.0) - 1) <= 1e-12);
  CHECK_THROWS_AS(kernel_mean(0.0, 1.0), DomainError);
}

TEST_CASE("kernel mean against adaptive quadrature") {
  for (double ell : {0.2, 1.0, 4.0}) {
    for (double x : {-3.0, -0.7, 0.0, 1.1, 2.5}) {
      const GaussianKernel<double> k(ell);
      const double ref = oracle::gaussian_expectation([&](double y) { return k(x, y); });
      CHECK(std::abs(kernel_mean(ell, x) - ref) <= 1e-10);
    }
  }
}

TEST_CASE("kernel mean-mean against nested quadrature") {
  CHECK(kernel_mean_mean(1.0) == doctest::Approx(1 / std::sqrt(3.0)).scale(1e-300).epsilon(1e-15));
  CHECK(kernel_mean_mean(0.2) == doctest::Approx(0.2 / std::sqrt(2.04)).scale(1e-300).epsilon(1e-15));
  CHECK(std::abs(kernel_mean_mean(1e8) - 1) <= 1e-12);
  for (double ell : {0.2, 1.0, 4.0}) {
    const GaussianKernel<double> k(ell);
    const double ref = oracle::integrate(
        [&](double x) {
          return oracle::gaussian_density(x) *
                 oracle::integrate([&](double y) { return k(x, y) * oracle::gaussian_density(y); },
                                   -10, 10, 1e-15);
        },
        -10, 10, 1e-13);
    CHECK(std::abs(kernel_mean_mean(ell) - ref) <= 1e-10);
  }
}

TEST_CASE("kernel system invariants") {
  const VectorXd nodes = scaled_nodes(basis_from(0.7), 12);
  const auto sys = build_kernel_system(nodes, 0.7);
  CHECK((sys.kernel_matrix - sys.kernel_matrix.transpose()).cwiseAbs().maxCoeff() <= 1e-14);
  CHECK((sys.kernel_matrix.diagonal().array() == 1.0).all());
  const double cap = 0.7 / std::sqrt(1 + 0.49);
  CHECK((sys.embedding_vector.array() > 0).all());
  CHECK((sys.embedding_vector.array() <= cap).all());
  CHECK(sys.condition_estimate >= 1.0);
}

TEST_CASE("single and symmetric nodes") {
  VectorXd one(1);
  one << 0.0;
  const auto w1 = exact_weights(one, 1.0);
  CHECK(w1.weights[0] == doctest::Approx(1 / std::sqrt(2.0)).scale(1e-300).epsilon(1e-15));
  CHECK(w1.condition_estimate == 1.0);
  CHECK(w1.reliable);

  for (double a : {0.1, 1.0, 3.0}) {
    for (double ell : {0.3, 2.0}) {
      VectorXd two(2);
      two << -a, a;
      const auto w = exact_weights(two, ell);
      CHECK(w.weights[0] == doctest::Approx(w.weights[1]).scale(1e-300).epsilon(1e-12));
    }
  }
}

TEST_CASE("symmetry proxy at small length-scales") {
  for (double ell : {0.05, 0.1, 0.2}) {
    for (int n = 2; n <= 40; ++n) {
      const auto w = exact_weights(scaled_nodes(basis_from(ell), n), ell);
      CHECK(std::abs(1 - w.weights[n - 1] / w.weights[0]) <= 1e-6);
    }
  }
}

TEST_CASE("exactness on kernel translates") {
  for (double ell : {0.3, 1.0}) {
    const VectorXd nodes = scaled_nodes(basis_from(ell), 15);
    const auto w = exact_weights(nodes, ell);
    const MatrixXd K = kernel_matrix(nodes, ell);
    const VectorXd residual = K * w.weights - kernel_mean_vector(nodes, ell);
    const double eps = std::numeric_limits<double>::epsilon();
    CHECK(residual.cwiseAbs().maxCoeff() <= 1e2 * w.condition_estimate * eps + 1e-14);
  }
}

TEST_CASE("exact weights minimize the worst-case error") {
  std::mt19937_64 rng(20240611);
  std::normal_distribution<double> noise(0.0, 1.0);
  for (double ell : {0.3, 1.0}) {
    const VectorXd nodes = scaled_nodes(basis_from(ell), 8);
    const auto ex = exact_weights(nodes, ell);
    const double best = worst_case_error(QuadratureRule<double>{nodes, ex.weights}, ell).wce;
    for (int trial = 0; trial < 100; ++trial) {
      VectorXd w = ex.weights;
      const double scale = 1e-3 * (1 + trial % 10);
      for (Eigen::Index i = 0; i < w.size(); ++i) w[i] += scale * noise(rng);
      const double other = worst_case_error(QuadratureRule<double>{nodes, w}, ell).wce;
      CHECK(other - best >= -1e-12);
    }
  }
}

TEST_CASE("ill conditioning is reported, not repaired") {
  const auto b4 = basis_from(4.0);
  const VectorXd nodes = scaled_nodes(b4, 99);
  double cond = 0;
  try {
    const auto w = exact_weights(nodes, 4.0);
    cond = w.condition_estimate;
    CHECK_FALSE(w.reliable);
  } catch (const IllConditionedError& e) {
    cond = e.condition_estimate();
  }
  CHECK(cond >= 1e15);

  // a ridge makes the factorization succeed but leaves the flag to the caller
  const auto ridged = exact_weights(nodes, 4.0, 1e-8);
  CHECK(ridged.weights.allFinite());
}

TEST_CASE("input validation") {
  VectorXd dup(3);
  dup << 0.0, 1.0, 0.0;
  CHECK_THROWS_AS(exact_weights(dup, 1.0), DomainError);
  CHECK_THROWS_AS(exact_weights(VectorXd(), 1.0), SizeError);
  CHECK_THROWS_AS(exact_weights(VectorXd(VectorXd::LinSpaced(201, -1, 1)), 1.0), SizeError);
  CHECK_THROWS_AS(exact_weights(VectorXd(VectorXd::LinSpaced(3, -1, 1)), 1.0, -1.0), DomainError);
}

TEST_CASE("uniform nodes") {
  const VectorXd u = uniform_nodes(-2.0, 2.0, 5);
  CHECK(u[0] == -2.0);
  CHECK(u[4] == 2.0);
  CHECK(u[2] == 0.0);
  CHECK(uniform_nodes(-1.0, 3.0, 1)[0] == 1.0);
  CHECK_THROWS_AS(uniform_nodes(0.0, 1.0, 0), SizeError);
}
