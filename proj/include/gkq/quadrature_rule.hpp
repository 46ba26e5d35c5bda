#pragma once

#include <gkq/errors.hpp>
#include <gkq/types.hpp>

#include <string_view>

namespace gkq {

enum class Measure { StandardGaussian };

inline std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::StandardGaussian:
      return "standard-gaussian";
  }
  return "unknown";
}

/// One-dimensional quadrature rule sum_n w_n f(x_n), nodes ascending.
template <typename Scalar>
struct QuadratureRule {
  Vector<Scalar> nodes;
  Vector<Scalar> weights;
  Measure measure = Measure::StandardGaussian;

  Eigen::Index size() const { return nodes.size(); }

  Scalar weight_sum() const { return weights.sum(); }

  template <typename F>
  Scalar integrate(F&& f) const {
    Scalar total(0);
    for (Eigen::Index i = 0; i < nodes.size(); ++i) {
      total += weights[i] * f(nodes[i]);
    }
    return total;
  }
};

template <typename Scalar>
QuadratureRule<Scalar> make_rule(Vector<Scalar> nodes, Vector<Scalar> weights) {
  if (nodes.size() != weights.size()) {
    throw DomainError("node and weight counts differ");
  }
  if (nodes.size() == 0) {
    throw SizeError("quadrature rule must have at least one node");
  }
  return QuadratureRule<Scalar>{std::move(nodes), std::move(weights),
                                Measure::StandardGaussian};
}

}  // namespace gkq
