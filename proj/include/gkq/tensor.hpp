#pragma once

// Tensor-product cubature on Cartesian grids for the d-variate standard
// Gaussian measure:
//
//   Q^d(f) = sum_{I <= N} w_I f(x_I),  x_I = (x_{1,I(1)}, ..., x_{d,I(d)}),
//   w_I = prod_i w^i_{I(i)}.
//
// The grid is never materialized; points are streamed by a multi-index
// odometer with the last dimension varying fastest.

#include <gkq/errors.hpp>
#include <gkq/quadrature_rule.hpp>
#include <gkq/types.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

namespace gkq {

inline constexpr int kTensorMaxDimension = 6;
inline constexpr std::int64_t kTensorMaxPoints = 10'000'000;

using MultiIndex = std::array<int, kTensorMaxDimension>;

template <typename Scalar>
struct GridPoint {
  MultiIndex index{};
  std::array<Scalar, kTensorMaxDimension> node{};
  Scalar weight{};
  int dimension = 0;

  std::span<const Scalar> coordinates() const { return {node.data(), std::size_t(dimension)}; }
};

template <typename Scalar>
class TensorRule {
 public:
  explicit TensorRule(std::vector<QuadratureRule<Scalar>> factors) : factors_(std::move(factors)) {
    if (factors_.empty()) throw DomainError("tensor rule needs at least one factor");
    if (factors_.size() > std::size_t(kTensorMaxDimension)) {
      throw SizeError("tensor rule dimension " + std::to_string(factors_.size()) +
                      " exceeds " + std::to_string(kTensorMaxDimension));
    }
    std::int64_t total = 1;
    for (const auto& f : factors_) {
      if (f.size() == 0) throw DomainError("tensor rule factor has no nodes");
      total *= f.size();
      if (total > kTensorMaxPoints) {
        throw SizeError("tensor grid exceeds " + std::to_string(kTensorMaxPoints) + " points");
      }
    }
    size_ = total;
  }

  int dimension() const { return static_cast<int>(factors_.size()); }
  std::int64_t size() const { return size_; }
  const std::vector<QuadratureRule<Scalar>>& factors() const { return factors_; }
  const QuadratureRule<Scalar>& factor(int i) const { return factors_[i]; }

  /// prod_i (sum of factor i weights)
  Scalar weight_sum() const {
    Scalar total(1);
    for (const auto& f : factors_) total *= f.weight_sum();
    return total;
  }

  MultiIndex unravel(std::int64_t linear) const {
    MultiIndex idx{};
    for (int i = dimension() - 1; i >= 0; --i) {
      const auto n = factors_[i].size();
      idx[i] = static_cast<int>(linear % n);
      linear /= n;
    }
    return idx;
  }

  GridPoint<Scalar> point(const MultiIndex& idx) const {
    GridPoint<Scalar> p;
    p.index = idx;
    p.dimension = dimension();
    p.weight = Scalar(1);
    for (int i = 0; i < dimension(); ++i) {
      p.node[i] = factors_[i].nodes[idx[i]];
      p.weight *= factors_[i].weights[idx[i]];
    }
    return p;
  }

  // Streams grid points over the linear index range [begin, end).
  class Cursor {
   public:
    Cursor(const TensorRule& rule, std::int64_t begin, std::int64_t end)
        : rule_(&rule), linear_(begin), end_(end), index_(rule.unravel(begin)) {}

    bool done() const { return linear_ >= end_; }
    GridPoint<Scalar> current() const { return rule_->point(index_); }
    std::int64_t linear() const { return linear_; }

    void advance() {
      ++linear_;
      for (int i = rule_->dimension() - 1; i >= 0; --i) {
        if (++index_[i] < rule_->factor(i).size()) return;
        index_[i] = 0;
      }
    }

   private:
    const TensorRule* rule_;
    std::int64_t linear_;
    std::int64_t end_;
    MultiIndex index_;
  };

  Cursor cursor(std::int64_t begin = 0) const { return Cursor(*this, begin, size_); }
  Cursor cursor(std::int64_t begin, std::int64_t end) const { return Cursor(*this, begin, end); }

 private:
  std::vector<QuadratureRule<Scalar>> factors_;
  std::int64_t size_ = 0;
};

template <typename Scalar>
TensorRule<Scalar> tensor_rule(std::vector<QuadratureRule<Scalar>> factors) {
  return TensorRule<Scalar>(std::move(factors));
}

class EvaluationError : public NumericalFailure {
 public:
  EvaluationError(const MultiIndex& index, int dimension)
      : NumericalFailure(describe(index, dimension)), index_(index), dimension_(dimension) {}

  const MultiIndex& index() const { return index_; }
  int dimension() const { return dimension_; }

 private:
  static std::string describe(const MultiIndex& index, int dimension) {
    std::ostringstream os;
    os << "integrand is not finite at multi-index (";
    for (int i = 0; i < dimension; ++i) os << (i ? "," : "") << index[i];
    os << ")";
    return os.str();
  }

  MultiIndex index_;
  int dimension_;
};

/// Weighted sum over the full grid. With workers > 1 the linear index range
/// is split into contiguous equal chunks, each summed in grid order, and the
/// chunk totals are added left to right; the result depends only on the
/// worker count.
template <typename Scalar, typename F>
Scalar tensor_integrate(const TensorRule<Scalar>& rule, F&& f, int workers = 1) {
  if (workers < 1) workers = 1;
  const std::int64_t total = rule.size();
  if (std::int64_t(workers) > total) workers = static_cast<int>(total);

  auto sum_range = [&](std::int64_t begin, std::int64_t end) {
    Scalar acc(0);
    for (auto c = rule.cursor(begin, end); !c.done(); c.advance()) {
      const GridPoint<Scalar> p = c.current();
      const Scalar v = f(p.coordinates());
      if (!std::isfinite(v)) throw EvaluationError(p.index, p.dimension);
      acc += p.weight * v;
    }
    return acc;
  };

  if (workers == 1) return sum_range(0, total);

  std::vector<Scalar> partial(workers, Scalar(0));
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) {
      const std::int64_t begin = total * w / workers;
      const std::int64_t end = total * (w + 1) / workers;
      threads.emplace_back([&, w, begin, end] {
        try {
          partial[w] = sum_range(begin, end);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  Scalar acc(0);
  for (const Scalar p : partial) acc += p;
  return acc;
}

template <typename Scalar>
class SeparableGaussianKernel {
 public:
  explicit SeparableGaussianKernel(std::vector<Scalar> length_scales)
      : length_scales_(std::move(length_scales)) {
    if (length_scales_.empty()) throw DomainError("separable kernel needs a dimension");
    for (Scalar l : length_scales_) {
      if (!(l > Scalar(0))) throw DomainError("length-scales must be positive");
    }
  }

  int dimension() const { return static_cast<int>(length_scales_.size()); }
  const std::vector<Scalar>& length_scales() const { return length_scales_; }

  Scalar operator()(std::span<const Scalar> x, std::span<const Scalar> y) const {
    if (x.size() != length_scales_.size() || y.size() != length_scales_.size()) {
      throw DomainError("point dimension does not match kernel");
    }
    Scalar exponent(0);
    for (std::size_t i = 0; i < length_scales_.size(); ++i) {
      const Scalar r = (x[i] - y[i]) / length_scales_[i];
      exponent += r * r;
    }
    return std::exp(-exponent / Scalar(2));
  }

 private:
  std::vector<Scalar> length_scales_;
};

/// f(x) = prod_i exp(-c_i x_i^2 / (2 l^2)) x_i^{m_i} together with its
/// integral against the standard Gaussian measure.
template <typename Scalar>
struct TestIntegrand {
  std::vector<int> powers;
  std::vector<Scalar> decay;
  Scalar length_scale{};
  Scalar exact{};

  Scalar operator()(std::span<const Scalar> x) const {
    Scalar value(1);
    const Scalar two_l2 = Scalar(2) * length_scale * length_scale;
    for (std::size_t i = 0; i < powers.size(); ++i) {
      value *= std::exp(-decay[i] * x[i] * x[i] / two_l2);
      Scalar p(1);
      for (int k = 0; k < powers[i]; ++k) p *= x[i];
      value *= p;
    }
    return value;
  }
};

/// Gaussian integral of exp(-c x^2 / (2 l^2)) x^m:
/// (m-1)!! (l / sqrt(c))^{m+1} (1 + l^2 / c)^{-(m+1)/2} for even m, 0 for odd m.
template <typename Scalar>
Scalar test_integrand_factor(int m, Scalar c, Scalar length_scale) {
  if (m % 2 == 1) return Scalar(0);
  Scalar double_factorial(1);
  for (int k = m - 1; k > 1; k -= 2) double_factorial *= Scalar(k);
  const Scalar s = length_scale / std::sqrt(c);
  const Scalar p = Scalar(m + 1);
  return double_factorial * std::pow(s, p) * std::pow(Scalar(1) + s * s, -p / Scalar(2));
}

template <typename Scalar>
TestIntegrand<Scalar> test_integrand(int d, std::vector<int> m, std::vector<Scalar> c,
                                     Scalar length_scale) {
  if (d < 1 || d > kTensorMaxDimension) throw SizeError("test integrand dimension out of range");
  if (m.size() != std::size_t(d) || c.size() != std::size_t(d)) {
    throw DomainError("test integrand needs one power and one decay per dimension");
  }
  if (!(length_scale > Scalar(0))) throw DomainError("length-scale must be positive");
  Scalar exact(1);
  for (int i = 0; i < d; ++i) {
    if (m[i] < 0) throw DomainError("test integrand powers must be nonnegative");
    if (!(c[i] > Scalar(0) && c[i] < Scalar(4))) {
      throw DomainError("test integrand decay must lie in (0, 4) for RKHS membership");
    }
    exact *= test_integrand_factor(m[i], c[i], length_scale);
  }
  return TestIntegrand<Scalar>{std::move(m), std::move(c), length_scale, exact};
}

}  // namespace gkq
