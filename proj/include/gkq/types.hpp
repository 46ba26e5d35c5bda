#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace gkq {

template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

using VectorXd = Vector<double>;
using MatrixXd = Matrix<double>;

// Global scale of the Mercer basis for which the eigenfunctions are
// orthonormal in L2 of the standard Gaussian measure.
template <typename Scalar>
inline constexpr Scalar kStandardAlpha = Scalar(1) / std::numbers::sqrt2_v<Scalar>;

// Extended-precision accumulator used where double sums cancel badly.
template <typename Scalar>
struct accumulator {
  using type = Scalar;
};
template <>
struct accumulator<double> {
  using type = long double;
};
template <>
struct accumulator<float> {
  using type = double;
};
template <typename Scalar>
using accumulator_t = typename accumulator<Scalar>::type;

// Neumaier compensated summation.
template <typename Scalar>
class CompensatedSum {
 public:
  void add(Scalar value) {
    const Scalar t = sum_ + value;
    if (std::abs(sum_) >= std::abs(value)) {
      compensation_ += (sum_ - t) + value;
    } else {
      compensation_ += (value - t) + sum_;
    }
    sum_ = t;
  }

  CompensatedSum& operator+=(Scalar value) {
    add(value);
    return *this;
  }

  Scalar value() const { return sum_ + compensation_; }

 private:
  Scalar sum_{0};
  Scalar compensation_{0};
};

}  // namespace gkq
