#ifndef DEVDEC_ROTATION_HPP
#define DEVDEC_ROTATION_HPP

#include <Eigen/Geometry>

#include <algorithm>
#include <limits>
#include <stdexcept>

#include "devdec/tensor.hpp"

namespace devdec {

/// Proper rotation of R^3: R R^T = I and det R = +1.
template <typename Scalar_>
class Rotation {
 public:
  using Scalar = Scalar_;
  using Matrix = Eigen::Matrix<Scalar, 3, 3>;

  static Scalar tolerance() {
    return std::max(Scalar(1e-12), Scalar(100) * std::numeric_limits<Scalar>::epsilon());
  }

  Rotation() : matrix_(Matrix::Identity()) {}

  /// Throws std::invalid_argument for non-orthogonal or improper matrices.
  explicit Rotation(const Matrix& m) : matrix_(m) {
    if ((m * m.transpose() - Matrix::Identity()).cwiseAbs().maxCoeff() > tolerance())
      throw std::invalid_argument("rotation matrix is not orthogonal");
    if (std::abs(m.determinant() - Scalar(1)) > tolerance())
      throw std::invalid_argument("rotation matrix is not proper (det != +1)");
  }

  static Rotation identity() { return Rotation(); }

  static Rotation about_axis(const Eigen::Matrix<Scalar, 3, 1>& axis, Scalar angle) {
    return Rotation(Eigen::AngleAxis<Scalar>(angle, axis.normalized()).toRotationMatrix());
  }

  static Rotation from_quaternion(const Eigen::Quaternion<Scalar>& q) {
    return Rotation(q.normalized().toRotationMatrix());
  }

  const Matrix& matrix() const noexcept { return matrix_; }

  /// Composition: (a * b) rotates by b first, then a.
  friend Rotation operator*(const Rotation& a, const Rotation& b) {
    Rotation r;
    r.matrix_ = a.matrix_ * b.matrix_;
    return r;
  }

 private:
  Matrix matrix_;
};

/// T'_{j1..jn} = R_{j1 i1} ... R_{jn in} T_{i1..in}
template <typename Scalar>
DenseTensor<Scalar> rotate(const DenseTensor<Scalar>& t, const Rotation<Scalar>& rotation) {
  const auto& R = rotation.matrix();
  DenseTensor<Scalar> cur = t;
  const int n = t.order();
  // Apply R along one index at a time.
  for (int axis = 0; axis < n; ++axis) {
    const Eigen::Index inner = component_count(n - 1 - axis);
    const Eigen::Index outer = component_count(axis);
    DenseTensor<Scalar> next(n);
    for (Eigen::Index o = 0; o < outer; ++o) {
      const Eigen::Index base = o * kDim * inner;
      for (int j = 0; j < kDim; ++j)
        for (int i = 0; i < kDim; ++i) {
          const Scalar r = R(j, i);
          if (r == Scalar(0)) continue;
          next.components().segment(base + j * inner, inner) +=
              r * cur.components().segment(base + i * inner, inner);
        }
    }
    cur = std::move(next);
  }
  return cur;
}

}  // namespace devdec

#endif  // DEVDEC_ROTATION_HPP
