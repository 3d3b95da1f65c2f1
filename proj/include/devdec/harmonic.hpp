#ifndef DEVDEC_HARMONIC_HPP
#define DEVDEC_HARMONIC_HPP

#include <Eigen/Core>

#include <vector>

#include "devdec/tensor.hpp"

namespace devdec {

/// Relative tolerance for deciding membership in the deviator space.
inline constexpr double kDeviatorTolerance = 1e-10;

/// Orthonormal basis (Frobenius inner product) of the 2s+1 dimensional space
/// of order-s deviators: totally symmetric, traceless tensors.
class DeviatorBasis {
 public:
  DeviatorBasis(int order, Eigen::MatrixXd columns);

  int order() const noexcept { return order_; }
  int dimension() const noexcept { return static_cast<int>(columns_.cols()); }

  /// 3^s x (2s+1) matrix whose columns are the flattened basis tensors.
  const Eigen::MatrixXd& matrix() const noexcept { return columns_; }

  Tensor element(int k) const { return Tensor(order_, columns_.col(k)); }
  std::vector<Tensor> elements() const;

 private:
  int order_;
  Eigen::MatrixXd columns_;
};

/// Coordinates of a deviator relative to deviator_basis(order).
struct DeviatorCoords {
  int order = 0;
  Eigen::VectorXd values;
};

/// Builds the basis from scratch. Deterministic: the same s always produces
/// a bit-identical basis.
///
/// The symmetric monomials sym(e_{i1} x ... x e_{is}), i1 <= ... <= is, are
/// taken in lexicographic order; the kernel of the (1,2)-trace restricted to
/// their span is found by full-pivoting LU and orthonormalized by two passes
/// of modified Gram-Schmidt.
DeviatorBasis build_basis(int s);

/// Cached basis for order s; safe to call concurrently.
const DeviatorBasis& deviator_basis(int s);

/// Orthogonal projection onto the deviators of the same order.
Tensor project_deviator(const Tensor& t);

/// Max of symmetry and trace residuals of t. Zero exactly for deviators.
double deviator_residual(const Tensor& t);

/// True when deviator_residual(t) <= tol * |t|.
bool is_deviator(const Tensor& t, double tol = kDeviatorTolerance);

/// Throws std::invalid_argument naming `what` unless is_deviator(t, tol).
void require_deviator(const Tensor& t, const char* what, double tol = kDeviatorTolerance);

/// Coordinates of deviator t. Throws std::invalid_argument if t is not in the
/// deviator space within kDeviatorTolerance relative to its norm.
DeviatorCoords coords(const Tensor& t, const DeviatorBasis& basis);
DeviatorCoords coords(const Tensor& t);

Tensor from_coords(const DeviatorCoords& c, const DeviatorBasis& basis);
Tensor from_coords(const DeviatorCoords& c);

}  // namespace devdec

#endif  // DEVDEC_HARMONIC_HPP
