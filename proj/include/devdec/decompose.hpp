#ifndef DEVDEC_DECOMPOSE_HPP
#define DEVDEC_DECOMPOSE_HPP

#include <string>
#include <vector>

#include "devdec/tensor.hpp"

namespace devdec {

/// Trinomial coefficient [n, s]: the coefficient of x^s in (1 + x + 1/x)^n.
/// Zero for |s| > n.
long long trinomial(int n, int s);

/// J_s^n = [n, s] - [n, s+1], the number of independent order-s deviators in
/// the decomposition of a generic order-n tensor. Requires 0 <= s <= n.
long long count_parts(int n, int s);

/// One term of the decomposition: the order-s deviator and the order-n
/// tensor it contributes to the sum.
struct IrreduciblePart {
  int s = 0;
  int J = 1;  ///< 1-based index among the parts with the same s
  Tensor deviator;
  Tensor embedded;
};

/// Parts are sorted by (s, J); the embedded tensors sum to the input.
struct Decomposition {
  int order = 0;
  std::vector<IrreduciblePart> parts;
};

/// Where a part comes from in the recursion. A part of an order-(n+1) tensor
/// is created from a part (the parent) of order-n slices; the parent's three
/// slice deviators form G in V (x) D^(s) which splits into deviators of order
/// s-1 (Lower), s (Middle) and s+1 (Upper). A scalar parent only has an
/// Upper child.
struct PartLabel {
  enum class Role { Root, Lower, Middle, Upper };
  int s = 0;
  int J = 1;
  int parent = -1;  ///< index into part_labels(order - 1)
  Role role = Role::Root;
};

/// Deterministic labelling of the parts of an order-n decomposition.
///
/// Parents are visited in their own (s, J) order and each emits its children
/// in the order Lower, Middle, Upper; J counts the children of each order s
/// in that visiting order. The returned list is sorted by (s, J).
const std::vector<PartLabel>& part_labels(int order);

/// alpha delta + epsilon . v + D, the base-case assembly of an order-2 tensor.
Tensor compose_order2(double alpha, const Tensor& v, const Tensor& D);

/// Splits an order-2 tensor into alpha = tr(t)/3 (s=0), v_s = 1/2 eps_{ijs} t_ij
/// (s=1) and D = sym(t) - alpha delta (s=2).
Decomposition decompose_order2(const Tensor& t);

/// G_{k i1..in} = (2n-1)/(n-1) delta_{k i1^} L_{i2^..in^}
///              - delta_{i1^ i2^} L_{i3^..in^ k}
///              + eps_{k s i1^} M_{i2^..in^ s}
///              + U_{k i1..in}
/// with ^ denoting symmetrization over (i1..in), for deviators L, M, U of
/// orders n-1, n, n+1 and n >= 2. The result is totally symmetric and
/// traceless in its last n indices.
Tensor assemble_G(const Tensor& lower, const Tensor& middle, const Tensor& upper);

struct GParts {
  Tensor lower;
  Tensor middle;
  Tensor upper;
};

/// Inverse of assemble_G on V (x) D^(n). Throws std::invalid_argument if the
/// slices g[k] are not deviators within 1e-9 relative to |g|.
GParts extract_from_G(const Tensor& g);

/// Irreducible decomposition of an arbitrary-order tensor.
///
/// Orders 0 and 1 are a single deviator. For order n+1 the tensor is cut
/// into the slices t[k, ...], each slice is decomposed recursively, and for
/// every part label the three slice deviators are stacked into G and split
/// again (scalars become a vector, order-2 G goes through the base case,
/// higher orders through extract_from_G). The embedded tensor of a part is
/// the forward replay of that single deviator through all levels.
Decomposition decompose(const Tensor& t);

/// Sum of the embedded parts.
Tensor reconstruct(const Decomposition& d);

/// Embedded tensor of the part (s, J) of an order-n decomposition for an
/// arbitrary order-s deviator. Linear in `deviator`.
Tensor embed_part(int order, int s, int J, const Tensor& deviator);

/// Consistency checks of a decomposition against the tensor it came from.
/// All residuals are relative; parts whose embedded norm is below 1e-12 |t|
/// are skipped in the orthogonality check.
struct VerifyReport {
  int order = 0;
  bool counts_ok = true;
  double reconstruction_residual = 0.0;
  double max_symmetry_residual = 0.0;
  double max_trace_residual = 0.0;
  double max_embedding_residual = 0.0;
  double max_orthogonality = 0.0;

  std::vector<std::string> failures(double tol) const;
  bool passed(double tol) const { return failures(tol).empty(); }
};

VerifyReport verify(const Decomposition& d, const Tensor& t);

}  // namespace devdec

#endif  // DEVDEC_DECOMPOSE_HPP
