#ifndef DEVDEC_CLOSEDFORM_HPP
#define DEVDEC_CLOSEDFORM_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "devdec/decompose.hpp"
#include "devdec/tensor.hpp"

namespace devdec {

/// (2s-1)/(s-1) delta_{k j1^} D_{j2^..js^} - delta_{j1^ j2^} D_{j3^..js^ k},
/// hats symmetrizing over j1..js only. `d` is an order-(s-1) deviator, the
/// result has indices (k, j1, .., js). Requires s >= 2.
Tensor l_apply(int s, const Tensor& d);

/// The order-2s tensor L_{k j1..js l1..l(s-1)} with
/// contract_last_first(l_tensor(s), d, s-1) == l_apply(s, d) for deviators d.
Tensor l_tensor(int s);

/// L_ijkl = 3/2 (d_ij d_kl + d_ik d_jl) - d_il d_jk, i.e. l_tensor(2).
Tensor l4();

/// One hemitropic pattern of an order-3 or order-4 closed form, applied to
/// the deviator of the part (s, J). Output indices are (i, j, k[, l]) with i
/// the index added last by the recursion.
struct ClosedFormTerm {
  int s;
  int J;
  const char* expression;
  Tensor (*structure)(const Tensor& deviator);
};

/// Terms of the order-3 (7 terms) or order-4 (19 terms) closed form, sorted
/// by (s, J) like part_labels(order).
std::span<const ClosedFormTerm> closed_form_terms(int order);

/// Scalar c with embed_part(order, s, J, d) = c * structure(d).
struct StructuralCoefficient {
  int s = 0;
  int J = 1;
  double value = 0.0;
  /// max over samples of |embed - c structure| / |embed|
  double residual = 0.0;
};

/// Least-squares fit of every term's coefficient against the recursive
/// engine over `samples` random deviators.
std::vector<StructuralCoefficient> fit_structural_coefficients(int order, int samples = 4,
                                                               std::uint64_t seed = 20240917);

/// Frozen coefficients used by the closed-form assemblies.
std::span<const double> structural_coefficients(int order);

/// Sum over the parts of c_(s,J) * structure_(s,J)(deviator). Throws
/// std::invalid_argument unless the parts match part_labels(3) / (4).
Tensor assemble_order3(const Decomposition& parts);
Tensor assemble_order4(const Decomposition& parts);

}  // namespace devdec

#endif  // DEVDEC_CLOSEDFORM_HPP
