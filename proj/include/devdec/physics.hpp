#ifndef DEVDEC_PHYSICS_HPP
#define DEVDEC_PHYSICS_HPP

#include <Eigen/Core>

#include <array>
#include <string>
#include <vector>

#include "devdec/tensor.hpp"

namespace devdec {

// ---------------------------------------------------------------------------
// Coupling tensor

/// Order-3 tensor with H_ijk = H_jik.
class CouplingTensor {
 public:
  /// Throws std::invalid_argument if t is not order 3 or breaks the
  /// symmetry by more than 1e-12 |t|.
  explicit CouplingTensor(Tensor t);
  const Tensor& tensor() const noexcept { return t_; }

 private:
  Tensor t_;
};

/// The four independent deviators plus the dependent ones:
/// alpha = 0, v1 = 5/2 v3 - v2, D2 = -2/3 D1.
struct CouplingDeviators {
  Tensor v2{1};
  Tensor v3{1};
  Tensor D1{2};
  Tensor D3{3};
  double alpha = 0.0;
  Tensor v1{1};
  Tensor D2{2};
};

/// Literal: the component formulas as published. Fitted: deviators taken
/// from the recursive engine and assembly weights fitted against it.
enum class CouplingVariant { Literal, Fitted };

/// Fills v1, D2 and alpha from the independent fields.
CouplingDeviators with_dependent_fields(CouplingDeviators d);

CouplingDeviators coupling_decompose(const CouplingTensor& h,
                                     CouplingVariant variant = CouplingVariant::Literal);

/// H_ijk = w0 eps_jkt eps_tis v2_s + w1 delta_jk v2_i + w2 delta_jk v3_i
///       + w3 L_ijks v3_s + w4 eps_jks D1_si
///       + w5 (eps_isj D1_ks + eps_isk D1_js) + w6 D_ijk
Tensor coupling_reconstruct(const CouplingDeviators& d,
                            CouplingVariant variant = CouplingVariant::Literal);

/// Weights w0..w6 of coupling_reconstruct.
using CouplingWeights = std::array<double, 7>;
const CouplingWeights& printed_coupling_weights();
/// Least-squares weights that reproduce random coupling tensors from the
/// fitted deviators; computed once and cached.
const CouplingWeights& fitted_coupling_weights();

/// One coefficient of a deviator component as a linear functional of H,
/// evaluated on the basis tensor e_a e_b e_c + e_b e_a e_c (a <= b).
struct CouplingCoefficientEntry {
  std::string field;      ///< e.g. "v2[2]", "D1[0,1]", "D3[0,1,2]"
  std::array<int, 3> basis;  ///< (a, b, c), 0-based
  double printed = 0.0;
  double fitted = 0.0;
};

struct CouplingCoefficientDiff {
  /// Entries where printed and fitted differ by more than `tolerance`.
  std::vector<CouplingCoefficientEntry> entries;
  CouplingWeights printed_weights{};
  CouplingWeights fitted_weights{};
  double tolerance = 0.0;
  /// max |coupling_reconstruct(decompose(h)) - h| / |h| over random inputs
  double literal_roundtrip = 0.0;
  double fitted_roundtrip = 0.0;
};

CouplingCoefficientDiff coupling_coefficient_diff(double tolerance = 1e-12);

// ---------------------------------------------------------------------------
// Stiffness tensor

/// Order-4 tensor with C_ijkl = C_jikl = C_ijlk = C_klij.
class StiffnessTensor {
 public:
  /// Throws std::invalid_argument if a symmetry fails by more than 1e-12 |t|.
  explicit StiffnessTensor(Tensor t);
  const Tensor& tensor() const noexcept { return t_; }

 private:
  Tensor t_;
};

struct StiffnessDeviators {
  double lambda = 0.0;
  double mu = 0.0;
  Tensor D1{2};
  Tensor D2{2};
  Tensor D4{4};
};

/// lambda = (2 C_iikk - C_ikik)/15, mu = (3 C_ikik - C_iikk)/30,
/// D1 = 5/7 A - 4/7 B, D2 = 3/7 B - 2/7 A with A, B the deviatoric parts of
/// C_kkij and C_kikj; D4 is whatever remains.
StiffnessDeviators stiffness_decompose(const StiffnessTensor& c);

/// lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk) + (d_ij D1_kl + d_kl D1_ij)
/// + (d_ik D2_jl + d_il D2_jk + d_jk D2_il + d_jl D2_ik) + D4_ijkl
Tensor stiffness_reconstruct(const StiffnessDeviators& d);

/// lambda d_ij d_kl + mu (d_ik d_jl + d_il d_jk)
Tensor isotropic_stiffness(double lambda, double mu);

// ---------------------------------------------------------------------------
// Voigt notation: 11->0, 22->1, 33->2, 23->3, 13->4, 12->5 (0-based), with
// C_ijkl = m_ab exactly. No shear factors of 2 or sqrt 2.

using VoigtMatrix = Eigen::Matrix<double, 6, 6>;

/// Voigt slot of the index pair (i, j).
int voigt_index(int i, int j);

/// Throws std::invalid_argument if m is not symmetric within 1e-12 max|m|.
StiffnessTensor voigt_to_tensor(const VoigtMatrix& m);
VoigtMatrix tensor_to_voigt(const StiffnessTensor& c);

}  // namespace devdec

#endif  // DEVDEC_PHYSICS_HPP
