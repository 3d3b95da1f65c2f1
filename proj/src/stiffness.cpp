#include <stdexcept>

#include "devdec/physics.hpp"

namespace devdec {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr std::array<std::array<int, 2>, 6> kVoigtPairs{
    {{0, 0}, {1, 1}, {2, 2}, {1, 2}, {0, 2}, {0, 1}}};

}  // namespace

StiffnessTensor::StiffnessTensor(Tensor t) : t_(std::move(t)) {
  if (t_.order() != 4) throw std::invalid_argument("stiffness tensor must have order 4");
  const double bound = kSymmetryTolerance * t_.norm();
  const struct {
    std::array<int, 4> perm;
    const char* name;
  } checks[] = {{{1, 0, 2, 3}, "C_ijkl = C_jikl"},
                {{0, 1, 3, 2}, "C_ijkl = C_ijlk"},
                {{2, 3, 0, 1}, "C_ijkl = C_klij"}};
  for (const auto& c : checks) {
    const double r = (permute(t_, std::span<const int>(c.perm)) - t_).norm();
    if (r > bound)
      throw std::invalid_argument(std::string("stiffness tensor violates ") + c.name +
                                  " (residual " + std::to_string(r) + ")");
  }
}

Tensor isotropic_stiffness(double lambda, double mu) {
  const Tensor d = delta();
  return lambda * einsum("ij,kl->ijkl", d, d) +
         mu * (einsum("ik,jl->ijkl", d, d) + einsum("il,jk->ijkl", d, d));
}

StiffnessDeviators stiffness_decompose(const StiffnessTensor& stiffness) {
  const Tensor& c = stiffness.tensor();
  const Tensor d = delta();
  const Tensor c_kkij = trace_pair(c, 0, 1);  // C_kkij
  const Tensor c_kikj = trace_pair(c, 0, 2);  // C_kikj
  const double c_iikk = trace_pair(c_kkij, 0, 1)[0];
  const double c_ikik = trace_pair(c_kikj, 0, 1)[0];

  StiffnessDeviators out;
  out.lambda = (2.0 * c_iikk - c_ikik) / 15.0;
  out.mu = (3.0 * c_ikik - c_iikk) / 30.0;
  const Tensor a = c_kkij - (c_iikk / 3.0) * d;
  const Tensor b = c_kikj - (c_ikik / 3.0) * d;
  out.D1 = (5.0 / 7.0) * a - (4.0 / 7.0) * b;
  out.D2 = (3.0 / 7.0) * b - (2.0 / 7.0) * a;
  out.D4 = c - stiffness_reconstruct(out);
  return out;
}

Tensor stiffness_reconstruct(const StiffnessDeviators& s) {
  const Tensor d = delta();
  Tensor c = isotropic_stiffness(s.lambda, s.mu);
  c += einsum("ij,kl->ijkl", d, s.D1) + einsum("kl,ij->ijkl", d, s.D1);
  c += einsum("ik,jl->ijkl", d, s.D2) + einsum("il,jk->ijkl", d, s.D2) +
       einsum("jk,il->ijkl", d, s.D2) + einsum("jl,ik->ijkl", d, s.D2);
  c += s.D4;
  return c;
}

int voigt_index(int i, int j) {
  if (i < 0 || j < 0 || i >= kDim || j >= kDim)
    throw std::out_of_range("voigt_index: index out of range");
  return i == j ? i : 6 - i - j;
}

StiffnessTensor voigt_to_tensor(const VoigtMatrix& m) {
  const double scale = m.cwiseAbs().maxCoeff();
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance * scale)
    throw std::invalid_argument("Voigt matrix is not symmetric");
  Tensor c(4);
  for (int i = 0; i < kDim; ++i)
    for (int j = 0; j < kDim; ++j)
      for (int k = 0; k < kDim; ++k)
        for (int l = 0; l < kDim; ++l) c(i, j, k, l) = m(voigt_index(i, j), voigt_index(k, l));
  return StiffnessTensor(std::move(c));
}

VoigtMatrix tensor_to_voigt(const StiffnessTensor& stiffness) {
  const Tensor& c = stiffness.tensor();
  VoigtMatrix m;
  for (int a = 0; a < 6; ++a)
    for (int b = 0; b < 6; ++b)
      m(a, b) = c(kVoigtPairs[a][0], kVoigtPairs[a][1], kVoigtPairs[b][0], kVoigtPairs[b][1]);
  return m;
}

}  // namespace devdec
