#include <Eigen/QR>

#include <random>
#include <stdexcept>

#include "devdec/closedform.hpp"
#include "devdec/decompose.hpp"
#include "devdec/physics.hpp"
#include "devdec/random.hpp"

namespace devdec {

namespace {

constexpr double kSymmetryTolerance = 1e-12;

Tensor swap_first_two(const Tensor& t) { return permute(t, {1, 0, 2}); }

// Writes value at every permutation of the index tuple.
template <std::size_t N>
void set_symmetric(Tensor& t, std::array<int, N> idx, double value) {
  std::sort(idx.begin(), idx.end());
  do t(std::span<const int>(idx)) = value;
  while (std::next_permutation(idx.begin(), idx.end()));
}

CouplingDeviators literal_decompose(const Tensor& t) {
  // 1-based access as in the published component formulas
  auto H = [&](int a, int b, int c) { return t(a - 1, b - 1, c - 1); };
  CouplingDeviators d;

  d.v2 = Tensor::vector(H(2, 2, 1) - H(1, 2, 2) + H(3, 3, 1) - H(1, 3, 3),
                        H(1, 1, 2) - H(1, 2, 1) + H(3, 3, 2) - H(2, 3, 3),
                        H(1, 3, 3) - H(1, 3, 1) + H(2, 2, 3) - H(2, 3, 2)) /
         4.0;
  d.v3 = Tensor::vector(
             4 * H(1, 1, 1) + H(1, 2, 2) + H(1, 3, 3) + 3 * H(2, 2, 1) + 3 * H(3, 3, 1),
             4 * H(2, 2, 2) + H(1, 2, 1) + H(2, 3, 3) + 3 * H(1, 1, 2) + 3 * H(3, 3, 2),
             4 * H(3, 3, 3) + H(1, 3, 1) + H(2, 3, 2) + 3 * H(1, 1, 3) + 3 * H(2, 2, 3)) /
         30.0;

  Tensor& D1 = d.D1;
  D1(0, 0) = (H(1, 2, 3) - H(1, 3, 2)) / 2;
  D1(1, 1) = (H(2, 3, 1) - H(1, 2, 3)) / 2;
  D1(2, 2) = (H(1, 3, 2) - H(2, 3, 1)) / 2;
  D1(0, 1) = D1(1, 0) = (-H(1, 1, 3) + H(1, 3, 1) + H(2, 2, 3) - H(2, 3, 2)) / 4;
  D1(0, 2) = D1(2, 0) = (H(1, 1, 2) - H(1, 2, 1) + H(2, 3, 3) - H(3, 3, 2)) / 4;
  D1(1, 2) = D1(2, 1) = (H(1, 2, 2) - H(2, 2, 1) - H(1, 3, 3) + H(3, 3, 1)) / 4;

  Tensor& D = d.D3;
  auto set = [&](int a, int b, int c, double v) {
    set_symmetric<3>(D, {a - 1, b - 1, c - 1}, v);
  };
  set(1, 1, 1, 2. / 5 * H(1, 1, 1) - 2. / 5 * H(1, 2, 2) - 2. / 5 * H(1, 3, 3) -
                   1. / 5 * H(2, 2, 1) - 1. / 5 * H(3, 3, 1));
  set(2, 2, 2, 2. / 5 * H(2, 2, 2) - 2. / 5 * H(2, 1, 1) - 2. / 5 * H(2, 3, 3) -
                   1. / 5 * H(1, 1, 2) - 1. / 5 * H(3, 3, 2));
  set(3, 3, 3, 2. / 5 * H(3, 3, 3) - 2. / 5 * H(3, 2, 2) - 2. / 5 * H(3, 1, 1) -
                   1. / 5 * H(1, 1, 3) - 1. / 5 * H(2, 2, 3));
  set(1, 2, 2, 8. / 15 * H(1, 2, 2) - 1. / 5 * H(1, 1, 1) - 2. / 15 * H(1, 3, 3) +
                   4. / 15 * H(2, 2, 1) - 1. / 15 * H(3, 3, 1));
  set(1, 3, 3, 8. / 15 * H(1, 3, 3) - 1. / 5 * H(1, 1, 1) - 1. / 15 * H(2, 2, 1) +
                   4. / 15 * H(3, 3, 1) - 2. / 15 * H(2, 1, 2));
  set(2, 1, 1, 8. / 15 * H(2, 1, 1) - 1. / 5 * H(2, 2, 2) - 2. / 15 * H(2, 3, 3) +
                   4. / 15 * H(1, 1, 2) - 1. / 15 * H(3, 3, 2));
  set(2, 3, 3, 8. / 15 * H(2, 3, 3) - 2. / 15 * H(2, 1, 1) - 1. / 5 * H(2, 2, 2) -
                   1. / 15 * H(1, 1, 2) + 4. / 15 * H(3, 3, 2));
  set(3, 1, 1, 8. / 15 * H(3, 1, 1) - 2. / 15 * H(3, 2, 2) - 1. / 5 * H(3, 3, 3) +
                   4. / 15 * H(1, 1, 3) - 1. / 15 * H(2, 2, 3));
  set(3, 2, 2, 8. / 15 * H(3, 2, 2) - 2. / 15 * H(3, 1, 1) - 1. / 5 * H(3, 3, 3) -
                   1. / 15 * H(1, 1, 3) + 4. / 15 * H(2, 2, 3));
  set(1, 2, 3, (H(1, 2, 3) + H(1, 3, 2) + H(2, 3, 1)) / 3);

  return with_dependent_fields(std::move(d));
}

// Engine parts of an order-3 tensor, scaled onto the closed-form structures:
// part (1,2) is v2, (1,3) is v3, (2,1) is D1, (3,1) is D3.
CouplingDeviators fitted_decompose(const Tensor& t) {
  const Decomposition dec = decompose(t);
  const auto c = structural_coefficients(3);
  auto part = [&](int s, int J) -> const IrreduciblePart& {
    for (const auto& p : dec.parts)
      if (p.s == s && p.J == J) return p;
    throw std::logic_error("order-3 decomposition lacks a part");
  };
  const auto terms = closed_form_terms(3);
  auto coefficient = [&](int s, int J) {
    for (std::size_t i = 0; i < terms.size(); ++i)
      if (terms[i].s == s && terms[i].J == J) return c[i];
    throw std::logic_error("missing closed-form term");
  };
  CouplingDeviators d;
  d.v2 = coefficient(1, 2) * part(1, 2).deviator;
  d.v3 = coefficient(1, 3) * part(1, 3).deviator;
  d.D1 = coefficient(2, 1) * part(2, 1).deviator;
  d.D3 = coefficient(3, 1) * part(3, 1).deviator;
  return with_dependent_fields(std::move(d));
}

std::array<Tensor, 7> assembly_terms(const CouplingDeviators& d) {
  const Tensor e = epsilon();
  const Tensor del = delta();
  const Tensor twice_sym = 2.0 * symmetrize(einsum("isj,ks->ijk", e, d.D1), {1, 2});
  return {einsum("jkt,tis,s->ijk", e, e, d.v2),
          einsum("jk,i->ijk", del, d.v2),
          einsum("jk,i->ijk", del, d.v3),
          contract_single(l4(), d.v3),
          einsum("jks,si->ijk", e, d.D1),
          twice_sym,
          d.D3};
}

Tensor random_coupling(std::mt19937_64& gen) {
  return symmetrize(random_tensor(3, gen), {0, 1});
}

CouplingWeights fit_weights() {
  constexpr int kSamples = 8;
  std::mt19937_64 gen(0x5eed);
  Eigen::MatrixXd a(27 * kSamples, 7);
  Eigen::VectorXd b(27 * kSamples);
  for (int n = 0; n < kSamples; ++n) {
    const Tensor h = random_coupling(gen);
    const auto terms = assembly_terms(fitted_decompose(h));
    for (int m = 0; m < 7; ++m) a.block(27 * n, m, 27, 1) = terms[m].components();
    b.segment(27 * n, 27) = h.components();
  }
  const Eigen::VectorXd w = a.colPivHouseholderQr().solve(b);
  CouplingWeights out;
  for (int m = 0; m < 7; ++m) out[m] = w[m];
  return out;
}

double roundtrip_residual(CouplingVariant variant, int samples) {
  std::mt19937_64 gen(0xc0ff);
  double worst = 0.0;
  for (int n = 0; n < samples; ++n) {
    const CouplingTensor h(random_coupling(gen));
    const Tensor back = coupling_reconstruct(coupling_decompose(h, variant), variant);
    worst = std::max(worst, (back - h.tensor()).norm() / h.tensor().norm());
  }
  return worst;
}

}  // namespace

CouplingTensor::CouplingTensor(Tensor t) : t_(std::move(t)) {
  if (t_.order() != 3) throw std::invalid_argument("coupling tensor must have order 3");
  const double r = (t_ - swap_first_two(t_)).norm();
  if (r > kSymmetryTolerance * t_.norm())
    throw std::invalid_argument("coupling tensor violates H_ijk = H_jik (residual " +
                                std::to_string(r) + ")");
}

CouplingDeviators with_dependent_fields(CouplingDeviators d) {
  d.alpha = 0.0;
  d.v1 = 2.5 * d.v3 - d.v2;
  d.D2 = (-2.0 / 3.0) * d.D1;
  return d;
}

CouplingDeviators coupling_decompose(const CouplingTensor& h, CouplingVariant variant) {
  return variant == CouplingVariant::Literal ? literal_decompose(h.tensor())
                                             : fitted_decompose(h.tensor());
}

const CouplingWeights& printed_coupling_weights() {
  static const CouplingWeights w{1.0, -1.0, 2.5, 1.0, 1.0, -1.0 / 3.0, 1.0};
  return w;
}

const CouplingWeights& fitted_coupling_weights() {
  static const CouplingWeights w = fit_weights();
  return w;
}

Tensor coupling_reconstruct(const CouplingDeviators& d, CouplingVariant variant) {
  const auto& w = variant == CouplingVariant::Literal ? printed_coupling_weights()
                                                      : fitted_coupling_weights();
  const auto terms = assembly_terms(d);
  Tensor h(3);
  for (int m = 0; m < 7; ++m) h += w[m] * terms[m];
  return h;
}

CouplingCoefficientDiff coupling_coefficient_diff(double tolerance) {
  CouplingCoefficientDiff diff;
  diff.tolerance = tolerance;
  diff.printed_weights = printed_coupling_weights();
  diff.fitted_weights = fitted_coupling_weights();

  struct Field {
    std::string name;
    const Tensor CouplingDeviators::*member;
    std::vector<int> index;
  };
  std::vector<Field> fields;
  auto label = [](const char* base, const std::vector<int>& idx) {
    std::string s = std::string(base) + "[";
    for (std::size_t k = 0; k < idx.size(); ++k) s += (k ? "," : "") + std::to_string(idx[k]);
    return s + "]";
  };
  for (int a = 0; a < 3; ++a) {
    fields.push_back({label("v2", {a}), &CouplingDeviators::v2, {a}});
  }
  for (int a = 0; a < 3; ++a) fields.push_back({label("v3", {a}), &CouplingDeviators::v3, {a}});
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      fields.push_back({label("D1", {a, b}), &CouplingDeviators::D1, {a, b}});
  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      for (int c = b; c < 3; ++c)
        fields.push_back({label("D3", {a, b, c}), &CouplingDeviators::D3, {a, b, c}});

  for (int a = 0; a < 3; ++a)
    for (int b = a; b < 3; ++b)
      for (int c = 0; c < 3; ++c) {
        Tensor basis(3);
        basis(a, b, c) += 1.0;
        basis(b, a, c) += 1.0;
        const CouplingTensor h(basis);
        const auto lit = coupling_decompose(h, CouplingVariant::Literal);
        const auto fit = coupling_decompose(h, CouplingVariant::Fitted);
        for (const auto& f : fields) {
          const double p = (lit.*f.member)(std::span<const int>(f.index));
          const double q = (fit.*f.member)(std::span<const int>(f.index));
          if (std::abs(p - q) > tolerance) diff.entries.push_back({f.name, {a, b, c}, p, q});
        }
      }

  diff.literal_roundtrip = roundtrip_residual(CouplingVariant::Literal, 20);
  diff.fitted_roundtrip = roundtrip_residual(CouplingVariant::Fitted, 20);
  return diff;
}

}  // namespace devdec
