#include "devdec/closedform.hpp"

#include <algorithm>
#include <array>
#include <numeric>
#include <random>
#include <stdexcept>

#include "devdec/harmonic.hpp"
#include "devdec/random.hpp"

namespace devdec {

namespace {

// Shared by l_apply and l_tensor: x carries the s-1 deviator indices first,
// followed by `extra` trailing indices that are passed through untouched.
Tensor l_construct(int s, const Tensor& x, int extra) {
  if (s < 2) throw std::invalid_argument("L requires s >= 2");
  const Tensor dx = outer(delta(), x);
  const int n = dx.order();

  std::vector<int> perm(n);
  for (int p = 0; p < s; ++p) perm[p] = p + 1;
  perm[s] = 0;
  for (int e = 1; e <= extra; ++e) perm[s + e] = s + e;

  std::vector<int> js(s);
  std::iota(js.begin(), js.end(), 1);
  const double a = (2.0 * s - 1.0) / (s - 1.0);
  return a * symmetrize(dx, js) - symmetrize(permute(dx, perm), js);
}

const Tensor& eps() {
  static const Tensor e = epsilon();
  return e;
}
const Tensor& del() {
  static const Tensor d = delta();
  return d;
}
const Tensor& L4() {
  static const Tensor l = l4();
  return l;
}
const Tensor& L6() {
  static const Tensor l = l_tensor(3);
  return l;
}

// ---- order 3, output ijk
Tensor o3_alpha(const Tensor& a) { return einsum("jki->ijk", eps()) * a[0]; }
Tensor o3_v1(const Tensor& v) { return einsum("jk,i->ijk", del(), v); }
Tensor o3_v2(const Tensor& v) { return einsum("jkt,tis,s->ijk", eps(), eps(), v); }
Tensor o3_v3(const Tensor& v) { return contract_single(L4(), v); }
Tensor o3_d1(const Tensor& d) { return einsum("jks,si->ijk", eps(), d); }
Tensor o3_d2(const Tensor& d) { return symmetrize(einsum("isj,ks->ijk", eps(), d), {1, 2}); }
Tensor o3_d3(const Tensor& d) { return d; }

constexpr std::array<ClosedFormTerm, 7> kOrder3{{
    {0, 1, "eps_jki a", o3_alpha},
    {1, 1, "delta_jk v_i", o3_v1},
    {1, 2, "eps_jkt eps_tis v_s", o3_v2},
    {1, 3, "L_ijks v_s", o3_v3},
    {2, 1, "eps_jks D_si", o3_d1},
    {2, 2, "sym_jk(eps_isj D_ks)", o3_d2},
    {3, 1, "D_ijk", o3_d3},
}};

// ---- order 4, output ijkl
Tensor o4_a1(const Tensor& a) { return einsum("ij,kl->ijkl", del(), del()) * a[0]; }
Tensor o4_a2(const Tensor& a) { return einsum("klt,tji->ijkl", eps(), eps()) * a[0]; }
Tensor o4_a3(const Tensor& a) { return einsum("jkli->ijkl", L4()) * a[0]; }

Tensor o4_v1(const Tensor& v) { return einsum("klj,i->ijkl", eps(), v); }
Tensor o4_v2(const Tensor& v) { return einsum("kl,jis,s->ijkl", del(), eps(), v); }
Tensor o4_v3(const Tensor& v) {
  return einsum("klt,tjs,siu,u->ijkl", eps(), eps(), eps(), v);
}
Tensor o4_v4(const Tensor& v) { return einsum("jkls,sit,t->ijkl", L4(), eps(), v); }
Tensor o4_v5(const Tensor& v) { return einsum("kls,isjt,t->ijkl", eps(), L4(), v); }
Tensor o4_v6(const Tensor& v) {
  return symmetrize(einsum("jsk,islt,t->ijkl", eps(), L4(), v), {2, 3});
}

// Y_isj = sym_sj(eps_its D_jt)
Tensor eps_d_sym(const Tensor& d) {
  return symmetrize(einsum("its,jt->isj", eps(), d), {1, 2});
}
Tensor o4_d1(const Tensor& d) { return einsum("kl,ji->ijkl", del(), d); }
Tensor o4_d2(const Tensor& d) { return einsum("klt,tjs,si->ijkl", eps(), eps(), d); }
Tensor o4_d3(const Tensor& d) { return einsum("jkls,si->ijkl", L4(), d); }
Tensor o4_d4(const Tensor& d) { return einsum("kls,isj->ijkl", eps(), eps_d_sym(d)); }
Tensor o4_d5(const Tensor& d) {
  return symmetrize(einsum("jsk,isl->ijkl", eps(), eps_d_sym(d)), {2, 3});
}
Tensor o4_d6(const Tensor& d) { return contract_double(L6(), d); }

Tensor o4_t1(const Tensor& d) { return einsum("kls,isj->ijkl", eps(), d); }
Tensor o4_t2(const Tensor& d) { return symmetrize(einsum("jsk,isl->ijkl", eps(), d), {2, 3}); }
Tensor o4_t3(const Tensor& d) {
  return symmetrize(einsum("isj,kls->ijkl", eps(), d), {1, 2, 3});
}
Tensor o4_q(const Tensor& d) { return d; }

constexpr std::array<ClosedFormTerm, 19> kOrder4{{
    {0, 1, "delta_ij delta_kl a", o4_a1},
    {0, 2, "eps_klt eps_tji a", o4_a2},
    {0, 3, "L_jkli a", o4_a3},
    {1, 1, "eps_klj v_i", o4_v1},
    {1, 2, "delta_kl eps_jis v_s", o4_v2},
    {1, 3, "eps_klt eps_tjs eps_siu v_u", o4_v3},
    {1, 4, "L_jkls eps_sit v_t", o4_v4},
    {1, 5, "eps_kls L_isjt v_t", o4_v5},
    {1, 6, "sym_kl(eps_jsk L_islt v_t)", o4_v6},
    {2, 1, "delta_kl D_ji", o4_d1},
    {2, 2, "eps_klt eps_tjs D_si", o4_d2},
    {2, 3, "L_jkls D_si", o4_d3},
    {2, 4, "eps_kls sym_sj(eps_its D_jt)", o4_d4},
    {2, 5, "sym_kl(eps_jsk sym_sl(eps_its D_lt))", o4_d5},
    {2, 6, "L_ijklst D_st", o4_d6},
    {3, 1, "eps_kls D_isj", o4_t1},
    {3, 2, "sym_kl(eps_jsk D_isl)", o4_t2},
    {3, 3, "sym_jkl(eps_isj D_kls)", o4_t3},
    {4, 1, "D_ijkl", o4_q},
}};

// Fitted once against the recursive engine; see tests/data.
constexpr std::array<double, 7> kCoefficients3{1, 1, -1, 1, 1, 1, 1};
constexpr std::array<double, 19> kCoefficients4{1, -1, 1,              // s = 0
                                                1, -1, 1, -1, 1, 1,     // s = 1
                                                1, -1, 1, 1, 1, 1,      // s = 2
                                                1, 1, 1,                // s = 3
                                                1};

Tensor assemble(const Decomposition& parts, int order) {
  if (parts.order != order)
    throw std::invalid_argument("closed form for order " + std::to_string(order) +
                                " given an order-" + std::to_string(parts.order) +
                                " decomposition");
  const auto terms = closed_form_terms(order);
  const auto coeff = structural_coefficients(order);
  if (parts.parts.size() != terms.size())
    throw std::invalid_argument("closed form: expected " + std::to_string(terms.size()) +
                                " parts, got " + std::to_string(parts.parts.size()));
  Tensor t(order);
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& p = parts.parts[i];
    if (p.s != terms[i].s || p.J != terms[i].J || p.deviator.order() != p.s)
      throw std::invalid_argument("closed form: part " + std::to_string(i) +
                                  " does not match label (s=" + std::to_string(terms[i].s) +
                                  ", J=" + std::to_string(terms[i].J) + ")");
    t += coeff[i] * terms[i].structure(p.deviator);
  }
  return t;
}

}  // namespace

Tensor l_apply(int s, const Tensor& d) {
  if (d.order() != s - 1) throw std::invalid_argument("l_apply: deviator must have order s-1");
  require_deviator(d, "l_apply input");
  return l_construct(s, d, 0);
}

Tensor l_tensor(int s) {
  if (s < 2) throw std::invalid_argument("l_tensor: requires s >= 2");
  // identity on order s-1: prod_a delta_{x_a l_a}, indices (x.., l..)
  Tensor id = Tensor::from_scalar(1.0);
  for (int a = 0; a < s - 1; ++a) id = outer(id, delta());
  std::vector<int> perm(2 * (s - 1));
  for (int a = 0; a < s - 1; ++a) {
    perm[2 * a] = a;
    perm[2 * a + 1] = s - 1 + a;
  }
  return l_construct(s, permute(id, perm), s - 1);
}

Tensor l4() { return l_tensor(2); }

std::span<const ClosedFormTerm> closed_form_terms(int order) {
  switch (order) {
    case 3: return kOrder3;
    case 4: return kOrder4;
    default:
      throw std::invalid_argument("closed forms exist for orders 3 and 4 only");
  }
}

std::span<const double> structural_coefficients(int order) {
  switch (order) {
    case 3: return kCoefficients3;
    case 4: return kCoefficients4;
    default:
      throw std::invalid_argument("closed forms exist for orders 3 and 4 only");
  }
}

std::vector<StructuralCoefficient> fit_structural_coefficients(int order, int samples,
                                                               std::uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("fit: need at least one sample");
  std::mt19937_64 gen(seed);
  std::vector<StructuralCoefficient> out;
  for (const auto& term : closed_form_terms(order)) {
    std::vector<Tensor> embedded, shaped;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < samples; ++k) {
      const Tensor d = project_deviator(random_tensor(term.s, gen));
      embedded.push_back(embed_part(order, term.s, term.J, d));
      shaped.push_back(term.structure(d));
      num += frobenius(embedded.back(), shaped.back());
      den += frobenius(shaped.back(), shaped.back());
    }
    StructuralCoefficient c{term.s, term.J, den > 0.0 ? num / den : 0.0, 0.0};
    for (int k = 0; k < samples; ++k) {
      const double scale = embedded[k].norm();
      const double r = (embedded[k] - c.value * shaped[k]).norm();
      c.residual = std::max(c.residual, scale > 0.0 ? r / scale : r);
    }
    out.push_back(c);
  }
  return out;
}

Tensor assemble_order3(const Decomposition& parts) { return assemble(parts, 3); }
Tensor assemble_order4(const Decomposition& parts) { return assemble(parts, 4); }

}  // namespace devdec
