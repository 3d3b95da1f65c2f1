#include "doctest.h"

#include <random>

#include "devdec/closedform.hpp"
#include "devdec/harmonic.hpp"
#include "devdec/io.hpp"
#include "oracles.hpp"

using namespace devdec;

namespace {

Decomposition random_parts(int order, std::mt19937_64& gen) {
  Decomposition d{order, {}};
  for (const auto& l : part_labels(order)) {
    const Tensor dev = project_deviator(random_tensor(l.s, gen));
    d.parts.push_back({l.s, l.J, dev, embed_part(order, l.s, l.J, dev)});
  }
  return d;
}

}  // namespace

TEST_CASE("L4 closed form") {
  const Tensor L = l4();
  for (const auto& x : oracle::indices(4)) {
    const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
    const double expect =
        1.5 * (d(x[0], x[1]) * d(x[2], x[3]) + d(x[0], x[2]) * d(x[1], x[3])) -
        d(x[0], x[3]) * d(x[1], x[2]);
    CHECK(L(x[0], x[1], x[2], x[3]) == expect);
  }
  CHECK(L(0, 0, 0, 0) == 2.0);
}

TEST_CASE("l_apply by hand for s = 2, d = e3") {
  const Tensor r = l_apply(2, Tensor::unit(2));
  const auto d = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  for (const auto& x : oracle::indices(3)) {
    const int k = x[0], j1 = x[1], j2 = x[2];
    const double expect = 1.5 * (d(k, j1) * d(j2, 2) + d(k, j2) * d(j1, 2)) - d(j1, j2) * d(k, 2);
    CHECK(r(k, j1, j2) == doctest::Approx(expect).epsilon(1e-15));
  }
  CHECK(l_apply(2, Tensor(1)).norm() == 0.0);
  CHECK_THROWS_AS(l_apply(3, random_tensor(2, 1)), std::invalid_argument);
  CHECK_THROWS_AS(l_apply(1, Tensor(0)), std::invalid_argument);
}

TEST_CASE("l_tensor contracts to l_apply and l_apply feeds assemble_G") {
  std::mt19937_64 gen(2);
  for (int s = 2; s <= 5; ++s) {
    CAPTURE(s);
    const Tensor d = project_deviator(random_tensor(s - 1, gen));
    const Tensor applied = l_apply(s, d);
    CHECK(oracle::rel(contract_last_first(l_tensor(s), d, s - 1), applied) < 1e-12);
    CHECK(oracle::rel(assemble_G(d, Tensor(s), Tensor(s + 1)), applied) < 1e-12);
    const Tensor d2 = project_deviator(random_tensor(s - 1, gen));
    CHECK(oracle::rel(l_apply(s, d - 3.0 * d2), applied - 3.0 * l_apply(s, d2)) < 1e-12);
  }
}

TEST_CASE("term tables follow the part labels") {
  for (int order : {3, 4}) {
    const auto terms = closed_form_terms(order);
    const auto& labels = part_labels(order);
    REQUIRE(terms.size() == labels.size());
    for (std::size_t i = 0; i < terms.size(); ++i) {
      CHECK(terms[i].s == labels[i].s);
      CHECK(terms[i].J == labels[i].J);
    }
  }
  CHECK_THROWS_AS(closed_form_terms(5), std::invalid_argument);
}

TEST_CASE("fitted coefficients match the frozen table and the golden file") {
  const Json golden = parse_json(read_text_file(DEVDEC_TEST_DATA_DIR "/closedform_coefficients.json"),
                                 "closedform_coefficients.json");
  for (int order : {3, 4}) {
    CAPTURE(order);
    const auto fit = fit_structural_coefficients(order);
    const auto frozen = structural_coefficients(order);
    const Json& g = golden[order == 3 ? "order3" : "order4"];
    REQUIRE(fit.size() == frozen.size());
    REQUIRE(g.size() == frozen.size());
    for (std::size_t i = 0; i < fit.size(); ++i) {
      CAPTURE(i);
      CHECK(fit[i].residual < 1e-12);
      CHECK(std::abs(fit[i].value - frozen[i]) < 1e-12);
      CHECK(g[i]["s"].get<int>() == fit[i].s);
      CHECK(g[i]["J"].get<int>() == fit[i].J);
      CHECK(std::abs(g[i]["coefficient"].get<double>() - fit[i].value) < 1e-12);
    }
  }
}

TEST_CASE("closed-form assemblies reproduce the engine") {
  std::mt19937_64 gen(3);
  for (int order : {3, 4}) {
    const auto assemble = order == 3 ? assemble_order3 : assemble_order4;
    for (int k = 0; k < 10; ++k) {
      const Tensor t = random_tensor(order, gen);
      CHECK((assemble(decompose(t)) - t).norm() <= 1e-10 * t.norm());
    }
    const Decomposition parts = random_parts(order, gen);
    CHECK(oracle::rel(assemble(parts), reconstruct(parts)) < 1e-10);
  }
}

TEST_CASE("closed-form assemblies: trivial inputs and bad part sets") {
  std::mt19937_64 gen(4);
  Decomposition zero = random_parts(3, gen);
  for (auto& p : zero.parts) p.deviator = Tensor(p.s);
  CHECK(assemble_order3(zero).norm() == 0.0);

  const Tensor top = project_deviator(random_tensor(3, gen));
  zero.parts.back().deviator = top;
  CHECK(oracle::rel(assemble_order3(zero), top) < 1e-15);

  Decomposition short_set = random_parts(4, gen);
  short_set.parts.pop_back();
  CHECK_THROWS_AS(assemble_order4(short_set), std::invalid_argument);
  CHECK_THROWS_AS(assemble_order3(random_parts(4, gen)), std::invalid_argument);

  Decomposition swapped = random_parts(3, gen);
  std::swap(swapped.parts[1].J, swapped.parts[2].J);
  CHECK_THROWS_AS(assemble_order3(swapped), std::invalid_argument);
}
