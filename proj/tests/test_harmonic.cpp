#include "doctest.h"

#include <random>

#include "devdec/harmonic.hpp"
#include "devdec/rotation.hpp"
#include "oracles.hpp"

using namespace devdec;

TEST_CASE("basis dimensions and element properties") {
  for (int s = 0; s <= 8; ++s) {
    CAPTURE(s);
    const auto& b = deviator_basis(s);
    REQUIRE(b.dimension() == 2 * s + 1);
    const Eigen::MatrixXd gram = b.matrix().transpose() * b.matrix();
    CHECK((gram - Eigen::MatrixXd::Identity(2 * s + 1, 2 * s + 1)).cwiseAbs().maxCoeff() <
          1e-10);
    for (const auto& e : b.elements()) {
      CHECK(symmetry_residual(e) <= 1e-12);
      CHECK(trace_residual(e) <= 1e-12);
    }
  }
  CHECK(deviator_basis(0).element(0)[0] == doctest::Approx(1.0));
}

TEST_CASE("deviator space dimension by rank") {
  // rank of symmetrize minus rank of the trace map on the symmetric subspace
  for (int s = 0; s <= 6; ++s) {
    CAPTURE(s);
    const Eigen::Index n = component_count(s);
    Eigen::MatrixXd sym(n, n);
    for (Eigen::Index c = 0; c < n; ++c) {
      Tensor e(s);
      e[c] = 1.0;
      sym.col(c) = symmetrize(e).components();
    }
    const auto sym_rank = oracle::rank(sym);
    CHECK(sym_rank == (s + 1) * (s + 2) / 2);
    if (s >= 2) {
      Eigen::MatrixXd tr(component_count(s - 2), n);
      for (Eigen::Index c = 0; c < n; ++c) tr.col(c) = trace_pair(Tensor(s, sym.col(c)), 0, 1).components();
      CHECK(sym_rank - oracle::rank(tr) == 2 * s + 1);
    }
  }
}

TEST_CASE("construction is deterministic") {
  for (int s : {2, 5}) CHECK(build_basis(s).matrix() == build_basis(s).matrix());
  CHECK(&deviator_basis(3) == &deviator_basis(3));
}

TEST_CASE("project_deviator") {
  CHECK(project_deviator(delta()).norm() < 1e-14);

  const Tensor e11 = outer(Tensor::unit(0), Tensor::unit(0));
  CHECK(oracle::rel(project_deviator(e11), e11 - delta() / 3.0) < 1e-12);

  std::mt19937_64 gen(3);
  for (int s = 0; s <= 5; ++s) {
    const Tensor a = random_tensor(s, gen), b = random_tensor(s, gen);
    const Tensor pa = project_deviator(a);
    CHECK(oracle::rel(project_deviator(pa), pa) < 1e-12);
    CHECK(std::abs(frobenius(pa, b) - frobenius(a, project_deviator(b))) < 1e-12);
    CHECK(is_deviator(pa));
  }
}

TEST_CASE("coordinates") {
  std::mt19937_64 gen(4);
  for (int s = 0; s <= 5; ++s) {
    const auto& b = deviator_basis(s);
    CHECK(coords(Tensor(s)).values.norm() == 0.0);
    for (int k = 0; k < b.dimension(); ++k) {
      const Eigen::VectorXd c = coords(b.element(k)).values;
      CHECK((c - Eigen::VectorXd::Unit(b.dimension(), k)).norm() < 1e-12);
    }
    const Tensor d = project_deviator(random_tensor(s, gen));
    CHECK(oracle::rel(from_coords(coords(d)), d) < 1e-12);
  }
  CHECK_THROWS_AS(coords(delta()), std::invalid_argument);
  CHECK_THROWS_AS(from_coords(DeviatorCoords{2, Eigen::VectorXd::Zero(3)}), std::invalid_argument);
  CHECK_THROWS_AS(require_deviator(random_tensor(3, 1), "x"), std::invalid_argument);
}

TEST_CASE("deviator spaces are rotation invariant") {
  std::mt19937_64 gen(5);
  for (int s = 1; s <= 5; ++s) {
    const auto R = oracle::random_rotation(gen);
    const Tensor d = project_deviator(random_tensor(s, gen));
    const Tensor rd = rotate(d, R);
    CHECK(oracle::rel(project_deviator(rd), rd) < 1e-10);
    const Tensor t = random_tensor(s, gen);
    CHECK(oracle::rel(project_deviator(rotate(t, R)), rotate(project_deviator(t), R)) < 1e-10);
  }
}
