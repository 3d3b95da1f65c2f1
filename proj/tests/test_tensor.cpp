#include "doctest.h"

#include <random>

#include "devdec/rotation.hpp"
#include "devdec/tensor.hpp"
#include "oracles.hpp"

using namespace devdec;

namespace {
constexpr double kTol = 1e-12;
const double kPi = std::acos(-1.0);
}  // namespace

TEST_CASE("storage layout is row-major") {
  Tensor t(3);
  t(1, 2, 0) = 5.0;
  CHECK(t[1 * 9 + 2 * 3 + 0] == 5.0);
  CHECK(t.size() == 27);
  CHECK(Tensor(0).size() == 1);
  CHECK(Tensor(1).size() == 3);
  CHECK_THROWS_AS(Tensor(2, Tensor::Storage::Zero(8)), std::invalid_argument);
  CHECK_THROWS_AS(Tensor(-1), std::invalid_argument);
  CHECK_THROWS_AS(t(0, 0), std::invalid_argument);
  CHECK_THROWS_AS(t(0, 0, 3), std::out_of_range);
}

TEST_CASE("slice picks the leading index") {
  std::mt19937_64 gen(1);
  const Tensor t = random_tensor(3, gen);
  const Tensor s = t.slice(2);
  for (const auto& idx : oracle::indices(2)) CHECK(s(idx[0], idx[1]) == t(2, idx[0], idx[1]));
}

TEST_CASE("outer product") {
  const Tensor T = random_tensor(2, 7);
  CHECK(outer(Tensor::from_scalar(1.0), T) == T);

  const Tensor e12 = outer(Tensor::unit(0), Tensor::unit(1));
  CHECK(e12(0, 1) == 1.0);
  CHECK(e12.norm() == 1.0);

  const Tensor v = Tensor::vector(1, 2, 3);
  const Tensor vv = outer(v, v);
  CHECK(vv(1, 2) == 6.0);
  CHECK(vv(2, 1) == 6.0);
  CHECK(vv(0, 0) == 1.0);

  std::mt19937_64 gen(2);
  const Tensor a = random_tensor(2, gen), b = random_tensor(3, gen);
  CHECK(oracle::rel(outer(a, b), oracle::outer(a, b)) < kTol);
}

TEST_CASE("complete contraction binds the first indices") {
  CHECK(contract_complete(delta(), delta())[0] == doctest::Approx(3.0));
  const Tensor A = random_tensor(3, 3);
  CHECK(oracle::rel(contract_complete(A, Tensor::from_scalar(2.5)), 2.5 * A) < kTol);

  const Tensor e3 = contract_complete(epsilon(), outer(Tensor::unit(0), Tensor::unit(1)));
  CHECK(e3 == Tensor::unit(2));

  std::mt19937_64 gen(4);
  const Tensor a = random_tensor(4, gen), b = random_tensor(2, gen);
  CHECK(oracle::rel(contract_complete(a, b), oracle::contract_first(a, b)) < kTol);
  CHECK_THROWS_AS(contract_complete(b, a), std::invalid_argument);
}

TEST_CASE("single and double contraction bind last-of-A to first-of-B") {
  std::mt19937_64 gen(5);
  const Tensor a = random_tensor(3, gen), b = random_tensor(2, gen);
  CHECK(oracle::rel(contract_single(a, b), einsum("ijk,kl->ijl", a, b)) < kTol);
  CHECK(oracle::rel(contract_double(a, b), einsum("ijk,jk->i", a, b)) < kTol);
  CHECK_THROWS_AS(contract_last_first(b, a, 3), std::invalid_argument);
}

TEST_CASE("frobenius") {
  CHECK(frobenius(delta(), delta()) == 3.0);
  CHECK(frobenius(epsilon(), epsilon()) == 6.0);
  const Tensor t = random_tensor(3, 9);
  CHECK(frobenius(t, Tensor(3)) == 0.0);
  CHECK_THROWS_AS(frobenius(t, delta()), std::invalid_argument);

  std::mt19937_64 gen(6);
  for (int n = 0; n <= 4; ++n) {
    const Tensor a = random_tensor(n, gen), b = random_tensor(n, gen);
    CHECK(std::abs(frobenius(a, b) - contract_complete(a, b)[0]) < kTol * a.norm() * b.norm());
  }
}

TEST_CASE("symmetrize") {
  Tensor t(2);
  t(0, 1) = 1.0;
  const Tensor s = symmetrize(t, {0, 1});
  CHECK(s(0, 1) == 0.5);
  CHECK(s(1, 0) == 0.5);

  Tensor u(3);
  u(0, 1, 2) = 6.0;
  const Tensor su = symmetrize(u);
  for (const auto& idx : oracle::indices(3)) {
    const bool distinct = idx[0] != idx[1] && idx[1] != idx[2] && idx[0] != idx[2];
    CHECK(su(idx[0], idx[1], idx[2]) == doctest::Approx(distinct ? 1.0 : 0.0));
  }
  CHECK(oracle::rel(symmetrize(su), su) < kTol);

  std::mt19937_64 gen(7);
  const Tensor a = random_tensor(4, gen), b = random_tensor(4, gen);
  for (const std::vector<int>& pos : {std::vector<int>{0, 2}, {1, 2, 3}, {0, 1, 2, 3}}) {
    const std::span<const int> p(pos);
    const Tensor sa = symmetrize(a, p);
    CHECK(oracle::rel(sa, oracle::symmetrize(a, pos)) < kTol);
    CHECK(oracle::rel(symmetrize(sa, p), sa) < kTol);
    CHECK(oracle::rel(symmetrize(2.0 * a - b, p), 2.0 * sa - symmetrize(b, p)) < kTol);
  }
  CHECK_THROWS_AS(symmetrize(a, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(symmetrize(a, {4}), std::invalid_argument);
}

TEST_CASE("trace_pair") {
  CHECK(trace_pair(delta(), 0, 1)[0] == 3.0);
  CHECK(trace_pair(epsilon(), 0, 1).norm() == 0.0);
  const Tensor v = Tensor::vector(1, 2, 3);
  CHECK(trace_pair(outer(v, v), 0, 1)[0] == 14.0);
  CHECK_THROWS_AS(trace_pair(delta(), 1, 1), std::invalid_argument);
  CHECK_THROWS_AS(trace_pair(v, 0, 1), std::invalid_argument);

  std::mt19937_64 gen(8);
  const Tensor t = random_tensor(4, gen);
  // trace over (0,1) commutes with symmetrizing the disjoint positions (2,3)
  CHECK(oracle::rel(trace_pair(symmetrize(t, {2, 3}), 0, 1),
                    symmetrize(trace_pair(t, 0, 1), {0, 1})) < kTol);

  const Tensor s = symmetrize(random_tensor(4, gen));
  const Tensor t01 = trace_pair(s, 0, 1);
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      if (p != q) CHECK(oracle::rel(trace_pair(s, p, q), t01) < kTol);
}

TEST_CASE("delta and epsilon") {
  const Tensor e = epsilon();
  CHECK(e(0, 1, 2) == 1.0);
  CHECK(e(1, 2, 0) == 1.0);
  CHECK(e(2, 0, 1) == 1.0);
  CHECK(e(0, 2, 1) == -1.0);
  CHECK(e(0, 0, 1) == 0.0);
  CHECK(delta()(1, 1) == 1.0);
  CHECK(delta()(0, 2) == 0.0);
}

TEST_CASE("permute") {
  std::mt19937_64 gen(9);
  const Tensor t = random_tensor(3, gen);
  const Tensor p = permute(t, {2, 0, 1});
  for (const auto& i : oracle::indices(3)) CHECK(p(i[0], i[1], i[2]) == t(i[2], i[0], i[1]));
  CHECK_THROWS_AS(permute(t, {0, 0, 1}), std::invalid_argument);
}

TEST_CASE("einsum agrees with direct loops") {
  std::mt19937_64 gen(10);
  const Tensor a = random_tensor(2, gen), b = random_tensor(2, gen);
  Tensor ab(2);
  for (int i = 0; i < 3; ++i)
    for (int k = 0; k < 3; ++k)
      for (int j = 0; j < 3; ++j) ab(i, k) += a(i, j) * b(j, k);
  CHECK(oracle::rel(einsum("ij,jk->ik", a, b), ab) < kTol);
  CHECK(einsum("ii->", a)[0] == doctest::Approx(a(0, 0) + a(1, 1) + a(2, 2)));
  CHECK_THROWS_AS(einsum("ij->ik", a), std::invalid_argument);
  CHECK_THROWS_AS(einsum("ijk->i", a), std::invalid_argument);
}

TEST_CASE("rotation validation") {
  Eigen::Matrix3d reflect = Eigen::Matrix3d::Identity();
  reflect(0, 0) = -1;
  CHECK_THROWS_AS(Rotation<double>{reflect}, std::invalid_argument);
  CHECK_THROWS_AS(Rotation<double>(2.0 * Eigen::Matrix3d::Identity()), std::invalid_argument);
  CHECK_NOTHROW(Rotation<double>(Eigen::Matrix3d::Identity()));
}

TEST_CASE("rotate") {
  std::mt19937_64 gen(11);
  const Tensor t = random_tensor(3, gen);
  CHECK(rotate(t, Rotation<double>::identity()) == t);

  const auto Rz = Rotation<double>::about_axis(Eigen::Vector3d::UnitZ(), kPi / 2);
  CHECK(oracle::rel(rotate(Tensor::unit(0), Rz), Tensor::unit(1)) < kTol);

  for (int k = 0; k < 5; ++k) {
    const auto R1 = oracle::random_rotation(gen), R2 = oracle::random_rotation(gen);
    CHECK(oracle::rel(rotate(delta(), R1), delta()) < kTol);
    CHECK(oracle::rel(rotate(epsilon(), R1), epsilon()) < kTol);
    CHECK(oracle::rel(rotate(t, R1), oracle::rotate(t, R1.matrix())) < kTol);
    CHECK(oracle::rel(rotate(rotate(t, R1), R2), rotate(t, R2 * R1)) < kTol);
    const Tensor u = random_tensor(3, gen);
    CHECK(oracle::rel(rotate(2.0 * t + u, R1), 2.0 * rotate(t, R1) + rotate(u, R1)) < kTol);
  }
}

TEST_CASE("scalar type is a template parameter") {
  const auto e = epsilon<float>();
  CHECK(e(0, 1, 2) == 1.0f);
  const DenseTensor<long double> d = delta<long double>();
  CHECK(contract_complete(d, d)[0] == 3.0L);
  CHECK(delta().cast<float>() == delta<float>());
}
