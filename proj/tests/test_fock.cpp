#include "toroidal/fock.hpp"

#include <doctest.h>

using namespace toroidal;
using cd = std::complex<double>;

namespace {

OscillatorSpec half_modes() { return {1, [](int, int, int m) { return cd(m / 2.0); }}; }

OscillatorSpec asymmetric() {
  return {2, [](int i, int j, int m) {
            const cd base = cd(1.0 + i, 0.3 * j) / double(m);
            return i == j ? base : (i < j ? cd(0.2, 0.1) : cd(-0.4, 0.5)) * std::pow(cd(0.5), m);
          }};
}

double max_abs(const DenseMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("basis dimensions follow the convolution of partition counts") {
  const VermaSpec verma{0.7, 0.2};
  CHECK(tensor_level_basis(verma, half_modes(), 0).dimension() == 1);
  CHECK(tensor_level_basis(verma, half_modes(), 1).dimension() == 2);
  CHECK(tensor_level_basis(verma, half_modes(), 6).dimension() == 65);
  CHECK(LevelBasis(true, 2, 8).dimension() == 810);
  CHECK(LevelBasis(false, 2, 8).dimension() == 185);
  CHECK(LevelBasis(false, 1, 5).dimension() == 7);
  const LevelBasis b(true, 1, 3);
  for (int i = 0; i < b.dimension(); ++i) CHECK(b.index_of(b.state(i)) == i);
  CHECK(LevelBasis(true, 1, 3).states() == b.states());
}

TEST_CASE("single-mode Heisenberg actions") {
  const auto spec = half_modes();
  const LevelBasis l0(false, 1, 0), l1(false, 1, 1), l2(false, 1, 2);
  const DenseMatrix a1 = heisenberg_action(spec, 0, 1, l1, l0);
  CHECK(std::abs(a1(0, 0) - 0.5) < 1e-15);

  const DenseMatrix a2 = heisenberg_action(spec, 0, 2, l2, l0);
  const int single = l2.index_of({Partition(), {Partition({2})}});
  const int doubled = l2.index_of({Partition(), {Partition({1, 1})}});
  REQUIRE(single >= 0);
  REQUIRE(doubled >= 0);
  CHECK(std::abs(a2(0, doubled)) == 0.0);
  CHECK(std::abs(a2(0, single) - 1.0) < 1e-15);

  const DenseMatrix a1_on_2 = heisenberg_action(spec, 0, 1, l2, l1);
  CHECK(std::abs(a1_on_2(0, doubled) - 1.0) < 1e-15);
  CHECK(std::abs(a1_on_2(0, single)) == 0.0);

  CHECK_THROWS(heisenberg_action(spec, 0, 1, l2, l2));
}

TEST_CASE("Heisenberg commutators reproduce the pairing") {
  const auto spec = asymmetric();
  for (int n = 0; n <= 4; ++n)
    for (int m = 1; m <= 3; ++m)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
          const LevelBasis here(true, 2, n), up(true, 2, n + m);
          DenseMatrix comm = heisenberg_action(spec, i, m, up, here) * heisenberg_action(spec, j, -m, here, up);
          if (n >= m) {
            const LevelBasis down(true, 2, n - m);
            comm -= heisenberg_action(spec, j, -m, down, here) * heisenberg_action(spec, i, m, here, down);
          }
          const DenseMatrix expected = spec.pairing(i, j, m) * DenseMatrix::Identity(here.dimension(), here.dimension());
          CHECK(max_abs(comm - expected) < 1e-12);
        }
}

TEST_CASE("Virasoro actions on low levels") {
  const VermaSpec spec{cd(0.8, 0.1), cd(-0.3, 0.4)};
  const LevelBasis l0(true, 0, 0), l1(true, 0, 1), l2(true, 0, 2);
  CHECK(std::abs(virasoro_action(spec, 1, l1, l0)(0, 0) - 2.0 * spec.delta) < 1e-14);
  const int two = l2.index_of({Partition({2}), {}});
  REQUIRE(two >= 0);
  CHECK(std::abs(virasoro_action(spec, 2, l2, l0)(0, two) - (4.0 * spec.delta + spec.c / 2.0)) < 1e-14);
  for (int n = 0; n <= 4; ++n) {
    const LevelBasis b(true, 0, n);
    const DenseMatrix l0n = virasoro_action(spec, 0, b, b);
    CHECK(max_abs(l0n - (spec.delta + double(n)) * DenseMatrix::Identity(b.dimension(), b.dimension())) < 1e-13);
  }
  CHECK_THROWS(virasoro_action(spec, 1, l1, l1));
}

TEST_CASE("Virasoro commutation relations") {
  const VermaSpec spec{cd(-2.1, 0.3), cd(0.45, -0.2)};
  for (int level = 0; level <= 5; ++level)
    for (int m = -3; m <= 3; ++m)
      for (int n = -3; n <= 3; ++n) {
        const int mid_mn = level - n, mid_nm = level - m, end = level - m - n;
        if (mid_mn < 0 || mid_nm < 0 || end < 0) continue;
        const LevelBasis src(true, 0, level), a(true, 0, mid_mn), b(true, 0, mid_nm), dst(true, 0, end);
        DenseMatrix lhs = virasoro_action(spec, m, a, dst) * virasoro_action(spec, n, src, a) -
                          virasoro_action(spec, n, b, dst) * virasoro_action(spec, m, src, b);
        DenseMatrix rhs = double(m - n) * virasoro_action(spec, m + n, src, dst);
        if (m + n == 0) rhs += spec.c / 12.0 * double(m * (m * m - 1)) * DenseMatrix::Identity(src.dimension(), src.dimension());
        CHECK(max_abs(lhs - rhs) < 1e-10);
      }
}
