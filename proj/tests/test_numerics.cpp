#include "toroidal/numerics.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace toroidal;
using cd = std::complex<double>;

namespace {

DenseMatrix random_matrix(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  DenseMatrix m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = cd(g(rng), g(rng));
  return m;
}

// Characteristic polynomial coefficients (monic, highest first) by Faddeev-LeVerrier.
std::vector<cd> characteristic_polynomial(const DenseMatrix& a) {
  const int n = static_cast<int>(a.rows());
  std::vector<cd> c(n + 1);
  c[0] = 1.0;
  DenseMatrix m = DenseMatrix::Zero(n, n);
  const DenseMatrix id = DenseMatrix::Identity(n, n);
  for (int k = 1; k <= n; ++k) {
    m = a * m + c[k - 1] * id;
    c[k] = -(a * m).trace() / double(k);
  }
  return c;
}

// Durand-Kerner iteration on a monic polynomial.
std::vector<cd> polynomial_roots(const std::vector<cd>& c) {
  const int n = static_cast<int>(c.size()) - 1;
  std::vector<cd> z(n);
  for (int i = 0; i < n; ++i) z[i] = std::pow(cd(0.4, 0.9), i) * 2.0;
  auto eval = [&](cd x) {
    cd v = 0.0;
    for (const auto& coeff : c) v = v * x + coeff;
    return v;
  };
  for (int iter = 0; iter < 2000; ++iter) {
    for (int i = 0; i < n; ++i) {
      cd den = 1.0;
      for (int j = 0; j < n; ++j)
        if (j != i) den *= z[i] - z[j];
      z[i] -= eval(z[i]) / den;
    }
  }
  return z;
}

NewtonProblem scalar(std::function<cd(cd)> f) {
  NewtonProblem p;
  p.dimension = 1;
  p.residual = [f](const ComplexVector& x) {
    ComplexVector r(1);
    r(0) = f(x(0));
    return r;
  };
  return p;
}

ComplexVector vec(std::initializer_list<cd> values) {
  ComplexVector v(static_cast<int>(values.size()));
  int i = 0;
  for (auto x : values) v(i++) = x;
  return v;
}

}  // namespace

TEST_CASE("eigenvalues of small fixed matrices") {
  auto id = eigenvalues(DenseMatrix::Identity(3, 3));
  REQUIRE(id.size() == 3);
  for (auto e : id) CHECK(std::abs(e - 1.0) < 1e-14);

  DenseMatrix d = DenseMatrix::Zero(3, 3);
  d(0, 0) = 2.0;
  d(1, 1) = -1.0;
  d(2, 2) = cd(0, 0.5);
  const auto cmp = compare_multisets(eigenvalues(d), {2.0, -1.0, cd(0, 0.5)});
  CHECK(cmp.match);
}

TEST_CASE("eigenvalues match characteristic polynomial roots") {
  std::mt19937 rng(11);
  for (int trial = 0; trial < 3; ++trial) {
    const DenseMatrix m = random_matrix(rng, 6);
    const auto roots = polynomial_roots(characteristic_polynomial(m));
    const auto cmp = compare_multisets(eigenvalues(m), roots, {1e-9, 1e-9});
    CHECK(cmp.same_size);
    CHECK_MESSAGE(cmp.match, cmp.max_deviation);
  }
}

TEST_CASE("spectral invariants") {
  std::mt19937 rng(3);
  for (int n : {4, 8, 12}) {
    const DenseMatrix m = random_matrix(rng, n);
    const DenseMatrix s = random_matrix(rng, n) + 4.0 * DenseMatrix::Identity(n, n);
    const DenseMatrix similar = s * m * s.inverse();
    CHECK(compare_multisets(eigenvalues(m), eigenvalues(similar), {1e-8, 1e-8}).match);
    cd sum = 0.0;
    for (auto e : eigenvalues(m)) sum += e;
    CHECK(std::abs(sum - m.trace()) <= 1e-9 * std::max(1.0, std::abs(m.trace())));
  }
}

TEST_CASE("multiset comparison is order independent") {
  CHECK(compare_multisets({cd(1, 2), cd(-1, 0)}, {cd(-1, 0), cd(1, 2)}).match);
  CHECK_FALSE(compare_multisets({1.0}, {1.0, 2.0}).same_size);
  CHECK_FALSE(compare_multisets({1.0}, {1.001}).match);
}

TEST_CASE("scalar Newton") {
  auto r = newton_solve(scalar([](cd x) { return x * x - 4.0; }), vec({3.0}));
  CHECK(r.converged);
  CHECK(std::abs(r.x(0) - 2.0) < 1e-10);
  auto i = newton_solve(scalar([](cd x) { return x * x + 1.0; }), vec({cd(0.3, 1.0)}));
  CHECK(i.converged);
  CHECK(std::abs(i.x(0) - cd(0, 1)) < 1e-10);
}

TEST_CASE("Newton converges quadratically on a 2x2 system") {
  // x^2 + y^2 - 5 = 0, x y - 2 = 0 has the simple root (1, 2)
  NewtonProblem p;
  p.dimension = 2;
  p.residual = [](const ComplexVector& x) { return vec({x(0) * x(0) + x(1) * x(1) - 5.0, x(0) * x(1) - 2.0}); };
  const auto r = newton_solve(p, vec({1.2, 1.7}), {1e-14, 50});
  REQUIRE(r.converged);
  CHECK(std::abs(r.x(0) - 1.0) < 1e-12);
  CHECK(std::abs(r.x(1) - 2.0) < 1e-12);
  // residuals r_{k+1} <= C r_k^2 once in the basin
  const auto& h = r.history;
  REQUIRE(h.size() >= 3);
  bool quadratic = false;
  for (std::size_t k = 0; k + 1 < h.size(); ++k)
    if (h[k] < 1e-2 && h[k] > 1e-7 && h[k + 1] < 10.0 * h[k] * h[k]) quadratic = true;
  CHECK(quadratic);
  // determinism
  const auto again = newton_solve(p, vec({1.2, 1.7}), {1e-14, 50});
  CHECK(again.history == r.history);
}

TEST_CASE("singular Jacobian and budget failures") {
  auto flat = scalar([](cd) { return cd(1.0); });
  CHECK_FALSE(newton_solve(flat, vec({0.0})).converged);
  auto slow = scalar([](cd x) { return std::exp(x) - 1e6; });
  CHECK_FALSE(newton_solve(slow, vec({-30.0}), {1e-10, 3}).converged);
}

TEST_CASE("deflation") {
  auto base = scalar([](cd x) { return x * x - 1.0; });
  const auto same = deflate(base, {});
  const auto x0 = vec({cd(0.4, 0.2)});
  CHECK((same.deflated_residual(x0) - base.deflated_residual(x0)).norm() == 0.0);

  const auto deflated = deflate(base, {vec({1.0})});
  const auto at_root = newton_solve(deflated, vec({1.0 + 1e-6}));
  CHECK((!at_root.converged || std::abs(at_root.x(0) - 1.0) > 1e-3));
  int reached_minus_one = 0;
  for (double re : {0.2, 0.5, 0.9, 1.3, 2.0, 3.5})
    for (double im : {-0.7, 0.0, 0.4}) {
      const auto r = newton_solve(deflated, vec({cd(re, im)}));
      if (!r.converged) continue;
      CHECK(std::abs(r.x(0) - 1.0) > 1e-3);
      if (std::abs(r.x(0) + 1.0) < 1e-8) ++reached_minus_one;
    }
  CHECK(reached_minus_one > 0);
}

TEST_CASE("affine fit") {
  const std::vector<cd> a = {cd(0.1, 0.3), cd(-1.2, 0.5), cd(2.0, -0.4), cd(0.7, 0.7)};
  std::vector<cd> b;
  for (auto x : a) b.push_back(2.0 * x + 3.0);
  auto fit = affine_fit(a, b);
  CHECK(std::abs(fit.scale - 2.0) < 1e-12);
  CHECK(std::abs(fit.offset - 3.0) < 1e-12);
  CHECK(fit.rms_residual < 1e-12);
  fit = affine_fit(a, a);
  CHECK(std::abs(fit.scale - 1.0) < 1e-12);
  CHECK(std::abs(fit.offset) < 1e-12);

  std::mt19937 rng(5);
  std::normal_distribution<double> g;
  std::vector<cd> ra, rb;
  for (int i = 0; i < 20; ++i) {
    ra.push_back(cd(i, g(rng)));
    rb.push_back(M_PI * ra.back() - 1.0 + 1e-9 * cd(g(rng), g(rng)));
  }
  CHECK(affine_fit(ra, rb).rms_residual <= 1e-8);
  CHECK_THROWS(affine_fit({1.0, 1.0}, {2.0, 3.0}));
}
