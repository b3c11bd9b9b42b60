#include "toroidal/ilw.hpp"

#include <cmath>
#include <stdexcept>

namespace toroidal {

IlwParams::IlwParams(std::complex<double> r, std::complex<double> tau, std::complex<double> pihat)
    : r_(r), tau_(tau), pihat_(pihat) {
  if (r == 0.0 || r == 1.0) throw std::invalid_argument("IlwParams: r must avoid 0 and 1");
  if (tau == 0.0 || std::abs(std::exp(2.0 * tau) - 1.0) < 1e-14)
    throw std::invalid_argument("IlwParams: tau must be nonzero with exp(2 tau) != 1");
}

std::complex<double> IlwParams::central_charge() const {
  const auto b = beta();
  return 1.0 - 6.0 * (1.0 - b) * (1.0 - b) / b;
}

std::complex<double> IlwParams::shift() const {
  const auto b = beta();
  return (1.0 - b) * (1.0 - b) / (4.0 * b);
}

std::complex<double> IlwParams::delta() const { return shift() * (pihat_ * pihat_ - 1.0); }

std::complex<double> IlwParams::coupling() const { return (1.0 - beta()) / std::sqrt(beta()); }

OscillatorSpec ilw_oscillator() {
  return {1, [](int, int, int m) { return std::complex<double>(0.5 * m, 0.0); }};
}

std::complex<double> coth(std::complex<double> x) {
  if (x.real() > 350.0) return 1.0;
  if (x.real() < -350.0) return -1.0;
  const auto e = std::exp(2.0 * x);
  return (e + 1.0) / (e - 1.0);
}

namespace {

// Operators between fixed levels of one Verma x one Heisenberg family.
class IlwOperators {
 public:
  IlwOperators(const IlwParams& params, int level) : params_(params), spec_(ilw_oscillator()) {
    for (int k = 0; k <= level; ++k) bases_.emplace_back(true, 1, k);
  }

  const LevelBasis& basis(int k) const { return bases_.at(k); }

  // a_m : level k -> k - m
  DenseMatrix a(int m, int k) const { return heisenberg_action(spec_, 0, m, basis(k), basis(k - m)); }
  DenseMatrix L(int n, int k) const { return virasoro_action(params_.verma(), n, basis(k), basis(k - n)); }

 private:
  IlwParams params_;
  OscillatorSpec spec_;
  std::vector<LevelBasis> bases_;
};

}  // namespace

DenseMatrix build_I1(const IlwParams& params, int level) {
  if (level < 0) throw std::invalid_argument("build_I1: negative level");
  IlwOperators ops(params, level);
  const int dim = ops.basis(level).dimension();
  DenseMatrix out = ops.L(0, level) + params.shift() * DenseMatrix::Identity(dim, dim);
  for (int m = 1; m <= level; ++m) out += 2.0 * ops.a(-m, level - m) * ops.a(m, level);
  return out;
}

DenseMatrix build_I2(const IlwParams& params, int level) {
  if (level < 0) throw std::invalid_argument("build_I2: negative level");
  IlwOperators ops(params, level);
  const int N = level;
  const int dim = ops.basis(N).dimension();
  DenseMatrix out = DenseMatrix::Zero(dim, dim);

  // L_{-m} a_m and a_{-m} L_m; the two factors commute so both route through level N - m
  for (int m = 1; m <= N; ++m) {
    out += ops.L(-m, N - m) * ops.a(m, N);
    out += ops.a(-m, N - m) * ops.L(m, N);
  }

  const auto coupling = 2.0 * params.coupling();
  for (int m = 1; m <= N; ++m)
    out -= coupling * static_cast<double>(m) * coth(static_cast<double>(m) * params.tau()) * ops.a(-m, N - m) *
           ops.a(m, N);

  // (1/3) sum over ordered triples = sum_{k,l>0} a_{-(k+l)} a_k a_l + a_{-k} a_{-l} a_{k+l}
  for (int k = 1; k <= N; ++k) {
    for (int l = 1; k + l <= N; ++l) {
      out += ops.a(-(k + l), N - k - l) * ops.a(l, N - k) * ops.a(k, N);
      out += ops.a(-k, N - k) * ops.a(-l, N - k - l) * ops.a(k + l, N);
    }
  }
  return out;
}

std::vector<std::complex<double>> ilw_spectrum(const IlwParams& params, int level) {
  return eigenvalues(build_I2(params, level));
}

}  // namespace toroidal
