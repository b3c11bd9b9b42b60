#pragma once

#include "toroidal/fock.hpp"
#include "toroidal/numerics.hpp"

#include <complex>
#include <vector>

namespace toroidal {

/// ILW coupling data. beta, c and delta are always derived from (r, pihat).
class IlwParams {
 public:
  /// Throws std::invalid_argument for r in {0, 1}, tau = 0 or exp(2 tau) = 1.
  IlwParams(std::complex<double> r, std::complex<double> tau, std::complex<double> pihat);

  std::complex<double> r() const { return r_; }
  std::complex<double> tau() const { return tau_; }
  std::complex<double> pihat() const { return pihat_; }
  std::complex<double> beta() const { return (r_ - 1.0) / r_; }
  std::complex<double> central_charge() const;
  std::complex<double> delta() const;
  /// (1 - beta)^2 / (4 beta)
  std::complex<double> shift() const;
  /// (1 - beta) / sqrt(beta), principal branch.
  std::complex<double> coupling() const;

  VermaSpec verma() const { return {central_charge(), delta()}; }

 private:
  std::complex<double> r_;
  std::complex<double> tau_;
  std::complex<double> pihat_;
};

/// Heisenberg a_m with [a_m, a_{-m}] = m / 2.
OscillatorSpec ilw_oscillator();

/// coth(x) = (e^{2x} + 1) / (e^{2x} - 1), saturating to +-1 for |Re x| > 350.
std::complex<double> coth(std::complex<double> x);

/// I_1 = L_0 + (1-beta)^2/(4 beta) + 2 sum_{m>0} a_{-m} a_m on the level-N basis.
DenseMatrix build_I1(const IlwParams& params, int level);

/// I_2 = sum_{m!=0} L_{-m} a_m - 2 (1-beta)/sqrt(beta) sum_{m>0} m coth(m tau) a_{-m} a_m
///       + 1/3 sum_{k+l+m=0} a_k a_l a_m   on the level-N basis.
DenseMatrix build_I2(const IlwParams& params, int level);

/// Canonically sorted eigenvalues of build_I2.
std::vector<std::complex<double>> ilw_spectrum(const IlwParams& params, int level);

}  // namespace toroidal
