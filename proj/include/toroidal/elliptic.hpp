#pragma once

#include "toroidal/fock.hpp"
#include "toroidal/numerics.hpp"

#include <complex>
#include <map>
#include <optional>
#include <vector>

namespace toroidal {

/// Parameters of F(u1) x F(u2): q2 = 1/(q1 q3), q = sqrt(q2) (principal), p = pbar q^-2.
class EllipticParams {
 public:
  /// Throws std::invalid_argument for zero q1, q3, u1, u2 or |p| >= 1 - 1e-6.
  EllipticParams(std::complex<double> q1, std::complex<double> q3, std::complex<double> p, std::complex<double> u1,
                 std::complex<double> u2);
  static EllipticParams from_twist(std::complex<double> q1, std::complex<double> q3, std::complex<double> pbar,
                                   std::complex<double> u1, std::complex<double> u2);

  std::complex<double> q1() const { return q1_; }
  std::complex<double> q2() const { return 1.0 / (q1_ * q3_); }
  std::complex<double> q3() const { return q3_; }
  std::complex<double> q() const { return std::sqrt(q2()); }
  std::complex<double> p() const { return p_; }
  std::complex<double> pbar() const { return p_ * q2(); }
  std::complex<double> u1() const { return u1_; }
  std::complex<double> u2() const { return u2_; }

 private:
  std::complex<double> q1_, q3_, p_, u1_, u2_;
};

/// [B^i_m, B^j_{-m}] for families i, j in {1, 2} and m >= 1. Throws std::domain_error near p^m = 1.
std::complex<double> pairing(const EllipticParams& params, int i, int j, int m);

/// The two B-oscillator families as an OscillatorSpec (0-based families).
OscillatorSpec boson_dictionary(const EllipticParams& params);

/// Grading-preserving operator stored as one block per level.
struct GradedOperator {
  std::vector<DenseMatrix> blocks;
  DenseMatrix assembled() const;
};

/// Constant term of q^-1 u1 :exp(sum B^1_m z^-m): + q^-1 u2 :exp(sum B^2_m z^-m): on levels 0..N.
GradedOperator build_elliptic_I1(const EllipticParams& params, int level);

/// Level block only.
DenseMatrix elliptic_I1_block(const EllipticParams& params, int level);

/// -q (1 - q1)(1 - q3) sum t + q^-1 (u1 + u2).
std::complex<double> elliptic_eigenvalue_from_roots(const EllipticParams& params,
                                                    const std::vector<std::complex<double>>& roots);

struct Calibration {
  std::complex<double> scale = 1.0;
  std::complex<double> offset = 0.0;
};

struct LevelComparison {
  int level = 0;
  int operator_count = 0;
  int bethe_count = 0;
  double max_deviation = 0.0;
  bool counts_match = true;
};

struct EllipticBetheReport {
  Calibration calibration;
  std::vector<LevelComparison> levels;
  bool degenerate_twist = false;
  double max_deviation = 0.0;
};

/// Compare operator eigenvalues to Bethe closed-form values per level; the affine
/// map operator ~ scale * bethe + offset is fitted at levels 0 and 1, then frozen.
EllipticBetheReport elliptic_spectrum_vs_bethe(const EllipticParams& params, int level,
                                               const std::map<int, std::vector<std::vector<std::complex<double>>>>& roots_by_level);

/// Parameters at ILW scaling h: eps = h/r, q1 = e^{-(r-1)eps}, q3 = e^{r eps}, p = e^{2 tau},
/// u2/u1 = e^{-pihat eps}, u1 + u2 = 2q.
EllipticParams ilw_scaling_params(std::complex<double> r, std::complex<double> tau, std::complex<double> pihat,
                                  double h);

struct LimitPoint {
  double h = 0.0;
  Calibration calibration;
  /// max |scale * target + offset - elliptic| per level, target = beta h^2 I_1 + beta^{3/2} h^3 I_2.
  std::vector<double> level_residuals;
  double residual = 0.0;
  /// Per-level affine fit of the elliptic spectrum against spec(I_2) (levels with >= 3 states).
  std::vector<std::optional<double>> direct_fit_residuals;
};

struct LimitReport {
  int level = 0;
  std::vector<LimitPoint> points;
  /// residual(h_k) / residual(h_{k+1})
  std::vector<double> ratios;
};

LimitReport ilw_limit_check(std::complex<double> r, std::complex<double> tau, std::complex<double> pihat,
                            const std::vector<double>& h_values, int level);

}  // namespace toroidal
