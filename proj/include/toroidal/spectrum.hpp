#pragma once

#include "toroidal/bethe.hpp"

#include <complex>
#include <string>
#include <vector>

namespace toroidal {

/// Coefficients of u^{-l}, l = 0..lmax, of a transfer-matrix eigenvalue.
struct EigenvalueSeries {
  std::vector<std::complex<double>> coefficients;
  /// Partition sum truncated at |lambda| <= truncation.
  int truncation = 0;
  /// Largest coefficient change when two more partition sizes are added.
  double tail_estimate = 0.0;
  bool conjectural = false;
};

/// Smallest L with |p|^L < 1e-14. Throws std::domain_error for |p| >= 1 or L > 60.
int partition_sum_cutoff(double abs_p);

/// Expands phi(u) Q(u/q2)/Q(u) sum_lambda prod_nodes a(q^{-node} u) directly from the roots.
EigenvalueSeries t_series_direct(const std::vector<std::complex<double>>& roots, std::complex<double> q1,
                                 std::complex<double> q3, std::complex<double> p,
                                 const std::vector<std::complex<double>>& v, int lmax);

/// Same coefficients via sum_alpha C_alpha prod_r w_r^{alpha_r} / alpha_r!.
EigenvalueSeries t_series_cor52(const std::vector<std::complex<double>>& roots, std::complex<double> q1,
                                std::complex<double> q3, std::complex<double> p,
                                const std::vector<std::complex<double>>& v, int lmax);

/// Power-sum combination w_r for r >= 1.
std::complex<double> w_power_sum(const std::vector<std::complex<double>>& roots, std::complex<double> q1,
                                 std::complex<double> q3, const std::vector<std::complex<double>>& v, int r);

/// Two-colour series T_nu(u); always flagged conjectural.
EigenvalueSeries t2_series(const std::vector<std::complex<double>>& s, const std::vector<std::complex<double>>& t,
                           std::complex<double> q1, std::complex<double> q3,
                           const std::vector<std::complex<double>>& v0, const std::vector<std::complex<double>>& v1,
                           std::complex<double> p0, std::complex<double> p1, int nu, int lmax);

/// (1 - beta)/sqrt(beta) * sum t, principal square root.
std::complex<double> ilw_eigenvalue_from_roots(const std::vector<std::complex<double>>& roots,
                                               std::complex<double> beta);

struct GammaReport {
  std::vector<std::complex<double>> gamma;        // from the s/t sums
  std::vector<std::complex<double>> alternative;  // 1/(s - v) + (r - 3)/s
  double max_deviation = 0.0;
  bool pass = true;
};

/// gamma_i for an AffineGaudin root configuration, compared against the rewritten s-equation.
GammaReport gaudin_gamma(const AffineGaudinSystem& system, const std::vector<std::complex<double>>& s,
                         const std::vector<std::complex<double>>& t, double tol = 1e-9);

/// Second-order operator d^2 - l(l+1)/z^2 + sum gamma_i/z - sum (2/(z - s_i)^2 + gamma_i/(z - s_i)).
struct OperData {
  std::complex<double> l;
  std::complex<double> v;
  std::vector<std::complex<double>> points;
  std::vector<std::complex<double>> residues;
};

/// l = (pihat - 1)/2 with the gamma_i of a Gaudin solution.
OperData make_oper(const AffineGaudinSystem& system, const std::vector<std::complex<double>>& s,
                   const std::vector<std::complex<double>>& gamma);

struct SingularPointVerdict {
  std::complex<double> z;
  std::complex<double> exponent_low, exponent_high;
  std::complex<double> obstruction;
  bool pass = false;
};

struct OperReport {
  std::complex<double> origin_exponent_low, origin_exponent_high;
  std::vector<SingularPointVerdict> points;
  bool pass = true;
};

/// Frobenius data at each s_i: indicial exponents and the logarithm obstruction at exponent difference 3.
/// Throws std::invalid_argument for coincident or zero points.
OperReport oper_apparent_singularity_check(const OperData& oper, double tol = 1e-8);

/// Complex Gamma by the Lanczos approximation; std::domain_error at the poles.
std::complex<double> gamma_function(std::complex<double> z);

/// P with P^2 = ((c - 1)/24) pihat^2, c = 13 - 6(beta + 1/beta), principal root.
std::complex<double> momentum_from_pihat(std::complex<double> beta, std::complex<double> pihat);

struct R1Report {
  std::complex<double> g1_vacuum;
  std::complex<double> r1;
  bool conjectural = true;
};

/// G_1^(vac) = 4 pi^2 Gamma(1 - 2 beta) / (Gamma(1 - beta - 2P) Gamma(1 - beta + 2P)),
/// r_1 = G_1^(vac) (1 - (1/v) 2(1 - 2 beta)/(1 - beta + 2P) sum (s_i - t_i)).
R1Report r1_report(const std::vector<std::complex<double>>& s, const std::vector<std::complex<double>>& t,
                   std::complex<double> beta, std::complex<double> P, std::complex<double> v);

}  // namespace toroidal
