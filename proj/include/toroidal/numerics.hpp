#pragma once

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

using DenseMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Thrown when an iterative numeric routine exhausts its budget.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Lexicographic (real, imaginary) ordering used for every multiset in the project.
bool canonical_less(std::complex<double> a, std::complex<double> b);
void canonical_sort(std::vector<std::complex<double>>& values);

/// atol + rtol * max(1, |value|).
struct MultisetTolerance {
  double atol = 1e-8;
  double rtol = 1e-8;
};

struct MultisetComparison {
  bool same_size = true;
  bool match = true;
  double max_deviation = 0.0;
};

/// Sort both multisets canonically and compare pointwise.
MultisetComparison compare_multisets(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                                     MultisetTolerance tol = {});

/// All eigenvalues (with multiplicity), canonically sorted. Hessenberg reduction
/// followed by shifted QR; throws ConvergenceError after 30 sweeps per row.
std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m);

/// Analytic residual map F: C^n -> C^n and an optional Jacobian.
struct NewtonProblem {
  using Residual = std::function<ComplexVector(const ComplexVector&)>;
  using Jacobian = std::function<DenseMatrix(const ComplexVector&)>;

  int dimension = 0;
  Residual residual;
  std::optional<Jacobian> jacobian;
  /// Roots already found; the solver is repelled from them.
  std::vector<ComplexVector> deflated;
  double deflation_floor = 1e-8;

  /// F(x) divided by prod_k max(|x - x_k|, floor).
  ComplexVector deflated_residual(const ComplexVector& x) const;
};

/// Central differences with step 1e-7 * max(1, |x_i|) along the real axis.
DenseMatrix finite_difference_jacobian(const NewtonProblem::Residual& f, const ComplexVector& x);

struct NewtonResult {
  bool converged = false;
  ComplexVector x;
  double residual = 0.0;
  int iterations = 0;
  std::string failure;
  /// max-norm of the undeflated residual after each iteration, starting with the seed.
  std::vector<double> history;
};

struct NewtonOptions {
  double tol = 1e-10;
  int max_iter = 100;
  int max_halvings = 20;
  double max_condition = 1e14;
};

NewtonResult newton_solve(const NewtonProblem& problem, const ComplexVector& seed, const NewtonOptions& options = {});

/// Copy of `problem` with extra roots to repel.
NewtonProblem deflate(NewtonProblem problem, const std::vector<ComplexVector>& known);

struct AffineFit {
  std::complex<double> scale;
  std::complex<double> offset;
  double rms_residual;
};

/// Least-squares b ~ scale * a + offset after pairing the canonically sorted multisets.
AffineFit affine_fit(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b);
/// Same fit with the pairing given by position.
AffineFit affine_fit_paired(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b);

}  // namespace toroidal
