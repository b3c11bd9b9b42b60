#include "toroidal/numerics.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace toroidal {

bool canonical_less(std::complex<double> a, std::complex<double> b) {
  if (a.real() != b.real()) return a.real() < b.real();
  return a.imag() < b.imag();
}

void canonical_sort(std::vector<std::complex<double>>& values) {
  std::sort(values.begin(), values.end(), canonical_less);
}

MultisetComparison compare_multisets(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b,
                                     MultisetTolerance tol) {
  MultisetComparison out;
  if (a.size() != b.size()) {
    out.same_size = false;
    out.match = false;
    return out;
  }
  canonical_sort(a);
  canonical_sort(b);
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double dev = std::abs(a[i] - b[i]);
    out.max_deviation = std::max(out.max_deviation, dev);
    if (dev > tol.atol + tol.rtol * std::max(1.0, std::abs(a[i]))) out.match = false;
  }
  return out;
}

std::vector<std::complex<double>> eigenvalues(const DenseMatrix& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("eigenvalues: matrix must be square");
  if (m.rows() > 512) throw std::invalid_argument("eigenvalues: dimension above 512");
  std::vector<std::complex<double>> out;
  if (m.rows() == 0) return out;
  Eigen::ComplexEigenSolver<DenseMatrix> solver;
  solver.setMaxIterations(30 * m.rows());
  solver.compute(m, false);
  if (solver.info() != Eigen::Success) throw ConvergenceError("eigenvalues: shifted QR did not converge");
  out.assign(solver.eigenvalues().data(), solver.eigenvalues().data() + m.rows());
  canonical_sort(out);
  return out;
}

ComplexVector NewtonProblem::deflated_residual(const ComplexVector& x) const {
  ComplexVector f = residual(x);
  double denom = 1.0;
  for (const auto& root : deflated) denom *= std::max((x - root).norm(), deflation_floor);
  return f / denom;
}

DenseMatrix finite_difference_jacobian(const NewtonProblem::Residual& f, const ComplexVector& x) {
  const Eigen::Index n = x.size();
  DenseMatrix jac(n, n);
  ComplexVector probe = x;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double h = 1e-7 * std::max(1.0, std::abs(x[i]));
    probe[i] = x[i] + h;
    const ComplexVector plus = f(probe);
    probe[i] = x[i] - h;
    const ComplexVector minus = f(probe);
    probe[i] = x[i];
    jac.col(i) = (plus - minus) / (2.0 * h);
  }
  return jac;
}

namespace {

double max_norm(const ComplexVector& v) { return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff(); }

bool near_deflated(const NewtonProblem& problem, const ComplexVector& x) {
  for (const auto& root : problem.deflated)
    if ((x - root).norm() <= 1e-6 * std::max(1.0, root.norm())) return true;
  return false;
}

}  // namespace

NewtonResult newton_solve(const NewtonProblem& problem, const ComplexVector& seed, const NewtonOptions& options) {
  if (options.tol <= 0) throw std::invalid_argument("newton_solve: tol must be positive");
  if (seed.size() != problem.dimension) throw std::invalid_argument("newton_solve: seed dimension mismatch");

  NewtonResult result;
  result.x = seed;
  if (problem.dimension == 0) {
    result.converged = true;
    return result;
  }

  ComplexVector f = problem.residual(result.x);
  if (f.size() != problem.dimension) throw std::invalid_argument("newton_solve: residual dimension mismatch");
  double fnorm = max_norm(f);
  double gnorm = max_norm(problem.deflated_residual(result.x));
  result.history.push_back(fnorm);

  for (int iter = 0; iter < options.max_iter; ++iter) {
    if (fnorm <= options.tol) break;
    if (!std::isfinite(fnorm)) {
      result.failure = "non-finite residual";
      break;
    }
    const DenseMatrix jac =
        problem.jacobian ? (*problem.jacobian)(result.x) : finite_difference_jacobian(problem.residual, result.x);
    Eigen::PartialPivLU<DenseMatrix> lu(jac);
    const double rcond = lu.rcond();
    if (!(rcond > 1.0 / options.max_condition)) {
      result.failure = "singular Jacobian";
      break;
    }
    ComplexVector step = lu.solve(-f);

    // Sherman-Morrison form of the Newton step for F / prod |x - x_k|
    if (!problem.deflated.empty()) {
      double directional = 0.0;
      for (const auto& root : problem.deflated) {
        const ComplexVector d = result.x - root;
        const double dist = std::max(d.norm(), problem.deflation_floor);
        directional += std::real(d.dot(step)) / (dist * dist);
      }
      const double denom = 1.0 + directional;
      step /= std::abs(denom) < 1e-12 ? 1e-12 : denom;
    }

    double lambda = 1.0;
    bool accepted = false;
    ComplexVector trial;
    ComplexVector ftrial;
    double gtrial = 0.0;
    for (int h = 0; h <= options.max_halvings; ++h) {
      trial = result.x + lambda * step;
      ftrial = problem.residual(trial);
      gtrial = max_norm(problem.deflated_residual(trial));
      if (std::isfinite(gtrial) && gtrial < gnorm) {
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    ++result.iterations;
    if (!accepted) {
      result.failure = "line search stalled";
      break;
    }
    result.x = trial;
    f = ftrial;
    fnorm = max_norm(f);
    gnorm = gtrial;
    result.history.push_back(fnorm);
  }

  result.residual = fnorm;
  if (fnorm <= options.tol && result.failure.empty()) {
    if (near_deflated(problem, result.x)) {
      result.failure = "returned to a deflated root";
    } else {
      result.converged = true;
    }
  } else if (result.failure.empty()) {
    result.failure = "iteration budget exhausted";
  }
  return result;
}

NewtonProblem deflate(NewtonProblem problem, const std::vector<ComplexVector>& known) {
  problem.deflated.insert(problem.deflated.end(), known.begin(), known.end());
  return problem;
}

AffineFit affine_fit_paired(const std::vector<std::complex<double>>& a, const std::vector<std::complex<double>>& b) {
  if (a.size() != b.size() || a.size() < 2) throw std::invalid_argument("affine_fit: need equal lengths >= 2");
  const double n = static_cast<double>(a.size());
  std::complex<double> mean_a = 0, mean_b = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    mean_a += a[i];
    mean_b += b[i];
  }
  mean_a /= n;
  mean_b /= n;
  double var = 0.0, scale_a = 0.0;
  std::complex<double> cov = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    var += std::norm(a[i] - mean_a);
    cov += std::conj(a[i] - mean_a) * (b[i] - mean_b);
    scale_a = std::max(scale_a, std::abs(a[i]));
  }
  if (!(var > 1e-28 * n * std::max(1.0, scale_a * scale_a)))
    throw std::invalid_argument("affine_fit: degenerate fit, a is constant");
  AffineFit fit;
  fit.scale = cov / var;
  fit.offset = mean_b - fit.scale * mean_a;
  double ss = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) ss += std::norm(fit.scale * a[i] + fit.offset - b[i]);
  fit.rms_residual = std::sqrt(ss / n);
  return fit;
}

AffineFit affine_fit(std::vector<std::complex<double>> a, std::vector<std::complex<double>> b) {
  canonical_sort(a);
  canonical_sort(b);
  return affine_fit_paired(a, b);
}

}  // namespace toroidal
