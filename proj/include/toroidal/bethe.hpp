#pragma once

#include "toroidal/numerics.hpp"

#include <complex>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace toroidal {

/// p prod_j (t_i - v_j)/(t_i - v_j/q2) prod_k prod_s (q_s t_i - t_k)/(q_s^-1 t_i - t_k) = -1.
struct ToroidalGl1System {
  std::complex<double> q1, q3;
  std::complex<double> p;  // p = pbar q^-M
  std::vector<std::complex<double>> v;
  int n = 0;
};

/// Two-colour system in roots s (n0 of them) and t (n1 of them).
struct ToroidalGl2System {
  std::complex<double> q1, q3;
  std::complex<double> p0, p1;
  std::vector<std::complex<double>> v0, v1;
  int n0 = 0, n1 = 0;
};

/// e^{2 tau} prod_s (t_i - v_s)/(t_i - v_s - 1) prod_j [(d-1)(d+r)(d-r+1)] / [(d+1)(d-r)(d+r-1)] = -1, d = t_i - t_j.
struct IlwSystem {
  std::complex<double> r, tau;
  std::complex<double> v1, v2;
  int n = 0;
};

/// Affine sl2 Gaudin equations in s (n0) and t (n1).
struct AffineGaudinSystem {
  std::complex<double> r, pihat, v;
  int n0 = 0, n1 = 0;
};

/// Gaudin equations with the t-couplings split between e^{tau} and e^{-tau}.
struct IlwGaudinHybridSystem {
  std::complex<double> r, pihat, v, tau;
  int n0 = 0, n1 = 0;
};

using BetheSystem =
    std::variant<ToroidalGl1System, ToroidalGl2System, IlwSystem, AffineGaudinSystem, IlwGaudinHybridSystem>;

/// Raised when an equation is evaluated on one of its pole loci.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

std::string variant_tag(const BetheSystem& system);
/// Root counts per variable group; the second entry is 0 for single-group systems.
std::pair<int, int> root_counts(const BetheSystem& system);
int unknown_count(const BetheSystem& system);
/// Largest parameter magnitude, at least 1.
double parameter_scale(const BetheSystem& system);
/// Throws std::invalid_argument when an invariant (nonzero evaluation parameters, tau != 0, counts >= 0) fails.
void validate(const BetheSystem& system);

/// Cleared-denominator residual (multiplicative systems) or raw rational sums (Gaudin systems).
ComplexVector residual(const BetheSystem& system, const ComplexVector& roots);

/// Holomorphic form used by the solvers: LHS/RHS ratio + 1 for products, root-weighted sums for Gaudin systems.
/// Same zero set as residual away from poles and zero roots.
ComplexVector newton_residual(const BetheSystem& system, const ComplexVector& roots);

struct BetheSolution {
  std::vector<std::complex<double>> first;   // t for single-group systems, s otherwise
  std::vector<std::complex<double>> second;  // t for two-group systems
  double residual = 0.0;
  bool admissible = false;
  std::string rejection;

  ComplexVector flat() const;
};

/// Sort each group canonically.
BetheSolution canonical_solution(const BetheSystem& system, const ComplexVector& roots);
/// Fills residual, admissible and rejection.
void assess(const BetheSystem& system, BetheSolution& solution, double tol);

/// Two solutions agree when each root matches a distinct root of the same group within tol * max(1, |root|).
bool same_solution(const BetheSolution& a, const BetheSolution& b, double tol);

struct SolveOptions {
  double tol = 1e-10;
  int seeds_per_unknown = 200;
  bool use_deflation = true;
  /// Deflated restarts stop once this many admissible solutions are known.
  std::optional<int> expected_count;
  int workers = 1;
  std::vector<ComplexVector> extra_seeds;
  bool include_structured_seeds = true;
  int max_iter = 100;
  /// While expected_count is unmet, draw further Halton batches (doubling each round).
  int escalation_rounds = 4;
};

struct SolveReport {
  std::vector<BetheSolution> solutions;  // admissible, deduplicated, canonically ordered
  std::vector<BetheSolution> rejected;   // converged but inadmissible, deduplicated
  int seeds_tried = 0;
  int converged = 0;
};

SolveReport solve_all(const BetheSystem& system, const SolveOptions& options = {});

/// Node-string seeds: for every M-tuple of partitions with total size N the roots
/// q3^(a-1) q1^(b-1) v_j, perturbed by a relative 1e-3 at deterministic angles.
std::vector<ComplexVector> seed_strings_gl1(std::complex<double> q1, std::complex<double> q3,
                                            const std::vector<std::complex<double>>& v, int n);

/// Structured seeds used by solve_all for the given system (may be empty).
std::vector<ComplexVector> structured_seeds(const BetheSystem& system);

/// Low-discrepancy (Halton) points in the polydisc of the given radius.
std::vector<ComplexVector> halton_seeds(int dimension, int count, double radius, std::complex<double> center = 0.0,
                                        int start_index = 1);

struct PathResult {
  bool success = false;
  ComplexVector start;
  ComplexVector end;
  double end_residual = 0.0;
  int steps_taken = 0;
  bool crossed = false;
  std::string failure;
};

struct ContinuationOptions {
  int steps = 50;
  double tol = 1e-10;
  int max_halvings = 12;
};

/// Euler predictor / Newton corrector along sigma in [0, 1].
std::vector<PathResult> continuation(const std::function<BetheSystem(double sigma)>& family,
                                     const std::vector<ComplexVector>& starts, const ContinuationOptions& options = {});

}  // namespace toroidal
