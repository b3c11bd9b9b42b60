#include "toroidal/bethe.hpp"

#include "toroidal/partitions.hpp"
#include "toroidal/util.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <thread>

namespace toroidal {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

cplx guarded_inverse(cplx x) {
  if (std::abs(x) < 1e-300) throw PoleError("Bethe equation evaluated at a pole");
  return 1.0 / x;
}

// Reported residuals use (num + den) / max(|num|, |den|, 1), which is not holomorphic. Newton works on
// holomorphic forms instead. The ratio num/den + 1 avoids the spurious zeros of the polynomial
// num + den (all roots at 0 for the toroidal systems, root strings spaced by 1 and r for Ilw), while the
// polynomial has larger basins for roots sitting close to a pole. Gaudin sums are weighted by their root.
enum class Form { Cleared, Newton, Polynomial };

cplx combine(Form form, cplx num, cplx den) {
  if (form == Form::Newton) return num * guarded_inverse(den) + 1.0;
  if (form == Form::Polynomial) return num + den;
  const double scale = std::max({std::abs(num), std::abs(den), 1.0});
  return (num + den) / scale;
}

double max_abs(std::initializer_list<cplx> values) {
  double m = 1.0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

double max_abs(const std::vector<cplx>& values) {
  double m = 0.0;
  for (auto v : values) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

std::string variant_tag(const BetheSystem& system) {
  return std::visit(overloaded{[](const ToroidalGl1System&) { return std::string("ToroidalGl1"); },
                               [](const ToroidalGl2System&) { return std::string("ToroidalGl2"); },
                               [](const IlwSystem&) { return std::string("Ilw"); },
                               [](const AffineGaudinSystem&) { return std::string("AffineGaudin"); },
                               [](const IlwGaudinHybridSystem&) { return std::string("IlwGaudinHybrid"); }},
                    system);
}

std::pair<int, int> root_counts(const BetheSystem& system) {
  return std::visit(overloaded{[](const ToroidalGl1System& s) { return std::pair{s.n, 0}; },
                               [](const ToroidalGl2System& s) { return std::pair{s.n0, s.n1}; },
                               [](const IlwSystem& s) { return std::pair{s.n, 0}; },
                               [](const AffineGaudinSystem& s) { return std::pair{s.n0, s.n1}; },
                               [](const IlwGaudinHybridSystem& s) { return std::pair{s.n0, s.n1}; }},
                    system);
}

int unknown_count(const BetheSystem& system) {
  const auto [a, b] = root_counts(system);
  return a + b;
}

double parameter_scale(const BetheSystem& system) {
  return std::visit(
      overloaded{[](const ToroidalGl1System& s) { return std::max(max_abs({s.q1, s.q3, s.p}), max_abs(s.v)); },
                 [](const ToroidalGl2System& s) {
                   return std::max({max_abs({s.q1, s.q3, s.p0, s.p1}), max_abs(s.v0), max_abs(s.v1)});
                 },
                 [](const IlwSystem& s) { return max_abs({s.r, s.tau, s.v1, s.v2}); },
                 [](const AffineGaudinSystem& s) { return max_abs({s.r, s.pihat, s.v}); },
                 [](const IlwGaudinHybridSystem& s) { return max_abs({s.r, s.pihat, s.v, s.tau}); }},
      system);
}

void validate(const BetheSystem& system) {
  auto nonzero = [](const std::vector<cplx>& values, const char* what) {
    for (auto v : values)
      if (v == 0.0) throw std::invalid_argument(std::string(what) + " must be nonzero");
  };
  std::visit(overloaded{[&](const ToroidalGl1System& s) {
                          if (s.n < 0) throw std::invalid_argument("root count must be non-negative");
                          nonzero(s.v, "evaluation parameters");
                          nonzero({s.q1, s.q3}, "q1, q3");
                        },
                        [&](const ToroidalGl2System& s) {
                          if (s.n0 < 0 || s.n1 < 0) throw std::invalid_argument("root counts must be non-negative");
                          nonzero(s.v0, "evaluation parameters");
                          nonzero(s.v1, "evaluation parameters");
                          nonzero({s.q1, s.q3}, "q1, q3");
                        },
                        [&](const IlwSystem& s) {
                          if (s.n < 0) throw std::invalid_argument("root count must be non-negative");
                          if (s.tau == 0.0) throw std::invalid_argument("tau must be nonzero");
                        },
                        [&](const AffineGaudinSystem& s) {
                          if (s.n0 < 0 || s.n1 < 0) throw std::invalid_argument("root counts must be non-negative");
                          nonzero({s.v}, "v");
                        },
                        [&](const IlwGaudinHybridSystem& s) {
                          if (s.n0 < 0 || s.n1 < 0) throw std::invalid_argument("root counts must be non-negative");
                          nonzero({s.v}, "v");
                          if (s.tau == 0.0) throw std::invalid_argument("tau must be nonzero");
                        }},
             system);
}

namespace {

ComplexVector residual_gl1(const ToroidalGl1System& s, const ComplexVector& t, Form form) {
  const cplx q2 = 1.0 / (s.q1 * s.q3);
  const cplx qs[3] = {s.q1, q2, s.q3};
  ComplexVector out(s.n);
  for (int i = 0; i < s.n; ++i) {
    cplx num = -s.p;  // the k = i factor equals -q1 q2 q3 = -1
    cplx den = 1.0;
    for (auto v : s.v) {
      num *= t[i] - v;
      den *= t[i] - v / q2;
    }
    for (int k = 0; k < s.n; ++k) {
      if (k == i) continue;
      for (auto q : qs) {
        num *= q * t[i] - t[k];
        den *= t[i] / q - t[k];
      }
    }
    out[i] = combine(form, num, den);
  }
  return out;
}

// one colour of the gl2 system: roots x (own colour), y (other colour)
void residual_gl2_colour(cplx q1, cplx q3, cplx twist, const std::vector<cplx>& v, const cplx* x, int nx,
                         const cplx* y, int ny, cplx* out, Form form) {
  const cplx q2 = 1.0 / (q1 * q3);
  for (int i = 0; i < nx; ++i) {
    cplx num = -twist * q2;  // own-colour k = i factor equals -q2
    cplx den = 1.0;
    for (auto v : v) {
      num *= x[i] - v;
      den *= x[i] - v / q2;
    }
    for (int k = 0; k < nx; ++k) {
      if (k == i) continue;
      num *= q2 * x[i] - x[k];
      den *= x[i] / q2 - x[k];
    }
    for (int k = 0; k < ny; ++k) {
      num *= (q1 * x[i] - y[k]) * (q3 * x[i] - y[k]);
      den *= (x[i] / q1 - y[k]) * (x[i] / q3 - y[k]);
    }
    out[i] = combine(form, num, den);
  }
}

ComplexVector residual_gl2(const ToroidalGl2System& s, const ComplexVector& roots, Form form) {
  ComplexVector out(s.n0 + s.n1);
  const cplx* sr = roots.data();
  const cplx* tr = roots.data() + s.n0;
  residual_gl2_colour(s.q1, s.q3, s.p0, s.v0, sr, s.n0, tr, s.n1, out.data(), form);
  residual_gl2_colour(s.q1, s.q3, s.p1, s.v1, tr, s.n1, sr, s.n0, out.data() + s.n0, form);
  return out;
}

ComplexVector residual_ilw(const IlwSystem& s, const ComplexVector& t, Form form) {
  ComplexVector out(s.n);
  const cplx twist = std::exp(2.0 * s.tau);
  for (int i = 0; i < s.n; ++i) {
    cplx num = -twist;  // the j = i factor equals -1
    cplx den = 1.0;
    for (auto v : {s.v1, s.v2}) {
      num *= t[i] - v;
      den *= t[i] - v - 1.0;
    }
    for (int j = 0; j < s.n; ++j) {
      if (j == i) continue;
      const cplx d = t[i] - t[j];
      num *= (d - 1.0) * (d + s.r) * (d - s.r + 1.0);
      den *= (d + 1.0) * (d - s.r) * (d + s.r - 1.0);
    }
    out[i] = combine(form, num, den);
  }
  return out;
}

// shared Gaudin structure; coupling(x, y) sums the cross terms for one pair
template <class Cross>
ComplexVector residual_gaudin(cplx r, cplx pihat, cplx v, int n0, int n1, const ComplexVector& roots, Form form,
                              Cross cross) {
  ComplexVector out(n0 + n1);
  const cplx* s = roots.data();
  const cplx* t = roots.data() + n0;
  for (int i = 0; i < n0; ++i) {
    cplx f = (r - pihat - 2.0) * guarded_inverse(s[i]) + guarded_inverse(s[i] - v);
    for (int k = 0; k < n0; ++k)
      if (k != i) f -= 2.0 * guarded_inverse(s[i] - s[k]);
    for (int k = 0; k < n1; ++k) f += cross(s[i], t[k]);
    out[i] = form == Form::Newton ? s[i] * f : f;
  }
  for (int j = 0; j < n1; ++j) {
    cplx g = (pihat - 1.0) * guarded_inverse(t[j]);
    for (int k = 0; k < n1; ++k)
      if (k != j) g -= 2.0 * guarded_inverse(t[j] - t[k]);
    for (int k = 0; k < n0; ++k) g += cross(t[j], s[k]);
    out[n0 + j] = form == Form::Newton ? t[j] * g : g;
  }
  return out;
}

}  // namespace

namespace {

ComplexVector evaluate(const BetheSystem& system, const ComplexVector& roots, Form form) {
  if (roots.size() != unknown_count(system)) throw std::invalid_argument("residual: root count mismatch");
  return std::visit(
      overloaded{[&](const ToroidalGl1System& s) { return residual_gl1(s, roots, form); },
                 [&](const ToroidalGl2System& s) { return residual_gl2(s, roots, form); },
                 [&](const IlwSystem& s) { return residual_ilw(s, roots, form); },
                 [&](const AffineGaudinSystem& s) {
                   return residual_gaudin(s.r, s.pihat, s.v, s.n0, s.n1, roots, form,
                                          [](cplx x, cplx y) { return 2.0 * guarded_inverse(x - y); });
                 },
                 [&](const IlwGaudinHybridSystem& s) {
                   const cplx e = std::exp(s.tau);
                   return residual_gaudin(s.r, s.pihat, s.v, s.n0, s.n1, roots, form, [e](cplx x, cplx y) {
                     return guarded_inverse(x - e * y) + guarded_inverse(x - y / e);
                   });
                 }},
      system);
}

}  // namespace

ComplexVector residual(const BetheSystem& system, const ComplexVector& roots) {
  return evaluate(system, roots, Form::Cleared);
}

ComplexVector newton_residual(const BetheSystem& system, const ComplexVector& roots) {
  return evaluate(system, roots, Form::Newton);
}

ComplexVector BetheSolution::flat() const {
  ComplexVector out(first.size() + second.size());
  for (std::size_t i = 0; i < first.size(); ++i) out[i] = first[i];
  for (std::size_t i = 0; i < second.size(); ++i) out[first.size() + i] = second[i];
  return out;
}

BetheSolution canonical_solution(const BetheSystem& system, const ComplexVector& roots) {
  const auto [n0, n1] = root_counts(system);
  BetheSolution sol;
  sol.first.assign(roots.data(), roots.data() + n0);
  sol.second.assign(roots.data() + n0, roots.data() + n0 + n1);
  canonical_sort(sol.first);
  canonical_sort(sol.second);
  return sol;
}

namespace {

// distance from each root to the pole loci of its own equation
std::string pole_violation(const BetheSystem& system, const BetheSolution& sol, double delta) {
  auto near = [delta](cplx a, cplx b) { return std::abs(a - b) <= delta; };
  const auto& x = sol.first;
  const auto& y = sol.second;
  return std::visit(
      overloaded{
          [&](const ToroidalGl1System& s) -> std::string {
            const cplx q2 = 1.0 / (s.q1 * s.q3);
            for (std::size_t i = 0; i < x.size(); ++i) {
              for (auto v : s.v)
                if (near(x[i], v / q2)) return "root on pole t = v/q2";
              for (std::size_t k = 0; k < x.size(); ++k)
                if (k != i)
                  for (auto q : {s.q1, q2, s.q3})
                    if (near(x[i], q * x[k])) return "root pair on pole t_i = q_s t_k";
            }
            return "";
          },
          [&](const ToroidalGl2System& s) -> std::string {
            const cplx q2 = 1.0 / (s.q1 * s.q3);
            auto colour = [&](const std::vector<cplx>& own, const std::vector<cplx>& other,
                              const std::vector<cplx>& v) -> std::string {
              for (std::size_t i = 0; i < own.size(); ++i) {
                for (auto vv : v)
                  if (near(own[i], vv / q2)) return "root on pole x = v/q2";
                for (std::size_t k = 0; k < own.size(); ++k)
                  if (k != i && near(own[i], q2 * own[k])) return "root pair on pole x_i = q2 x_k";
                for (auto o : other)
                  if (near(own[i], s.q1 * o) || near(own[i], s.q3 * o)) return "root pair on cross pole";
              }
              return "";
            };
            auto a = colour(x, y, s.v0);
            return a.empty() ? colour(y, x, s.v1) : a;
          },
          [&](const IlwSystem& s) -> std::string {
            for (std::size_t i = 0; i < x.size(); ++i) {
              for (auto v : {s.v1, s.v2})
                if (near(x[i], v + 1.0)) return "root on pole t = v + 1";
              for (std::size_t j = 0; j < x.size(); ++j) {
                if (j == i) continue;
                const cplx d = x[i] - x[j];
                if (near(d, -1.0) || near(d, s.r) || near(d, 1.0 - s.r)) return "root pair on difference pole";
              }
            }
            return "";
          },
          [&](const AffineGaudinSystem& s) -> std::string {
            for (auto a : x) {
              if (near(a, 0.0) || near(a, s.v)) return "s root on pole 0 or v";
              for (auto b : y)
                if (near(a, b)) return "s root collides with t root";
            }
            for (auto b : y)
              if (near(b, 0.0)) return "t root on pole 0";
            return "";
          },
          [&](const IlwGaudinHybridSystem& s) -> std::string {
            const cplx e = std::exp(s.tau);
            for (auto a : x) {
              if (near(a, 0.0) || near(a, s.v)) return "s root on pole 0 or v";
              for (auto b : y)
                if (near(a, e * b) || near(a, b / e)) return "s root collides with shifted t root";
            }
            for (auto b : y)
              if (near(b, 0.0)) return "t root on pole 0";
            return "";
          }},
      system);
}

bool has_close_pair(const std::vector<cplx>& roots, double delta) {
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i] - roots[j]) <= delta) return true;
  return false;
}

}  // namespace

void assess(const BetheSystem& system, BetheSolution& sol, double tol) {
  const double scale = parameter_scale(system);
  const double delta = 1e-7 * scale;
  sol.admissible = false;
  sol.rejection.clear();
  if (has_close_pair(sol.first, delta) || has_close_pair(sol.second, delta)) {
    sol.residual = std::numeric_limits<double>::infinity();
    sol.rejection = "repeated roots";
    return;
  }
  if (auto msg = pole_violation(system, sol, delta); !msg.empty()) {
    sol.residual = std::numeric_limits<double>::infinity();
    sol.rejection = msg;
    return;
  }
  try {
    const ComplexVector f = residual(system, sol.flat());
    sol.residual = f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
  } catch (const PoleError&) {
    sol.residual = std::numeric_limits<double>::infinity();
    sol.rejection = "pole";
    return;
  }
  if (!(sol.residual <= tol)) {
    sol.rejection = "residual above tolerance";
    return;
  }
  // The floor in the cleared normalization lets 0/0 configurations through; the ratio form catches them.
  if (!std::holds_alternative<AffineGaudinSystem>(system) && !std::holds_alternative<IlwGaudinHybridSystem>(system)) {
    try {
      const ComplexVector g = newton_residual(system, sol.flat());
      if (g.size() > 0 && !(g.cwiseAbs().maxCoeff() <= 1e-6)) {
        sol.rejection = "degenerate: equation ratio differs from -1";
        return;
      }
    } catch (const PoleError&) {
      sol.rejection = "degenerate: vanishing denominator";
      return;
    }
  }
  sol.admissible = true;
}

namespace {

bool groups_match(const std::vector<cplx>& a, const std::vector<cplx>& b, double tol) {
  if (a.size() != b.size()) return false;
  std::vector<bool> used(b.size(), false);
  for (auto x : a) {
    bool found = false;
    for (std::size_t j = 0; j < b.size(); ++j) {
      if (used[j]) continue;
      if (std::abs(x - b[j]) <= tol * std::max(1.0, std::abs(x))) {
        used[j] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

bool solution_less(const BetheSolution& a, const BetheSolution& b) {
  const ComplexVector fa = a.flat();
  const ComplexVector fb = b.flat();
  for (Eigen::Index i = 0; i < std::min(fa.size(), fb.size()); ++i) {
    if (canonical_less(fa[i], fb[i])) return true;
    if (canonical_less(fb[i], fa[i])) return false;
  }
  return fa.size() < fb.size();
}

NewtonProblem make_problem(const BetheSystem& system, Form form) {
  NewtonProblem problem;
  problem.dimension = unknown_count(system);
  problem.residual = [system, form](const ComplexVector& x) { return evaluate(system, x, form); };
  return problem;
}

// Forms tried in order by the multistart driver.
std::vector<Form> solver_forms(const BetheSystem& system) {
  if (std::holds_alternative<IlwSystem>(system)) return {Form::Newton, Form::Polynomial};
  return {Form::Newton};
}

NewtonResult guarded_newton(const NewtonProblem& problem, const ComplexVector& seed, const NewtonOptions& opts) {
  try {
    return newton_solve(problem, seed, opts);
  } catch (const PoleError&) {
    NewtonResult r;
    r.x = seed;
    r.failure = "pole";
    return r;
  }
}

// Roots of a solution under all within-group permutations, for deflation.
std::vector<ComplexVector> permuted_copies(const BetheSolution& sol) {
  std::vector<ComplexVector> out;
  std::vector<cplx> a = sol.first;
  std::sort(a.begin(), a.end(), canonical_less);
  do {
    std::vector<cplx> b = sol.second;
    std::sort(b.begin(), b.end(), canonical_less);
    do {
      ComplexVector v(a.size() + b.size());
      for (std::size_t i = 0; i < a.size(); ++i) v[i] = a[i];
      for (std::size_t i = 0; i < b.size(); ++i) v[a.size() + i] = b[i];
      out.push_back(v);
    } while (std::next_permutation(b.begin(), b.end(), canonical_less));
  } while (std::next_permutation(a.begin(), a.end(), canonical_less));
  return out;
}

double radical_inverse(int base, int index) {
  double result = 0.0;
  double f = 1.0 / base;
  while (index > 0) {
    result += f * (index % base);
    index /= base;
    f /= base;
  }
  return result;
}

int nth_prime(int k) {
  static const int primes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53,
                               59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
  return primes[k % 32];
}

double seed_radius(const BetheSystem& system) {
  return std::visit(
      overloaded{[](const ToroidalGl1System& s) {
                   const cplx q2 = 1.0 / (s.q1 * s.q3);
                   const double grow = std::max({1.0, std::abs(s.q1), std::abs(s.q3), std::abs(1.0 / q2)});
                   return 2.0 * std::max(1.0, max_abs(s.v)) * std::pow(grow, s.n);
                 },
                 [](const ToroidalGl2System& s) {
                   const cplx q2 = 1.0 / (s.q1 * s.q3);
                   const double grow = std::max({1.0, std::abs(s.q1), std::abs(s.q3), std::abs(1.0 / q2)});
                   return 2.0 * std::max({1.0, max_abs(s.v0), max_abs(s.v1)}) * std::pow(grow, s.n0 + s.n1);
                 },
                 [](const IlwSystem& s) {
                   return std::max(std::abs(s.v1), std::abs(s.v2)) + s.n * std::max(1.0, std::abs(s.r)) + 1.0;
                 },
                 [](const AffineGaudinSystem& s) { return 2.0 * std::max(1.0, std::abs(s.v)); },
                 [](const IlwGaudinHybridSystem& s) { return 2.0 * std::max(1.0, std::abs(s.v)); }},
      system);
}

void insert_unique(std::vector<BetheSolution>& list, BetheSolution sol, double dedupe_tol) {
  for (auto& existing : list) {
    if (same_solution(existing, sol, dedupe_tol)) {
      if (sol.residual < existing.residual) existing = std::move(sol);
      return;
    }
  }
  list.push_back(std::move(sol));
}

}  // namespace

bool same_solution(const BetheSolution& a, const BetheSolution& b, double tol) {
  return groups_match(a.first, b.first, tol) && groups_match(a.second, b.second, tol);
}

std::vector<ComplexVector> halton_seeds(int dimension, int count, double radius, cplx center, int start_index) {
  std::vector<ComplexVector> out;
  out.reserve(count);
  for (int k = start_index; k < start_index + count; ++k) {
    ComplexVector x(dimension);
    for (int d = 0; d < dimension; ++d) {
      // area-uniform point in the disc
      const double u = radical_inverse(nth_prime(2 * d), k);
      const double w = radical_inverse(nth_prime(2 * d + 1), k);
      const double rho = radius * std::sqrt(u);
      const double phi = 2.0 * std::numbers::pi * w;
      x[d] = center + std::polar(rho, phi);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::vector<ComplexVector> seed_strings_gl1(cplx q1, cplx q3, const std::vector<cplx>& v, int n) {
  std::vector<ComplexVector> out;
  const int M = static_cast<int>(v.size());
  for (const auto& tuple : enumerate_tuples(M, n)) {
    ComplexVector seed(n);
    int idx = 0;
    for (int j = 0; j < M; ++j)
      for (const auto& node : nodes(tuple[j])) {
        const double angle = 2.0 * std::numbers::pi * (0.137 + 0.618 * idx);
        seed[idx] = node_weight(node, q1, q3) * v[j] * (1.0 + 1e-3 * std::polar(1.0, angle));
        ++idx;
      }
    out.push_back(std::move(seed));
  }
  return out;
}

std::vector<ComplexVector> structured_seeds(const BetheSystem& system) {
  return std::visit(overloaded{[](const ToroidalGl1System& s) {
                                 // strings anchored at v_j and at the poles v_j / q2 where small-p roots sit
                                 auto out = seed_strings_gl1(s.q1, s.q3, s.v, s.n);
                                 const cplx q2 = 1.0 / (s.q1 * s.q3);
                                 std::vector<cplx> shifted;
                                 for (auto v : s.v) shifted.push_back(v / q2);
                                 auto more = seed_strings_gl1(s.q1, s.q3, shifted, s.n);
                                 out.insert(out.end(), more.begin(), more.end());
                                 return out;
                               },
                               [](const auto&) { return std::vector<ComplexVector>{}; }},
                    system);
}

SolveReport solve_all(const BetheSystem& system, const SolveOptions& options) {
  validate(system);
  SolveReport report;
  const int n = unknown_count(system);
  const double dedupe_tol = 10.0 * options.tol;

  if (n == 0) {
    BetheSolution empty;
    assess(system, empty, options.tol);
    report.solutions.push_back(empty);
    return report;
  }

  const std::vector<Form> forms = solver_forms(system);
  std::vector<NewtonProblem> problems;
  for (Form f : forms) problems.push_back(make_problem(system, f));
  NewtonOptions newton;
  newton.tol = options.tol;
  newton.max_iter = options.max_iter;
  NewtonOptions polish = newton;
  polish.tol = std::max(1e-15, options.tol * 1e-4);
  polish.max_iter = 8;

  auto finish = [&](const NewtonProblem& problem, const NewtonResult& r) {
    NewtonResult refined = guarded_newton(problem, r.x, polish);
    BetheSolution sol = canonical_solution(system, refined.residual < r.residual ? refined.x : r.x);
    assess(system, sol, options.tol);
    return sol;
  };
  auto record = [&](BetheSolution sol) {
    ++report.converged;
    insert_unique(sol.admissible ? report.solutions : report.rejected, std::move(sol), dedupe_tol);
  };
  auto missing = [&] {
    return options.expected_count && static_cast<int>(report.solutions.size()) < *options.expected_count;
  };

  // Plain Newton from every (form, seed) pair; tasks are independent, so scheduling cannot change results.
  auto plain_pass = [&](const std::vector<ComplexVector>& seeds) {
    const std::size_t tasks = forms.size() * seeds.size();
    std::vector<std::optional<BetheSolution>> results(tasks);
    auto run_task = [&](std::size_t k) {
      const NewtonProblem& problem = problems[k / seeds.size()];
      NewtonResult r = guarded_newton(problem, seeds[k % seeds.size()], newton);
      if (r.converged) results[k] = finish(problem, r);
    };
    const int workers = std::max(1, options.workers);
    if (workers == 1) {
      for (std::size_t k = 0; k < tasks; ++k) run_task(k);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
          for (std::size_t k = w; k < tasks; k += workers) run_task(k);
        });
      for (auto& t : pool) t.join();
    }
    for (auto& r : results)
      if (r) record(std::move(*r));
  };

  // Restarts with every known solution deflated, until the expected count is reached.
  auto deflated_pass = [&](const std::vector<ComplexVector>& seeds) {
    for (std::size_t fi = 0; fi < forms.size() && missing(); ++fi) {
      NewtonProblem deflated = problems[fi];
      for (const auto& s : report.solutions) deflated = deflate(deflated, permuted_copies(s));
      for (const auto& seed : seeds) {
        if (!missing()) break;
        NewtonResult r = guarded_newton(deflated, seed, newton);
        if (!r.converged) continue;
        BetheSolution sol = finish(problems[fi], r);
        const std::size_t before = report.solutions.size();
        record(sol);
        if (report.solutions.size() > before) deflated = deflate(deflated, permuted_copies(sol));
      }
    }
  };

  std::vector<ComplexVector> seeds;
  if (options.include_structured_seeds) seeds = structured_seeds(system);
  seeds.insert(seeds.end(), options.extra_seeds.begin(), options.extra_seeds.end());
  const int budget = options.seeds_per_unknown * n;
  const double radius = seed_radius(system);
  const auto grid = halton_seeds(n, budget, radius);
  seeds.insert(seeds.end(), grid.begin(), grid.end());
  report.seeds_tried = static_cast<int>(seeds.size());
  plain_pass(seeds);
  if (options.use_deflation) deflated_pass(seeds);

  // Escalation: continue the low-discrepancy sequence while solutions are still missing.
  int drawn = budget;
  for (int round = 0; round < options.escalation_rounds && missing(); ++round) {
    const auto more = halton_seeds(n, drawn, radius, 0.0, drawn + 1);
    drawn *= 2;
    report.seeds_tried += static_cast<int>(more.size());
    plain_pass(more);
    if (options.use_deflation) deflated_pass(more);
  }

  std::sort(report.solutions.begin(), report.solutions.end(), solution_less);
  std::sort(report.rejected.begin(), report.rejected.end(), solution_less);
  return report;
}

std::vector<PathResult> continuation(const std::function<BetheSystem(double)>& family,
                                     const std::vector<ComplexVector>& starts, const ContinuationOptions& options) {
  std::vector<PathResult> paths;
  const double base_step = 1.0 / std::max(1, options.steps);
  NewtonOptions corrector;
  corrector.tol = options.tol;
  corrector.max_iter = 30;

  for (const auto& start : starts) {
    PathResult path;
    path.start = start;
    ComplexVector x = start;
    double sigma = 0.0;
    double step = base_step;
    int halvings = 0;
    int attempts = 0;
    try {
      while (sigma < 1.0) {
        if (++attempts > 40 * std::max(1, options.steps)) {
          path.failure = "step budget exhausted at sigma = " + std::to_string(sigma);
          break;
        }
        step = std::min(step, 1.0 - sigma);
        const BetheSystem here = family(sigma);
        const auto f = [&here](const ComplexVector& y) { return newton_residual(here, y); };
        const DenseMatrix jac = finite_difference_jacobian(f, x);
        const double eta = 1e-6;
        const double lo = std::max(0.0, sigma - eta);
        const double hi = std::min(1.0, sigma + eta);
        const ComplexVector dsigma = (newton_residual(family(hi), x) - newton_residual(family(lo), x)) / (hi - lo);
        const ComplexVector tangent = jac.partialPivLu().solve(-dsigma);
        const ComplexVector predicted = x + step * tangent;

        const BetheSystem next = family(sigma + step);
        NewtonProblem problem;
        problem.dimension = static_cast<int>(x.size());
        problem.residual = [next](const ComplexVector& y) { return newton_residual(next, y); };
        NewtonResult r = guarded_newton(problem, predicted, corrector);
        const bool jumped = r.converged && (r.x - predicted).norm() > 0.5 * std::max(step * tangent.norm(), 1e-3);
        if (!r.converged || jumped) {
          if (++halvings > options.max_halvings) {
            path.failure = "step size underflow at sigma = " + std::to_string(sigma);
            break;
          }
          step *= 0.5;
          continue;
        }
        x = r.x;
        sigma = (1.0 - (sigma + step) < 1e-12) ? 1.0 : sigma + step;
        ++path.steps_taken;
        halvings = 0;
        step = std::min(2.0 * step, base_step);
      }
    } catch (const std::exception& e) {
      path.failure = e.what();
    }
    if (path.failure.empty()) {
      // final polish on the target system
      const BetheSystem target = family(1.0);
      NewtonProblem problem;
      problem.dimension = static_cast<int>(x.size());
      problem.residual = [target](const ComplexVector& y) { return newton_residual(target, y); };
      NewtonOptions tight = corrector;
      tight.tol = std::min(1e-14, options.tol);
      tight.max_iter = 10;
      const NewtonResult r = guarded_newton(problem, x, tight);
      if (r.residual < options.tol && (r.x - x).norm() < 1e-6 * std::max(1.0, x.norm())) x = r.x;
    }
    path.end = x;
    if (path.failure.empty()) {
      try {
        const ComplexVector f = residual(family(1.0), x);
        path.end_residual = f.size() == 0 ? 0.0 : f.cwiseAbs().maxCoeff();
        path.success = path.end_residual <= options.tol;
        if (!path.success) path.failure = "endpoint residual above tolerance";
      } catch (const std::exception& e) {
        path.failure = e.what();
      }
    }
    paths.push_back(std::move(path));
  }

  if (!starts.empty()) {
    const BetheSystem end_system = family(1.0);
    const double delta = 1e-7 * parameter_scale(end_system);
    for (std::size_t i = 0; i < paths.size(); ++i)
      for (std::size_t j = i + 1; j < paths.size(); ++j) {
        const auto a = canonical_solution(end_system, paths[i].end);
        const auto b = canonical_solution(end_system, paths[j].end);
        if (same_solution(a, b, delta)) paths[i].crossed = paths[j].crossed = true;
      }
  }
  return paths;
}

}  // namespace toroidal
