#include "toroidal/spectrum.hpp"

#include "toroidal/qseries.hpp"
#include "toroidal/util.hpp"

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <stdexcept>

namespace toroidal {

namespace {

// Truncated power series in x = 1/u.
using Series = std::vector<cplx>;

Series one(int len) {
  Series s(len, 0.0);
  s[0] = 1.0;
  return s;
}

Series mul(const Series& a, const Series& b) {
  Series out(a.size(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0.0) continue;
    for (std::size_t j = 0; i + j < a.size(); ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

Series div(const Series& a, const Series& b) {
  Series out(a.size(), 0.0);
  for (std::size_t n = 0; n < a.size(); ++n) {
    cplx acc = a[n];
    for (std::size_t k = 1; k <= n; ++k) acc -= b[k] * out[n - k];
    out[n] = acc / b[0];
  }
  return out;
}

// exp of a series with zero constant term
Series exp_series(const Series& a) {
  const std::size_t len = a.size();
  Series out(len, 0.0);
  out[0] = 1.0;
  for (std::size_t n = 1; n < len; ++n) {
    cplx acc = 0.0;
    for (std::size_t k = 1; k <= n; ++k) acc += static_cast<double>(k) * a[k] * out[n - k];
    out[n] = acc / static_cast<double>(n);
  }
  return out;
}

// prod_j (1 - c z_j x)
Series linear_product(const std::vector<cplx>& zs, cplx c, int len) {
  Series out = one(len);
  for (auto z : zs) {
    for (int n = len - 1; n >= 1; --n) out[n] -= c * z * out[n - 1];
  }
  return out;
}

// Q(k u) with Q(u) = prod (1 - t/u), evaluated at 1/u = scale x
Series q_poly(const std::vector<cplx>& roots, cplx k, cplx scale, int len) {
  return linear_product(roots, scale / k, len);
}

// Sum over partitions with |lambda| <= max_size of prod_nodes factor(row, col), bucketed by size.
std::vector<Series> partition_sum_by_size(int max_size, int len, const std::function<Series(int, int)>& factor) {
  std::vector<Series> acc(max_size + 1, Series(len, 0.0));
  acc[0] = one(len);
  std::map<std::pair<int, int>, Series> cache;
  auto node = [&](int a, int b) -> const Series& {
    auto it = cache.find({a, b});
    if (it == cache.end()) it = cache.emplace(std::pair{a, b}, factor(a, b)).first;
    return it->second;
  };
  std::function<void(int, int, int, const Series&)> dfs = [&](int row, int max_len, int size, const Series& prefix) {
    Series current = prefix;
    for (int b = 1; b <= std::min(max_len, max_size - size); ++b) {
      current = mul(current, node(row, b));
      for (int i = 0; i < len; ++i) acc[size + b][i] += current[i];
      dfs(row + 1, b, size + b, current);
    }
  };
  dfs(1, max_size, 0, one(len));
  return acc;
}

void finish_sum(const std::vector<Series>& buckets, int cutoff, Series& total, double& tail) {
  const int len = static_cast<int>(buckets[0].size());
  total.assign(len, 0.0);
  Series extra(len, 0.0);
  for (int n = 0; n < static_cast<int>(buckets.size()); ++n)
    for (int i = 0; i < len; ++i) (n <= cutoff ? total : extra)[i] += buckets[n][i];
  tail = 0.0;
  for (auto e : extra) tail = std::max(tail, std::abs(e));
}

void check_lmax(int lmax) {
  if (lmax < 0) throw std::invalid_argument("lmax must be non-negative");
}

}  // namespace

int partition_sum_cutoff(double abs_p) {
  if (!(abs_p < 1.0)) throw std::domain_error("partition sum diverges for |p| >= 1");
  if (abs_p == 0.0) return 0;
  const int L = static_cast<int>(std::floor(std::log(1e-14) / std::log(abs_p))) + 1;
  if (L > 60) throw std::domain_error("|p| too close to 1 for the partition-sum truncation");
  return std::max(L, 0);
}

EigenvalueSeries t_series_direct(const std::vector<cplx>& roots, cplx q1, cplx q3, cplx p, const std::vector<cplx>& v,
                                 int lmax) {
  check_lmax(lmax);
  const int len = lmax + 1;
  const int cutoff = partition_sum_cutoff(std::abs(p));
  const cplx q2 = 1.0 / (q1 * q3);
  const cplx qs[3] = {q1, q2, q3};

  auto a_at = [&](cplx scale) {
    Series num = linear_product(v, scale, len);
    Series den = linear_product(v, scale / q2, len);
    for (auto q : qs) {
      num = mul(num, q_poly(roots, q, scale, len));
      den = mul(den, q_poly(roots, 1.0 / q, scale, len));
    }
    Series a = div(num, den);
    for (auto& c : a) c *= p;
    return a;
  };
  const auto buckets = partition_sum_by_size(cutoff + 2, len, [&](int row, int col) {
    return a_at(ipow(q3, row - 1) * ipow(q1, col - 1));
  });

  EigenvalueSeries out;
  out.truncation = cutoff;
  Series sum;
  finish_sum(buckets, cutoff, sum, out.tail_estimate);

  Series log_phi(len, 0.0);
  for (int r = 1; r < len; ++r) {
    cplx vr = 0.0;
    for (auto vj : v) vr += ipow(vj, r);
    log_phi[r] = (1.0 - ipow(q2, -r)) / ((1.0 - ipow(q1, r)) * (1.0 - ipow(q3, r))) * vr / static_cast<double>(r);
  }
  const Series ratio = div(q_poly(roots, 1.0 / q2, 1.0, len), q_poly(roots, 1.0, 1.0, len));
  out.coefficients = mul(mul(exp_series(log_phi), ratio), sum);
  return out;
}

cplx w_power_sum(const std::vector<cplx>& roots, cplx q1, cplx q3, const std::vector<cplx>& v, int r) {
  const cplx q2 = 1.0 / (q1 * q3);
  const cplx kappa = (1.0 - ipow(q1, r)) * (1.0 - ipow(q2, r)) * (1.0 - ipow(q3, r));
  cplx tr = 0.0, vr = 0.0;
  for (auto t : roots) tr += ipow(t, r);
  for (auto x : v) vr += ipow(x, r);
  const cplx q31 = ipow(q3 * q1, r);
  return kappa / static_cast<double>(r) * (tr - q31 / ((1.0 - ipow(q3, r)) * (1.0 - ipow(q1, r))) * vr);
}

EigenvalueSeries t_series_cor52(const std::vector<cplx>& roots, cplx q1, cplx q3, cplx p, const std::vector<cplx>& v,
                                int lmax) {
  check_lmax(lmax);
  const int cutoff = partition_sum_cutoff(std::abs(p));
  std::vector<cplx> w(lmax + 1, 0.0);
  for (int r = 1; r <= lmax; ++r) w[r] = w_power_sum(roots, q1, q3, v, r);

  EigenvalueSeries out;
  out.truncation = cutoff;
  for (int ell = 0; ell <= lmax; ++ell) {
    cplx coefficient = 0.0;
    double tail = 0.0;
    for (const auto& alpha : multiplicity_vectors(ell)) {
      cplx weight = 1.0;
      for (std::size_t ri = 0; ri < alpha.size(); ++ri) {
        if (alpha[ri] == 0) continue;
        weight *= ipow(w[ri + 1], alpha[ri]) / std::tgamma(alpha[ri] + 1.0);
      }
      const cplx c = C_alpha_numeric(alpha, p, q1, q3, cutoff);
      coefficient += c * weight;
      tail += std::abs((C_alpha_numeric(alpha, p, q1, q3, cutoff + 2) - c) * weight);
    }
    out.coefficients.push_back(coefficient);
    out.tail_estimate = std::max(out.tail_estimate, tail);
  }
  return out;
}

EigenvalueSeries t2_series(const std::vector<cplx>& s, const std::vector<cplx>& t, cplx q1, cplx q3,
                           const std::vector<cplx>& v0, const std::vector<cplx>& v1, cplx p0, cplx p1, int nu,
                           int lmax) {
  check_lmax(lmax);
  if (nu != 0 && nu != 1) throw std::invalid_argument("colour must be 0 or 1");
  const int len = lmax + 1;
  const int cutoff = partition_sum_cutoff(std::max(std::abs(p0), std::abs(p1)));
  const cplx q2 = 1.0 / (q1 * q3);
  const std::vector<cplx>* Q[2] = {&s, &t};
  const std::vector<cplx>* V[2] = {&v0, &v1};
  const cplx P[2] = {p0, p1};

  // a_c(u) at 1/u = scale x
  auto a_at = [&](int c, cplx scale) {
    const auto& own = *Q[c];
    const auto& other = *Q[1 - c];
    Series num = mul(linear_product(*V[c], scale, len), q_poly(own, q2, scale, len));
    Series den = mul(linear_product(*V[c], scale / q2, len), q_poly(own, 1.0 / q2, scale, len));
    for (auto q : {q3, q1}) {
      num = mul(num, q_poly(other, q, scale, len));
      den = mul(den, q_poly(other, 1.0 / q, scale, len));
    }
    Series a = div(num, den);
    for (auto& x : a) x *= P[c];
    return a;
  };
  const auto buckets = partition_sum_by_size(cutoff + 2, len, [&](int row, int col) {
    const int colour = (((row - col + nu) % 2) + 2) % 2;
    return a_at(colour, ipow(q3, row - 1) * ipow(q1, col - 1));
  });

  EigenvalueSeries out;
  out.truncation = cutoff;
  out.conjectural = true;
  Series sum;
  finish_sum(buckets, cutoff, sum, out.tail_estimate);

  Series log_phi(len, 0.0);
  for (int r = 1; r < len; ++r) {
    const cplx den = (1.0 - ipow(q1, 2 * r)) * (1.0 - ipow(q3, 2 * r));
    const cplx same = (1.0 - ipow(q2, -r)) * (1.0 + ipow(q2, -r)) / den;
    const cplx cross = (1.0 - ipow(q2, -r)) * (ipow(q1, r) + ipow(q3, r)) / den;
    cplx own_sum = 0.0, other_sum = 0.0;
    for (auto x : *V[nu]) own_sum += ipow(x, r);
    for (auto x : *V[1 - nu]) other_sum += ipow(x, r);
    log_phi[r] = (same * own_sum + cross * other_sum) / static_cast<double>(r);
  }
  const Series ratio = div(q_poly(*Q[nu], 1.0 / q2, 1.0, len), q_poly(*Q[nu], 1.0, 1.0, len));
  out.coefficients = mul(mul(exp_series(log_phi), ratio), sum);
  return out;
}

cplx ilw_eigenvalue_from_roots(const std::vector<cplx>& roots, cplx beta) {
  cplx total = 0.0;
  for (auto t : roots) total += t;
  return (1.0 - beta) / std::sqrt(beta) * total;
}

namespace {

cplx checked_inverse(cplx x) {
  if (std::abs(x) < 1e-300) throw PoleError("evaluation at a pole");
  return 1.0 / x;
}

}  // namespace

GammaReport gaudin_gamma(const AffineGaudinSystem& system, const std::vector<cplx>& s, const std::vector<cplx>& t,
                         double tol) {
  GammaReport report;
  for (std::size_t i = 0; i < s.size(); ++i) {
    cplx g = (system.pihat - 1.0) * checked_inverse(s[i]);
    for (std::size_t k = 0; k < s.size(); ++k)
      if (k != i) g += 2.0 * checked_inverse(s[i] - s[k]);
    for (auto tk : t) g -= 2.0 * checked_inverse(s[i] - tk);
    const cplx alt = checked_inverse(s[i] - system.v) + (system.r - 3.0) * checked_inverse(s[i]);
    report.gamma.push_back(g);
    report.alternative.push_back(alt);
    report.max_deviation = std::max(report.max_deviation, std::abs(g - alt));
  }
  report.pass = report.max_deviation <= tol;
  return report;
}

OperData make_oper(const AffineGaudinSystem& system, const std::vector<cplx>& s, const std::vector<cplx>& gamma) {
  if (s.size() != gamma.size()) throw std::invalid_argument("one residue per point required");
  return {(system.pihat - 1.0) / 2.0, system.v, s, gamma};
}

namespace {

std::pair<cplx, cplx> indicial_roots(cplx double_pole) {
  // rho (rho - 1) + double_pole = 0
  const cplx disc = std::sqrt(1.0 - 4.0 * double_pole);
  cplx a = (1.0 - disc) / 2.0, b = (1.0 + disc) / 2.0;
  if (canonical_less(b, a)) std::swap(a, b);
  return {a, b};
}

}  // namespace

OperReport oper_apparent_singularity_check(const OperData& oper, double tol) {
  const auto& pts = oper.points;
  if (pts.size() != oper.residues.size()) throw std::invalid_argument("one residue per point required");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    if (std::abs(pts[i]) < 1e-300) throw std::invalid_argument("singular point at the origin");
    for (std::size_t j = i + 1; j < pts.size(); ++j)
      if (pts[i] == pts[j]) throw std::invalid_argument("coincident singular points");
  }
  const cplx ll = oper.l * (oper.l + 1.0);
  cplx gamma_total = 0.0;
  for (auto g : oper.residues) gamma_total += g;

  OperReport report;
  std::tie(report.origin_exponent_low, report.origin_exponent_high) = indicial_roots(-ll);

  for (std::size_t i = 0; i < pts.size(); ++i) {
    const cplx z = pts[i];
    // Taylor data u0 + u1 w of the potential minus its singular part at z
    cplx u0 = -ll / (z * z) + gamma_total / z;
    cplx u1 = 2.0 * ll / (z * z * z) - gamma_total / (z * z);
    for (std::size_t j = 0; j < pts.size(); ++j) {
      if (j == i) continue;
      const cplx d = z - pts[j];
      u0 -= 2.0 / (d * d) + oper.residues[j] / d;
      u1 += 4.0 / (d * d * d) + oper.residues[j] / (d * d);
    }
    const cplx um1 = -oper.residues[i];
    SingularPointVerdict verdict;
    verdict.z = z;
    std::tie(verdict.exponent_low, verdict.exponent_high) = indicial_roots(-2.0);
    const cplx c1 = um1 / 2.0;
    const cplx c2 = (um1 * c1 + u0) / 2.0;
    verdict.obstruction = um1 * c2 + u0 * c1 + u1;
    const bool exponents_ok =
        std::abs(verdict.exponent_low + 1.0) < 1e-12 && std::abs(verdict.exponent_high - 2.0) < 1e-12;
    verdict.pass = exponents_ok && std::abs(verdict.obstruction) <= tol;
    report.pass = report.pass && verdict.pass;
    report.points.push_back(verdict);
  }
  return report;
}

cplx gamma_function(cplx z) {
  const double nearest = std::round(z.real());
  if (nearest <= 0.0 && std::abs(z - nearest) < 1e-12) throw std::domain_error("Gamma pole at a non-positive integer");
  if (z.real() < 0.5) return std::numbers::pi / (std::sin(std::numbers::pi * z) * gamma_function(1.0 - z));
  static const double g = 7.0;
  static const double coef[] = {0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
                                771.32342877765313,   -176.61502916214059,   12.507343278686905,
                                -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  z -= 1.0;
  cplx x = coef[0];
  for (int i = 1; i < 9; ++i) x += coef[i] / (z + static_cast<double>(i));
  const cplx t = z + g + 0.5;
  return std::sqrt(2.0 * std::numbers::pi) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

cplx momentum_from_pihat(cplx beta, cplx pihat) {
  const cplx c = 13.0 - 6.0 * (beta + 1.0 / beta);
  return std::sqrt((c - 1.0) / 24.0 * pihat * pihat);
}

R1Report r1_report(const std::vector<cplx>& s, const std::vector<cplx>& t, cplx beta, cplx P, cplx v) {
  if (s.size() != t.size()) throw std::invalid_argument("r1 needs equal root counts");
  if (v == 0.0) throw std::invalid_argument("v must be nonzero");
  R1Report report;
  report.g1_vacuum = 4.0 * std::numbers::pi * std::numbers::pi * gamma_function(1.0 - 2.0 * beta) /
                     (gamma_function(1.0 - beta - 2.0 * P) * gamma_function(1.0 - beta + 2.0 * P));
  cplx diff = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) diff += s[i] - t[i];
  report.r1 = report.g1_vacuum * (1.0 - (1.0 / v) * (2.0 * (1.0 - 2.0 * beta) / (1.0 - beta + 2.0 * P)) * diff);
  return report;
}

}  // namespace toroidal
