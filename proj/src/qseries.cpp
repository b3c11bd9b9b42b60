#include "toroidal/qseries.hpp"

#include "toroidal/partitions.hpp"
#include "toroidal/util.hpp"

#include <algorithm>
#include <mutex>
#include <numeric>

namespace toroidal {

namespace {

void fill_exponents(int nvars, int remaining, std::vector<int>& prefix, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(prefix.size()) == nvars - 1) {
    prefix.push_back(remaining);
    out.push_back(prefix);
    prefix.pop_back();
    return;
  }
  for (int e = remaining; e >= 0; --e) {
    prefix.push_back(e);
    fill_exponents(nvars, remaining - e, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

MonomialLayout::MonomialLayout(int nvars, int degree) : nvars_(nvars), degree_(degree) {
  if (nvars < 1) throw std::invalid_argument("series needs at least one variable");
  for (int d = 0; d <= degree; ++d) {
    std::vector<int> prefix;
    std::vector<std::vector<int>> level;
    fill_exponents(nvars, d, prefix, level);
    for (auto& e : level) {
      lookup_.emplace(e, exponents_.size());
      exponents_.push_back(std::move(e));
      degrees_.push_back(d);
    }
  }
}

std::shared_ptr<const MonomialLayout> MonomialLayout::get(int nvars, int degree) {
  static std::mutex mutex;
  static std::map<std::pair<int, int>, std::shared_ptr<const MonomialLayout>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{nvars, degree}];
  if (!slot) slot = std::make_shared<const MonomialLayout>(nvars, degree);
  return slot;
}

std::optional<std::size_t> MonomialLayout::index_of(const std::vector<int>& exponents) const {
  auto it = lookup_.find(exponents);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

const std::vector<std::string>& pq_variables() {
  static const std::vector<std::string> vars{"p", "q1", "q3"};
  return vars;
}

namespace {

constexpr int kP = 0;
constexpr int kQ1 = 1;
constexpr int kQ3 = 2;

int total_degree(const std::vector<int>& e) { return std::accumulate(e.begin(), e.end(), 0); }

RationalSeries one(int degree) { return RationalSeries::constant(pq_variables(), degree, 1); }

RationalSeries monomial(const std::vector<int>& e, int degree, Rational c = 1) {
  return RationalSeries::monomial(pq_variables(), degree, e, c);
}

std::vector<int> pq(int p, int q1, int q3) { return {p, q1, q3}; }

// 1 - z p^s
RationalSeries pochhammer_factor(const Monomial& z, int s, int degree) {
  auto e = z.exponents;
  e[kP] += s;
  return one(degree) - monomial(e, degree, z.coefficient);
}

// 1 / ((1 - q1^r)(1 - q3^r)) as a series
RationalSeries double_geometric(int r, int degree) {
  RationalSeries out(pq_variables(), degree);
  for (int i = 0; r * i <= degree; ++i)
    for (int j = 0; r * (i + j) <= degree; ++j) out.set_coefficient(pq(0, r * i, r * j), 1);
  return out;
}

// z_r(lambda) with q3 on rows and q1 on columns
RationalSeries z_r(int r, const Partition& lambda, int degree) {
  RationalSeries out = double_geometric(r, degree);
  for (const auto& node : nodes(lambda)) out -= monomial(pq(0, (node.col - 1) * r, (node.row - 1) * r), degree);
  return out;
}

}  // namespace

RationalSeries poch_finite(const Monomial& z, int m, int degree) {
  if (m < 0) throw std::invalid_argument("poch_finite: negative length");
  if (z.exponents.size() != 3) throw std::invalid_argument("poch_finite: monomial must be in (p, q1, q3)");
  RationalSeries out = one(degree);
  for (int s = 0; s < m; ++s) out *= pochhammer_factor(z, s, degree);
  return out;
}

RationalSeries poch_infinite(const Monomial& z, int degree) {
  if (z.exponents.size() != 3) throw std::invalid_argument("poch_infinite: monomial must be in (p, q1, q3)");
  const int dz = total_degree(z.exponents);
  if (dz < 1) throw std::domain_error("poch_infinite: monomial of total degree 0 does not truncate");
  RationalSeries out = one(degree);
  for (int s = 0; dz + s <= degree; ++s) out *= pochhammer_factor(z, s, degree);
  return out;
}

IdentityVerdict compare_series(std::string name, const RationalSeries& lhs, const RationalSeries& rhs) {
  IdentityVerdict verdict{std::move(name), true, std::nullopt};
  if (lhs.variables() != rhs.variables() || lhs.degree() != rhs.degree())
    throw std::invalid_argument("compare_series: incompatible series");
  for (std::size_t i = 0; i < lhs.term_capacity(); ++i) {
    if (lhs.coefficient_at(i) != rhs.coefficient_at(i)) {
      verdict.pass = false;
      verdict.first_mismatch = SeriesMismatch{lhs.layout().exponents(i), lhs.coefficient_at(i), rhs.coefficient_at(i)};
      break;
    }
  }
  return verdict;
}

RationalSeries prop_a1_lhs(int degree) {
  RationalSeries out(pq_variables(), degree);
  const RationalSeries base = double_geometric(1, degree);
  for (const auto& lambda : enumerate_partitions_up_to(degree)) {
    RationalSeries term = base;
    for (const auto& node : nodes(lambda)) term -= monomial(pq(0, node.row - 1, node.col - 1), degree);
    out += monomial(pq(lambda.size(), 0, 0), degree) * term;
  }
  return out;
}

RationalSeries prop_a1_rhs(int degree) {
  const RationalSeries num = poch_infinite({pq(1, 1, 1)}, degree);
  const RationalSeries den = poch_infinite({pq(0, 1, 0)}, degree) * poch_infinite({pq(0, 0, 1)}, degree);
  return num * den.inverse();
}

IdentityVerdict check_prop_A1(int degree) {
  if (degree < 1) throw std::invalid_argument("check_prop_A1: degree must be >= 1");
  return compare_series("prop_A1", prop_a1_lhs(degree), prop_a1_rhs(degree));
}

HookPoincare hook_poincare(int row, int col, int degree) {
  if (row < 1 || col < 1) throw std::invalid_argument("hook_poincare: node indices are 1-based");
  RationalSeries enumerated(pq_variables(), degree);
  for (const auto& lambda : enumerate_partitions_up_to(degree))
    if (!lambda.contains(row, col)) enumerated += monomial(pq(lambda.size(), 0, 0), degree);

  // Durfee-square resummation in 0-based coordinates of the excluded node
  const int a = row - 1;
  const int b = col - 1;
  RationalSeries closed(pq_variables(), degree);
  const Monomial p_mono{pq(1, 0, 0)};
  for (int s = 0; s <= std::min(a, b); ++s) {
    const int ea = a - s;
    const int eb = b - s;
    const RationalSeries den = poch_finite(p_mono, ea, degree) * poch_finite(p_mono, eb, degree);
    closed += monomial(pq(ea * eb, 0, 0), degree) * den.inverse();
  }
  const bool agree = enumerated == closed;
  return {std::move(enumerated), std::move(closed), agree};
}

namespace {

// sum_m q1^m (z3)_m / (p)_m
RationalSeries one_variable_lhs(const Monomial& z3, int degree) {
  RationalSeries out(pq_variables(), degree);
  const Monomial p_mono{pq(1, 0, 0)};
  for (int m = 0; m <= degree; ++m)
    out += monomial(pq(0, m, 0), degree) * poch_finite(z3, m, degree) * poch_finite(p_mono, m, degree).inverse();
  return out;
}

// (q1 z3)_inf / (q1)_inf
RationalSeries one_variable_rhs(const Monomial& z3, int degree) {
  Monomial num{z3.exponents, z3.coefficient};
  num.exponents[kQ1] += 1;
  return poch_infinite(num, degree) * poch_infinite({pq(0, 1, 0)}, degree).inverse();
}

}  // namespace

std::vector<IdentityVerdict> check_one_variable_identity(int degree, int s_max) {
  if (degree < 1) throw std::invalid_argument("check_one_variable_identity: degree must be >= 1");
  std::vector<IdentityVerdict> out;
  const Monomial q3{pq(0, 0, 1)};
  out.push_back(compare_series("one_variable", one_variable_lhs(q3, degree), one_variable_rhs(q3, degree)));
  for (int s = 1; s <= s_max; ++s) {
    const Monomial ps{pq(s, 0, 0)};
    out.push_back(compare_series("one_variable_q3=p^" + std::to_string(s), one_variable_lhs(ps, degree),
                                 one_variable_rhs(ps, degree)));
  }
  return out;
}

RationalSeries C_alpha(const Multiplicities& alpha, int degree) {
  for (int a : alpha)
    if (a < 0) throw std::invalid_argument("C_alpha: negative multiplicity");
  RationalSeries out(pq_variables(), degree);
  for (const auto& lambda : enumerate_partitions_up_to(degree)) {
    RationalSeries term = monomial(pq(lambda.size(), 0, 0), degree);
    for (std::size_t r = 0; r < alpha.size(); ++r)
      for (int k = 0; k < alpha[r]; ++k) term *= z_r(static_cast<int>(r) + 1, lambda, degree);
    out += term;
  }
  return out;
}

RationalSeries C_ell_product(int ell, int degree) {
  if (ell < 1) throw std::invalid_argument("C_ell_product: ell must be >= 1");
  const RationalSeries num = poch_infinite({pq(1, ell, ell)}, degree);
  const RationalSeries den = poch_infinite({pq(0, 0, ell)}, degree) * poch_infinite({pq(0, ell, 0)}, degree);
  return num * den.inverse();
}

IdentityVerdict check_C_ell_factorization(int ell, int degree) {
  Multiplicities alpha(ell, 0);
  alpha[ell - 1] = 1;
  return compare_series("C_ell_factorization_l=" + std::to_string(ell), C_alpha(alpha, degree),
                        C_ell_product(ell, degree));
}

namespace {

void collect_multiplicities(int remaining, int max_part, Multiplicities& current, std::vector<Multiplicities>& out) {
  if (remaining == 0) {
    out.push_back(current);
    return;
  }
  for (int r = std::min(remaining, max_part); r >= 1; --r) {
    ++current[r - 1];
    collect_multiplicities(remaining - r, r, current, out);
    --current[r - 1];
  }
}

}  // namespace

std::vector<Multiplicities> multiplicity_vectors(int ell) {
  std::vector<Multiplicities> out;
  Multiplicities current(std::max(ell, 0), 0);
  collect_multiplicities(ell, ell, current, out);
  return out;
}

std::complex<double> C_alpha_numeric(const Multiplicities& alpha, std::complex<double> p, std::complex<double> q1,
                                     std::complex<double> q3, int max_size) {
  std::complex<double> total = 0;
  for (const auto& lambda : enumerate_partitions_up_to(max_size)) {
    std::complex<double> term = ipow(p, lambda.size());
    for (std::size_t ri = 0; ri < alpha.size(); ++ri) {
      if (alpha[ri] == 0) continue;
      const int r = static_cast<int>(ri) + 1;
      std::complex<double> z = 1.0 / ((1.0 - ipow(q3, r)) * (1.0 - ipow(q1, r)));
      for (const auto& node : nodes(lambda)) z -= ipow(q3, (node.row - 1) * r) * ipow(q1, (node.col - 1) * r);
      term *= ipow(z, alpha[ri]);
    }
    total += term;
  }
  return total;
}

}  // namespace toroidal
