#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <complex>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace toroidal {

using Rational = boost::multiprecision::cpp_rational;

/// Exponent vectors of total degree <= D in a fixed number of variables,
/// ordered by total degree and then lexicographically (descending in the
/// first variable).
class MonomialLayout {
 public:
  static std::shared_ptr<const MonomialLayout> get(int nvars, int degree);

  int nvars() const { return nvars_; }
  int degree() const { return degree_; }
  std::size_t size() const { return exponents_.size(); }
  const std::vector<int>& exponents(std::size_t index) const { return exponents_[index]; }
  int total_degree(std::size_t index) const { return degrees_[index]; }
  /// Index of an exponent vector, or nullopt when its degree exceeds D.
  std::optional<std::size_t> index_of(const std::vector<int>& exponents) const;

  MonomialLayout(int nvars, int degree);

 private:
  int nvars_;
  int degree_;
  std::vector<std::vector<int>> exponents_;
  std::vector<int> degrees_;
  std::map<std::vector<int>, std::size_t> lookup_;
};

/// Multivariate formal power series truncated at a fixed total degree.
template <typename Scalar>
class TruncatedMultiSeries {
 public:
  TruncatedMultiSeries(std::vector<std::string> variables, int degree)
      : variables_(std::move(variables)),
        layout_(MonomialLayout::get(static_cast<int>(variables_.size()), degree)),
        coeffs_(layout_->size(), Scalar(0)) {
    if (degree < 0) throw std::invalid_argument("truncation degree must be non-negative");
  }

  static TruncatedMultiSeries constant(std::vector<std::string> variables, int degree, Scalar value) {
    TruncatedMultiSeries s(std::move(variables), degree);
    s.coeffs_[0] = value;
    return s;
  }

  /// coefficient * x^exponents; silently zero when the monomial is above the truncation.
  static TruncatedMultiSeries monomial(std::vector<std::string> variables, int degree,
                                       const std::vector<int>& exponents, Scalar coefficient = Scalar(1)) {
    TruncatedMultiSeries s(std::move(variables), degree);
    if (auto idx = s.layout_->index_of(exponents)) s.coeffs_[*idx] = coefficient;
    return s;
  }

  const std::vector<std::string>& variables() const { return variables_; }
  int degree() const { return layout_->degree(); }
  const MonomialLayout& layout() const { return *layout_; }
  std::size_t term_capacity() const { return coeffs_.size(); }
  const Scalar& coefficient_at(std::size_t index) const { return coeffs_[index]; }

  Scalar coefficient(const std::vector<int>& exponents) const {
    auto idx = layout_->index_of(exponents);
    return idx ? coeffs_[*idx] : Scalar(0);
  }
  void set_coefficient(const std::vector<int>& exponents, Scalar value) {
    auto idx = layout_->index_of(exponents);
    if (!idx) throw std::out_of_range("exponent vector above truncation degree");
    coeffs_[*idx] = std::move(value);
  }

  TruncatedMultiSeries& operator+=(const TruncatedMultiSeries& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
    return *this;
  }
  TruncatedMultiSeries& operator-=(const TruncatedMultiSeries& other) {
    require_compatible(other);
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
    return *this;
  }
  TruncatedMultiSeries& operator*=(const Scalar& factor) {
    for (auto& c : coeffs_) c *= factor;
    return *this;
  }
  TruncatedMultiSeries& operator*=(const TruncatedMultiSeries& other) {
    *this = *this * other;
    return *this;
  }

  friend TruncatedMultiSeries operator+(TruncatedMultiSeries a, const TruncatedMultiSeries& b) { return a += b; }
  friend TruncatedMultiSeries operator-(TruncatedMultiSeries a, const TruncatedMultiSeries& b) { return a -= b; }
  friend TruncatedMultiSeries operator*(TruncatedMultiSeries a, const Scalar& f) { return a *= f; }
  friend TruncatedMultiSeries operator-(TruncatedMultiSeries a) { return a *= Scalar(-1); }

  friend TruncatedMultiSeries operator*(const TruncatedMultiSeries& a, const TruncatedMultiSeries& b) {
    a.require_compatible(b);
    const auto& layout = *a.layout_;
    const int degree = layout.degree();
    TruncatedMultiSeries out(a.variables_, degree);
    std::vector<int> sum(layout.nvars());
    for (std::size_t i = 0; i < layout.size(); ++i) {
      if (a.coeffs_[i] == Scalar(0)) continue;
      const int di = layout.total_degree(i);
      for (std::size_t j = 0; j < layout.size(); ++j) {
        // layout is sorted by degree, so the tail is above truncation
        if (di + layout.total_degree(j) > degree) break;
        if (b.coeffs_[j] == Scalar(0)) continue;
        const auto& ei = layout.exponents(i);
        const auto& ej = layout.exponents(j);
        for (int v = 0; v < layout.nvars(); ++v) sum[v] = ei[v] + ej[v];
        out.coeffs_[*layout.index_of(sum)] += a.coeffs_[i] * b.coeffs_[j];
      }
    }
    return out;
  }

  /// Multiplicative inverse exact through the truncation degree.
  TruncatedMultiSeries inverse() const {
    if (coeffs_[0] == Scalar(0)) throw std::domain_error("series with zero constant term is not invertible");
    // s = c0 (1 - x) with x of positive degree; 1/s = (1/c0) sum_k x^k, x^k vanishes past degree D
    const Scalar c0 = coeffs_[0];
    TruncatedMultiSeries x = *this * (Scalar(1) / c0);
    x.coeffs_[0] = Scalar(0);
    x *= Scalar(-1);
    TruncatedMultiSeries result = constant(variables_, degree(), Scalar(1));
    TruncatedMultiSeries power = result;
    for (int k = 1; k <= degree(); ++k) {
      power = power * x;
      result += power;
    }
    return result * (Scalar(1) / c0);
  }

  /// Substitute variable `from` -> (variable `to`)^power, keeping exact coefficients through D.
  TruncatedMultiSeries substitute_power(const std::string& from, const std::string& to, int power) const {
    const int f = variable_index(from);
    const int t = variable_index(to);
    if (power < 1) throw std::invalid_argument("substitution power must be positive");
    TruncatedMultiSeries out(variables_, degree());
    for (std::size_t i = 0; i < coeffs_.size(); ++i) {
      if (coeffs_[i] == Scalar(0)) continue;
      auto e = layout_->exponents(i);
      e[t] += power * e[f];
      e[f] = 0;
      if (auto idx = layout_->index_of(e)) out.coeffs_[*idx] += coeffs_[i];
    }
    return out;
  }

  /// Set a variable to zero.
  TruncatedMultiSeries restrict_zero(const std::string& name) const {
    const int v = variable_index(name);
    TruncatedMultiSeries out = *this;
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
      if (layout_->exponents(i)[v] != 0) out.coeffs_[i] = Scalar(0);
    return out;
  }

  int variable_index(const std::string& name) const {
    for (std::size_t i = 0; i < variables_.size(); ++i)
      if (variables_[i] == name) return static_cast<int>(i);
    throw std::invalid_argument("unknown series variable: " + name);
  }

  bool operator==(const TruncatedMultiSeries& other) const {
    return variables_ == other.variables_ && degree() == other.degree() && coeffs_ == other.coeffs_;
  }

 private:
  void require_compatible(const TruncatedMultiSeries& other) const {
    if (variables_ != other.variables_ || degree() != other.degree())
      throw std::invalid_argument("series with different variables or truncation degree");
  }

  std::vector<std::string> variables_;
  std::shared_ptr<const MonomialLayout> layout_;
  std::vector<Scalar> coeffs_;
};

using RationalSeries = TruncatedMultiSeries<Rational>;

/// The fixed variable set (p, q1, q3) used by all identity checks.
const std::vector<std::string>& pq_variables();

/// Exponent vector in (p, q1, q3) order.
struct Monomial {
  std::vector<int> exponents;
  Rational coefficient = 1;
};

/// prod_{s=0}^{m-1} (1 - z p^s).
RationalSeries poch_finite(const Monomial& z, int m, int degree);

/// prod_{s>=0} (1 - z p^s); throws std::domain_error when z has total degree 0.
RationalSeries poch_infinite(const Monomial& z, int degree);

struct SeriesMismatch {
  std::vector<int> exponents;
  Rational lhs;
  Rational rhs;
};

struct IdentityVerdict {
  std::string name;
  bool pass = true;
  std::optional<SeriesMismatch> first_mismatch;
};

/// Compare two series; the mismatch is the first differing coefficient in layout order.
IdentityVerdict compare_series(std::string name, const RationalSeries& lhs, const RationalSeries& rhs);

/// sum_lambda p^|lambda| (1/((1-q1)(1-q3)) - sum_{(i,j) in lambda} q1^(i-1) q3^(j-1)).
RationalSeries prop_a1_lhs(int degree);
/// (p q1 q3)_inf / ((q1)_inf (q3)_inf).
RationalSeries prop_a1_rhs(int degree);
IdentityVerdict check_prop_A1(int degree);

struct HookPoincare {
  RationalSeries enumerated;
  RationalSeries closed_form;
  bool agree;
};
/// Generating function of partitions avoiding the node (row, col), 1-based.
HookPoincare hook_poincare(int row, int col, int degree);

/// sum_m q1^m (q3)_m/(p)_m == (q1 q3)_inf/(q1)_inf, trivariate and at q3 = p^s for s = 1..s_max.
std::vector<IdentityVerdict> check_one_variable_identity(int degree, int s_max);

/// Exponent multiplicities alpha_r for r = 1, 2, ...; alpha[0] is alpha_1.
using Multiplicities = std::vector<int>;

/// sum_{|lambda| <= D} p^|lambda| prod_r z_r(lambda)^alpha_r.
RationalSeries C_alpha(const Multiplicities& alpha, int degree);

/// (p q3^l q1^l; p)_inf / ((q3^l; p)_inf (q1^l; p)_inf).
RationalSeries C_ell_product(int ell, int degree);
IdentityVerdict check_C_ell_factorization(int ell, int degree);

/// All multiplicity vectors with sum_r r alpha_r = ell.
std::vector<Multiplicities> multiplicity_vectors(int ell);

/// Numeric C_alpha by the same partition sum at complex (p, q1, q3), |lambda| <= max_size.
std::complex<double> C_alpha_numeric(const Multiplicities& alpha, std::complex<double> p, std::complex<double> q1,
                                     std::complex<double> q3, int max_size);

}  // namespace toroidal
