#include "toroidal/elliptic.hpp"

#include "toroidal/ilw.hpp"
#include "toroidal/util.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace toroidal {

EllipticParams::EllipticParams(cplx q1, cplx q3, cplx p, cplx u1, cplx u2)
    : q1_(q1), q3_(q3), p_(p), u1_(u1), u2_(u2) {
  if (q1 == 0.0 || q3 == 0.0) throw std::invalid_argument("EllipticParams: q1, q3 must be nonzero");
  if (u1 == 0.0 || u2 == 0.0) throw std::invalid_argument("EllipticParams: u1, u2 must be nonzero");
  if (!(std::abs(p) < 1.0 - 1e-6)) throw std::invalid_argument("EllipticParams: |p| must be below 1 - 1e-6");
}

EllipticParams EllipticParams::from_twist(cplx q1, cplx q3, cplx pbar, cplx u1, cplx u2) {
  const cplx q2 = 1.0 / (q1 * q3);
  return EllipticParams(q1, q3, pbar / q2, u1, u2);
}

cplx pairing(const EllipticParams& params, int i, int j, int m) {
  if (m < 1) throw std::invalid_argument("pairing: mode must be positive");
  if (i < 1 || i > 2 || j < 1 || j > 2) throw std::invalid_argument("pairing: families are 1 and 2");
  const cplx pm = ipow(params.p(), m);
  if (std::abs(1.0 - pm) < 1e-12) throw std::domain_error("pairing: pole of the dressing at p^m = 1");
  const double inv_m = 1.0 / m;
  const cplx k13 = (1.0 - ipow(params.q1(), m)) * (1.0 - ipow(params.q3(), m));
  if (i == j) return -inv_m * (1.0 - pm * ipow(params.q2(), m)) / (1.0 - pm) * k13;
  const cplx kappa = k13 * (1.0 - ipow(params.q2(), m));
  return -inv_m / (1.0 - pm) * kappa * (i == 1 ? pm : cplx(1.0));
}

OscillatorSpec boson_dictionary(const EllipticParams& params) {
  return {2, [params](int i, int j, int m) { return pairing(params, i + 1, j + 1, m); }};
}

DenseMatrix GradedOperator::assembled() const {
  Eigen::Index dim = 0;
  for (const auto& b : blocks) dim += b.rows();
  DenseMatrix out = DenseMatrix::Zero(dim, dim);
  Eigen::Index offset = 0;
  for (const auto& b : blocks) {
    out.block(offset, offset, b.rows(), b.cols()) = b;
    offset += b.rows();
  }
  return out;
}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

// 1 / prod_m (multiplicity of m)!
double symmetry_factor(const Partition& mu) {
  double f = 1.0;
  const auto& parts = mu.parts();
  for (std::size_t i = 0; i < parts.size();) {
    std::size_t j = i;
    while (j < parts.size() && parts[j] == parts[i]) ++j;
    f *= factorial(static_cast<int>(j - i));
    i = j;
  }
  return 1.0 / f;
}

class EllipticBlockBuilder {
 public:
  EllipticBlockBuilder(const EllipticParams& params, int level) : params_(params), spec_(boson_dictionary(params)) {
    for (int k = 0; k <= level; ++k) bases_.emplace_back(false, 2, k);
  }

  // z^{+-d} coefficient of the normal-ordered exponential for one family, mapped between levels
  DenseMatrix annihilation_part(int family, int d, int from) const {
    const int dim_to = bases_[from - d].dimension();
    const int dim_from = bases_[from].dimension();
    DenseMatrix total = DenseMatrix::Zero(dim_to, dim_from);
    for (const auto& mu : enumerate_partitions(d)) {
      DenseMatrix prod = DenseMatrix::Identity(dim_from, dim_from);
      int current = from;
      for (int m : mu.parts()) {
        prod = heisenberg_action(spec_, family, m, bases_[current], bases_[current - m]) * prod;
        current -= m;
      }
      total += symmetry_factor(mu) * prod;
    }
    return total;
  }

  DenseMatrix creation_part(int family, int d, int to) const {
    const int from = to - d;
    const int dim_from = bases_[from].dimension();
    DenseMatrix total = DenseMatrix::Zero(bases_[to].dimension(), dim_from);
    for (const auto& mu : enumerate_partitions(d)) {
      DenseMatrix prod = DenseMatrix::Identity(dim_from, dim_from);
      int current = from;
      for (int m : mu.parts()) {
        prod = heisenberg_action(spec_, family, -m, bases_[current], bases_[current + m]) * prod;
        current += m;
      }
      total += symmetry_factor(mu) * prod;
    }
    return total;
  }

  DenseMatrix block(int level) const {
    const int dim = bases_[level].dimension();
    DenseMatrix out = DenseMatrix::Zero(dim, dim);
    const cplx qinv = 1.0 / params_.q();
    const cplx weights[2] = {qinv * params_.u1(), qinv * params_.u2()};
    for (int family = 0; family < 2; ++family) {
      DenseMatrix ct = DenseMatrix::Zero(dim, dim);
      for (int d = 0; d <= level; ++d)
        ct += creation_part(family, d, level) * annihilation_part(family, d, level);
      out += weights[family] * ct;
    }
    return out;
  }

 private:
  EllipticParams params_;
  OscillatorSpec spec_;
  std::vector<LevelBasis> bases_;
};

}  // namespace

DenseMatrix elliptic_I1_block(const EllipticParams& params, int level) {
  if (level < 0) throw std::invalid_argument("elliptic_I1_block: negative level");
  return EllipticBlockBuilder(params, level).block(level);
}

GradedOperator build_elliptic_I1(const EllipticParams& params, int level) {
  if (level < 0) throw std::invalid_argument("build_elliptic_I1: negative level");
  EllipticBlockBuilder builder(params, level);
  GradedOperator op;
  for (int k = 0; k <= level; ++k) op.blocks.push_back(builder.block(k));
  return op;
}

cplx elliptic_eigenvalue_from_roots(const EllipticParams& params, const std::vector<cplx>& roots) {
  cplx sum = 0;
  for (auto t : roots) sum += t;
  return -params.q() * (1.0 - params.q1()) * (1.0 - params.q3()) * sum + (params.u1() + params.u2()) / params.q();
}

namespace {

std::vector<cplx> mapped(const std::vector<cplx>& values, const Calibration& cal) {
  std::vector<cplx> out;
  for (auto v : values) out.push_back(cal.scale * v + cal.offset);
  return out;
}

// Fit operator ~ scale * reference + offset over levels 0 and 1; level-1 pairing chosen by least residual.
Calibration calibrate_levels01(const std::vector<cplx>& ref0, const std::vector<cplx>& op0,
                               const std::vector<cplx>& ref1, const std::vector<cplx>& op1) {
  Calibration cal;
  if (ref0.size() != 1 || op0.size() != 1) return cal;
  if (ref1.size() != op1.size() || ref1.empty()) {
    cal.offset = op0[0] - ref0[0];
    return cal;
  }
  std::vector<cplx> sorted_op1 = op1;
  canonical_sort(sorted_op1);
  std::vector<cplx> perm = ref1;
  std::sort(perm.begin(), perm.end(), canonical_less);
  double best = std::numeric_limits<double>::infinity();
  do {
    std::vector<cplx> a{ref0[0]};
    std::vector<cplx> b{op0[0]};
    a.insert(a.end(), perm.begin(), perm.end());
    b.insert(b.end(), sorted_op1.begin(), sorted_op1.end());
    const AffineFit fit = affine_fit_paired(a, b);
    if (fit.rms_residual < best) {
      best = fit.rms_residual;
      cal = {fit.scale, fit.offset};
    }
  } while (std::next_permutation(perm.begin(), perm.end(), canonical_less));
  return cal;
}

}  // namespace

EllipticBetheReport elliptic_spectrum_vs_bethe(const EllipticParams& params, int level,
                                               const std::map<int, std::vector<std::vector<cplx>>>& roots_by_level) {
  EllipticBetheReport report;
  report.degenerate_twist = std::abs(params.p()) < 1e-8;
  const GradedOperator op = build_elliptic_I1(params, level);

  std::vector<std::vector<cplx>> op_values, bethe_values;
  for (int k = 0; k <= level; ++k) {
    op_values.push_back(eigenvalues(op.blocks[k]));
    std::vector<cplx> values;
    if (auto it = roots_by_level.find(k); it != roots_by_level.end())
      for (const auto& roots : it->second) values.push_back(elliptic_eigenvalue_from_roots(params, roots));
    bethe_values.push_back(std::move(values));
  }

  if (level >= 1)
    report.calibration = calibrate_levels01(bethe_values[0], op_values[0], bethe_values[1], op_values[1]);
  else if (!bethe_values[0].empty())
    report.calibration.offset = op_values[0][0] - bethe_values[0][0];

  for (int k = 0; k <= level; ++k) {
    LevelComparison cmp;
    cmp.level = k;
    cmp.operator_count = static_cast<int>(op_values[k].size());
    cmp.bethe_count = static_cast<int>(bethe_values[k].size());
    cmp.counts_match = cmp.operator_count == cmp.bethe_count;
    if (cmp.counts_match) {
      const auto res = compare_multisets(mapped(bethe_values[k], report.calibration), op_values[k]);
      cmp.max_deviation = res.max_deviation;
    } else {
      cmp.max_deviation = std::numeric_limits<double>::infinity();
    }
    report.max_deviation = std::max(report.max_deviation, cmp.max_deviation);
    report.levels.push_back(cmp);
  }
  return report;
}

EllipticParams ilw_scaling_params(cplx r, cplx tau, cplx pihat, double h) {
  const cplx eps = h / r;
  const cplx q1 = std::exp(-(r - 1.0) * eps);
  const cplx q3 = std::exp(r * eps);
  const cplx q = std::sqrt(1.0 / (q1 * q3));
  const cplx ratio = std::exp(-pihat * eps);
  const cplx u1 = 2.0 * q / (1.0 + ratio);
  return EllipticParams(q1, q3, std::exp(2.0 * tau), u1, u1 * ratio);
}

LimitReport ilw_limit_check(cplx r, cplx tau, cplx pihat, const std::vector<double>& h_values, int level) {
  if (level < 0) throw std::invalid_argument("ilw_limit_check: negative level");
  const IlwParams ilw(r, tau, pihat);
  const cplx beta = ilw.beta();
  const cplx beta32 = beta * std::sqrt(beta);

  std::vector<std::vector<cplx>> i2_spectra;
  std::vector<cplx> i1_values;
  for (int k = 0; k <= level; ++k) {
    i2_spectra.push_back(ilw_spectrum(ilw, k));
    i1_values.push_back(ilw.delta() + static_cast<double>(k) + ilw.shift());
  }

  LimitReport report;
  report.level = level;
  for (double h : h_values) {
    const EllipticParams params = ilw_scaling_params(r, tau, pihat, h);
    const GradedOperator op = build_elliptic_I1(params, level);
    LimitPoint point;
    point.h = h;

    std::vector<std::vector<cplx>> elliptic, target;
    for (int k = 0; k <= level; ++k) {
      elliptic.push_back(eigenvalues(op.blocks[k]));
      std::vector<cplx> t;
      for (auto mu : i2_spectra[k]) t.push_back(beta * h * h * i1_values[k] + beta32 * h * h * h * mu);
      target.push_back(std::move(t));
    }

    if (level == 0) {
      point.calibration.offset = elliptic[0][0] - target[0][0];
    } else {
      point.calibration = calibrate_levels01(target[0], elliptic[0], target[1], elliptic[1]);
    }
    for (int k = 0; k <= level; ++k) {
      const auto cmp = compare_multisets(mapped(target[k], point.calibration), elliptic[k]);
      point.level_residuals.push_back(cmp.max_deviation);
      point.residual = std::max(point.residual, cmp.max_deviation);
      if (elliptic[k].size() >= 3)
        point.direct_fit_residuals.push_back(affine_fit(i2_spectra[k], elliptic[k]).rms_residual);
      else
        point.direct_fit_residuals.push_back(std::nullopt);
    }
    report.points.push_back(std::move(point));
  }
  for (std::size_t i = 0; i + 1 < report.points.size(); ++i) {
    const double denom = report.points[i + 1].residual;
    report.ratios.push_back(denom > 0 ? report.points[i].residual / denom : std::numeric_limits<double>::quiet_NaN());
  }
  return report;
}

}  // namespace toroidal
