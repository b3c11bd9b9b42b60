// One PASS/FAIL line per acceptance criterion; exit status 1 when any fails.
#include "cli.hpp"
#include "toroidal/bethe.hpp"
#include "toroidal/elliptic.hpp"
#include "toroidal/ilw.hpp"
#include "toroidal/partitions.hpp"
#include "toroidal/qseries.hpp"
#include "toroidal/spectrum.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

using namespace toroidal;
using cd = std::complex<double>;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
  void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::int64_t pair_dimension(int n) {
  std::int64_t d = 0;
  for (int k = 0; k <= n; ++k) d += partition_count(k) * partition_count(n - k);
  return d;
}

// ---- 1 ----
Verdict identities() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const auto a1 = check_prop_A1(12);
  v.require(a1.pass, "Prop A.1 at D=12");
  for (const auto& one : check_one_variable_identity(10, 4)) v.require(one.pass, one.name);
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) v.require(hook_poincare(a, b, 12).agree, fmt("hook (%d,%d)", a, b));
  for (int ell = 1; ell <= 4; ++ell) v.require(check_C_ell_factorization(ell, 10).pass, fmt("C_%d at D=10", ell));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 60.0, fmt("runtime %.1f s exceeds 60 s", secs));
  v.note(fmt("exact rational checks in %.1f s", secs));
  return v;
}

// ---- 2 ----
Verdict scalarity() {
  Verdict v;
  double worst = 0.0;
  const std::vector<std::array<cd, 3>> draws = {
      {2.5, -0.7, 1.3}, {cd(1.7, 0.3), cd(0.45, -0.2), cd(0.3, 0.8)}, {cd(-2.2, 0.5), cd(-1.1, 0.9), cd(2.1, -0.4)}};
  for (const auto& [r, tau, pihat] : draws) {
    const IlwParams p(r, tau, pihat);
    const cd beta = (r - 1.0) / r;
    const cd shift = (1.0 - beta) * (1.0 - beta) / (4.0 * beta);
    const cd delta = shift * (pihat * pihat - 1.0);
    for (int n = 0; n <= 6; ++n) {
      const DenseMatrix m = build_I1(p, n);
      const DenseMatrix scalar = (delta + double(n) + shift) * DenseMatrix::Identity(m.rows(), m.cols());
      worst = std::max(worst, (m - scalar).cwiseAbs().maxCoeff());
    }
  }
  v.require(worst <= 1e-12, "off-scalar deviation too large");
  v.note(fmt("max deviation %.2e over levels 0..6 at 3 draws", worst));
  return v;
}

// ---- 3 ----
std::vector<cd> level_one_quadratic(const IlwParams& p) {
  // mu^2 + ((1-beta)/sqrt(beta)) coth(tau) mu - delta = 0
  const cd beta = (p.r() - 1.0) / p.r();
  const cd b = (1.0 - beta) / std::sqrt(beta) * std::cosh(p.tau()) / std::sinh(p.tau());
  const cd delta = (1.0 - beta) * (1.0 - beta) / (4.0 * beta) * (p.pihat() * p.pihat() - 1.0);
  const cd disc = std::sqrt(b * b + 4.0 * delta);
  return {(-b + disc) / 2.0, (-b - disc) / 2.0};
}

Verdict ilw_bethe() {
  Verdict v;
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::array<cd, 3>> draws = {{2.5, -0.7, 1.3}, {3.2, -0.45, 0.85}};
  double worst = 0.0;
  std::string counts;
  for (const auto& [r, tau, pihat] : draws) {
    const IlwParams params(r, tau, pihat);
    for (int n = 1; n <= 3; ++n) {
      const IlwSystem system{r, tau, (pihat - 1.0) / 2.0, (-1.0 - pihat) / 2.0, n};
      SolveOptions options;
      options.expected_count = static_cast<int>(pair_dimension(n));
      const auto report = solve_all(system, options);
      std::vector<cd> bethe;
      for (const auto& s : report.solutions) bethe.push_back(ilw_eigenvalue_from_roots(s.first, params.beta()));
      counts += fmt("%s%zu", counts.empty() ? "" : "/", bethe.size());
      v.require(static_cast<std::int64_t>(bethe.size()) == pair_dimension(n),
                fmt("level %d: %zu solutions, expected %lld", n, bethe.size(), (long long)pair_dimension(n)));
      const auto cmp = compare_multisets(bethe, ilw_spectrum(params, n));
      worst = std::max(worst, cmp.max_deviation);
      v.require(cmp.match, fmt("level %d multiset mismatch %.2e", n, cmp.max_deviation));
      if (n == 1) {
        const auto quad = compare_multisets(ilw_spectrum(params, 1), level_one_quadratic(params));
        v.require(quad.match, "level 1 quadratic mismatch");
      }
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  v.require(secs < 120.0, fmt("runtime %.1f s exceeds 120 s", secs));
  v.note(fmt("counts %s, max deviation %.2e, %.1f s", counts.c_str(), worst, secs));
  return v;
}

// ---- 4 ----
Verdict limit_scaling() {
  Verdict v;
  for (int level = 1; level <= 2; ++level) {
    const auto rep = ilw_limit_check(2.5, -0.7, 1.3, {0.05, 0.025}, level);
    const double ratio = rep.ratios.at(0);
    const double last = rep.points.back().residual;
    v.require(ratio >= 8.0 && ratio <= 32.0, fmt("level %d ratio %.2f outside [8, 32]", level, ratio));
    v.require(last <= 1e-5, fmt("level %d residual %.2e above 1e-5", level, last));
    v.note(fmt("level %d: ratio %.2f, residual(h=0.025) %.2e", level, ratio, last));
  }
  return v;
}

// ---- 5 ----
Verdict elliptic_vs_bethe() {
  Verdict v;
  struct Draw {
    cd q1, q3, p, u1, u2;
  };
  const std::vector<Draw> draws = {{cd(0.9, 0.1), cd(1.05, -0.05), cd(0.05, 0.02), cd(1.0, 0.3), cd(0.7, -0.2)},
                                   {cd(0.8, -0.15), cd(1.1, 0.1), cd(-0.03, 0.08), cd(0.6, 0.5), cd(1.2, -0.1)}};
  for (const auto& d : draws) {
    const EllipticParams params(d.q1, d.q3, d.p, d.u1, d.u2);
    std::map<int, std::vector<std::vector<cd>>> roots;
    for (int n = 0; n <= 2; ++n) {
      const ToroidalGl1System system{d.q1, d.q3, params.p(), {d.u1, d.u2}, n};
      SolveOptions options;
      options.expected_count = static_cast<int>(pair_dimension(n));
      for (const auto& s : solve_all(system, options).solutions) roots[n].push_back(s.first);
    }
    const auto rep = elliptic_spectrum_vs_bethe(params, 2, roots);
    for (const auto& l : rep.levels)
      v.require(l.counts_match, fmt("level %d: %d operator vs %d Bethe values", l.level, l.operator_count, l.bethe_count));
    v.require(rep.max_deviation <= 1e-6, fmt("deviation %.2e", rep.max_deviation));
    v.note(fmt("|p| = %.3f: max deviation %.2e, calibration scale %.3g%+.3gi", std::abs(params.p()), rep.max_deviation,
               rep.calibration.scale.real(), rep.calibration.scale.imag()));
  }
  return v;
}

// ---- 6 ----
Verdict series_agreement() {
  Verdict v;
  std::mt19937 rng(20261017);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto polar = [&](double lo, double hi) { return std::polar(lo + (hi - lo) * unit(rng), 2.0 * M_PI * unit(rng)); };
  double worst = 0.0, largest = 0.0;
  for (int draw = 0; draw < 10; ++draw) {
    const cd q1 = polar(0.5, 0.85), q3 = polar(0.5, 0.85), p = polar(0.02, 0.3);
    const int n = 1 + draw % 3;
    std::vector<cd> roots, vs;
    for (int j = 0; j < n; ++j) roots.push_back(polar(0.2, 1.5));
    for (int j = 0; j < 2; ++j) vs.push_back(polar(0.2, 1.5));
    const auto direct = t_series_direct(roots, q1, q3, p, vs, 3);
    const auto cor = t_series_cor52(roots, q1, q3, p, vs, 3);
    for (int l = 0; l <= 3; ++l) {
      worst = std::max(worst, std::abs(direct.coefficients[l] - cor.coefficients[l]));
      largest = std::max(largest, std::abs(direct.coefficients[l]));
    }
  }
  v.require(worst <= 1e-10, "coefficient mismatch above 1e-10");
  v.note(fmt("max deviation %.2e over 10 draws, l <= 3, largest coefficient %.3g", worst, largest));
  return v;
}

// ---- 7, 8 ----
const AffineGaudinSystem gaudin_base{2.7, 0.6, 1.3, 0, 0};

std::vector<std::pair<AffineGaudinSystem, BetheSolution>> gaudin_solutions;

Verdict gaudin_counts() {
  Verdict v;
  std::string counts;
  for (int n = 1; n <= 3; ++n) {
    AffineGaudinSystem system = gaudin_base;
    system.n0 = system.n1 = n;
    SolveOptions options;
    options.expected_count = static_cast<int>(partition_count(n));
    const auto report = solve_all(system, options);
    counts += fmt("%s%zu", counts.empty() ? "" : "/", report.solutions.size());
    v.require(static_cast<std::int64_t>(report.solutions.size()) == partition_count(n),
              fmt("N=%d: %zu solutions, expected %lld", n, report.solutions.size(), (long long)partition_count(n)));
    for (const auto& s : report.solutions) gaudin_solutions.emplace_back(system, s);
    if (n == 1 && report.solutions.size() == 1) {
      const cd beta = (system.r - 1.0) / system.r;
      const double dev = std::abs(report.solutions[0].first[0] - beta * system.v);
      v.require(dev <= 1e-9, fmt("N=1 root deviates from beta v by %.2e", dev));
    }
  }
  v.note(fmt("counts %s for N = 1, 2, 3 (expected 1/2/3)", counts.c_str()));
  return v;
}

Verdict oper_consistency() {
  Verdict v;
  if (gaudin_solutions.empty()) v.require(false, "no Gaudin solutions to check");
  double worst_gamma = 0.0, worst_obstruction = 0.0, weakest_contrast = 1e300;
  for (const auto& [system, sol] : gaudin_solutions) {
    const auto g = gaudin_gamma(system, sol.first, sol.second, 1e-9);
    v.require(g.pass, "gamma identity fails");
    worst_gamma = std::max(worst_gamma, g.max_deviation);
    const auto oper = oper_apparent_singularity_check(make_oper(system, sol.first, g.gamma), 1e-8);
    v.require(oper.pass, "oper has a logarithmic singularity");
    for (const auto& pt : oper.points) worst_obstruction = std::max(worst_obstruction, std::abs(pt.obstruction));

    auto shifted = sol.first;
    shifted[0] += 1e-2;
    const auto bad_gamma = gaudin_gamma(system, shifted, sol.second, 1e-9);
    const auto bad = oper_apparent_singularity_check(make_oper(system, shifted, bad_gamma.gamma), 1e-8);
    double largest = 0.0;
    for (const auto& pt : bad.points) largest = std::max(largest, std::abs(pt.obstruction));
    weakest_contrast = std::min(weakest_contrast, largest);
  }
  v.require(weakest_contrast > 1e-4, fmt("perturbed obstruction only %.2e", weakest_contrast));
  v.note(fmt("%zu solutions: gamma deviation %.2e, obstruction %.2e, perturbed obstruction >= %.2e",
             gaudin_solutions.size(), worst_gamma, worst_obstruction, weakest_contrast));
  return v;
}

// ---- 9 ----
Verdict degeneration() {
  Verdict v;
  const double tau0 = 0.4;
  for (int n = 1; n <= 2; ++n) {
    const IlwGaudinHybridSystem hybrid{gaudin_base.r, gaudin_base.pihat, gaudin_base.v, tau0, n, n};
    const AffineGaudinSystem target{gaudin_base.r, gaudin_base.pihat, gaudin_base.v, n, n};
    const auto starts = solve_all(hybrid).solutions;
    SolveOptions options;
    options.expected_count = static_cast<int>(partition_count(n));
    const auto gaudin = solve_all(target, options).solutions;
    std::vector<ComplexVector> flat;
    for (const auto& s : starts) flat.push_back(s.flat());
    auto family = [&](double sigma) -> BetheSystem {
      if (sigma >= 1.0) return target;
      return IlwGaudinHybridSystem{hybrid.r, hybrid.pihat, hybrid.v, tau0 * (1.0 - sigma), n, n};
    };
    const auto paths = continuation(family, flat);
    std::vector<bool> reached(gaudin.size(), false);
    int landed = 0, diverged = 0;
    for (const auto& path : paths) {
      if (!path.success) {
        ++diverged;
        continue;
      }
      const double res = residual(target, path.end).cwiseAbs().maxCoeff();
      v.require(res <= 1e-8, fmt("N=%d endpoint residual %.2e", n, res));
      const auto end = canonical_solution(target, path.end);
      bool hit = false;
      for (std::size_t k = 0; k < gaudin.size(); ++k)
        if (same_solution(end, gaudin[k], 1e-7)) reached[k] = hit = true;
      v.require(hit, fmt("N=%d path ends off the Gaudin solution set", n));
      ++landed;
    }
    const auto missing = std::count(reached.begin(), reached.end(), false);
    v.require(missing == 0, fmt("N=%d: %lld Gaudin solutions not reached", n, (long long)missing));
    v.note(fmt("N=%d: %zu hybrid solutions, %d paths land on all %zu Gaudin solutions, %d diverge", n, starts.size(),
               landed, gaudin.size(), diverged));
  }
  return v;
}

// ---- 10 ----
Verdict determinism() {
  Verdict v;
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / ("toroidal_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::vector<std::vector<std::string>> commands = {
      {"ilw", "crosscheck", "--level", "2"},
      {"gaudin", "count", "--N", "2"},
      {"elliptic", "i1", "--level", "1", "--bethe", "true"},
      {"elliptic", "limit", "--level", "1"},
      {"identities", "--degree", "6"},
  };
  int index = 0;
  for (const auto& command : commands) {
    const std::string manifest = (dir / ("run" + std::to_string(index++) + ".json")).string();
    std::vector<std::string> args = {"--manifest", manifest};
    args.insert(args.end(), command.begin(), command.end());
    std::ostringstream first, second, err;
    const int code1 = cli::run(args, first, err);
    const int code2 = cli::run({"replay", manifest}, second, err);
    v.require(code1 == code2, command[0] + ": exit codes differ");
    v.require(!first.str().empty() && first.str() == second.str(), command[0] + " " + command[1] + ": replay differs");
  }
  fs::remove_all(dir);
  v.note(fmt("%zu manifests replayed byte-identically", commands.size()));
  return v;
}

}  // namespace

int main() {
  const std::vector<std::function<Verdict()>> criteria = {identities,         scalarity,       ilw_bethe,
                                                          limit_scaling,      elliptic_vs_bethe, series_agreement,
                                                          gaudin_counts,      oper_consistency, degeneration,
                                                          determinism};
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i]();
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    all = all && v.pass;
    std::printf("criterion %zu: %s  %s\n", i + 1, v.pass ? "PASS" : "FAIL", v.detail.c_str());
    std::fflush(stdout);
  }
  return all ? 0 : 1;
}
