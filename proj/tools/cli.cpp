#include "cli.hpp"

#include "toroidal/bethe.hpp"
#include "toroidal/elliptic.hpp"
#include "toroidal/fock.hpp"
#include "toroidal/ilw.hpp"
#include "toroidal/partitions.hpp"
#include "toroidal/qseries.hpp"
#include "toroidal/report.hpp"
#include "toroidal/spectrum.hpp"
#include "toroidal/util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <sstream>

namespace toroidal::cli {

namespace {

using report::Json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

using Params = std::map<std::string, std::string>;

// Results plus named pass/fail checks.
struct Outcome {
  Json result = Json::object();
  Json checks = Json::array();
  std::map<int, std::vector<cplx>> csv;

  void check(const std::string& name, bool pass, const Json& detail = Json::object()) {
    checks.push_back(report::check(name, pass, detail));
  }
};

struct Leaf {
  std::string path;
  CLI::App* app = nullptr;
  Params values;
  std::function<void(const Params&, Outcome&)> handler;
};

// ---- parameter parsing ----

double parse_double(const std::string& key, const std::string& text) {
  char* end = nullptr;
  const double x = std::strtod(text.c_str(), &end);
  if (text.empty() || *end != '\0') throw UsageError("--" + key + ": not a number: '" + text + "'");
  return x;
}

int get_int(const Params& p, const std::string& key) {
  const std::string& text = p.at(key);
  char* end = nullptr;
  const long x = std::strtol(text.c_str(), &end, 10);
  if (text.empty() || *end != '\0') throw UsageError("--" + key + ": not an integer: '" + text + "'");
  return static_cast<int>(x);
}

double get_double(const Params& p, const std::string& key) { return parse_double(key, p.at(key)); }

bool get_bool(const Params& p, const std::string& key) {
  const std::string& text = p.at(key);
  if (text == "true" || text == "1") return true;
  if (text == "false" || text == "0") return false;
  throw UsageError("--" + key + ": expected true or false");
}

// Accepts "a", "a+bi", "a-bi" and "bi".
cplx parse_complex(const std::string& key, std::string text) {
  text.erase(std::remove(text.begin(), text.end(), ' '), text.end());
  if (text.empty()) throw UsageError("--" + key + ": empty value");
  if (text.back() != 'i' && text.back() != 'j') return {parse_double(key, text), 0.0};
  text.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = text.size(); k-- > 1;) {
    if ((text[k] == '+' || text[k] == '-') && text[k - 1] != 'e' && text[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto imag_part = [&](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_double(key, s);
  };
  if (split == std::string::npos) return {0.0, imag_part(text)};
  return {parse_double(key, text.substr(0, split)), imag_part(text.substr(split))};
}

cplx get_complex(const Params& p, const std::string& key) { return parse_complex(key, p.at(key)); }

std::vector<double> get_double_list(const Params& p, const std::string& key) {
  std::vector<double> out;
  std::stringstream ss(p.at(key));
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(key, item));
  if (out.empty()) throw UsageError("--" + key + ": empty list");
  return out;
}

std::filesystem::path resolve_output(const std::string& name) {
  std::filesystem::path path(name);
  if (path.is_relative()) {
    if (const char* dir = std::getenv(kOutputDirVariable); dir && *dir) path = std::filesystem::path(dir) / path;
  }
  return path;
}

Json read_json_file(const std::string& name) {
  std::ifstream in(name);
  if (!in) throw report::InputError("cannot open '" + name + "'");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw report::InputError("malformed JSON in '" + name + "': " + e.what());
  }
}

int pair_dimension(int level) {
  long long total = 0;
  for (int k = 0; k <= level; ++k) total += partition_count(k) * partition_count(level - k);
  return static_cast<int>(total);
}

void check_level(int level) {
  if (level < 0 || level > kDefaultLevelBound)
    throw UsageError("--level must lie in [0, " + std::to_string(kDefaultLevelBound) + "]");
}

SolveOptions solve_options(const Params& p) {
  SolveOptions o;
  o.tol = get_double(p, "tol");
  o.seeds_per_unknown = get_int(p, "seeds");
  o.workers = get_int(p, "workers");
  if (o.tol <= 0 || o.seeds_per_unknown < 1 || o.workers < 1)
    throw UsageError("--tol, --seeds and --workers must be positive");
  return o;
}

Json solutions_json(const std::vector<BetheSolution>& sols) {
  Json arr = Json::array();
  for (const auto& s : sols) arr.push_back(report::to_json(s));
  return arr;
}

Json verdict_json(const IdentityVerdict& v) {
  Json out{{"name", v.name}, {"pass", v.pass}};
  if (v.first_mismatch)
    out["first_mismatch"] = Json{{"exponents", v.first_mismatch->exponents},
                                 {"lhs", v.first_mismatch->lhs.str()},
                                 {"rhs", v.first_mismatch->rhs.str()}};
  return out;
}

// ---- commands ----

void cmd_identities(const Params& p, Outcome& o) {
  const int D = get_int(p, "degree");
  if (D < 1) throw UsageError("--degree must be at least 1");
  Json verdicts = Json::array();
  auto add = [&](const IdentityVerdict& v) {
    verdicts.push_back(verdict_json(v));
    o.check(v.name, v.pass);
  };
  add(check_prop_A1(D));
  for (int a = 1; a <= 4; ++a)
    for (int b = 1; b <= 4; ++b) {
      const auto h = hook_poincare(a, b, D);
      add(IdentityVerdict{"hook_poincare(" + std::to_string(a) + "," + std::to_string(b) + ")", h.agree, {}});
    }
  for (const auto& v : check_one_variable_identity(D, 4)) add(v);
  for (int ell = 1; ell <= 4; ++ell) add(check_C_ell_factorization(ell, D));
  o.result["degree"] = D;
  o.result["identities"] = verdicts;
}

IlwParams ilw_params(const Params& p) { return IlwParams(get_complex(p, "r"), get_complex(p, "tau"), get_complex(p, "pihat")); }

IlwSystem ilw_system(const Params& p, int level) {
  const cplx pihat = get_complex(p, "pihat");
  return IlwSystem{get_complex(p, "r"), get_complex(p, "tau"), (pihat - 1.0) / 2.0, (-1.0 - pihat) / 2.0, level};
}

void cmd_ilw_spectrum(const Params& p, Outcome& o) {
  const int N = get_int(p, "level");
  check_level(N);
  const auto values = ilw_spectrum(ilw_params(p), N);
  o.result["level"] = N;
  o.result["eigenvalues"] = report::to_json(values);
  o.csv[N] = values;
}

struct IlwBethe {
  SolveReport solve;
  std::vector<cplx> eigenvalues;
};

IlwBethe ilw_bethe(const Params& p, int N) {
  const IlwParams params = ilw_params(p);
  SolveOptions opts = solve_options(p);
  opts.expected_count = pair_dimension(N);
  IlwBethe out{solve_all(ilw_system(p, N), opts), {}};
  for (const auto& s : out.solve.solutions) out.eigenvalues.push_back(ilw_eigenvalue_from_roots(s.first, params.beta()));
  canonical_sort(out.eigenvalues);
  return out;
}

void cmd_ilw_bethe(const Params& p, Outcome& o) {
  const int N = get_int(p, "level");
  check_level(N);
  const auto b = ilw_bethe(p, N);
  o.result["level"] = N;
  o.result["system"] = report::to_json(BetheSystem(ilw_system(p, N)));
  o.result["solutions"] = solutions_json(b.solve.solutions);
  o.result["rejected_count"] = b.solve.rejected.size();
  o.result["eigenvalues"] = report::to_json(b.eigenvalues);
  o.result["sign_convention"] =
      "eigenvalue +(1-beta)/sqrt(beta) * sum t";
  o.check("admissible count equals level dimension",
          static_cast<int>(b.solve.solutions.size()) == pair_dimension(N),
          Json{{"found", b.solve.solutions.size()}, {"expected", pair_dimension(N)}});
}

void cmd_ilw_crosscheck(const Params& p, Outcome& o) {
  const int N = get_int(p, "level");
  check_level(N);
  const double tol = get_double(p, "match_tol");
  const auto spectrum = ilw_spectrum(ilw_params(p), N);
  const auto b = ilw_bethe(p, N);
  const auto cmp = compare_multisets(b.eigenvalues, spectrum, {tol, tol});
  o.result["level"] = N;
  o.result["operator_eigenvalues"] = report::to_json(spectrum);
  o.result["bethe_eigenvalues"] = report::to_json(b.eigenvalues);
  o.result["operator_count"] = spectrum.size();
  o.result["bethe_count"] = b.eigenvalues.size();
  o.result["max_deviation"] = cmp.max_deviation;
  o.check("counts match", cmp.same_size, Json{{"operator", spectrum.size()}, {"bethe", b.eigenvalues.size()}});
  o.check("multisets match", cmp.match, Json{{"max_deviation", cmp.max_deviation}, {"tol", tol}});
}

EllipticParams elliptic_params(const Params& p) {
  return EllipticParams(get_complex(p, "q1"), get_complex(p, "q3"), get_complex(p, "p"), get_complex(p, "u1"),
                        get_complex(p, "u2"));
}

void cmd_elliptic_i1(const Params& p, Outcome& o) {
  const int N = get_int(p, "level");
  check_level(N);
  const EllipticParams params = elliptic_params(p);
  const GradedOperator op = build_elliptic_I1(params, N);
  Json levels = Json::array();
  for (int k = 0; k <= N; ++k) {
    const auto values = eigenvalues(op.blocks[k]);
    levels.push_back(Json{{"level", k}, {"eigenvalues", report::to_json(values)}});
    o.csv[k] = values;
  }
  o.result["levels"] = levels;
  if (!get_bool(p, "bethe")) return;

  std::map<int, std::vector<std::vector<cplx>>> roots;
  Json solved = Json::array();
  for (int k = 0; k <= N; ++k) {
    SolveOptions opts = solve_options(p);
    opts.expected_count = pair_dimension(k);
    const auto rep = solve_all(ToroidalGl1System{params.q1(), params.q3(), params.p(), {params.u1(), params.u2()}, k},
                               opts);
    for (const auto& s : rep.solutions) roots[k].push_back(s.first);
    solved.push_back(Json{{"level", k}, {"solutions", solutions_json(rep.solutions)}});
  }
  const auto cmp = elliptic_spectrum_vs_bethe(params, N, roots);
  o.result["bethe"] = solved;
  o.result["calibration"] = Json{{"scale", report::to_json(cmp.calibration.scale)},
                                 {"offset", report::to_json(cmp.calibration.offset)}};
  for (const auto& l : cmp.levels)
    o.check("level " + std::to_string(l.level) + " operator vs Bethe",
            l.counts_match && l.max_deviation <= 1e-6,
            Json{{"operator_count", l.operator_count}, {"bethe_count", l.bethe_count},
                 {"max_deviation", l.max_deviation}});
}

void cmd_elliptic_limit(const Params& p, Outcome& o) {
  const int N = get_int(p, "level");
  if (N < 0 || N > 4) throw UsageError("--level must lie in [0, 4] for the limit check");
  const auto h = get_double_list(p, "h");
  const auto rep = ilw_limit_check(get_complex(p, "r"), get_complex(p, "tau"), get_complex(p, "pihat"), h, N);
  Json points = Json::array();
  for (const auto& pt : rep.points)
    points.push_back(Json{{"h", pt.h},
                          {"residual", pt.residual},
                          {"level_residuals", pt.level_residuals},
                          {"scale", report::to_json(pt.calibration.scale)},
                          {"offset", report::to_json(pt.calibration.offset)}});
  o.result["level"] = N;
  o.result["points"] = points;
  o.result["ratios"] = rep.ratios;
  for (std::size_t k = 0; k < rep.ratios.size(); ++k)
    o.check("residual ratio h[" + std::to_string(k) + "]/h[" + std::to_string(k + 1) + "] within [8, 32]",
            rep.ratios[k] >= 8.0 && rep.ratios[k] <= 32.0, Json{{"ratio", rep.ratios[k]}});
  if (!rep.points.empty())
    o.check("residual at smallest h <= 1e-5", rep.points.back().residual <= 1e-5,
            Json{{"residual", rep.points.back().residual}});
}

void cmd_bethe_solve(const Params& p, Outcome& o) {
  Json spec = read_json_file(p.at("params"));
  if (!spec.is_object()) throw report::InputError("system parameters must be a JSON object");
  spec["system"] = p.at("system");
  const BetheSystem system = report::system_from_json(spec);
  SolveOptions opts = solve_options(p);
  const int expected = get_int(p, "count_expected");
  if (expected >= 0) opts.expected_count = expected;
  const auto rep = solve_all(system, opts);
  o.result["system"] = report::to_json(system);
  o.result["solutions"] = solutions_json(rep.solutions);
  o.result["rejected"] = solutions_json(rep.rejected);
  o.result["seeds_tried"] = rep.seeds_tried;
  if (expected >= 0)
    o.check("admissible count", static_cast<int>(rep.solutions.size()) == expected,
            Json{{"found", rep.solutions.size()}, {"expected", expected}});
}

void cmd_gaudin_count(const Params& p, Outcome& o) {
  const int N = get_int(p, "N");
  if (N < 0 || N > 5) throw UsageError("--N must lie in [0, 5]");
  const AffineGaudinSystem system{get_complex(p, "r"), get_complex(p, "pihat"), get_complex(p, "v"), N, N};
  SolveOptions opts = solve_options(p);
  opts.expected_count = static_cast<int>(partition_count(N));
  const auto rep = solve_all(system, opts);
  const cplx beta = (system.r - 1.0) / system.r;
  const cplx P = momentum_from_pihat(beta, system.pihat);
  Json sols = Json::array();
  bool gamma_ok = true, oper_ok = true;
  for (const auto& s : rep.solutions) {
    Json entry = report::to_json(s);
    const auto gamma = gaudin_gamma(system, s.first, s.second);
    const auto oper = oper_apparent_singularity_check(make_oper(system, s.first, gamma.gamma));
    double obstruction = 0.0;
    for (const auto& pt : oper.points) obstruction = std::max(obstruction, std::abs(pt.obstruction));
    gamma_ok = gamma_ok && gamma.pass;
    oper_ok = oper_ok && oper.pass;
    entry["gamma"] = report::to_json(gamma.gamma);
    entry["gamma_deviation"] = gamma.max_deviation;
    entry["oper_obstruction"] = obstruction;
    try {
      const auto r1 = r1_report(s.first, s.second, beta, P, system.v);
      entry["r1"] = Json{{"value", report::to_json(r1.r1)}, {"conjectural", true}};
    } catch (const std::domain_error& e) {
      entry["r1"] = Json{{"error", e.what()}, {"conjectural", true}};
    }
    sols.push_back(entry);
  }
  o.result["system"] = report::to_json(BetheSystem(system));
  o.result["solutions"] = sols;
  o.result["count"] = rep.solutions.size();
  o.result["expected"] = partition_count(N);
  o.result["status"] = "conjectural count claim";
  o.check("admissible count equals p(N) (conjecture-status)",
          static_cast<long long>(rep.solutions.size()) == partition_count(N),
          Json{{"found", rep.solutions.size()}, {"expected", partition_count(N)}});
  o.check("gamma identity", gamma_ok);
  o.check("oper apparent singularities", oper_ok);
}

void cmd_oper_check(const Params& p, Outcome& o) {
  const Json file = read_json_file(p.at("solution"));
  std::vector<cplx> s, t;
  AffineGaudinSystem system;
  try {
    system.r = report::complex_from_json(file.at("r"));
    system.pihat = report::complex_from_json(file.at("pihat"));
    system.v = report::complex_from_json(file.at("v"));
    s = report::complex_list_from_json(file.at("s"));
    t = report::complex_list_from_json(file.at("t"));
  } catch (const Json::exception& e) {
    throw report::InputError(std::string("solution file: ") + e.what());
  }
  system.n0 = static_cast<int>(s.size());
  system.n1 = static_cast<int>(t.size());
  const auto gamma = gaudin_gamma(system, s, t);
  const auto oper = oper_apparent_singularity_check(make_oper(system, s, gamma.gamma));
  Json points = Json::array();
  for (const auto& pt : oper.points)
    points.push_back(Json{{"z", report::to_json(pt.z)},
                          {"exponents", report::to_json(std::vector<cplx>{pt.exponent_low, pt.exponent_high})},
                          {"obstruction", report::to_json(pt.obstruction)},
                          {"pass", pt.pass}});
  o.result["gamma"] = report::to_json(gamma.gamma);
  o.result["gamma_deviation"] = gamma.max_deviation;
  o.result["origin_exponents"] =
      report::to_json(std::vector<cplx>{oper.origin_exponent_low, oper.origin_exponent_high});
  o.result["points"] = points;
  o.check("gamma identity", gamma.pass, Json{{"max_deviation", gamma.max_deviation}});
  o.check("no logarithmic terms at the apparent singularities", oper.pass);
}

void cmd_series_t(const Params& p, Outcome& o) {
  const Json file = read_json_file(p.at("roots"));
  const int lmax = get_int(p, "lmax");
  if (lmax < 0 || lmax > 8) throw UsageError("--lmax must lie in [0, 8]");
  cplx q1, q3, pp;
  std::vector<cplx> v, roots;
  try {
    q1 = report::complex_from_json(file.at("q1"));
    q3 = report::complex_from_json(file.at("q3"));
    pp = report::complex_from_json(file.at("p"));
    v = file.contains("v") ? report::complex_list_from_json(file.at("v")) : std::vector<cplx>{};
    roots = report::complex_list_from_json(file.at("roots"));
  } catch (const Json::exception& e) {
    throw report::InputError(std::string("roots file: ") + e.what());
  }
  if (!(std::abs(pp) < 1.0)) throw UsageError("|p| must be below 1");
  const auto direct = t_series_direct(roots, q1, q3, pp, v, lmax);
  const auto cor = t_series_cor52(roots, q1, q3, pp, v, lmax);
  double dev = 0.0;
  for (int l = 0; l <= lmax; ++l) dev = std::max(dev, std::abs(direct.coefficients[l] - cor.coefficients[l]));
  o.result["direct"] = report::to_json(direct);
  o.result["power_sum_form"] = report::to_json(cor);
  o.result["max_deviation"] = dev;
  o.check("two expansions agree", dev <= 1e-10, Json{{"max_deviation", dev}});
}

// ---- application ----

struct Globals {
  std::string config;
  std::string output;
  std::string csv;
  std::string manifest;
  std::string replay_file;
};

struct Application {
  CLI::App app{"Integrals of motion, Bethe equations and q-series identities", "toroidal"};
  Globals globals;
  std::vector<std::unique_ptr<Leaf>> leaves;
  CLI::App* replay = nullptr;

  Leaf& add_leaf(CLI::App* parent, const std::string& name, const std::string& path, const std::string& help,
                 const std::vector<std::pair<std::string, std::string>>& params,
                 std::function<void(const Params&, Outcome&)> handler) {
    auto leaf = std::make_unique<Leaf>();
    leaf->path = path;
    leaf->app = parent->add_subcommand(name, help);
    leaf->app->set_help_flag("--help", "print this help");  // frees "--h" for step sizes
    leaf->handler = std::move(handler);
    for (const auto& [key, def] : params) {
      leaf->values[key] = def;
      std::string names = "--" + key;
      if (key.find('_') != std::string::npos) {
        std::string dashed = key;
        std::replace(dashed.begin(), dashed.end(), '_', '-');
        names += ",--" + dashed;
      }
      auto* opt = leaf->app->add_option(names, leaf->values[key]);
      if (!def.empty()) opt->default_str(def);
    }
    leaves.push_back(std::move(leaf));
    return *leaves.back();
  }

  Application() {
    app.require_subcommand(1);
    app.add_option("--config", globals.config, "key=value defaults file ('#' comments)");
    app.add_option("--output", globals.output, "write JSON here instead of stdout");
    app.add_option("--csv", globals.csv, "write spectra as CSV (level,index,re,im)");
    app.add_option("--manifest", globals.manifest, "write the run manifest (with wall time) here");
    app.fallthrough();

    const std::vector<std::pair<std::string, std::string>> ilw_common = {
        {"level", "1"}, {"r", "2.5"}, {"tau", "-0.7"}, {"pihat", "1.3"}};
    const std::vector<std::pair<std::string, std::string>> solver = {{"tol", "1e-10"}, {"seeds", "200"},
                                                                     {"workers", "1"}};
    auto join = [](auto a, const auto& b) {
      a.insert(a.end(), b.begin(), b.end());
      return a;
    };

    add_leaf(&app, "identities", "identities", "exact q-series identity suite", {{"degree", "12"}}, cmd_identities);

    auto* ilw = app.add_subcommand("ilw", "ILW Hamiltonians and their Bethe equations");
    ilw->require_subcommand(1);
    ilw->fallthrough();
    add_leaf(ilw, "spectrum", "ilw spectrum", "eigenvalues of I_2", ilw_common, cmd_ilw_spectrum);
    add_leaf(ilw, "bethe", "ilw bethe", "solve the ILW Bethe equations", join(ilw_common, solver), cmd_ilw_bethe);
    add_leaf(ilw, "crosscheck", "ilw crosscheck", "compare spec(I_2) with Bethe eigenvalues",
             join(join(ilw_common, solver), std::vector<std::pair<std::string, std::string>>{{"match_tol", "1e-8"}}),
             cmd_ilw_crosscheck);

    auto* ell = app.add_subcommand("elliptic", "elliptic integral of motion on F(u1) x F(u2)");
    ell->require_subcommand(1);
    ell->fallthrough();
    add_leaf(ell, "i1", "elliptic i1", "spectrum of the elliptic I_1",
             join(std::vector<std::pair<std::string, std::string>>{{"level", "2"},
                                                                   {"q1", "0.9+0.1i"},
                                                                   {"q3", "1.05-0.05i"},
                                                                   {"p", "0.05+0.02i"},
                                                                   {"u1", "1+0.3i"},
                                                                   {"u2", "0.7-0.2i"},
                                                                   {"bethe", "false"}},
                  solver),
             cmd_elliptic_i1);
    add_leaf(ell, "limit", "elliptic limit", "ILW scaling limit of the elliptic I_1",
             {{"level", "1"}, {"r", "2.5"}, {"tau", "-0.7"}, {"pihat", "1.3"}, {"h", "0.05,0.025"}},
             cmd_elliptic_limit);

    auto* bethe = app.add_subcommand("bethe", "Bethe equation solver");
    bethe->require_subcommand(1);
    bethe->fallthrough();
    add_leaf(bethe, "solve", "bethe solve", "solve a system described in JSON",
             join(std::vector<std::pair<std::string, std::string>>{
                      {"system", "Ilw"}, {"params", ""}, {"count_expected", "-1"}},
                  solver),
             cmd_bethe_solve);

    auto* gaudin = app.add_subcommand("gaudin", "affine Gaudin equations");
    gaudin->require_subcommand(1);
    gaudin->fallthrough();
    add_leaf(gaudin, "count", "gaudin count", "count admissible solutions with N0 = N1 = N",
             join(std::vector<std::pair<std::string, std::string>>{
                      {"N", "1"}, {"r", "2.7"}, {"pihat", "0.6"}, {"v", "1.3"}},
                  solver),
             cmd_gaudin_count);

    auto* oper = app.add_subcommand("oper", "oper attached to a Gaudin solution");
    oper->require_subcommand(1);
    oper->fallthrough();
    add_leaf(oper, "check", "oper check", "apparent-singularity check", {{"solution", ""}}, cmd_oper_check);

    auto* series = app.add_subcommand("series", "transfer-matrix eigenvalue series");
    series->require_subcommand(1);
    series->fallthrough();
    add_leaf(series, "t", "series t", "coefficients of u^-l from Bethe roots", {{"roots", ""}, {"lmax", "3"}},
             cmd_series_t);

    replay = app.add_subcommand("replay", "rerun a manifest");
    replay->add_option("manifest_file", globals.replay_file, "manifest or output JSON")->required();
  }

  Leaf* selected() {
    for (auto& leaf : leaves)
      if (leaf->app->parsed()) return leaf.get();
    return nullptr;
  }

  bool known_key(const std::string& key) const {
    for (const auto& leaf : leaves)
      if (leaf->values.count(key)) return true;
    return false;
  }
};

Params read_config(const std::string& name) {
  std::ifstream in(name);
  if (!in) throw UsageError("cannot open config file '" + name + "'");
  Params out;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(name + ":" + std::to_string(number) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    out[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return out;
}

void write_file(const std::string& name, const std::string& text) {
  const auto path = resolve_output(name);
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << text;
}

int run_replay(const Application& application, std::ostream& out, std::ostream& err) {
  Json file;
  std::vector<std::string> args;
  try {
    file = read_json_file(application.globals.replay_file);
    const Json& manifest = file.contains("manifest") ? file.at("manifest") : file;
    std::stringstream ss(manifest.at("command").get<std::string>());
    for (std::string word; ss >> word;) args.push_back(word);
    for (const auto& [key, value] : manifest.at("parameters").items()) {
      args.push_back("--" + key);
      args.push_back(value.get<std::string>());
    }
  } catch (const report::InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    err << "error: malformed manifest: " << e.what() << "\n";
    return kExitInput;
  }
  const auto& g = application.globals;
  if (!g.output.empty()) args.insert(args.end(), {"--output", g.output});
  if (!g.csv.empty()) args.insert(args.end(), {"--csv", g.csv});
  if (!g.manifest.empty()) args.insert(args.end(), {"--manifest", g.manifest});
  return run(args, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Application application;
  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    application.app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << application.app.help();
    return kExitPass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  if (application.replay->parsed()) return run_replay(application, out, err);

  Leaf* leaf = application.selected();
  if (!leaf) {
    err << application.app.help();
    return kExitUsage;
  }

  const auto start = std::chrono::steady_clock::now();
  Outcome outcome;
  try {
    if (!application.globals.config.empty()) {
      for (const auto& [key, value] : read_config(application.globals.config)) {
        if (!application.known_key(key)) throw UsageError("unknown config key '" + key + "'");
        if (!leaf->values.count(key)) continue;
        if (leaf->app->get_option("--" + key)->count() == 0) leaf->values[key] = value;
      }
    }
    leaf->handler(leaf->values, outcome);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const report::InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  Json params = Json::object();
  for (const auto& [key, value] : leaf->values) params[key] = value;
  const Json manifest{{"command", leaf->path}, {"parameters", params}, {"version", kVersion}};
  const Json document{{"manifest", manifest}, {"result", outcome.result}, {"checks", outcome.checks}};

  bool pass = true;
  for (const auto& c : outcome.checks) pass = pass && c.at("pass").get<bool>();

  try {
    const std::string text = report::dump(document);
    if (application.globals.output.empty())
      out << text;
    else
      write_file(application.globals.output, text);
    if (!application.globals.csv.empty()) write_file(application.globals.csv, report::spectrum_csv(outcome.csv));
    if (!application.globals.manifest.empty())
      write_file(application.globals.manifest,
                 report::dump(Json{{"manifest", manifest}, {"wall_time_seconds", wall}}));
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return pass ? kExitPass : kExitComparisonFailure;
}

}  // namespace toroidal::cli
