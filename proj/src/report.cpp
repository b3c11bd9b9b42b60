#include "toroidal/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace toroidal::report {

namespace {

std::string format_double(double x) {
  if (std::isnan(x)) return "\"nan\"";
  if (std::isinf(x)) return x > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  std::string s(buf);
  // keep the value a JSON float
  if (s.find_first_of(".eE") == std::string::npos) s += ".0";
  return s;
}

void write(std::ostringstream& out, const Json& value, int depth) {
  const std::string pad(2 * (depth + 1), ' ');
  const std::string close(2 * depth, ' ');
  switch (value.type()) {
    case Json::value_t::object: {
      if (value.empty()) {
        out << "{}";
        return;
      }
      out << "{\n";
      bool first = true;
      for (auto it = value.begin(); it != value.end(); ++it) {
        if (!first) out << ",\n";
        first = false;
        out << pad << Json(it.key()).dump() << ": ";
        write(out, it.value(), depth + 1);
      }
      out << "\n" << close << "}";
      return;
    }
    case Json::value_t::array: {
      if (value.empty()) {
        out << "[]";
        return;
      }
      out << "[\n";
      for (std::size_t i = 0; i < value.size(); ++i) {
        if (i) out << ",\n";
        out << pad;
        write(out, value[i], depth + 1);
      }
      out << "\n" << close << "]";
      return;
    }
    case Json::value_t::number_float:
      out << format_double(value.get<double>());
      return;
    default:
      out << value.dump();
  }
}

const Json& field(const Json& obj, const char* name) {
  if (!obj.is_object() || !obj.contains(name)) throw InputError(std::string("missing field '") + name + "'");
  return obj.at(name);
}

int int_field(const Json& obj, const char* name) {
  const Json& v = field(obj, name);
  if (!v.is_number_integer()) throw InputError(std::string("field '") + name + "' must be an integer");
  return v.get<int>();
}

std::complex<double> cfield(const Json& obj, const char* name) { return complex_from_json(field(obj, name)); }

std::vector<std::complex<double>> lfield(const Json& obj, const char* name) {
  return complex_list_from_json(field(obj, name));
}

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

}  // namespace

std::string dump(const Json& value) {
  std::ostringstream out;
  write(out, value, 0);
  out << "\n";
  return out.str();
}

Json to_json(std::complex<double> z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

Json to_json(const std::vector<std::complex<double>>& values) {
  Json arr = Json::array();
  for (auto z : values) arr.push_back(to_json(z));
  return arr;
}

std::complex<double> complex_from_json(const Json& value) {
  if (value.is_number()) return {value.get<double>(), 0.0};
  if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number())
    return {value[0].get<double>(), value[1].get<double>()};
  if (value.is_object() && value.contains("re")) {
    const double re = value.at("re").get<double>();
    const double im = value.contains("im") ? value.at("im").get<double>() : 0.0;
    return {re, im};
  }
  throw InputError("expected a complex number: " + value.dump());
}

std::vector<std::complex<double>> complex_list_from_json(const Json& value) {
  if (!value.is_array()) throw InputError("expected an array of complex numbers");
  std::vector<std::complex<double>> out;
  for (const auto& v : value) out.push_back(complex_from_json(v));
  return out;
}

Json check(const std::string& name, bool pass, const Json& detail) {
  return Json{{"name", name}, {"pass", pass}, {"detail", detail}};
}

std::string spectrum_csv(const std::map<int, std::vector<std::complex<double>>>& spectra) {
  std::ostringstream out;
  out << "level,index,re,im\n";
  char buf[96];
  for (const auto& [level, values] : spectra)
    for (std::size_t i = 0; i < values.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%d,%zu,%.17g,%.17g\n", level, i, values[i].real(), values[i].imag());
      out << buf;
    }
  return out.str();
}

Json to_json(const BetheSystem& system) {
  Json out = std::visit(
      overloaded{[](const ToroidalGl1System& s) {
                   return Json{{"q1", to_json(s.q1)}, {"q3", to_json(s.q3)}, {"p", to_json(s.p)},
                               {"v", to_json(s.v)},   {"n", s.n}};
                 },
                 [](const ToroidalGl2System& s) {
                   return Json{{"q1", to_json(s.q1)}, {"q3", to_json(s.q3)}, {"p0", to_json(s.p0)},
                               {"p1", to_json(s.p1)}, {"v0", to_json(s.v0)}, {"v1", to_json(s.v1)},
                               {"n0", s.n0},          {"n1", s.n1}};
                 },
                 [](const IlwSystem& s) {
                   return Json{{"r", to_json(s.r)},   {"tau", to_json(s.tau)}, {"v1", to_json(s.v1)},
                               {"v2", to_json(s.v2)}, {"n", s.n}};
                 },
                 [](const AffineGaudinSystem& s) {
                   return Json{{"r", to_json(s.r)}, {"pihat", to_json(s.pihat)}, {"v", to_json(s.v)},
                               {"n0", s.n0},        {"n1", s.n1}};
                 },
                 [](const IlwGaudinHybridSystem& s) {
                   return Json{{"r", to_json(s.r)},     {"pihat", to_json(s.pihat)}, {"v", to_json(s.v)},
                               {"tau", to_json(s.tau)}, {"n0", s.n0},                {"n1", s.n1}};
                 }},
      system);
  out["system"] = variant_tag(system);
  return out;
}

BetheSystem system_from_json(const Json& value) {
  const Json& tag_value = field(value, "system");
  if (!tag_value.is_string()) throw InputError("field 'system' must be a string");
  const std::string tag = tag_value.get<std::string>();
  try {
    if (tag == "ToroidalGl1")
      return ToroidalGl1System{cfield(value, "q1"), cfield(value, "q3"), cfield(value, "p"), lfield(value, "v"),
                               int_field(value, "n")};
    if (tag == "ToroidalGl2")
      return ToroidalGl2System{cfield(value, "q1"), cfield(value, "q3"), cfield(value, "p0"),
                               cfield(value, "p1"), lfield(value, "v0"), lfield(value, "v1"),
                               int_field(value, "n0"), int_field(value, "n1")};
    if (tag == "Ilw")
      return IlwSystem{cfield(value, "r"), cfield(value, "tau"), cfield(value, "v1"), cfield(value, "v2"),
                       int_field(value, "n")};
    if (tag == "AffineGaudin")
      return AffineGaudinSystem{cfield(value, "r"), cfield(value, "pihat"), cfield(value, "v"), int_field(value, "n0"),
                                int_field(value, "n1")};
    if (tag == "IlwGaudinHybrid")
      return IlwGaudinHybridSystem{cfield(value, "r"),     cfield(value, "pihat"), cfield(value, "v"),
                                   cfield(value, "tau"),   int_field(value, "n0"), int_field(value, "n1")};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(e.what());
  }
  throw InputError("unknown system tag '" + tag + "'");
}

Json to_json(const BetheSolution& solution) {
  Json out{{"first", to_json(solution.first)},
           {"second", to_json(solution.second)},
           {"residual", solution.residual},
           {"admissible", solution.admissible}};
  if (!solution.rejection.empty()) out["rejection"] = solution.rejection;
  return out;
}

Json to_json(const EigenvalueSeries& series) {
  return Json{{"coefficients", to_json(series.coefficients)},
              {"truncation", series.truncation},
              {"tail_estimate", series.tail_estimate},
              {"conjectural", series.conjectural}};
}

}  // namespace toroidal::report
