#pragma once

#include "toroidal/bethe.hpp"
#include "toroidal/spectrum.hpp"

#include <json.hpp>

#include <complex>
#include <map>
#include <string>
#include <vector>

namespace toroidal::report {

using Json = nlohmann::json;

/// Thrown for structurally invalid JSON input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Deterministic text: sorted keys, two-space indent, floats with 17 significant digits.
std::string dump(const Json& value);

Json to_json(std::complex<double> z);
Json to_json(const std::vector<std::complex<double>>& values);
/// Accepts a number, [re, im] or {"re": .., "im": ..}.
std::complex<double> complex_from_json(const Json& value);
std::vector<std::complex<double>> complex_list_from_json(const Json& value);

Json check(const std::string& name, bool pass, const Json& detail = Json::object());

/// Columns level,index,re,im with one row per eigenvalue.
std::string spectrum_csv(const std::map<int, std::vector<std::complex<double>>>& spectra);

Json to_json(const BetheSystem& system);
/// {"system": tag, ...parameters}; throws InputError on missing or mistyped fields.
BetheSystem system_from_json(const Json& value);

Json to_json(const BetheSolution& solution);
Json to_json(const EigenvalueSeries& series);

}  // namespace toroidal::report
