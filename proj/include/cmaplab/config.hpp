#pragma once

#include <optional>

#include "cmaplab/prepotential.hpp"
#include "cmaplab/report.hpp"

namespace cmaplab {

struct RunConfig {
  std::string model = "quadratic:n=3";
  std::optional<PrepotentialSpec> inline_prep;  // overrides the catalog prepotential

  // quotient block
  std::string d_spec = "sample";  // "sample" (use run seed), "sample:<seed>", or explicit list
  std::optional<CVec> z0;
  cplx Ctilde = 0.0;

  // run block
  std::vector<std::string> suites{"algebra"};
  int samples = 30;
  std::uint64_t seed = 1;
  std::map<std::string, double> tol_overrides;
  std::string out;

  void validate() const;
};

// Blocks [model], [quotient], [run]; '#' comments; repeated keys allowed for
// the tensor rows of an inline prepotential.
RunConfig parse_config_text(const std::string& text);
RunConfig parse_config_file(const std::string& path);

extern const std::vector<std::string> kAllSuites;

VerificationReport run(const RunConfig& cfg);

}  // namespace cmaplab
