#pragma once

#include <map>

#include "cmaplab/types.hpp"

namespace cmaplab {

struct CheckRecord {
  std::string name;
  std::string anchor;       // which identity / statement is being checked
  int points = 0;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass_if_below = true;  // false: value must exceed the tolerance
  std::string verdict;         // PASS / FAIL / INCONCLUSIVE
  std::string note;
};

struct DerivedData {
  // per-sample series: rows of (index, coords..., value)
  std::map<std::string, std::vector<std::vector<double>>> series;
  std::map<std::string, double> scalars;
  std::map<std::string, int> dims;
};

struct VerificationReport {
  std::string schema = "cmaplab-report/1";
  std::string version = "0.1.0";
  std::string model;
  std::vector<std::string> suites;
  int samples = 0;
  std::uint64_t seed = 0;
  std::map<std::string, double> tolerances;
  std::map<std::string, std::string> environment;
  std::vector<CheckRecord> checks;
  DerivedData derived;
  std::string timestamp;  // excluded from the determinism hash

  bool all_pass() const {
    for (const auto& c : checks)
      if (c.verdict == "FAIL") return false;
    return true;
  }
  int count(const std::string& verdict) const {
    int k = 0;
    for (const auto& c : checks)
      if (c.verdict == verdict) ++k;
    return k;
  }

  std::uint64_t determinism_hash() const;
  std::string to_json() const;  // includes the hash
  std::string summary_text() const;
};

// verdict helper
CheckRecord make_check(const std::string& name, const std::string& anchor, int points,
                       double residual, double tol, bool pass_if_below = true,
                       const std::string& note = "");

// columnar plot data for a recorded series
std::string emit_plot_data(const VerificationReport& rep, const std::string& field);

}  // namespace cmaplab
