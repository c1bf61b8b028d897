#include "cmaplab/report.hpp"

#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace cmaplab {

using nlohmann::json;

namespace {

json to_json_obj(const VerificationReport& r, bool with_timestamp) {
  json j;
  j["schema"] = r.schema;
  j["version"] = r.version;
  j["model"] = r.model;
  j["suites"] = r.suites;
  j["samples"] = r.samples;
  j["seed"] = r.seed;
  j["tolerances"] = r.tolerances;
  j["environment"] = r.environment;
  json checks = json::array();
  for (const auto& c : r.checks) {
    json jc;
    jc["name"] = c.name;
    jc["anchor"] = c.anchor;
    jc["points"] = c.points;
    jc["max_residual"] = c.max_residual;
    jc["tolerance"] = c.tolerance;
    jc["pass_if_below"] = c.pass_if_below;
    jc["verdict"] = c.verdict;
    if (!c.note.empty()) jc["note"] = c.note;
    checks.push_back(jc);
  }
  j["checks"] = checks;
  j["derived"]["scalars"] = r.derived.scalars;
  j["derived"]["dims"] = r.derived.dims;
  json series;
  for (const auto& [k, rows] : r.derived.series) series[k] = rows;
  j["derived"]["series"] = series;
  if (with_timestamp) j["timestamp"] = r.timestamp;
  return j;
}

}  // namespace

std::uint64_t VerificationReport::determinism_hash() const {
  return fnv1a(to_json_obj(*this, false).dump());
}

std::string VerificationReport::to_json() const {
  json j = to_json_obj(*this, true);
  std::ostringstream h;
  h << std::hex << std::setw(16) << std::setfill('0') << determinism_hash();
  j["determinism_hash"] = h.str();
  return j.dump(2) + "\n";
}

std::string VerificationReport::summary_text() const {
  std::ostringstream os;
  for (const auto& c : checks) {
    os << std::left << std::setw(42) << c.name << " " << std::setw(12) << c.verdict
       << " residual " << std::scientific << std::setprecision(3) << c.max_residual
       << (c.pass_if_below ? "  <  " : "  >  ") << c.tolerance << "  (" << c.points
       << " pts)\n";
  }
  os << "total: " << checks.size() << "  pass: " << count("PASS")
     << "  fail: " << count("FAIL") << "  inconclusive: " << count("INCONCLUSIVE") << "\n";
  return os.str();
}

CheckRecord make_check(const std::string& name, const std::string& anchor, int points,
                       double residual, double tol, bool pass_if_below,
                       const std::string& note) {
  CheckRecord c;
  c.name = name;
  c.anchor = anchor;
  c.points = points;
  c.max_residual = residual;
  c.tolerance = tol;
  c.pass_if_below = pass_if_below;
  c.note = note;
  bool ok = pass_if_below ? (residual < tol) : (residual > tol);
  c.verdict = ok ? "PASS" : "FAIL";
  return c;
}

std::string emit_plot_data(const VerificationReport& rep, const std::string& field) {
  auto it = rep.derived.series.find(field);
  if (it == rep.derived.series.end())
    throw UnknownField("no recorded series named '" + field + "'");
  std::ostringstream os;
  os << "# " << rep.model << " field=" << field << " seed=" << rep.seed
     << " columns: index coords... value\n";
  os << std::setprecision(16);
  for (const auto& row : it->second) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << row[i];
    os << "\n";
  }
  return os.str();
}

}  // namespace cmaplab
