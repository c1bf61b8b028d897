#include "cmaplab/config.hpp"

#include <fstream>

#include "cmaplab/parse_util.hpp"

namespace cmaplab {

const std::vector<std::string> kAllSuites = {
    "algebra", "integrability", "structure_eq", "moment", "quotient", "curvature", "models"};

void RunConfig::validate() const {
  if (samples < 1) throw ConfigError("samples must be >= 1");
  if (suites.empty()) throw ConfigError("empty suites list");
  for (const auto& s : suites)
    if (std::find(kAllSuites.begin(), kAllSuites.end(), s) == kAllSuites.end())
      throw ConfigError("unknown suite '" + s + "'");
}

namespace {

struct IniBlock {
  std::vector<std::pair<std::string, std::string>> entries;
  std::vector<std::string> all(const std::string& key) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : entries)
      if (k == key) out.push_back(v);
    return out;
  }
  std::optional<std::string> get(const std::string& key) const {
    auto v = all(key);
    if (v.empty()) return std::nullopt;
    return v.back();
  }
};

CVec parse_cvec(const std::string& s) {
  auto items = split(s, ' ');
  CVec v(items.size());
  for (size_t i = 0; i < items.size(); ++i) v[static_cast<int>(i)] = parse_complex(items[i]);
  return v;
}

PrepotentialSpec parse_inline_prep(const IniBlock& b) {
  std::string variant = b.get("variant").value();
  if (variant == "quadratic") {
    int n = std::stoi(b.get("n").value());
    CMat Q(n, n);
    auto rows = b.all("q");
    if (static_cast<int>(rows.size()) != n)
      throw ConfigError("quadratic block needs n rows 'q = ...'");
    for (int i = 0; i < n; ++i) {
      CVec row = parse_cvec(rows[i]);
      if (row.size() != n) throw ConfigError("bad row length in quadratic block");
      Q.row(i) = row.transpose();
    }
    return PrepotentialSpec::quadratic(Q);
  }
  if (variant == "cubic") {
    int n = std::stoi(b.get("n").value());
    SymCubic d(n - 1);
    for (const auto& line : b.all("d")) {
      auto f = split(line, ' ');
      if (f.size() != 4) throw ConfigError("cubic entry must be 'd = i j k value'");
      d.set_sym(std::stoi(f[0]), std::stoi(f[1]), std::stoi(f[2]), std::stod(f[3]));
    }
    return PrepotentialSpec::cubic(d);
  }
  if (variant == "monomials") {
    int n = std::stoi(b.get("n").value());
    std::vector<Monomial> terms;
    for (const auto& line : b.all("mono")) {
      auto f = split(line, ' ');
      if (static_cast<int>(f.size()) != n + 1)
        throw ConfigError("monomial entry must be 'mono = coeff p0 ... p_{n-1}'");
      Monomial m;
      m.coeff = parse_complex(f[0]);
      for (int i = 0; i < n; ++i) m.powers.push_back(std::stoi(f[1 + i]));
      terms.push_back(m);
    }
    return PrepotentialSpec::monomials(n, terms);
  }
  throw ConfigError("unknown prepotential variant '" + variant + "'");
}

}  // namespace

RunConfig parse_config_text(const std::string& text) {
  std::map<std::string, IniBlock> blocks;
  std::string current;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      current = trim(line.substr(1, line.size() - 2));
      blocks[current];
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("bad config line: " + line);
    if (current.empty()) throw ConfigError("config entry outside a block: " + line);
    blocks[current].entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1))});
  }

  RunConfig cfg;
  if (blocks.count("model")) {
    const auto& b = blocks["model"];
    if (auto name = b.get("name")) cfg.model = *name;
    if (b.get("variant")) {
      cfg.inline_prep = parse_inline_prep(b);
      if (!b.get("name")) cfg.model = "inline";
    }
  }
  if (blocks.count("quotient")) {
    const auto& b = blocks["quotient"];
    if (auto d = b.get("d")) cfg.d_spec = *d;
    if (auto z = b.get("z0")) cfg.z0 = parse_cvec(*z);
    if (auto c = b.get("ctilde")) cfg.Ctilde = parse_complex(*c);
  }
  if (blocks.count("run")) {
    const auto& b = blocks["run"];
    if (auto s = b.get("suites")) cfg.suites = split(*s, ',');
    if (auto s = b.get("samples")) cfg.samples = std::stoi(*s);
    if (auto s = b.get("seed")) cfg.seed = std::stoull(*s);
    if (auto s = b.get("out")) cfg.out = *s;
    for (const auto& t : b.all("tol")) {
      auto eq = t.find('=');
      if (eq == std::string::npos) throw ConfigError("tol entry must be name=value");
      cfg.tol_overrides[trim(t.substr(0, eq))] = std::stod(t.substr(eq + 1));
    }
  }
  return cfg;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot open config file " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config_text(ss.str());
}

}  // namespace cmaplab
