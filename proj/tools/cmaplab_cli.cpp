#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <json.hpp>

#include "cmaplab/config.hpp"
#include "cmaplab/models.hpp"
#include "cmaplab/parse_util.hpp"

namespace {

using namespace cmaplab;

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write " + path);
  f << text;
}

int cmd_verify(RunConfig cfg) {
  VerificationReport rep = run(cfg);
  std::cout << rep.summary_text();
  if (!cfg.out.empty()) {
    write_file(cfg.out, rep.to_json());
    std::cout << "report written to " << cfg.out << "\n";
  }
  return rep.all_pass() ? 0 : 1;
}

int cmd_models_list() {
  for (const auto& name : catalog_names()) {
    ModelDescriptor m = make_model(name);
    std::cout << std::left << std::setw(24) << m.name;
    if (m.has_prepotential) {
      std::cout << " n=" << std::setw(3) << m.prep.n << " expected: r=" << m.expected_r
                << " dim(M')=" << m.expected_dim_Mprime_real
                << " cdim(base)=" << m.expected_cdim_Mwedge;
    } else {
      std::cout << " standalone moment-map geometry (dim 4)";
    }
    std::cout << "\n";
  }
  return 0;
}

int cmd_quotient_describe(const std::string& model, std::uint64_t seed, const std::string& out) {
  ModelDescriptor m = make_model(model);
  auto rec = recommended_recipe(m, seed);
  QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, seed);
  std::ostringstream os;
  os << "model: " << m.name << "\n";
  os << std::setprecision(12);
  os << "Z0:";
  for (int i = 0; i < q.Z0.size(); ++i) os << " " << q.Z0[i];
  os << "\nD: ";
  for (int i = 0; i < q.D.size(); ++i) os << " " << q.D[i];
  os << "\nC: ";
  for (int i = 0; i < q.C.size(); ++i) os << " " << q.C[i];
  os << "\nCtilde: " << q.Ctilde << "\n";
  Jet3 jet = eval_jet(m.prep, q.Z0);
  Mat N = n_matrix(jet);
  os << "null residual: "
     << std::abs((q.D.adjoint() * N.cast<cplx>() * q.D)(0)) / q.D.squaredNorm() << "\n";
  os << "rank r: " << q.r << "\nsingular values:";
  for (double s : q.singular_values) os << " " << s;
  os << "\ndim N (real): " << q.dim_N_real << "\ndim M' (real): " << q.dim_Mprime_real
     << "\ncdim base: " << q.cdim_Mwedge << "\ncdim M': " << q.cdim_Mprime << "\n";
  if (!q.warning.empty()) os << "warning: " << q.warning << "\n";
  std::cout << os.str();
  if (!out.empty()) write_file(out, os.str());
  return 0;
}

int cmd_plot(const std::string& report_path, const std::string& field, const std::string& out) {
  std::ifstream f(report_path);
  if (!f) throw ConfigError("cannot open report " + report_path);
  std::stringstream ss;
  ss << f.rdbuf();
  // minimal extraction: reparse the JSON through the report machinery
  // (the series layout is flat rows of numbers)
  auto j = nlohmann::json::parse(ss.str());
  VerificationReport rep;
  rep.model = j.value("model", "");
  rep.seed = j.value("seed", 0ull);
  if (j.contains("derived") && j["derived"].contains("series")) {
    for (auto it = j["derived"]["series"].begin(); it != j["derived"]["series"].end(); ++it) {
      std::vector<std::vector<double>> rows;
      for (const auto& r : it.value()) rows.push_back(r.get<std::vector<double>>());
      rep.derived.series[it.key()] = rows;
    }
  }
  std::string text = emit_plot_data(rep, field);
  if (out.empty())
    std::cout << text;
  else
    write_file(out, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"numerical laboratory for c-map metrics and their reductions"};
  app.require_subcommand(1);

  // verify
  auto* verify = app.add_subcommand("verify", "run verification suites and emit a report");
  std::string model = "quadratic:n=3", config_path, suites_csv, out_path, dspec, z0spec, ctilde;
  int samples = -1;
  std::int64_t seed = -1;
  std::vector<std::string> tols;
  verify->add_option("--model", model, "catalog model name");
  verify->add_option("--config", config_path, "config file with [model], [quotient], [run]");
  verify->add_option("--suites", suites_csv, "comma-separated suite list");
  verify->add_option("--samples", samples, "sample points per check");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--tol", tols, "tolerance override name=value (repeatable)");
  verify->add_option("--out", out_path, "report output path");
  verify->add_option("--d", dspec, "null vector: 'sample:<seed>' or explicit components");
  verify->add_option("--z0", z0spec, "base point override (space-separated complex)");
  verify->add_option("--ctilde", ctilde, "fiber constant");

  // models list
  auto* models = app.add_subcommand("models", "model catalog");
  auto* models_list = models->add_subcommand("list", "list catalog models");

  // quotient describe
  auto* quot = app.add_subcommand("quotient", "reduction data");
  auto* qdesc = quot->add_subcommand("describe", "print the reduction data for a model");
  std::string qmodel = "stu", qout;
  std::uint64_t qseed = 1;
  qdesc->add_option("--model", qmodel, "catalog model name");
  qdesc->add_option("--seed", qseed, "seed for the sampled null vector");
  qdesc->add_option("--out", qout, "also write the description to a file");

  // plot
  auto* plot = app.add_subcommand("plot", "extract plot-ready columns from a report");
  std::string prep_path, pfield, pout;
  plot->add_option("--report", prep_path, "report JSON path")->required();
  plot->add_option("--field", pfield, "series name, e.g. nu_hat")->required();
  plot->add_option("--out", pout, "output path (stdout if omitted)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*verify) {
      RunConfig cfg;
      if (!config_path.empty()) cfg = cmaplab::parse_config_file(config_path);
      if (verify->count("--model")) cfg.model = model;
      if (!suites_csv.empty()) cfg.suites = cmaplab::split(suites_csv, ',');
      if (samples >= 0) cfg.samples = samples;
      if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
      if (!out_path.empty()) cfg.out = out_path;
      if (!dspec.empty()) cfg.d_spec = dspec;
      if (!z0spec.empty()) {
        auto items = cmaplab::split(z0spec, ' ');
        cmaplab::CVec z(items.size());
        for (size_t i = 0; i < items.size(); ++i)
          z[static_cast<int>(i)] = cmaplab::parse_complex(items[i]);
        cfg.z0 = z;
      }
      if (!ctilde.empty()) cfg.Ctilde = cmaplab::parse_complex(ctilde);
      for (const auto& t : tols) {
        auto eq = t.find('=');
        if (eq == std::string::npos) throw cmaplab::ConfigError("tol must be name=value");
        cfg.tol_overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
      }
      return cmd_verify(cfg);
    }
    if (*models_list) return cmd_models_list();
    if (*qdesc) return cmd_quotient_describe(qmodel, qseed, qout);
    if (*plot) return cmd_plot(prep_path, pfield, pout);
  } catch (const cmaplab::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
