#include "cmaplab/models.hpp"

#include <map>

#include "cmaplab/geo_verify.hpp"
#include "cmaplab/parse_util.hpp"

namespace cmaplab {

namespace {

std::map<std::string, std::string> parse_params(const std::string& s) {
  std::map<std::string, std::string> out;
  for (const auto& kv : split(s, ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ModelError("bad model parameter '" + kv + "'");
    out[trim(kv.substr(0, eq))] = trim(kv.substr(eq + 1));
  }
  return out;
}

int get_int(const std::map<std::string, std::string>& p, const std::string& k, int dflt) {
  auto it = p.find(k);
  return it == p.end() ? dflt : std::stoi(it->second);
}

}  // namespace

ModelDescriptor make_model(const std::string& name) {
  std::string head = name, params;
  auto colon = name.find(':');
  if (colon != std::string::npos) {
    head = name.substr(0, colon);
    params = name.substr(colon + 1);
  }
  auto pp = parse_params(params);
  ModelDescriptor m;

  if (head == "quadratic") {
    int n = get_int(pp, "n", 3);
    if (n < 2) throw ModelError("quadratic needs n >= 2");
    CVec diag(n);
    diag[0] = ci;
    for (int i = 1; i < n; ++i) diag[i] = -ci;
    m.kind = ModelKind::Quadratic;
    m.name = "quadratic:n=" + std::to_string(n);
    m.prep = PrepotentialSpec::quadratic(CMat(diag.asDiagonal()));
    m.z0 = CVec::Zero(n - 1);
    m.par_n = n;
    m.expected_r = 0;
    m.expected_cdim_Mwedge = n - 1;
    m.expected_dim_Mprime_real = 4 * (n - 1);
    m.base_box = 0.3;
  } else if (head == "stu" || head == "quantum_stu") {
    SymCubic d(3);
    d.add_monomial(0, 1, 2, 1.0);
    m.par_n = 4;
    if (head == "stu") {
      m.kind = ModelKind::Stu;
      m.name = "stu";
      m.prep = PrepotentialSpec::cubic(d);
      m.z0 = CVec(3);
      m.z0 << ci, ci, ci;
    } else {
      m.kind = ModelKind::QuantumStu;
      cplx t = pp.count("t") ? parse_complex(pp.at("t")) : ci;
      m.vev_T = t;
      std::ostringstream os;
      os << "quantum_stu:t=" << t.real() << (t.imag() >= 0 ? "+" : "") << t.imag() << "i";
      m.name = os.str();
      Monomial extra;
      extra.coeff = 1.0 / 3.0;
      extra.powers = {-1, 0, 3, 0};
      m.prep = PrepotentialSpec::cubic_plus(d, {extra});
      // the deformation shrinks the positivity domain; base the recipe deeper
      // inside the cone than for the undeformed model
      m.z0 = CVec(3);
      m.z0 << 2.0 * ci, t, 2.0 * ci;
    }
    m.expected_r = 2;
    m.expected_cdim_Mwedge = 1;
    m.expected_dim_Mprime_real = 8;
    m.base_box = 0.25;
  } else if (head == "st2") {
    int n = get_int(pp, "n", 6);
    if (n < 5) throw ModelError("st2 needs n >= 5");
    int ny = n - 4;
    SymCubic d(n - 1);
    d.add_monomial(0, 1, 2, 1.0);
    for (int l = 0; l < ny; ++l) d.add_monomial(0, 3 + l, 3 + l, 1.0);
    m.kind = ModelKind::St2;
    m.name = "st2:n=" + std::to_string(n);
    m.prep = PrepotentialSpec::cubic(d);
    // the positivity domain of this coupling sits at Im S < 0, Im T Im U < 0
    m.z0 = CVec::Zero(n - 1);
    m.z0[0] = -ci;
    m.z0[1] = ci;
    m.z0[2] = -ci;
    m.par_n = n;
    m.expected_r = 2;
    m.expected_cdim_Mwedge = n - 3;
    m.expected_dim_Mprime_real = 4 * (n - 2);
    m.base_box = 0.2;
  } else if (head == "t_series") {
    int p = get_int(pp, "p", 2);
    if (p < 1) throw ModelError("t_series needs p >= 1");
    int n = p + 3;
    SymCubic d(n - 1);
    d.add_monomial(0, 0, 1, 1.0);  // S^2 T
    for (int l = 0; l < p; ++l) d.add_monomial(0, 2 + l, 2 + l, -1.0);
    m.kind = ModelKind::TSeries;
    m.name = "t_series:p=" + std::to_string(p);
    m.prep = PrepotentialSpec::cubic(d);
    m.z0 = CVec::Zero(n - 1);
    m.z0[0] = ci;
    m.z0[1] = ci;
    m.par_n = n;
    m.par_p = p;
    m.expected_r = 2;
    m.expected_cdim_Mwedge = n - 3;
    m.expected_dim_Mprime_real = 4 * (n - 1) - 4;
    m.base_box = 0.2;
  } else if (head == "w") {
    int p = get_int(pp, "p", 1), q = get_int(pp, "q", 1);
    if (p < 1 || q < 1) throw ModelError("w needs p, q >= 1");
    int n = p + q + 4;
    SymCubic d(n - 1);
    d.add_monomial(0, 1, 2, 1.0);
    for (int a = 0; a < p; ++a) d.add_monomial(1, 3 + a, 3 + a, 1.0);          // T x^2
    for (int l = 0; l < q; ++l) d.add_monomial(0, 3 + p + l, 3 + p + l, 1.0);  // S y^2
    m.kind = ModelKind::W;
    m.name = "w:p=" + std::to_string(p) + ",q=" + std::to_string(q);
    m.prep = PrepotentialSpec::cubic(d);
    // in-domain reference for this coupling: Im S, Im T < 0, Im U > 0
    m.z0 = CVec::Zero(n - 1);
    m.z0[0] = -ci;
    m.z0[1] = -ci;
    m.z0[2] = ci;
    m.par_n = n;
    m.par_p = p;
    m.par_q = q;
    m.expected_r = 2;
    m.expected_cdim_Mwedge = n - 3;
    m.expected_dim_Mprime_real = 4 * n - 8;
    m.base_box = 0.15;
  } else if (head == "homogeneous") {
    int q = get_int(pp, "q", 1), r = get_int(pp, "r", 4);
    m.kind = ModelKind::Homogeneous;
    m.name = "homogeneous:q=" + std::to_string(q) + ",r=" + std::to_string(r);
    m.prep = PrepotentialSpec::homogeneous(q, r);
    int n = m.prep.n;
    m.z0 = CVec::Zero(n - 1);
    m.z0[0] = ci;  // h1
    m.z0[1] = ci;  // h2
    m.par_n = n;
    m.par_q = q;
    m.par_r = r;
    m.expected_r = 2 * q + 2;
    m.expected_cdim_Mwedge = (n - 1) - (2 * q + 2);
    m.expected_dim_Mprime_real = 2 * (2 * r + 4);
    m.base_box = 0.1;
  } else if (head == "h4") {
    m.kind = ModelKind::H4;
    m.name = "h4";
    m.has_prepotential = false;
    m.par_n = 1;
  } else {
    throw ModelError("unknown model '" + head + "'");
  }
  return m;
}

std::vector<std::string> catalog_names() {
  return {"quadratic:n=3", "stu",          "quantum_stu:t=1i", "st2:n=6",
          "t_series:p=2",  "w:p=1,q=1",    "homogeneous:q=1,r=4", "h4"};
}

namespace {

// Solve the null condition for the component D[slot], keeping the others fixed.
// Chooses a seeded phase and the smallest-magnitude admissible root.
cplx solve_null_component(const Mat& N, const CVec& Dpartial, int slot, Rng& rng) {
  cplx c = 0.0;
  for (int A = 0; A < N.rows(); ++A) c += N(slot, A) * Dpartial[A];
  double rho0 = (Dpartial.adjoint() * N.cast<cplx>() * Dpartial)(0).real();
  double njj = N(slot, slot);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double scale = std::max(1.0, Dpartial.norm());
  if (std::abs(njj) < 1e-14 && std::abs(rho0) < 1e-12 * scale * scale && std::abs(c) > 1e-12) {
    // the partial vector is already null; any component along i*c keeps it so
    std::uniform_real_distribution<double> mag(0.5, 1.5);
    double s = mag(rng) * (ang(rng) < M_PI ? 1.0 : -1.0);
    return s * ci * c / std::abs(c);
  }
  for (int attempt = 0; attempt < 64; ++attempt) {
    double theta = ang(rng);
    double creal = (std::exp(-ci * theta) * c).real();
    // s^2 njj + 2 s creal + rho0 = 0
    double s;
    if (std::abs(njj) < 1e-14) {
      if (std::abs(creal) < 1e-12) continue;
      s = -rho0 / (2.0 * creal);
    } else {
      double disc = creal * creal - njj * rho0;
      if (disc < 0.0) continue;
      double r1 = (-creal + std::sqrt(disc)) / njj;
      double r2 = (-creal - std::sqrt(disc)) / njj;
      s = (std::abs(r1) < std::abs(r2)) ? r1 : r2;
      if (std::abs(s) < 1e-8) s = (std::abs(r1) < std::abs(r2)) ? r2 : r1;
    }
    if (!std::isfinite(s) || std::abs(s) < 1e-8 || std::abs(s) > 1e6) continue;
    return s * std::exp(ci * theta);
  }
  throw ModelError("could not solve the null condition for the free component");
}

}  // namespace

QuotientRecipe recommended_recipe(const ModelDescriptor& m, std::uint64_t seed) {
  if (!m.has_prepotential) throw ModelError("model has no quotient recipe");
  QuotientRecipe rec;
  rec.Z0 = lift(m.z0);
  rec.Ctilde = 0.0;
  Rng rng(seed ^ 0x9e3779b97f4a7c15ull);

  if (m.kind == ModelKind::Quadratic) {
    rec.D = null_vector_sample(m.prep, rec.Z0, seed);
    return rec;
  }

  if (!in_domain(m.prep, m.z0))
    throw BranchError("reference point of " + m.name + " is outside the domain");
  Jet3 jet = eval_jet(m.prep, rec.Z0);
  Mat N = n_matrix(jet);
  auto sig0 = signature(N);
  if (sig0.first != 1 || sig0.second != m.prep.n - 1)
    throw BranchError("N(Z0) does not have signature (1, n-1) at the reference point");
  int n = m.prep.n;
  CVec D = CVec::Zero(n);
  D[0] = 1.0;
  int free_slot = -1;

  switch (m.kind) {
    case ModelKind::Stu:
    case ModelKind::QuantumStu:
      D[1] = m.z0[0];
      D[2] = m.z0[1];
      free_slot = 3;
      break;
    case ModelKind::St2: {
      D[1] = m.z0[0];  // pins S
      D[2] = m.z0[1];  // keeps T0 = D^T/D^0 at the chosen point (y0 = 0)
      for (int l = 0; l < m.par_n - 4; ++l) D[4 + l] = cplx(0.3, 0.15);
      free_slot = 3;
      break;
    }
    case ModelKind::TSeries: {
      D[1] = m.z0[0];  // branch D^S = D^0 <S>
      for (int l = 0; l < m.par_p; ++l) D[3 + l] = cplx(0.3, 0.2);
      free_slot = 2;
      break;
    }
    case ModelKind::W: {
      D[1] = m.z0[0];
      D[2] = m.z0[1];
      // x- and y-components stay zero: the constraining quadrics pass through
      // the base point as cones, keeping the rank there minimal.
      free_slot = 3;
      break;
    }
    case ModelKind::Homogeneous: {
      D[2] = m.z0[1];  // pins h2
      // h^mu components zero; the h^ell block is a seeded vector in the +1
      // eigenspace of the first generator, which keeps the rank at 2q+2.
      const Mat& g0 = m.prep.gamma[0];
      int r = m.par_r;
      Eigen::SelfAdjointEigenSolver<Mat> es(g0);
      CVec v0 = CVec::Zero(r);
      for (int i = 0; i < r; ++i) {
        if (es.eigenvalues()[i] > 0.5) {
          std::uniform_real_distribution<double> u(-1.0, 1.0);
          v0 += cplx(u(rng), u(rng)) * es.eigenvectors().col(i).cast<cplx>();
        }
      }
      if (v0.norm() < 1e-8) throw ModelError("empty +1 eigenspace of the first generator");
      v0 *= 0.4 / v0.norm();
      for (int l = 0; l < r; ++l) D[4 + m.par_q + l] = v0[l];
      free_slot = 1;  // h1
      break;
    }
    default:
      throw ModelError("no recipe for this model");
  }
  D[free_slot] = solve_null_component(N, D, free_slot, rng);
  // branch sanity: the free-slot value must not collide with the locus data
  if (m.kind == ModelKind::Stu || m.kind == ModelKind::QuantumStu || m.kind == ModelKind::St2 ||
      m.kind == ModelKind::W) {
    if (std::abs(D[3] - m.z0[2]) < 1e-6)
      throw ModelError("degenerate recipe: D^U equals D^0 <U>");
  }
  rec.D = D;
  return rec;
}

FixedLocusResult fixed_locus_analysis(const ModelDescriptor& m, const CVec& D) {
  if (!m.has_prepotential) throw ModelError("model has no fixed-locus analysis");
  int n = m.prep.n;
  FixedLocusResult out;
  out.C = CVec::Zero(n);

  auto finish = [&](int rank) {
    out.r = rank;
    out.cdim_Mwedge = (n - 1) - rank;
    out.cdim_Mprime = 2 * (n - 1) - rank;
    out.dim_Mprime_real = 4 * (n - 1) - 2 * rank;
  };

  if (m.kind == ModelKind::Quadratic) {
    out.C = m.prep.Q * D;
    for (int a = 0; a < n - 1; ++a) out.free_dirs.push_back(a);
    out.note = "first membership equation holds identically";
    finish(0);
    return out;
  }

  if (std::abs(D[0]) < 1e-12) throw BranchError("analysis branch requires D^0 != 0");
  cplx D0 = D[0];

  switch (m.kind) {
    case ModelKind::Stu: {
      cplx S = D[1] / D0, T = D[2] / D0;
      CVec probe(3);
      probe << S, T, m.z0[2];
      if (!in_domain(m.prep, probe))
        throw BranchError("(1,<S>,<T>) is not timelike-extendable at the reference point");
      out.fixed = {{0, S}, {1, T}};
      out.free_dirs = {2};
      out.C[1] = D[3] * T;
      out.C[2] = D[3] * S;
      out.C[3] = D0 * S * T;
      out.C[0] = -D[3] * S * T;
      finish(2);
      break;
    }
    case ModelKind::QuantumStu: {
      cplx S = D[1] / D0, T = D[2] / D0;
      out.fixed = {{0, S}, {1, T}};
      out.free_dirs = {2};
      out.C[1] = D[3] * T;
      out.C[2] = D[3] * S + D[2] * T;
      out.C[3] = D0 * S * T;
      out.C[0] = -D[3] * S * T - D[2] * T * T / 3.0;
      finish(2);
      break;
    }
    case ModelKind::St2: {
      cplx S = D[1] / D0;
      out.fixed = {{0, S}};
      out.free_dirs = {2};
      for (int l = 0; l < m.par_n - 4; ++l) out.free_dirs.push_back(3 + l);
      out.quadratic_constraints = 1;  // T is solved from the remaining moduli
      out.C[1] = D[2] * D[3] / D0;
      out.C[2] = D[3] * S;
      out.C[3] = S * D[2];
      for (int l = 0; l < m.par_n - 4; ++l) out.C[4 + l] = 2.0 * S * D[4 + l];
      out.C[0] = -(D[2] * D[3] / D0) * S;
      finish(2);
      break;
    }
    case ModelKind::TSeries: {
      cplx S = D[1] / D0;
      if (std::abs(D0 * S - D[1]) > 1e-10 * std::max(1.0, D.norm()))
        throw BranchError("t_series branch requires D^S = D^0 <S>");
      out.fixed = {{0, S}};
      out.free_dirs = {1};
      for (int l = 0; l + 1 < m.par_p; ++l) out.free_dirs.push_back(2 + l);
      out.quadratic_constraints = 1;
      // constants evaluated on the locus through the reference point
      CVec x0 = m.z0.tail(m.par_p);
      out.C[2] = D[1] * S;  // C_T = D^0 <S>^2
      cplx cs = 2.0 * D[2] * S;
      for (int l = 0; l < m.par_p; ++l)
        cs += (D0 * x0[l] - 2.0 * D[3 + l]) * x0[l];
      out.C[1] = cs;
      for (int l = 0; l < m.par_p; ++l) out.C[3 + l] = -2.0 * S * D[3 + l];
      out.C[0] = D[2] * S * S - S * out.C[1];
      finish(2);
      break;
    }
    case ModelKind::W: {
      cplx S = D[1] / D0, T = D[2] / D0;
      out.fixed = {{0, S}, {1, T}};
      out.free_dirs = {2};
      out.quadratic_constraints = 2;
      out.note =
          "both quadrics degenerate to cones through the reference point; "
          "rank taken there (not constant on the locus)";
      out.C[1] = D[2] * D[3] / D0;
      out.C[2] = D[1] * D[3] / D0;
      out.C[3] = D[1] * D[2] / D0;
      for (int a = 0; a < m.par_p; ++a)
        out.C[4 + a] = (-2.0 * (D0 * T - D[2]) * (D0 * m.z0[3 + a] - D[4 + a]) +
                        2.0 * D[2] * D[4 + a]) / D0;
      for (int l = 0; l < m.par_q; ++l)
        out.C[4 + m.par_p + l] =
            (-2.0 * (D0 * S - D[1]) * (D0 * m.z0[3 + m.par_p + l] - D[4 + m.par_p + l]) +
             2.0 * D[1] * D[4 + m.par_p + l]) / D0;
      out.C[0] = -D[3] * S * T;
      finish(2);
      break;
    }
    case ModelKind::Homogeneous: {
      int q = m.par_q, r = m.par_r;
      cplx h2 = D[2] / D0;
      out.fixed = {{1, h2}};
      for (int mu = 0; mu <= q; ++mu) out.fixed.push_back({2 + mu, D[3 + mu] / D0});
      out.free_dirs = {0};  // h1
      out.quadratic_constraints = q + 1;
      out.note = "delta-quadric coincides with the first gamma-quadric at the "
                 "reference point; rank taken there";
      CVec Dl(r), hmu(q + 1), h0(r);
      for (int l = 0; l < r; ++l) Dl[l] = D[4 + q + l];
      for (int mu = 0; mu <= q; ++mu) hmu[mu] = D[3 + mu] / D0;
      for (int l = 0; l < r; ++l) h0[l] = m.z0[3 + q + l];
      CVec v0 = Dl - D0 * h0;
      auto quad = [&](const Mat& G, const CVec& x, const CVec& y) {
        return (x.transpose() * G.cast<cplx>() * y)(0);
      };
      cplx DD = (Dl.transpose() * Dl)(0);
      cplx vv = (v0.transpose() * v0)(0);
      cplx Dmu2 = (hmu.transpose() * (D0 * hmu))(0) * D0;  // sum (D^mu)^2
      out.C[1] = (D[2] * D[2] - Dmu2) / D0;
      out.C[2] = (2.0 * D[1] * D[2] - DD + vv) / D0;
      for (int mu = 0; mu <= q; ++mu)
        out.C[3 + mu] = (quad(m.prep.gamma[mu], Dl, Dl) - 2.0 * D[1] * D[3 + mu] -
                         quad(m.prep.gamma[mu], v0, v0)) / D0;
      for (int l = 0; l < r; ++l) {
        cplx s = -2.0 * D[2] * Dl[l];
        for (int mu = 0; mu <= q; ++mu)
          s += 2.0 * D[3 + mu] * (m.prep.gamma[mu].row(l).transpose().cast<cplx>().dot(Dl));
        out.C[4 + q + l] = s / D0;
      }
      {
        cplx hmu2 = (hmu.transpose() * hmu)(0);
        cplx t1 = -D0 * D[1] * (h2 * h2 - hmu2);
        cplx t3 = -h2 * vv;
        cplx t5 = 0.0, t7 = 0.0;
        for (int mu = 0; mu <= q; ++mu) {
          t5 += hmu[mu] * quad(m.prep.gamma[mu], v0, v0);
          t7 -= hmu[mu] * quad(m.prep.gamma[mu], Dl, Dl);
        }
        cplx t6 = h2 * DD;
        out.C[0] = (t1 + t3 + t5 + t6 + t7) / D0;
      }
      finish(2 * q + 2);
      break;
    }
    default:
      throw BranchError("no branch analysis for this model");
  }
  return out;
}

CVec sample_base_point(const ModelDescriptor& m, Rng& rng) {
  double box = m.base_box;
  for (int attempt = 0; attempt < 400; ++attempt) {
    CVec z = m.z0 + random_cvec(rng, m.prep.n - 1, box);
    if (!in_domain(m.prep, z)) {
      if (attempt % 50 == 49) box *= 0.7;
      continue;
    }
    // keep clear of the cone boundary, where finite differences degrade
    BaseGeometry bg = base_geometry(m.prep, z);
    Eigen::SelfAdjointEigenSolver<CMat> es(bg.g);
    if (es.eigenvalues().minCoeff() < 1e-2 * es.eigenvalues().maxCoeff()) continue;
    return z;
  }
  throw ModelError("could not sample an in-domain base point for " + m.name);
}

ChartPoint sample_chart_point(const ModelDescriptor& m, Rng& rng) {
  int n = m.prep.n;
  ChartPoint p;
  p.z = sample_base_point(m, rng);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  p.phi = u(rng);
  p.phit = u(rng);
  p.a = random_vec(rng, n, 0.7);
  p.b = random_vec(rng, n, 0.7);
  return p;
}

MwedgeChart mwedge_chart(const ModelDescriptor& m, const QuotientSpec& q) {
  MwedgeChart ch;
  const CVec z0 = m.z0;
  const CVec D = q.D;
  switch (m.kind) {
    case ModelKind::Quadratic:
      ch.cdim = m.prep.n - 1;
      ch.box = 0.25;
      ch.chart = [z0](const CVec& t) {
        CVec z = z0;
        z += t;
        return z;
      };
      break;
    case ModelKind::Stu:
    case ModelKind::QuantumStu:
      ch.cdim = 1;
      ch.box = 0.25;
      ch.chart = [z0](const CVec& t) {
        CVec z = z0;
        z[2] += t[0];
        return z;
      };
      break;
    case ModelKind::St2: {
      ch.cdim = m.par_n - 3;
      ch.box = 0.15;
      int ny = m.par_n - 4;
      ch.chart = [z0, D, ny](const CVec& t) {
        CVec z = z0;
        z[2] += t[0];
        for (int l = 0; l < ny; ++l) z[3 + l] += t[1 + l];
        cplx num = 0.0;
        for (int l = 0; l < ny; ++l) num += (D[0] * z[3 + l] - 2.0 * D[4 + l]) * z[3 + l];
        z[1] = D[2] / D[0] - num / (D[0] * z[2] - D[3]);
        return z;
      };
      break;
    }
    case ModelKind::TSeries: {
      ch.cdim = m.par_p;  // T plus p-1 free x directions
      ch.box = 0.12;
      int p = m.par_p;
      CVec x0 = m.z0.tail(p);
      // kappa from the reference point
      cplx kappa = 0.0;
      for (int l = 0; l < p; ++l) kappa += (D[0] * x0[l] - 2.0 * D[3 + l]) * x0[l];
      ch.chart = [z0, D, p, x0, kappa](const CVec& t) {
        CVec z = z0;
        z[1] += t[0];
        for (int l = 0; l + 1 < p; ++l) z[2 + l] += t[1 + l];
        // solve the quadric for the last x component, branch near the center
        cplx rest = 0.0;
        for (int l = 0; l + 1 < p; ++l) rest += (D[0] * z[2 + l] - 2.0 * D[3 + l]) * z[2 + l];
        int L = p - 1;
        cplx A = D[0], B = -2.0 * D[3 + L], Cc = rest - kappa;
        cplx disc = std::sqrt(B * B - 4.0 * A * Cc);
        cplx r1 = (-B + disc) / (2.0 * A), r2 = (-B - disc) / (2.0 * A);
        z[2 + L] = (std::abs(r1 - x0[L]) < std::abs(r2 - x0[L])) ? r1 : r2;
        return z;
      };
      break;
    }
    case ModelKind::W:
      ch.cdim = 1;  // the U line through the reference point
      ch.box = 0.2;
      ch.chart = [z0](const CVec& t) {
        CVec z = z0;
        z[2] += t[0];
        return z;
      };
      break;
    case ModelKind::Homogeneous:
      ch.cdim = 1;  // the h1 line
      ch.box = 0.2;
      ch.chart = [z0](const CVec& t) {
        CVec z = z0;
        z[0] += t[0];
        return z;
      };
      break;
    default:
      throw ModelError("no constrained-base chart for this model");
  }
  return ch;
}

ChartPoint sample_N_point(const PrepotentialSpec& spec, const QuotientSpec& q,
                          const MwedgeChart& ch, Rng& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 200; ++attempt) {
    CVec t = random_cvec(rng, ch.cdim, ch.box);
    CVec z = ch.chart(t);
    if (!in_domain(spec, z)) continue;
    FiberFrame f;
    try {
      f = fiber_frame(spec, q, z);
    } catch (const Error&) {
      continue;
    }
    CVec x(spec.n - 1);
    x[0] = cplx(1.4 + 0.5 * u(rng), 0.5 * u(rng));
    for (int k = 1; k < spec.n - 1; ++k) x[k] = cplx(0.3 * u(rng), 0.3 * u(rng));
    CVec w = w_from_x(f, x);
    Vec imw = w.imag();
    double rho = x[0].real() + imw.dot(f.Ninv * imw);
    if (rho < 0.2) continue;
    return point_from_x(spec, f, x);
  }
  throw ModelError("could not sample a point on the constrained submanifold");
}

// ---- hyperbolic 4-space ----

namespace h4 {

Mat metric(const Vec& x) {
  Mat g = Mat::Identity(4, 4);
  double e = std::exp(-2.0 * x[0]);
  for (int i = 1; i < 4; ++i) g(i, i) = e;
  return g;
}

namespace {

Mat frame_J(int alpha) {
  Mat J = Mat::Zero(4, 4);
  auto set_pair = [&](int i, int j) {
    J(j, i) = 1.0;   // e_i -> e_j
    J(i, j) = -1.0;  // e_j -> -e_i
  };
  switch (alpha) {
    case 1: set_pair(0, 1); set_pair(2, 3); break;
    case 2: set_pair(0, 2); set_pair(3, 1); break;
    default: set_pair(0, 3); set_pair(1, 2); break;
  }
  return J;
}

}  // namespace

Mat J(int alpha, const Vec& x) {
  Vec scale(4);
  scale << 1.0, std::exp(x[0]), std::exp(x[0]), std::exp(x[0]);
  Mat C = scale.asDiagonal();
  Vec inv = scale.cwiseInverse();
  return C * frame_J(alpha) * Mat(inv.asDiagonal());
}

Vec omega(int alpha, const Vec& x) {
  Vec w = Vec::Zero(4);
  w[alpha] = -std::exp(-x[0]);
  return w;
}

Vec killing(int a, const Vec& x) {
  Vec k = Vec::Zero(4);
  if (a == 0) {
    k[0] = 1.0;
    for (int i = 1; i < 4; ++i) k[i] = x[i];
  } else {
    k[a] = 1.0;
  }
  return k;
}

Eigen::Vector3d moment_coeffs(int alpha, const Vec& x) {
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int be = 1; be <= 3; ++be) c[be - 1] = 0.5 * omega(be, x).dot(killing(alpha, x));
  return c;
}

MomentReport moment_check(const Vec& x) {
  MomentReport rep;
  double em = std::exp(-x[0]);

  for (int al = 1; al <= 3; ++al) {
    Eigen::Vector3d c = moment_coeffs(al, x);
    Eigen::Vector3d want = Eigen::Vector3d::Zero();
    want[al - 1] = -0.5 * em;
    rep.pattern_residual = std::max(rep.pattern_residual, (c - want).cwiseAbs().maxCoeff());
  }

  Mat g = metric(x);
  Mat P1 = -0.5 * em * J(1, x), P2 = -0.5 * em * J(2, x);
  Vec k1 = killing(1, x), k2 = killing(2, x);
  Vec lhs = P1 * (P2 * k1);
  double fhat = lhs.dot(g * k2) / k2.dot(g * k2);
  rep.p1p2_residual = (lhs - fhat * k2).cwiseAbs().maxCoeff();
  rep.f_residual = std::abs(4.0 * fhat - std::exp(-2.0 * x[0]));

  auto k1f = [](const Vec& y) { return killing(1, y); };
  auto k2f = [](const Vec& y) { return killing(2, y); };
  rep.bracket_residual = lie_bracket(k1f, k2f, x).cwiseAbs().maxCoeff();

  auto gf = [](const Vec& y) { return metric(y); };
  for (int a = 0; a < 4; ++a) {
    auto kf = [a](const Vec& y) { return killing(a, y); };
    rep.isometry_residual =
        std::max(rep.isometry_residual,
                 lie_derivative_metric(gf, kf, x).cwiseAbs().maxCoeff());
  }

  std::array<VecField, 3> wf{[](const Vec& y) { return omega(1, y); },
                             [](const Vec& y) { return omega(2, y); },
                             [](const Vec& y) { return omega(3, y); }};
  std::array<MatField, 3> phif{[](const Vec& y) { return Mat(metric(y) * J(1, y)); },
                               [](const Vec& y) { return Mat(metric(y) * J(2, y)); },
                               [](const Vec& y) { return Mat(metric(y) * J(3, y)); }};
  auto se = structure_equation_fit(wf, phif, x);
  rep.nu_hat = se.nu_hat;
  rep.structure_residual = *std::max_element(se.residual.begin(), se.residual.end());

  std::array<MatField, 3> Jf{[](const Vec& y) { return J(1, y); },
                             [](const Vec& y) { return J(2, y); },
                             [](const Vec& y) { return J(3, y); }};
  auto pc = [](const Vec& y) {
    Eigen::Vector3d c;
    for (int al = 1; al <= 3; ++al) c[al - 1] = 0.5 * omega(al, y).dot(killing(1, y));
    return c;
  };
  rep.moment_identity_residual =
      moment_derivative_residual(pc, wf, Jf, gf, k1f, se.nu_hat, x);
  return rep;
}

}  // namespace h4

QuadraticProductReport quadratic_product_check(const ModelDescriptor& m, std::uint64_t seed,
                                               int samples) {
  if (m.kind != ModelKind::Quadratic) throw ModelError("product check needs a quadratic model");
  QuadraticProductReport rep;
  auto rec = recommended_recipe(m, seed);
  QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, seed);
  auto ch = mwedge_chart(m, q);
  MprimeChart mp = make_mprime_chart(m.prep, q, ch.chart, ch.cdim, ch.chart(CVec::Zero(ch.cdim)));

  Rng rng(seed);
  int kb = 2 * mp.base_cdim;
  std::uniform_real_distribution<double> u(-1.0, 1.0);

  auto sample_y = [&]() {
    Vec y = Vec::Zero(mp.dim());
    for (int i = 0; i < kb; ++i) y[i] = 0.2 * u(rng);
    y[kb] = 1.5 + 0.4 * u(rng);  // Re x^0
    y[kb + 1] = 0.4 * u(rng);
    for (int i = kb + 2; i < mp.dim(); ++i) y[i] = 0.25 * u(rng);
    return y;
  };

  for (int s = 0; s < samples; ++s) {
    Vec y = sample_y();
    Mat h = mp.metric_at(y);
    double scale = h.cwiseAbs().maxCoeff();
    rep.cross_block = std::max(
        rep.cross_block, h.topRightCorner(kb, mp.dim() - kb).cwiseAbs().maxCoeff() / scale);

    // fiber block at a second base point, same fiber coordinates
    Vec y2 = y;
    for (int i = 0; i < kb; ++i) y2[i] = 0.2 * u(rng);
    Mat h2 = mp.metric_at(y2);
    Mat fib1 = h.bottomRightCorner(mp.dim() - kb, mp.dim() - kb);
    Mat fib2 = h2.bottomRightCorner(mp.dim() - kb, mp.dim() - kb);
    rep.fiber_base_dependence =
        std::max(rep.fiber_base_dependence,
                 (fib1 - fib2).cwiseAbs().maxCoeff() / fib1.cwiseAbs().maxCoeff());

    // base block vs projective special Kahler metric
    Mat hb = horizontal_base_metric(h, kb);
    CVec t = CVec::Zero(mp.base_cdim);
    for (int k = 0; k < mp.base_cdim; ++k) t[k] = cplx(y[2 * k], y[2 * k + 1]);
    BaseGeometry bg = base_geometry(m.prep, ch.chart(t));
    CMat rows = CMat::Zero(mp.base_cdim, 2 * mp.base_cdim);
    for (int f = 0; f < mp.base_cdim; ++f)
      for (int a = 0; a < mp.base_cdim; ++a) {
        rows(f, 2 * a) = bg.e(a, f);
        rows(f, 2 * a + 1) = ci * bg.e(a, f);
      }
    Mat gsk = (rows.adjoint() * rows).real();
    rep.base_vs_sk = std::max(rep.base_vs_sk,
                              (hb - gsk).cwiseAbs().maxCoeff() / gsk.cwiseAbs().maxCoeff());
  }

  // curvature of the two factors
  int fibdim = mp.dim() - kb;
  Vec ycenter = sample_y();
  auto fiber_field = [&](const Vec& xf) {
    Vec y = ycenter;
    y.tail(fibdim) = xf;
    Mat h = mp.metric_at(y);
    return Mat(h.bottomRightCorner(fibdim, fibdim));
  };
  auto base_field = [&](const Vec& tb) {
    Vec y = ycenter;
    y.head(kb) = tb;
    return horizontal_base_metric(mp.metric_at(y), kb);
  };
  Mat Jf = Mat::Zero(fibdim, fibdim), Jb = Mat::Zero(kb, kb);
  for (int k = 0; k < fibdim / 2; ++k) {
    Jf(2 * k, 2 * k + 1) = -1;
    Jf(2 * k + 1, 2 * k) = 1;
  }
  for (int k = 0; k < kb / 2; ++k) {
    Jb(2 * k, 2 * k + 1) = -1;
    Jb(2 * k + 1, 2 * k) = 1;
  }
  std::vector<double> base_vals;
  for (int s = 0; s < std::min(samples, 4); ++s) {
    Vec xf = ycenter.tail(fibdim);
    for (int i = 0; i < fibdim; ++i) xf[i] += 0.1 * u(rng);
    auto cs = riemann(fiber_field, xf);
    Vec X = random_unit_vec(rng, fibdim);
    rep.fiber_holsec_dev =
        std::max(rep.fiber_holsec_dev, std::abs(holomorphic_sectional(cs, Jf, X) + 4.0));

    Vec tb = ycenter.head(kb);
    for (int i = 0; i < kb; ++i) tb[i] += 0.1 * u(rng);
    auto cb = riemann(base_field, tb);
    Vec Xb = random_unit_vec(rng, kb);
    base_vals.push_back(holomorphic_sectional(cb, Jb, Xb));
  }
  double bmin = *std::min_element(base_vals.begin(), base_vals.end());
  double bmax = *std::max_element(base_vals.begin(), base_vals.end());
  rep.base_holsec_spread = bmax - bmin;
  rep.base_holsec_value = 0.5 * (bmax + bmin);
  return rep;
}

QuantumConformalReport quantum_stu_conformal_check(cplx vevT, std::uint64_t seed, int samples) {
  QuantumConformalReport rep;
  auto run = [&](cplx t, double& ratio_res, double& aniso) {
    std::ostringstream os;
    os << "quantum_stu:t=" << t.real() << (t.imag() >= 0 ? "+" : "") << t.imag() << "i";
    ModelDescriptor rq = make_model(os.str());
    ModelDescriptor r0 = make_model("stu");
    double c = 8.0 / 3.0 * std::pow(t.imag(), 3);
    Rng rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = 0.0, worst_aniso = 0.0;
    for (int s = 0; s < samples; ++s) {
      CVec z(3);
      z << ci, t, cplx(0.4 * u(rng), 1.0 + 0.4 * u(rng));
      if (!in_domain(rq.prep, z) || !in_domain(r0.prep, z)) continue;
      BaseGeometry bq = base_geometry(rq.prep, z);
      BaseGeometry b0 = base_geometry(r0.prep, z);
      double K0 = b0.K;
      double predicted = std::pow(std::exp(-K0) / (std::exp(-K0) + c), 2);
      double measured = bq.g(2, 2).real() / b0.g(2, 2).real();
      worst = std::max(worst, std::abs(measured / predicted - 1.0));
      // the U-block of the real metric is g_UU * Id2 for both models; compare
      // the full ratio matrix against the scalar
      Mat rq2 = Mat::Identity(2, 2) * bq.g(2, 2).real();
      Mat r02 = Mat::Identity(2, 2) * b0.g(2, 2).real();
      Mat R = rq2 * r02.inverse();
      worst_aniso = std::max(worst_aniso, (R - R(0, 0) * Mat::Identity(2, 2)).cwiseAbs().maxCoeff());
    }
    ratio_res = worst;
    aniso = worst_aniso;
  };
  run(vevT, rep.ratio_residual, rep.anisotropy);
  double dummy;
  cplx treal(vevT.real(), 1e-4);
  double res_real;
  run(treal, res_real, dummy);
  // for (near-)real vev the conformal factor is 1 within tolerance
  rep.real_limit_residual = res_real;
  return rep;
}

}  // namespace cmaplab
