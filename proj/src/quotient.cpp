#include "cmaplab/quotient.hpp"

#include <algorithm>

namespace cmaplab {

namespace {

Mat real_metric_from_rows(const CMat& rows) {
  Mat g = (rows.adjoint() * rows).real();
  return 0.5 * (g + g.transpose());
}

// complex row over interleaved real pairs (Re c_0, Im c_0, ...)
Eigen::RowVectorXcd complex_row(const Eigen::RowVectorXcd& coef) {
  Eigen::RowVectorXcd r(2 * coef.size());
  for (int k = 0; k < coef.size(); ++k) {
    r[2 * k] = coef[k];
    r[2 * k + 1] = ci * coef[k];
  }
  return r;
}

CVec pack_to_cvec(const Vec& y, int off, int m) {
  CVec c(m);
  for (int k = 0; k < m; ++k) c[k] = cplx(y[off + 2 * k], y[off + 2 * k + 1]);
  return c;
}

Vec cvec_to_pack(const CVec& c) {
  Vec y(2 * c.size());
  for (int k = 0; k < c.size(); ++k) {
    y[2 * k] = c[k].real();
    y[2 * k + 1] = c[k].imag();
  }
  return y;
}

}  // namespace

CVec null_vector_sample(const PrepotentialSpec& spec, const CVec& Z0, std::uint64_t seed) {
  Jet3 jet = eval_jet(spec, Z0);
  Mat N = n_matrix(jet);
  int n = spec.n;
  auto sig = signature(N);
  if (sig.first != 1 || sig.second != n - 1)
    throw SignatureError("N(Z0) does not have signature (1, n-1)");

  Eigen::SelfAdjointEigenSolver<Mat> es(N);
  int pos = -1;
  for (int i = 0; i < n; ++i)
    if (es.eigenvalues()[i] > 0) pos = i;
  Rng rng(seed);
  Vec cneg = random_unit_vec(rng, n - 1);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * M_PI);
  double theta = ang(rng), psi = ang(rng);

  CVec D = CVec::Zero(n);
  D += es.eigenvectors().col(pos).cast<cplx>() / std::sqrt(es.eigenvalues()[pos]);
  int j = 0;
  for (int i = 0; i < n; ++i) {
    if (i == pos) continue;
    D += std::exp(ci * theta) * cneg[j] * es.eigenvectors().col(i).cast<cplx>() /
         std::sqrt(-es.eigenvalues()[i]);
    ++j;
  }
  D *= std::exp(ci * psi);
  return D;
}

namespace {

int svd_rank(const CMat& G, std::vector<double>& sv, bool& unstable) {
  Eigen::JacobiSVD<CMat> svd(G);
  sv.assign(svd.singularValues().data(), svd.singularValues().data() + svd.singularValues().size());
  double smax = sv.empty() ? 0.0 : sv[0];
  if (smax == 0.0) { unstable = false; return 0; }
  int r = 0;
  unstable = false;
  for (double s : sv) {
    if (s > 1e-8 * smax) ++r;
    if (s > 1e-10 * smax && s < 1e-6 * smax) unstable = true;
  }
  return r;
}

}  // namespace

QuotientSpec make_quotient_spec(const PrepotentialSpec& spec, const CVec& Z0, const CVec& D,
                                cplx Ctilde, std::uint64_t probe_seed) {
  Jet3 jet = eval_jet(spec, Z0);
  Mat N = n_matrix(jet);
  double scale = D.squaredNorm() * std::max(1.0, N.cwiseAbs().maxCoeff());
  double nullres = std::abs((D.adjoint() * N.cast<cplx>() * D)(0));
  if (nullres > 1e-10 * scale)
    throw NullConditionError("D is not null at Z0 (residual " + std::to_string(nullres) + ")");

  QuotientSpec q;
  q.n = spec.n;
  q.Z0 = Z0;
  q.D = D;
  q.C = jet.FAB * D;  // symmetric contraction D^A F_AB
  q.Ctilde = Ctilde;

  CMat G = jet.contract_fabc(D);
  q.r = svd_rank(G, q.singular_values, q.rank_unstable);
  int n = spec.n;
  q.dim_N_real = 4 * n - 2 * (q.r + 1);
  q.dim_Mprime_real = 4 * (n - 1) - 2 * q.r;
  q.cdim_Mwedge = n - 1 - q.r;
  q.cdim_Mprime = 2 * (n - 1) - q.r;
  if (q.rank_unstable) q.warning += "singular values cluster at the rank threshold; ";

  // constant-rank probe on the analytic set near Z0
  if (std::abs(Z0[0]) > 1e-10) {
    CVec z0 = Z0.tail(n - 1) / Z0[0];
    Rng rng(probe_seed);
    int disagreements = 0;
    for (int t = 0; t < 20; ++t) {
      CVec zs = z0 + random_cvec(rng, n - 1, 1e-2);
      try {
        zs = newton_project_base(spec, q, zs, 40, 1e-12);
        Jet3 js = eval_jet(spec, lift(zs));
        std::vector<double> sv;
        bool uns = false;
        int rr = svd_rank(js.contract_fabc(D), sv, uns);
        if (rr != q.r) ++disagreements;
      } catch (const Error&) {
        ++disagreements;
      }
    }
    if (disagreements > 0) {
      q.rank_constant_nearby = false;
      q.warning += "rank of D.F_ABC is not constant near Z0 (" +
                   std::to_string(disagreements) + "/20 probes differ); ";
    }
  } else {
    q.warning += "Z0 has no inhomogeneous chart (Z0^0 ~ 0); rank-constancy probe skipped; ";
  }
  return q;
}

std::pair<double, double> membership(const PrepotentialSpec& spec, const QuotientSpec& q,
                                     const ChartPoint& p) {
  Jet3 jet = eval_jet(spec, lift(p.z));
  double r1 = (jet.FAB * q.D - q.C).norm();
  CVec w = p.b.cast<cplx>() - jet.FAB * p.a.cast<cplx>();
  cplx dw = (q.D.transpose() * w)(0);
  return {r1, std::abs(dw - q.Ctilde)};
}

KillingCombo xi1_combo(const QuotientSpec& q) {
  KillingCombo c;
  c.cphit = q.Ctilde.real();
  c.ca = q.D.real();
  c.cb = q.C.real();
  return c;
}

KillingCombo xi2_combo(const QuotientSpec& q) {
  KillingCombo c;
  c.cphit = q.Ctilde.imag();
  c.ca = q.D.imag();
  c.cb = q.C.imag();
  return c;
}

std::pair<Vec, Vec> xi_fields(const QuotientSpec& q, const ChartPoint& p) {
  return {killing_value(xi1_combo(q), p), killing_value(xi2_combo(q), p)};
}

ChartPoint act(const QuotientSpec& q, cplx lambda, const ChartPoint& p) {
  double l1 = lambda.real(), l2 = lambda.imag();
  ChartPoint r = p;
  r.phit = p.phit - l1 * q.Ctilde.real() - l2 * q.Ctilde.imag();
  r.a = p.a + l1 * q.D.real() + l2 * q.D.imag();
  r.b = p.b + l1 * q.C.real() + l2 * q.C.imag();
  return r;
}

HoloCoords act_w(const PrepotentialSpec& spec, const QuotientSpec& q, cplx lambda,
                 const HoloCoords& h, const CVec& z) {
  Jet3 jet = eval_jet(spec, lift(z));
  CVec shift = q.C.conjugate() - jet.FAB * q.D.conjugate();
  HoloCoords out;
  out.w = h.w + 0.5 * lambda * shift;
  cplx dbar_w = (q.D.conjugate().transpose() * h.w)(0);
  cplx dbar_shift = (q.D.conjugate().transpose() * shift)(0);
  out.w0 = h.w0 - ci * lambda * dbar_w + ci * lambda * std::conj(q.Ctilde) -
           ci * lambda * lambda / 4.0 * dbar_shift;
  return out;
}

FiberFrame fiber_frame(const PrepotentialSpec& spec, const QuotientSpec& q, const CVec& z) {
  int n = spec.n;
  FiberFrame f;
  f.z = z;
  Jet3 jet = eval_jet(spec, lift(z));
  f.FAB = jet.FAB;
  f.N = n_matrix(jet);
  Eigen::FullPivLU<Mat> lu(f.N);
  if (!lu.isInvertible()) throw SignatureError("N singular at the fiber base point");
  f.Ninv = lu.inverse();

  CVec Z = lift(z);
  int slot = 0;
  for (int A = 0; A < n; ++A)
    if (std::abs(Z[A]) > std::abs(Z[slot])) slot = A;
  f.Zhat = Z / Z[slot];
  f.slot = slot;

  double best = -1.0;
  int pivot = -1;
  for (int A = 0; A < n; ++A) {
    if (A == slot) continue;
    double v = std::abs(q.D[A] - q.D[slot] * f.Zhat[A]);
    if (v > best) { best = v; pivot = A; }
  }
  if (best < 1e-8 * std::max(1.0, q.D.norm()))
    throw PivotError("no usable pivot: D is proportional to Z at this base point");
  f.pivot = pivot;
  f.alpha = 1.0 / (q.D[pivot] - q.D[slot] * f.Zhat[pivot]);

  f.free_idx.clear();
  for (int A = 0; A < n; ++A)
    if (A != slot && A != pivot) f.free_idx.push_back(A);

  // w_slot  = alpha ((Zhat^pivot D^a - Zhat^a D^pivot) x_a - Zhat^pivot Ctilde)
  // w_pivot = alpha (Ctilde - (D^a - D^slot Zhat^a) x_a)
  // w_a     = x_a
  f.T = CMat::Zero(n, n - 2);
  f.cc = CVec::Zero(n);
  for (int t = 0; t < n - 2; ++t) {
    int a = f.free_idx[t];
    f.T(f.slot, t) = f.alpha * (f.Zhat[f.pivot] * q.D[a] - f.Zhat[a] * q.D[f.pivot]);
    f.T(f.pivot, t) = -f.alpha * (q.D[a] - q.D[f.slot] * f.Zhat[a]);
    f.T(a, t) = 1.0;
  }
  f.cc[f.slot] = -f.alpha * f.Zhat[f.pivot] * q.Ctilde;
  f.cc[f.pivot] = f.alpha * q.Ctilde;
  return f;
}

CVec w_from_x(const FiberFrame& f, const CVec& x) {
  return f.T * x.tail(x.size() - 1) + f.cc;
}

ChartPoint point_from_x(const PrepotentialSpec& spec, const FiberFrame& f, const CVec& x) {
  return chart_from_w(spec, f.z, x[0], w_from_x(f, x));
}

FiberQuotientChart canonical_representative(const PrepotentialSpec& spec, const QuotientSpec& q,
                                            const ChartPoint& p) {
  auto [r1, r2] = membership(spec, q, p);
  double scale = std::max(1.0, q.C.norm());
  if (r1 > 1e-6 * scale || r2 > 1e-6 * scale)
    throw DomainError("point is not on N (membership residuals too large)");

  CVec Z = lift(p.z);
  Jet3 jet = eval_jet(spec, Z);
  Mat N = n_matrix(jet);
  cplx znd = (Z.transpose() * N.cast<cplx>() * q.D.conjugate())(0);
  if (std::abs(znd) < 1e-12)
    throw DomainError("Z N Dbar vanishes; canonical representative undefined");

  HoloCoords h = holo_coords(spec, p);
  cplx zw = (Z.transpose() * h.w)(0);
  cplx lam = -ci * zw / znd;
  ChartPoint ps = act(q, lam, p);

  FiberFrame f = fiber_frame(spec, q, p.z);
  HoloCoords hs = holo_coords(spec, ps);
  // x^0 = w^0, x_a = the free components (note Zhat.w = 0 holds by the shift)
  FiberQuotientChart chart;
  chart.z = p.z;
  chart.slot = f.slot;
  chart.pivot = f.pivot;
  chart.alpha = f.alpha;
  chart.lambda_star = lam;
  chart.x = CVec(q.n - 1);
  chart.x[0] = hs.w0;
  for (int t = 0; t < q.n - 2; ++t) chart.x[t + 1] = hs.w[f.free_idx[t]];
  return chart;
}

Mat fiber_metric_closed(const PrepotentialSpec& spec, const FiberFrame& f, const Vec& xreal) {
  int n = static_cast<int>(f.N.rows());
  int m = n - 1;  // complex fiber dimension
  CVec x = pack_to_cvec(xreal, 0, m);
  CVec w = w_from_x(f, x);
  Vec imw = w.imag();
  double rho = x[0].real() + imw.dot(f.Ninv * imw);
  if (rho <= 0.0) throw DomainError("fiber point outside the domain");
  double e2phi = 1.0 / rho, e4phi = e2phi * e2phi;

  CMat NT = f.Ninv.cast<cplx>() * f.T;  // n x (n-2)
  CMat Ntilde = f.T.adjoint() * NT;
  CVec Nt0 = CVec::Zero(n - 2);
  CMat Nt1 = CMat::Zero(n - 2, n - 2), Nt2 = CMat::Zero(n - 2, n - 2);
  for (int b = 0; b < n - 2; ++b) {
    for (int A = 0; A < n; ++A) {
      Nt0[b] += f.cc[A].imag() * NT(A, b);
      for (int a = 0; a < n - 2; ++a) {
        Nt1(a, b) += f.T(A, a).imag() * NT(A, b);
        Nt2(a, b) += f.T(A, a).real() * NT(A, b);
      }
    }
  }
  // beta_b = Nt0^b + Re(x_a) Nt1^{ab} + Im(x_a) Nt2^{ab}
  Eigen::RowVectorXcd beta = Nt0.transpose();
  for (int a = 0; a < n - 2; ++a) {
    beta += x[a + 1].real() * Nt1.row(a);
    beta += x[a + 1].imag() * Nt2.row(a);
  }
  // eta = dx^0 - 2i beta_b dx_b; contribution 1/4 e^{4phi} |eta|^2
  Eigen::RowVectorXcd eta(m);
  eta[0] = 1.0;
  for (int b = 0; b < n - 2; ++b) eta[b + 1] = -2.0 * ci * beta[b];
  // -1/2 e^{2phi} dxbar Ntilde dx with -Ntilde = M^H M
  Eigen::LLT<CMat> llt(-Ntilde);
  if (llt.info() != Eigen::Success)
    throw DegenerateQuotient("Ntilde is not negative definite at this base point");
  CMat M = CMat(llt.matrixU());

  CMat rows = CMat::Zero(1 + (n - 2), 2 * m);
  rows.row(0) = 0.5 * e2phi * complex_row(eta);
  for (int k = 0; k < n - 2; ++k) {
    Eigen::RowVectorXcd coef = Eigen::RowVectorXcd::Zero(m);
    for (int b = 0; b < n - 2; ++b) coef[b + 1] = M(k, b);
    rows.row(1 + k) = std::sqrt(0.5 * e2phi) * complex_row(coef);
  }
  (void)e4phi;
  return real_metric_from_rows(rows);
}

FiberMetricSample fiber_quotient_metric(const PrepotentialSpec& spec, const QuotientSpec& q,
                                        const CVec& z, const CVec& x) {
  int n = spec.n;
  int m = n - 1;
  FiberFrame f = fiber_frame(spec, q, z);
  FiberMetricSample out;

  CMat NT = f.Ninv.cast<cplx>() * f.T;
  out.Ntilde = f.T.adjoint() * NT;
  out.Nt0 = CVec::Zero(n - 2);
  out.Nt1 = CMat::Zero(n - 2, n - 2);
  out.Nt2 = CMat::Zero(n - 2, n - 2);
  for (int b = 0; b < n - 2; ++b)
    for (int A = 0; A < n; ++A) {
      out.Nt0[b] += f.cc[A].imag() * NT(A, b);
      for (int a = 0; a < n - 2; ++a) {
        out.Nt1(a, b) += f.T(A, a).imag() * NT(A, b);
        out.Nt2(a, b) += f.T(A, a).real() * NT(A, b);
      }
    }

  out.h_closed = fiber_metric_closed(spec, f, cvec_to_pack(x));

  // degenerate pullback route
  ChartPoint p = point_from_x(spec, f, x);
  Mat g = metric(spec, p);
  auto [xi1, xi2] = xi_fields(q, p);
  CVec k = xi2.cast<cplx>() + ci * xi1.cast<cplx>();
  CVec gk = g.cast<cplx>() * k;
  double gkk = (k.transpose() * g.cast<cplx>() * k.conjugate())(0).real();
  if (gkk < 1e-10) throw DegenerateQuotient("|xi| vanishes at the sample point");

  Mat corr = Mat::Zero(4 * n, 4 * n);
  for (int i = 0; i < 4 * n; ++i)
    for (int j = 0; j < 4 * n; ++j)
      corr(i, j) = (gk[i] * std::conj(gk[j])).real() * 2.0 / gkk;
  Mat gdeg = g - corr;

  // chart tangents by finite differences of the embedding
  Vec x0 = cvec_to_pack(x);
  Mat S(4 * n, 2 * m);
  double h = 1e-6;
  for (int i = 0; i < 2 * m; ++i) {
    Vec xp = x0, xm = x0;
    xp[i] += h;
    xm[i] -= h;
    Vec cp = to_coords(point_from_x(spec, f, pack_to_cvec(xp, 0, m)));
    Vec cm = to_coords(point_from_x(spec, f, pack_to_cvec(xm, 0, m)));
    S.col(i) = (cp - cm) / (2.0 * h);
  }
  out.h_pullback = S.transpose() * gdeg * S;
  out.h_pullback = 0.5 * (out.h_pullback + out.h_pullback.transpose());

  double kscale = std::max(1.0, gk.norm() * S.cwiseAbs().maxCoeff());
  out.kernel_residual = (S.transpose() * gk).cwiseAbs().maxCoeff() / kscale;
  double scale = std::max(1.0, out.h_closed.cwiseAbs().maxCoeff());
  out.route_gap = (out.h_closed - out.h_pullback).cwiseAbs().maxCoeff() / scale;
  return out;
}

CVec FiberNormalForm::y_to_x(const CVec& y) const {
  int m = static_cast<int>(y.size());
  CVec ya = y.tail(m - 1);
  CVec x(m);
  x.tail(m - 1) = Lx * ya;
  cplx quad = 0.5 * (ya.transpose() * A * ya)(0) + (rlin.transpose() * ya)(0);
  x[0] = y[0] - quad;
  return x;
}

CVec FiberNormalForm::x_to_y(const CVec& x) const {
  int m = static_cast<int>(x.size());
  CVec xa = x.tail(m - 1);
  CVec ya = Lx.fullPivLu().solve(xa);
  CVec y(m);
  cplx quad = 0.5 * (ya.transpose() * A * ya)(0) + (rlin.transpose() * ya)(0);
  y[0] = x[0] + quad;
  y.tail(m - 1) = ya;
  return y;
}

FiberNormalForm fiber_normal_form(const FiberFrame& f, const CMat& Ntilde, const CVec& Nt0,
                                  const CMat& Nt1, const CMat& Nt2) {
  FiberNormalForm nf;
  // Lx with Lx^H Ntilde Lx = -Id
  Eigen::LLT<CMat> llt(-Ntilde);
  if (llt.info() != Eigen::Success)
    throw DegenerateQuotient("Ntilde is not negative definite");
  CMat U = CMat(llt.matrixU());
  nf.Lx = U.inverse();
  // With x_a = L y_a and x^0 = y^0 - (1/2 y A y + r.y), the connection row of
  // the closed form becomes dy^0 + 2i Im(y) dy provided (using N2 - i N1 = Ntilde
  // and N1 - i N2 = -i Psi, Psi = T^t Ninv T symmetric):
  //   A = -(Id + L^t Psi L),   r = -2i L^t Nt0.
  CMat Psi = f.T.transpose() * f.Ninv.cast<cplx>() * f.T;
  int m2 = static_cast<int>(Ntilde.rows());
  CMat Am = -(CMat::Identity(m2, m2) + nf.Lx.transpose() * Psi * nf.Lx);
  nf.A = 0.5 * (Am + Am.transpose());
  nf.rlin = -2.0 * ci * (nf.Lx.transpose() * Nt0);
  (void)Nt1;
  (void)Nt2;
  return nf;
}

Mat fiber_metric_normal_expected(double e2phi_inv, const CVec& y) {
  int m = static_cast<int>(y.size());
  double e2phi = 1.0 / e2phi_inv;
  Eigen::RowVectorXcd eta(m);
  eta[0] = 1.0;
  for (int b = 1; b < m; ++b) eta[b] = 2.0 * ci * y[b].imag();
  CMat rows = CMat::Zero(m, 2 * m);
  rows.row(0) = 0.5 * e2phi * complex_row(eta);
  for (int b = 1; b < m; ++b) {
    Eigen::RowVectorXcd coef = Eigen::RowVectorXcd::Zero(m);
    coef[b] = 1.0;
    rows.row(b) = std::sqrt(0.5 * e2phi) * complex_row(coef);
  }
  return real_metric_from_rows(rows);
}

std::pair<double, double> base_tangent_check(const SymCubic& d, const CVec& D, const CVec& z0,
                                             const CVec& alpha) {
  int m = d.dim();
  CVec v(m);
  for (int j = 0; j < m; ++j) v[j] = D[j + 1] - D[0] * z0[j];
  CVec lin = d.contract2(v, alpha);
  cplx cub = d.contract3(alpha, alpha, alpha);
  return {lin.norm(), std::abs(cub)};
}

CVec newton_project_base(const PrepotentialSpec& spec, const QuotientSpec& q, CVec z, int iters,
                         double tol) {
  int n = spec.n;
  for (int it = 0; it < iters; ++it) {
    Jet3 jet = eval_jet(spec, lift(z));
    CVec res = jet.FAB * q.D - q.C;
    if (res.norm() < tol) return z;
    CMat G = jet.contract_fabc(q.D);  // d(D^A F_AB)/dZ^C
    CMat J(n, n - 1);
    for (int c = 0; c < n - 1; ++c) J.col(c) = G.col(c + 1);
    CVec dz = J.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(res);
    z -= dz;
  }
  Jet3 jet = eval_jet(spec, lift(z));
  if ((jet.FAB * q.D - q.C).norm() > 1e-8)
    throw Error("newton projection onto the constrained base did not converge");
  return z;
}

ChartPoint MprimeChart::embed(const Vec& y) const {
  CVec t = pack_to_cvec(y, 0, base_cdim);
  CVec z = base_chart(t);
  CVec x = pack_to_cvec(y, 2 * base_cdim, fiber_cdim());
  CVec w = w_from_x(frame, x);
  return chart_from_w(spec, z, x[0], w);
}

Mat MprimeChart::metric_at(const Vec& y) const {
  ChartPoint p = embed(y);
  int big = 4 * spec.n, small = dim();
  Mat g = metric(spec, p);
  auto [xi1, xi2] = xi_fields(q, p);
  Mat B(big, 2);
  B.col(0) = xi1;
  B.col(1) = xi2;
  Mat M2 = B.transpose() * g * B;
  Mat S(big, small);
  double h = 1e-6;
  for (int i = 0; i < small; ++i) {
    Vec yp = y, ym = y;
    yp[i] += h;
    ym[i] -= h;
    S.col(i) = (to_coords(embed(yp)) - to_coords(embed(ym))) / (2.0 * h);
  }
  Mat Sp = S - B * M2.ldlt().solve(B.transpose() * g * S);
  Mat out = Sp.transpose() * g * Sp;
  return 0.5 * (out + out.transpose());
}

Mat MprimeChart::Jstd() const {
  int m = dim();
  Mat J = Mat::Zero(m, m);
  for (int k = 0; k < m / 2; ++k) {
    J(2 * k, 2 * k + 1) = -1.0;
    J(2 * k + 1, 2 * k) = 1.0;
  }
  return J;
}

MprimeChart make_mprime_chart(const PrepotentialSpec& spec, const QuotientSpec& q,
                              std::function<CVec(const CVec&)> base_chart, int base_cdim,
                              const CVec& z_center) {
  MprimeChart c{spec, q, std::move(base_chart), base_cdim, fiber_frame(spec, q, z_center)};
  return c;
}

Mat horizontal_base_metric(const Mat& h, int base_real_dim) {
  int k = base_real_dim, m = static_cast<int>(h.rows());
  Mat htt = h.topLeftCorner(k, k);
  Mat htx = h.topRightCorner(k, m - k);
  Mat hxx = h.bottomRightCorner(m - k, m - k);
  return htt - htx * hxx.ldlt().solve(htx.transpose());
}

}  // namespace cmaplab
