#include "cmaplab/cmap_geometry.hpp"

namespace cmaplab {

Vec to_coords(const ChartPoint& p) {
  int n = p.n();
  CoordLayout L(n);
  Vec x = Vec::Zero(L.dim());
  for (int a = 0; a < n - 1; ++a) {
    x[L.re_z(a)] = p.z[a].real();
    x[L.im_z(a)] = p.z[a].imag();
  }
  x[L.phi()] = p.phi;
  x[L.phit()] = p.phit;
  for (int A = 0; A < n; ++A) {
    x[L.a_idx(A)] = p.a[A];
    x[L.b_idx(A)] = p.b[A];
  }
  return x;
}

ChartPoint from_coords(int n, const Vec& x) {
  CoordLayout L(n);
  ChartPoint p;
  p.z = CVec(n - 1);
  for (int a = 0; a < n - 1; ++a) p.z[a] = cplx(x[L.re_z(a)], x[L.im_z(a)]);
  p.phi = x[L.phi()];
  p.phit = x[L.phit()];
  p.a = Vec(n);
  p.b = Vec(n);
  for (int A = 0; A < n; ++A) {
    p.a[A] = x[L.a_idx(A)];
    p.b[A] = x[L.b_idx(A)];
  }
  return p;
}

CoframeSample coframe(const PrepotentialSpec& spec, const ChartPoint& p) {
  int n = spec.n;
  CoordLayout L(n);
  CoframeSample cf;
  cf.n = n;
  cf.base = base_geometry(spec, p.z);
  const BaseGeometry& bg = cf.base;
  const CVec Z = lift(p.z);
  cf.rows = CMat::Zero(2 * n, L.dim());

  // u = i e^{K/2+phi} Z^A (db_A - F_AB da^B)
  cplx cu = ci * std::exp(0.5 * bg.K + p.phi);
  CVec ZF = bg.jet.FAB * Z;  // = F_A by homogeneity
  for (int A = 0; A < n; ++A) {
    cf.rows(0, L.b_idx(A)) = cu * Z[A];
    cf.rows(0, L.a_idx(A)) = -cu * ZF[A];
  }

  // v = -dphi + i/2 e^{2phi} (dphit + b_A da^A - a^A db_A); this orientation
  // makes (u, vbar, e, Ebar) the (1,0)-frame of the integrable structure that
  // belongs to the parallel quaternionic bundle.
  cplx cv = 0.5 * ci * std::exp(2.0 * p.phi);
  cf.rows(1, L.phi()) = -1.0;
  cf.rows(1, L.phit()) = cv;
  for (int A = 0; A < n; ++A) {
    cf.rows(1, L.a_idx(A)) = cv * p.b[A];
    cf.rows(1, L.b_idx(A)) = -cv * p.a[A];
  }

  // e^f = e_a^f dz^a
  for (int f = 0; f < n - 1; ++f)
    for (int a = 0; a < n - 1; ++a) {
      cf.rows(2 + f, L.re_z(a)) = bg.e(a, f);
      cf.rows(2 + f, L.im_z(a)) = ci * bg.e(a, f);
    }

  // E^f = -i/2 e^{phi-K/2} Pi_A^f N^{AB} (db_B - conj(F)_BC da^C)
  cplx cE = -0.5 * ci * std::exp(p.phi - 0.5 * bg.K);
  CMat W = bg.Pi.transpose() * bg.Ninv.cast<cplx>();       // (n-1) x n
  CMat WF = W * bg.jet.FAB.conjugate();                    // (n-1) x n
  for (int f = 0; f < n - 1; ++f)
    for (int B = 0; B < n; ++B) {
      cf.rows(2 + (n - 1) + f, L.b_idx(B)) = cE * W(f, B);
      cf.rows(2 + (n - 1) + f, L.a_idx(B)) = -cE * WF(f, B);
    }
  return cf;
}

Mat metric_from_coframe(const CoframeSample& cf, bool validate) {
  Mat g = (cf.rows.adjoint() * cf.rows).real();
  g = 0.5 * (g + g.transpose());
  if (validate) {
    Eigen::SelfAdjointEigenSolver<Mat> es(g);
    if (es.eigenvalues().minCoeff() <= 0.0)
      throw SignatureError("c-map metric has a nonpositive eigenvalue");
  }
  return g;
}

Mat metric(const PrepotentialSpec& spec, const ChartPoint& p, bool validate) {
  return metric_from_coframe(coframe(spec, p), validate);
}

QuaternionicTriple complex_structures_from_coframe(const CoframeSample& cf) {
  int n = cf.n;
  int dim = 4 * n;
  // vielbein rows, ordered in conjugate pairs (A=1, A=2) for each symplectic index m:
  //   m = 1:      ( conj(u), conj(v) )
  //   m = 1+f:    ( conj(e^f), -conj(E^f) )
  //   m = n+1:    ( -v, u )
  //   m = n+1+f:  ( E^f, e^f )
  // The relative sign between the (u,v) and (e,E) pairs makes the resulting
  // triple parallel: the associated (2,0)-form is -i(u^vbar - e^Ebar).
  CMat U(2 * (2 * n), dim);
  auto put = [&](int m, const Eigen::RowVectorXcd& r1, const Eigen::RowVectorXcd& r2) {
    U.row(2 * m) = r1;
    U.row(2 * m + 1) = r2;
  };
  put(0, cf.u().conjugate(), cf.v().conjugate());
  for (int f = 0; f < n - 1; ++f) put(1 + f, cf.e(f).conjugate(), -cf.E(f).conjugate());
  put(n, -cf.v(), cf.u());
  for (int f = 0; f < n - 1; ++f) put(n + 1 + f, cf.E(f), cf.e(f));

  Eigen::FullPivLU<CMat> lu(U);
  if (!lu.isInvertible()) throw SingularFrame("stacked coframe is rank-deficient");

  QuaternionicTriple out;
  auto solve_j = [&](int alpha) {
    CMat R(2 * (2 * n), dim);
    for (int m = 0; m < 2 * n; ++m) {
      Eigen::RowVectorXcd r1 = U.row(2 * m), r2 = U.row(2 * m + 1);
      switch (alpha) {
        case 1:  // sigma1: (r2, r1)
          R.row(2 * m) = -ci * r2;
          R.row(2 * m + 1) = -ci * r1;
          break;
        case 2:  // sigma2: (-i r2, i r1)
          R.row(2 * m) = -ci * (-ci * r2);
          R.row(2 * m + 1) = -ci * (ci * r1);
          break;
        default:  // sigma3: (r1, -r2)
          R.row(2 * m) = -ci * r1;
          R.row(2 * m + 1) = -ci * (-r2);
          break;
      }
    }
    CMat Jc = lu.solve(R);
    out.max_imag = std::max(out.max_imag, Jc.imag().cwiseAbs().maxCoeff());
    return Mat(Jc.real());
  };
  out.J1 = solve_j(1);
  out.J2 = solve_j(2);
  out.J3 = solve_j(3);
  if (out.max_imag > 1e-8)
    throw SingularFrame("complex-structure reconstruction produced a non-real result");
  return out;
}

QuaternionicTriple complex_structures(const PrepotentialSpec& spec, const ChartPoint& p) {
  return complex_structures_from_coframe(coframe(spec, p));
}

std::array<Vec, 3> su2_connection_from_coframe(const CoframeSample& cf, const ChartPoint& p) {
  int n = cf.n;
  CoordLayout L(n);
  std::array<Vec, 3> w;
  Eigen::RowVectorXcd u = cf.u(), v = cf.v();
  // connection forms of the parallel frame built by complex_structures:
  //   omega^1 = i(u - ubar),  omega^2 = u + ubar,
  //   omega^3 = Im v + 2 e^K Im(Z^A N_AB dZbar^B)
  w[0] = -2.0 * u.imag().transpose();
  w[1] = 2.0 * u.real().transpose();
  Vec w3 = v.imag().transpose();
  const CVec Z = lift(p.z);
  CVec ZN = cf.base.N.cast<cplx>().transpose() * Z;  // (Z N)_B
  double eK = std::exp(cf.base.K);
  for (int bidx = 0; bidx < n - 1; ++bidx) {
    cplx c = ZN[bidx + 1];
    w3[L.re_z(bidx)] += 2.0 * eK * c.imag();
    w3[L.im_z(bidx)] += -2.0 * eK * c.real();
  }
  w[2] = w3;
  return w;
}

std::array<Vec, 3> su2_connection(const PrepotentialSpec& spec, const ChartPoint& p) {
  return su2_connection_from_coframe(coframe(spec, p), p);
}

Vec k_phi(const ChartPoint& p) {
  int n = p.n();
  CoordLayout L(n);
  Vec v = Vec::Zero(L.dim());
  v[L.phi()] = 0.5;
  v[L.phit()] = -p.phit;
  for (int A = 0; A < n; ++A) {
    v[L.a_idx(A)] = -0.5 * p.a[A];
    v[L.b_idx(A)] = -0.5 * p.b[A];
  }
  return v;
}

Vec k_phit(const ChartPoint& p) {
  CoordLayout L(p.n());
  Vec v = Vec::Zero(L.dim());
  v[L.phit()] = -2.0;
  return v;
}

Vec k_shift(const ChartPoint& p, int A) {
  CoordLayout L(p.n());
  Vec v = Vec::Zero(L.dim());
  v[L.a_idx(A)] = 1.0;
  v[L.phit()] = p.b[A];
  return v;
}

Vec k_dual(const ChartPoint& p, int A) {
  CoordLayout L(p.n());
  Vec v = Vec::Zero(L.dim());
  v[L.b_idx(A)] = 1.0;
  v[L.phit()] = -p.a[A];
  return v;
}

Vec killing_value(const KillingCombo& c, const ChartPoint& p) {
  int n = p.n();
  Vec v = Vec::Zero(4 * n);
  if (c.cphi != 0.0) v += c.cphi * k_phi(p);
  if (c.cphit != 0.0) v += c.cphit * k_phit(p);
  for (int A = 0; A < n; ++A) {
    if (c.ca.size() == n && c.ca[A] != 0.0) v += c.ca[A] * k_shift(p, A);
    if (c.cb.size() == n && c.cb[A] != 0.0) v += c.cb[A] * k_dual(p, A);
  }
  return v;
}

MomentMapValue moment_map_from_connection(const std::array<Vec, 3>& omega,
                                          const Vec& kappa_value) {
  MomentMapValue m;
  for (int al = 0; al < 3; ++al) m.c[al] = 0.5 * omega[al].dot(kappa_value);
  return m;
}

MomentMapValue moment_map(const PrepotentialSpec& spec, const ChartPoint& p,
                          const KillingCombo& kappa) {
  return moment_map_from_connection(su2_connection(spec, p), killing_value(kappa, p));
}

GroupElement group_identity(int n) {
  GroupElement e;
  e.a = Vec::Zero(n);
  e.b = Vec::Zero(n);
  return e;
}

GroupElement group_multiply(const GroupElement& x, const GroupElement& y) {
  GroupElement r;
  double em = std::exp(-x.phi);
  r.phi = x.phi + y.phi;
  r.phit = x.phit + std::exp(-2.0 * x.phi) * y.phit + em * (x.a.dot(y.b) - y.a.dot(x.b));
  r.a = x.a + em * y.a;
  r.b = x.b + em * y.b;
  return r;
}

GroupElement group_inverse(const GroupElement& x) {
  GroupElement r;
  double ep = std::exp(x.phi);
  r.phi = -x.phi;
  r.phit = -std::exp(2.0 * x.phi) * x.phit;
  r.a = -ep * x.a;
  r.b = -ep * x.b;
  return r;
}

HoloCoords holo_coords(const PrepotentialSpec& spec, const ChartPoint& p) {
  Jet3 jet = eval_jet(spec, lift(p.z));
  HoloCoords h;
  h.w = p.b.cast<cplx>() - jet.FAB * p.a.cast<cplx>();
  cplx aw = (p.a.cast<cplx>().transpose() * h.w)(0);
  h.w0 = std::exp(-2.0 * p.phi) - ci * (p.phit + aw);
  return h;
}

CMat holo_differentials(const PrepotentialSpec& spec, const ChartPoint& p) {
  int n = spec.n;
  CoordLayout L(n);
  Jet3 jet = eval_jet(spec, lift(p.z));
  CMat rows = CMat::Zero(n + 1, L.dim());
  // dw_A = db_A - F_AB da^B - a^B F_ABc dz^c   (rows 1..n)
  for (int A = 0; A < n; ++A) {
    rows(1 + A, L.b_idx(A)) = 1.0;
    for (int B = 0; B < n; ++B) rows(1 + A, L.a_idx(B)) = -jet.FAB(A, B);
    for (int c = 0; c < n - 1; ++c) {
      cplx s = 0.0;
      for (int B = 0; B < n; ++B) s += p.a[B] * jet.fabc(A, B, c + 1);
      rows(1 + A, L.re_z(c)) = -s;
      rows(1 + A, L.im_z(c)) = -ci * s;
    }
  }
  // dw^0 = -2 e^{-2phi} dphi - i dphit - i a^A dw_A - i w_A da^A
  CVec w = p.b.cast<cplx>() - jet.FAB * p.a.cast<cplx>();
  rows(0, L.phi()) = -2.0 * std::exp(-2.0 * p.phi);
  rows(0, L.phit()) = -ci;
  for (int A = 0; A < n; ++A) {
    rows.row(0) -= ci * cplx(p.a[A]) * rows.row(1 + A);
    rows(0, L.a_idx(A)) -= ci * w[A];
  }
  return rows;
}

ChartPoint chart_from_w(const PrepotentialSpec& spec, const CVec& z, const cplx& w0,
                        const CVec& w) {
  Jet3 jet = eval_jet(spec, lift(z));
  Mat N = n_matrix(jet);
  Eigen::FullPivLU<Mat> lu(N);
  if (!lu.isInvertible()) throw SignatureError("N singular");
  Mat Ninv = lu.inverse();

  ChartPoint p;
  p.z = z;
  Vec imw = w.imag();
  p.a = -Ninv * imw;
  p.b = w.real() + (jet.FAB * p.a.cast<cplx>()).real();
  double rho = w0.real() + imw.dot(Ninv * imw);
  if (rho <= 0.0) throw DomainError("fiber point outside the domain (Re w^0 too small)");
  p.phi = -0.5 * std::log(rho);
  p.phit = -w0.imag() - p.a.dot(w.real());
  return p;
}

}  // namespace cmaplab
