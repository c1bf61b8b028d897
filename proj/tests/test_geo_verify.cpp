#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmaplab/geo_verify.hpp"

using namespace cmaplab;

namespace {

// round two-sphere in polar coordinates (theta, phi)
Mat sphere_metric(const Vec& x) {
  Mat g = Mat::Zero(2, 2);
  g(0, 0) = 1.0;
  double s = std::sin(x[0]);
  g(1, 1) = s * s;
  return g;
}

// Siegel-domain form of the complex hyperbolic plane, curvature -4,
// coordinates (Re y0, Im y0, Re y1, Im y1)
Mat ch2_metric(const Vec& y) {
  double rho = y[0] - y[3] * y[3];
  double e2 = 1.0 / rho;
  CMat rows = CMat::Zero(2, 4);
  Eigen::RowVectorXcd eta(2);
  eta << 1.0, 2.0 * ci * y[3];
  for (int k = 0; k < 2; ++k) {
    rows(0, 2 * k) = 0.5 * e2 * eta[k];
    rows(0, 2 * k + 1) = 0.5 * e2 * ci * eta[k];
  }
  rows(1, 2) = std::sqrt(0.5 * e2);
  rows(1, 3) = ci * std::sqrt(0.5 * e2);
  Mat g = (rows.adjoint() * rows).real();
  return 0.5 * (g + g.transpose());
}

Mat jstd4() {
  Mat J = Mat::Zero(4, 4);
  J(0, 1) = -1;
  J(1, 0) = 1;
  J(2, 3) = -1;
  J(3, 2) = 1;
  return J;
}

}  // namespace

TEST_CASE("exterior derivative basics") {
  // omega = df for f = sum x_i^2 gives d omega = 0
  auto omega = [](const Vec& x) { return Vec(2.0 * x); };
  Vec p = Vec::LinSpaced(4, 0.3, 1.2);
  CHECK(exterior_derivative(omega, p).cwiseAbs().maxCoeff() < 1e-8);

  // omega = x^1 dx^2: d omega = dx^1 ^ dx^2
  auto omega2 = [](const Vec& x) {
    Vec w = Vec::Zero(3);
    w[1] = x[0];
    return w;
  };
  Mat dw = exterior_derivative(omega2, Vec::Ones(3));
  Mat want = Mat::Zero(3, 3);
  want(0, 1) = 1.0;
  want(1, 0) = -1.0;
  CHECK((dw - want).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("lie bracket of coordinate-dependent fields") {
  // [x d_y, d_x] = -d_y
  auto X = [](const Vec& p) {
    Vec v = Vec::Zero(2);
    v[1] = p[0];
    return v;
  };
  auto Y = [](const Vec&) {
    Vec v = Vec::Zero(2);
    v[0] = 1.0;
    return v;
  };
  Vec p(2);
  p << 0.4, -0.7;
  Vec br = lie_bracket(X, Y, p);
  CHECK(std::abs(br[0]) < 1e-9);
  CHECK(std::abs(br[1] + 1.0) < 1e-9);
}

TEST_CASE("nijenhuis of a constant structure vanishes") {
  auto J = [](const Vec&) { return jstd4(); };
  CHECK(nijenhuis_max(J, Vec::Ones(4)) < 1e-12);
}

TEST_CASE("flat space fundamental form is closed") {
  auto g = [](const Vec&) { return Mat(Mat::Identity(4, 4)); };
  auto J = [](const Vec&) { return jstd4(); };
  CHECK(kahler_closedness(g, J, Vec::Ones(4)) < 1e-12);
}

TEST_CASE("round sphere curvature fixture") {
  Vec p(2);
  p << 1.2, 0.4;
  auto cs = riemann(sphere_metric, p);
  Vec X(2), Y(2);
  X << 1.0, 0.2;
  Y << -0.3, 1.1;
  CHECK(std::abs(sectional(cs, X, Y) - 1.0) < 1e-4);
  CHECK(einstein_residual(cs) < 1e-5);
  CHECK(cs.antisym_residual < 1e-4);
  CHECK(cs.pair_residual < 1e-4);
  CHECK(cs.bianchi_residual < 1e-4);
  CHECK(std::abs(cs.scal - 2.0) < 1e-4);
}

TEST_CASE("complex hyperbolic fixture has holomorphic sectional curvature -4") {
  Rng rng(17);
  for (int t = 0; t < 3; ++t) {
    Vec y = random_vec(rng, 4, 0.3);
    y[0] = 1.6 + 0.3 * y[0];
    auto cs = riemann(ch2_metric, y);
    Vec X = random_unit_vec(rng, 4);
    CHECK(std::abs(holomorphic_sectional(cs, jstd4(), X) + 4.0) < 1e-3);
    auto [lam, dir] = extremal_sectional(cs, X);
    CHECK(std::abs(lam + 4.0) < 1e-3);
    // the extremal direction is J X up to sign and scale
    Vec JX = jstd4() * X;
    double cosang = std::abs(dir.dot(cs.g * JX)) /
                    std::sqrt(dir.dot(cs.g * dir) * JX.dot(cs.g * JX));
    CHECK(cosang > 0.999);
    // totally real planes sit at -1
    CHECK(einstein_residual(cs) < 1e-3);
  }
}

TEST_CASE("structure equation fit on an exact model") {
  // flat R^4 with omega_a = 0 gives nu phi = 0, i.e. nu = 0
  auto zero = [](const Vec&) { return Vec(Vec::Zero(4)); };
  std::array<VecField, 3> wf{zero, zero, zero};
  auto phi = [](const Vec&) { return Mat(jstd4()); };
  std::array<MatField, 3> phif{phi, phi, phi};
  auto fit = structure_equation_fit(wf, phif, Vec::Ones(4));
  CHECK(std::abs(fit.nu_hat) < 1e-9);
}

TEST_CASE("step policy floors and guards") {
  StepPolicy sp;
  CHECK(sp.step(0.0) == doctest::Approx(1e-5));
  CHECK(sp.step(100.0) == doctest::Approx(1e-3));
  StepPolicy bad{0.0, 0.0};
  CHECK_THROWS_AS(bad.step(1.0), StepUnderflow);
}
