#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmaplab/models.hpp"

using namespace cmaplab;

TEST_CASE("dimension table for every catalog recipe") {
  for (const auto& name : catalog_names()) {
    ModelDescriptor m = make_model(name);
    if (!m.has_prepotential) continue;
    CAPTURE(name);
    auto rec = recommended_recipe(m, 3);
    QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, 3);
    CHECK(q.r == m.expected_r);
    CHECK(q.dim_Mprime_real == m.expected_dim_Mprime_real);
    CHECK(q.cdim_Mwedge == m.expected_cdim_Mwedge);
    CHECK(q.dim_N_real == 4 * m.prep.n - 2 * (q.r + 1));
  }
}

TEST_CASE("fixed-locus constants match the quotient data") {
  for (const auto& name : catalog_names()) {
    ModelDescriptor m = make_model(name);
    if (!m.has_prepotential) continue;
    CAPTURE(name);
    auto rec = recommended_recipe(m, 5);
    QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, 5);
    auto fl = fixed_locus_analysis(m, q.D);
    CHECK((fl.C - q.C).cwiseAbs().maxCoeff() < 1e-10 * std::max(1.0, q.C.norm()));
    CHECK(fl.r == q.r);
    CHECK(fl.dim_Mprime_real == q.dim_Mprime_real);
  }
}

TEST_CASE("membership equations hold along the free directions") {
  Rng rng(21);
  for (const auto& name : catalog_names()) {
    ModelDescriptor m = make_model(name);
    if (!m.has_prepotential) continue;
    CAPTURE(name);
    auto rec = recommended_recipe(m, 7);
    QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, 7);
    auto fl = fixed_locus_analysis(m, q.D);
    auto ch = mwedge_chart(m, q);
    double scale = std::max(1.0, q.C.norm());
    for (int s = 0; s < 10; ++s) {
      CVec t = random_cvec(rng, ch.cdim, ch.box);
      CVec z = ch.chart(t);
      Jet3 jet = eval_jet(m.prep, lift(z));
      CHECK((jet.FAB * q.D - fl.C).cwiseAbs().maxCoeff() < 1e-10 * scale);
    }
  }
}

TEST_CASE("stu branch specifics") {
  ModelDescriptor m = make_model("stu");
  auto rec = recommended_recipe(m, 3);
  auto fl = fixed_locus_analysis(m, rec.D);
  cplx S = rec.D[1] / rec.D[0], T = rec.D[2] / rec.D[0];
  CHECK(fl.fixed.size() == 2);
  CHECK(std::abs(fl.fixed[0].second - S) < 1e-14);
  CHECK(std::abs(fl.fixed[1].second - T) < 1e-14);
  CHECK(fl.free_dirs == std::vector<int>{2});
  CHECK(std::abs(fl.C[1] - rec.D[3] * T) < 1e-14);
  CHECK(fl.cdim_Mprime == 4);

  // the branch requires D^0 != 0
  CVec Dbad = rec.D;
  Dbad[0] = 0.0;
  CHECK_THROWS_AS(fixed_locus_analysis(m, Dbad), BranchError);
}

TEST_CASE("pinned coordinate of the rank-three series") {
  ModelDescriptor m = make_model("t_series:p=2");
  auto rec = recommended_recipe(m, 9);
  QuotientSpec q = make_quotient_spec(m.prep, rec.Z0, rec.D, rec.Ctilde, 9);
  auto fl = fixed_locus_analysis(m, q.D);
  auto ch = mwedge_chart(m, q);
  // on-locus points satisfy the equations; moving the pinned coordinate breaks them
  CVec z = ch.chart(CVec::Zero(ch.cdim));
  Jet3 jet = eval_jet(m.prep, lift(z));
  CHECK((jet.FAB * q.D - fl.C).cwiseAbs().maxCoeff() < 1e-10);
  CVec zoff = z;
  zoff[0] += 0.05;
  Jet3 joff = eval_jet(m.prep, lift(zoff));
  CHECK((joff.FAB * q.D - fl.C).cwiseAbs().maxCoeff() > 1e-4);
}

TEST_CASE("hyperbolic four-space moment maps") {
  Rng rng(23);
  for (int t = 0; t < 10; ++t) {
    Vec x = random_vec(rng, 4, 1.0);
    auto rep = h4::moment_check(x);
    CHECK(rep.pattern_residual < 1e-12);
    CHECK(rep.f_residual < 1e-12);
    CHECK(rep.p1p2_residual < 1e-12);
    CHECK(rep.bracket_residual < 1e-8);
    CHECK(rep.isometry_residual < 1e-6);
    CHECK(std::abs(rep.nu_hat + 1.0) < 1e-6);
    CHECK(rep.structure_residual < 1e-6);
    CHECK(rep.moment_identity_residual < 1e-3);
  }
  // x0 = 0 reproduces the plain coefficient -1/2
  Vec x0 = Vec::Zero(4);
  auto c = h4::moment_coeffs(1, x0);
  CHECK(std::abs(c[0] + 0.5) < 1e-15);
}

TEST_CASE("quadratic product structure") {
  ModelDescriptor m = make_model("quadratic:n=2");
  auto rep = quadratic_product_check(m, 3, 4);
  CHECK(rep.cross_block < 1e-8);
  CHECK(rep.fiber_base_dependence < 1e-8);
  CHECK(rep.base_vs_sk < 1e-8);
  CHECK(rep.fiber_holsec_dev < 1e-3);
  CHECK(rep.base_holsec_spread < 1e-3);
}

TEST_CASE("quantum deformation conformal factor") {
  auto rep = quantum_stu_conformal_check(ci, 3, 8);
  CHECK(rep.ratio_residual < 1e-6);
  CHECK(rep.anisotropy < 1e-8);
  CHECK(rep.real_limit_residual < 1e-6);
}

TEST_CASE("model name parsing") {
  CHECK_THROWS_AS(make_model("nope"), ModelError);
  CHECK_THROWS_AS(make_model("st2:n=4"), ModelError);
  CHECK(make_model("w:p=2,q=3").prep.n == 9);
  CHECK(make_model("homogeneous:q=1,r=4").prep.n == 9);
  CHECK_FALSE(make_model("h4").has_prepotential);
}
