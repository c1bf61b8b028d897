#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cmaplab/models.hpp"
#include "cmaplab/prepotential.hpp"

using namespace cmaplab;

namespace {

// Independent closed-form evaluators for F itself (no derivatives); the jet is
// checked against central differences of these.
cplx F_quadratic(const CMat& Q, const CVec& Z) { return 0.5 * (Z.transpose() * Q * Z)(0); }

cplx F_cubic(const SymCubic& d, const CVec& Z) {
  CVec z = Z.tail(Z.size() - 1);
  return d.contract3(z, z, z) / (6.0 * Z[0]);
}

cplx F_quantum(const SymCubic& d, const CVec& Z) {
  return F_cubic(d, Z) + Z[2] * Z[2] * Z[2] / (3.0 * Z[0]);
}

using Feval = std::function<cplx(const CVec&)>;

// central-difference first derivative in the holomorphic coordinate Z^A
cplx fd_deriv(const Feval& F, CVec Z, int A, double h = 1e-6) {
  CVec Zp = Z, Zm = Z;
  Zp[A] += h;
  Zm[A] -= h;
  return (F(Zp) - F(Zm)) / (2.0 * h);
}

SymCubic stu_tensor() {
  SymCubic d(3);
  d.add_monomial(0, 1, 2, 1.0);
  return d;
}

}  // namespace

TEST_CASE("diagonal quadratic jet at the unit point") {
  int n = 4;
  CVec diag(n);
  diag[0] = ci;
  for (int i = 1; i < n; ++i) diag[i] = -ci;
  auto spec = PrepotentialSpec::quadratic(CMat(diag.asDiagonal()));
  CVec Z = CVec::Zero(n);
  Z[0] = 1.0;
  Jet3 jet = eval_jet(spec, Z);
  CHECK(std::abs(jet.F - cplx(0.0, 0.5)) < 1e-14);
  for (int i = 0; i < n; ++i)
    CHECK(std::abs(jet.FAB(i, i) - (i == 0 ? ci : -ci)) < 1e-14);
  Mat N = n_matrix(jet);
  CHECK((N - Mat(Vec::Ones(n).asDiagonal()) * 1.0).cwiseAbs().maxCoeff() > 0.5);  // not identity
  CHECK(std::abs(N(0, 0) - 1.0) < 1e-14);
  for (int i = 1; i < n; ++i) CHECK(std::abs(N(i, i) + 1.0) < 1e-14);
  CHECK(jet.homogeneity_residual() < 1e-12);
}

TEST_CASE("cubic family jet values and derivative oracle") {
  auto d = stu_tensor();
  auto spec = PrepotentialSpec::cubic(d);
  cplx S(0.3, 1.1), T(-0.2, 0.9), U(0.15, 1.3);
  CVec Z(4);
  Z << 1.0, S, T, U;
  Jet3 jet = eval_jet(spec, Z);
  CHECK(std::abs(jet.F - S * T * U) < 1e-13);
  CHECK(std::abs(jet.FA[0] + S * T * U) < 1e-13);  // degree-2 homogeneity fixes F_0

  Feval F = [&](const CVec& W) { return F_cubic(d, W); };
  for (int A = 0; A < 4; ++A) {
    CHECK(std::abs(jet.FA[A] - fd_deriv(F, Z, A)) < 1e-6 * std::max(1.0, std::abs(jet.FA[A])));
    for (int B = 0; B < 4; ++B) {
      Feval FA = [&, A](const CVec& W) {
        CVec Wp = W, Wm = W;
        Wp[A] += 1e-5;
        Wm[A] -= 1e-5;
        return (F(Wp) - F(Wm)) / cplx(2e-5);
      };
      CHECK(std::abs(jet.FAB(A, B) - fd_deriv(FA, Z, B, 1e-5)) < 1e-5);
    }
  }
  // third derivatives against differences of the exact second derivatives
  for (int A = 0; A < 4; ++A)
    for (int B = 0; B < 4; ++B)
      for (int C = 0; C < 4; ++C) {
        CVec Zp = Z, Zm = Z;
        Zp[C] += 1e-6;
        Zm[C] -= 1e-6;
        cplx fd = (eval_jet(spec, Zp).FAB(A, B) - eval_jet(spec, Zm).FAB(A, B)) / cplx(2e-6);
        CHECK(std::abs(jet.fabc(A, B, C) - fd) < 1e-6 * std::max(1.0, std::abs(fd)));
      }
}

TEST_CASE("frozen N matrix for the three-modulus cubic at (1,i,i,i)") {
  auto spec = PrepotentialSpec::cubic(stu_tensor());
  CVec Z(4);
  Z << 1.0, ci, ci, ci;
  Mat N = n_matrix(eval_jet(spec, Z));
  Mat want(4, 4);
  want << -2, 0, 0, 0, 0, 0, 1, 1, 0, 1, 0, 1, 0, 1, 1, 0;
  CHECK((N - want).cwiseAbs().maxCoeff() < 1e-13);
  // oracle cross-check of one entry by finite differences of F
  Feval F = [&](const CVec& W) { return F_cubic(stu_tensor(), W); };
  Feval F0 = [&](const CVec& W) { return fd_deriv(F, W, 0, 1e-5); };
  cplx F00 = fd_deriv(F0, Z, 0, 1e-5);
  CHECK(std::abs(F00.imag() - want(0, 0)) < 1e-6);
  auto sig = signature(N);
  CHECK(sig.first == 1);
  CHECK(sig.second == 3);
}

TEST_CASE("homogeneity identities at random in-domain points") {
  Rng rng(11);
  std::vector<PrepotentialSpec> specs;
  {
    CVec diag(3);
    diag << ci, -ci, -ci;
    specs.push_back(PrepotentialSpec::quadratic(CMat(diag.asDiagonal())));
  }
  specs.push_back(PrepotentialSpec::cubic(stu_tensor()));
  specs.push_back(make_model("st2:n=6").prep);
  specs.push_back(make_model("t_series:p=2").prep);
  specs.push_back(make_model("w:p=1,q=1").prep);
  specs.push_back(make_model("homogeneous:q=1,r=4").prep);
  for (const auto& spec : specs) {
    for (int t = 0; t < 100; ++t) {
      CVec Z = random_cvec(rng, spec.n, 1.0);
      Z[0] += 2.0;  // keep away from the cubic pole
      Jet3 jet = eval_jet(spec, Z);
      CHECK(jet.homogeneity_residual() < 1e-12);
      // Z^C F_ABC = 0 componentwise
      CMat G = jet.contract_fabc(Z);
      CHECK(G.cwiseAbs().maxCoeff() < 1e-12 * std::max(1.0, jet.FAB.cwiseAbs().maxCoeff()));
    }
  }
}

TEST_CASE("quantum deformation is additive in the jet") {
  auto d = stu_tensor();
  Monomial extra;
  extra.coeff = 1.0 / 3.0;
  extra.powers = {-1, 0, 3, 0};
  auto quantum = PrepotentialSpec::cubic_plus(d, {extra});
  auto plain = PrepotentialSpec::cubic(d);
  auto tcubed = PrepotentialSpec::monomials(4, {extra});

  SymCubic d2 = d;  // same deformation as a pure cubic tensor
  d2.add_monomial(1, 1, 1, 1.0 / 3.0);
  auto asd = PrepotentialSpec::cubic(d2);

  Rng rng(3);
  for (int t = 0; t < 20; ++t) {
    CVec Z = random_cvec(rng, 4, 1.0);
    Z[0] += 2.0;
    Jet3 jq = eval_jet(quantum, Z), jp = eval_jet(plain, Z), jm = eval_jet(tcubed, Z);
    Jet3 jd = eval_jet(asd, Z);
    CHECK(std::abs(jq.F - jp.F - jm.F) < 1e-12);
    CHECK((jq.FAB - jp.FAB - jm.FAB).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((jq.FAB - jd.FAB).cwiseAbs().maxCoeff() < 1e-11);
    Feval F = [&](const CVec& W) { return F_quantum(d, W); };
    for (int A = 0; A < 4; ++A)
      CHECK(std::abs(jq.FA[A] - fd_deriv(F, Z, A)) < 1e-6 * std::max(1.0, std::abs(jq.FA[A])));
  }
}

TEST_CASE("construction guards") {
  CMat bad(2, 2);
  bad << ci, 1.0, 0.0, -ci;
  CHECK_THROWS_AS(PrepotentialSpec::quadratic(bad), ConfigError);
  CVec diag(2);
  diag << ci, ci;  // signature (2,0)
  CHECK_THROWS_AS(PrepotentialSpec::quadratic(CMat(diag.asDiagonal())), SignatureError);

  Monomial m;
  m.coeff = 1.0;
  m.powers = {1, 2};  // degree 3
  CHECK_THROWS_AS(PrepotentialSpec::monomials(2, {m}), ConfigError);

  auto spec = PrepotentialSpec::cubic(stu_tensor());
  CVec Z = CVec::Zero(4);
  Z[1] = 1.0;  // Z^0 = 0: pole
  CHECK_THROWS_AS(eval_jet(spec, Z), DomainError);
}

TEST_CASE("clifford generators satisfy the algebra") {
  for (auto [q, r] : std::vector<std::pair<int, int>>{{0, 2}, {1, 4}, {2, 8}}) {
    auto gens = clifford_generators(q, r);
    CHECK(static_cast<int>(gens.size()) == q + 1);
    for (size_t a = 0; a < gens.size(); ++a)
      for (size_t b = 0; b < gens.size(); ++b) {
        Mat anti = gens[a] * gens[b] + gens[b] * gens[a];
        Mat want = (a == b) ? Mat(2.0 * Mat::Identity(r, r)) : Mat(Mat::Zero(r, r));
        CHECK((anti - want).cwiseAbs().maxCoeff() < 1e-13);
      }
    // not proportional to the identity (the single-generator case mixes both
    // one-dimensional representations)
    CHECK((gens[0] - gens[0](0, 0) * Mat::Identity(r, r)).cwiseAbs().maxCoeff() > 0.5);
  }
  CHECK_THROWS_AS(clifford_generators(2, 6), ConfigError);  // not a multiple of the block
}

TEST_CASE("monomial variant reproduces the quadratic family") {
  Monomial m1{cplx(0.0, 0.5), {2, 0}}, m2{cplx(0.0, -0.5), {0, 2}};
  auto mono = PrepotentialSpec::monomials(2, {m1, m2});
  CVec diag(2);
  diag << ci, -ci;
  auto quad = PrepotentialSpec::quadratic(CMat(diag.asDiagonal()));
  Rng rng(5);
  for (int t = 0; t < 10; ++t) {
    CVec Z = random_cvec(rng, 2, 1.0);
    Z[0] += 1.5;
    Jet3 a = eval_jet(mono, Z), b = eval_jet(quad, Z);
    CHECK(std::abs(a.F - b.F) < 1e-13);
    CHECK((a.FAB - b.FAB).cwiseAbs().maxCoeff() < 1e-13);
  }
}
