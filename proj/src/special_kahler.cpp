#include "cmaplab/special_kahler.hpp"

namespace cmaplab {

namespace {

double zn_zbar(const Mat& N, const CVec& Z) {
  return (Z.adjoint() * N * Z)(0).real();
}

}  // namespace

double kahler_potential_lift(const PrepotentialSpec& spec, const CVec& Z) {
  Jet3 jet = eval_jet(spec, Z);
  double y2 = 2.0 * zn_zbar(n_matrix(jet), Z);
  if (y2 <= 0.0) throw DomainError("2 Z N Zbar <= 0: point outside the domain");
  return -std::log(y2);
}

double kahler_potential(const PrepotentialSpec& spec, const CVec& z) {
  return kahler_potential_lift(spec, lift(z));
}

BaseGeometry base_geometry(const PrepotentialSpec& spec, const CVec& z) {
  BaseGeometry b;
  CVec Z = lift(z);
  b.jet = eval_jet(spec, Z);
  b.N = n_matrix(b.jet);
  b.Y = zn_zbar(b.N, Z);
  if (2.0 * b.Y <= 0.0) throw DomainError("2 Z N Zbar <= 0: point outside the domain");
  b.K = -std::log(2.0 * b.Y);

  Eigen::FullPivLU<Mat> lu(b.N);
  if (!lu.isInvertible()) throw SignatureError("N is singular at the evaluation point");
  b.Ninv = lu.inverse();

  int m = spec.n - 1;
  CVec NZb = b.N.cast<cplx>() * Z.conjugate();  // (N Zbar)_A
  CVec NZ = b.N.cast<cplx>() * Z;               // (N Z)_A
  b.g = CMat(m, m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c)
      b.g(a, c) = -cplx(b.N(a + 1, c + 1)) / b.Y + NZb[a + 1] * NZ[c + 1] / (b.Y * b.Y);

  Eigen::LLT<CMat> llt(b.g);
  if (llt.info() != Eigen::Success)
    throw DomainError("projective metric not positive definite: point outside the domain");
  b.e = llt.matrixL();

  b.Pi = CMat(spec.n, m);
  for (int f = 0; f < m; ++f) {
    cplx s = 0.0;
    for (int a = 0; a < m; ++a) {
      b.Pi(a + 1, f) = b.e(a, f);
      s += z[a] * b.e(a, f);
    }
    b.Pi(0, f) = -s;
  }
  return b;
}

bool in_domain(const PrepotentialSpec& spec, const CVec& z) {
  try {
    base_geometry(spec, z);
    return true;
  } catch (const Error&) {
    return false;
  }
}

}  // namespace cmaplab
