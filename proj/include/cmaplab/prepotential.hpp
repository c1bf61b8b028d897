#pragma once

#include "cmaplab/types.hpp"

namespace cmaplab {

// Fully symmetric real cubic coefficient tensor over the inhomogeneous indices 1..n-1
// (stored 0-based, dense). F(1,z) = 1/6 d_ijk z^i z^j z^k for the cubic families.
class SymCubic {
 public:
  SymCubic() = default;
  explicit SymCubic(int m) : m_(m), v_(static_cast<size_t>(m) * m * m, 0.0) {}

  int dim() const { return m_; }
  double operator()(int i, int j, int k) const { return v_[idx(i, j, k)]; }

  // Assign d on every permutation of (i,j,k).
  void set_sym(int i, int j, int k, double value);

  // Add the monomial c * z^i z^j z^k (unordered product) to F(1,z).
  void add_monomial(int i, int j, int k, double c);

  cplx contract3(const CVec& x, const CVec& y, const CVec& z) const;
  CVec contract2(const CVec& x, const CVec& y) const;  // (d(x,y,.))_k
  CMat contract1(const CVec& x) const;                 // (d(x,.,.))_jk

  double max_asymmetry() const;  // always 0 by construction; kept for checks

 private:
  size_t idx(int i, int j, int k) const {
    return (static_cast<size_t>(i) * m_ + j) * m_ + k;
  }
  int m_ = 0;
  std::vector<double> v_;
};

// Sparse monomial c * prod_A (Z^A)^{p_A}; p_0 may be negative. Degree must be 2.
struct Monomial {
  cplx coeff;
  std::vector<int> powers;  // size n
};

enum class PrepKind { Quadratic, Cubic, CubicPlus, Homogeneous, Monomials };

// Exact derivative jet of F at a point: F, F_A, F_AB, F_ABC, all closed-form.
struct Jet3 {
  CVec Z;
  cplx F{};
  CVec FA;
  CMat FAB;
  std::vector<cplx> FABC;  // dense n^3, fully symmetric

  int n() const { return static_cast<int>(Z.size()); }
  cplx fabc(int a, int b, int c) const {
    int nn = n();
    return FABC[(static_cast<size_t>(a) * nn + b) * nn + c];
  }
  CMat contract_fabc(const CVec& D) const;  // (D^C F_ABC)_{AB}
  // Max relative residual of the Euler identities Z.F_A = 2F, Z.F_AB = F_A, Z.F_ABC = 0.
  double homogeneity_residual() const;
};

struct PrepotentialSpec {
  PrepKind kind = PrepKind::Quadratic;
  int n = 0;  // number of homogeneous coordinates Z^0..Z^{n-1}

  CMat Q;                      // Quadratic: F = 1/2 Z Q Z
  SymCubic d;                  // cubic families
  std::vector<Monomial> mono;  // CubicPlus extras, or the full Monomials list
  int hom_q = 0, hom_r = 0;    // Homogeneous parameters
  std::vector<Mat> gamma;      // Homogeneous Clifford generators (real symmetric)

  bool is_cubic_like() const {
    return kind == PrepKind::Cubic || kind == PrepKind::CubicPlus ||
           kind == PrepKind::Homogeneous;
  }

  static PrepotentialSpec quadratic(const CMat& Q);
  static PrepotentialSpec cubic(const SymCubic& d);
  static PrepotentialSpec cubic_plus(const SymCubic& d, std::vector<Monomial> extra);
  static PrepotentialSpec homogeneous(int q, int r);
  static PrepotentialSpec monomials(int n, std::vector<Monomial> terms);
};

// Real symmetric anticommuting generators with gamma^2 = Id on an r-dimensional space;
// r must be a multiple of the block size used by the construction.
std::vector<Mat> clifford_generators(int q, int r);

Jet3 eval_jet(const PrepotentialSpec& spec, const CVec& Z);

inline Mat n_matrix(const Jet3& jet) { return jet.FAB.imag(); }

// Signature of a real symmetric matrix as (#positive, #negative) eigenvalues.
std::pair<int, int> signature(const Mat& S, double tol = 1e-10);

}  // namespace cmaplab
