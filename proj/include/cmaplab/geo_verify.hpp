#pragma once

#include <functional>

#include "cmaplab/types.hpp"

namespace cmaplab {

// Central-difference step control. Steps are relative to the coordinate size
// with an absolute floor; second-derivative quantities use a larger step.
struct StepPolicy {
  double rel = 1e-5;
  double floor = 1e-7;
  double step(double xi) const {
    double h = rel * std::max(1.0, std::abs(xi));
    if (h < floor) h = floor;
    if (h <= 0.0 || !std::isfinite(h)) throw StepUnderflow("finite-difference step collapsed");
    return h;
  }
  static StepPolicy first() { return {1e-5, 1e-7}; }
  static StepPolicy second() { return {1e-4, 1e-6}; }
};

using ScalarField = std::function<double(const Vec&)>;
using VecField = std::function<Vec(const Vec&)>;     // tangent vector / covector row
using MatField = std::function<Mat(const Vec&)>;     // metric or endomorphism

// d omega as an antisymmetric matrix: (d w)_{ij} = d_i w_j - d_j w_i.
Mat exterior_derivative(const VecField& omega, const Vec& p, StepPolicy sp = StepPolicy::first());

// wedge of two covectors: (a ^ b)_{ij} = a_i b_j - a_j b_i.
Mat wedge(const Vec& a, const Vec& b);

// Lie bracket of two vector fields by central differences of their Jacobians.
Vec lie_bracket(const VecField& X, const VecField& Y, const Vec& p,
                StepPolicy sp = StepPolicy::first());

// (L_k g)_{ij} = k^m d_m g_ij + g_mj d_i k^m + g_im d_j k^m.
Mat lie_derivative_metric(const MatField& g, const VecField& k, const Vec& p,
                          StepPolicy sp = StepPolicy::first());

// Max norm of the Nijenhuis tensor of J over coordinate pairs.
double nijenhuis_max(const MatField& J, const Vec& p, StepPolicy sp = StepPolicy::first());

// ||d phi|| with phi = g(., J.), max over coordinate triples.
double kahler_closedness(const MatField& g, const MatField& J, const Vec& p,
                         StepPolicy sp = StepPolicy::first());

// Dense rank-4 tensor, lowered Riemann components.
class Tensor4 {
 public:
  Tensor4() = default;
  explicit Tensor4(int m) : m_(m), v_(static_cast<size_t>(m) * m * m * m, 0.0) {}
  int dim() const { return m_; }
  double& at(int i, int j, int k, int l) {
    return v_[((static_cast<size_t>(i) * m_ + j) * m_ + k) * m_ + l];
  }
  double at(int i, int j, int k, int l) const {
    return v_[((static_cast<size_t>(i) * m_ + j) * m_ + k) * m_ + l];
  }

 private:
  int m_ = 0;
  std::vector<double> v_;
};

struct CurvatureSample {
  Vec point;
  Mat g, ginv;
  std::vector<Mat> Gamma;  // Gamma[k](i,j) = Gamma^k_{ij}
  Tensor4 R;               // lowered, R(X,Y,Z,W) = R_{ijkl} X^i Y^j Z^k W^l
  Mat ricci;
  double scal = 0.0;
  // residuals of the algebraic curvature identities (FD noise gauge)
  double antisym_residual = 0.0;
  double pair_residual = 0.0;
  double bianchi_residual = 0.0;
};

std::vector<Mat> christoffel(const MatField& g, const Vec& p, StepPolicy sp = StepPolicy::second());

CurvatureSample riemann(const MatField& g, const Vec& p, StepPolicy sp = StepPolicy::second());

// Sectional curvature of span{X, Y}.
double sectional(const CurvatureSample& c, const Vec& X, const Vec& Y);

// H(X) = K(X, JX).
double holomorphic_sectional(const CurvatureSample& c, const Mat& J, const Vec& X);

// Extremal (most negative) sectional curvature over planes through X, and the
// direction attaining it. For a complex space form this recovers the
// holomorphic sectional curvature and J X without knowing J.
std::pair<double, Vec> extremal_sectional(const CurvatureSample& c, const Vec& X);

// ||Ric - (scal/m) g|| relative.
double einstein_residual(const CurvatureSample& c);

// Richardson check: recompute with half step; returns |a - a_half| gauge.
struct Verdict3 { double value = 0.0; double fd_disagreement = 0.0; bool conclusive = true; };

// Structure-equation fit  nu phi_alpha = d omega_alpha + omega_beta ^ omega_gamma.
// omega: three covector fields; phi: three 2-form fields (antisymmetric matrices).
struct StructureEqResult {
  double nu_hat = 0.0;
  std::array<double, 3> residual{};  // relative, at nu_hat
};
StructureEqResult structure_equation_fit(const std::array<VecField, 3>& omega,
                                         const std::array<MatField, 3>& phi, const Vec& p,
                                         StepPolicy sp = StepPolicy::first());

// Residual of the moment-map derivative identity for the Q-frame coefficients
//   d_i P^a + (omega x P)^a_i = (nu/2) g(e_i, J_a xi).
// pcoeff: field of the three coefficients P^alpha; omega: connection fields;
// J: the three endomorphism fields; xi: Killing field; g: metric field.
double moment_derivative_residual(const std::function<Eigen::Vector3d(const Vec&)>& pcoeff,
                                  const std::array<VecField, 3>& omega,
                                  const std::array<MatField, 3>& Jf, const MatField& g,
                                  const VecField& xi, double nu, const Vec& p,
                                  StepPolicy sp = StepPolicy::first());

}  // namespace cmaplab
