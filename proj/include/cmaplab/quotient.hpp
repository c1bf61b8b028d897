#pragma once

#include "cmaplab/cmap_geometry.hpp"

namespace cmaplab {

// Data of the reduction: base point, null direction, the constants it induces,
// and the resulting dimension bookkeeping.
struct QuotientSpec {
  CVec Z0;       // lift of the base point, Z0[0] = 1
  CVec D;        // null vector at Z0
  CVec C;        // C_B = D^A F_AB(Z0)
  cplx Ctilde = 0.0;

  int n = 0;
  int r = 0;                           // numerical rank of D^C F_ABC(Z0)
  int dim_N_real = 0;                  // 4n - 2(r+1)
  int dim_Mprime_real = 0;             // 4(n-1) - 2r
  int cdim_Mwedge = 0;                 // n-1-r
  int cdim_Mprime = 0;                 // 2(n-1) - r

  std::vector<double> singular_values;
  bool rank_unstable = false;          // singular values cluster at the threshold
  bool rank_constant_nearby = true;    // sampled constant-rank probe
  std::string warning;
};

// Seeded construction of a null vector of N(Z0); requires signature (1, n-1).
CVec null_vector_sample(const PrepotentialSpec& spec, const CVec& Z0, std::uint64_t seed);

QuotientSpec make_quotient_spec(const PrepotentialSpec& spec, const CVec& Z0, const CVec& D,
                                cplx Ctilde, std::uint64_t probe_seed = 1);

// (|D^A F_AB(Z(p)) - C_B|, |D^A(b_A - F_AB a^B) - Ctilde|)
std::pair<double, double> membership(const PrepotentialSpec& spec, const QuotientSpec& q,
                                     const ChartPoint& p);

// The two commuting Killing fields of the reduction at p.
std::pair<Vec, Vec> xi_fields(const QuotientSpec& q, const ChartPoint& p);
KillingCombo xi1_combo(const QuotientSpec& q);
KillingCombo xi2_combo(const QuotientSpec& q);

// Group action in real coordinates (translation of phit, a, b).
ChartPoint act(const QuotientSpec& q, cplx lambda, const ChartPoint& p);

// Same action on the holomorphic fiber coordinates; valid on N.
HoloCoords act_w(const PrepotentialSpec& spec, const QuotientSpec& q, cplx lambda,
                 const HoloCoords& h, const CVec& z);

// Affine fiber chart at a base point: w_A = sum_a T(A,a) x_a + cc_A, w^0 = x^0,
// parameterizing {D.w = Ctilde, Zhat.w = 0} with Zhat = Z/Z^slot.
struct FiberFrame {
  CVec z;
  CVec Zhat;                  // slot-normalized lift
  int slot = 0, pivot = 0;
  std::vector<int> free_idx;  // the n-2 remaining indices, ascending
  cplx alpha;
  CMat T;                     // n x (n-2)
  CVec cc;                    // n
  Mat N, Ninv;
  CMat FAB;
};
FiberFrame fiber_frame(const PrepotentialSpec& spec, const QuotientSpec& q, const CVec& z);

CVec w_from_x(const FiberFrame& f, const CVec& x);        // x = (x^0, x_a), size n-1 -> w
ChartPoint point_from_x(const PrepotentialSpec& spec, const FiberFrame& f, const CVec& x);

struct FiberQuotientChart {
  CVec z;
  int slot = 0, pivot = 0;
  cplx alpha;
  CVec x;            // (x^0, x_a), size n-1
  cplx lambda_star;  // the shift that was applied
};

// Unique representative with Zhat^A w_A = 0 on the orbit of p, and its chart.
FiberQuotientChart canonical_representative(const PrepotentialSpec& spec,
                                            const QuotientSpec& q, const ChartPoint& p);

// Metric of the reduced fiber at (z, x), via the closed form and via the
// degenerate pullback of the ambient metric; both as real symmetric matrices
// over (Re x^0, Im x^0, Re x_1, Im x_1, ...).
struct FiberMetricSample {
  CMat Ntilde;   // Hermitian negative definite
  CVec Nt0;      // affine part of the connection coefficient
  CMat Nt1, Nt2;
  Mat h_closed;
  Mat h_pullback;
  double kernel_residual = 0.0;  // |g(k, .)| restricted to the chart tangents
  double route_gap = 0.0;
};
FiberMetricSample fiber_quotient_metric(const PrepotentialSpec& spec, const QuotientSpec& q,
                                        const CVec& z, const CVec& x);

// Closed-form reduced fiber metric as a field over the real chart of x.
Mat fiber_metric_closed(const PrepotentialSpec& spec, const FiberFrame& f, const Vec& xreal);

// Normalizing coordinate change: y = Linv x_a block with Ntilde -> -Id plus the
// quadratic shift of x^0; maps chart coords x to normal-form coords y.
struct FiberNormalForm {
  CMat Lx;      // x_a = Lx * y_a
  CMat A;       // x^0 = y^0 - (1/2) y A y - r.y
  CVec rlin;
  CVec x_to_y(const CVec& x) const;
  CVec y_to_x(const CVec& y) const;
};
FiberNormalForm fiber_normal_form(const FiberFrame& f, const CMat& Ntilde, const CVec& Nt0,
                                  const CMat& Nt1, const CMat& Nt2);

// Expected normal form: 1/4 e^{4phi}|dy^0 + 2i Im(y) dy|^2 + 1/2 e^{2phi} dy conj,
// with e^{-2phi} read off the point.
Mat fiber_metric_normal_expected(double e2phi_inv, const CVec& y);

// Tangency residuals for cubic models: (|d(., D - D0 z0, alpha)|, |d(alpha,alpha,alpha)|).
std::pair<double, double> base_tangent_check(const SymCubic& d, const CVec& D, const CVec& z0,
                                             const CVec& alpha);

// Gauss-Newton projection of z onto the analytic set D^A F_AB(1,z) = C_B.
CVec newton_project_base(const PrepotentialSpec& spec, const QuotientSpec& q, CVec z,
                         int iters = 40, double tol = 1e-13);

// Chart of the quotient manifold around a center point: a holomorphic base chart
// for the constrained base times the frozen affine fiber section. The section is
// transversal to the orbits, so orthogonal projection yields the quotient metric.
struct MprimeChart {
  PrepotentialSpec spec;
  QuotientSpec q;
  std::function<CVec(const CVec&)> base_chart;  // t (cdim) -> z
  int base_cdim = 0;
  FiberFrame frame;  // frozen at the center base point

  int fiber_cdim() const { return spec.n - 1; }
  int dim() const { return 2 * (base_cdim + fiber_cdim()); }

  // y packs complex pairs: (Re t_1, Im t_1, ..., Re x^0, Im x^0, Re x_1, ...)
  ChartPoint embed(const Vec& y) const;
  Mat metric_at(const Vec& y) const;
  Mat Jstd() const;  // the induced complex structure in this chart
};

MprimeChart make_mprime_chart(const PrepotentialSpec& spec, const QuotientSpec& q,
                              std::function<CVec(const CVec&)> base_chart, int base_cdim,
                              const CVec& z_center);

// Base metric of the holomorphic submersion M' -> M^wedge: Schur complement of
// the fiber block (horizontal-lift metric), as a real 2k x 2k matrix.
Mat horizontal_base_metric(const Mat& h, int base_real_dim);

}  // namespace cmaplab
