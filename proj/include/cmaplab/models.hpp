#pragma once

#include "cmaplab/quotient.hpp"

namespace cmaplab {

enum class ModelKind { Quadratic, Stu, QuantumStu, St2, TSeries, W, Homogeneous, H4 };

struct ModelDescriptor {
  ModelKind kind = ModelKind::Quadratic;
  std::string name;  // canonical, e.g. "stu", "quadratic:n=3"
  bool has_prepotential = true;
  PrepotentialSpec prep;

  // recommended quotient recipe data
  CVec z0;            // base point on the constrained locus
  cplx vev_T{};       // quantum_stu parameter
  int par_n = 0, par_p = 0, par_q = 0, par_r = 0;

  // expected reduction bookkeeping
  int expected_r = 0;
  int expected_cdim_Mwedge = 0;
  int expected_dim_Mprime_real = 0;

  double base_box = 0.25;  // sampling box around z0
};

// name grammar: quadratic:n=3 | stu | quantum_stu:t=0.2+1i | st2:n=6 |
//               t_series:p=2 | w:p=1,q=1 | homogeneous:q=1,r=4 | h4
ModelDescriptor make_model(const std::string& name);
std::vector<std::string> catalog_names();

struct QuotientRecipe {
  CVec Z0;
  CVec D;
  cplx Ctilde = 0.0;
};
QuotientRecipe recommended_recipe(const ModelDescriptor& m, std::uint64_t seed);

struct FixedLocusResult {
  std::vector<std::pair<int, cplx>> fixed;  // (base index, pinned value)
  std::vector<int> free_dirs;               // linearly free base indices
  int quadratic_constraints = 0;
  int r = 0;
  int cdim_Mwedge = 0;
  int cdim_Mprime = 0;
  int dim_Mprime_real = 0;
  CVec C;  // solved constants, length n
  std::string note;
};
FixedLocusResult fixed_locus_analysis(const ModelDescriptor& m, const CVec& D);

// In-domain base point near z0 (rejection sampling in the model box).
CVec sample_base_point(const ModelDescriptor& m, Rng& rng);

// Random chart point: in-domain base plus fiber coordinates in a fixed box.
ChartPoint sample_chart_point(const ModelDescriptor& m, Rng& rng);

// Holomorphic chart of the constrained base through the recipe point.
struct MwedgeChart {
  std::function<CVec(const CVec&)> chart;
  int cdim = 0;
  double box = 0.2;
};
MwedgeChart mwedge_chart(const ModelDescriptor& m, const QuotientSpec& q);

// Random point on the constrained submanifold (base on the locus, fiber solved).
ChartPoint sample_N_point(const PrepotentialSpec& spec, const QuotientSpec& q,
                          const MwedgeChart& ch, Rng& rng);

// ---- hyperbolic 4-space (standalone check geometry) ----
namespace h4 {

Mat metric(const Vec& x);                  // coords (x^0, x^1, x^2, x^3)
Mat J(int alpha, const Vec& x);            // alpha = 1,2,3
Vec omega(int alpha, const Vec& x);        // connection one-forms
Vec killing(int a, const Vec& x);          // a = 0..3
Eigen::Vector3d moment_coeffs(int alpha, const Vec& x);  // P_alpha in the J-frame

struct MomentReport {
  double pattern_residual = 0.0;   // |P_alpha + 1/2 e^{-x0} delta|
  double f_residual = 0.0;         // |4f - e^{-2x0}|
  double p1p2_residual = 0.0;      // |P1 P2 k1 - f k2|
  double bracket_residual = 0.0;   // FD [k1,k2]
  double isometry_residual = 0.0;  // max FD Lie derivative of g along k_a
  double nu_hat = 0.0;             // structure-equation fit (expected -1)
  double structure_residual = 0.0;
  double moment_identity_residual = 0.0;  // nabla P check via the generic pipeline
};
MomentReport moment_check(const Vec& x);

}  // namespace h4

struct QuadraticProductReport {
  double cross_block = 0.0;        // base-fiber coupling of the quotient metric
  double fiber_base_dependence = 0.0;
  double base_vs_sk = 0.0;         // base block vs projective metric
  double fiber_holsec_dev = 0.0;   // |H + 4| on the fiber factor
  double base_holsec_spread = 0.0; // constancy of the base factor curvature
  double base_holsec_value = 0.0;
};
QuadraticProductReport quadratic_product_check(const ModelDescriptor& m, std::uint64_t seed,
                                               int samples);

struct QuantumConformalReport {
  double ratio_residual = 0.0;      // |measured/predicted - 1|
  double anisotropy = 0.0;          // deviation of the ratio matrix from a scalar
  double real_limit_residual = 0.0; // |ratio - 1| for (near-)real vev
};
QuantumConformalReport quantum_stu_conformal_check(cplx vevT, std::uint64_t seed, int samples);

}  // namespace cmaplab
