#pragma once

#include <array>

#include "cmaplab/special_kahler.hpp"

namespace cmaplab {

// Point of the total space: base coordinates z plus fiber group coordinates.
struct ChartPoint {
  CVec z;            // n-1 complex
  double phi = 0.0;
  double phit = 0.0;
  Vec a;             // n real
  Vec b;             // n real

  int n() const { return static_cast<int>(a.size()); }
  int dim() const { return 4 * n(); }
};

// Real coordinate order (Re z, Im z, phi, phit, a, b); fixed across the project.
struct CoordLayout {
  int n;
  explicit CoordLayout(int n_) : n(n_) {}
  int dim() const { return 4 * n; }
  int re_z(int a) const { return a; }
  int im_z(int a) const { return (n - 1) + a; }
  int phi() const { return 2 * (n - 1); }
  int phit() const { return 2 * (n - 1) + 1; }
  int a_idx(int A) const { return 2 * n + A; }
  int b_idx(int A) const { return 3 * n + A; }
};

Vec to_coords(const ChartPoint& p);
ChartPoint from_coords(int n, const Vec& x);

// Complex coframe at a point; rows are coefficient vectors over the 4n real
// coordinate differentials. Row order: u, v, e^1..e^{n-1}, E^1..E^{n-1}.
struct CoframeSample {
  int n = 0;
  CMat rows;          // 2n x 4n
  BaseGeometry base;  // geometry of the projective base at p.z

  Eigen::RowVectorXcd u() const { return rows.row(0); }
  Eigen::RowVectorXcd v() const { return rows.row(1); }
  Eigen::RowVectorXcd e(int b) const { return rows.row(2 + b); }
  Eigen::RowVectorXcd E(int b) const { return rows.row(2 + (n - 1) + b); }
};

struct QuaternionicTriple {
  Mat J1, J2, J3;
  double max_imag = 0.0;  // residual imaginary part of the reconstruction
};

CoframeSample coframe(const PrepotentialSpec& spec, const ChartPoint& p);

// Metric assembled from the coframe. validate=true adds an SPD eigenvalue check.
Mat metric(const PrepotentialSpec& spec, const ChartPoint& p, bool validate = false);
Mat metric_from_coframe(const CoframeSample& cf, bool validate = false);

QuaternionicTriple complex_structures(const PrepotentialSpec& spec, const ChartPoint& p);
QuaternionicTriple complex_structures_from_coframe(const CoframeSample& cf);

std::array<Vec, 3> su2_connection(const PrepotentialSpec& spec, const ChartPoint& p);
std::array<Vec, 3> su2_connection_from_coframe(const CoframeSample& cf, const ChartPoint& p);

// Killing fields of the fiber group action, as coordinate vectors of length 4n.
Vec k_phi(const ChartPoint& p);
Vec k_phit(const ChartPoint& p);
Vec k_shift(const ChartPoint& p, int A);   // k_A
Vec k_dual(const ChartPoint& p, int A);    // ktilde^A

// Real combination  cphi k_phi + cphit k_phit + sum ca_A k_A + sum cb_A ktilde^A.
struct KillingCombo {
  double cphi = 0.0, cphit = 0.0;
  Vec ca, cb;  // n each
};
Vec killing_value(const KillingCombo& c, const ChartPoint& p);

struct MomentMapValue {
  Eigen::Vector3d c;  // P = c1 J1 + c2 J2 + c3 J3
};
MomentMapValue moment_map(const PrepotentialSpec& spec, const ChartPoint& p,
                          const KillingCombo& kappa);
MomentMapValue moment_map_from_connection(const std::array<Vec, 3>& omega,
                                          const Vec& kappa_value);

// Solvable fiber group.
struct GroupElement {
  double phi = 0.0, phit = 0.0;
  Vec a, b;
};
GroupElement group_identity(int n);
GroupElement group_multiply(const GroupElement& x, const GroupElement& y);
GroupElement group_inverse(const GroupElement& x);

// Holomorphic fiber coordinates (w^0, w_A).
struct HoloCoords {
  cplx w0;
  CVec w;
};
HoloCoords holo_coords(const PrepotentialSpec& spec, const ChartPoint& p);

// Differentials (dw^0, dw_A) as complex rows over the real coordinates.
CMat holo_differentials(const PrepotentialSpec& spec, const ChartPoint& p);

// Inverse of holo_coords at a fixed base point.
ChartPoint chart_from_w(const PrepotentialSpec& spec, const CVec& z, const cplx& w0,
                        const CVec& w);

}  // namespace cmaplab
