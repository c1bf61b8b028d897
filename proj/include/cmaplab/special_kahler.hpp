#pragma once

#include "cmaplab/prepotential.hpp"

namespace cmaplab {

// Geometry of the projective base at a point z (inhomogeneous coordinates,
// lift Z = (1, z)).
struct BaseGeometry {
  Jet3 jet;     // jet at the lift
  Mat N;        // Im F_AB
  Mat Ninv;
  double Y;     // Z N Zbar
  double K;     // -ln(2Y)
  CMat g;       // Hermitian metric g_{a bbar}, (n-1)x(n-1)
  CMat e;       // vielbein with e e^H = g (Cholesky lower factor; row = coordinate)
  CMat Pi;      // n x (n-1): Pi_0^b = -z^a e_a^b, Pi_a^b = e_{a}^b
};

inline CVec lift(const CVec& z) {
  CVec Z(z.size() + 1);
  Z[0] = 1.0;
  Z.tail(z.size()) = z;
  return Z;
}

// K for an arbitrary lift (used by the rescaling-invariance checks).
double kahler_potential_lift(const PrepotentialSpec& spec, const CVec& Z);

double kahler_potential(const PrepotentialSpec& spec, const CVec& z);

BaseGeometry base_geometry(const PrepotentialSpec& spec, const CVec& z);

// 2 Z N Zbar > 0 and g positive definite.
bool in_domain(const PrepotentialSpec& spec, const CVec& z);

}  // namespace cmaplab
