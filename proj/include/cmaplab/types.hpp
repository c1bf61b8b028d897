#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace cmaplab {

using real = double;
using cplx = std::complex<double>;
using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using CVec = Eigen::VectorXcd;
using CMat = Eigen::MatrixXcd;

inline constexpr cplx ci{0.0, 1.0};

// ---- error taxonomy ----

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DomainError : Error { using Error::Error; };          // point outside the admissible domain
struct SignatureError : Error { using Error::Error; };       // wrong metric signature
struct SingularFrame : Error { using Error::Error; };        // coframe rank-deficient
struct NullConditionError : Error { using Error::Error; };   // D not null at the base point
struct PivotError : Error { using Error::Error; };           // no usable pivot for the fiber chart
struct DegenerateQuotient : Error { using Error::Error; };   // |xi| ~ 0, quotient direction degenerate
struct BranchError : Error { using Error::Error; };          // model branch hypotheses violated
struct ConfigError : Error { using Error::Error; };
struct ModelError : Error { using Error::Error; };
struct UnknownField : Error { using Error::Error; };
struct StepUnderflow : Error { using Error::Error; };

// ---- small utilities ----

inline bool approx_zero(double x, double tol) { return std::abs(x) < tol; }

// FNV-1a over bytes; used for the report determinism hash.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

// Deterministic seeded generator for all sampling.
using Rng = std::mt19937_64;

inline Vec random_vec(Rng& rng, int m, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Vec v(m);
  for (int i = 0; i < m; ++i) v[i] = u(rng);
  return v;
}

inline CVec random_cvec(Rng& rng, int m, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  CVec v(m);
  for (int i = 0; i < m; ++i) v[i] = cplx(u(rng), u(rng));
  return v;
}

inline Vec random_unit_vec(Rng& rng, int m) {
  std::normal_distribution<double> n(0.0, 1.0);
  Vec v(m);
  for (int i = 0; i < m; ++i) v[i] = n(rng);
  double s = v.norm();
  if (s < 1e-300) { v.setZero(); v[0] = 1.0; s = 1.0; }
  return v / s;
}

}  // namespace cmaplab
