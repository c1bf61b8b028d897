#include "cmaplab/geo_verify.hpp"

namespace cmaplab {

namespace {

Vec pert(const Vec& p, int i, double h) {
  Vec q = p;
  q[i] += h;
  return q;
}

}  // namespace

Mat exterior_derivative(const VecField& omega, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Mat dcoef(m, m);  // dcoef(i, j) = d_i omega_j
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    Vec wp = omega(pert(p, i, h)), wm = omega(pert(p, i, -h));
    dcoef.row(i) = ((wp - wm) / (2.0 * h)).transpose();
  }
  return dcoef - dcoef.transpose();
}

Mat wedge(const Vec& a, const Vec& b) { return a * b.transpose() - b * a.transpose(); }

Vec lie_bracket(const VecField& X, const VecField& Y, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Vec Xp = X(p), Yp = Y(p);
  Vec out = Vec::Zero(m);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    Vec dY = (Y(pert(p, i, h)) - Y(pert(p, i, -h))) / (2.0 * h);
    Vec dX = (X(pert(p, i, h)) - X(pert(p, i, -h))) / (2.0 * h);
    out += Xp[i] * dY - Yp[i] * dX;
  }
  return out;
}

Mat lie_derivative_metric(const MatField& g, const VecField& k, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Vec kp = k(p);
  Mat out = Mat::Zero(m, m);
  Mat dk(m, m);  // dk(i, l) = d_i k^l
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    out += kp[i] * (g(pert(p, i, h)) - g(pert(p, i, -h))) / (2.0 * h);
    dk.row(i) = ((k(pert(p, i, h)) - k(pert(p, i, -h))) / (2.0 * h)).transpose();
  }
  Mat gp = g(p);
  out += dk * gp + gp * dk.transpose();
  return out;
}

double nijenhuis_max(const MatField& J, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Mat Jp = J(p);
  std::vector<Mat> dJ(m);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    dJ[i] = (J(pert(p, i, h)) - J(pert(p, i, -h))) / (2.0 * h);
  }
  // For coordinate fields X = e_i, Y = e_j:
  // [JX, JY]^k = (J e_i)^l d_l (J e_j)^k - (J e_j)^l d_l (J e_i)^k
  // [JX, Y]^k  = -(e_j)^l d_l (J e_i)^k = -d_j (J e_i)^k ... etc.
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      Vec Ji = Jp.col(i), Jj = Jp.col(j);
      Vec t = Vec::Zero(m);
      for (int l = 0; l < m; ++l) t += Ji[l] * dJ[l].col(j) - Jj[l] * dJ[l].col(i);
      // - J [JX, Y] with [Je_i, e_j] = -d_j(J e_i)
      t += Jp * dJ[j].col(i);
      // - J [X, JY] with [e_i, J e_j] = d_i(J e_j)
      t -= Jp * dJ[i].col(j);
      worst = std::max(worst, t.cwiseAbs().maxCoeff());
    }
  return worst;
}

double kahler_closedness(const MatField& g, const MatField& J, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  auto phi = [&](const Vec& x) { return Mat(g(x) * J(x)); };
  std::vector<Mat> dphi(m);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    dphi[i] = (phi(pert(p, i, h)) - phi(pert(p, i, -h))) / (2.0 * h);
  }
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      for (int k = j + 1; k < m; ++k) {
        double v = dphi[i](j, k) - dphi[j](i, k) + dphi[k](i, j);
        worst = std::max(worst, std::abs(v));
      }
  return worst;
}

std::vector<Mat> christoffel(const MatField& g, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Mat gp = g(p);
  Mat ginv = gp.inverse();
  std::vector<Mat> dg(m);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    dg[i] = (g(pert(p, i, h)) - g(pert(p, i, -h))) / (2.0 * h);
  }
  std::vector<Mat> Gamma(m, Mat::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int i = 0; i < m; ++i)
      for (int j = i; j < m; ++j) {
        double s = 0.0;
        for (int l = 0; l < m; ++l) s += ginv(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        Gamma[k](i, j) = 0.5 * s;
        Gamma[k](j, i) = 0.5 * s;
      }
  return Gamma;
}

CurvatureSample riemann(const MatField& g, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  CurvatureSample c;
  c.point = p;
  c.g = g(p);
  c.ginv = c.g.inverse();
  c.Gamma = christoffel(g, p, sp);

  std::vector<std::vector<Mat>> dGamma(m);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    auto gp = christoffel(g, pert(p, i, h), sp);
    auto gm = christoffel(g, pert(p, i, -h), sp);
    dGamma[i].resize(m);
    for (int k = 0; k < m; ++k) dGamma[i][k] = (gp[k] - gm[k]) / (2.0 * h);
  }

  // R^l_{kij} = d_i Gamma^l_{jk} - d_j Gamma^l_{ik}
  //           + Gamma^l_{i.} Gamma^._{jk} - Gamma^l_{j.} Gamma^._{ik}
  Tensor4 Rup(m);
  for (int l = 0; l < m; ++l)
    for (int k = 0; k < m; ++k)
      for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
          double v = dGamma[i][l](j, k) - dGamma[j][l](i, k);
          for (int mm = 0; mm < m; ++mm)
            v += c.Gamma[l](i, mm) * c.Gamma[mm](j, k) - c.Gamma[l](j, mm) * c.Gamma[mm](i, k);
          Rup.at(l, k, i, j) = v;
          Rup.at(l, k, j, i) = -v;
        }

  // lowered: R_{ijkl} = g_{l l'} R^{l'}_{kij}; then R(X,Y,Z,W) = g(R(X,Y)Z, W)
  c.R = Tensor4(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int lp = 0; lp < m; ++lp) s += c.g(l, lp) * Rup.at(lp, k, i, j);
          c.R.at(i, j, k, l) = s;
        }

  c.ricci = Mat::Zero(m, m);
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < m; ++j) {
      double s = 0.0;
      for (int i = 0; i < m; ++i) s += Rup.at(i, k, i, j);
      c.ricci(k, j) = s;
    }
  c.ricci = 0.5 * (c.ricci + c.ricci.transpose());
  c.scal = (c.ginv * c.ricci).trace();

  double scale = 1.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) scale = std::max(scale, std::abs(c.R.at(i, j, k, l)));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l) {
          double r = c.R.at(i, j, k, l);
          c.antisym_residual = std::max(
              c.antisym_residual,
              std::max(std::abs(r + c.R.at(j, i, k, l)), std::abs(r + c.R.at(i, j, l, k))) / scale);
          c.pair_residual =
              std::max(c.pair_residual, std::abs(r - c.R.at(k, l, i, j)) / scale);
          c.bianchi_residual = std::max(
              c.bianchi_residual,
              std::abs(r + c.R.at(j, k, i, l) + c.R.at(k, i, j, l)) / scale);
        }
  return c;
}

double sectional(const CurvatureSample& c, const Vec& X, const Vec& Y) {
  int m = c.R.dim();
  double num = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (X[i] == 0.0 && Y[j] == 0.0) continue;
      for (int k = 0; k < m; ++k)
        for (int l = 0; l < m; ++l)
          num += c.R.at(i, j, k, l) * X[i] * Y[j] * Y[k] * X[l];
    }
  double den = X.dot(c.g * X) * Y.dot(c.g * Y) - std::pow(X.dot(c.g * Y), 2);
  if (std::abs(den) < 1e-14) throw Error("degenerate plane in sectional curvature");
  return num / den;
}

double holomorphic_sectional(const CurvatureSample& c, const Mat& J, const Vec& X) {
  return sectional(c, X, J * X);
}

std::pair<double, Vec> extremal_sectional(const CurvatureSample& c, const Vec& X) {
  int m = c.R.dim();
  // A(Y,Y) = R(X,Y,Y,X);  B(Y,Y) = |X|^2 |Y|^2 - g(X,Y)^2
  Mat A = Mat::Zero(m, m);
  for (int j = 0; j < m; ++j)
    for (int k = j; k < m; ++k) {
      double s = 0.0;
      for (int i = 0; i < m; ++i)
        for (int l = 0; l < m; ++l) s += c.R.at(i, j, k, l) * X[i] * X[l];
      A(j, k) = 0.5 * (s + s);
      A(j, k) = s;
      A(k, j) = s;
    }
  A = 0.5 * (A + A.transpose());
  Vec gX = c.g * X;
  Mat B = X.dot(gX) * c.g - gX * gX.transpose();
  // restrict to the g-orthogonal complement of X
  Eigen::SelfAdjointEigenSolver<Mat> gb(c.g);
  Mat gsqrt_inv = gb.operatorInverseSqrt();
  Mat Bo = gsqrt_inv * B * gsqrt_inv;
  Mat Ao = gsqrt_inv * A * gsqrt_inv;
  Eigen::SelfAdjointEigenSolver<Mat> bo(Bo);
  // columns with positive eigenvalue span the complement
  std::vector<int> keep;
  double bmax = bo.eigenvalues().cwiseAbs().maxCoeff();
  for (int i = 0; i < m; ++i)
    if (bo.eigenvalues()[i] > 1e-10 * bmax) keep.push_back(i);
  Mat P(m, static_cast<int>(keep.size()));
  for (size_t t = 0; t < keep.size(); ++t)
    P.col(static_cast<int>(t)) = bo.eigenvectors().col(keep[t]) / std::sqrt(bo.eigenvalues()[keep[t]]);
  Mat Ar = P.transpose() * Ao * P;
  Eigen::SelfAdjointEigenSolver<Mat> es(0.5 * (Ar + Ar.transpose()));
  double lam = es.eigenvalues()[0];
  Vec dir = gsqrt_inv * (P * es.eigenvectors().col(0));
  return {lam, dir};
}

double einstein_residual(const CurvatureSample& c) {
  int m = c.R.dim();
  Mat dev = c.ricci - (c.scal / m) * c.g;
  double scale = std::max(1.0, c.ricci.cwiseAbs().maxCoeff());
  return dev.cwiseAbs().maxCoeff() / scale;
}

StructureEqResult structure_equation_fit(const std::array<VecField, 3>& omega,
                                         const std::array<MatField, 3>& phi, const Vec& p,
                                         StepPolicy sp) {
  std::array<Mat, 3> lhs, rhs;
  std::array<Vec, 3> w{omega[0](p), omega[1](p), omega[2](p)};
  for (int al = 0; al < 3; ++al) {
    int be = (al + 1) % 3, ga = (al + 2) % 3;
    rhs[al] = exterior_derivative(omega[al], p, sp) + wedge(w[be], w[ga]);
    lhs[al] = phi[al](p);
  }
  double num = 0.0, den = 0.0;
  for (int al = 0; al < 3; ++al) {
    num += (lhs[al].cwiseProduct(rhs[al])).sum();
    den += (lhs[al].cwiseProduct(lhs[al])).sum();
  }
  StructureEqResult out;
  out.nu_hat = num / den;
  for (int al = 0; al < 3; ++al) {
    double scale = std::max(1e-12, lhs[al].norm());
    out.residual[al] = (out.nu_hat * lhs[al] - rhs[al]).norm() / scale;
  }
  return out;
}

double moment_derivative_residual(const std::function<Eigen::Vector3d(const Vec&)>& pcoeff,
                                  const std::array<VecField, 3>& omega,
                                  const std::array<MatField, 3>& Jf, const MatField& g,
                                  const VecField& xi, double nu, const Vec& p, StepPolicy sp) {
  int m = static_cast<int>(p.size());
  Eigen::Vector3d P = pcoeff(p);
  std::array<Vec, 3> w{omega[0](p), omega[1](p), omega[2](p)};
  Mat gp = g(p);
  Vec xip = xi(p);
  std::array<Vec, 3> Jxi{Jf[0](p) * xip, Jf[1](p) * xip, Jf[2](p) * xip};

  Mat dP(m, 3);
  for (int i = 0; i < m; ++i) {
    double h = sp.step(p[i]);
    Eigen::Vector3d pp = pcoeff(pert(p, i, h)), pm = pcoeff(pert(p, i, -h));
    dP.row(i) = ((pp - pm) / (2.0 * h)).transpose();
  }
  // covariant derivative of P = sum P^a J_a in the orthonormal Q-frame:
  //   (nabla_i P)^1 = d_i P^1 - P^2 w3_i + P^3 w2_i   (cyclic)
  double worst = 0.0;
  for (int i = 0; i < m; ++i) {
    for (int al = 0; al < 3; ++al) {
      int be = (al + 1) % 3, ga = (al + 2) % 3;
      double lhs = dP(i, al) - P[be] * w[ga][i] + P[ga] * w[be][i];
      double rhs = 0.5 * nu * gp.row(i).dot(Jxi[al]);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace cmaplab
