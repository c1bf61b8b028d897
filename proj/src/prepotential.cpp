#include "cmaplab/prepotential.hpp"

#include <array>
#include <algorithm>

namespace cmaplab {

void SymCubic::set_sym(int i, int j, int k, double value) {
  std::array<int, 3> p{i, j, k};
  std::sort(p.begin(), p.end());
  do {
    v_[idx(p[0], p[1], p[2])] = value;
  } while (std::next_permutation(p.begin(), p.end()));
}

void SymCubic::add_monomial(int i, int j, int k, double c) {
  // number of distinct orderings of the index multiset
  int orderings = 6;
  if (i == j && j == k) orderings = 1;
  else if (i == j || j == k || i == k) orderings = 3;
  double add = c * 6.0 / orderings;
  std::array<int, 3> p{i, j, k};
  std::sort(p.begin(), p.end());
  do {
    v_[idx(p[0], p[1], p[2])] += add;
  } while (std::next_permutation(p.begin(), p.end()));
}

cplx SymCubic::contract3(const CVec& x, const CVec& y, const CVec& z) const {
  cplx s = 0.0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k) {
        double dv = v_[idx(i, j, k)];
        if (dv != 0.0) s += dv * x[i] * y[j] * z[k];
      }
  return s;
}

CVec SymCubic::contract2(const CVec& x, const CVec& y) const {
  CVec out = CVec::Zero(m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k) {
        double dv = v_[idx(i, j, k)];
        if (dv != 0.0) out[k] += dv * x[i] * y[j];
      }
  return out;
}

CMat SymCubic::contract1(const CVec& x) const {
  CMat out = CMat::Zero(m_, m_);
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k) {
        double dv = v_[idx(i, j, k)];
        if (dv != 0.0) out(j, k) += dv * x[i];
      }
  return out;
}

double SymCubic::max_asymmetry() const {
  double m = 0.0;
  for (int i = 0; i < m_; ++i)
    for (int j = 0; j < m_; ++j)
      for (int k = 0; k < m_; ++k) {
        m = std::max(m, std::abs(v_[idx(i, j, k)] - v_[idx(j, i, k)]));
        m = std::max(m, std::abs(v_[idx(i, j, k)] - v_[idx(i, k, j)]));
      }
  return m;
}

CMat Jet3::contract_fabc(const CVec& D) const {
  int nn = n();
  CMat G = CMat::Zero(nn, nn);
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) {
      cplx s = 0.0;
      for (int c = 0; c < nn; ++c) s += D[c] * fabc(a, b, c);
      G(a, b) = s;
    }
  return G;
}

double Jet3::homogeneity_residual() const {
  int nn = n();
  double scale = std::max(1.0, std::abs(F));
  double r = std::abs((Z.transpose() * FA)(0) - 2.0 * F) / scale;
  CVec zfab = FAB * Z;
  double sa = std::max(1.0, FA.cwiseAbs().maxCoeff());
  r = std::max(r, (zfab - FA).cwiseAbs().maxCoeff() / sa);
  double sab = std::max(1.0, FAB.cwiseAbs().maxCoeff());
  for (int a = 0; a < nn; ++a)
    for (int b = 0; b < nn; ++b) {
      cplx s = 0.0;
      for (int c = 0; c < nn; ++c) s += Z[c] * fabc(a, b, c);
      r = std::max(r, std::abs(s) / sab);
    }
  return r;
}

std::pair<int, int> signature(const Mat& S, double tol) {
  Eigen::SelfAdjointEigenSolver<Mat> es(S);
  int pos = 0, neg = 0;
  double scale = std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  for (int i = 0; i < S.rows(); ++i) {
    if (es.eigenvalues()[i] > tol * scale) ++pos;
    else if (es.eigenvalues()[i] < -tol * scale) ++neg;
  }
  return {pos, neg};
}

PrepotentialSpec PrepotentialSpec::quadratic(const CMat& Q) {
  if (Q.rows() != Q.cols() || Q.rows() < 2)
    throw ConfigError("quadratic prepotential needs a square matrix, n >= 2");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff()))
    throw ConfigError("quadratic coefficient matrix must be symmetric");
  auto sig = signature(Q.imag());
  int n = static_cast<int>(Q.rows());
  if (sig.first != 1 || sig.second != n - 1)
    throw SignatureError("Im Q must have signature (1, n-1)");
  PrepotentialSpec s;
  s.kind = PrepKind::Quadratic;
  s.n = n;
  s.Q = Q;
  return s;
}

PrepotentialSpec PrepotentialSpec::cubic(const SymCubic& d) {
  PrepotentialSpec s;
  s.kind = PrepKind::Cubic;
  s.n = d.dim() + 1;
  s.d = d;
  return s;
}

PrepotentialSpec PrepotentialSpec::cubic_plus(const SymCubic& d, std::vector<Monomial> extra) {
  PrepotentialSpec s;
  s.kind = PrepKind::CubicPlus;
  s.n = d.dim() + 1;
  s.d = d;
  for (const auto& m : extra) {
    if (static_cast<int>(m.powers.size()) != s.n)
      throw ConfigError("monomial power vector has wrong length");
    int deg = 0;
    for (int p : m.powers) deg += p;
    if (deg != 2) throw ConfigError("prepotential monomials must be homogeneous of degree 2");
  }
  s.mono = std::move(extra);
  return s;
}

PrepotentialSpec PrepotentialSpec::homogeneous(int q, int r) {
  if (q < 0 || r < 1) throw ConfigError("homogeneous model needs q >= 0, r >= 1");
  PrepotentialSpec s;
  s.kind = PrepKind::Homogeneous;
  s.hom_q = q;
  s.hom_r = r;
  s.gamma = clifford_generators(q, r);
  // base coordinates: h1, h2, h^mu (q+1), h^ell (r)
  int m = 3 + q + r;
  s.n = m + 1;
  SymCubic d(m);
  const int i1 = 0, i2 = 1;
  auto imu = [&](int mu) { return 2 + mu; };          // mu = 0..q
  auto iell = [&](int l) { return 3 + q + l; };       // l = 0..r-1
  d.add_monomial(i1, i2, i2, 1.0);                    // h1 (h2)^2
  for (int mu = 0; mu <= q; ++mu) d.add_monomial(i1, imu(mu), imu(mu), -1.0);
  for (int l = 0; l < r; ++l) d.add_monomial(i2, iell(l), iell(l), -1.0);
  // F contains sum over ordered pairs (l,m) of gamma_{mu l m} h^mu h^l h^m
  for (int mu = 0; mu <= q; ++mu)
    for (int l = 0; l < r; ++l)
      for (int mm = 0; mm < r; ++mm) {
        double g = s.gamma[mu](l, mm);
        if (g != 0.0) d.add_monomial(imu(mu), iell(l), iell(mm), g);
      }
  s.d = d;
  return s;
}

PrepotentialSpec PrepotentialSpec::monomials(int n, std::vector<Monomial> terms) {
  if (n < 1) throw ConfigError("need n >= 1");
  PrepotentialSpec s;
  s.kind = PrepKind::Monomials;
  s.n = n;
  for (const auto& m : terms) {
    if (static_cast<int>(m.powers.size()) != n)
      throw ConfigError("monomial power vector has wrong length");
    int deg = 0;
    for (size_t i = 0; i < m.powers.size(); ++i) {
      if (i > 0 && m.powers[i] < 0)
        throw ConfigError("only Z^0 may carry a negative power");
      deg += m.powers[i];
    }
    if (deg != 2) throw ConfigError("prepotential monomials must be homogeneous of degree 2");
  }
  s.mono = std::move(terms);
  return s;
}

std::vector<Mat> clifford_generators(int q, int r) {
  int count = q + 1;
  // irreducible-ish block: size 1 for a single generator, else 2^q by the doubling construction
  std::vector<Mat> block;
  if (count == 1) {
    block.push_back(Mat::Identity(1, 1));
  } else {
    block.push_back(Mat::Identity(1, 1));
    Mat s1(2, 2), s3(2, 2);
    s1 << 0, 1, 1, 0;
    s3 << 1, 0, 0, -1;
    for (int step = 1; step < count; ++step) {
      int sdim = static_cast<int>(block[0].rows());
      std::vector<Mat> next;
      for (const auto& g : block) {
        Mat big = Mat::Zero(2 * sdim, 2 * sdim);
        big.topRightCorner(sdim, sdim) = g;
        big.bottomLeftCorner(sdim, sdim) = g;
        next.push_back(big);  // sigma1 (x) g
      }
      Mat last = Mat::Zero(2 * sdim, 2 * sdim);
      last.topLeftCorner(sdim, sdim) = Mat::Identity(sdim, sdim);
      last.bottomRightCorner(sdim, sdim) = -Mat::Identity(sdim, sdim);
      next.push_back(last);  // sigma3 (x) Id
      block = std::move(next);
    }
  }
  int bs = static_cast<int>(block[0].rows());
  if (r % bs != 0)
    throw ConfigError("r must be a multiple of the representation block size " + std::to_string(bs));
  int copies = r / bs;
  std::vector<Mat> out(count, Mat::Zero(r, r));
  for (int c = 0; c < copies; ++c) {
    // for a single generator use both one-dimensional representations (+1 and -1),
    // alternating, so the generator is not a multiple of the identity
    double sgn = (count == 1 && (c % 2 == 1)) ? -1.0 : 1.0;
    for (int g = 0; g < count; ++g)
      out[g].block(c * bs, c * bs, bs, bs) = sgn * block[g];
  }
  // validate the Clifford relations
  for (int a = 0; a < count; ++a)
    for (int b = 0; b < count; ++b) {
      Mat anti = out[a] * out[b] + out[b] * out[a];
      Mat want = (a == b) ? Mat(2.0 * Mat::Identity(r, r)) : Mat(Mat::Zero(r, r));
      if ((anti - want).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError("Clifford relations violated by generator construction");
      if ((out[a] - out[a].transpose()).cwiseAbs().maxCoeff() > 1e-12)
        throw ConfigError("Clifford generators must be symmetric");
    }
  return out;
}

namespace {

// jet of c * prod (Z^A)^{p_A}, accumulated into out
void accumulate_monomial_jet(const Monomial& m, const CVec& Z, Jet3& out) {
  int n = static_cast<int>(Z.size());
  auto powval = [&](const std::vector<int>& p) {
    cplx v = m.coeff;
    for (int a = 0; a < n; ++a) {
      int e = p[a];
      if (e == 0) continue;
      v *= std::pow(Z[a], e);
    }
    return v;
  };
  out.F += powval(m.powers);
  std::vector<int> p1 = m.powers;
  for (int a = 0; a < n; ++a) {
    if (m.powers[a] == 0) continue;
    double ca = m.powers[a];
    p1[a] -= 1;
    out.FA[a] += ca * powval(p1);
    for (int b = 0; b < n; ++b) {
      double cb = p1[b];
      if (cb == 0.0) continue;
      p1[b] -= 1;
      out.FAB(a, b) += ca * cb * powval(p1);
      for (int c = 0; c < n; ++c) {
        double cc = p1[c];
        if (cc == 0.0) continue;
        p1[c] -= 1;
        size_t base = (static_cast<size_t>(a) * n + b) * n + c;
        out.FABC[base] += ca * cb * cc * powval(p1);
        p1[c] += 1;
      }
      p1[b] += 1;
    }
    p1[a] += 1;
  }
}

}  // namespace

Jet3 eval_jet(const PrepotentialSpec& spec, const CVec& Z) {
  int n = spec.n;
  if (Z.size() != n) throw ConfigError("evaluation point has wrong dimension");
  if (Z.cwiseAbs().maxCoeff() == 0.0) throw DomainError("Z = 0 is not admissible");

  Jet3 jet;
  jet.Z = Z;
  jet.FA = CVec::Zero(n);
  jet.FAB = CMat::Zero(n, n);
  jet.FABC.assign(static_cast<size_t>(n) * n * n, cplx(0.0, 0.0));

  auto set_fabc = [&](int a, int b, int c, cplx v) {
    std::array<int, 3> p{a, b, c};
    std::sort(p.begin(), p.end());
    do {
      jet.FABC[(static_cast<size_t>(p[0]) * n + p[1]) * n + p[2]] = v;
    } while (std::next_permutation(p.begin(), p.end()));
  };

  switch (spec.kind) {
    case PrepKind::Quadratic: {
      jet.F = 0.5 * (Z.transpose() * spec.Q * Z)(0);
      jet.FA = spec.Q * Z;
      jet.FAB = spec.Q;
      break;
    }
    case PrepKind::Cubic:
    case PrepKind::CubicPlus:
    case PrepKind::Homogeneous: {
      cplx z0 = Z[0];
      if (std::abs(z0) < 1e-14)
        throw DomainError("cubic prepotential has a pole at Z^0 = 0");
      CVec z = Z.tail(n - 1);
      const SymCubic& d = spec.d;
      cplx dzzz = d.contract3(z, z, z);
      CVec dzz = d.contract2(z, z);     // (d(z,z,.))_k
      CMat dz = d.contract1(z);         // (d(z,.,.))_jk
      cplx i0 = 1.0 / z0, i02 = i0 * i0, i03 = i02 * i0, i04 = i03 * i0;

      jet.F = dzzz * i0 / 6.0;
      jet.FA[0] = -dzzz * i02 / 6.0;
      for (int k = 1; k < n; ++k) jet.FA[k] = 0.5 * dzz[k - 1] * i0;

      jet.FAB(0, 0) = dzzz * i03 / 3.0;
      for (int k = 1; k < n; ++k) {
        jet.FAB(0, k) = -0.5 * dzz[k - 1] * i02;
        jet.FAB(k, 0) = jet.FAB(0, k);
      }
      for (int j = 1; j < n; ++j)
        for (int k = 1; k < n; ++k) jet.FAB(j, k) = dz(j - 1, k - 1) * i0;

      set_fabc(0, 0, 0, -dzzz * i04);
      for (int k = 1; k < n; ++k) set_fabc(0, 0, k, dzz[k - 1] * i03);
      for (int j = 1; j < n; ++j)
        for (int k = j; k < n; ++k) set_fabc(0, j, k, -dz(j - 1, k - 1) * i02);
      for (int i = 1; i < n; ++i)
        for (int j = i; j < n; ++j)
          for (int k = j; k < n; ++k) set_fabc(i, j, k, d(i - 1, j - 1, k - 1) * i0);

      for (const auto& m : spec.mono) accumulate_monomial_jet(m, Z, jet);
      break;
    }
    case PrepKind::Monomials: {
      for (const auto& m : spec.mono) {
        if (m.powers[0] < 0 && std::abs(Z[0]) < 1e-14)
          throw DomainError("prepotential has a pole at Z^0 = 0");
        accumulate_monomial_jet(m, Z, jet);
      }
      break;
    }
  }
  return jet;
}

}  // namespace cmaplab
