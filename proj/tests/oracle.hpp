#pragma once

// Independent reference computations for the tests. Only Eigen and <random>; nothing from the library
// except the Matrix typedefs.

#include <Eigen/Dense>
#include <unsupported/Eigen/MatrixFunctions>

#include <cmath>
#include <complex>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using M = Eigen::MatrixXcd;
constexpr double pi = 3.14159265358979323846;

inline double norm2(const M& a) {
  if (a.size() == 0) return 0;
  if (a.rows() <= 24 && a.cols() <= 24) {
    Eigen::JacobiSVD<M> svd(a);
    return svd.singularValues()(0);
  }
  Eigen::BDCSVD<M> svd(a);
  return svd.singularValues()(0);
}

inline double smin(const M& a) {
  Eigen::BDCSVD<M> svd(a);
  return svd.singularValues()(svd.singularValues().size() - 1);
}

inline double comm(const M& a, const M& b) { return norm2(a * b - b * a); }

struct Gen {
  std::mt19937_64 eng;
  explicit Gen(unsigned long long seed) : eng(seed) {}
  double u(double a = 0, double b = 1) { return std::uniform_real_distribution<double>(a, b)(eng); }
  double g() { return std::normal_distribution<double>()(eng); }
  M gauss(Eigen::Index r, Eigen::Index c) {
    M a(r, c);
    for (Eigen::Index i = 0; i < r; ++i)
      for (Eigen::Index k = 0; k < c; ++k) a(i, k) = C(g(), g()) / std::sqrt(2.0);
    return a;
  }
  // operator norm 1
  M herm(Eigen::Index n) {
    M a = gauss(n, n);
    M h = (a + a.adjoint()) / 2.0;
    return h / norm2(h);
  }
  M unitary(Eigen::Index n) {
    Eigen::HouseholderQR<M> qr(gauss(n, n));
    M q = qr.householderQ();
    M r = qr.matrixQR();
    for (Eigen::Index k = 0; k < n; ++k) q.col(k) *= std::polar(1.0, std::arg(r(k, k)));
    return q;
  }
  M diag_unitary(Eigen::Index n) {
    M d = M::Zero(n, n);
    for (Eigen::Index k = 0; k < n; ++k) d(k, k) = std::polar(1.0, u(0, 2 * pi));
    return d;
  }
};

// exp(i t h) through the Pade-based matrix exponential
inline M expi(const M& h, double t = 1.0) {
  M a = C(0, t) * h;
  return a.exp();
}

// orthogonal projection onto the eigenvectors of a normal matrix whose eigen-angles satisfy pred
template <class Pred>
M spectral_proj(const M& u, Pred pred) {
  Eigen::ComplexEigenSolver<M> es(u);
  const Eigen::Index n = u.rows();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index k = 0; k < n; ++k)
    if (pred(std::arg(es.eigenvalues()(k)))) keep.push_back(k);
  if (keep.empty()) return M::Zero(n, n);
  M b(n, static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) b.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  Eigen::HouseholderQR<M> qr(b);
  M q = qr.householderQ() * M::Identity(n, b.cols());
  return q * q.adjoint();
}

inline Eigen::Index rank_of_projection(const M& p) { return static_cast<Eigen::Index>(std::lround(p.trace().real())); }

inline Eigen::Index count_singular_above(const M& a, double thr) {
  Eigen::JacobiSVD<M> svd(a);
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) r += svd.singularValues()(k) > thr;
  return r;
}

// eigenvalues of a Hermitian matrix above 1/2
inline Eigen::Index count_half(const M& h) {
  Eigen::SelfAdjointEigenSolver<M> es((h + h.adjoint()) / 2.0);
  Eigen::Index r = 0;
  for (Eigen::Index k = 0; k < es.eigenvalues().size(); ++k) r += es.eigenvalues()(k) > 0.5;
  return r;
}

// winding of t -> det(t uv + (1 - t) vu) by uniform sampling with phase unwrapping
inline int winding(const M& u, const M& v, int samples = 4000) {
  const M a = u * v, b = v * u;
  double total = 0;
  C prev = b.determinant();
  for (int k = 1; k <= samples; ++k) {
    const double t = static_cast<double>(k) / samples;
    const C cur = (t * a + (1 - t) * b).determinant();
    total += std::arg(cur / prev);
    prev = cur;
  }
  return static_cast<int>(std::lround(total / (2 * pi)));
}

inline M clock(int m) {
  M o = M::Zero(m, m);
  for (int k = 0; k < m; ++k) o(k, k) = std::polar(1.0, 2 * pi * (k + 1) / m);
  return o;
}

// S e_{j+1} = e_j, corner in the bottom left
inline M shift(int m) {
  M s = M::Zero(m, m);
  for (int j = 0; j + 1 < m; ++j) s(j, j + 1) = 1.0;
  s(m - 1, 0) = 1.0;
  return s;
}

inline M dsum(const M& a, const M& b) {
  M r = M::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  r.topLeftCorner(a.rows(), a.cols()) = a;
  r.bottomRightCorner(b.rows(), b.cols()) = b;
  return r;
}

// least-squares slope of log y against log x
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double a = std::log(x[k]), b = std::log(y[k]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace oracle
