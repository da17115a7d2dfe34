#include "dense.hpp"

#include <complex>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <string>

#include "acu/errors.hpp"

namespace acu::dense {

namespace {

void check_finite(const Matrix& a, const char* what) {
  if (!a.allFinite()) throw Error(ErrorCode::InvalidInput, std::string(what) + ": non-finite entries");
}

void check_info(lapack_int info, const char* routine) {
  if (info != 0)
    throw Error(ErrorCode::NumericalFailure, std::string(routine) + " failed, info=" + std::to_string(info),
                static_cast<double>(info));
}

}  // namespace

HermitianEig hermitian_eig(const Matrix& h) {
  check_finite(h, "hermitian_eig");
  HermitianEig out;
  const lapack_int n = static_cast<lapack_int>(h.rows());
  out.vectors = h;
  out.values.resize(n);
  if (n == 0) return out;
  lapack_int info = LAPACKE_zheevd(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  if (info > 0) {
    out.vectors = h;
    info = LAPACKE_zheev(LAPACK_COL_MAJOR, 'V', 'L', n, out.vectors.data(), n, out.values.data());
  }
  check_info(info, "zheevd");
  return out;
}

RealVector hermitian_eigenvalues(const Matrix& h) {
  check_finite(h, "hermitian_eigenvalues");
  const lapack_int n = static_cast<lapack_int>(h.rows());
  Matrix work = h;
  RealVector w(n);
  if (n == 0) return w;
  check_info(LAPACKE_zheevd(LAPACK_COL_MAJOR, 'N', 'L', n, work.data(), n, w.data()), "zheevd");
  return w;
}

Svd svd(const Matrix& a) {
  check_finite(a, "svd");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  Svd out;
  out.s.resize(k);
  out.u.resize(m, k);
  Matrix vt(k, n);
  if (k == 0) {
    out.v.resize(n, 0);
    return out;
  }
  Matrix work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'S', m, n, work.data(), m, out.s.data(), out.u.data(), m,
                                   vt.data(), k);
  if (info > 0) {
    work = a;
    RealVector superb(k);
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'S', 'S', m, n, work.data(), m, out.s.data(), out.u.data(), m,
                          vt.data(), k, superb.data());
  }
  check_info(info, "zgesdd");
  out.v = vt.adjoint();
  return out;
}

RealVector singular_values(const Matrix& a) {
  check_finite(a, "singular_values");
  const lapack_int m = static_cast<lapack_int>(a.rows());
  const lapack_int n = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(m, n);
  RealVector s(k);
  if (k == 0) return s;
  Matrix work = a;
  lapack_int info = LAPACKE_zgesdd(LAPACK_COL_MAJOR, 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1);
  if (info > 0) {
    work = a;
    RealVector superb(k);
    info = LAPACKE_zgesvd(LAPACK_COL_MAJOR, 'N', 'N', m, n, work.data(), m, s.data(), nullptr, 1, nullptr, 1,
                          superb.data());
  }
  check_info(info, "zgesdd");
  return s;
}

Schur schur(const Matrix& a) {
  check_finite(a, "schur");
  const lapack_int n = static_cast<lapack_int>(a.rows());
  Schur out;
  out.t = a;
  out.z.resize(n, n);
  if (n == 0) return out;
  Vector w(n);
  lapack_int sdim = 0;
  check_info(LAPACKE_zgees(LAPACK_COL_MAJOR, 'V', 'N', nullptr, n, out.t.data(), n, &sdim, w.data(), out.z.data(), n),
             "zgees");
  return out;
}

}  // namespace acu::dense
