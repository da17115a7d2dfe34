#include "acu/quantbeek.hpp"

#include <algorithm>
#include <cmath>

namespace acu {

namespace {

int mod(int a, int n) { return ((a % n) + n) % n; }

// Runs a sub-step, turning precondition errors into StageFailure.
template <class F>
auto stage(const std::string& name, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(ErrorCode::StageFailure, name + ": " + e.what(), e.measured(), name);
  }
}

}  // namespace

CyclicFamily::CyclicFamily(std::vector<Projection> members, double tol) : members_(std::move(members)) {
  if (members_.empty()) throw Error(ErrorCode::InvalidInput, "cyclic family is empty");
  const Index n = members_.front().size();
  Matrix sum = Matrix::Zero(n, n);
  for (const Projection& p : members_) {
    if (p.size() != n) throw Error(ErrorCode::InvalidInput, "cyclic family: size mismatch");
    sum += p.matrix();
  }
  const Matrix defect = sum - Matrix::Identity(n, n);
  if (!op_norm_at_most(defect, tol))
    throw Error(ErrorCode::InvalidInput, "cyclic family does not sum to 1", op_norm(defect));
  for (std::size_t i = 0; i < members_.size(); ++i)
    for (std::size_t j = i + 1; j < members_.size(); ++j) {
      if (!members_[i].rank() || !members_[j].rank()) continue;
      const Matrix c = members_[i].basis().adjoint() * members_[j].basis();
      if (!op_norm_at_most(c, tol))
        throw Error(ErrorCode::InvalidInput, "cyclic family is not orthogonal", op_norm(c));
    }
}

const Projection& CyclicFamily::operator[](int k) const {
  return members_[static_cast<std::size_t>(mod(k, size()))];
}

double measure_family_defect(const CyclicFamily& P, const CyclicFamily& Q) {
  if (P.size() != Q.size()) throw Error(ErrorCode::InvalidInput, "families of different length");
  const int N = P.size();
  double eps = 0;
  for (int k = 0; k < N; ++k) {
    const Matrix& pk = P[k].matrix();
    for (int j = 0; j < N; ++j) eps = std::max(eps, commutator_norm(pk, Q[j].matrix()));
    const Matrix& qk = Q[k].matrix();
    eps = std::max(eps, op_norm((pk + P[k + 1].matrix()) * qk - qk));
    eps = std::max(eps, op_norm((Q[k - 1].matrix() + qk) * pk - pk));
  }
  return eps;
}

RefinedFamilies refine_intertwined(const CyclicFamily& P, const CyclicFamily& Q, Checks checks) {
  const int N = P.size();
  if (N < 2 || Q.size() != N) throw Error(ErrorCode::InvalidInput, "need two families of the same length N >= 2");
  const Index n = P.dim();
  const Matrix id = Matrix::Identity(n, n);
  const double eps = measure_family_defect(P, Q);
  if (checks == Checks::Strict && eps >= 1.0 / 200.0)
    throw Error(ErrorCode::StageFailure, "family defect must be below 1/200", eps, "assumptions");

  std::vector<StageMeasure> stages;
  auto record = [&](const std::string& name, double value, double factor) {
    stages.push_back({name, value, factor * eps});
  };

  const int M = 2 * N;
  std::vector<Matrix> r(M), s(M), rp(M), sp(M);
  std::vector<Projection> pprime(M, Projection::zero(n)), qprime(M, Projection::zero(n));

  for (int k = 0; k < N; ++k) {
    const Matrix& bp = P[k].basis();
    const Matrix& bq = Q[k].basis();
    const Matrix& pk = P[k].matrix();
    const Matrix& qk = Q[k].matrix();
    const int lo = mod(2 * k - 1, M);
    const int hi = 2 * k;
    const int qlo = 2 * k;
    const int qhi = mod(2 * k + 1, M);

    // compressions, in coordinates of ran P_k / ran Q_k
    const Matrix c_lo = bp.adjoint() * Q[k - 1].matrix() * bp;
    const Matrix c_hi = bp.adjoint() * qk * bp;
    const Matrix d_lo = bq.adjoint() * pk * bq;
    const Matrix d_hi = bq.adjoint() * P[k + 1].matrix() * bq;
    r[lo] = bp * c_lo * bp.adjoint();
    r[hi] = bp * c_hi * bp.adjoint();
    s[qlo] = bq * d_lo * bq.adjoint();
    s[qhi] = bq * d_hi * bq.adjoint();

    const Sharpened t_lo = stage("sharpen r", [&] { return sharpen_projection(c_lo, checks); });
    const Sharpened t_hi = stage("sharpen r", [&] { return sharpen_projection(c_hi, checks); });
    const Sharpened u_lo = stage("sharpen s", [&] { return sharpen_projection(d_lo, checks); });
    const Sharpened u_hi = stage("sharpen s", [&] { return sharpen_projection(d_hi, checks); });
    rp[lo] = bp * t_lo.t.matrix() * bp.adjoint();
    rp[hi] = bp * t_hi.t.matrix() * bp.adjoint();
    sp[qlo] = bq * u_lo.t.matrix() * bq.adjoint();
    sp[qhi] = bq * u_hi.t.matrix() * bq.adjoint();

    // push the even member off its odd companion inside each block
    const Disjoiner dp = stage("disjoin r", [&] { return disjoin_projections(t_hi.t, t_lo.t, checks); });
    const Disjoiner dq = stage("disjoin s", [&] { return disjoin_projections(u_lo.t, u_hi.t, checks); });
    record("||U_k - 1||", dp.dist, 80);
    record("||V_k - 1||", dq.dist, 80);

    const Matrix p_even = bp * dp.image.basis();
    const Matrix p_odd = bp * complement_basis(dp.image.basis());
    const Matrix q_even = bq * dq.image.basis();
    const Matrix q_odd = bq * complement_basis(dq.image.basis());
    pprime[hi] = Projection::from_basis(p_even);
    pprime[lo] = Projection::from_basis(p_odd);
    qprime[qlo] = Projection::from_basis(q_even);
    qprime[qhi] = Projection::from_basis(q_odd);
  }

  for (int k = 0; k < N; ++k) {
    const int lo = mod(2 * k - 1, M);
    const int hi = 2 * k;
    const int qhi = mod(2 * k + 1, M);
    const Matrix& pk = P[k].matrix();
    const Matrix& qk = Q[k].matrix();
    record("||r_{2k-1} r_{2k}||", op_norm(r[lo] * r[hi]), 4);
    record("||s_{2k} s_{2k+1}||", op_norm(s[hi] * s[qhi]), 4);
    record("||r_{2k-1} + r_{2k} - P_k||", op_norm(r[lo] + r[hi] - pk), 4);
    record("||s_{2k} + s_{2k+1} - Q_k||", op_norm(s[hi] + s[qhi] - qk), 4);
    record("||r'_{2k-1} r'_{2k}||", op_norm(rp[lo] * rp[hi]), 16);
    record("||s'_{2k} s'_{2k+1}||", op_norm(sp[hi] * sp[qhi]), 16);
    record("||r'_{2k-1} + r'_{2k} - P_k||", op_norm(rp[lo] + rp[hi] - pk), 16);
    record("||s'_{2k} + s'_{2k+1} - Q_k||", op_norm(sp[hi] + sp[qhi] - qk), 16);
  }
  for (int j = 0; j < M; ++j) {
    record("||r_j^2 - r_j||", op_norm(r[j] * r[j] - r[j]), 4);
    record("||s_j^2 - s_j||", op_norm(s[j] * s[j] - s[j]), 4);
    record("||r_j - s_j||", op_norm(r[j] - s[j]), 4);
    record("||r'_j - s'_j||", op_norm(rp[j] - sp[j]), 16);
    record("||r_j - r'_j||", op_norm(r[j] - rp[j]), 16);
    record("||s_j - s'_j||", op_norm(s[j] - sp[j]), 16);
  }

  // W_j p'_j W_j* = q'_j; their sum maps every p'_j onto q'_j
  Matrix forward = Matrix::Zero(n, n);
  for (int j = 0; j < M; ++j) {
    record("||p'_j - q'_j||", op_norm(pprime[j].matrix() - qprime[j].matrix()), 200);
    const Intertwiner wj = stage("intertwine", [&] { return intertwine_projections(pprime[j], qprime[j]); });
    record("||W_j - 1||", wj.dist, 400);
    forward += wj.sigma.matrix() * pprime[j].matrix();
  }
  UnitaryMatrix w = UnitaryMatrix::trusted(forward.adjoint());
  const double w_dist = op_norm(w.matrix() - id);
  record("||W - 1||", w_dist, 100 * std::sqrt(static_cast<double>(N)));

  return {std::move(pprime), std::move(qprime), std::move(w), eps, w_dist, std::move(stages)};
}

}  // namespace acu
