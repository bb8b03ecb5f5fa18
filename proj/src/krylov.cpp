#include "msprec/krylov.hpp"

namespace msprec {

PcgResult pcg_solve(const BlockTridiagMatrix& A, const BlockVector& b,
                    const LinearOperator& precond, const PcgConfig& cfg) {
  cfg.validate();
  if (b.num_blocks() != A.num_blocks() || b.block_size() != A.block_size())
    throw DimensionMismatch("pcg_solve: rhs shape does not match matrix");
  const int max_iter = cfg.max_iter > 0 ? cfg.max_iter : 10 * A.num_blocks() * A.block_size();

  PcgResult result{A.zero_vector(), 0, false, std::nullopt};
  if (cfg.record_history) result.residual_history.emplace();

  auto true_residual = [&](const BlockVector& x) {
    return (A.matvec(x).values() - b.values()).norm();
  };

  double res = b.values().norm();
  if (result.residual_history) result.residual_history->push_back(res);
  if (res < cfg.tol_abs) {
    result.converged = true;
    return result;
  }

  BlockVector r = b;
  BlockVector z = precond(r);
  if (!z.same_shape(b)) throw DimensionMismatch("pcg_solve: preconditioner changed vector shape");
  BlockVector p = z;
  double rz = r.values().dot(z.values());

  for (int k = 1; k <= max_iter; ++k) {
    const BlockVector Ap = A.matvec(p);
    const double pAp = p.values().dot(Ap.values());
    if (pAp <= 0.0)
      throw PcgBreakdown("pcg_solve: p'Ap <= 0 at iteration " + std::to_string(k));
    const double alpha = rz / pAp;
    result.x.values() += alpha * p.values();
    r.values() -= alpha * Ap.values();

    res = true_residual(result.x);
    if (result.residual_history) result.residual_history->push_back(res);
    result.iterations = k;
    if (res < cfg.tol_abs) {
      result.converged = true;
      return result;
    }

    z = precond(r);
    const double rz_next = r.values().dot(z.values());
    const double beta = rz_next / rz;
    rz = rz_next;
    p.values() = z.values() + beta * p.values();
  }
  return result;  // converged = false, best iterate kept
}

}  // namespace msprec
