#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "msprec/block_tridiag.hpp"

namespace msprec {

struct PcgConfig {
  double tol_abs = 1e-6;  ///< exit threshold on the true residual ||A x - b||_2
  int max_iter = 0;       ///< 0 selects the default 10 N n
  bool record_history = false;

  void validate() const {
    if (!(tol_abs > 0.0)) throw std::invalid_argument("PcgConfig: tol_abs must be > 0");
    if (max_iter < 0) throw std::invalid_argument("PcgConfig: max_iter must be >= 0");
  }
};

struct PcgResult {
  BlockVector x;
  int iterations = 0;
  bool converged = false;
  /// Present when record_history is set: entry 0 is ||b||, entry k the true
  /// residual after iteration k.
  std::optional<std::vector<double>> residual_history;
};

/// Preconditioned conjugate gradients from x0 = 0 with the exit test on the
/// recomputed true residual ||A x - b||_2 < tol_abs (checked every
/// iteration; the recurrence residual is never trusted for exit).
///
/// Returns converged = false with the last iterate when max_iter is
/// exhausted. Throws PcgBreakdown if p'Ap <= 0, which signals a non-s.p.d.
/// system or preconditioner.
PcgResult pcg_solve(const BlockTridiagMatrix& A, const BlockVector& b,
                    const LinearOperator& precond, const PcgConfig& cfg = {});

/// Identity preconditioner (plain CG).
inline LinearOperator identity_preconditioner() {
  return [](const BlockVector& v) { return v; };
}

}  // namespace msprec
