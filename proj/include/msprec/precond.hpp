#pragma once

#include <memory>
#include <optional>

#include "msprec/splitting.hpp"

namespace msprec {

/// Weight pair (a, b) of the three-way multi-splitting: the two stair
/// splittings carry weight a each and the diagonal splitting weight b,
/// constrained by 2a + b = 1.
///
/// Classification:
///   - C+  (a >= 0, b >= 0): the classical non-negative multi-splitting set.
///   - Cg  (a >= 0, b >= -1, equivalently a in [0,1]): the largest set on
///     which the combined operator G is s.p.d. and the induced splitting
///     convergent.
struct SplittingWeights {
  double a;
  double b;

  SplittingWeights(double a_, double b_) : a(a_), b(b_) {
    if (std::abs(2.0 * a + b - 1.0) > 1e-14)
      throw std::invalid_argument("SplittingWeights: 2a + b != 1");
  }

  /// b is derived as 1 - 2a.
  static SplittingWeights from_a(double a) { return SplittingWeights(a, 1.0 - 2.0 * a); }

  static SplittingWeights diagonal_only() { return {0.0, 1.0}; }   // block Jacobi
  static SplittingWeights stairs_only() { return {0.5, 0.0}; }     // additive stair
  static SplittingWeights equal_weights() { return from_a(1.0 / 3.0); }
  static SplittingWeights optimal() { return {1.0, -1.0}; }        // symmetric stair

  bool in_c_plus() const { return a >= 0.0 && b >= 0.0; }
  bool in_c_g() const { return a >= 0.0 && b >= -1.0; }
};

/// y -> a (B_l^{-1} y + B_r^{-1} y) + b B_d^{-1} y, the weighted combination
/// of the three splitting solves. Symmetric as an operator since B_r = B_l^T.
BlockVector apply_G(const SplittingWeights& w, const BlockFactorization& F, const BlockVector& y);

/// y -> y - G(A y), the iteration operator of the combined splitting.
/// Matrix-free: uses one matvec and one G application.
BlockVector apply_H(const SplittingWeights& w, const BlockFactorization& F, const BlockVector& y);

enum class Sign { plus, minus };

/// f_{a,+/-}(lambda) = a lambda +/- (1-a) sqrt(lambda), the scalar map that
/// carries eigenvalues of the stair product B_l^{-1} C_l to eigenvalues of H.
/// Requires lambda in (0, 1).
double f_a(double a, Sign sign, double lambda);

/// Half-open/closed interval bounds for reporting spectra.
struct SpectrumInterval {
  double lo = 0.0;
  double hi = 0.0;
  bool lo_open = true;
  bool hi_open = true;

  bool contains(double x, double slack = 0.0) const {
    return x > lo - slack && (hi_open ? x < hi + slack : x <= hi + slack);
  }
};

/// Worst-case spectral predictions as functions of a and the largest stair
/// product eigenvalue, treating sigma(B_l^{-1} C_l) as free to fill (0,1):
///   rho_h      : bound on the spectral radius of H, available for a in [0,1];
///   g_interval : hull containing sigma(G A), available for a in [-1,1].
/// Outside those ranges the corresponding field is empty (no guarantee).
struct SpectrumPrediction {
  std::optional<double> rho_h;
  std::optional<SpectrumInterval> g_interval;
};

SpectrumPrediction predict_spectrum(double a, double lambda_max);

/// Exact spectral radius of H on an instance whose largest stair-product
/// eigenvalue is lambda_max: f_{a,+}(lambda_max). Valid for a in [0,1]; the
/// worst-case terms of predict_spectrum are not attained by any actual
/// spectrum contained in (0, lambda_max].
double rho_h_at_lambda_max(double a, double lambda_max);

/// Number of distinct eigenvalues of the optimally preconditioned operator:
/// (N/2) n for even N, floor(N/2) n + 1 for odd N.
long distinct_count(int num_blocks, int block_size);

/// m-step polynomial preconditioner built on the weighted multi-splitting:
/// applies (I + H + ... + H^{m-1}) G matrix-free.
///
/// For weights in Cg the operator is s.p.d. for every m >= 1; construction
/// outside Cg requires Unsafe::allow and forfeits that guarantee.
class PolyPreconditioner {
public:
  enum class Unsafe { forbid, allow };

  PolyPreconditioner(SplittingWeights weights, int steps,
                     std::shared_ptr<const BlockFactorization> factors,
                     Unsafe unsafe = Unsafe::forbid);

  const SplittingWeights& weights() const { return weights_; }
  int steps() const { return steps_; }
  const BlockFactorization& factors() const { return *factors_; }
  const BlockTridiagMatrix& matrix() const { return factors_->matrix(); }

  /// x = M_m^{-1} y; m applications of G and m-1 matvecs.
  BlockVector apply(const BlockVector& y) const;

private:
  SplittingWeights weights_;
  int steps_;
  std::shared_ptr<const BlockFactorization> factors_;
};

}  // namespace msprec
