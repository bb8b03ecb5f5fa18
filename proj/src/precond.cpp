#include "msprec/precond.hpp"

#include <cmath>

namespace msprec {

BlockVector apply_G(const SplittingWeights& w, const BlockFactorization& F, const BlockVector& y) {
  BlockVector out(y.num_blocks(), y.block_size());
  if (w.a != 0.0) {
    const BlockVector xl = solve_B(SplittingKind::StairLeft, F, y);
    const BlockVector xr = solve_B(SplittingKind::StairRight, F, y);
    out.values() = w.a * (xl.values() + xr.values());
  }
  if (w.b != 0.0) {
    const BlockVector xd = solve_B(SplittingKind::Diagonal, F, y);
    out.values() += w.b * xd.values();
  }
  return out;
}

BlockVector apply_H(const SplittingWeights& w, const BlockFactorization& F, const BlockVector& y) {
  const BlockVector Ay = F.matrix().matvec(y);
  BlockVector GAy = apply_G(w, F, Ay);
  GAy.values() = y.values() - GAy.values();
  return GAy;
}

double f_a(double a, Sign sign, double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw std::domain_error("f_a: lambda must lie in (0, 1)");
  const double root = std::sqrt(lambda);
  return sign == Sign::plus ? a * lambda + (1.0 - a) * root : a * lambda - (1.0 - a) * root;
}

SpectrumPrediction predict_spectrum(double a, double lambda_max) {
  SpectrumPrediction p;
  const double fplus = (lambda_max > 0.0 && lambda_max < 1.0)
                           ? a * lambda_max + (1.0 - a) * std::sqrt(lambda_max)
                           : lambda_max;  // degenerate input, map is continuous
  if (a >= 0.0 && a <= 1.0) {
    const double neg_branch = (a <= 1.0 / 3.0) ? 1.0 - 2.0 * a : (1.0 - a) * (1.0 - a) / (4.0 * a);
    p.rho_h = std::max(neg_branch, fplus);
  }
  if (a >= -1.0 && a <= 1.0) {
    SpectrumInterval iv;
    iv.lo = 0.0;
    iv.lo_open = true;
    if (a <= 1.0 / 3.0) {
      iv.hi = 2.0 - 2.0 * a;
      iv.hi_open = true;
    } else {
      iv.hi = 1.0 + (1.0 - a) * (1.0 - a) / (4.0 * a);
      iv.hi_open = false;  // attained at the interior minimiser of f_{a,-}
    }
    p.g_interval = iv;
  }
  return p;
}

double rho_h_at_lambda_max(double a, double lambda_max) {
  return f_a(a, Sign::plus, lambda_max);
}

long distinct_count(int num_blocks, int block_size) {
  if (num_blocks < 1 || block_size < 1)
    throw std::invalid_argument("distinct_count: dimensions must be >= 1");
  const long half = num_blocks / 2;
  return (num_blocks % 2 == 0) ? half * block_size : half * block_size + 1;
}

PolyPreconditioner::PolyPreconditioner(SplittingWeights weights, int steps,
                                       std::shared_ptr<const BlockFactorization> factors,
                                       Unsafe unsafe)
    : weights_(weights), steps_(steps), factors_(std::move(factors)) {
  if (!factors_) throw DimensionMismatch("PolyPreconditioner: null factorization");
  if (steps_ < 1) throw std::invalid_argument("PolyPreconditioner: steps must be >= 1");
  if (!weights_.in_c_g() && unsafe != Unsafe::allow)
    throw std::invalid_argument(
        "PolyPreconditioner: weights outside Cg lose the s.p.d. guarantee; "
        "pass Unsafe::allow to experiment anyway");
}

BlockVector PolyPreconditioner::apply(const BlockVector& y) const {
  // Horner form: s = G y; repeat m-1 times: s = G y + H s.
  const BlockVector gy = apply_G(weights_, *factors_, y);
  BlockVector s = gy;
  for (int j = 1; j < steps_; ++j) {
    BlockVector hs = apply_H(weights_, *factors_, s);
    hs.values() += gy.values();
    s = std::move(hs);
  }
  return s;
}

}  // namespace msprec
