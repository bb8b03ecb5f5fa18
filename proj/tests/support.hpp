// Shared test fixtures and independent dense oracles. Everything here is
// test-only; the library under test never includes it.
#pragma once

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <memory>
#include <vector>

#include "msprec/block_tridiag.hpp"
#include "msprec/ocpgen.hpp"
#include "msprec/precond.hpp"
#include "msprec/splitting.hpp"

namespace msprec::test {

/// tridiag(-1, 2, -1) with N scalar blocks; N = 3 is the running example
/// with nonzero stair-product eigenvalue 1/2.
inline std::shared_ptr<const BlockTridiagMatrix> laplacian_chain(int N) {
  std::vector<Eigen::MatrixXd> diag(N, Eigen::MatrixXd::Constant(1, 1, 2.0));
  std::vector<Eigen::MatrixXd> off(N - 1, Eigen::MatrixXd::Constant(1, 1, -1.0));
  return std::make_shared<const BlockTridiagMatrix>(std::move(diag), std::move(off));
}

inline std::shared_ptr<const BlockTridiagMatrix> a3() { return laplacian_chain(3); }

inline BlockVector make_vector(int N, int n, std::initializer_list<double> values) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(N) * n);
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return BlockVector(N, n, std::move(v));
}

/// Random LQR Schur-complement instance (the benchmark ensemble).
inline std::shared_ptr<const BlockTridiagMatrix> lqr_instance(std::uint64_t seed, int N, int n,
                                                              int nu = 0) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.N = N;
  cfg.n = n;
  cfg.nu = nu;
  return schur_complement(random_lqr(cfg)).S;
}

/// Block-diagonal instance (zero dynamics): every off block vanishes.
inline std::shared_ptr<const BlockTridiagMatrix> block_diag_instance(std::uint64_t seed, int N,
                                                                     int n) {
  GeneratorConfig cfg;
  cfg.seed = seed;
  cfg.N = N;
  cfg.n = n;
  cfg.dyn_scale = 0.0;
  return schur_complement(random_lqr(cfg)).S;
}

inline Eigen::MatrixXd haar_orthogonal(NormalSampler& rng, int n) {
  const Eigen::MatrixXd X = rng.normal_matrix(n, n);
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
  Eigen::MatrixXd Q = qr.householderQ();
  const Eigen::MatrixXd R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j)
    if (R(j, j) < 0.0) Q.col(j) = -Q.col(j);
  return Q;
}

/// Instance with a fully resolvable stair-product spectrum: n independent
/// constant-coefficient scalar chains tridiag(c_j, d_j, c_j) interleaved
/// into the block layout and conjugated by per-block random rotations.
/// The nonzero eigenvalues of B_l^{-1} C_l are exactly
/// s_j cos^2(k pi / (N+1)), j = 1..n, k = 1..floor(N/2), with
/// s_j = (2 c_j / d_j)^2; all of them lie well inside (0, 1) and the
/// builder retries seeds until they are pairwise separated by >= 1e-5.
struct ResolvableInstance {
  std::shared_ptr<const BlockTridiagMatrix> matrix;
  std::vector<double> stair_eigenvalues;  // ascending
};

inline ResolvableInstance resolvable_instance(std::uint64_t seed, int N, int n) {
  for (int attempt = 0;; ++attempt) {
    NormalSampler rng(seed + 1000003ULL * static_cast<std::uint64_t>(attempt));
    std::vector<double> s(n), d(n), c(n);
    for (int j = 0; j < n; ++j) {
      s[j] = 0.30 + 0.65 * (j + 0.05 + 0.40 * rng.uniform01()) / n;
      d[j] = 2.0 + rng.uniform01();
      c[j] = -d[j] * std::sqrt(s[j]) / 2.0;
    }
    std::vector<double> lams;
    for (int j = 0; j < n; ++j)
      for (int k = 1; k <= N / 2; ++k) {
        const double cs = std::cos(k * M_PI / (N + 1));
        lams.push_back(s[j] * cs * cs);
      }
    std::sort(lams.begin(), lams.end());
    bool separated = true;
    for (std::size_t i = 1; i < lams.size(); ++i)
      if (lams[i] - lams[i - 1] < 1e-5) separated = false;
    if (!separated) continue;

    std::vector<Eigen::MatrixXd> W;
    for (int k = 0; k < N; ++k) W.push_back(haar_orthogonal(rng, n));
    std::vector<Eigen::MatrixXd> diag, off;
    const Eigen::VectorXd dv = Eigen::Map<const Eigen::VectorXd>(d.data(), n);
    const Eigen::VectorXd cv = Eigen::Map<const Eigen::VectorXd>(c.data(), n);
    for (int k = 0; k < N; ++k) {
      Eigen::MatrixXd D = W[k] * dv.asDiagonal() * W[k].transpose();
      diag.push_back(0.5 * (D + D.transpose()));
    }
    for (int k = 0; k + 1 < N; ++k) off.push_back(W[k] * cv.asDiagonal() * W[k + 1].transpose());
    ResolvableInstance out;
    out.matrix = std::make_shared<const BlockTridiagMatrix>(
        std::move(diag), std::move(off), BlockTridiagMatrix::Validate::SymmetrySpd);
    out.stair_eigenvalues = std::move(lams);
    return out;
  }
}

/// Independent oracle: real eigenvalues of the dense (unsymmetric) product
/// B^{-1} C through Eigen's general eigensolver.
inline std::vector<double> dense_iteration_matrix_eigs(SplittingKind kind,
                                                       const BlockTridiagMatrix& A) {
  const Eigen::MatrixXd B = assemble_B(kind, A);
  const Eigen::MatrixXd C = B - A.assemble_dense();
  const Eigen::MatrixXd P = B.partialPivLu().solve(C);
  Eigen::EigenSolver<Eigen::MatrixXd> es(P);
  std::vector<double> out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    out.push_back(es.eigenvalues()[i].real());
  std::sort(out.begin(), out.end());
  return out;
}

/// Grid + ternary-refinement extremizer over the open interval (0, 1).
/// Returns {argmin or argmax, extreme value}.
struct Extremum {
  double arg;
  double value;
};

template <typename F>
Extremum extremize(const F& f, bool maximize, double grid_step = 1e-5) {
  const double lo_clamp = 1e-20;
  const double hi_clamp = 1.0 - 1e-16;
  auto better = [&](double x, double y) { return maximize ? x > y : x < y; };
  double best_arg = grid_step;
  double best_val = f(best_arg);
  for (double x = grid_step; x < 1.0; x += grid_step) {
    const double v = f(x);
    if (better(v, best_val)) {
      best_val = v;
      best_arg = x;
    }
  }
  double lo = std::max(lo_clamp, best_arg - grid_step);
  double hi = std::min(hi_clamp, best_arg + grid_step);
  for (int it = 0; it < 400 && hi - lo > 1e-18; ++it) {
    const double x1 = lo + (hi - lo) / 3.0;
    const double x2 = hi - (hi - lo) / 3.0;
    if (better(f(x1), f(x2)))
      hi = x2;
    else
      lo = x1;
  }
  const double mid = 0.5 * (lo + hi);
  Extremum out{mid, f(mid)};
  for (double cand : {lo, hi}) {
    const double v = f(cand);
    if (better(v, out.value)) out = {cand, v};
  }
  return out;
}

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

}  // namespace msprec::test
