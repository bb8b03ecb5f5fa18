#pragma once

#include <cstdint>
#include <memory>
#include <random>
#include <vector>

#include "msprec/block_tridiag.hpp"
#include "msprec/splitting.hpp"

namespace msprec {

/// Deterministic standard-normal stream: mt19937_64 words mapped to 53-bit
/// uniforms and paired through Box-Muller. Unlike std::normal_distribution,
/// the sequence is identical across standard library implementations.
class NormalSampler {
public:
  explicit NormalSampler(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double operator()();

  /// Matrix with independent standard-normal entries, filled row-major.
  Eigen::MatrixXd normal_matrix(int rows, int cols);
  Eigen::VectorXd normal_vector(int size);

private:
  std::mt19937_64 engine_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct GeneratorConfig {
  std::uint64_t seed = 0;
  int N = 2;   ///< number of diagonal blocks; the LQR horizon is N - 1
  int n = 1;   ///< block size = state dimension
  int nu = 0;  ///< control dimension; 0 selects max(1, n / 3)
  double dyn_scale = 1.0;   ///< extra multiplier on the dynamics matrices
  double cost_scale = 1.0;  ///< multiplier on the random cost factors

  int control_dim() const { return nu > 0 ? nu : std::max(1, n / 3); }
  void validate() const;
};

/// Instance k of a sweep draws from seed ^ k.
inline std::uint64_t instance_seed(std::uint64_t seed, int k) {
  return seed ^ static_cast<std::uint64_t>(k);
}

/// Stream tag separating right-hand-side draws from matrix draws.
inline constexpr std::uint64_t kRhsStreamTag = 0x9E3779B97F4A7C15ULL;

/// Finite-horizon LQR data: x_{t+1} = A_t x_t + B_t u_t with stage costs
/// x'Q_t x + u'R_t u and an initial-state constraint x_0 = x0.
struct LqrProblem {
  int horizon = 0;  ///< T; the problem has T+1 states and T controls
  int nx = 0;
  int nu = 0;
  std::vector<Eigen::MatrixXd> A_dyn;  ///< T matrices, nx x nx
  std::vector<Eigen::MatrixXd> B_dyn;  ///< T matrices, nx x nu
  std::vector<Eigen::MatrixXd> Q;      ///< T+1 s.p.d. matrices, nx x nx
  std::vector<Eigen::MatrixXd> R;      ///< T s.p.d. matrices, nu x nu
  Eigen::VectorXd x0;
};

/// Seed-deterministic random LQR problem. Costs are Q = L L' + 0.1 n I with
/// standard-normal L (similarly R); dynamics entries are standard normal
/// scaled by 1/sqrt(nx).
LqrProblem random_lqr(const GeneratorConfig& cfg);

/// KKT Schur complement S = G H^{-1} G' of the LQR quadratic program with
/// respect to its Hessian H = blkdiag(Q_0, R_0, ..., Q_T), where G stacks
/// the initial-state constraint and the dynamics rows [-A_t -B_t I].
/// S is block tridiagonal with N = T+1 blocks of size nx:
///   S_11   = Q_0^{-1}
///   S_tt   = A Q^{-1} A' + B R^{-1} B' + Q_t^{-1}   (stage t-1 data)
///   S_t,t+1 = -(A_t Q_t^{-1})'
struct KktSchur {
  std::shared_ptr<const BlockTridiagMatrix> S;
  /// Cholesky factors of the Hessian blocks backing the H^{-1} applications.
  std::vector<Eigen::LLT<Eigen::MatrixXd>> Q_llt;  ///< T+1 factors
  std::vector<Eigen::LLT<Eigen::MatrixXd>> R_llt;  ///< T factors
};

/// Forms the Schur complement; throws NotPositiveDefinite if the assembled
/// S fails its s.p.d. validation (callers typically re-sample with the next
/// seed).
KktSchur schur_complement(const LqrProblem& p);

/// `count` standard-normal vectors of length N n, drawn from the rhs stream
/// seed ^ kRhsStreamTag.
std::vector<BlockVector> random_rhs(const GeneratorConfig& cfg, int count);

/// Writes `prefix.txt` (matrix fixture) and `prefix.json` (provenance:
/// seed, dimensions, scales, generator version).
void write_instance_files(const std::string& prefix, const BlockTridiagMatrix& A,
                          const GeneratorConfig& cfg);

}  // namespace msprec
