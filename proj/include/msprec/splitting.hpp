#pragma once

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "msprec/block_tridiag.hpp"

namespace msprec {

/// The three elementary P-regular splittings A = B - C of a block
/// tridiagonal matrix. Diagonal keeps only the D_k. The left stair keeps
/// the D_k plus the off-diagonal blocks of the even block rows, the right
/// stair is its mirror (odd rows); B_r = B_l^T.
enum class SplittingKind { Diagonal, StairLeft, StairRight };

/// Per-block Cholesky factors L_k L_k^T = D_k of the diagonal blocks,
/// together with a handle to the source matrix. Immutable after
/// construction; all solves are pure.
class BlockFactorization {
public:
  explicit BlockFactorization(std::shared_ptr<const BlockTridiagMatrix> A);

  const BlockTridiagMatrix& matrix() const { return *matrix_; }
  std::shared_ptr<const BlockTridiagMatrix> matrix_ptr() const { return matrix_; }
  int num_blocks() const { return matrix_->num_blocks(); }
  int block_size() const { return matrix_->block_size(); }

  /// x = D_k^{-1} y.
  Eigen::VectorXd solve_diag(int k, const Eigen::Ref<const Eigen::VectorXd>& y) const {
    return chol_[k].solve(y);
  }
  const Eigen::LLT<Eigen::MatrixXd>& block_llt(int k) const { return chol_[k]; }

private:
  std::shared_ptr<const BlockTridiagMatrix> matrix_;
  std::vector<Eigen::LLT<Eigen::MatrixXd>> chol_;
};

/// Factorizes every diagonal block; throws NotPositiveDefinite with the
/// index of the first failing block. O(N n^3).
std::shared_ptr<const BlockFactorization> factorize(std::shared_ptr<const BlockTridiagMatrix> A);

/// Solves B x = y for the chosen splitting matrix.
///
/// Diagonal solves every block row independently. The stair solves run in
/// two phases: first the decoupled rows (odd for StairLeft, even for
/// StairRight), then the remaining rows using the already-solved
/// neighbours. Within a phase the block solves are mutually independent
/// and may be evaluated in any order without changing the result.
BlockVector solve_B(SplittingKind kind, const BlockFactorization& F, const BlockVector& y);

/// Dense assembly of the splitting matrix B (oracle support).
Eigen::MatrixXd assemble_B(SplittingKind kind, const BlockTridiagMatrix& A);

/// Dense oracle: true iff sym(B + C) is positive definite, with C = B - A.
/// Intended for desk-scale matrices.
bool check_p_regular(SplittingKind kind, const BlockTridiagMatrix& A);

}  // namespace msprec
