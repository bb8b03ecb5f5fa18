#include "msprec/splitting.hpp"

#include <string>

namespace msprec {

BlockFactorization::BlockFactorization(std::shared_ptr<const BlockTridiagMatrix> A)
    : matrix_(std::move(A)) {
  if (!matrix_) throw DimensionMismatch("BlockFactorization: null matrix");
  const int N = matrix_->num_blocks();
  chol_.reserve(N);
  for (int k = 0; k < N; ++k) {
    chol_.emplace_back(matrix_->diag(k));
    if (chol_.back().info() != Eigen::Success)
      throw NotPositiveDefinite(k, "factorize: diagonal block " + std::to_string(k) +
                                       " is not positive definite");
  }
}

std::shared_ptr<const BlockFactorization> factorize(std::shared_ptr<const BlockTridiagMatrix> A) {
  return std::make_shared<const BlockFactorization>(std::move(A));
}

BlockVector solve_B(SplittingKind kind, const BlockFactorization& F, const BlockVector& y) {
  const BlockTridiagMatrix& A = F.matrix();
  const int N = A.num_blocks();
  if (y.num_blocks() != N || y.block_size() != A.block_size())
    throw DimensionMismatch("solve_B: vector shape does not match factorization");

  BlockVector x(N, A.block_size());
  if (kind == SplittingKind::Diagonal) {
    for (int i = 0; i < N; ++i) x.block(i) = F.solve_diag(i, y.block(i));
    return x;
  }

  // Stair solves. 1-based row i = internal index i-1. StairLeft decouples
  // the odd rows (even internal index), StairRight the even rows.
  const int decoupled_parity = (kind == SplittingKind::StairLeft) ? 0 : 1;
  for (int i = 0; i < N; ++i)
    if (i % 2 == decoupled_parity) x.block(i) = F.solve_diag(i, y.block(i));
  for (int i = 0; i < N; ++i) {
    if (i % 2 == decoupled_parity) continue;
    Eigen::VectorXd rhs = y.block(i);
    if (i > 0) rhs.noalias() -= A.off(i - 1).transpose() * x.block(i - 1);
    if (i + 1 < N) rhs.noalias() -= A.off(i) * x.block(i + 1);
    x.block(i) = F.solve_diag(i, rhs);
  }
  return x;
}

Eigen::MatrixXd assemble_B(SplittingKind kind, const BlockTridiagMatrix& A) {
  const int N = A.num_blocks();
  const int n = A.block_size();
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(A.dim(), A.dim());
  for (int i = 0; i < N; ++i) B.block(i * n, i * n, n, n) = A.diag(i);
  if (kind == SplittingKind::Diagonal) return B;
  const int coupled_parity = (kind == SplittingKind::StairLeft) ? 1 : 0;
  for (int i = 0; i < N; ++i) {
    if (i % 2 != coupled_parity) continue;
    if (i > 0) B.block(i * n, (i - 1) * n, n, n) = A.off(i - 1).transpose();
    if (i + 1 < N) B.block(i * n, (i + 1) * n, n, n) = A.off(i);
  }
  return B;
}

bool check_p_regular(SplittingKind kind, const BlockTridiagMatrix& A) {
  const Eigen::MatrixXd B = assemble_B(kind, A);
  const Eigen::MatrixXd C = B - A.assemble_dense();
  const Eigen::MatrixXd BC = B + C;
  const Eigen::MatrixXd sym = 0.5 * (BC + BC.transpose());
  Eigen::LLT<Eigen::MatrixXd> llt(sym);
  return llt.info() == Eigen::Success;
}

}  // namespace msprec
