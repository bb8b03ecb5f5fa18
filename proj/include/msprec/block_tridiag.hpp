#pragma once

#include <Eigen/Dense>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "msprec/errors.hpp"

namespace msprec {

/// Vector of num_blocks() stacked sub-vectors, each of length block_size().
///
/// Blocks are 0-based internally; text and docs that follow the usual
/// 1-based convention map block k to index k-1. "Even"/"odd" parity always
/// refers to the 1-based position, so block index 0 is odd.
class BlockVector {
public:
  BlockVector(int num_blocks, int block_size)
      : num_blocks_(num_blocks),
        block_size_(block_size),
        data_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(num_blocks) * block_size)) {
    if (num_blocks < 1 || block_size < 1)
      throw DimensionMismatch("BlockVector: num_blocks and block_size must be >= 1");
  }

  BlockVector(int num_blocks, int block_size, Eigen::VectorXd data)
      : num_blocks_(num_blocks), block_size_(block_size), data_(std::move(data)) {
    if (data_.size() != static_cast<Eigen::Index>(num_blocks) * block_size)
      throw DimensionMismatch("BlockVector: data length != num_blocks * block_size");
  }

  int num_blocks() const { return num_blocks_; }
  int block_size() const { return block_size_; }
  Eigen::Index size() const { return data_.size(); }

  /// Sub-vector i (0-based).
  Eigen::VectorBlock<Eigen::VectorXd> block(int i) {
    return data_.segment(static_cast<Eigen::Index>(i) * block_size_, block_size_);
  }
  Eigen::VectorBlock<const Eigen::VectorXd> block(int i) const {
    return data_.segment(static_cast<Eigen::Index>(i) * block_size_, block_size_);
  }

  Eigen::VectorXd& values() { return data_; }
  const Eigen::VectorXd& values() const { return data_; }

  bool same_shape(const BlockVector& other) const {
    return num_blocks_ == other.num_blocks_ && block_size_ == other.block_size_;
  }

private:
  int num_blocks_;
  int block_size_;
  Eigen::VectorXd data_;
};

/// Application of a linear operator on block vectors.
using LinearOperator = std::function<BlockVector(const BlockVector&)>;

/// Splits v into its even and odd parity parts (1-based convention):
/// the even part keeps sub-vectors 2, 4, ... and the odd part keeps
/// 1, 3, ...; their sum reconstructs v exactly.
std::pair<BlockVector, BlockVector> parity_split(const BlockVector& v);

/// Symmetric positive definite block tridiagonal matrix.
///
/// Stores the diagonal blocks D_1..D_N and the super-diagonal blocks
/// O_1..O_{N-1}; the sub-diagonal holds the transposes and everything
/// outside the band is zero. Blocks are dense; no intra-block sparsity is
/// assumed or exploited. Instances are immutable once constructed and safe
/// to share across threads.
class BlockTridiagMatrix {
public:
  enum class Validate {
    Symmetry,     ///< per-block symmetry of the D_k only (cheap, default)
    SymmetrySpd,  ///< additionally dense-Cholesky the assembled matrix
  };

  /// Takes ownership of the blocks. Each D_k must be symmetric to 1e-12
  /// per entry; with Validate::SymmetrySpd the assembled matrix must admit
  /// a dense Cholesky factorization.
  BlockTridiagMatrix(std::vector<Eigen::MatrixXd> diag, std::vector<Eigen::MatrixXd> off,
                     Validate validate = Validate::Symmetry);

  int num_blocks() const { return num_blocks_; }
  int block_size() const { return block_size_; }
  Eigen::Index dim() const { return static_cast<Eigen::Index>(num_blocks_) * block_size_; }

  /// D_{k+1} in 1-based notation.
  const Eigen::MatrixXd& diag(int k) const { return diag_[k]; }
  /// O_{k+1} in 1-based notation; couples block rows k and k+1.
  const Eigen::MatrixXd& off(int k) const { return off_[k]; }

  /// y = A x with per-block products; O(N n^2).
  BlockVector matvec(const BlockVector& x) const;

  /// Dense assembly of the full matrix, symmetric by mirror fill.
  Eigen::MatrixXd assemble_dense() const;

  BlockVector zero_vector() const { return BlockVector(num_blocks_, block_size_); }

private:
  int num_blocks_;
  int block_size_;
  std::vector<Eigen::MatrixXd> diag_;
  std::vector<Eigen::MatrixXd> off_;
};

/// Text fixture format: first line "N n", then the N diagonal blocks and the
/// N-1 super-diagonal blocks, each as n lines of n values. Values round-trip
/// through 17 significant digits.
void write_text(std::ostream& os, const BlockTridiagMatrix& A);
void write_text_file(const std::string& path, const BlockTridiagMatrix& A);
BlockTridiagMatrix read_text(std::istream& is,
                             BlockTridiagMatrix::Validate validate = BlockTridiagMatrix::Validate::Symmetry);
BlockTridiagMatrix read_text_file(const std::string& path,
                                  BlockTridiagMatrix::Validate validate = BlockTridiagMatrix::Validate::Symmetry);

}  // namespace msprec
