#include "msprec/block_tridiag.hpp"

#include <Eigen/Cholesky>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace msprec {

namespace {
constexpr double kSymmetryTol = 1e-12;
}

BlockTridiagMatrix::BlockTridiagMatrix(std::vector<Eigen::MatrixXd> diag,
                                       std::vector<Eigen::MatrixXd> off, Validate validate)
    : num_blocks_(static_cast<int>(diag.size())),
      block_size_(diag.empty() ? 0 : static_cast<int>(diag.front().rows())),
      diag_(std::move(diag)),
      off_(std::move(off)) {
  if (num_blocks_ < 1) throw DimensionMismatch("BlockTridiagMatrix: need at least one diagonal block");
  if (static_cast<int>(off_.size()) != num_blocks_ - 1)
    throw DimensionMismatch("BlockTridiagMatrix: need exactly N-1 off-diagonal blocks");
  for (int k = 0; k < num_blocks_; ++k) {
    const auto& D = diag_[k];
    if (D.rows() != block_size_ || D.cols() != block_size_)
      throw DimensionMismatch("BlockTridiagMatrix: diagonal block " + std::to_string(k) +
                              " is not n x n");
    const double asym = (D - D.transpose()).cwiseAbs().maxCoeff();
    if (asym > kSymmetryTol)
      throw NotSymmetric("BlockTridiagMatrix: diagonal block " + std::to_string(k) +
                         " asymmetry " + std::to_string(asym));
  }
  for (int k = 0; k + 1 < num_blocks_; ++k) {
    const auto& O = off_[k];
    if (O.rows() != block_size_ || O.cols() != block_size_)
      throw DimensionMismatch("BlockTridiagMatrix: off-diagonal block " + std::to_string(k) +
                              " is not n x n");
  }
  if (validate == Validate::SymmetrySpd) {
    Eigen::LLT<Eigen::MatrixXd> llt(assemble_dense());
    if (llt.info() != Eigen::Success)
      throw NotPositiveDefinite(-1, "BlockTridiagMatrix: assembled matrix is not positive definite");
  }
}

BlockVector BlockTridiagMatrix::matvec(const BlockVector& x) const {
  if (x.num_blocks() != num_blocks_ || x.block_size() != block_size_)
    throw DimensionMismatch("matvec: vector shape does not match matrix");
  BlockVector y(num_blocks_, block_size_);
  for (int i = 0; i < num_blocks_; ++i) {
    auto yi = y.block(i);
    yi.noalias() = diag_[i] * x.block(i);
    if (i > 0) yi.noalias() += off_[i - 1].transpose() * x.block(i - 1);
    if (i + 1 < num_blocks_) yi.noalias() += off_[i] * x.block(i + 1);
  }
  return y;
}

Eigen::MatrixXd BlockTridiagMatrix::assemble_dense() const {
  const int n = block_size_;
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(dim(), dim());
  for (int i = 0; i < num_blocks_; ++i) A.block(i * n, i * n, n, n) = diag_[i];
  for (int k = 0; k + 1 < num_blocks_; ++k) {
    A.block(k * n, (k + 1) * n, n, n) = off_[k];
    A.block((k + 1) * n, k * n, n, n) = off_[k].transpose();
  }
  return A;
}

std::pair<BlockVector, BlockVector> parity_split(const BlockVector& v) {
  BlockVector even(v.num_blocks(), v.block_size());
  BlockVector odd(v.num_blocks(), v.block_size());
  for (int i = 0; i < v.num_blocks(); ++i) {
    // 1-based position i+1: even when i is odd.
    if (i % 2 == 1)
      even.block(i) = v.block(i);
    else
      odd.block(i) = v.block(i);
  }
  return {std::move(even), std::move(odd)};
}

namespace {

void write_block(std::ostream& os, const Eigen::MatrixXd& M) {
  char buf[64];
  for (Eigen::Index r = 0; r < M.rows(); ++r) {
    for (Eigen::Index c = 0; c < M.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g", M(r, c));
      os << buf << (c + 1 < M.cols() ? " " : "");
    }
    os << '\n';
  }
}

Eigen::MatrixXd read_block(std::istream& is, int n, const char* what) {
  Eigen::MatrixXd M(n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (!(is >> M(r, c))) throw IoFailure(std::string("matrix text: truncated ") + what);
  return M;
}

}  // namespace

void write_text(std::ostream& os, const BlockTridiagMatrix& A) {
  os << A.num_blocks() << ' ' << A.block_size() << '\n';
  for (int k = 0; k < A.num_blocks(); ++k) write_block(os, A.diag(k));
  for (int k = 0; k + 1 < A.num_blocks(); ++k) write_block(os, A.off(k));
}

void write_text_file(const std::string& path, const BlockTridiagMatrix& A) {
  std::ofstream os(path);
  if (!os) throw IoFailure("cannot open for writing: " + path);
  write_text(os, A);
  if (!os) throw IoFailure("write failed: " + path);
}

BlockTridiagMatrix read_text(std::istream& is, BlockTridiagMatrix::Validate validate) {
  int N = 0, n = 0;
  if (!(is >> N >> n) || N < 1 || n < 1) throw IoFailure("matrix text: bad header");
  std::vector<Eigen::MatrixXd> diag, off;
  diag.reserve(N);
  off.reserve(N - 1);
  for (int k = 0; k < N; ++k) diag.push_back(read_block(is, n, "diagonal block"));
  for (int k = 0; k + 1 < N; ++k) off.push_back(read_block(is, n, "off-diagonal block"));
  return BlockTridiagMatrix(std::move(diag), std::move(off), validate);
}

BlockTridiagMatrix read_text_file(const std::string& path, BlockTridiagMatrix::Validate validate) {
  std::ifstream is(path);
  if (!is) throw IoFailure("cannot open for reading: " + path);
  return read_text(is, validate);
}

}  // namespace msprec
