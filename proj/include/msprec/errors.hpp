#pragma once

#include <stdexcept>
#include <string>

namespace msprec {

/// Mismatched operand shapes (block count or block size).
class DimensionMismatch : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// A block that is required to be symmetric is not.
class NotSymmetric : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// Cholesky failure. block_index() identifies the offending diagonal block
/// (0-based), or is -1 when the failure concerns an assembled matrix.
class NotPositiveDefinite : public std::runtime_error {
public:
  NotPositiveDefinite(int block_index, const std::string& what)
      : std::runtime_error(what), block_index_(block_index) {}
  int block_index() const { return block_index_; }

private:
  int block_index_;
};

/// p'Ap <= 0 inside PCG; the system or preconditioner is not s.p.d.
class PcgBreakdown : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// File I/O failure; message carries the path.
class IoFailure : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

}  // namespace msprec
