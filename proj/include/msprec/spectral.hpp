#pragma once

#include <string>
#include <vector>

#include "msprec/precond.hpp"

namespace msprec {

/// Eigendecomposition of a symmetric matrix: values ascending, vectors as
/// matching columns.
struct EigenDecomposition {
  Eigen::VectorXd values;
  Eigen::MatrixXd vectors;
};

/// Dense symmetric eigensolver (cyclic Jacobi rotations). Intended for
/// desk-scale matrices (dimension up to a few hundred). The input must be
/// symmetric to 1e-10 relative to its largest entry; it is symmetrized
/// internally before iterating.
Eigen::VectorXd sym_eig(const Eigen::MatrixXd& M);
EigenDecomposition sym_eig_full(const Eigen::MatrixXd& M);

/// Dense assembly of a linear operator by application to unit vectors.
Eigen::MatrixXd assemble_operator(int num_blocks, int block_size, const LinearOperator& op);

/// Shared eigenvalue-equality rule: x and y coincide when
/// |x - y| <= tol * max(1, |x|). Counts clusters of a sorted sequence.
long count_distinct(const std::vector<double>& sorted_values, double rel_tol = 1e-7);

/// Spectrum of an s.p.d. operator with derived quantities.
struct SpectrumReport {
  std::vector<double> eigenvalues;  ///< ascending
  long distinct = 0;                ///< clusters under the 1e-7 relative rule
  double cond = 0.0;                ///< max/min over the positive eigenvalues
  SpectrumInterval interval;        ///< closed hull of the measured values
  bool pairing_ok = false;          ///< every cluster away from 1.0 has even size
};

/// JSON document {eigenvalues, distinct, cond, interval, pairing_ok}.
std::string to_json(const SpectrumReport& report);

/// Exact spectrum of M_m^{-1} A: assembles M_m^{-1} densely column by
/// column, factors it as L L^T (throws NotPositiveDefinite when that fails,
/// which surfaces any s.p.d. violation), and diagonalizes the similar
/// symmetric matrix L^T A L.
SpectrumReport spectrum_of_preconditioned(const PolyPreconditioner& P);

/// Exact spectrum of G A for arbitrary weights, including indefinite G:
/// symmetrizes through a Cholesky factor of A instead of G.
SpectrumReport spectrum_of_G(const SplittingWeights& w, const BlockFactorization& F);

/// Distinct nonzero eigenvalues of the stair product B_l^{-1} C_l,
/// recovered from sigma(G_{0,1} A) as lambda = (1 - mu)^2 with the +/- pair
/// deduplicated. Sorted ascending.
std::vector<double> eig_stair_product(std::shared_ptr<const BlockFactorization> F);

/// Spectral radius of H = I - G A, measured as max |1 - mu| over
/// sigma(G A).
double spectral_radius_H(const SplittingWeights& w, const BlockFactorization& F);

}  // namespace msprec
