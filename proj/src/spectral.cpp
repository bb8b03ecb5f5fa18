#include "msprec/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include <nlohmann/json.hpp>

namespace msprec {

namespace {

constexpr double kDistinctTolRel = 1e-7;
constexpr double kOneTolAbs = 1e-8;

double off_diagonal_norm(const Eigen::MatrixXd& W) {
  double sum = 0.0;
  for (Eigen::Index q = 0; q < W.cols(); ++q)
    for (Eigen::Index p = 0; p < q; ++p) sum += W(p, q) * W(p, q);
  return std::sqrt(2.0 * sum);
}

// Cyclic Jacobi on the symmetrized copy of M. Quadratically convergent;
// a few sweeps suffice at these sizes.
EigenDecomposition jacobi_eig(const Eigen::MatrixXd& M, bool want_vectors) {
  if (M.rows() != M.cols()) throw DimensionMismatch("sym_eig: matrix must be square");
  const Eigen::Index n = M.rows();
  const double scale = std::max(1.0, M.cwiseAbs().maxCoeff());
  if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw NotSymmetric("sym_eig: input is not symmetric");

  Eigen::MatrixXd W = 0.5 * (M + M.transpose());
  Eigen::MatrixXd V;
  if (want_vectors) V = Eigen::MatrixXd::Identity(n, n);

  const double frob = std::max(W.norm(), std::numeric_limits<double>::min());
  const double stop = 1e-15 * frob;
  const double skip = 1e-18 * frob / static_cast<double>(n);

  Eigen::VectorXd colp(n), colq(n), rowp(n), rowq(n);
  constexpr int kMaxSweeps = 100;
  int sweep = 0;
  for (; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(W) <= stop) break;
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const double apq = W(p, q);
        if (std::abs(apq) <= skip) continue;
        const double theta = (W(q, q) - W(p, p)) / (2.0 * apq);
        double t;
        if (std::abs(theta) > 1e150) {
          t = 0.5 / theta;
        } else {
          t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
          if (theta < 0.0) t = -t;
        }
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        colp = W.col(p);
        colq = W.col(q);
        W.col(p).noalias() = c * colp - s * colq;
        W.col(q).noalias() = s * colp + c * colq;
        rowp = W.row(p).transpose();
        rowq = W.row(q).transpose();
        W.row(p).noalias() = (c * rowp - s * rowq).transpose();
        W.row(q).noalias() = (s * rowp + c * rowq).transpose();
        W(p, q) = 0.0;
        W(q, p) = 0.0;
        if (want_vectors) {
          colp = V.col(p);
          colq = V.col(q);
          V.col(p).noalias() = c * colp - s * colq;
          V.col(q).noalias() = s * colp + c * colq;
        }
      }
    }
  }
  if (sweep == kMaxSweeps && off_diagonal_norm(W) > 1e-10 * frob)
    throw std::runtime_error("sym_eig: Jacobi iteration failed to converge");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](Eigen::Index i, Eigen::Index j) { return W(i, i) < W(j, j); });

  EigenDecomposition out;
  out.values.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.values[i] = W(order[i], order[i]);
  if (want_vectors) {
    out.vectors.resize(n, n);
    for (Eigen::Index i = 0; i < n; ++i) out.vectors.col(i) = V.col(order[i]);
  }
  return out;
}

std::vector<long> cluster_sizes(const std::vector<double>& sorted, double rel_tol) {
  std::vector<long> sizes;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (!sizes.empty()) {
      // representative = first member of the current cluster
      const double rep = sorted[i - static_cast<std::size_t>(sizes.back())];
      if (std::abs(sorted[i] - rep) <= rel_tol * std::max(1.0, std::abs(rep))) {
        ++sizes.back();
        continue;
      }
    }
    sizes.push_back(1);
  }
  return sizes;
}

SpectrumReport build_report(Eigen::VectorXd eigs) {
  SpectrumReport report;
  report.eigenvalues.assign(eigs.data(), eigs.data() + eigs.size());
  std::sort(report.eigenvalues.begin(), report.eigenvalues.end());
  const auto& vals = report.eigenvalues;

  const auto sizes = cluster_sizes(vals, kDistinctTolRel);
  report.distinct = static_cast<long>(sizes.size());

  double lo_pos = std::numeric_limits<double>::infinity();
  double hi_pos = 0.0;
  for (double v : vals)
    if (v > 0.0) {
      lo_pos = std::min(lo_pos, v);
      hi_pos = std::max(hi_pos, v);
    }
  report.cond = (hi_pos > 0.0 && std::isfinite(lo_pos))
                    ? hi_pos / lo_pos
                    : std::numeric_limits<double>::quiet_NaN();

  report.interval = SpectrumInterval{vals.front(), vals.back(), false, false};

  report.pairing_ok = true;
  std::size_t idx = 0;
  for (long size : sizes) {
    bool touches_one = false;
    for (long j = 0; j < size; ++j)
      if (std::abs(vals[idx + static_cast<std::size_t>(j)] - 1.0) <= kOneTolAbs) touches_one = true;
    if (!touches_one && size % 2 != 0) report.pairing_ok = false;
    idx += static_cast<std::size_t>(size);
  }
  return report;
}

}  // namespace

Eigen::VectorXd sym_eig(const Eigen::MatrixXd& M) { return jacobi_eig(M, false).values; }

EigenDecomposition sym_eig_full(const Eigen::MatrixXd& M) { return jacobi_eig(M, true); }

Eigen::MatrixXd assemble_operator(int num_blocks, int block_size, const LinearOperator& op) {
  const Eigen::Index dim = static_cast<Eigen::Index>(num_blocks) * block_size;
  Eigen::MatrixXd out(dim, dim);
  BlockVector e(num_blocks, block_size);
  for (Eigen::Index j = 0; j < dim; ++j) {
    e.values().setZero();
    e.values()[j] = 1.0;
    out.col(j) = op(e).values();
  }
  return out;
}

long count_distinct(const std::vector<double>& sorted_values, double rel_tol) {
  if (sorted_values.empty()) return 0;
  return static_cast<long>(cluster_sizes(sorted_values, rel_tol).size());
}

std::string to_json(const SpectrumReport& report) {
  nlohmann::json j;
  j["eigenvalues"] = report.eigenvalues;
  j["distinct"] = report.distinct;
  j["cond"] = report.cond;
  j["interval"] = {{"lo", report.interval.lo},
                   {"hi", report.interval.hi},
                   {"lo_open", report.interval.lo_open},
                   {"hi_open", report.interval.hi_open}};
  j["pairing_ok"] = report.pairing_ok;
  return j.dump();
}

SpectrumReport spectrum_of_preconditioned(const PolyPreconditioner& P) {
  const BlockTridiagMatrix& A = P.matrix();
  Eigen::MatrixXd Minv = assemble_operator(A.num_blocks(), A.block_size(),
                                           [&](const BlockVector& v) { return P.apply(v); });
  Minv = 0.5 * (Minv + Minv.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(Minv);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(-1, "spectrum_of_preconditioned: M^{-1} is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd T = L.transpose() * A.assemble_dense() * L;
  return build_report(sym_eig(T));
}

SpectrumReport spectrum_of_G(const SplittingWeights& w, const BlockFactorization& F) {
  const BlockTridiagMatrix& A = F.matrix();
  Eigen::MatrixXd G = assemble_operator(A.num_blocks(), A.block_size(),
                                        [&](const BlockVector& v) { return apply_G(w, F, v); });
  G = 0.5 * (G + G.transpose()).eval();
  Eigen::LLT<Eigen::MatrixXd> llt(A.assemble_dense());
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite(-1, "spectrum_of_G: A is not positive definite");
  const Eigen::MatrixXd L = llt.matrixL();
  const Eigen::MatrixXd T = L.transpose() * G * L;
  return build_report(sym_eig(T));
}

std::vector<double> eig_stair_product(std::shared_ptr<const BlockFactorization> F) {
  const PolyPreconditioner jacobi(SplittingWeights::diagonal_only(), 1, std::move(F));
  const SpectrumReport report = spectrum_of_preconditioned(jacobi);

  // mu = 1 -/+ sqrt(lambda); drop the mu ~ 1 group, square back, merge pairs.
  std::vector<double> lambdas;
  for (double mu : report.eigenvalues) {
    const double d = 1.0 - mu;
    if (std::abs(d) <= kOneTolAbs) continue;
    lambdas.push_back(d * d);
  }
  std::sort(lambdas.begin(), lambdas.end());
  std::vector<double> unique;
  for (double lam : lambdas) {
    if (!unique.empty() &&
        std::abs(lam - unique.back()) <= kDistinctTolRel * std::max(1.0, std::abs(unique.back())))
      continue;
    unique.push_back(lam);
  }
  return unique;
}

double spectral_radius_H(const SplittingWeights& w, const BlockFactorization& F) {
  const SpectrumReport report = spectrum_of_G(w, F);
  double radius = 0.0;
  for (double mu : report.eigenvalues) radius = std::max(radius, std::abs(1.0 - mu));
  return radius;
}

}  // namespace msprec
