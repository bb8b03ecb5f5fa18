#include "msprec/ocpgen.hpp"

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

namespace msprec {

double NormalSampler::operator()() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // u1 in (0, 1] so the log is finite.
  const double u1 = (static_cast<double>(engine_() >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * M_PI * u2;
  spare_ = r * std::sin(angle);
  have_spare_ = true;
  return r * std::cos(angle);
}

Eigen::MatrixXd NormalSampler::normal_matrix(int rows, int cols) {
  Eigen::MatrixXd M(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) M(r, c) = (*this)();
  return M;
}

Eigen::VectorXd NormalSampler::normal_vector(int size) {
  Eigen::VectorXd v(size);
  for (int i = 0; i < size; ++i) v[i] = (*this)();
  return v;
}

void GeneratorConfig::validate() const {
  if (N < 2) throw std::invalid_argument("GeneratorConfig: N must be >= 2");
  if (n < 1) throw std::invalid_argument("GeneratorConfig: n must be >= 1");
  if (nu < 0) throw std::invalid_argument("GeneratorConfig: nu must be >= 0");
  if (!(dyn_scale >= 0.0) || !(cost_scale >= 0.0))
    throw std::invalid_argument("GeneratorConfig: bad scale parameters");
}

LqrProblem random_lqr(const GeneratorConfig& cfg) {
  cfg.validate();
  NormalSampler rng(cfg.seed);
  LqrProblem p;
  p.horizon = cfg.N - 1;
  p.nx = cfg.n;
  p.nu = cfg.control_dim();

  const double eps = 0.1 * p.nx;  // diagonal shift keeping the costs p.d.
  p.Q.reserve(p.horizon + 1);
  for (int t = 0; t <= p.horizon; ++t) {
    const Eigen::MatrixXd L = cfg.cost_scale * rng.normal_matrix(p.nx, p.nx);
    p.Q.push_back(L * L.transpose() + eps * Eigen::MatrixXd::Identity(p.nx, p.nx));
  }
  const double dyn = cfg.dyn_scale / std::sqrt(static_cast<double>(p.nx));
  p.R.reserve(p.horizon);
  p.A_dyn.reserve(p.horizon);
  p.B_dyn.reserve(p.horizon);
  for (int t = 0; t < p.horizon; ++t) {
    const Eigen::MatrixXd L = cfg.cost_scale * rng.normal_matrix(p.nu, p.nu);
    p.R.push_back(L * L.transpose() + eps * Eigen::MatrixXd::Identity(p.nu, p.nu));
    p.A_dyn.push_back(dyn * rng.normal_matrix(p.nx, p.nx));
    p.B_dyn.push_back(dyn * rng.normal_matrix(p.nx, p.nu));
  }
  p.x0 = rng.normal_vector(p.nx);
  return p;
}

KktSchur schur_complement(const LqrProblem& p) {
  const int T = p.horizon;
  const int nx = p.nx;
  KktSchur out;
  out.Q_llt.reserve(T + 1);
  out.R_llt.reserve(T);
  for (int t = 0; t <= T; ++t) {
    out.Q_llt.emplace_back(p.Q[t]);
    if (out.Q_llt.back().info() != Eigen::Success)
      throw NotPositiveDefinite(t, "schur_complement: Q block not positive definite");
  }
  for (int t = 0; t < T; ++t) {
    out.R_llt.emplace_back(p.R[t]);
    if (out.R_llt.back().info() != Eigen::Success)
      throw NotPositiveDefinite(t, "schur_complement: R block not positive definite");
  }

  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(nx, nx);
  auto symmetrized = [](const Eigen::MatrixXd& M) -> Eigen::MatrixXd {
    return 0.5 * (M + M.transpose());
  };

  std::vector<Eigen::MatrixXd> diag;
  std::vector<Eigen::MatrixXd> off;
  diag.reserve(T + 1);
  off.reserve(T);
  diag.push_back(symmetrized(out.Q_llt[0].solve(I)));
  for (int t = 1; t <= T; ++t) {
    const Eigen::MatrixXd AQinvAt = p.A_dyn[t - 1] * out.Q_llt[t - 1].solve(p.A_dyn[t - 1].transpose());
    const Eigen::MatrixXd BRinvBt = p.B_dyn[t - 1] * out.R_llt[t - 1].solve(p.B_dyn[t - 1].transpose());
    diag.push_back(symmetrized(AQinvAt + BRinvBt + out.Q_llt[t].solve(I)));
  }
  for (int t = 0; t < T; ++t) off.push_back(-out.Q_llt[t].solve(p.A_dyn[t].transpose()));

  out.S = std::make_shared<const BlockTridiagMatrix>(std::move(diag), std::move(off),
                                                     BlockTridiagMatrix::Validate::SymmetrySpd);
  return out;
}

std::vector<BlockVector> random_rhs(const GeneratorConfig& cfg, int count) {
  cfg.validate();
  if (count < 0) throw std::invalid_argument("random_rhs: count must be >= 0");
  NormalSampler rng(cfg.seed ^ kRhsStreamTag);
  std::vector<BlockVector> out;
  out.reserve(count);
  for (int j = 0; j < count; ++j)
    out.emplace_back(cfg.N, cfg.n, rng.normal_vector(cfg.N * cfg.n));
  return out;
}

void write_instance_files(const std::string& prefix, const BlockTridiagMatrix& A,
                          const GeneratorConfig& cfg) {
  write_text_file(prefix + ".txt", A);
  nlohmann::json j;
  j["seed"] = cfg.seed;
  j["N"] = cfg.N;
  j["n"] = cfg.n;
  j["nu"] = cfg.control_dim();
  j["dyn_scale"] = cfg.dyn_scale;
  j["cost_scale"] = cfg.cost_scale;
  j["rng"] = "mt19937_64/box-muller-v1";
  std::ofstream os(prefix + ".json");
  if (!os) throw IoFailure("cannot open for writing: " + prefix + ".json");
  os << j.dump(2) << '\n';
}

}  // namespace msprec
