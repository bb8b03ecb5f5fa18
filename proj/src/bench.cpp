#include "msprec/bench.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <thread>

#include "msprec/krylov.hpp"
#include "msprec/spectral.hpp"

namespace msprec {

namespace {
constexpr Eigen::Index kSpectraDimLimit = 600;
constexpr int kMaxSeedRetries = 10;
}  // namespace

std::vector<PresetWeights> ExperimentConfig::default_presets() {
  return {{"DiagonalOnly", SplittingWeights::diagonal_only()},
          {"StairsOnly", SplittingWeights::stairs_only()},
          {"EqualWeights", SplittingWeights::equal_weights()},
          {"Optimal", SplittingWeights::optimal()}};
}

void ExperimentConfig::validate() const {
  if (num_matrices < 1 || num_rhs < 1)
    throw std::invalid_argument("ExperimentConfig: num_matrices and num_rhs must be >= 1");
  if (m_list.empty() || presets.empty())
    throw std::invalid_argument("ExperimentConfig: m_list and presets must be non-empty");
  for (int m : m_list)
    if (m < 1) throw std::invalid_argument("ExperimentConfig: polynomial steps must be >= 1");
  for (const auto& p : presets)
    if (std::abs(2.0 * p.weights.a + p.weights.b - 1.0) > 1e-14)
      throw std::invalid_argument("ExperimentConfig: preset weights violate 2a + b = 1");
  if (!(tol > 0.0)) throw std::invalid_argument("ExperimentConfig: tol must be > 0");
}

int bench_thread_count() {
  if (const char* env = std::getenv("BENCH_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v > 0) return static_cast<int>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

namespace {

struct CellResult {
  long iteration_sum = 0;
  long converged = 0;
  long failures = 0;
  std::optional<double> cond;
};

struct InstanceResult {
  bool ok = false;
  // indexed [preset][m]
  std::vector<std::vector<CellResult>> cells;
};

InstanceResult run_instance(const ExperimentConfig& cfg, int k,
                            const std::vector<BlockVector>& rhs, int* resamples) {
  InstanceResult result;
  std::shared_ptr<const BlockTridiagMatrix> A;
  GeneratorConfig gen;
  gen.N = cfg.N;
  gen.n = cfg.n;
  gen.nu = cfg.nu;
  gen.dyn_scale = cfg.dyn_scale;
  gen.cost_scale = cfg.cost_scale;
  for (int attempt = 0; attempt < kMaxSeedRetries && !A; ++attempt) {
    gen.seed = instance_seed(cfg.seed, k) + static_cast<std::uint64_t>(attempt);
    try {
      A = schur_complement(random_lqr(gen)).S;
    } catch (const NotPositiveDefinite&) {
      ++*resamples;
    }
  }
  if (!A) return result;

  if (!cfg.dump_dir.empty()) {
    char name[64];
    std::snprintf(name, sizeof(name), "instance_%04d", k);
    write_instance_files((std::filesystem::path(cfg.dump_dir) / name).string(), *A, gen);
  }

  const auto F = factorize(A);
  PcgConfig pcg_cfg;
  pcg_cfg.tol_abs = cfg.tol;
  pcg_cfg.max_iter = cfg.max_iter;

  result.cells.resize(cfg.presets.size());
  for (std::size_t pi = 0; pi < cfg.presets.size(); ++pi) {
    result.cells[pi].resize(cfg.m_list.size());
    for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
      const PolyPreconditioner M(cfg.presets[pi].weights, cfg.m_list[mi], F);
      CellResult& cell = result.cells[pi][mi];
      for (const BlockVector& b : rhs) {
        try {
          const PcgResult r =
              pcg_solve(*A, b, [&](const BlockVector& v) { return M.apply(v); }, pcg_cfg);
          if (r.converged) {
            cell.iteration_sum += r.iterations;
            ++cell.converged;
          } else {
            ++cell.failures;
          }
        } catch (const PcgBreakdown&) {
          ++cell.failures;
        }
      }
      if (cfg.with_spectra && A->dim() <= kSpectraDimLimit)
        cell.cond = spectrum_of_preconditioned(M).cond;
    }
  }
  result.ok = true;
  return result;
}

}  // namespace

std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg, ExperimentStats* stats) {
  cfg.validate();
  if (!cfg.dump_dir.empty()) std::filesystem::create_directories(cfg.dump_dir);

  GeneratorConfig rhs_gen;
  rhs_gen.seed = cfg.seed;
  rhs_gen.N = cfg.N;
  rhs_gen.n = cfg.n;
  rhs_gen.nu = cfg.nu;
  const std::vector<BlockVector> rhs = random_rhs(rhs_gen, cfg.num_rhs);

  std::vector<InstanceResult> per_instance(cfg.num_matrices);
  std::vector<int> per_instance_resamples(cfg.num_matrices, 0);

  const int workers = std::min(bench_thread_count(), cfg.num_matrices);
  std::atomic<int> next{0};
  auto work = [&]() {
    for (int k = next.fetch_add(1); k < cfg.num_matrices; k = next.fetch_add(1))
      per_instance[k] = run_instance(cfg, k, rhs, &per_instance_resamples[k]);
  };
  if (workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& th : pool) th.join();
  }

  ExperimentStats local;
  for (int k = 0; k < cfg.num_matrices; ++k) {
    local.spd_resamples += per_instance_resamples[k];
    if (!per_instance[k].ok) ++local.instances_failed;
  }
  if (stats) *stats = local;

  std::vector<ExperimentRow> rows;
  rows.reserve(cfg.presets.size() * cfg.m_list.size());
  std::optional<double> base_cond;
  for (std::size_t pi = 0; pi < cfg.presets.size(); ++pi) {
    for (std::size_t mi = 0; mi < cfg.m_list.size(); ++mi) {
      ExperimentRow row;
      row.preset = cfg.presets[pi].label;
      row.m = cfg.m_list[mi];
      long iter_sum = 0, converged = 0;
      double cond_sum = 0.0;
      long cond_count = 0;
      for (const InstanceResult& inst : per_instance) {
        if (!inst.ok) continue;
        const CellResult& cell = inst.cells[pi][mi];
        iter_sum += cell.iteration_sum;
        converged += cell.converged;
        row.num_failures += cell.failures;
        if (cell.cond) {
          cond_sum += *cell.cond;
          ++cond_count;
        }
      }
      row.mean_iterations = converged > 0 ? static_cast<double>(iter_sum) / converged : 0.0;
      if (cond_count > 0) row.mean_cond = cond_sum / cond_count;
      const bool is_base = cfg.presets[pi].weights.a == 0.0 &&
                           cfg.presets[pi].weights.b == 1.0 && cfg.m_list[mi] == 1;
      if (row.mean_cond && (is_base || (!base_cond && rows.empty()))) base_cond = row.mean_cond;
      rows.push_back(std::move(row));
    }
  }
  if (base_cond)
    for (ExperimentRow& row : rows)
      if (row.mean_cond) row.mean_cond_normalized = *row.mean_cond / *base_cond;
  return rows;
}

void write_csv(const std::vector<ExperimentRow>& rows, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoFailure("write_csv: cannot open " + path);
  os << "preset,m,mean_iterations,mean_cond,mean_cond_normalized,num_failures\n";
  char buf[64];
  auto fmt = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  for (const ExperimentRow& row : rows) {
    os << row.preset << ',' << row.m << ',' << fmt(row.mean_iterations) << ','
       << (row.mean_cond ? fmt(*row.mean_cond) : "") << ','
       << (row.mean_cond_normalized ? fmt(*row.mean_cond_normalized) : "") << ','
       << row.num_failures << '\n';
  }
  if (!os) throw IoFailure("write_csv: write failed for " + path);
}

}  // namespace msprec
