#pragma once

#include <optional>
#include <string>
#include <vector>

#include "msprec/ocpgen.hpp"
#include "msprec/precond.hpp"

namespace msprec {

struct PresetWeights {
  std::string label;
  SplittingWeights weights;
};

struct ExperimentConfig {
  int N = 20;
  int n = 15;
  int nu = 0;  ///< 0 selects the generator default
  int num_matrices = 50;
  int num_rhs = 100;
  std::vector<int> m_list = {1, 2, 3, 4};
  std::vector<PresetWeights> presets = default_presets();
  double tol = 1e-6;
  int max_iter = 0;  ///< 0 selects 10 N n
  std::uint64_t seed = 0;
  bool with_spectra = false;
  double dyn_scale = 1.0;
  double cost_scale = 1.0;
  std::string dump_dir;  ///< when non-empty, instances are written here

  static std::vector<PresetWeights> default_presets();
  void validate() const;
};

struct ExperimentRow {
  std::string preset;
  int m = 0;
  double mean_iterations = 0.0;
  std::optional<double> mean_cond;
  /// mean_cond divided by the DiagonalOnly/m=1 mean (falls back to the
  /// first row when that combination is not part of the sweep).
  std::optional<double> mean_cond_normalized;
  long num_failures = 0;
};

struct ExperimentStats {
  int spd_resamples = 0;     ///< instances that needed a fresh seed
  int instances_failed = 0;  ///< instances dropped after exhausting retries
};

/// Runs the (matrix x preset x m x rhs) sweep: instances from the LQR Schur
/// generator (instance k uses seed ^ k, one shared rhs set from the rhs
/// stream), PCG iteration counts per solve, and exact condition numbers via
/// the spectral oracle when with_spectra is set and N n <= 600.
///
/// Failed solves are excluded from the means and counted per row; instance
/// generation failures are counted in stats and never abort the sweep. The
/// result is deterministic in the seed regardless of thread count. Rows are
/// ordered preset-major with m ascending.
std::vector<ExperimentRow> run_experiment(const ExperimentConfig& cfg,
                                          ExperimentStats* stats = nullptr);

/// CSV with header preset,m,mean_iterations,mean_cond,mean_cond_normalized,
/// num_failures; 6 significant digits, LF line endings, empty fields where
/// condition numbers were not computed.
void write_csv(const std::vector<ExperimentRow>& rows, const std::string& path);

/// Worker count: the BENCH_THREADS environment variable when set to a
/// positive value, otherwise the hardware concurrency.
int bench_thread_count();

}  // namespace msprec
