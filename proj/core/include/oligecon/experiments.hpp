#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "oligecon/generator.hpp"
#include "oligecon/scenario.hpp"

namespace oligecon {

/// Monte Carlo sweep configuration. An empty `sizes` means "all
/// feasible": for depth d the sizes 1..(companies - d + 1).
struct ExperimentConfig {
  GeneratorConfig generator;
  int replications = 1000;
  std::vector<int> depths{1, 2, 3, 4, 5};
  std::vector<int> sizes;
  std::vector<double> gammas{0.0, 0.25, 0.5, 0.75, 1.0};
  std::uint64_t master_seed = 0;
  SolverSettings solver;
  int workers = 1;
};

/// One sweep cell. feasible = false means no oligarch (or no economy)
/// could be generated for the cell; solver failures keep feasible =
/// true and carry a stage tag in `status`.
struct ExperimentRecord {
  int replication = 0;
  std::uint64_t economy_seed = 0;
  int depth_requested = 0;
  std::optional<int> depth_achieved;
  int size = 0;
  double gamma = 0.0;
  bool feasible = false;
  std::string status;  // "ok", "no_oligarch", "economy_failed", "stage*_..."
  std::optional<ScenarioResult> scenario;
};

/// Runs the sweep; records come back sorted by (replication, depth,
/// size, gamma) regardless of worker count, and the harness never
/// aborts on a per-cell failure.
std::vector<ExperimentRecord> run_monte_carlo(const ExperimentConfig& config);

enum class GridKind {
  RelativeGdpByDepthSize,
  RelativeGdpBySizeGamma,  // at a fixed depth
  InefficiencyByDepthSize,
};

const char* to_string(GridKind k);

struct GridCell {
  int count = 0;            // records contributing to the mean
  int count_undefined = 0;  // feasible records with an Undefined ratio
  int count_failed = 0;     // feasible records with a solver failure
  std::optional<double> mean;
  std::optional<double> stddev;
};

/// Aggregated cell grid behind the heatmaps and line charts. The size
/// axis carries the raw oligarch sizes; oligarchization percent is
/// size / n_companies.
struct AggregateGrid {
  GridKind kind = GridKind::RelativeGdpByDepthSize;
  std::vector<double> rows;
  std::vector<double> cols;
  int fixed_depth = -1;  // only for RelativeGdpBySizeGamma
  int n_companies = 0;
  std::vector<GridCell> cells;  // row-major

  GridCell& at(size_t r, size_t c) { return cells[r * cols.size() + c]; }
  const GridCell& at(size_t r, size_t c) const { return cells[r * cols.size() + c]; }
};

/// Per-cell mean/stddev over successful records; Undefined ratios are
/// excluded from inefficiency means but counted. Accumulation uses
/// pairwise summation in record order, so results do not depend on the
/// worker count. n_companies fills the grid's percent-axis metadata.
AggregateGrid aggregate(const std::vector<ExperimentRecord>& records, GridKind kind,
                        int fixed_depth = -1, int n_companies = 0);

/// Fixed CSV header of the record stream.
std::string records_csv_header();
std::string record_to_csv(const ExperimentRecord& r);
ExperimentRecord record_from_csv(const std::string& line);

}  // namespace oligecon
