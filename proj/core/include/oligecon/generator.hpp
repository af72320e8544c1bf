#pragma once

#include <cstdint>
#include <stdexcept>

#include "oligecon/economy.hpp"

namespace oligecon {

/// A closed interval sampled on an evenly spaced grid.
struct GridRange {
  double min = 0.0;
  double max = 0.0;
  double step = 1.0;

  int count() const;            // number of grid points, min included
  double value(int i) const;    // i-th grid point
  bool valid() const;
};

struct OligarchWitness {
  bool enabled = true;
  int size = 12;
  int depth = 3;
};

/// Knobs of the synthetic-economy sampler; defaults reproduce the
/// simulation-scenario parameter table.
struct GeneratorConfig {
  int n_raw = 2;
  int n_companies = 25;
  GridRange beta_range{0.25, 0.60, 0.05};
  int indegree = 2;
  double scale_min = 0.50;   // allowed sum(beta) per company
  double scale_max = 0.85;
  int min_graph_depth = 5;
  OligarchWitness oligarch_feasibility{};
  GridRange alpha_range{1.1, 1.6, 0.1};
  double price_base = 1.1;   // prices are base^k with k the 1-based good index
  int max_attempts = 10000;
};

/// Thrown when rejection sampling exhausts max_attempts.
struct RejectionExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Thrown when the economy cannot host an oligarch of the requested
/// size and depth.
struct NoFeasibleOligarch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Validates config invariants; throws std::invalid_argument on failure.
void validate_config(const GeneratorConfig& config);

/// Deterministic, seed-driven generation of an economy satisfying the
/// sampler constraints: exact indegree per company, per-company
/// beta sums inside [scale_min, scale_max], graph depth at least
/// min_graph_depth and, when enabled, a feasibility witness for an
/// oligarch of the configured size and depth.
Economy generate_economy(const GeneratorConfig& config, std::uint64_t seed);

/// Grows an oligarch of exactly the requested size and depth by seeding
/// at a company whose raw distance equals `depth` and expanding along
/// the consistency graph among companies at depth or deeper. Each
/// attempt's growth sequence depends only on (economy, depth, seed,
/// attempt), so prefixes nest across sizes served by one attempt.
OligarchSpec generate_oligarch(const Economy& economy, int size, int depth, std::uint64_t seed,
                               int max_attempts = 10000);

/// Price schedule base^k for the 1-based good index k (k = 0 gives 1).
double price_schedule(double base, int k);

}  // namespace oligecon
