#include "oligecon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <thread>

#include "oligecon/rng.hpp"

namespace oligecon {

namespace {

std::vector<int> sizes_for_depth(const ExperimentConfig& cfg, int depth) {
  if (!cfg.sizes.empty()) return cfg.sizes;
  // a node at raw distance d implies d-1 strictly shallower companies,
  // so companies - (d - 1) is the attainable maximum
  std::vector<int> sizes;
  for (int s = 1; s <= cfg.generator.n_companies - depth + 1; ++s) sizes.push_back(s);
  return sizes;
}

void run_replication(const ExperimentConfig& cfg, int rep, std::vector<ExperimentRecord>& out) {
  const std::uint64_t economy_seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(rep));
  std::optional<Economy> economy;
  std::optional<PlanSolution> baseline;
  std::string economy_status = "ok";
  try {
    economy = generate_economy(cfg.generator, economy_seed);
    baseline = solve_global_optimum(*economy, cfg.solver);
    if (baseline->status != SolveStatus::Optimal) {
      economy_status = "stage1_" + std::string(to_string(baseline->status));
      baseline.reset();
    }
  } catch (const RejectionExhausted&) {
    economy_status = "economy_failed";
  }

  for (int depth : cfg.depths) {
    for (int size : sizes_for_depth(cfg, depth)) {
      // one oligarch per (depth, size) cell, shared across gammas
      std::optional<OligarchSpec> olig;
      std::string olig_status = economy_status;
      if (economy && baseline) {
        try {
          olig = generate_oligarch(*economy, size, depth,
                                   derive_seed(economy_seed, static_cast<std::uint64_t>(depth),
                                               static_cast<std::uint64_t>(size)));
        } catch (const NoFeasibleOligarch&) {
          olig_status = "no_oligarch";
        } catch (const std::invalid_argument&) {
          olig_status = "no_oligarch";
        }
      }
      for (double gamma : cfg.gammas) {
        ExperimentRecord rec;
        rec.replication = rep;
        rec.economy_seed = economy_seed;
        rec.depth_requested = depth;
        rec.size = size;
        rec.gamma = gamma;
        if (!olig) {
          rec.feasible = false;
          rec.status = olig_status;
        } else {
          rec.feasible = true;
          rec.depth_achieved = olig->depth;
          try {
            rec.scenario = run_scenario(*economy, *baseline, *olig, gamma, cfg.solver);
            rec.status = "ok";
          } catch (const StageError& err) {
            const char* stage = err.stage == ProblemKind::OligarchStage ? "stage2_" : "stage3_";
            rec.status = stage + std::string(to_string(err.status));
          }
        }
        out.push_back(std::move(rec));
      }
    }
  }
}

double pairwise_sum(const std::vector<double>& v, size_t lo, size_t hi) {
  if (hi - lo <= 8) {
    double s = 0.0;
    for (size_t i = lo; i < hi; ++i) s += v[i];
    return s;
  }
  const size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(v, lo, mid) + pairwise_sum(v, mid, hi);
}

double pairwise_sum(const std::vector<double>& v) { return v.empty() ? 0.0 : pairwise_sum(v, 0, v.size()); }

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, p);
}

}  // namespace

std::vector<ExperimentRecord> run_monte_carlo(const ExperimentConfig& cfg) {
  if (cfg.replications < 1) throw std::invalid_argument("run_monte_carlo: replications must be >= 1");
  for (double g : cfg.gammas)
    if (g < 0.0 || g > 1.0) throw std::invalid_argument("run_monte_carlo: gammas must lie in [0, 1]");

  std::vector<std::vector<ExperimentRecord>> per_rep(cfg.replications);
  const int workers = std::max(1, cfg.workers);
  if (workers == 1) {
    for (int rep = 0; rep < cfg.replications; ++rep) run_replication(cfg, rep, per_rep[rep]);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (int rep = next.fetch_add(1); rep < cfg.replications; rep = next.fetch_add(1))
          run_replication(cfg, rep, per_rep[rep]);
      });
    for (auto& t : pool) t.join();
  }

  std::vector<ExperimentRecord> records;
  for (auto& chunk : per_rep)
    for (auto& r : chunk) records.push_back(std::move(r));
  return records;  // already sorted: per-rep chunks emit (depth, size, gamma) in order
}

const char* to_string(GridKind k) {
  switch (k) {
    case GridKind::RelativeGdpByDepthSize: return "relative_gdp_by_depth_size";
    case GridKind::RelativeGdpBySizeGamma: return "relative_gdp_by_size_gamma";
    case GridKind::InefficiencyByDepthSize: return "inefficiency_by_depth_size";
  }
  return "unknown";
}

AggregateGrid aggregate(const std::vector<ExperimentRecord>& records, GridKind kind,
                        int fixed_depth, int n_companies) {
  if (kind == GridKind::RelativeGdpBySizeGamma && fixed_depth < 0)
    throw std::invalid_argument("aggregate: size-gamma grid needs a fixed depth");

  // axes from the records themselves, sorted ascending
  std::vector<double> rows, cols;
  auto insert_sorted = [](std::vector<double>& axis, double v) {
    auto it = std::lower_bound(axis.begin(), axis.end(), v);
    if (it == axis.end() || *it != v) axis.insert(it, v);
  };
  for (const auto& r : records) {
    if (kind == GridKind::RelativeGdpBySizeGamma) {
      if (r.depth_requested != fixed_depth) continue;
      insert_sorted(rows, r.size);
      insert_sorted(cols, r.gamma);
    } else {
      insert_sorted(rows, r.depth_requested);
      insert_sorted(cols, r.size);
    }
  }

  AggregateGrid grid;
  grid.kind = kind;
  grid.rows = rows;
  grid.cols = cols;
  grid.fixed_depth = kind == GridKind::RelativeGdpBySizeGamma ? fixed_depth : -1;
  grid.n_companies = n_companies;
  grid.cells.resize(rows.size() * cols.size());

  std::map<std::pair<size_t, size_t>, std::vector<double>> values;
  auto axis_index = [](const std::vector<double>& axis, double v) {
    return static_cast<size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
  };

  for (const auto& r : records) {
    size_t row, col;
    if (kind == GridKind::RelativeGdpBySizeGamma) {
      if (r.depth_requested != fixed_depth) continue;
      row = axis_index(rows, r.size);
      col = axis_index(cols, r.gamma);
    } else {
      row = axis_index(rows, r.depth_requested);
      col = axis_index(cols, r.size);
    }
    GridCell& cell = grid.at(row, col);
    if (!r.feasible) continue;  // infeasible cells only lower the count
    if (!r.scenario) {
      ++cell.count_failed;
      continue;
    }
    if (kind == GridKind::InefficiencyByDepthSize) {
      if (!r.scenario->inefficiency_ratio) {
        ++cell.count_undefined;
        continue;
      }
      values[{row, col}].push_back(*r.scenario->inefficiency_ratio);
    } else {
      values[{row, col}].push_back(r.scenario->relative_gdp);
    }
    ++cell.count;
  }

  for (auto& [key, vals] : values) {
    GridCell& cell = grid.at(key.first, key.second);
    const double mean = pairwise_sum(vals) / static_cast<double>(vals.size());
    cell.mean = mean;
    std::vector<double> sq(vals.size());
    for (size_t i = 0; i < vals.size(); ++i) sq[i] = (vals[i] - mean) * (vals[i] - mean);
    cell.stddev = std::sqrt(pairwise_sum(sq) / static_cast<double>(vals.size()));
  }
  return grid;
}

std::string records_csv_header() {
  return "replication,economy_seed,depth_requested,depth_achieved,size,gamma,feasible,"
         "psi_star,oligarch_baseline,oligarch_optimal,final_gdp,relative_gdp,profit_gain,"
         "gdp_loss,inefficiency_ratio,status";
}

std::string record_to_csv(const ExperimentRecord& r) {
  std::ostringstream os;
  os << r.replication << ',' << r.economy_seed << ',' << r.depth_requested << ',';
  if (r.depth_achieved) os << *r.depth_achieved;
  os << ',' << r.size << ',' << fmt(r.gamma) << ',' << (r.feasible ? "true" : "false") << ',';
  if (r.scenario) {
    const ScenarioResult& s = *r.scenario;
    os << fmt(s.psi_star) << ',' << fmt(s.oligarch_baseline_profit) << ','
       << fmt(s.oligarch_optimal_profit) << ',' << fmt(s.final_gdp) << ','
       << fmt(s.relative_gdp) << ',' << fmt(s.profit_gain) << ',' << fmt(s.gdp_loss) << ',';
    if (s.inefficiency_ratio) os << fmt(*s.inefficiency_ratio);
  } else {
    os << ",,,,,,,";
  }
  os << ',' << r.status;
  return os.str();
}

ExperimentRecord record_from_csv(const std::string& line) {
  std::vector<std::string> f;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      f.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  f.push_back(cur);
  if (f.size() != 16) throw std::invalid_argument("record_from_csv: expected 16 fields");

  auto num = [](const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size())
      throw std::invalid_argument("record_from_csv: bad number '" + s + "'");
    return v;
  };

  ExperimentRecord r;
  r.replication = static_cast<int>(num(f[0]));
  r.economy_seed = static_cast<std::uint64_t>(std::stoull(f[1]));
  r.depth_requested = static_cast<int>(num(f[2]));
  if (!f[3].empty()) r.depth_achieved = static_cast<int>(num(f[3]));
  r.size = static_cast<int>(num(f[4]));
  r.gamma = num(f[5]);
  r.feasible = f[6] == "true";
  if (!f[7].empty()) {
    ScenarioResult s;
    s.psi_star = num(f[7]);
    s.oligarch_baseline_profit = num(f[8]);
    s.oligarch_optimal_profit = num(f[9]);
    s.final_gdp = num(f[10]);
    s.relative_gdp = num(f[11]);
    s.profit_gain = num(f[12]);
    s.gdp_loss = num(f[13]);
    if (!f[14].empty()) s.inefficiency_ratio = num(f[14]);
    r.scenario = s;
  }
  r.status = f[15];
  return r;
}

}  // namespace oligecon
