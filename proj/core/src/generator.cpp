#include "oligecon/generator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "oligecon/rng.hpp"

namespace oligecon {

int GridRange::count() const {
  if (step <= 0.0) return 0;
  return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

double GridRange::value(int i) const { return min + step * i; }

bool GridRange::valid() const {
  if (!(step > 0.0) || !(max >= min)) return false;
  // the grid step must divide the range width
  const double w = (max - min) / step;
  return std::abs(w - std::round(w)) < 1e-9;
}

void validate_config(const GeneratorConfig& c) {
  if (c.n_raw < 1 || c.n_companies < 1)
    throw std::invalid_argument("generator config: need n_raw >= 1 and n_companies >= 1");
  if (c.indegree < 1 || c.n_raw < c.indegree)
    throw std::invalid_argument(
        "generator config: need 1 <= indegree <= n_raw so the first company has enough suppliers");
  if (!c.beta_range.valid() || !c.alpha_range.valid())
    throw std::invalid_argument("generator config: grid step must be positive and divide the range width");
  if (!(c.scale_min <= c.scale_max))
    throw std::invalid_argument("generator config: empty scale range");
  if (!(c.price_base > 0.0)) throw std::invalid_argument("generator config: price_base must be positive");
  if (c.max_attempts < 1) throw std::invalid_argument("generator config: max_attempts must be >= 1");
}

double price_schedule(double base, int k) {
  if (!(base > 0.0)) throw std::invalid_argument("price_schedule: base must be positive");
  if (k < 0) throw std::invalid_argument("price_schedule: index must be non-negative");
  return std::pow(base, k);
}

namespace {

// largest consistency-graph component among companies at raw distance
// >= depth; such a component always contains a depth-exact node.
int max_component_at_depth(const Economy& e, const std::vector<std::vector<int>>& adj,
                           const std::vector<std::optional<int>>& dist, int depth) {
  std::vector<char> eligible(e.n_goods, 0), seen(e.n_goods, 0);
  for (int m = e.n_raw; m < e.n_goods; ++m)
    if (dist[m] && *dist[m] >= depth) eligible[m] = 1;
  int best = 0;
  for (int s = e.n_raw; s < e.n_goods; ++s) {
    if (!eligible[s] || seen[s]) continue;
    int size = 0;
    std::deque<int> q{s};
    seen[s] = 1;
    while (!q.empty()) {
      int u = q.front();
      q.pop_front();
      ++size;
      for (int w : adj[u])
        if (eligible[w] && !seen[w]) {
          seen[w] = 1;
          q.push_back(w);
        }
    }
    best = std::max(best, size);
  }
  return best;
}

}  // namespace

Economy generate_economy(const GeneratorConfig& c, std::uint64_t seed) {
  validate_config(c);
  const int K = c.n_raw + c.n_companies;
  const int nb = c.beta_range.count();
  const int na = c.alpha_range.count();
  Rng rng(mix_seed(seed));

  std::vector<int> suppliers(c.indegree);
  for (int attempt = 0; attempt < c.max_attempts; ++attempt) {
    Economy e;
    e.n_raw = c.n_raw;
    e.n_goods = K;
    e.beta = Eigen::MatrixXd::Zero(K, K);
    e.alpha = Eigen::VectorXd::Ones(K);
    e.prices = Eigen::VectorXd::Zero(K);
    for (int k = 0; k < K; ++k) e.prices(k) = price_schedule(c.price_base, k + 1);

    bool ok = true;
    for (int m = c.n_raw; m < K && ok; ++m) {
      // distinct suppliers drawn uniformly from the predecessors
      for (int i = 0; i < c.indegree; ++i) {
        int s;
        bool dup;
        do {
          s = rng.below_int(m);
          dup = false;
          for (int j = 0; j < i; ++j)
            if (suppliers[j] == s) dup = true;
        } while (dup);
        suppliers[i] = s;
      }
      // grid betas, resampled until the company's scale lands in range
      int tries = 0;
      for (;;) {
        double sum = 0.0;
        for (int i = 0; i < c.indegree; ++i) {
          const double b = c.beta_range.value(rng.below_int(nb));
          e.beta(suppliers[i], m) = b;
          sum += b;
        }
        if (sum >= c.scale_min - 1e-12 && sum <= c.scale_max + 1e-12) break;
        if (++tries > 1000) {
          ok = false;
          break;
        }
      }
      e.alpha(m) = c.alpha_range.value(rng.below_int(na));
    }
    if (!ok) continue;

    if (graph_depth(e) < c.min_graph_depth) continue;
    if (c.oligarch_feasibility.enabled) {
      const auto dist = raw_distances(e);
      const auto adj = consistency_adjacency(e);
      if (max_component_at_depth(e, adj, dist, c.oligarch_feasibility.depth) <
          c.oligarch_feasibility.size)
        continue;
    }
    return e;
  }
  throw RejectionExhausted("generate_economy: no admissible economy after " +
                           std::to_string(c.max_attempts) + " attempts (seed " +
                           std::to_string(seed) + ")");
}

OligarchSpec generate_oligarch(const Economy& e, int size, int depth, std::uint64_t seed,
                               int max_attempts) {
  if (size < 1 || size > e.companies())
    throw std::invalid_argument("generate_oligarch: size must be in [1, companies]");
  if (depth < 1) throw std::invalid_argument("generate_oligarch: depth must be >= 1");

  const auto dist = raw_distances(e);
  std::vector<int> seeds_exact;
  std::vector<char> eligible(e.n_goods, 0);
  for (int m = e.n_raw; m < e.n_goods; ++m) {
    if (!dist[m]) continue;
    if (*dist[m] == depth) seeds_exact.push_back(m);
    if (*dist[m] >= depth) eligible[m] = 1;
  }
  if (seeds_exact.empty())
    throw NoFeasibleOligarch("generate_oligarch: no company at raw distance exactly " +
                             std::to_string(depth));
  const auto adj = consistency_adjacency(e);

  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    Rng rng(derive_seed(mix_seed(seed), static_cast<std::uint64_t>(attempt)));
    const int start = seeds_exact[rng.below_int(static_cast<int>(seeds_exact.size()))];

    // grow maximally regardless of the requested size so that the
    // sequence is identical across calls with different sizes
    std::vector<int> sequence{start};
    std::vector<char> inset(e.n_goods, 0);
    inset[start] = 1;
    std::vector<int> frontier;
    auto extend_frontier = [&](int u) {
      for (int w : adj[u])
        if (eligible[w] && !inset[w] &&
            std::find(frontier.begin(), frontier.end(), w) == frontier.end())
          frontier.push_back(w);
    };
    extend_frontier(start);
    while (!frontier.empty()) {
      const int pick = rng.below_int(static_cast<int>(frontier.size()));
      const int u = frontier[pick];
      frontier.erase(frontier.begin() + pick);
      sequence.push_back(u);
      inset[u] = 1;
      extend_frontier(u);
    }
    if (static_cast<int>(sequence.size()) < size) continue;

    std::vector<int> members(sequence.begin(), sequence.begin() + size);
    OligarchSpec spec = make_oligarch(e, std::move(members));
    if (spec.depth != depth) continue;  // cannot happen: seed node is depth-exact
    return spec;
  }
  throw NoFeasibleOligarch("generate_oligarch: no oligarch of size " + std::to_string(size) +
                           " and depth " + std::to_string(depth) + " after " +
                           std::to_string(max_attempts) + " attempts");
}

}  // namespace oligecon
