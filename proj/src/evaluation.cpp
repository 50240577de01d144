#include "tlpss/evaluation.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_set>

#include "tlpss/error.hpp"

namespace tlpss {

std::size_t default_max_negatives(std::size_t universe, std::size_t positives) noexcept {
  return std::min({universe, positives * 10, std::size_t{1'000'000}});
}

namespace {

std::unordered_set<std::uint64_t> linked_keys(const TrainTestSplit& split) {
  std::unordered_set<std::uint64_t> keys;
  keys.reserve(split.train.size() + split.test.size());
  for (const auto* list : {&split.train, &split.test}) {
    for (const auto& e : list->edges()) {
      if (e.u != e.v) keys.insert(NodePair::canonical(e.u, e.v).key());
    }
  }
  return keys;
}

}  // namespace

std::size_t negative_universe_size(const TrainTestSplit& split, std::size_t node_count) {
  const std::size_t all = node_count < 2 ? 0 : node_count * (node_count - 1) / 2;
  return all - linked_keys(split).size();
}

CandidateSet build_candidates(const TrainTestSplit& split, std::size_t node_count,
                              std::uint64_t seed, std::size_t max_negatives) {
  if (split.positives.empty()) {
    throw EvaluationImpossible("test period contains no links that are new relative to train");
  }
  const auto excluded = linked_keys(split);
  const std::size_t all = node_count < 2 ? 0 : node_count * (node_count - 1) / 2;
  CandidateSet out;
  out.positives = split.positives;
  out.seed = seed;
  out.negative_universe = all - excluded.size();
  if (out.negative_universe == 0) {
    throw EvaluationImpossible("every node pair is linked; no negative candidates exist");
  }
  if (max_negatives == 0) {
    max_negatives = default_max_negatives(out.negative_universe, out.positives.size());
  }
  max_negatives = std::max<std::size_t>(1, max_negatives);

  const auto n = static_cast<NodeId>(node_count);
  std::mt19937_64 rng(seed);
  if (out.negative_universe <= max_negatives) {
    out.exhaustive = true;
    out.negatives.reserve(out.negative_universe);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (!excluded.contains(NodePair{u, v}.key())) out.negatives.push_back({u, v});
      }
    }
    return out;
  }

  if (out.negative_universe <= 4 * max_negatives) {
    // Dense universe: enumerate, then a partial Fisher-Yates draw.
    std::vector<NodePair> universe;
    universe.reserve(out.negative_universe);
    for (NodeId u = 0; u < n; ++u) {
      for (NodeId v = u + 1; v < n; ++v) {
        if (!excluded.contains(NodePair{u, v}.key())) universe.push_back({u, v});
      }
    }
    for (std::size_t k = 0; k < max_negatives; ++k) {
      std::uniform_int_distribution<std::size_t> pick(k, universe.size() - 1);
      std::swap(universe[k], universe[pick(rng)]);
    }
    universe.resize(max_negatives);
    out.negatives = std::move(universe);
  } else {
    // Sparse draw: rejection sampling of uniform unordered pairs.
    std::uniform_int_distribution<NodeId> node(0, n - 1);
    std::unordered_set<std::uint64_t> chosen;
    chosen.reserve(max_negatives * 2);
    while (out.negatives.size() < max_negatives) {
      const NodeId a = node(rng);
      const NodeId b = node(rng);
      if (a == b) continue;
      const auto p = NodePair::canonical(a, b);
      if (excluded.contains(p.key()) || !chosen.insert(p.key()).second) continue;
      out.negatives.push_back(p);
    }
  }
  std::sort(out.negatives.begin(), out.negatives.end());
  return out;
}

namespace {

void require_nonempty(std::span<const double> pos, std::span<const double> neg) {
  if (pos.empty() || neg.empty()) {
    throw EvaluationImpossible("AUC needs at least one positive and one negative score");
  }
}

}  // namespace

AucCounts auc_exhaustive(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty(pos, neg);
  AucCounts c;
  for (double p : pos) {
    for (double q : neg) {
      if (p > q) {
        ++c.greater;
      } else if (p == q) {
        ++c.ties;
      }
    }
  }
  c.total = static_cast<std::uint64_t>(pos.size()) * neg.size();
  return c;
}

AucCounts auc_rank(std::span<const double> pos, std::span<const double> neg) {
  require_nonempty(pos, neg);
  std::vector<double> sorted(neg.begin(), neg.end());
  std::sort(sorted.begin(), sorted.end());
  AucCounts c;
  for (double p : pos) {
    const auto [lo, hi] = std::equal_range(sorted.begin(), sorted.end(), p);
    c.greater += static_cast<std::uint64_t>(lo - sorted.begin());
    c.ties += static_cast<std::uint64_t>(hi - lo);
  }
  c.total = static_cast<std::uint64_t>(pos.size()) * neg.size();
  return c;
}

AucCounts auc_sampled(std::span<const double> pos, std::span<const double> neg,
                      std::uint64_t comparisons, std::uint64_t seed) {
  require_nonempty(pos, neg);
  if (comparisons == 0) throw ConfigError("AUC comparison count must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_pos(0, pos.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_neg(0, neg.size() - 1);
  AucCounts c;
  for (std::uint64_t k = 0; k < comparisons; ++k) {
    const double p = pos[pick_pos(rng)];
    const double q = neg[pick_neg(rng)];
    if (p > q) {
      ++c.greater;
    } else if (p == q) {
      ++c.ties;
    }
  }
  c.total = comparisons;
  return c;
}

AucResult auc(std::span<const double> pos, std::span<const double> neg,
              const AucOptions& options) {
  require_nonempty(pos, neg);
  const auto total = static_cast<std::uint64_t>(pos.size()) * neg.size();
  if (total <= options.exhaustive_limit) {
    return {auc_exhaustive(pos, neg).value(), total, true};
  }
  return {auc_sampled(pos, neg, options.samples, options.seed).value(), options.samples, false};
}

double precision_at_l(std::span<const ScoredPair> rows, std::span<const NodePair> positives,
                      std::size_t l) {
  if (l == 0) throw ConfigError("precision cut L must be at least 1");
  if (rows.size() < l) throw EvaluationImpossible("fewer candidates than the precision cut L");
  std::vector<std::size_t> order(rows.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(l), order.end(),
                    [&](std::size_t a, std::size_t b) {
                      if (rows[a].score != rows[b].score) return rows[a].score > rows[b].score;
                      return rows[a].pair < rows[b].pair;
                    });
  std::vector<NodePair> truth(positives.begin(), positives.end());
  std::sort(truth.begin(), truth.end());
  std::size_t hits = 0;
  for (std::size_t k = 0; k < l; ++k) {
    if (std::binary_search(truth.begin(), truth.end(), rows[order[k]].pair)) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(l);
}

}  // namespace tlpss
