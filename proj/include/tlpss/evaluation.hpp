#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "tlpss/edge_list.hpp"
#include "tlpss/predictors.hpp"

namespace tlpss {

struct CandidateSet {
  std::vector<NodePair> positives;
  /// Size of the universe of pairs unlinked in both train and test.
  std::size_t negative_universe = 0;
  /// Sorted; the whole universe when `exhaustive`.
  std::vector<NodePair> negatives;
  std::uint64_t seed = 0;
  bool exhaustive = false;
};

/// min(universe, 10 * positives, 1e6)
std::size_t default_max_negatives(std::size_t universe, std::size_t positives) noexcept;

/// Pairs linked in neither train nor test, counted without enumeration.
std::size_t negative_universe_size(const TrainTestSplit& split, std::size_t node_count);

/// Negatives are drawn uniformly without replacement from the unlinked
/// universe, or enumerated when the universe fits in `max_negatives`
/// (0 selects default_max_negatives).
CandidateSet build_candidates(const TrainTestSplit& split, std::size_t node_count,
                              std::uint64_t seed, std::size_t max_negatives = 0);

struct AucCounts {
  std::uint64_t greater = 0;
  std::uint64_t ties = 0;
  std::uint64_t total = 0;
  double value() const noexcept {
    return (2.0 * static_cast<double>(greater) + static_cast<double>(ties)) /
           (2.0 * static_cast<double>(total));
  }
};

/// Every positive against every negative.
AucCounts auc_exhaustive(std::span<const double> pos, std::span<const double> neg);
/// Same counts from sorting: concordant pairs via ranks, ties via equal runs.
AucCounts auc_rank(std::span<const double> pos, std::span<const double> neg);
/// `comparisons` random (positive, negative) draws with replacement.
AucCounts auc_sampled(std::span<const double> pos, std::span<const double> neg,
                      std::uint64_t comparisons, std::uint64_t seed);

struct AucOptions {
  std::uint64_t exhaustive_limit = 10'000'000;
  std::uint64_t samples = 672'400;
  std::uint64_t seed = 0;
};

struct AucResult {
  double value = 0.0;
  std::uint64_t comparisons = 0;
  bool exhaustive = false;
};

/// Exhaustive when |pos| * |neg| <= exhaustive_limit, otherwise sampled.
AucResult auc(std::span<const double> pos, std::span<const double> neg,
              const AucOptions& options = {});

/// Fraction of positives among the L best-scored rows. Ties are broken by
/// ascending canonical pair. Throws EvaluationImpossible if fewer than L rows.
double precision_at_l(std::span<const ScoredPair> rows, std::span<const NodePair> positives,
                      std::size_t l);

}  // namespace tlpss
