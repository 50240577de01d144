#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <mutex>
#include <shared_mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "tlpss/decay.hpp"
#include "tlpss/edge_list.hpp"

namespace tlpss {

enum class DecayMode { kAsf, kExp };

/// How multi-edges on one pair combine into A^T(i, j).
enum class Aggregation { kSum, kLatest };

struct WeightingConfig {
  DecayMode mode = DecayMode::kAsf;
  DecayParams asf;
  ExpDecayParams exp;
  Aggregation aggregation = Aggregation::kSum;
};

void validate(const WeightingConfig& cfg);

/// Floor multiplier used for latent edges: q/(q+1) under ASF. Exponential
/// decay has infimum 0, so no latent weight survives in that mode.
double latent_floor(const WeightingConfig& cfg) noexcept;

/// Sparse symmetric decayed-weight matrix A^T in CSR form. Each row is sorted
/// by neighbor id and also carries the train multiplicity m(i, j).
class WeightedAdjacency {
 public:
  WeightedAdjacency() = default;

  /// Throws DomainError if any train edge lies after `reference_snapshot`.
  static WeightedAdjacency build(const TemporalEdgeList& train, double reference_snapshot,
                                 const WeightingConfig& weighting, const SnapshotConfig& snapshots);

  std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
  std::size_t pair_count() const noexcept { return ids_.size() / 2; }
  double reference_snapshot() const noexcept { return reference_; }

  std::span<const NodeId> neighbors(NodeId v) const noexcept {
    return {ids_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const double> weights(NodeId v) const noexcept {
    return {weights_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::span<const std::uint32_t> multiplicities(NodeId v) const noexcept {
    return {mult_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
  }
  std::size_t degree(NodeId v) const noexcept { return offsets_[v + 1] - offsets_[v]; }

  /// 0 when the pair is not linked.
  double weight(NodeId i, NodeId j) const noexcept;
  std::uint32_t multiplicity(NodeId i, NodeId j) const noexcept;
  bool adjacent(NodeId i, NodeId j) const noexcept;

 private:
  std::ptrdiff_t find(NodeId i, NodeId j) const noexcept;

  std::vector<std::size_t> offsets_;
  std::vector<NodeId> ids_;
  std::vector<double> weights_;
  std::vector<std::uint32_t> mult_;
  double reference_ = 0.0;
};

/// A^t for each requested t, each built from the train edges at or before t.
std::vector<WeightedAdjacency> build_adjacency_sequence(const TemporalEdgeList& train,
                                                        std::span<const double> snapshots,
                                                        const WeightingConfig& weighting,
                                                        const SnapshotConfig& cfg);

struct DegreeVector {
  std::vector<double> weighted;      // w^T(v)
  std::vector<std::uint32_t> count;  // d(v), distinct neighbors
};

DegreeVector degree_vector(const WeightedAdjacency& adj);

/// Γ(x) ∩ Γ(y), ascending.
std::vector<NodeId> common_neighbors(const WeightedAdjacency& adj, NodeId x, NodeId y);

struct HiddenNodeSet {
  NodeId endpoint = 0;
  std::vector<NodeId> nodes;  // ascending
};

/// H_x for the pair (x, y): neighbors of y that are not neighbors of x, are
/// not x itself, and share at least one neighbor with x.
HiddenNodeSet hidden_nodes(const WeightedAdjacency& adj, NodeId x, NodeId y);

/// (1 / min{d(i), d(j)}) * Σ_{z ∈ Γ(i)∩Γ(j)} (A(i,z) + A(z,j)) / (m(i,z) + m(z,j)).
/// Requires i != j and (i, j) not adjacent.
double scale_factor(const WeightedAdjacency& adj, NodeId i, NodeId j);

/// B^T(i, j) = floor * scale_factor(i, j).
double latent_weight(const WeightedAdjacency& adj, NodeId i, NodeId j, double floor);

struct LatentCell {
  NodePair pair;
  double weight = 0.0;
};

/// Memoizing view of the latent matrix B^T. Concurrent get() calls are safe;
/// two threads may both compute a missing cell, which is harmless.
class LatentProvider {
 public:
  LatentProvider(const WeightedAdjacency& adj, double floor);

  double floor() const noexcept { return floor_; }
  double get(NodeId i, NodeId j) const;

  /// Cells computed so far, sorted by pair.
  std::vector<LatentCell> queried() const;
  /// Every non-zero B^T cell, computed eagerly. Small graphs only.
  std::vector<LatentCell> materialize() const;

 private:
  static constexpr std::size_t kShards = 64;
  struct Shard {
    mutable std::shared_mutex mutex;
    std::unordered_map<std::uint64_t, double> cells;
  };

  const WeightedAdjacency* adj_;
  double floor_;
  mutable std::array<Shard, kShards> shards_;
};

/// `i j weight` per stored pair (i < j).
void write_adjacency_tsv(const WeightedAdjacency& adj, std::ostream& out);
void write_latent_tsv(std::span<const LatentCell> cells, std::ostream& out);

}  // namespace tlpss
