#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace tlpss {

using NodeId = std::int32_t;
using Timestamp = std::int64_t;

struct TemporalEdge {
  NodeId u = 0;
  NodeId v = 0;
  Timestamp ts = 0;

  friend bool operator==(const TemporalEdge&, const TemporalEdge&) = default;
};

/// Unordered node pair, always stored with u < v.
struct NodePair {
  NodeId u = 0;
  NodeId v = 0;

  static NodePair canonical(NodeId a, NodeId b) noexcept {
    return a < b ? NodePair{a, b} : NodePair{b, a};
  }
  std::uint64_t key() const noexcept {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(v);
  }

  friend bool operator==(const NodePair&, const NodePair&) = default;
  friend auto operator<=>(const NodePair&, const NodePair&) = default;
};

struct NodePairHash {
  std::size_t operator()(const NodePair& p) const noexcept {
    return std::hash<std::uint64_t>{}(p.key());
  }
};

/// Timestamped undirected multi-edge history over a fixed node set.
///
/// Edges are kept sorted by timestamp (stable on construction order for
/// ties). Node ids are dense in [0, node_count); `labels()[id]` is the raw
/// identifier the node had in the source file.
class TemporalEdgeList {
 public:
  TemporalEdgeList() = default;
  TemporalEdgeList(std::vector<TemporalEdge> edges, std::vector<std::int64_t> labels,
                   Timestamp time_shift = 0);

  std::span<const TemporalEdge> edges() const noexcept { return edges_; }
  std::size_t size() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return edges_.empty(); }
  std::size_t node_count() const noexcept { return labels_.size(); }
  std::span<const std::int64_t> labels() const noexcept { return labels_; }

  /// Bounds of the stored timestamps (0 when empty).
  Timestamp t_min() const noexcept { return t_min_; }
  Timestamp t_max() const noexcept { return t_max_; }
  /// raw source timestamp = stored ts + time_shift.
  Timestamp time_shift() const noexcept { return time_shift_; }

  /// Same node set and labels, different edges.
  TemporalEdgeList with_edges(std::vector<TemporalEdge> edges) const {
    return TemporalEdgeList(std::move(edges), labels_, time_shift_);
  }

 private:
  std::vector<TemporalEdge> edges_;
  std::vector<std::int64_t> labels_;
  Timestamp t_min_ = 0;
  Timestamp t_max_ = 0;
  Timestamp time_shift_ = 0;
};

struct DropReport {
  std::size_t lines_read = 0;
  std::size_t comment_lines = 0;
  std::size_t edges_kept = 0;
  std::size_t missing_ts_dropped = 0;
  std::size_t self_loops_dropped = 0;
};

struct ParsedEdgeList {
  TemporalEdgeList edges;
  DropReport report;
};

/// Reads a KONECT-style edge list: whitespace-separated `src dst [weight] ts`,
/// '%' comment lines. Lines with only `src dst` are dropped and counted.
/// Dense ids are assigned in ascending order of the raw integer labels.
ParsedEdgeList parse_edge_list(std::istream& in);
ParsedEdgeList parse_edge_list_file(const std::filesystem::path& path);

/// Writes `label_u label_v ts` lines in stored order, after a comment header.
void serialize_edge_list(const TemporalEdgeList& list, std::ostream& out);

/// Drops self-loops, orients every edge u < v, shifts time so the earliest
/// edge has ts == 1 and re-sorts by time. Idempotent. When `report` is given
/// its self-loop counter and edges_kept are updated.
TemporalEdgeList normalize(const TemporalEdgeList& list, DropReport* report = nullptr);

struct SnapshotConfig {
  double period = 1.0;
  double origin = 1.0;
};

void validate(const SnapshotConfig& cfg);

/// (ts - origin) / period. Throws DomainError for ts < origin.
double snapshot_index(double ts, const SnapshotConfig& cfg);

struct TrainTestSplit {
  TemporalEdgeList train;
  TemporalEdgeList test;
  Timestamp t_split = 0;
  /// Sorted canonical pairs linked in test and not linked in train.
  std::vector<NodePair> positives;
};

/// Time-ordered split. t_split is the smallest timestamp whose cumulative
/// edge fraction reaches `ratio`; edges tied at t_split all go to train.
TrainTestSplit split_by_time(const TemporalEdgeList& list, double ratio);

/// Per-pair multi-edge counts m(i, j).
class MultiplicityIndex {
 public:
  explicit MultiplicityIndex(const TemporalEdgeList& list);
  std::uint32_t operator()(NodeId i, NodeId j) const;
  std::size_t distinct_pairs() const noexcept { return counts_.size(); }
  std::size_t total() const noexcept { return total_; }

 private:
  std::unordered_map<std::uint64_t, std::uint32_t> counts_;
  std::size_t total_ = 0;
};

/// Linear scan; prefer MultiplicityIndex for repeated queries.
std::uint32_t multiplicity(const TemporalEdgeList& list, NodeId i, NodeId j);

/// Sorted distinct canonical pairs present in the list.
std::vector<NodePair> linked_pairs(const TemporalEdgeList& list);

/// Keeps edges whose endpoints both lie within `hops` of a seed node in the
/// static projection of the list. Node ids are preserved.
TemporalEdgeList khop_filter(const TemporalEdgeList& list, std::span<const NodeId> seeds,
                             int hops);

}  // namespace tlpss
