#include "tlpss/adjacency.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "tlpss/error.hpp"
#include "tlpss/kernels.hpp"

namespace tlpss {

void validate(const WeightingConfig& cfg) {
  if (cfg.mode == DecayMode::kAsf) {
    validate(cfg.asf);
  } else {
    validate(cfg.exp);
  }
}

double latent_floor(const WeightingConfig& cfg) noexcept {
  return cfg.mode == DecayMode::kAsf ? asf_floor(cfg.asf) : 0.0;
}

WeightedAdjacency WeightedAdjacency::build(const TemporalEdgeList& train, double reference_snapshot,
                                           const WeightingConfig& weighting,
                                           const SnapshotConfig& snapshots) {
  validate(weighting);
  validate(snapshots);
  const auto edges = train.edges();
  const std::size_t m = edges.size();

  std::vector<double> elapsed(m);
  for (std::size_t k = 0; k < m; ++k) {
    if (edges[k].u == edges[k].v) throw DomainError("self-loop in train edges");
    elapsed[k] = reference_snapshot - snapshot_index(static_cast<double>(edges[k].ts), snapshots);
    if (elapsed[k] < 0) throw DomainError("train edge lies after the reference time");
  }
  std::vector<double> decayed(m);
  if (weighting.mode == DecayMode::kAsf) {
    asf_batch(elapsed, decayed, weighting.asf);
  } else {
    for (std::size_t k = 0; k < m; ++k) {
      decayed[k] = exp_decay(0.0, elapsed[k], weighting.exp);
    }
  }

  // Group multi-edges by pair; stable so each group stays in time order.
  std::vector<std::pair<std::uint64_t, std::uint32_t>> order(m);
  for (std::size_t k = 0; k < m; ++k) {
    order[k] = {NodePair::canonical(edges[k].u, edges[k].v).key(), static_cast<std::uint32_t>(k)};
  }
  std::stable_sort(order.begin(), order.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });

  struct PairEntry {
    NodeId u, v;
    double w;
    std::uint32_t m;
  };
  std::vector<PairEntry> pairs;
  for (std::size_t k = 0; k < m;) {
    std::size_t end = k;
    double sum = 0.0;
    while (end < m && order[end].first == order[k].first) {
      sum += decayed[order[end].second];
      ++end;
    }
    const auto& first = edges[order[k].second];
    const auto p = NodePair::canonical(first.u, first.v);
    const double w =
        weighting.aggregation == Aggregation::kSum ? sum : decayed[order[end - 1].second];
    pairs.push_back({p.u, p.v, w, static_cast<std::uint32_t>(end - k)});
    k = end;
  }

  WeightedAdjacency adj;
  adj.reference_ = reference_snapshot;
  const std::size_t n = train.node_count();
  adj.offsets_.assign(n + 1, 0);
  for (const auto& p : pairs) {
    ++adj.offsets_[p.u + 1];
    ++adj.offsets_[p.v + 1];
  }
  std::partial_sum(adj.offsets_.begin(), adj.offsets_.end(), adj.offsets_.begin());
  adj.ids_.resize(pairs.size() * 2);
  adj.weights_.resize(pairs.size() * 2);
  adj.mult_.resize(pairs.size() * 2);
  std::vector<std::size_t> cursor(adj.offsets_.begin(), adj.offsets_.end() - 1);
  // Pairs are sorted by (u, v), which fills every row in ascending id order.
  auto put = [&](NodeId row, NodeId col, double w, std::uint32_t mult) {
    const std::size_t slot = cursor[row]++;
    adj.ids_[slot] = col;
    adj.weights_[slot] = w;
    adj.mult_[slot] = mult;
  };
  for (const auto& p : pairs) {
    put(p.u, p.v, p.w, p.m);
    put(p.v, p.u, p.w, p.m);
  }
  return adj;
}

std::ptrdiff_t WeightedAdjacency::find(NodeId i, NodeId j) const noexcept {
  if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= node_count()) return -1;
  const auto row = neighbors(i);
  const auto it = std::lower_bound(row.begin(), row.end(), j);
  if (it == row.end() || *it != j) return -1;
  return static_cast<std::ptrdiff_t>(offsets_[i]) + (it - row.begin());
}

double WeightedAdjacency::weight(NodeId i, NodeId j) const noexcept {
  const auto k = find(i, j);
  return k < 0 ? 0.0 : weights_[k];
}

std::uint32_t WeightedAdjacency::multiplicity(NodeId i, NodeId j) const noexcept {
  const auto k = find(i, j);
  return k < 0 ? 0 : mult_[k];
}

bool WeightedAdjacency::adjacent(NodeId i, NodeId j) const noexcept { return find(i, j) >= 0; }

std::vector<WeightedAdjacency> build_adjacency_sequence(const TemporalEdgeList& train,
                                                        std::span<const double> snapshots,
                                                        const WeightingConfig& weighting,
                                                        const SnapshotConfig& cfg) {
  std::vector<WeightedAdjacency> out;
  out.reserve(snapshots.size());
  for (double t : snapshots) {
    std::vector<TemporalEdge> upto;
    for (const auto& e : train.edges()) {
      if (snapshot_index(static_cast<double>(e.ts), cfg) <= t) upto.push_back(e);
    }
    out.push_back(WeightedAdjacency::build(train.with_edges(std::move(upto)), t, weighting, cfg));
  }
  return out;
}

DegreeVector degree_vector(const WeightedAdjacency& adj) {
  const std::size_t n = adj.node_count();
  DegreeVector d;
  d.weighted.resize(n);
  d.count.resize(n);
  for (std::size_t v = 0; v < n; ++v) {
    const auto w = adj.weights(static_cast<NodeId>(v));
    d.weighted[v] = std::accumulate(w.begin(), w.end(), 0.0);
    d.count[v] = static_cast<std::uint32_t>(w.size());
  }
  return d;
}

std::vector<NodeId> common_neighbors(const WeightedAdjacency& adj, NodeId x, NodeId y) {
  if (x == y) throw DomainError("common_neighbors requires distinct endpoints");
  const auto gx = adj.neighbors(x);
  const auto gy = adj.neighbors(y);
  std::vector<std::uint32_t> pos(std::min(gx.size(), gy.size()));
  const std::size_t k =
      kernels::active().intersect(gx.data(), gx.size(), gy.data(), gy.size(), pos.data(), nullptr);
  std::vector<NodeId> out(k);
  for (std::size_t i = 0; i < k; ++i) out[i] = gx[pos[i]];
  return out;
}

HiddenNodeSet hidden_nodes(const WeightedAdjacency& adj, NodeId x, NodeId y) {
  if (x == y) throw DomainError("hidden_nodes requires distinct endpoints");
  HiddenNodeSet out{x, {}};
  const auto gx = adj.neighbors(x);
  const auto gy = adj.neighbors(y);
  const auto& k = kernels::active();
  std::size_t i = 0;
  for (NodeId h : gy) {
    while (i < gx.size() && gx[i] < h) ++i;
    if ((i < gx.size() && gx[i] == h) || h == x) continue;
    const auto gh = adj.neighbors(h);
    if (k.intersect(gx.data(), gx.size(), gh.data(), gh.size(), nullptr, nullptr) > 0) {
      out.nodes.push_back(h);
    }
  }
  return out;
}

double scale_factor(const WeightedAdjacency& adj, NodeId i, NodeId j) {
  if (i == j) throw DomainError("latent weight requires distinct endpoints");
  if (adj.adjacent(i, j)) throw DomainError("latent weight is defined only for unlinked pairs");
  const auto gi = adj.neighbors(i);
  const auto gj = adj.neighbors(j);
  const std::size_t dmin = std::min(gi.size(), gj.size());
  if (dmin == 0) return 0.0;
  thread_local std::vector<std::uint32_t> pa, pb;
  pa.resize(dmin);
  pb.resize(dmin);
  const std::size_t k =
      kernels::active().intersect(gi.data(), gi.size(), gj.data(), gj.size(), pa.data(), pb.data());
  const auto wi = adj.weights(i), wj = adj.weights(j);
  const auto mi = adj.multiplicities(i), mj = adj.multiplicities(j);
  double sum = 0.0;
  for (std::size_t t = 0; t < k; ++t) {
    sum += (wi[pa[t]] + wj[pb[t]]) / static_cast<double>(mi[pa[t]] + mj[pb[t]]);
  }
  return sum / static_cast<double>(dmin);
}

double latent_weight(const WeightedAdjacency& adj, NodeId i, NodeId j, double floor) {
  const double s = scale_factor(adj, i, j);
  return floor * s;
}

LatentProvider::LatentProvider(const WeightedAdjacency& adj, double floor)
    : adj_(&adj), floor_(floor) {}

double LatentProvider::get(NodeId i, NodeId j) const {
  const auto key = NodePair::canonical(i, j).key();
  auto& shard = shards_[std::hash<std::uint64_t>{}(key) % kShards];
  {
    std::shared_lock lock(shard.mutex);
    const auto it = shard.cells.find(key);
    if (it != shard.cells.end()) return it->second;
  }
  const double value = latent_weight(*adj_, i, j, floor_);
  std::unique_lock lock(shard.mutex);
  shard.cells.emplace(key, value);
  return value;
}

std::vector<LatentCell> LatentProvider::queried() const {
  std::vector<LatentCell> out;
  for (const auto& shard : shards_) {
    std::shared_lock lock(shard.mutex);
    for (const auto& [key, w] : shard.cells) {
      out.push_back({NodePair{static_cast<NodeId>(key >> 32), static_cast<NodeId>(key & 0xffffffffu)},
                     w});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const LatentCell& a, const LatentCell& b) { return a.pair < b.pair; });
  return out;
}

std::vector<LatentCell> LatentProvider::materialize() const {
  std::vector<LatentCell> out;
  const auto n = static_cast<NodeId>(adj_->node_count());
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = i + 1; j < n; ++j) {
      if (adj_->adjacent(i, j)) continue;
      const double w = get(i, j);
      if (w != 0.0) out.push_back({{i, j}, w});
    }
  }
  return out;
}

void write_adjacency_tsv(const WeightedAdjacency& adj, std::ostream& out) {
  const auto n = static_cast<NodeId>(adj.node_count());
  out.precision(17);
  for (NodeId i = 0; i < n; ++i) {
    const auto ids = adj.neighbors(i);
    const auto w = adj.weights(i);
    for (std::size_t k = 0; k < ids.size(); ++k) {
      if (ids[k] > i) out << i << '\t' << ids[k] << '\t' << w[k] << '\n';
    }
  }
}

void write_latent_tsv(std::span<const LatentCell> cells, std::ostream& out) {
  out.precision(17);
  for (const auto& c : cells) out << c.pair.u << '\t' << c.pair.v << '\t' << c.weight << '\n';
}

}  // namespace tlpss
