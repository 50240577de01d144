#include "tlpss/edge_list.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <queue>
#include <string_view>
#include <unordered_set>

#include "tlpss/error.hpp"

namespace tlpss {

TemporalEdgeList::TemporalEdgeList(std::vector<TemporalEdge> edges,
                                   std::vector<std::int64_t> labels, Timestamp time_shift)
    : edges_(std::move(edges)), labels_(std::move(labels)), time_shift_(time_shift) {
  const auto n = static_cast<NodeId>(labels_.size());
  for (const auto& e : edges_) {
    if (e.u < 0 || e.v < 0 || e.u >= n || e.v >= n) {
      throw DataError("edge endpoint outside node range");
    }
  }
  std::stable_sort(edges_.begin(), edges_.end(),
                   [](const TemporalEdge& a, const TemporalEdge& b) { return a.ts < b.ts; });
  if (!edges_.empty()) {
    t_min_ = edges_.front().ts;
    t_max_ = edges_.back().ts;
  }
}

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

bool parse_int(std::string_view s, std::int64_t& out) {
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

// KONECT timestamps are integers, but some exports write them as 1.2e9.
bool parse_timestamp(std::string_view s, std::int64_t& out) {
  if (parse_int(s, out)) return true;
  double d = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, d);
  if (ec != std::errc() || ptr != end || !std::isfinite(d) || d != std::floor(d)) return false;
  out = static_cast<std::int64_t>(d);
  return true;
}

bool is_number(std::string_view s) {
  double d = 0;
  const auto* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, d);
  return ec == std::errc() && ptr == end;
}

struct RawRecord {
  std::int64_t src;
  std::int64_t dst;
  std::int64_t ts;
};

}  // namespace

ParsedEdgeList parse_edge_list(std::istream& in) {
  DropReport report;
  std::vector<RawRecord> records;
  std::string line;
  while (std::getline(in, line)) {
    ++report.lines_read;
    std::string_view view(line);
    if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
    const auto first = view.find_first_not_of(" \t");
    if (first == std::string_view::npos) continue;
    if (view[first] == '%') {
      ++report.comment_lines;
      continue;
    }
    const auto fields = split_fields(view);
    RawRecord rec{};
    if (fields.size() < 2 || fields.size() > 4 || !parse_int(fields[0], rec.src) ||
        !parse_int(fields[1], rec.dst)) {
      throw ParseError("malformed edge record '" + std::string(view) + "'", report.lines_read);
    }
    if (fields.size() == 2) {
      ++report.missing_ts_dropped;
      continue;
    }
    if (fields.size() == 4 && !is_number(fields[2])) {
      throw ParseError("malformed weight '" + std::string(fields[2]) + "'", report.lines_read);
    }
    if (!parse_timestamp(fields.back(), rec.ts)) {
      throw ParseError("malformed timestamp '" + std::string(fields.back()) + "'",
                       report.lines_read);
    }
    records.push_back(rec);
  }
  if (records.empty()) throw EmptyDatasetError("no timestamped edges in input");

  std::vector<std::int64_t> labels;
  labels.reserve(records.size() * 2);
  for (const auto& r : records) {
    labels.push_back(r.src);
    labels.push_back(r.dst);
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  std::unordered_map<std::int64_t, NodeId> dense;
  dense.reserve(labels.size());
  for (std::size_t i = 0; i < labels.size(); ++i) dense.emplace(labels[i], static_cast<NodeId>(i));

  std::vector<TemporalEdge> edges;
  edges.reserve(records.size());
  for (const auto& r : records) edges.push_back({dense.at(r.src), dense.at(r.dst), r.ts});
  report.edges_kept = edges.size();
  return {TemporalEdgeList(std::move(edges), std::move(labels)), report};
}

ParsedEdgeList parse_edge_list_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open " + path.string());
  try {
    return parse_edge_list(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what(), e.line());
  } catch (const EmptyDatasetError& e) {
    throw EmptyDatasetError(path.string() + ": " + e.what());
  }
}

void serialize_edge_list(const TemporalEdgeList& list, std::ostream& out) {
  out << "% sym unweighted\n";
  const auto labels = list.labels();
  for (const auto& e : list.edges()) {
    out << labels[e.u] << ' ' << labels[e.v] << ' ' << e.ts << '\n';
  }
}

TemporalEdgeList normalize(const TemporalEdgeList& list, DropReport* report) {
  std::vector<TemporalEdge> edges;
  edges.reserve(list.size());
  std::size_t loops = 0;
  for (const auto& e : list.edges()) {
    if (e.u == e.v) {
      ++loops;
      continue;
    }
    const auto p = NodePair::canonical(e.u, e.v);
    edges.push_back({p.u, p.v, e.ts});
  }
  Timestamp shift = 0;
  if (!edges.empty()) {
    const auto lo = std::min_element(edges.begin(), edges.end(), [](const auto& a, const auto& b) {
                      return a.ts < b.ts;
                    })->ts;
    shift = lo - 1;
    for (auto& e : edges) e.ts -= shift;
  }
  if (report) {
    report->self_loops_dropped += loops;
    report->edges_kept = edges.size();
  }
  const auto labels = list.labels();
  return TemporalEdgeList(std::move(edges), {labels.begin(), labels.end()},
                          list.time_shift() + shift);
}

void validate(const SnapshotConfig& cfg) {
  if (!(cfg.period > 0) || !std::isfinite(cfg.period)) {
    throw ConfigError("snapshot period must be a positive finite number");
  }
  if (!std::isfinite(cfg.origin)) throw ConfigError("snapshot origin must be finite");
}

double snapshot_index(double ts, const SnapshotConfig& cfg) {
  if (ts < cfg.origin) throw DomainError("timestamp precedes snapshot origin");
  return (ts - cfg.origin) / cfg.period;
}

TrainTestSplit split_by_time(const TemporalEdgeList& list, double ratio) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("split ratio must lie in (0, 1)");
  if (list.empty()) throw EvaluationImpossible("cannot split an empty edge list");
  const auto edges = list.edges();
  const std::size_t n = edges.size();
  std::size_t cut = n;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && edges[j].ts == edges[i].ts) ++j;
    if (static_cast<double>(j) / static_cast<double>(n) >= ratio) {
      cut = j;
      break;
    }
    i = j;
  }
  if (cut >= n) {
    throw EvaluationImpossible("timestamp ties leave no edges after the split point");
  }

  TrainTestSplit split;
  split.train = list.with_edges({edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(cut)});
  split.test = list.with_edges({edges.begin() + static_cast<std::ptrdiff_t>(cut), edges.end()});
  split.t_split = edges[cut - 1].ts;

  std::unordered_set<std::uint64_t> train_pairs;
  for (const auto& e : split.train.edges()) train_pairs.insert(NodePair::canonical(e.u, e.v).key());
  for (const auto& p : linked_pairs(split.test)) {
    if (!train_pairs.contains(p.key())) split.positives.push_back(p);
  }
  return split;
}

MultiplicityIndex::MultiplicityIndex(const TemporalEdgeList& list) {
  for (const auto& e : list.edges()) {
    ++counts_[NodePair::canonical(e.u, e.v).key()];
    ++total_;
  }
}

std::uint32_t MultiplicityIndex::operator()(NodeId i, NodeId j) const {
  const auto it = counts_.find(NodePair::canonical(i, j).key());
  return it == counts_.end() ? 0 : it->second;
}

std::uint32_t multiplicity(const TemporalEdgeList& list, NodeId i, NodeId j) {
  const auto target = NodePair::canonical(i, j);
  std::uint32_t m = 0;
  for (const auto& e : list.edges()) {
    if (NodePair::canonical(e.u, e.v) == target) ++m;
  }
  return m;
}

std::vector<NodePair> linked_pairs(const TemporalEdgeList& list) {
  std::vector<NodePair> pairs;
  pairs.reserve(list.size());
  for (const auto& e : list.edges()) {
    if (e.u != e.v) pairs.push_back(NodePair::canonical(e.u, e.v));
  }
  std::sort(pairs.begin(), pairs.end());
  pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  return pairs;
}

TemporalEdgeList khop_filter(const TemporalEdgeList& list, std::span<const NodeId> seeds,
                             int hops) {
  if (hops < 0) throw ConfigError("hop count must be non-negative");
  const std::size_t n = list.node_count();
  std::vector<std::vector<NodeId>> adj(n);
  for (const auto& p : linked_pairs(list)) {
    adj[p.u].push_back(p.v);
    adj[p.v].push_back(p.u);
  }
  std::vector<int> dist(n, -1);
  std::queue<NodeId> frontier;
  for (NodeId s : seeds) {
    if (s < 0 || static_cast<std::size_t>(s) >= n) throw DomainError("seed node out of range");
    if (dist[s] < 0) {
      dist[s] = 0;
      frontier.push(s);
    }
  }
  while (!frontier.empty()) {
    const NodeId x = frontier.front();
    frontier.pop();
    if (dist[x] == hops) continue;
    for (NodeId y : adj[x]) {
      if (dist[y] < 0) {
        dist[y] = dist[x] + 1;
        frontier.push(y);
      }
    }
  }
  std::vector<TemporalEdge> kept;
  for (const auto& e : list.edges()) {
    if (dist[e.u] >= 0 && dist[e.v] >= 0) kept.push_back(e);
  }
  return list.with_edges(std::move(kept));
}

}  // namespace tlpss
