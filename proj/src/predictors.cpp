#include "tlpss/predictors.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>
#include <thread>

#include <nlohmann/json.hpp>

#include "tlpss/error.hpp"
#include "tlpss/kernels.hpp"

namespace tlpss {

std::string_view method_name(MethodId m) noexcept {
  switch (m) {
    case MethodId::kTlpss:
      return "TLPSS";
    case MethodId::kCnAsf:
      return "CN_ASF";
    case MethodId::kJaAsf:
      return "JA_ASF";
    case MethodId::kPaAsf:
      return "PA_ASF";
    case MethodId::kRaAsf:
      return "RA_ASF";
    case MethodId::kCarAsf:
      return "CAR_ASF";
    case MethodId::kCclpAsf:
      return "CCLP_ASF";
  }
  return "?";
}

MethodId parse_method(std::string_view name) {
  std::string upper(name);
  for (auto& c : upper) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (MethodId m : kAllMethods) {
    const auto full = method_name(m);
    if (upper == full) return m;
    if (const auto cut = full.find("_ASF"); cut != std::string_view::npos &&
                                            upper == full.substr(0, cut)) {
      return m;
    }
  }
  throw ConfigError("unknown method '" + std::string(name) + "'");
}

namespace {

struct Scratch {
  std::vector<std::uint32_t> pa, pb, ids;
};

Scratch& scratch() {
  thread_local Scratch s;
  return s;
}

// Positions of Γ(x) ∩ Γ(y) in both rows; returns the match count.
std::size_t intersect_rows(const WeightedAdjacency& adj, NodeId x, NodeId y, Scratch& s) {
  const auto gx = adj.neighbors(x);
  const auto gy = adj.neighbors(y);
  const std::size_t cap = std::min(gx.size(), gy.size());
  s.pa.resize(cap);
  s.pb.resize(cap);
  return kernels::active().intersect(gx.data(), gx.size(), gy.data(), gy.size(), s.pa.data(),
                                     s.pb.data());
}

void require_distinct(NodeId x, NodeId y) {
  if (x == y) throw DomainError("similarity scores require distinct endpoints");
}

// Σ of A(z1, z2) over unordered linked pairs inside the ascending set `set`.
double links_within(const WeightedAdjacency& adj, std::span<const NodeId> set) {
  const auto& k = kernels::active();
  thread_local std::vector<std::uint32_t> pos;
  double total = 0.0;
  for (NodeId z1 : set) {
    const auto row = adj.neighbors(z1);
    const auto w = adj.weights(z1);
    // only partners above z1, so each link is counted once
    const auto start = static_cast<std::size_t>(
        std::upper_bound(row.begin(), row.end(), z1) - row.begin());
    pos.resize(std::min(row.size() - start, set.size()));
    const std::size_t m = k.intersect(row.data() + start, row.size() - start, set.data(),
                                      set.size(), pos.data(), nullptr);
    for (std::size_t t = 0; t < m; ++t) total += w[start + pos[t]];
  }
  return total;
}

}  // namespace

ScoringContext::ScoringContext(const WeightedAdjacency& adj, const LatentProvider* latent,
                               CclpMode cclp)
    : adj_(&adj), latent_(latent), cclp_(cclp), degrees_(degree_vector(adj)) {
  inv_w_.resize(degrees_.weighted.size());
  for (std::size_t v = 0; v < inv_w_.size(); ++v) {
    inv_w_[v] = degrees_.weighted[v] > 0 ? 1.0 / degrees_.weighted[v] : 0.0;
  }
}

std::span<const double> ScoringContext::local_triangle_weight() const {
  std::call_once(triangles_once_, [this] {
    const auto n = static_cast<NodeId>(adj_->node_count());
    triangles_.assign(static_cast<std::size_t>(n), 0.0);
    for (NodeId z = 0; z < n; ++z) triangles_[z] = links_within(*adj_, adj_->neighbors(z));
  });
  return triangles_;
}

double score_directed(const ScoringContext& ctx, NodeId x, NodeId y) {
  require_distinct(x, y);
  const auto& adj = ctx.adjacency();
  const auto& wdeg = ctx.degrees().weighted;
  auto& s = scratch();
  const std::size_t k = intersect_rows(adj, x, y, s);
  const auto gx = adj.neighbors(x);
  const auto wx = adj.weights(x);
  double common = 0.0;
  for (std::size_t t = 0; t < k; ++t) common += wx[s.pa[t]] / wdeg[gx[s.pa[t]]];

  const LatentProvider* latent = ctx.latent();
  if (latent == nullptr) throw ConfigError("TLPSS scoring needs a latent-weight provider");
  double hidden = 0.0;
  if (latent->floor() != 0.0) {
    // h ∈ Γ(y) \ Γ(x), h != x; B(x,h) > 0 exactly when Γ(x) ∩ Γ(h) is non-empty.
    std::size_t i = 0;
    for (NodeId h : adj.neighbors(y)) {
      while (i < gx.size() && gx[i] < h) ++i;
      if ((i < gx.size() && gx[i] == h) || h == x) continue;
      const double b = latent->get(x, h);
      if (b > 0.0) hidden += b / wdeg[h];
    }
  }
  return common + hidden;
}

double score_tlpss(const ScoringContext& ctx, NodeId x, NodeId y) {
  return 0.5 * (score_directed(ctx, x, y) + score_directed(ctx, y, x));
}

double score_cn(const ScoringContext& ctx, NodeId x, NodeId y) {
  require_distinct(x, y);
  const auto& adj = ctx.adjacency();
  auto& s = scratch();
  const std::size_t k = intersect_rows(adj, x, y, s);
  const auto& g = kernels::active();
  const double sx = g.gather_sum(adj.weights(x).data(), s.pa.data(), k);
  const double sy = g.gather_sum(adj.weights(y).data(), s.pb.data(), k);
  return 0.5 * (sx + sy);
}

double score_ja(const ScoringContext& ctx, NodeId x, NodeId y) {
  const double denom = ctx.degrees().weighted[x] + ctx.degrees().weighted[y];
  const double cn = score_cn(ctx, x, y);
  return denom > 0 ? cn / denom : 0.0;
}

double score_pa(const ScoringContext& ctx, NodeId x, NodeId y) {
  require_distinct(x, y);
  return ctx.degrees().weighted[x] * ctx.degrees().weighted[y];
}

double score_ra(const ScoringContext& ctx, NodeId x, NodeId y) {
  require_distinct(x, y);
  const auto& adj = ctx.adjacency();
  auto& s = scratch();
  const std::size_t k = intersect_rows(adj, x, y, s);
  const auto gx = adj.neighbors(x);
  s.ids.resize(k);
  for (std::size_t t = 0; t < k; ++t) s.ids[t] = static_cast<std::uint32_t>(gx[s.pa[t]]);
  return kernels::active().gather_sum(ctx.inverse_weighted_degree().data(), s.ids.data(), k);
}

namespace {

std::vector<NodeId> common_ids(const ScoringContext& ctx, NodeId x, NodeId y) {
  const auto& adj = ctx.adjacency();
  auto& s = scratch();
  const std::size_t k = intersect_rows(adj, x, y, s);
  const auto gx = adj.neighbors(x);
  std::vector<NodeId> cn(k);
  for (std::size_t t = 0; t < k; ++t) cn[t] = gx[s.pa[t]];
  return cn;
}

}  // namespace

double score_car(const ScoringContext& ctx, NodeId x, NodeId y) {
  const double cn = score_cn(ctx, x, y);
  if (cn == 0.0) return 0.0;
  const auto common = common_ids(ctx, x, y);
  return cn * links_within(ctx.adjacency(), common);
}

double score_cclp(const ScoringContext& ctx, NodeId x, NodeId y) {
  require_distinct(x, y);
  const auto common = common_ids(ctx, x, y);
  if (common.empty()) return 0.0;
  const auto& d = ctx.degrees().count;
  double global = 0.0;
  std::span<const double> local;
  if (ctx.cclp_mode() == CclpMode::kGlobal) {
    global = links_within(ctx.adjacency(), common);
  } else {
    local = ctx.local_triangle_weight();
  }
  double total = 0.0;
  for (NodeId z : common) {
    if (d[z] < 2) continue;
    const double pairs = static_cast<double>(d[z]) * static_cast<double>(d[z] - 1) / 2.0;
    total += (ctx.cclp_mode() == CclpMode::kGlobal ? global : local[z]) / pairs;
  }
  return total;
}

double score(MethodId method, const ScoringContext& ctx, NodeId x, NodeId y) {
  switch (method) {
    case MethodId::kTlpss:
      return score_tlpss(ctx, x, y);
    case MethodId::kCnAsf:
      return score_cn(ctx, x, y);
    case MethodId::kJaAsf:
      return score_ja(ctx, x, y);
    case MethodId::kPaAsf:
      return score_pa(ctx, x, y);
    case MethodId::kRaAsf:
      return score_ra(ctx, x, y);
    case MethodId::kCarAsf:
      return score_car(ctx, x, y);
    case MethodId::kCclpAsf:
      return score_cclp(ctx, x, y);
  }
  throw ConfigError("unknown method");
}

ScoreTable score_all(const ScoringContext& ctx, std::span<const NodePair> pairs, MethodId method,
                     unsigned threads) {
  ScoreTable table;
  table.method = method;
  table.rows.resize(pairs.size());
  if (method == MethodId::kCclpAsf && ctx.cclp_mode() == CclpMode::kPerNode) {
    ctx.local_triangle_weight();
  }
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, pairs.size() / 64)));

  auto work = [&](std::size_t begin, std::size_t end) {
    for (std::size_t k = begin; k < end; ++k) {
      table.rows[k] = {pairs[k], score(method, ctx, pairs[k].u, pairs[k].v)};
    }
  };
  if (threads <= 1) {
    work(0, pairs.size());
    return table;
  }
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (pairs.size() + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
      const std::size_t begin = std::min(pairs.size(), t * chunk);
      const std::size_t end = std::min(pairs.size(), begin + chunk);
      pool.emplace_back([&, t, begin, end] {
        try {
          work(begin, end);
        } catch (...) {
          errors[t] = std::current_exception();
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return table;
}

void write_score_tsv(const ScoreTable& table, std::span<const std::int64_t> labels,
                     std::ostream& out) {
  out.precision(17);
  for (const auto& r : table.rows) {
    out << labels[r.pair.u] << '\t' << labels[r.pair.v] << '\t' << r.score << '\n';
  }
}

void write_score_json(const ScoreTable& table, std::span<const std::int64_t> labels,
                      std::ostream& out) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"u", labels[r.pair.u]}, {"v", labels[r.pair.v]}, {"score", r.score}});
  }
  nlohmann::json doc{{"method", method_name(table.method)}, {"rows", std::move(rows)}};
  out << doc.dump(2) << '\n';
}

}  // namespace tlpss
