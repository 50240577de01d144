#pragma once

#include <iosfwd>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "tlpss/adjacency.hpp"

namespace tlpss {

enum class MethodId { kTlpss, kCnAsf, kJaAsf, kPaAsf, kRaAsf, kCarAsf, kCclpAsf };

inline constexpr MethodId kAllMethods[] = {MethodId::kCnAsf,  MethodId::kJaAsf,
                                           MethodId::kPaAsf,  MethodId::kRaAsf,
                                           MethodId::kCarAsf, MethodId::kCclpAsf,
                                           MethodId::kTlpss};

std::string_view method_name(MethodId m) noexcept;
/// Accepts "TLPSS", "CN_ASF", "cn", "ra_asf", ... Throws ConfigError otherwise.
MethodId parse_method(std::string_view name);

/// Which triangle mass CCLP divides by each common neighbor's pair count:
/// per-node (links inside Γ(z)) or global (links among all common neighbors).
enum class CclpMode { kPerNode, kGlobal };

/// Read-only state every scorer needs. Built once per adjacency; safe to share
/// across threads.
class ScoringContext {
 public:
  /// `latent` may be null when TLPSS is not scored.
  ScoringContext(const WeightedAdjacency& adj, const LatentProvider* latent,
                 CclpMode cclp = CclpMode::kPerNode);

  const WeightedAdjacency& adjacency() const noexcept { return *adj_; }
  const DegreeVector& degrees() const noexcept { return degrees_; }
  const LatentProvider* latent() const noexcept { return latent_; }
  CclpMode cclp_mode() const noexcept { return cclp_; }
  std::span<const double> inverse_weighted_degree() const noexcept { return inv_w_; }

  /// Δ'(z): total weight of links between neighbors of z. Computed on first use.
  std::span<const double> local_triangle_weight() const;

 private:
  const WeightedAdjacency* adj_;
  const LatentProvider* latent_;
  CclpMode cclp_;
  DegreeVector degrees_;
  std::vector<double> inv_w_;
  mutable std::once_flag triangles_once_;
  mutable std::vector<double> triangles_;
};

double score_tlpss(const ScoringContext& ctx, NodeId x, NodeId y);
/// One endpoint's half: Σ_{CN} A(x,z)/w(z) + Σ_{H_x} B(x,h)/w(h).
double score_directed(const ScoringContext& ctx, NodeId x, NodeId y);
double score_cn(const ScoringContext& ctx, NodeId x, NodeId y);
double score_ja(const ScoringContext& ctx, NodeId x, NodeId y);
double score_pa(const ScoringContext& ctx, NodeId x, NodeId y);
double score_ra(const ScoringContext& ctx, NodeId x, NodeId y);
double score_car(const ScoringContext& ctx, NodeId x, NodeId y);
double score_cclp(const ScoringContext& ctx, NodeId x, NodeId y);

double score(MethodId method, const ScoringContext& ctx, NodeId x, NodeId y);

struct ScoredPair {
  NodePair pair;
  double score = 0.0;
};

struct ScoreTable {
  MethodId method = MethodId::kTlpss;
  WeightingConfig weighting;
  std::vector<ScoredPair> rows;  // same order as the requested pairs
};

/// Scores every pair, fanning out over `threads` workers (0 = hardware
/// concurrency). Output is identical for any thread count.
ScoreTable score_all(const ScoringContext& ctx, std::span<const NodePair> pairs, MethodId method,
                     unsigned threads = 0);

void write_score_tsv(const ScoreTable& table, std::span<const std::int64_t> labels,
                     std::ostream& out);
void write_score_json(const ScoreTable& table, std::span<const std::int64_t> labels,
                      std::ostream& out);

}  // namespace tlpss
