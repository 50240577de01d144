#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "oracle.hpp"
#include "tlpss/error.hpp"
#include "tlpss/predictors.hpp"
#include "toy_bridge.hpp"

namespace tlpss {
namespace {

TemporalEdgeList make_list(std::vector<TemporalEdge> edges, int nodes) {
  std::vector<std::int64_t> labels(nodes);
  for (int i = 0; i < nodes; ++i) labels[i] = i;
  return TemporalEdgeList(std::move(edges), std::move(labels));
}

const SnapshotConfig kUnit{1.0, 1.0};

WeightingConfig asf_weighting(double p, double q) {
  WeightingConfig w;
  w.asf = {p, q, 5.0};
  return w;
}

struct Fixture {
  WeightedAdjacency adj;
  LatentProvider latent;
  ScoringContext ctx;
  Fixture(const TemporalEdgeList& list, double ref, const WeightingConfig& w,
          CclpMode mode = CclpMode::kPerNode)
      : adj(WeightedAdjacency::build(list, ref, w, kUnit)),
        latent(adj, latent_floor(w)),
        ctx(adj, &latent, mode) {}
};

TemporalEdgeList worked_list() {
  std::vector<TemporalEdge> edges;
  for (NodeId z : {2, 3, 4}) {
    edges.push_back({0, z, 1});
    edges.push_back({1, z, 1});
  }
  for (auto e : {TemporalEdge{0, 6, 1}, {0, 7, 1}, {5, 6, 1}, {5, 7, 1}, {1, 5, 1}}) {
    edges.push_back(e);
  }
  return make_list(edges, 8);
}

TEST(MethodNames, RoundTrip) {
  for (MethodId m : kAllMethods) EXPECT_EQ(parse_method(method_name(m)), m);
  EXPECT_EQ(parse_method("ra"), MethodId::kRaAsf);
  EXPECT_EQ(parse_method("tlpss"), MethodId::kTlpss);
  EXPECT_THROW(parse_method("adamic_adar"), ConfigError);
}

TEST(Tlpss, EmptyNeighborhoodsScoreZero) {
  Fixture f(make_list({{0, 1, 1}, {2, 3, 1}}, 5), 0.0, asf_weighting(1, 1));
  EXPECT_EQ(score_tlpss(f.ctx, 0, 4), 0.0);
  EXPECT_EQ(score_tlpss(f.ctx, 0, 2), 0.0);
  EXPECT_THROW(score_tlpss(f.ctx, 1, 1), DomainError);
}

// All edges at T with p=1,q=1,a=5: every A is s = asf(0). w(z_i)=2s, w(h)=3s,
// w(k)=2s. score(x->y) = 3*(s/2s) + B(x,h)/3s with B(x,h) = 0.5*(2s/3).
// score(y->x) = 3/2 + B(y,k1)/2s + B(y,k2)/2s, B(y,k) = 0.5 * (2s/2)/2 each:
// CN(y,k)={h}, d(y)=4, d(k)=2, scale = (s+s)/(1+1)/2 = s/2.
TEST(Tlpss, WorkedHandValue) {
  Fixture f(worked_list(), 0.0, asf_weighting(1, 1));
  const double s = asf(0.0, {1, 1, 5});
  const double bxh = 0.5 * (2 * s / 3);
  const double forward = 1.5 + bxh / (3 * s);
  const double byk = 0.5 * (s / 2);
  const double backward = 1.5 + 2 * byk / (2 * s);
  EXPECT_NEAR(score_directed(f.ctx, 0, 1), forward, 1e-14);
  EXPECT_NEAR(score_directed(f.ctx, 1, 0), backward, 1e-14);
  EXPECT_NEAR(score_tlpss(f.ctx, 0, 1), 0.5 * (forward + backward), 1e-14);
}

TEST(Tlpss, ZeroQReducesToTwoSidedRa) {
  for (std::uint64_t seed = 1; seed <= 25; ++seed) {
    oracle::ToyGenerator gen;
    gen.seed = seed;
    Fixture f(testing::to_edge_list(oracle::generate(gen)), 30.0, asf_weighting(2, 0));
    const auto& deg = f.ctx.degrees().weighted;
    for (NodeId x = 0; x < gen.nodes; ++x) {
      for (NodeId y = x + 1; y < gen.nodes; ++y) {
        double sx = 0.0, sy = 0.0;
        for (NodeId z : common_neighbors(f.adj, x, y)) sx += f.adj.weight(x, z) / deg[z];
        for (NodeId z : common_neighbors(f.adj, x, y)) sy += f.adj.weight(y, z) / deg[z];
        EXPECT_EQ(score_tlpss(f.ctx, x, y), 0.5 * (sx + sy));
      }
    }
  }
}

TEST(Tlpss, PositiveIffStructureExists) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    oracle::ToyGenerator gen;
    gen.seed = seed;
    gen.edges = 35;
    Fixture f(testing::to_edge_list(oracle::generate(gen)), 30.0, asf_weighting(2, 1));
    for (NodeId x = 0; x < gen.nodes; ++x) {
      for (NodeId y = x + 1; y < gen.nodes; ++y) {
        const bool structure = !common_neighbors(f.adj, x, y).empty() ||
                               !hidden_nodes(f.adj, x, y).nodes.empty() ||
                               !hidden_nodes(f.adj, y, x).nodes.empty();
        EXPECT_EQ(score_tlpss(f.ctx, x, y) > 0.0, structure) << x << "," << y;
      }
    }
  }
}

TEST(Tlpss, NeedsLatentProvider) {
  const auto adj = WeightedAdjacency::build(worked_list(), 0.0, asf_weighting(1, 1), kUnit);
  const ScoringContext ctx(adj, nullptr);
  EXPECT_THROW(score_tlpss(ctx, 0, 1), ConfigError);
  EXPECT_NO_THROW(score_pa(ctx, 0, 1));
}

TEST(CommonNeighborScore, Arithmetic) {
  // z=2 linked to 0 and 1, both decayed to 0.8
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  w.exp.theta = 0.5;
  const double t = -std::log(0.8) / 0.5;  // elapsed giving weight 0.8
  Fixture f(make_list({{0, 2, 1}, {1, 2, 1}}, 4), t, w);
  EXPECT_NEAR(score_cn(f.ctx, 0, 1), 0.8, 1e-15);
  EXPECT_EQ(score_cn(f.ctx, 0, 3), 0.0);
}

TEST(Baselines, ReduceToClassicIndicesOnUnitWeights) {
  // Exponential decay with every edge at T gives A = 1 exactly.
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  // 0,1 share 2,3,4; 2-3 linked; 4 has an extra neighbor 5.
  const auto list = make_list(
      {{0, 2, 1}, {0, 3, 1}, {0, 4, 1}, {1, 2, 1}, {1, 3, 1}, {1, 4, 1}, {2, 3, 1}, {4, 5, 1}}, 6);
  Fixture f(list, 0.0, w);
  EXPECT_DOUBLE_EQ(score_cn(f.ctx, 0, 1), 3.0);
  EXPECT_DOUBLE_EQ(score_ra(f.ctx, 0, 1), 1.0 / 3 + 1.0 / 3 + 1.0 / 3);
  EXPECT_DOUBLE_EQ(score_pa(f.ctx, 0, 1), 9.0);
  EXPECT_DOUBLE_EQ(score_ja(f.ctx, 0, 1), 0.5);
  EXPECT_DOUBLE_EQ(score_car(f.ctx, 0, 1), 3.0 * 1.0);
  // local triangles: Δ(2)=A(0,3)+A(1,3)=2 over C(3,2)=3; same for 3; Δ(4)=0
  EXPECT_DOUBLE_EQ(score_cclp(f.ctx, 0, 1), 2.0 / 3 + 2.0 / 3);
}

TEST(Baselines, EdgeCases) {
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  Fixture f(make_list({{0, 1, 1}, {2, 3, 1}}, 6), 0.0, w);
  EXPECT_EQ(score_ja(f.ctx, 4, 5), 0.0);
  EXPECT_EQ(score_pa(f.ctx, 0, 4), 0.0);
  EXPECT_EQ(score_ra(f.ctx, 0, 2), 0.0);
  EXPECT_EQ(score_car(f.ctx, 0, 2), 0.0);
  EXPECT_EQ(score_cclp(f.ctx, 0, 2), 0.0);
}

TEST(Baselines, CarWithLinkedCommonNeighbors) {
  // CN {2,3} joined by an old edge decayed to 0.7; the rest sit at T with A = 1.
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  w.exp.theta = -std::log(0.7) / 9.0;
  const auto list = make_list({{2, 3, 1}, {0, 2, 10}, {0, 3, 10}, {1, 2, 10}, {1, 3, 10}}, 4);
  const auto adj = WeightedAdjacency::build(list, 9.0, w, kUnit);
  const ScoringContext ctx(adj, nullptr);
  EXPECT_NEAR(adj.weight(2, 3), 0.7, 1e-14);
  EXPECT_DOUBLE_EQ(score_cn(ctx, 0, 1), 2.0);
  EXPECT_NEAR(score_car(ctx, 0, 1), 2.0 * 0.7, 1e-14);
}

TEST(Baselines, CclpPairOfNeighbors) {
  // z=2 with Γ(z) = {0,1}, A(0,1) = 0.6 contributes 0.6/1.
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  w.exp.theta = 0.5;
  const double t06 = -std::log(0.6) / 0.5;
  const SnapshotConfig cfg{1.0, 1.0};
  const auto list = make_list({{0, 1, 1}, {0, 2, 2}, {1, 2, 2}, {0, 3, 2}, {1, 3, 2}}, 4);
  const auto adj = WeightedAdjacency::build(list, t06, w, cfg);
  const ScoringContext ctx(adj, nullptr);
  EXPECT_NEAR(adj.weight(0, 1), 0.6, 1e-14);
  // pair (2,3): CN = {0,1}, each with d=3, Δ(0) = A(1,2)+A(1,3), Δ(1) = A(0,2)+A(0,3)
  const double a12 = adj.weight(1, 2);
  const double expect = (a12 + adj.weight(1, 3)) / 3.0 + (adj.weight(0, 2) + adj.weight(0, 3)) / 3.0;
  EXPECT_NEAR(score_cclp(ctx, 2, 3), expect, 1e-14);
  // pair (0,1) is adjacent but scorable for diagnostics: CN = {2,3}, each Γ = {0,1}.
  EXPECT_NEAR(score_cclp(ctx, 0, 1), 0.6 + 0.6, 1e-14);
}

TEST(Baselines, JaccardBoundedByHalf) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    oracle::ToyGenerator gen;
    gen.seed = seed;
    Fixture f(testing::to_edge_list(oracle::generate(gen)), 30.0, asf_weighting(2, 1));
    for (NodeId x = 0; x < gen.nodes; ++x) {
      for (NodeId y = x + 1; y < gen.nodes; ++y) EXPECT_LE(score_ja(f.ctx, x, y), 0.5);
    }
  }
}

TEST(Predictors, SymmetricAndNonNegative) {
  oracle::ToyGenerator gen;
  gen.seed = 31;
  gen.edges = 90;
  Fixture f(testing::to_edge_list(oracle::generate(gen)), 30.0, asf_weighting(1.5, 2));
  for (MethodId m : kAllMethods) {
    for (NodeId x = 0; x < gen.nodes; ++x) {
      for (NodeId y = x + 1; y < gen.nodes; ++y) {
        const double a = score(m, f.ctx, x, y);
        EXPECT_EQ(a, score(m, f.ctx, y, x)) << method_name(m);
        EXPECT_GE(a, 0.0);
        EXPECT_TRUE(std::isfinite(a));
      }
    }
  }
}

TEST(Predictors, PaIgnoresRelabelingOfOtherNodes) {
  const auto list = make_list({{0, 2, 1}, {1, 3, 1}, {2, 3, 1}}, 4);
  const auto swapped = make_list({{0, 3, 1}, {1, 2, 1}, {2, 3, 1}}, 4);
  WeightingConfig w;
  w.mode = DecayMode::kExp;
  Fixture a(list, 0.0, w), b(swapped, 0.0, w);
  EXPECT_EQ(score_pa(a.ctx, 0, 1), score_pa(b.ctx, 0, 1));
}

TEST(ScoreAll, EmptySingleAndThreadIndependent) {
  oracle::ToyGenerator gen;
  gen.nodes = 30;
  gen.edges = 120;
  gen.seed = 12;
  Fixture f(testing::to_edge_list(oracle::generate(gen)), 30.0, asf_weighting(2, 1));
  EXPECT_TRUE(score_all(f.ctx, {}, MethodId::kTlpss).rows.empty());

  const std::vector<NodePair> one{{3, 9}};
  EXPECT_EQ(score_all(f.ctx, one, MethodId::kTlpss).rows[0].score, score_tlpss(f.ctx, 3, 9));

  std::vector<NodePair> pairs;
  for (NodeId x = 0; x < 30; ++x) {
    for (NodeId y = x + 1; y < 30; ++y) pairs.push_back({x, y});
  }
  for (MethodId m : kAllMethods) {
    const auto serial = score_all(f.ctx, pairs, m, 1);
    const auto parallel = score_all(f.ctx, pairs, m, 4);
    ASSERT_EQ(serial.rows.size(), parallel.rows.size());
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      EXPECT_EQ(serial.rows[k].pair, pairs[k]);
      EXPECT_EQ(serial.rows[k].score, parallel.rows[k].score);
    }
  }
}

TEST(ScoreAll, LatentCellsScaleWithFloor) {
  // Same A, two floors: each B cell is floor * scale_factor.
  oracle::ToyGenerator gen;
  gen.seed = 8;
  const auto adj = WeightedAdjacency::build(testing::to_edge_list(oracle::generate(gen)), 30.0,
                                            asf_weighting(2, 1), kUnit);
  const LatentProvider low(adj, 0.2), high(adj, 0.6);
  for (NodeId i = 0; i < gen.nodes; ++i) {
    for (NodeId j = i + 1; j < gen.nodes; ++j) {
      if (adj.adjacent(i, j)) continue;
      EXPECT_NEAR(high.get(i, j), 3.0 * low.get(i, j), 1e-15);
    }
  }
}

TEST(ScoreTableExport, TsvAndJson) {
  Fixture f(worked_list(), 0.0, asf_weighting(1, 1));
  const std::vector<NodePair> pairs{{0, 1}, {0, 5}};
  const auto table = score_all(f.ctx, pairs, MethodId::kRaAsf);
  const std::vector<std::int64_t> labels{10, 11, 12, 13, 14, 15, 16, 17};
  std::ostringstream tsv, json;
  write_score_tsv(table, labels, tsv);
  write_score_json(table, labels, json);
  EXPECT_EQ(tsv.str().substr(0, 6), "10\t11\t");
  const auto doc = nlohmann::json::parse(json.str());
  EXPECT_EQ(doc["method"], "RA_ASF");
  EXPECT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][1]["v"], 15);
}

}  // namespace
}  // namespace tlpss
