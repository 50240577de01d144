#include "tlpss/experiment.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "tlpss/error.hpp"

namespace tlpss {

namespace {

constexpr DatasetPreset kPresets[] = {
    {"contact", 3600.0, 3.0, 100},        {"dblp", 31'557'600.0, 1.0, 100},
    {"digg", 3600.0, 10.0, 1000},         {"enron", 604'800.0, 2.5, 100},
    {"facebook", 86'400.0, 5.0, 1000},    {"prosper", 86'400.0, 7.0, 2500},
};

std::string_view decay_name(DecayMode m) { return m == DecayMode::kAsf ? "asf" : "exp"; }
std::string_view aggregation_name(Aggregation a) {
  return a == Aggregation::kSum ? "sum" : "latest";
}
std::string_view cclp_name(CclpMode m) { return m == CclpMode::kPerNode ? "per_node" : "global"; }

DecayMode parse_decay(const std::string& s) {
  if (s == "asf") return DecayMode::kAsf;
  if (s == "exp") return DecayMode::kExp;
  throw ConfigError("decay must be 'asf' or 'exp', got '" + s + "'");
}
Aggregation parse_aggregation(const std::string& s) {
  if (s == "sum") return Aggregation::kSum;
  if (s == "latest") return Aggregation::kLatest;
  throw ConfigError("aggregation must be 'sum' or 'latest', got '" + s + "'");
}
CclpMode parse_cclp(const std::string& s) {
  if (s == "per_node") return CclpMode::kPerNode;
  if (s == "global") return CclpMode::kGlobal;
  throw ConfigError("cclp mode must be 'per_node' or 'global', got '" + s + "'");
}

}  // namespace

std::span<const DatasetPreset> dataset_presets() noexcept { return kPresets; }

const DatasetPreset* find_preset(std::string_view name) noexcept {
  for (const auto& p : kPresets) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

void validate(const ExperimentConfig& cfg) {
  validate(SnapshotConfig{cfg.period, 1.0});
  validate(cfg.weighting());
  if (!(cfg.ratio > 0.0 && cfg.ratio < 1.0)) throw ConfigError("ratio must lie in (0, 1)");
  if (cfg.methods.empty()) throw ConfigError("at least one method is required");
  if (cfg.top_l == 0) throw ConfigError("top-l must be at least 1");
  if (cfg.auc_samples == 0) throw ConfigError("auc-samples must be positive");
  if (cfg.subgraph_hops >= 0 && cfg.subgraph_seeds == 0) {
    throw ConfigError("subgraph filter needs at least one seed node");
  }
  if (cfg.format != "json" && cfg.format != "csv") throw ConfigError("format must be json or csv");
}

void apply_preset(ExperimentConfig& cfg, std::string_view name) {
  const auto* p = find_preset(name);
  if (p == nullptr) throw ConfigError("unknown dataset preset '" + std::string(name) + "'");
  cfg.preset = std::string(name);
  cfg.period = p->period;
  cfg.asf.p = p->best_p;
  cfg.top_l = p->top_l;
}

nlohmann::json to_json(const ExperimentConfig& cfg) {
  nlohmann::json methods = nlohmann::json::array();
  for (MethodId m : cfg.methods) methods.push_back(method_name(m));
  return {
      {"dataset", cfg.dataset},
      {"preset", cfg.preset},
      {"period", cfg.period},
      {"decay", decay_name(cfg.decay)},
      {"p", cfg.asf.p},
      {"q", cfg.asf.q},
      {"a", cfg.asf.a},
      {"theta", cfg.exp.theta},
      {"aggregation", aggregation_name(cfg.aggregation)},
      {"cclp", cclp_name(cfg.cclp)},
      {"ratio", cfg.ratio},
      {"methods", methods},
      {"top_l", cfg.top_l},
      {"auc_samples", cfg.auc_samples},
      {"auc_exhaustive_limit", cfg.auc_exhaustive_limit},
      {"max_negatives", cfg.max_negatives},
      {"seed", cfg.seed},
      {"subgraph_hops", cfg.subgraph_hops},
      {"subgraph_seeds", cfg.subgraph_seeds},
      {"threads", cfg.threads},
      {"out_dir", cfg.out_dir},
      {"format", cfg.format},
  };
}

ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base) {
  if (!doc.is_object()) throw ConfigError("config document must be a JSON object");
  try {
    auto get = [&](const char* key, auto& field) {
      if (doc.contains(key)) doc.at(key).get_to(field);
    };
    if (doc.contains("preset") && !doc.at("preset").get<std::string>().empty()) {
      apply_preset(base, doc.at("preset").get<std::string>());
    }
    get("dataset", base.dataset);
    get("period", base.period);
    get("p", base.asf.p);
    get("q", base.asf.q);
    get("a", base.asf.a);
    get("theta", base.exp.theta);
    get("ratio", base.ratio);
    get("top_l", base.top_l);
    get("auc_samples", base.auc_samples);
    get("auc_exhaustive_limit", base.auc_exhaustive_limit);
    get("max_negatives", base.max_negatives);
    get("seed", base.seed);
    get("subgraph_hops", base.subgraph_hops);
    get("subgraph_seeds", base.subgraph_seeds);
    get("threads", base.threads);
    get("out_dir", base.out_dir);
    get("format", base.format);
    if (doc.contains("decay")) base.decay = parse_decay(doc.at("decay").get<std::string>());
    if (doc.contains("aggregation")) {
      base.aggregation = parse_aggregation(doc.at("aggregation").get<std::string>());
    }
    if (doc.contains("cclp")) base.cclp = parse_cclp(doc.at("cclp").get<std::string>());
    if (doc.contains("methods")) {
      base.methods.clear();
      for (const auto& m : doc.at("methods")) base.methods.push_back(parse_method(m.get<std::string>()));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad config value: ") + e.what());
  }
  return base;
}

ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return config_from_json(doc, std::move(base));
}

std::string content_hash(const TemporalEdgeList& normalized) {
  std::ostringstream text;
  serialize_edge_list(normalized, text);
  const std::string bytes = text.str();
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw DataError("SHA-256 digest failed");
  }
  std::ostringstream hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(digest[i]);
  }
  return hex.str();
}

PreparedData prepare(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.dataset.empty()) throw ConfigError("no dataset given");
  auto parsed = parse_edge_list_file(cfg.dataset);
  auto normalized = normalize(parsed.edges, &parsed.report);
  return prepare(cfg, std::move(normalized), parsed.report);
}

PreparedData prepare(const ExperimentConfig& cfg, TemporalEdgeList normalized, DropReport drops) {
  validate(cfg);
  if (normalized.empty()) throw EmptyDatasetError("no edges left after normalization");
  PreparedData data;
  data.drops = drops;
  if (cfg.subgraph_hops >= 0) {
    std::mt19937_64 rng(cfg.seed);
    std::uniform_int_distribution<NodeId> node(0, static_cast<NodeId>(normalized.node_count()) - 1);
    std::vector<NodeId> seeds(cfg.subgraph_seeds);
    for (auto& s : seeds) s = node(rng);
    normalized = khop_filter(normalized, seeds, cfg.subgraph_hops);
    if (normalized.empty()) throw EmptyDatasetError("subgraph filter removed every edge");
  }
  data.input_hash = content_hash(normalized);
  data.edges = std::move(normalized);
  data.snapshots = SnapshotConfig{cfg.period, 1.0};
  data.split = split_by_time(data.edges, cfg.ratio);
  data.reference_snapshot = snapshot_index(static_cast<double>(data.split.t_split), data.snapshots);
  data.candidates =
      build_candidates(data.split, data.edges.node_count(), cfg.seed, cfg.max_negatives);
  return data;
}

nlohmann::json to_json(const EvalReport& r) {
  nlohmann::json doc{
      {"method", method_name(r.method)},
      {"decay", decay_name(r.weighting.mode)},
      {"p", r.weighting.asf.p},
      {"q", r.weighting.asf.q},
      {"a", r.weighting.asf.a},
      {"theta", r.weighting.exp.theta},
      {"aggregation", aggregation_name(r.weighting.aggregation)},
      {"snapshot", {{"period", r.snapshots.period}, {"origin", r.snapshots.origin}}},
      {"split",
       {{"train_edges", r.train_edges},
        {"test_edges", r.test_edges},
        {"t_split", r.t_split},
        {"reference_snapshot", r.reference_snapshot},
        {"positives", r.positives},
        {"negatives", r.negatives},
        {"negative_universe", r.negative_universe}}},
      {"auc", r.auc},
      {"precision", r.precision},
      {"top_l", r.top_l},
      {"comparisons", r.comparisons},
      {"auc_exhaustive", r.auc_exhaustive},
      {"seed", r.seed},
      {"input_sha256", r.input_hash},
      {"config", r.config},
  };
  if (!r.sweep_param.empty()) {
    doc["sweep"] = {{"param", r.sweep_param}, {"value", r.sweep_value}};
  }
  return doc;
}

std::string csv_header() {
  return "method,decay,p,q,a,theta,aggregation,period,train_edges,test_edges,positives,negatives,"
         "auc,precision,top_l,comparisons,seed,input_sha256";
}

std::string csv_row(const EvalReport& r) {
  std::ostringstream out;
  out << std::setprecision(10) << method_name(r.method) << ',' << decay_name(r.weighting.mode)
      << ',' << r.weighting.asf.p << ',' << r.weighting.asf.q << ',' << r.weighting.asf.a << ','
      << r.weighting.exp.theta << ',' << aggregation_name(r.weighting.aggregation) << ','
      << r.snapshots.period << ',' << r.train_edges << ',' << r.test_edges << ',' << r.positives
      << ',' << r.negatives << ',' << r.auc << ',' << r.precision << ',' << r.top_l << ','
      << r.comparisons << ',' << r.seed << ',' << r.input_hash;
  return out.str();
}

std::string sweep_csv_header() { return "method,param,value,auc,precision"; }

std::string sweep_csv_row(const EvalReport& r) {
  std::ostringstream out;
  out << std::setprecision(10) << method_name(r.method) << ',' << r.sweep_param << ','
      << r.sweep_value << ',' << r.auc << ',' << r.precision;
  return out.str();
}

std::vector<EvalReport> evaluate(const ExperimentConfig& cfg, const PreparedData& data) {
  validate(cfg);
  const auto weighting = cfg.weighting();
  const auto adj = WeightedAdjacency::build(data.split.train, data.reference_snapshot, weighting,
                                            data.snapshots);
  const bool needs_latent =
      std::find(cfg.methods.begin(), cfg.methods.end(), MethodId::kTlpss) != cfg.methods.end();
  std::optional<LatentProvider> latent;
  if (needs_latent) latent.emplace(adj, latent_floor(weighting));
  const ScoringContext ctx(adj, latent ? &*latent : nullptr, cfg.cclp);

  const auto& cand = data.candidates;
  std::vector<NodePair> pairs;
  pairs.reserve(cand.positives.size() + cand.negatives.size());
  pairs.insert(pairs.end(), cand.positives.begin(), cand.positives.end());
  pairs.insert(pairs.end(), cand.negatives.begin(), cand.negatives.end());

  const auto config_doc = to_json(cfg);
  std::vector<EvalReport> reports;
  for (MethodId method : cfg.methods) {
    const auto table = score_all(ctx, pairs, method, cfg.threads);
    std::vector<double> pos(cand.positives.size()), neg(cand.negatives.size());
    for (std::size_t k = 0; k < pos.size(); ++k) pos[k] = table.rows[k].score;
    for (std::size_t k = 0; k < neg.size(); ++k) neg[k] = table.rows[pos.size() + k].score;
    const auto a = auc(pos, neg, {cfg.auc_exhaustive_limit, cfg.auc_samples, cfg.seed});

    EvalReport r;
    r.method = method;
    r.weighting = weighting;
    r.snapshots = data.snapshots;
    r.train_edges = data.split.train.size();
    r.test_edges = data.split.test.size();
    r.t_split = data.split.t_split;
    r.reference_snapshot = data.reference_snapshot;
    r.positives = cand.positives.size();
    r.negatives = cand.negatives.size();
    r.negative_universe = cand.negative_universe;
    r.auc = a.value;
    r.comparisons = a.comparisons;
    r.auc_exhaustive = a.exhaustive;
    r.top_l = cfg.top_l;
    r.precision = precision_at_l(table.rows, cand.positives, cfg.top_l);
    r.seed = cfg.seed;
    r.input_hash = data.input_hash;
    r.config = config_doc;
    reports.push_back(std::move(r));
  }
  return reports;
}

std::vector<EvalReport> sweep(const ExperimentConfig& cfg, const PreparedData& data,
                              std::string_view param, std::span<const double> values) {
  if (values.empty()) throw ConfigError("sweep needs at least one value");
  std::vector<EvalReport> out;
  for (double v : values) {
    ExperimentConfig run = cfg;
    if (param == "p") {
      run.asf.p = v;
    } else if (param == "q") {
      run.asf.q = v;
    } else if (param == "a") {
      run.asf.a = v;
    } else if (param == "theta") {
      run.exp.theta = v;
    } else {
      throw ConfigError("sweep parameter must be p, q, a or theta");
    }
    for (auto& r : evaluate(run, data)) {
      r.sweep_param = std::string(param);
      r.sweep_value = v;
      out.push_back(std::move(r));
    }
  }
  return out;
}

std::vector<double> linear_range(double start, double stop, double step) {
  if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start) {
    throw ConfigError("range needs finite start <= stop and step > 0");
  }
  std::vector<double> out;
  const double slack = step * 1e-9;
  for (std::size_t k = 0;; ++k) {
    const double v = start + static_cast<double>(k) * step;
    if (v > stop + slack) break;
    out.push_back(v);
  }
  return out;
}

}  // namespace tlpss
