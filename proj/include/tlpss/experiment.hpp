#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlpss/adjacency.hpp"
#include "tlpss/edge_list.hpp"
#include "tlpss/evaluation.hpp"
#include "tlpss/predictors.hpp"

namespace tlpss {

/// Per-dataset defaults: snapshot period (seconds), best p with q = 1, and
/// the precision cut L used for that dataset.
struct DatasetPreset {
  std::string_view name;
  double period;
  double best_p;
  std::size_t top_l;
};

std::span<const DatasetPreset> dataset_presets() noexcept;
const DatasetPreset* find_preset(std::string_view name) noexcept;

struct ExperimentConfig {
  std::string dataset;
  std::string preset;
  double period = 3600.0;
  DecayMode decay = DecayMode::kAsf;
  DecayParams asf;
  ExpDecayParams exp;
  Aggregation aggregation = Aggregation::kSum;
  CclpMode cclp = CclpMode::kPerNode;
  double ratio = 0.9;
  std::vector<MethodId> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::size_t top_l = 100;
  std::uint64_t auc_samples = 672'400;
  std::uint64_t auc_exhaustive_limit = 10'000'000;
  std::size_t max_negatives = 0;  // 0: min(universe, 10 * positives, 1e6)
  std::uint64_t seed = 42;
  int subgraph_hops = -1;  // < 0 disables the k-hop subgraph filter
  std::size_t subgraph_seeds = 0;
  unsigned threads = 0;
  std::string out_dir;
  std::string format = "json";

  WeightingConfig weighting() const { return {decay, asf, exp, aggregation}; }
};

/// Throws ConfigError on any out-of-range field.
void validate(const ExperimentConfig& cfg);

/// Fills period, p and L from the named preset (leaves other fields alone).
void apply_preset(ExperimentConfig& cfg, std::string_view name);

nlohmann::json to_json(const ExperimentConfig& cfg);
/// Fields missing from `doc` keep their value in `base`.
ExperimentConfig config_from_json(const nlohmann::json& doc, ExperimentConfig base = {});
ExperimentConfig load_config_file(const std::filesystem::path& path, ExperimentConfig base = {});

/// Hex SHA-256 of the serialized normalized edge list.
std::string content_hash(const TemporalEdgeList& normalized);

/// Everything that stays fixed across methods and parameter values.
struct PreparedData {
  TemporalEdgeList edges;  // normalized (and subgraph-filtered when enabled)
  DropReport drops;
  std::string input_hash;
  SnapshotConfig snapshots;
  TrainTestSplit split;
  double reference_snapshot = 0.0;
  CandidateSet candidates;
};

PreparedData prepare(const ExperimentConfig& cfg);
PreparedData prepare(const ExperimentConfig& cfg, TemporalEdgeList normalized, DropReport drops);

struct EvalReport {
  MethodId method = MethodId::kTlpss;
  WeightingConfig weighting;
  SnapshotConfig snapshots;
  std::size_t train_edges = 0;
  std::size_t test_edges = 0;
  Timestamp t_split = 0;
  double reference_snapshot = 0.0;
  std::size_t positives = 0;
  std::size_t negatives = 0;
  std::size_t negative_universe = 0;
  double auc = 0.0;
  double precision = 0.0;
  std::size_t top_l = 0;
  std::uint64_t comparisons = 0;
  bool auc_exhaustive = false;
  std::uint64_t seed = 0;
  std::string sweep_param;
  double sweep_value = 0.0;
  std::string input_hash;
  nlohmann::json config;
};

nlohmann::json to_json(const EvalReport& report);
std::string csv_header();
std::string csv_row(const EvalReport& report);
std::string sweep_csv_header();
std::string sweep_csv_row(const EvalReport& report);

/// One report per configured method, all sharing one adjacency build.
std::vector<EvalReport> evaluate(const ExperimentConfig& cfg, const PreparedData& data);

/// Re-runs `evaluate` for every value of `param` ("p", "q", "a" or "theta")
/// on the same split and candidate set.
std::vector<EvalReport> sweep(const ExperimentConfig& cfg, const PreparedData& data,
                              std::string_view param, std::span<const double> values);

/// start, start + step, ... up to and including `stop` (within step * 1e-9).
std::vector<double> linear_range(double start, double stop, double step);

}  // namespace tlpss
