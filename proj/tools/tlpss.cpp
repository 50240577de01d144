// tlpss: command-line front end for ingest, evaluation and parameter sweeps.

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "tlpss/error.hpp"
#include "tlpss/experiment.hpp"
#include "tlpss/kernels.hpp"

namespace fs = std::filesystem;
using namespace tlpss;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kData = 3, kImpossible = 4 };

// Values given on the command line; unset ones leave the config untouched.
struct Overrides {
  std::string config;
  std::optional<std::string> dataset, preset, decay, agg, cclp, out_dir, format;
  std::optional<double> period, p, q, a, theta, ratio;
  std::vector<std::string> methods;
  std::optional<std::size_t> top_l, max_negatives, subgraph_seeds;
  std::optional<std::uint64_t> auc_samples, auc_exhaustive_limit, seed;
  std::optional<int> subgraph_hops;
  std::optional<unsigned> threads;
};

void add_experiment_flags(CLI::App* cmd, Overrides& o) {
  cmd->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd->add_option("--config", o.config, "JSON config file; flags override its fields");
  cmd->add_option("--dataset", o.dataset, "KONECT-style temporal edge list");
  cmd->add_option("--preset", o.preset, "contact|dblp|digg|enron|facebook|prosper");
  cmd->add_option("--period", o.period, "snapshot length in timestamp units");
  cmd->add_option("--decay", o.decay, "asf|exp");
  cmd->add_option("--p", o.p, "ASF time scale");
  cmd->add_option("--q", o.q, "ASF residual level");
  cmd->add_option("--a", o.a, "ASF active-phase length");
  cmd->add_option("--theta", o.theta, "exponential decay rate");
  cmd->add_option("--agg", o.agg, "multi-edge aggregation: sum|latest");
  cmd->add_option("--cclp", o.cclp, "CCLP triangle mode: per_node|global");
  cmd->add_option("--ratio", o.ratio, "train fraction of edges");
  cmd->add_option("--method", o.methods, "predictor (repeatable); default all")
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  cmd->add_option("--top-l", o.top_l, "precision cut L");
  cmd->add_option("--auc-samples", o.auc_samples, "comparisons for sampled AUC");
  cmd->add_option("--auc-exhaustive-limit", o.auc_exhaustive_limit,
                  "largest |P|*|N| computed exhaustively");
  cmd->add_option("--max-negatives", o.max_negatives, "negative candidates (0 = default)");
  cmd->add_option("--seed", o.seed, "sampling seed");
  cmd->add_option("--subgraph-hops", o.subgraph_hops, "restrict to k-hop ball around seeds");
  cmd->add_option("--subgraph-seeds", o.subgraph_seeds, "number of random seed nodes");
  cmd->add_option("--threads", o.threads, "scoring threads (0 = all cores)");
  cmd->add_option("--out-dir", o.out_dir, "directory for report files");
  cmd->add_option("--format", o.format, "stdout format: json|csv");
}

DecayMode decay_from(const std::string& s) {
  if (s == "asf") return DecayMode::kAsf;
  if (s == "exp") return DecayMode::kExp;
  throw ConfigError("--decay must be asf or exp");
}

ExperimentConfig resolve(const Overrides& o) {
  ExperimentConfig cfg;
  if (!o.config.empty()) cfg = load_config_file(o.config, cfg);
  if (o.preset) apply_preset(cfg, *o.preset);
  auto set = [](const auto& src, auto& dst) {
    if (src) dst = *src;
  };
  set(o.dataset, cfg.dataset);
  set(o.period, cfg.period);
  if (o.decay) cfg.decay = decay_from(*o.decay);
  set(o.p, cfg.asf.p);
  set(o.q, cfg.asf.q);
  set(o.a, cfg.asf.a);
  set(o.theta, cfg.exp.theta);
  if (o.agg) {
    if (*o.agg != "sum" && *o.agg != "latest") throw ConfigError("--agg must be sum or latest");
    cfg.aggregation = *o.agg == "sum" ? Aggregation::kSum : Aggregation::kLatest;
  }
  if (o.cclp) {
    if (*o.cclp != "per_node" && *o.cclp != "global") {
      throw ConfigError("--cclp must be per_node or global");
    }
    cfg.cclp = *o.cclp == "global" ? CclpMode::kGlobal : CclpMode::kPerNode;
  }
  set(o.ratio, cfg.ratio);
  if (!o.methods.empty()) {
    cfg.methods.clear();
    for (const auto& m : o.methods) cfg.methods.push_back(parse_method(m));
  }
  set(o.top_l, cfg.top_l);
  set(o.auc_samples, cfg.auc_samples);
  set(o.auc_exhaustive_limit, cfg.auc_exhaustive_limit);
  set(o.max_negatives, cfg.max_negatives);
  set(o.seed, cfg.seed);
  set(o.subgraph_hops, cfg.subgraph_hops);
  set(o.subgraph_seeds, cfg.subgraph_seeds);
  set(o.threads, cfg.threads);
  set(o.out_dir, cfg.out_dir);
  set(o.format, cfg.format);
  validate(cfg);
  if (cfg.dataset.empty()) throw ConfigError("no dataset given (--dataset or config file)");
  return cfg;
}

nlohmann::json drops_json(const DropReport& d) {
  return {{"lines_read", d.lines_read},
          {"comment_lines", d.comment_lines},
          {"edges_kept", d.edges_kept},
          {"missing_timestamp_dropped", d.missing_ts_dropped},
          {"self_loops_dropped", d.self_loops_dropped}};
}

void write_file(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << text;
  if (!out) throw DataError("write failed for " + path.string());
}

int cmd_ingest(const std::string& input, const std::string& output, const std::string& report) {
  auto parsed = parse_edge_list_file(input);
  const auto normalized = normalize(parsed.edges, &parsed.report);
  std::ostringstream text;
  serialize_edge_list(normalized, text);
  write_file(output, text.str());
  nlohmann::json doc = drops_json(parsed.report);
  doc["input"] = input;
  doc["output"] = output;
  doc["nodes"] = normalized.node_count();
  doc["time_shift"] = normalized.time_shift();
  doc["sha256"] = content_hash(normalized);
  const std::string body = doc.dump(2) + "\n";
  write_file(report.empty() ? output + ".report.json" : report, body);
  std::cout << body;
  return kOk;
}

void emit_reports(const ExperimentConfig& cfg, const std::vector<EvalReport>& reports,
                  const PreparedData& data) {
  nlohmann::json doc{{"drops", drops_json(data.drops)}, {"results", nlohmann::json::array()}};
  for (const auto& r : reports) doc["results"].push_back(to_json(r));
  std::string csv = csv_header() + "\n";
  for (const auto& r : reports) csv += csv_row(r) + "\n";
  if (!cfg.out_dir.empty()) {
    write_file(fs::path(cfg.out_dir) / "report.json", doc.dump(2) + "\n");
    write_file(fs::path(cfg.out_dir) / "results.csv", csv);
  }
  if (cfg.format == "csv") {
    std::cout << csv;
  } else {
    std::cout << doc.dump(2) << "\n";
  }
}

int cmd_evaluate(const Overrides& o) {
  const auto cfg = resolve(o);
  const auto data = prepare(cfg);
  const auto reports = evaluate(cfg, data);
  emit_reports(cfg, reports, data);
  for (const auto& r : reports) {
    std::fprintf(stderr, "%-9s AUC %.4f  precision@%zu %.4f\n",
                 std::string(method_name(r.method)).c_str(), r.auc, r.top_l, r.precision);
  }
  return kOk;
}

std::vector<double> parse_range(const std::string& text) {
  // start:stop:step, or a comma list
  if (text.find(':') != std::string::npos) {
    std::vector<double> parts;
    std::stringstream in(text);
    std::string tok;
    while (std::getline(in, tok, ':')) {
      try {
        parts.push_back(std::stod(tok));
      } catch (const std::exception&) {
        throw ConfigError("bad range value '" + tok + "'");
      }
    }
    if (parts.size() != 3) throw ConfigError("range must be start:stop:step");
    return linear_range(parts[0], parts[1], parts[2]);
  }
  std::vector<double> values;
  std::stringstream in(text);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    try {
      values.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad range value '" + tok + "'");
    }
  }
  if (values.empty()) throw ConfigError("empty sweep range");
  return values;
}

int cmd_sweep(const Overrides& o, const std::string& param, const std::string& range) {
  const auto cfg = resolve(o);
  const auto values = parse_range(range);
  const auto data = prepare(cfg);
  const auto rows = sweep(cfg, data, param, values);
  std::string csv = sweep_csv_header() + "\n";
  for (const auto& r : rows) csv += sweep_csv_row(r) + "\n";
  if (!cfg.out_dir.empty()) {
    write_file(fs::path(cfg.out_dir) / "sweep.csv", csv);
    nlohmann::json doc{{"param", param},
                       {"values", values},
                       {"config", to_json(cfg)},
                       {"input_sha256", data.input_hash},
                       {"results", nlohmann::json::array()}};
    for (const auto& r : rows) doc["results"].push_back(to_json(r));
    write_file(fs::path(cfg.out_dir) / "sweep.json", doc.dump(2) + "\n");
  }
  std::cout << csv;
  return kOk;
}

int cmd_score(const Overrides& o, const std::string& output) {
  const auto cfg = resolve(o);
  const auto data = prepare(cfg);
  const auto adj = WeightedAdjacency::build(data.split.train, data.reference_snapshot,
                                            cfg.weighting(), data.snapshots);
  const LatentProvider latent(adj, latent_floor(cfg.weighting()));
  const ScoringContext ctx(adj, &latent, cfg.cclp);
  std::vector<NodePair> pairs = data.candidates.positives;
  pairs.insert(pairs.end(), data.candidates.negatives.begin(), data.candidates.negatives.end());
  std::ostringstream out;
  for (MethodId m : cfg.methods) {
    const auto table = score_all(ctx, pairs, m, cfg.threads);
    if (cfg.format == "csv") {
      write_score_tsv(table, data.edges.labels(), out);
    } else {
      write_score_json(table, data.edges.labels(), out);
      out << "\n";
    }
  }
  if (output.empty() || output == "-") {
    std::cout << out.str();
  } else {
    write_file(output, out.str());
  }
  return kOk;
}

int cmd_dump(const Overrides& o, const std::string& what, const std::string& output) {
  const auto cfg = resolve(o);
  const auto data = prepare(cfg);
  const auto adj = WeightedAdjacency::build(data.split.train, data.reference_snapshot,
                                            cfg.weighting(), data.snapshots);
  std::ostringstream out;
  if (what == "adjacency") {
    write_adjacency_tsv(adj, out);
  } else if (what == "latent") {
    const LatentProvider latent(adj, latent_floor(cfg.weighting()));
    write_latent_tsv(latent.materialize(), out);
  } else {
    throw ConfigError("dump target must be adjacency or latent");
  }
  if (output.empty() || output == "-") {
    std::cout << out.str();
  } else {
    write_file(output, out.str());
  }
  return kOk;
}

int cmd_info() {
  std::cout << "kernels: " << kernels::isa_name(kernels::active_isa()) << " (avx2 "
            << (kernels::isa_supported(kernels::Isa::kAvx2) ? "available" : "unavailable") << ")\n";
  std::cout << "presets:\n";
  for (const auto& p : dataset_presets()) {
    std::printf("  %-9s period %-10g p %-4g L %zu\n", std::string(p.name).c_str(), p.period,
                p.best_p, p.top_l);
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Temporal link prediction with latent-edge scoring"};
  app.require_subcommand(1);

  std::string ingest_in, ingest_out, ingest_report;
  auto* ingest = app.add_subcommand("ingest", "normalize a KONECT edge list");
  ingest->add_option("input", ingest_in, "raw edge list")->required();
  ingest->add_option("output", ingest_out, "normalized edge list")->required();
  ingest->add_option("--report", ingest_report, "drop report path (default OUTPUT.report.json)");

  Overrides eval_o, sweep_o, score_o, dump_o;
  auto* eval = app.add_subcommand("evaluate", "score candidates and report AUC / precision@L");
  add_experiment_flags(eval, eval_o);

  std::string param, range;
  auto* sw = app.add_subcommand("sweep", "evaluate across a parameter range");
  add_experiment_flags(sw, sweep_o);
  sw->add_option("--param", param, "p|q|a|theta")->required();
  sw->add_option("--range", range, "start:stop:step or comma list")->required();

  std::string score_out;
  auto* sc = app.add_subcommand("score", "write per-pair scores for the candidate set");
  add_experiment_flags(sc, score_o);
  sc->add_option("-o,--output", score_out, "output file (default stdout)");

  std::string dump_what = "adjacency", dump_out;
  auto* dump = app.add_subcommand("dump", "write the train adjacency or latent matrix as TSV");
  add_experiment_flags(dump, dump_o);
  dump->add_option("--what", dump_what, "adjacency|latent");
  dump->add_option("-o,--output", dump_out, "output file (default stdout)");

  auto* info = app.add_subcommand("info", "kernel selection and dataset presets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kConfig;
  }

  try {
    if (*ingest) return cmd_ingest(ingest_in, ingest_out, ingest_report);
    if (*eval) return cmd_evaluate(eval_o);
    if (*sw) return cmd_sweep(sweep_o, param, range);
    if (*sc) return cmd_score(score_o, score_out);
    if (*dump) return cmd_dump(dump_o, dump_what, dump_out);
    if (*info) return cmd_info();
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfig;
  } catch (const EvaluationImpossible& e) {
    std::cerr << "evaluation impossible: " << e.what() << "\n";
    return kImpossible;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const DomainError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kFailure;
}
