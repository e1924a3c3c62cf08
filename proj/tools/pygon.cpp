// pygon: planted dense subgraph recovery from the command line.
//
// Progress goes to stderr. Subcommands that print results write
// machine-readable CSV or JSON to stdout; artifacts go to files.

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pygon/pygon.hpp"

namespace fs = std::filesystem;
using namespace pygon;

namespace {

void log_line(const std::string& s) { std::cerr << "[pygon] " << s << std::endl; }

std::size_t env_threads(std::size_t fallback) {
  if (const char* v = std::getenv("PYGON_THREADS")) return static_cast<std::size_t>(std::stoul(v));
  return fallback;
}

std::string env_out_dir(const std::string& fallback) {
  if (const char* v = std::getenv("PYGON_OUT_DIR")) return v;
  return fallback;
}

std::string timestamp_utc() {
  const auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y%m%dT%H%M%SZ", &tm);
  return buf;
}

fs::path make_run_dir(const std::string& out, Seed seed) {
  fs::path dir = fs::path(out) / (timestamp_utc() + "_seed" + std::to_string(seed.value));
  for (int i = 1; fs::exists(dir); ++i) {
    dir = fs::path(out) / (timestamp_utc() + "_seed" + std::to_string(seed.value) + "_" + std::to_string(i));
  }
  fs::create_directories(dir);
  return dir;
}

// Graph files given directly or found (sorted) inside directories.
std::vector<fs::path> collect_graph_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& in : inputs) {
    if (fs::is_directory(in)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(in))
        if (e.is_regular_file() && e.path().extension() == ".graph") found.push_back(e.path());
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.emplace_back(in);
    }
  }
  if (out.empty()) throw std::invalid_argument("no graph files found");
  return out;
}

void write_feature_csv(const fs::path& path, const FeatureMatrix& m) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  for (std::size_t c = 0; c < m.names.size(); ++c) os << (c ? "," : "") << m.names[c];
  os << '\n';
  for (Eigen::Index r = 0; r < m.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.values.cols(); ++c) os << (c ? "," : "") << format_real(m.values(r, c));
    os << '\n';
  }
}

std::vector<double> read_scores_csv(const fs::path& path, std::size_t n) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  std::vector<double> scores(n, 0.0);
  std::vector<char> seen(n, 0);
  std::string line;
  std::getline(is, line);  // header
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw std::runtime_error("scores csv: bad line '" + line + "'");
    const auto v = std::stoul(line.substr(0, comma));
    if (v >= n) throw std::runtime_error("scores csv: vertex out of range");
    scores[v] = std::stod(line.substr(comma + 1));
    seen[v] = 1;
  }
  for (std::size_t v = 0; v < n; ++v)
    if (!seen[v]) throw std::runtime_error("scores csv: missing vertex " + std::to_string(v));
  return scores;
}

// Flags shared by the experiment subcommands; unset flags leave the config
// file (or defaults) in place.
struct ExperimentFlags {
  std::optional<std::string> kind, features;
  std::optional<double> q, p, lr, l2, dropout, c1, c2;
  std::optional<std::size_t> n, k, graphs, folds, epochs, patience, clean_rounds;
  std::optional<std::vector<std::size_t>> hidden;
  bool no_edge_correction = false;
  bool no_clean = false;

  void add_to(CLI::App* app) {
    app->add_option("--kind", kind, "clique|dac|twoplex|biclique|densegnq");
    app->add_option("--q", q, "inner edge probability for densegnq");
    app->add_option("--n", n, "graph size");
    app->add_option("--p", p, "edge probability");
    app->add_option("--k", k, "planted subgraph size");
    app->add_option("--graphs", graphs, "graphs per experiment (default 20)");
    app->add_option("--folds", folds, "cross-validation folds (default 5)");
    app->add_option("--features", features, "degrees|motifs3|identity|both");
    app->add_option("--epochs", epochs, "maximum epochs (default 1000)");
    app->add_option("--patience", patience, "early-stopping patience (default 40)");
    app->add_option("--lr", lr, "ADAM learning rate (default 0.005)");
    app->add_option("--l2", l2, "L2 coefficient (default 0.0005)");
    app->add_option("--dropout", dropout, "dropout rate (default 0.4)");
    app->add_option("--hidden", hidden, "hidden layer widths (default 225 175 400 150)");
    app->add_option("--c1", c1, "pairwise loss coefficient");
    app->add_option("--c2", c2, "binomial loss coefficient");
    app->add_option("--clean-rounds", clean_rounds, "cleaning refinement cap (default 30)");
    app->add_flag("--no-edge-correction", no_edge_correction, "disable the (1-p)/p edge weight factor");
    app->add_flag("--no-clean", no_clean, "skip the cleaning stage");
  }

  void apply(ExperimentConfig& c) const {
    if (kind) c.kind.variant = parse_variant(*kind);
    if (q) c.kind.q = *q;
    if (n) c.n = *n;
    if (p) c.p = *p;
    if (k) c.k = *k;
    if (graphs) c.graphs = *graphs;
    if (folds) c.folds = *folds;
    if (features) c.feature_set = parse_feature_set(*features);
    if (epochs) c.train.max_epochs = *epochs;
    if (patience) c.train.patience = *patience;
    if (lr) c.train.learning_rate = *lr;
    if (l2) c.train.l2_coeff = *l2;
    if (dropout) c.train.dropout = *dropout;
    if (hidden) c.train.hidden_dims = *hidden;
    if (c1) c.train.loss_c1 = *c1;
    if (c2) c.train.loss_c2 = *c2;
    if (clean_rounds) c.clean_rounds = *clean_rounds;
    if (no_edge_correction) c.edge_correction = false;
    if (no_clean) c.run_cleaning = false;
  }
};

void write_experiment_files(const fs::path& dir, const std::string& stem, const ExperimentConfig& cfg,
                            const ExperimentResult& r) {
  write_text_file(dir / (stem + ".csv"), std::string(kSweepCsvHeader) + "\n" + sweep_csv_row(cfg, r) + "\n");
  std::ostringstream folds;
  folds << kFoldCsvHeader << '\n';
  for (const auto& f : r.folds) folds << fold_csv_row(f) << '\n';
  write_text_file(dir / (stem + "_folds.csv"), folds.str());
  std::ostringstream graphs;
  write_graph_rows(graphs, r);
  write_text_file(dir / (stem + "_graphs.csv"), graphs.str());
  std::ostringstream times;
  times << "fold,seconds\n";
  for (const auto& f : r.folds) times << f.fold << ',' << format_fixed(f.seconds, 3) << '\n';
  write_text_file(dir / (stem + "_walltime.csv"), times.str());
}

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::size_t col(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return i;
    throw std::runtime_error("csv: missing column " + name);
  }
};

CsvTable read_csv(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  auto split = [](const std::string& line) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
  };
  CsvTable t;
  std::string line;
  if (std::getline(is, line)) t.header = split(line);
  while (std::getline(is, line))
    if (!line.empty()) t.rows.push_back(split(line));
  return t;
}

// Regression and plots from a run directory's sweep.csv.
void build_report(const fs::path& dir) {
  const auto table = read_csv(dir / "sweep.csv");
  const auto c_n = table.col("n"), c_k = table.col("k"), c_fs = table.col("feature_set"),
             c_mean = table.col("mean_recovery"), c_kind = table.col("kind");
  // (kind, feature_set) -> n -> [(k, mean)]
  std::map<std::pair<std::string, std::string>, std::map<double, std::vector<std::pair<double, double>>>> curves;
  for (const auto& row : table.rows) {
    curves[{row[c_kind], row[c_fs]}][std::stod(row[c_n])].emplace_back(std::stod(row[c_k]), std::stod(row[c_mean]));
  }
  std::ostringstream reg;
  reg << kRegressionCsvHeader << '\n';
  std::vector<Series> recovery_series, threshold_series;
  for (auto& [key, by_n] : curves) {
    std::vector<std::pair<double, double>> points;
    for (auto& [n, curve] : by_n) {
      std::sort(curve.begin(), curve.end());
      recovery_series.push_back({key.first + " " + key.second + " n=" + format_real(n), curve, false});
      for (const auto& [k, mean] : curve) {
        if (mean >= kSweepCriterion) {
          points.emplace_back(n, k);
          break;
        }
      }
    }
    if (points.empty()) continue;
    const double alpha = sqrt_regression(points);
    reg << regression_csv_row(parse_feature_set(key.second), alpha, points) << '\n';
    threshold_series.push_back({key.first + " " + key.second, points, false});
    std::vector<std::pair<double, double>> fit;
    for (const auto& pt : points) fit.emplace_back(pt.first, alpha * std::sqrt(pt.first));
    threshold_series.push_back({format_fixed(alpha, 3) + " sqrt(n)", fit, true});
  }
  write_text_file(dir / "regression.csv", reg.str());
  write_text_file(dir / "recovery_vs_k.svg", line_chart_svg("Top-2k recovery", "k", "mean recovery", recovery_series));
  if (!threshold_series.empty()) {
    write_text_file(dir / "threshold_vs_n.svg", line_chart_svg("50% recovery threshold", "n", "k", threshold_series));
  }
}

std::vector<std::pair<double, double>> parse_loss_grid(const std::string& spec) {
  std::vector<std::pair<double, double>> grid;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ';')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("loss grid entries look like c1:c2");
    grid.emplace_back(std::stod(item.substr(0, colon)), std::stod(item.substr(colon + 1)));
  }
  return grid;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pygon - planted dense subgraph recovery with graph convolutional networks"};
  app.require_subcommand(1);

  std::optional<std::string> config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::size_t> threads;
  bool dump_config = false;
  app.add_option("--config", config_path, "JSON run config; flags override its values");
  app.add_option("--seed", seed, "master seed");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--threads", threads, "worker threads for fold-level parallelism");
  app.add_flag("--dump-config", dump_config, "print the resolved run config as JSON and exit");

  // generate
  auto* gen = app.add_subcommand("generate", "generate G(n,p) graphs with a planted subgraph");
  std::size_t gen_n = 500, gen_k = 20, gen_count = 20;
  double gen_p = 0.5, gen_q = 0.9;
  std::string gen_kind = "clique";
  gen->add_option("--n", gen_n, "graph size")->capture_default_str();
  gen->add_option("--p", gen_p, "edge probability")->capture_default_str();
  gen->add_option("--kind", gen_kind, "clique|dac|twoplex|biclique|densegnq")->capture_default_str();
  gen->add_option("--q", gen_q, "densegnq inner probability")->capture_default_str();
  gen->add_option("--k", gen_k, "planted size")->capture_default_str();
  gen->add_option("--count", gen_count, "number of graphs")->capture_default_str();
  gen->add_option("--seed", seed, "master seed");
  gen->add_option("--out", out_dir, "output directory");

  // features
  auto* feat = app.add_subcommand("features", "compute raw per-vertex features and cache them as CSV");
  std::vector<std::string> feat_inputs;
  std::string feat_set = "motifs3";
  feat->add_option("--input", feat_inputs, "graph files or directories")->required();
  feat->add_option("--features", feat_set, "degrees|motifs3|identity|both")->capture_default_str();
  feat->add_option("--out", out_dir, "output directory (default: next to each graph)");

  // thresholds
  auto* thr = app.add_subcommand("thresholds", "detection thresholds: exact scan and closed form, as CSV");
  std::vector<std::string> thr_kinds{"clique"};
  std::vector<std::size_t> thr_n{500};
  std::vector<double> thr_p{0.5};
  double thr_q = 0.9;
  thr->add_option("--kind", thr_kinds, "one or more kinds")->capture_default_str();
  thr->add_option("--n", thr_n, "one or more graph sizes")->capture_default_str();
  thr->add_option("--p", thr_p, "one or more edge probabilities")->capture_default_str();
  thr->add_option("--q", thr_q, "densegnq inner probability")->capture_default_str();

  // train
  auto* trn = app.add_subcommand("train", "train a model on generated graph files");
  std::vector<std::string> trn_inputs;
  std::size_t trn_eval = 0;
  std::string trn_model = "model.json";
  ExperimentFlags trn_flags;
  trn->add_option("--data", trn_inputs, "graph files or directories")->required();
  trn->add_option("--eval", trn_eval, "number of trailing graphs used for early stopping (default: a quarter)");
  trn->add_option("--model", trn_model, "checkpoint path to write")->capture_default_str();
  trn->add_option("--seed", seed, "training seed");
  trn_flags.add_to(trn);

  // predict
  auto* prd = app.add_subcommand("predict", "score the vertices of a graph with a trained model");
  std::string prd_model, prd_input;
  std::optional<std::string> prd_out;
  prd->add_option("--model", prd_model, "checkpoint")->required();
  prd->add_option("--input", prd_input, "graph file")->required();
  prd->add_option("--scores", prd_out, "write vertex,score CSV here instead of stdout");

  // clean
  auto* cln = app.add_subcommand("clean", "recover the planted set from vertex scores");
  std::string cln_scores, cln_input;
  std::optional<std::size_t> cln_k, cln_candidates;
  std::optional<std::string> cln_kind;
  std::size_t cln_rounds = kDefaultCleanRounds;
  cln->add_option("--scores", cln_scores, "vertex,score CSV")->required();
  cln->add_option("--input", cln_input, "graph file")->required();
  cln->add_option("--k", cln_k, "subgraph size (default: planted size in the file)");
  cln->add_option("--kind", cln_kind, "pattern to check (default: kind in the file, else clique)");
  cln->add_option("--candidates", cln_candidates, "candidate count (default 2k)");
  cln->add_option("--max-rounds", cln_rounds, "refinement cap")->capture_default_str();

  // xval
  auto* xv = app.add_subcommand("xval", "cross-validated recovery experiment");
  ExperimentFlags xv_flags;
  bool xv_ablate_edges = false;
  std::optional<std::string> xv_loss_grid;
  xv_flags.add_to(xv);
  xv->add_option("--seed", seed, "master seed");
  xv->add_option("--out", out_dir, "parent directory of the run directory");
  xv->add_option("--threads", threads, "worker threads");
  xv->add_option("--config", config_path, "JSON run config");
  xv->add_flag("--dump-config", dump_config, "print the resolved config and exit");
  xv->add_flag("--ablate-edge-correction", xv_ablate_edges, "run with and without the edge weight factor");
  xv->add_option("--loss-grid", xv_loss_grid, "loss ablation grid, e.g. \"0:0;1:0;0:1;1:1\"");

  // sweep
  auto* sw = app.add_subcommand("sweep", "threshold sweep over k (and optionally several n)");
  ExperimentFlags sw_flags;
  std::optional<std::size_t> sw_kmin, sw_kmax;
  std::optional<std::vector<std::size_t>> sw_nvals;
  bool sw_stop = false;
  sw_flags.add_to(sw);
  sw->add_option("--k-min", sw_kmin, "first k");
  sw->add_option("--k-max", sw_kmax, "last k (inclusive, step 1)");
  sw->add_option("--n-values", sw_nvals, "graph sizes to sweep (default: --n)");
  sw->add_flag("--stop-at-first", sw_stop, "stop each sweep at the first k reaching 50% recovery");
  sw->add_option("--seed", seed, "master seed");
  sw->add_option("--out", out_dir, "parent directory of the run directory");
  sw->add_option("--threads", threads, "worker threads");
  sw->add_option("--config", config_path, "JSON run config");
  sw->add_flag("--dump-config", dump_config, "print the resolved config and exit");

  // report
  auto* rep = app.add_subcommand("report", "regression table and SVG plots from a sweep run directory");
  std::string rep_dir;
  rep->add_option("--run", rep_dir, "run directory containing sweep.csv")->required();

  if (argc <= 1) {
    std::cerr << app.help();
    return 2;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return 2;
  }

  try {
    auto resolve = [&](const ExperimentFlags& flags) {
      RunConfig rc;
      if (config_path) rc = load_run_config(*config_path);
      flags.apply(rc.experiment);
      if (seed) rc.experiment.master_seed = Seed{*seed};
      rc.output_dir = env_out_dir(rc.output_dir);
      if (out_dir) rc.output_dir = *out_dir;
      rc.threads = env_threads(rc.threads);
      if (threads) rc.threads = *threads;
      return rc;
    };

    if (*gen) {
      const SubgraphKind kind{parse_variant(gen_kind), gen_q};
      const fs::path dir = out_dir ? fs::path(*out_dir) : fs::path(env_out_dir("dataset"));
      fs::create_directories(dir);
      const auto data = generate_dataset(gen_n, gen_p, kind, gen_k, gen_count, Seed{seed.value_or(0)});
      for (std::size_t i = 0; i < data.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof name, "graph_%04zu.graph", i);
        save_instance(dir / name, data[i]);
      }
      log_line("wrote " + std::to_string(data.size()) + " graphs to " + dir.string());
      return 0;
    }

    if (*feat) {
      const auto set = parse_feature_set(feat_set);
      for (const auto& path : collect_graph_files(feat_inputs)) {
        const auto gf = load_graph_file(path);
        const auto m = compute_features(gf.graph, set);
        fs::path dest = out_dir ? fs::path(*out_dir) / path.filename() : path;
        if (out_dir) fs::create_directories(*out_dir);
        dest.replace_extension(".features.csv");
        write_feature_csv(dest, m);
        std::cout << dest.string() << '\n';
      }
      return 0;
    }

    if (*thr) {
      std::cout << kThresholdCsvHeader << '\n';
      for (const auto& kname : thr_kinds)
        for (auto n : thr_n)
          for (auto p : thr_p) {
            ThresholdQuery q{SubgraphKind{parse_variant(kname), thr_q}, n, p};
            std::cout << threshold_csv_row(q) << '\n';
          }
      return 0;
    }

    if (*trn) {
      ExperimentConfig cfg;
      cfg.feature_set = FeatureSet::Motifs3;
      trn_flags.apply(cfg);
      const auto files = collect_graph_files(trn_inputs);
      if (files.size() < 2) throw std::invalid_argument("train: need at least two graphs (train + eval)");
      std::vector<PlantedInstance> data;
      for (const auto& f : files) data.push_back(load_graph_file(f).to_instance());
      const std::size_t n_eval = trn_eval ? trn_eval : std::max<std::size_t>(1, data.size() / 4);
      if (n_eval >= data.size()) throw std::invalid_argument("train: --eval leaves no training graphs");
      std::vector<FeatureMatrix> raw;
      for (const auto& d : data) raw.push_back(compute_features(d.graph, cfg.feature_set));
      std::optional<NormalizationStats> stats;
      const auto feats = prepare_features(raw, cfg.feature_set, &stats);
      std::vector<GraphSample> tr, ev;
      for (std::size_t i = 0; i < data.size(); ++i) {
        GraphSample s{&data[i].graph, &feats[i].values,
                      Eigen::Map<const Eigen::VectorXd>(data[i].labels.data(), static_cast<Eigen::Index>(data[i].labels.size())),
                      data[i].k()};
        (i + n_eval < data.size() ? tr : ev).push_back(std::move(s));
      }
      TrainConfig tc = cfg.train;
      tc.edge_correction = cfg.edge_correction;
      tc.seed = Seed{seed.value_or(0)};
      auto result = train(tr, ev, tc, [](std::size_t e, double tl, double el) {
        if (e % 10 == 0) log_line("epoch " + std::to_string(e) + " train=" + std::to_string(tl) + " eval=" + std::to_string(el));
      });
      save_checkpoint(trn_model, Checkpoint{result.model, cfg.feature_set, stats, tc});
      nlohmann::ordered_json summary;
      summary["model"] = trn_model;
      summary["epochs_run"] = result.history.epochs_run;
      summary["best_epoch"] = result.history.best_epoch;
      summary["best_eval_loss"] = result.history.eval_loss.at(result.history.best_epoch - 1);
      summary["beta"] = result.model.beta;
      summary["gamma"] = result.model.gamma;
      std::cout << summary.dump() << '\n';
      return 0;
    }

    if (*prd) {
      const auto ck = load_checkpoint(prd_model);
      const auto gf = load_graph_file(prd_input);
      auto raw = compute_features(gf.graph, ck.feature_set);
      const auto x = ck.normalization ? apply_normalization(raw, *ck.normalization) : raw;
      const auto scores = predict(ck.model, gf.graph, x.values);
      std::ostringstream os;
      os << "vertex,score\n";
      for (Eigen::Index v = 0; v < scores.size(); ++v) os << v << ',' << format_real(scores(v)) << '\n';
      if (prd_out) write_text_file(*prd_out, os.str());
      else std::cout << os.str();
      return 0;
    }

    if (*cln) {
      const auto gf = load_graph_file(cln_input);
      const auto scores = read_scores_csv(cln_scores, gf.graph.n());
      const std::size_t k = cln_k ? *cln_k : gf.planted.size();
      if (k == 0) throw std::invalid_argument("clean: k unknown (pass --k)");
      SubgraphKind kind = gf.kind.value_or(SubgraphKind{});
      if (cln_kind) kind.variant = parse_variant(*cln_kind);
      const auto cands = top_candidates(scores, cln_candidates.value_or(2 * k));
      const auto r = clean(gf.graph, cands, k, kind, cln_rounds);
      nlohmann::ordered_json out;
      out["vertices"] = r.vertices;
      out["success"] = r.success;
      out["rounds"] = r.rounds;
      if (!gf.planted.empty()) out["matches_planted"] = r.vertices == gf.planted;
      else out["matches_planted"] = nullptr;
      std::cout << out.dump() << '\n';
      return 0;
    }

    if (*xv) {
      const RunConfig rc = resolve(xv_flags);
      if (dump_config) {
        std::cout << to_json(rc).dump(2) << '\n';
        return 0;
      }
      const auto dir = make_run_dir(rc.output_dir, rc.experiment.master_seed);
      write_text_file(dir / "config.json", to_json(rc).dump(2) + "\n");
      RunOptions opts{rc.threads, log_line};
      if (xv_loss_grid) {
        const auto grid = parse_loss_grid(*xv_loss_grid);
        const auto points = ablation_loss(rc.experiment, grid, opts);
        std::ostringstream os;
        os << "c1,c2,mean_recovery,std_recovery,clean_success_rate,seed\n";
        for (const auto& pt : points) {
          os << format_real(pt.c1) << ',' << format_real(pt.c2) << ',' << format_fixed(pt.result.mean_recovery) << ','
             << format_fixed(pt.result.std_recovery) << ',' << format_fixed(pt.result.clean_success_rate) << ','
             << pt.result.master_seed.value << '\n';
        }
        write_text_file(dir / "loss_ablation.csv", os.str());
        std::cout << os.str();
      } else if (xv_ablate_edges) {
        const auto ab = ablation_edge_correction(rc.experiment, opts);
        ExperimentConfig on = rc.experiment, off = rc.experiment;
        on.edge_correction = true;
        off.edge_correction = false;
        write_experiment_files(dir, "corrected", on, ab.corrected);
        write_experiment_files(dir, "uncorrected", off, ab.uncorrected);
        std::ostringstream os;
        os << "arm," << kSweepCsvHeader << '\n'
           << "corrected," << sweep_csv_row(on, ab.corrected) << '\n'
           << "uncorrected," << sweep_csv_row(off, ab.uncorrected) << '\n';
        write_text_file(dir / "edge_ablation.csv", os.str());
        std::cout << os.str();
      } else {
        const auto r = run_cross_validation(rc.experiment, opts);
        write_experiment_files(dir, "results", rc.experiment, r);
        std::cout << kSweepCsvHeader << '\n' << sweep_csv_row(rc.experiment, r) << '\n';
      }
      log_line("run directory: " + dir.string());
      return 0;
    }

    if (*sw) {
      RunConfig rc = resolve(sw_flags);
      if (sw_kmin) rc.sweep.k_min = *sw_kmin;
      if (sw_kmax) rc.sweep.k_max = *sw_kmax;
      if (sw_nvals) rc.sweep.n_values = *sw_nvals;
      if (sw_stop) rc.sweep.stop_at_first = true;
      if (dump_config) {
        std::cout << to_json(rc).dump(2) << '\n';
        return 0;
      }
      if (rc.sweep.k_min == 0 || rc.sweep.k_max < rc.sweep.k_min) throw std::invalid_argument("sweep: need 1 <= k-min <= k-max");
      std::vector<std::size_t> ks;
      for (auto k = rc.sweep.k_min; k <= rc.sweep.k_max; ++k) ks.push_back(k);
      std::vector<std::size_t> ns = rc.sweep.n_values.empty() ? std::vector<std::size_t>{rc.experiment.n} : rc.sweep.n_values;
      const auto dir = make_run_dir(rc.output_dir, rc.experiment.master_seed);
      write_text_file(dir / "config.json", to_json(rc).dump(2) + "\n");
      std::ostringstream csv;
      csv << kSweepCsvHeader << '\n';
      std::cout << kSweepCsvHeader << '\n';
      for (auto n : ns) {
        ExperimentConfig cfg = rc.experiment;
        cfg.n = n;
        const auto sr = threshold_sweep(cfg, ks, RunOptions{rc.threads, log_line}, rc.sweep.stop_at_first);
        for (const auto& pt : sr.curve) {
          ExperimentConfig at = cfg;
          at.k = pt.k;
          const auto row = sweep_csv_row(at, pt.result);
          csv << row << '\n';
          std::cout << row << std::endl;
        }
        log_line("n=" + std::to_string(n) + ": threshold " + (sr.threshold ? std::to_string(*sr.threshold) : std::string("above range")));
      }
      write_text_file(dir / "sweep.csv", csv.str());
      build_report(dir);
      log_line("run directory: " + dir.string());
      return 0;
    }

    if (*rep) {
      build_report(rep_dir);
      std::cout << std::ifstream(fs::path(rep_dir) / "regression.csv").rdbuf();
      return 0;
    }
  } catch (const std::exception& e) {
    nlohmann::json err{{"error", e.what()}};
    std::cerr << err.dump() << '\n';
    return 1;
  }
  return 0;
}
