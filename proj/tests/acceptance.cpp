// Acceptance suite. `acceptance --criterion N` runs one criterion; with no
// arguments all nine run in order. Each prints one PASS/FAIL line; the exit
// code is non-zero if any ran criterion fails.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pygon/pygon.hpp"

using namespace pygon;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

void progress(const std::string& s) { std::cerr << "  " << s << std::endl; }

RunOptions quiet_options() { return RunOptions{1, progress}; }

std::string fmt(double x, int digits = 4) { return format_fixed(x, digits); }

// 1. Analytic gradients vs central finite differences.
Outcome gradient_oracle() {
  double worst = 0.0;
  for (std::uint64_t inst = 0; inst < 20; ++inst) {
    Rng rng(derive_seed(Seed{101}, inst));
    const bool directed = inst % 4 == 3;
    const double p = rng.uniform(0.3, 0.7);
    const SubgraphKind kind{directed ? SubgraphVariant::DAC : SubgraphVariant::Clique, 0.0};
    const auto pi = generate_instance(16, p, kind, 4, Seed{rng.next()}, 0);
    Eigen::MatrixXd x(16, 5);
    for (Eigen::Index c = 0; c < x.cols(); ++c)
      for (Eigen::Index r = 0; r < x.rows(); ++r) x(r, c) = rng.uniform(-1.0, 1.0);
    PygonModel model = init_model(5, {8, 6}, p, 0.4, inst % 2 == 0, Seed{rng.next()});
    model.beta = rng.uniform(-0.5, 0.5);
    model.gamma = rng.uniform(-1.5, 0.5);
    const Eigen::VectorXd labels = Eigen::Map<const Eigen::VectorXd>(pi.labels.data(), 16);
    const Seed drop{rng.next()};
    for (const LossWeights w : {LossWeights{0.0, 0.0}, LossWeights{1.0, 1.0}}) {
      const auto adj = build_modified_adjacency(pi.graph, model);
      const auto fwd = forward(model, adj, x, true, drop);
      const auto analytic = backward(model, adj, fwd.cache, labels, pi.graph, 4, w);
      const auto numeric = oracle::finite_difference_gradients(model, pi.graph, x, labels, 4, w, true, drop);
      worst = std::max(worst, oracle::max_gradient_error(analytic, numeric));
    }
  }
  return {worst < 1e-4, "max relative error " + format_real(worst) + " (< 1e-4)"};
}

// 2. motif3_features vs brute force.
Outcome motif_oracle() {
  std::size_t mismatches = 0;
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(derive_seed(Seed{202}, i));
    const std::size_t n = 3 + rng.below(38);
    const double p = rng.uniform(0.05, 0.95);
    const Graph g = gen_gnp(n, p, i % 2 == 1, Seed{rng.next()});
    if (motif3_features(g).values != oracle::naive_motif3(g)) ++mismatches;
  }
  return {mismatches == 0, std::to_string(mismatches) + " of 50 graphs differ"};
}

std::vector<ThresholdQuery> threshold_grid() {
  std::vector<ThresholdQuery> out;
  for (auto v : {SubgraphVariant::Clique, SubgraphVariant::DAC, SubgraphVariant::TwoPlex, SubgraphVariant::Biclique,
                 SubgraphVariant::DenseGnq}) {
    for (std::size_t n = 128; n <= 8192; n *= 2) {
      for (double p : {0.3, 0.4, 0.5, 0.6}) out.push_back({SubgraphKind{v, 0.9}, n, p});
    }
  }
  return out;
}

// 3. Exact scan vs closed form.
Outcome threshold_consistency() {
  std::size_t bad = 0;
  long worst = 0;
  std::string worst_case;
  const auto grid = threshold_grid();
  for (const auto& q : grid) {
    const long scan = static_cast<long>(threshold_scan(q));
    const long closed = std::lround(closed_form_threshold(q));
    const long diff = std::labs(scan - closed);
    if (diff > 3) ++bad;
    if (diff > worst) {
      worst = diff;
      worst_case = std::string(to_string(q.kind.variant)) + " n=" + std::to_string(q.n) + " p=" + format_real(q.p) +
                   " scan=" + std::to_string(scan) + " closed=" + std::to_string(closed);
    }
  }
  return {bad == 0, std::to_string(bad) + " of " + std::to_string(grid.size()) + " cases exceed 3; worst |diff|=" +
                        std::to_string(worst) + " (" + worst_case + ")"};
}

ExperimentConfig base_config(Seed seed) {
  ExperimentConfig c;
  c.n = 256;
  c.p = 0.5;
  c.graphs = 20;
  c.folds = 5;
  c.master_seed = seed;
  return c;
}

ExperimentConfig easy_regime_config() {
  auto c = base_config(Seed{4});
  c.k = 48;
  c.feature_set = FeatureSet::Degrees;
  return c;
}

Outcome recovery_outcome(const ExperimentResult& r, double bar) {
  return {r.mean_recovery >= bar, "mean recovery " + fmt(r.mean_recovery) + " (>= " + fmt(bar, 2) + "), std " +
                                      fmt(r.std_recovery) + ", clean success " + fmt(r.clean_success_rate, 2)};
}

// 4. Easy regime: clique k = 48 with degree features.
Outcome easy_regime() { return recovery_outcome(run_cross_validation(easy_regime_config(), quiet_options()), 0.95); }

// 5. Harder regime: clique k = 22, default pipeline.
Outcome hard_regime() {
  auto c = base_config(Seed{5});
  c.k = 22;
  return recovery_outcome(run_cross_validation(c, quiet_options()), 0.5);
}

// 6. Cleaning from planted set plus 20 random decoys.
Outcome cleaning_oracle() {
  std::size_t ok = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    const auto pi = generate_instance(500, 0.5, SubgraphKind{}, 20, Seed{606}, t);
    std::vector<char> in_planted(500, 0);
    for (auto v : pi.planted) in_planted[v] = 1;
    std::vector<Vertex> others;
    for (Vertex v = 0; v < 500; ++v)
      if (!in_planted[v]) others.push_back(v);
    Rng rng(derive_seed(Seed{607}, t));
    rng.shuffle(std::span<Vertex>(others));
    CandidateSet cands;
    cands.vertices = pi.planted;
    cands.vertices.insert(cands.vertices.end(), others.begin(), others.begin() + 20);
    rng.shuffle(std::span<Vertex>(cands.vertices));
    const auto r = clean(pi.graph, cands, 20, pi.kind);
    if (r.success && r.vertices == pi.planted) ++ok;
  }
  const double rate = static_cast<double>(ok) / 50.0;
  return {rate >= 0.9, "exact recovery in " + std::to_string(ok) + "/50 trials (>= 45)"};
}

// 7. Edge-weight correction on vs off at p = 0.35.
Outcome edge_correction() {
  auto c = base_config(Seed{7});
  c.p = 0.35;
  c.k = 48;
  const auto ab = ablation_edge_correction(c, quiet_options());
  const double gap = ab.corrected.mean_recovery - ab.uncorrected.mean_recovery;
  return {gap >= 0.20, "corrected " + fmt(ab.corrected.mean_recovery) + ", uncorrected " +
                           fmt(ab.uncorrected.mean_recovery) + ", gap " + fmt(gap) + " (>= 0.20)"};
}

// 8. DAC (p = 0.5) and biclique (p = 0.4), only the kind changes.
Outcome non_clique() {
  auto dac = base_config(Seed{8});
  dac.k = 48;
  dac.kind = SubgraphKind{SubgraphVariant::DAC, 0.0};
  auto bic = dac;
  bic.kind = SubgraphKind{SubgraphVariant::Biclique, 0.0};
  bic.p = 0.4;
  const auto rd = run_cross_validation(dac, quiet_options());
  const auto rb = run_cross_validation(bic, quiet_options());
  return {rd.mean_recovery >= 0.8 && rb.mean_recovery >= 0.8,
          "dac " + fmt(rd.mean_recovery) + ", biclique " + fmt(rb.mean_recovery) + " (>= 0.80 each)"};
}

std::string experiment_csv(const ExperimentConfig& cfg, const ExperimentResult& r) {
  std::ostringstream os;
  os << kSweepCsvHeader << '\n' << sweep_csv_row(cfg, r) << '\n' << kFoldCsvHeader << '\n';
  for (const auto& f : r.folds) os << fold_csv_row(f) << '\n';
  write_graph_rows(os, r);
  return os.str();
}

std::string threshold_csv() {
  std::ostringstream os;
  os << kThresholdCsvHeader << '\n';
  for (const auto& q : threshold_grid()) os << threshold_csv_row(q) << '\n';
  return os.str();
}

// 9. Same seed, single thread: byte-identical CSV for criteria 3 and 4.
Outcome determinism() {
  const auto cfg = easy_regime_config();
  const auto a = experiment_csv(cfg, run_cross_validation(cfg, quiet_options()));
  const auto b = experiment_csv(cfg, run_cross_validation(cfg, quiet_options()));
  const bool exp_same = a == b;
  const bool thr_same = threshold_csv() == threshold_csv();
  return {exp_same && thr_same, std::string("experiment csv ") + (exp_same ? "identical" : "differs") + " (" +
                                    std::to_string(a.size()) + " bytes), threshold csv " +
                                    (thr_same ? "identical" : "differs")};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> all{
      {1, "gradient oracle", gradient_oracle},
      {2, "motif oracle", motif_oracle},
      {3, "threshold consistency", threshold_consistency},
      {4, "easy-regime recovery", easy_regime},
      {5, "hard-regime recovery", hard_regime},
      {6, "cleaning oracle", cleaning_oracle},
      {7, "edge-correction ablation", edge_correction},
      {8, "non-clique generality", non_clique},
      {9, "determinism", determinism},
  };
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      selected.push_back(std::atoi(argv[++i]));
    } else {
      std::cerr << "usage: acceptance [--criterion N]...\n";
      return 2;
    }
  }
  if (selected.empty())
    for (const auto& c : all) selected.push_back(c.id);

  int failures = 0;
  for (int id : selected) {
    if (id < 1 || id > static_cast<int>(all.size())) {
      std::cerr << "unknown criterion " << id << '\n';
      return 2;
    }
    const auto& c = all[static_cast<std::size_t>(id - 1)];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %d %-26s %s  %s  [%.1f s]\n", c.id, c.name, o.pass ? "PASS" : "FAIL", o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
