#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "pygon/cleaning.hpp"
#include "pygon/features.hpp"
#include "pygon/planting.hpp"
#include "pygon/train.hpp"

namespace pygon {

enum class FeatureSet { Degrees, Motifs3, Identity, Both };

inline std::string_view to_string(FeatureSet f) {
  switch (f) {
    case FeatureSet::Degrees: return "degrees";
    case FeatureSet::Motifs3: return "motifs3";
    case FeatureSet::Identity: return "identity";
    case FeatureSet::Both: return "both";
  }
  return "unknown";
}

inline FeatureSet parse_feature_set(std::string_view s) {
  for (auto f : {FeatureSet::Degrees, FeatureSet::Motifs3, FeatureSet::Identity, FeatureSet::Both})
    if (to_string(f) == s) return f;
  throw std::invalid_argument("unknown feature set '" + std::string(s) + "' (expected degrees|motifs3|identity|both)");
}

inline FeatureMatrix compute_features(const Graph& g, FeatureSet set) {
  switch (set) {
    case FeatureSet::Degrees: return degree_features(g);
    case FeatureSet::Motifs3: return motif3_features(g);
    case FeatureSet::Identity: return identity_features(g.n());
    case FeatureSet::Both: return concat_features(degree_features(g), motif3_features(g));
  }
  throw std::invalid_argument("compute_features: bad feature set");
}

// Raw features for every graph, then (except identity) joint normalization.
// Returns the normalized matrices; `stats` receives the pooled statistics.
inline std::vector<FeatureMatrix> prepare_features(std::span<const FeatureMatrix> raw, FeatureSet set,
                                                   std::optional<NormalizationStats>* stats = nullptr) {
  if (set == FeatureSet::Identity) {
    if (stats) stats->reset();
    return {raw.begin(), raw.end()};
  }
  auto fitted = fit_normalization(raw);
  std::vector<FeatureMatrix> out;
  out.reserve(raw.size());
  for (const auto& m : raw) out.push_back(apply_normalization(m, fitted));
  if (stats) *stats = std::move(fitted);
  return out;
}

// Runs fn(i) for i in [0, count) on up to `threads` workers. The first
// exception thrown by any task is rethrown after all workers join.
inline void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  threads = std::max<std::size_t>(1, std::min(threads, count));
  if (threads == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

// |top-2k(scores) ∩ planted| / k
inline double recovery_metric(std::span<const double> scores, std::span<const Vertex> planted, std::size_t k) {
  if (planted.size() != k) throw std::invalid_argument("recovery_metric: |planted| must equal k");
  if (2 * k > scores.size()) throw std::invalid_argument("recovery_metric: 2k exceeds n");
  auto top = top_indices(scores, 2 * k);
  std::sort(top.begin(), top.end());
  std::size_t hit = 0;
  for (auto v : planted) hit += std::binary_search(top.begin(), top.end(), v) ? 1 : 0;
  return static_cast<double>(hit) / static_cast<double>(k);
}

struct ExperimentConfig {
  SubgraphKind kind;
  std::size_t n = 256;
  double p = 0.5;
  std::size_t k = 48;
  std::size_t graphs = 20;
  std::size_t folds = 5;
  FeatureSet feature_set = FeatureSet::Motifs3;
  TrainConfig train;
  Seed master_seed{0};
  bool edge_correction = true;
  bool run_cleaning = true;
  std::size_t clean_rounds = kDefaultCleanRounds;

  void validate() const {
    if (folds < 3) throw std::invalid_argument("experiment: need at least 3 folds (train/eval/test)");
    if (graphs == 0 || graphs % folds != 0) throw std::invalid_argument("experiment: graphs must be a positive multiple of folds");
    if (2 * k > n) throw std::invalid_argument("experiment: 2k must not exceed n");
    if (k < 1) throw std::invalid_argument("experiment: k must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("experiment: need 0 < p < 1");
  }
};

struct FoldResult {
  std::size_t fold = 0;
  std::vector<std::size_t> train_graphs, eval_graphs, test_graphs;
  double beta = 0.0;
  double gamma = 0.0;
  std::size_t best_epoch = 0;
  std::size_t epochs_run = 0;
  double best_eval_loss = 0.0;
  double seconds = 0.0;
  Seed train_seed;
};

struct ExperimentResult {
  std::vector<double> recovery;   // per graph, from the fold where it was the test graph
  std::vector<char> clean_success;  // per graph (empty when cleaning is off)
  std::vector<FoldResult> folds;
  double mean_recovery = 0.0;
  double std_recovery = 0.0;
  double median_recovery = 0.0;
  double clean_success_rate = 0.0;
  Seed master_seed;
};

inline double mean_of(std::span<const double> v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1 denominator); 0 for fewer than 2 values.
inline double stddev_of(std::span<const double> v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

inline double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto h = v.size() / 2;
  return v.size() % 2 ? v[h] : 0.5 * (v[h - 1] + v[h]);
}

struct RunOptions {
  std::size_t threads = 1;
  std::function<void(const std::string&)> log;  // progress lines; may be empty
};

// Fold assignment: graph i belongs to fold i / (graphs / folds). Rotation r
// tests on fold r, evaluates on fold r + 1 (mod folds) and trains on the rest.
inline FoldResult fold_split(const ExperimentConfig& cfg, std::size_t r) {
  const std::size_t per = cfg.graphs / cfg.folds;
  FoldResult f;
  f.fold = r;
  const std::size_t eval = (r + 1) % cfg.folds;
  for (std::size_t i = 0; i < cfg.graphs; ++i) {
    const std::size_t fold = i / per;
    if (fold == r) f.test_graphs.push_back(i);
    else if (fold == eval) f.eval_graphs.push_back(i);
    else f.train_graphs.push_back(i);
  }
  return f;
}

inline Seed dataset_seed(const ExperimentConfig& cfg) { return derive_seed(cfg.master_seed, 0); }
inline Seed fold_seed(const ExperimentConfig& cfg, std::size_t r) { return derive_seed(cfg.master_seed, 1, r); }

// Generates the dataset once, trains one model per fold rotation and scores
// every graph exactly once as a test graph.
inline ExperimentResult run_cross_validation(const ExperimentConfig& cfg, const RunOptions& opts = {}) {
  cfg.validate();
  auto log = [&](const std::string& s) {
    if (opts.log) opts.log(s);
  };

  const auto data = generate_dataset(cfg.n, cfg.p, cfg.kind, cfg.k, cfg.graphs, dataset_seed(cfg));
  std::vector<FeatureMatrix> raw(data.size());
  parallel_for(data.size(), opts.threads, [&](std::size_t i) { raw[i] = compute_features(data[i].graph, cfg.feature_set); });
  const auto feats = prepare_features(raw, cfg.feature_set);
  raw.clear();

  std::vector<GraphSample> samples;
  samples.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    GraphSample s;
    s.graph = &data[i].graph;
    s.features = &feats[i].values;
    s.labels = Eigen::Map<const Eigen::VectorXd>(data[i].labels.data(), static_cast<Eigen::Index>(data[i].labels.size()));
    s.k = cfg.k;
    samples.push_back(std::move(s));
  }

  ExperimentResult result;
  result.master_seed = cfg.master_seed;
  result.recovery.assign(cfg.graphs, 0.0);
  if (cfg.run_cleaning) result.clean_success.assign(cfg.graphs, 0);
  result.folds.resize(cfg.folds);

  parallel_for(cfg.folds, opts.threads, [&](std::size_t r) {
    const auto t0 = std::chrono::steady_clock::now();
    FoldResult f = fold_split(cfg, r);
    std::vector<GraphSample> tr, ev;
    for (auto i : f.train_graphs) tr.push_back(samples[i]);
    for (auto i : f.eval_graphs) ev.push_back(samples[i]);
    TrainConfig tc = cfg.train;
    tc.edge_correction = cfg.edge_correction;
    tc.seed = fold_seed(cfg, r);
    f.train_seed = tc.seed;
    auto trained = train(tr, ev, tc);
    f.beta = trained.model.beta;
    f.gamma = trained.model.gamma;
    f.best_epoch = trained.history.best_epoch;
    f.epochs_run = trained.history.epochs_run;
    f.best_eval_loss = trained.history.eval_loss.at(f.best_epoch - 1);
    for (auto i : f.test_graphs) {
      const Eigen::VectorXd scores = predict(trained.model, data[i].graph, feats[i].values);
      const std::span<const double> sv(scores.data(), static_cast<std::size_t>(scores.size()));
      result.recovery[i] = recovery_metric(sv, data[i].planted, cfg.k);
      if (cfg.run_cleaning) {
        const auto cands = top_candidates(sv, 2 * cfg.k);
        const auto cleaned = clean(data[i].graph, cands, cfg.k, cfg.kind, cfg.clean_rounds);
        result.clean_success[i] = cleaned.success && cleaned.vertices == data[i].planted;
      }
    }
    f.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    double fold_mean = 0.0;
    for (auto i : f.test_graphs) fold_mean += result.recovery[i];
    fold_mean /= static_cast<double>(f.test_graphs.size());
    log("fold " + std::to_string(r + 1) + "/" + std::to_string(cfg.folds) + ": epochs=" +
        std::to_string(f.epochs_run) + " best=" + std::to_string(f.best_epoch) +
        " recovery=" + std::to_string(fold_mean) + " (" + std::to_string(f.seconds) + " s)");
    result.folds[r] = std::move(f);
  });

  result.mean_recovery = mean_of(result.recovery);
  result.std_recovery = stddev_of(result.recovery);
  result.median_recovery = median_of(result.recovery);
  if (cfg.run_cleaning) {
    double ok = 0.0;
    for (auto c : result.clean_success) ok += c ? 1.0 : 0.0;
    result.clean_success_rate = ok / static_cast<double>(cfg.graphs);
  }
  return result;
}

inline constexpr double kSweepCriterion = 0.5;

struct SweepPoint {
  std::size_t k = 0;
  ExperimentResult result;
};

struct SweepResult {
  std::optional<std::size_t> threshold;  // empty: criterion not met in range
  std::vector<SweepPoint> curve;
};

// Cross-validates each k (ascending) and reports the first with mean
// recovery >= 0.5. With stop_at_first the curve ends at that point.
inline SweepResult threshold_sweep(const ExperimentConfig& base, std::span<const std::size_t> k_values,
                                   const RunOptions& opts = {}, bool stop_at_first = false) {
  if (k_values.empty()) throw std::invalid_argument("threshold_sweep: empty k range");
  if (!std::is_sorted(k_values.begin(), k_values.end())) throw std::invalid_argument("threshold_sweep: k range must be ascending");
  SweepResult out;
  for (auto k : k_values) {
    ExperimentConfig cfg = base;
    cfg.k = k;
    if (opts.log) opts.log("sweep: k=" + std::to_string(k));
    auto r = run_cross_validation(cfg, opts);
    const bool hit = r.mean_recovery >= kSweepCriterion;
    out.curve.push_back({k, std::move(r)});
    if (hit && !out.threshold) {
      out.threshold = k;
      if (stop_at_first) break;
    }
  }
  return out;
}

// Least-squares alpha for k = alpha * sqrt(n): sum(k sqrt(n)) / sum(n).
inline double sqrt_regression(std::span<const std::pair<double, double>> points) {
  if (points.empty()) throw std::invalid_argument("sqrt_regression: no points");
  double num = 0.0, den = 0.0;
  for (const auto& [n, k] : points) {
    num += k * std::sqrt(n);
    den += n;
  }
  return num / den;
}

struct EdgeCorrectionAblation {
  ExperimentResult corrected;
  ExperimentResult uncorrected;
};

// Two cross-validations on the same dataset, differing only in the edge
// weight correction.
inline EdgeCorrectionAblation ablation_edge_correction(ExperimentConfig cfg, const RunOptions& opts = {}) {
  EdgeCorrectionAblation out;
  cfg.edge_correction = true;
  out.corrected = run_cross_validation(cfg, opts);
  cfg.edge_correction = false;
  out.uncorrected = run_cross_validation(cfg, opts);
  return out;
}

struct LossAblationPoint {
  double c1 = 0.0;
  double c2 = 0.0;
  ExperimentResult result;
};

inline std::vector<LossAblationPoint> ablation_loss(const ExperimentConfig& base,
                                                    std::span<const std::pair<double, double>> grid,
                                                    const RunOptions& opts = {}) {
  if (grid.empty()) throw std::invalid_argument("ablation_loss: empty grid");
  std::vector<LossAblationPoint> out;
  for (const auto& [c1, c2] : grid) {
    ExperimentConfig cfg = base;
    cfg.train.loss_c1 = c1;
    cfg.train.loss_c2 = c2;
    out.push_back({c1, c2, run_cross_validation(cfg, opts)});
  }
  return out;
}

}  // namespace pygon
