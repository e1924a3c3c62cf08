#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "pygon/graph.hpp"
#include "pygon/model.hpp"
#include "pygon/rng.hpp"

namespace pygon {

struct TrainConfig {
  std::size_t max_epochs = 1000;
  std::size_t patience = 40;
  double learning_rate = 0.005;
  double l2_coeff = 0.0005;
  double dropout = 0.4;
  std::vector<std::size_t> hidden_dims{225, 175, 400, 150};
  double loss_c1 = 0.0;
  double loss_c2 = 0.0;
  bool edge_correction = true;
  Seed seed{0};

  LossWeights loss_weights() const { return {loss_c1, loss_c2}; }
};

// ---------------------------------------------------------------------------
// ADAM (beta1 = 0.9, beta2 = 0.999, eps = 1e-8). The L2 term is added to the
// layer-weight gradients before the moment update; beta and gamma are not
// decayed.

struct AdamState {
  std::vector<Eigen::MatrixXd> m;
  std::vector<Eigen::MatrixXd> v;
  double m_beta = 0.0, v_beta = 0.0;
  double m_gamma = 0.0, v_gamma = 0.0;
  std::uint64_t step = 0;

  static AdamState zeros_like(const PygonModel& model) {
    AdamState s;
    for (const auto& w : model.weights) {
      s.m.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
      s.v.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
    }
    return s;
  }
};

inline constexpr double kAdamBeta1 = 0.9;
inline constexpr double kAdamBeta2 = 0.999;
inline constexpr double kAdamEps = 1e-8;

// One moment update of a scalar parameter; `step` is the 1-based step count.
inline void adam_update(double& param, double grad, double& m, double& v, std::uint64_t step, double lr) {
  m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * grad;
  v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * grad * grad;
  const double m_hat = m / (1.0 - std::pow(kAdamBeta1, static_cast<double>(step)));
  const double v_hat = v / (1.0 - std::pow(kAdamBeta2, static_cast<double>(step)));
  param -= lr * m_hat / (std::sqrt(v_hat) + kAdamEps);
}

inline void adam_step(PygonModel& model, const Gradients& grads, AdamState& state, double lr, double l2) {
  if (grads.weights.size() != model.layers() || state.m.size() != model.layers()) {
    throw std::invalid_argument("adam_step: layer count mismatch");
  }
  ++state.step;
  const double bc1 = 1.0 - std::pow(kAdamBeta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(state.step));
  for (std::size_t l = 0; l < model.layers(); ++l) {
    auto w = model.weights[l].array();
    auto m = state.m[l].array();
    auto v = state.v[l].array();
    const Eigen::ArrayXXd g = grads.weights[l].array() + l2 * w;
    m = kAdamBeta1 * m + (1.0 - kAdamBeta1) * g;
    v = kAdamBeta2 * v + (1.0 - kAdamBeta2) * g.square();
    w -= lr * (m / bc1) / ((v / bc2).sqrt() + kAdamEps);
  }
  adam_update(model.beta, grads.beta, state.m_beta, state.v_beta, state.step, lr);
  adam_update(model.gamma, grads.gamma, state.m_gamma, state.v_gamma, state.step, lr);
  ++model.version;
}

// ---------------------------------------------------------------------------

// Tracks the best evaluation loss and stops after `patience` epochs without
// a strict improvement.
class EarlyStopping {
 public:
  explicit EarlyStopping(std::size_t patience) : patience_(patience) {}

  // Returns true when `loss` is a new minimum.
  bool observe(double loss) {
    ++epochs_;
    if (epochs_ == 1 || loss < best_loss_) {
      best_loss_ = loss;
      best_epoch_ = epochs_;
      since_best_ = 0;
      return true;
    }
    ++since_best_;
    return false;
  }

  bool should_stop() const { return since_best_ >= patience_; }
  std::size_t best_epoch() const { return best_epoch_; }
  double best_loss() const { return best_loss_; }
  std::size_t epochs() const { return epochs_; }

 private:
  std::size_t patience_;
  std::size_t epochs_ = 0;
  std::size_t best_epoch_ = 0;
  std::size_t since_best_ = 0;
  double best_loss_ = std::numeric_limits<double>::infinity();
};

// One training or evaluation graph with precomputed, normalized features.
struct GraphSample {
  const Graph* graph = nullptr;
  const Eigen::MatrixXd* features = nullptr;
  Eigen::VectorXd labels;
  std::size_t k = 0;
};

struct TrainHistory {
  std::vector<double> train_loss;  // mean over the epoch's update steps
  std::vector<double> eval_loss;
  std::size_t best_epoch = 0;  // 1-based
  std::size_t epochs_run = 0;
  bool stopped_early = false;
};

struct TrainResult {
  PygonModel model;
  TrainHistory history;
};

using EpochCallback = std::function<void(std::size_t epoch, double train_loss, double eval_loss)>;

inline double evaluate_loss(const PygonModel& model, const GraphSample& s, LossWeights w) {
  const auto adj = build_modified_adjacency(*s.graph, model);
  const auto fwd = forward(model, adj, *s.features, false, Seed{0});
  return extended_loss(fwd.scores, s.labels, *s.graph, s.k, w);
}

inline double mean_eval_loss(const PygonModel& model, std::span<const GraphSample> eval, LossWeights w) {
  double total = 0.0;
  for (const auto& s : eval) total += evaluate_loss(model, s, w);
  return total / static_cast<double>(eval.size());
}

// Epoch loop: shuffle the training graphs, one ADAM step per graph, then the
// mean evaluation loss (dropout off). Returns the snapshot of the epoch with
// the lowest evaluation loss.
inline TrainResult train(std::span<const GraphSample> train_set, std::span<const GraphSample> eval_set,
                         const TrainConfig& config, const EpochCallback& on_epoch = {}) {
  if (train_set.empty()) throw std::invalid_argument("train: empty training set");
  if (eval_set.empty()) throw std::invalid_argument("train: empty evaluation set");
  const auto& ref = train_set.front();
  auto check = [&](const GraphSample& s) {
    if (s.graph == nullptr || s.features == nullptr) throw std::invalid_argument("train: incomplete sample");
    if (s.graph->n() != ref.graph->n() || s.graph->p() != ref.graph->p() || s.k != ref.k ||
        s.features->cols() != ref.features->cols()) {
      throw std::invalid_argument("train: all graphs must share n, p, k and feature width");
    }
  };
  for (const auto& s : train_set) check(s);
  for (const auto& s : eval_set) check(s);

  PygonModel model = init_model(static_cast<std::size_t>(ref.features->cols()), config.hidden_dims, ref.graph->p(),
                                config.dropout, config.edge_correction, derive_seed(config.seed, 0));
  AdamState adam = AdamState::zeros_like(model);
  Rng order_rng(derive_seed(config.seed, 1));
  const Seed dropout_root = derive_seed(config.seed, 2);
  const LossWeights lw = config.loss_weights();

  std::vector<std::size_t> order(train_set.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  EarlyStopping stopper(config.patience);
  TrainResult result{model, {}};
  std::uint64_t step = 0;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    order_rng.shuffle(std::span<std::size_t>(order));
    double train_total = 0.0;
    for (auto idx : order) {
      const auto& s = train_set[idx];
      const auto adj = build_modified_adjacency(*s.graph, model);
      const auto fwd = forward(model, adj, *s.features, true, derive_seed(dropout_root, step++));
      train_total += extended_loss(fwd.scores, s.labels, *s.graph, s.k, lw);
      const auto grads = backward(model, adj, fwd.cache, s.labels, *s.graph, s.k, lw);
      adam_step(model, grads, adam, config.learning_rate, config.l2_coeff);
    }
    const double train_loss = train_total / static_cast<double>(train_set.size());
    const double eval_loss = mean_eval_loss(model, eval_set, lw);
    result.history.train_loss.push_back(train_loss);
    result.history.eval_loss.push_back(eval_loss);
    if (stopper.observe(eval_loss)) result.model = model;
    if (on_epoch) on_epoch(epoch, train_loss, eval_loss);
    if (stopper.should_stop()) {
      result.history.stopped_early = true;
      break;
    }
  }
  result.history.best_epoch = stopper.best_epoch();
  result.history.epochs_run = stopper.epochs();
  return result;
}

// Per-vertex scores in (0, 1), dropout off.
inline Eigen::VectorXd predict(const PygonModel& model, const Graph& g, const Eigen::MatrixXd& features) {
  const auto adj = build_modified_adjacency(g, model);
  return forward(model, adj, features, false, Seed{0}).scores;
}

}  // namespace pygon
