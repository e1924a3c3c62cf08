#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pygon/graph.hpp"
#include "pygon/rng.hpp"

namespace pygon {

// GCN stack with a learnable signed adjacency. alpha is frozen; beta and
// gamma are trained together with the layer weights.
struct PygonModel {
  std::vector<Eigen::MatrixXd> weights;  // f0 x f1, ..., f_{L-1} x 1
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = -1.0;
  double dropout = 0.4;
  double p = 0.5;
  bool edge_correction = true;
  // Bumped by every optimizer step; forward caches remember it.
  std::uint64_t version = 0;

  std::size_t layers() const { return weights.size(); }
  std::size_t input_dim() const { return weights.empty() ? 0 : static_cast<std::size_t>(weights.front().rows()); }

  // (1 - p) / p when edge correction is on, else 1.
  double edge_scale() const { return edge_correction ? (1.0 - p) / p : 1.0; }
};

// Glorot-uniform weights, e^alpha = e^beta = 1, gamma = -1.
inline PygonModel init_model(std::size_t input_dim, const std::vector<std::size_t>& hidden,
                             double p, double dropout, bool edge_correction, Seed seed) {
  if (input_dim == 0) throw std::invalid_argument("init_model: input dimension must be positive");
  if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("init_model: need 0 < p < 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw std::invalid_argument("init_model: dropout must lie in [0, 1)");
  PygonModel m;
  m.p = p;
  m.dropout = dropout;
  m.edge_correction = edge_correction;
  std::vector<std::size_t> dims{input_dim};
  dims.insert(dims.end(), hidden.begin(), hidden.end());
  dims.push_back(1);
  Rng rng(seed);
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    if (dims[l + 1] == 0) throw std::invalid_argument("init_model: zero-width layer");
    const double limit = std::sqrt(6.0 / static_cast<double>(dims[l] + dims[l + 1]));
    Eigen::MatrixXd w(static_cast<Eigen::Index>(dims[l]), static_cast<Eigen::Index>(dims[l + 1]));
    for (Eigen::Index c = 0; c < w.cols(); ++c)
      for (Eigen::Index r = 0; r < w.rows(); ++r) w(r, c) = rng.uniform(-limit, limit);
    m.weights.push_back(std::move(w));
  }
  return m;
}

// Signed message-passing matrix:
//   diagonal            gamma / sqrt(n)
//   edge i->j           mu * e^alpha / sqrt(n)
//   non-edge, i != j   -e^beta / sqrt(n)
struct ModifiedAdjacency {
  Eigen::MatrixXd matrix;
  double diag_weight = 0.0;
  double edge_weight = 0.0;
  double nonedge_weight = 0.0;  // magnitude; entries are -nonedge_weight
  double beta = 0.0;
  double gamma = 0.0;
};

inline ModifiedAdjacency build_modified_adjacency(const Graph& g, const PygonModel& model) {
  if (std::abs(model.p - g.p()) > 1e-12) {
    throw std::invalid_argument("build_modified_adjacency: model p differs from graph p");
  }
  const auto n = static_cast<Eigen::Index>(g.n());
  const double scale = 1.0 / std::sqrt(static_cast<double>(g.n()));
  ModifiedAdjacency adj;
  adj.diag_weight = model.gamma * scale;
  adj.edge_weight = model.edge_scale() * std::exp(model.alpha) * scale;
  adj.nonedge_weight = std::exp(model.beta) * scale;
  adj.beta = model.beta;
  adj.gamma = model.gamma;
  adj.matrix.resize(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) {
      if (i == j) {
        adj.matrix(i, j) = adj.diag_weight;
      } else {
        adj.matrix(i, j) = g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j)) ? adj.edge_weight : -adj.nonedge_weight;
      }
    }
  }
  return adj;
}

struct LayerCache {
  Eigen::MatrixXd input;  // H_l
  // Z_l = A H_l W_l is evaluated in the cheaper order; `mixed` holds the
  // intermediate: A H_l when aggregate_first, otherwise H_l W_l.
  Eigen::MatrixXd mixed;
  bool aggregate_first = false;
  Eigen::MatrixXd pre;   // Z_l
  Eigen::MatrixXd mask;  // dropout multipliers (0 or 1/keep); empty if none
};

struct ForwardCache {
  std::vector<LayerCache> layers;
  Eigen::VectorXd output;
  std::uint64_t model_version = 0;
  double beta = 0.0;
  double gamma = 0.0;
};

struct ForwardResult {
  Eigen::VectorXd scores;
  ForwardCache cache;
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Hidden layers: dropout(ReLU(A H W)). Output layer: sigmoid(A H W).
inline ForwardResult forward(const PygonModel& model, const ModifiedAdjacency& adj,
                             const Eigen::MatrixXd& x, bool training, Seed dropout_seed) {
  if (model.weights.empty()) throw std::invalid_argument("forward: model has no layers");
  if (static_cast<std::size_t>(x.cols()) != model.input_dim()) {
    throw std::invalid_argument("forward: feature width " + std::to_string(x.cols()) +
                                " does not match model input " + std::to_string(model.input_dim()));
  }
  if (x.rows() != adj.matrix.rows()) throw std::invalid_argument("forward: feature rows do not match graph size");

  ForwardResult out;
  auto& cache = out.cache;
  cache.model_version = model.version;
  cache.beta = adj.beta;
  cache.gamma = adj.gamma;
  cache.layers.resize(model.layers());

  Rng rng(dropout_seed);
  const double keep = 1.0 - model.dropout;
  const bool drop = training && model.dropout > 0.0;

  Eigen::MatrixXd h = x;
  for (std::size_t l = 0; l < model.layers(); ++l) {
    auto& lc = cache.layers[l];
    const auto& w = model.weights[l];
    lc.aggregate_first = w.rows() <= w.cols();
    if (lc.aggregate_first) {
      lc.mixed.noalias() = adj.matrix * h;
      lc.pre.noalias() = lc.mixed * w;
    } else {
      lc.mixed.noalias() = h * w;
      lc.pre.noalias() = adj.matrix * lc.mixed;
    }
    lc.input = std::move(h);
    if (l + 1 == model.layers()) break;
    h = lc.pre.cwiseMax(0.0);
    if (drop) {
      lc.mask.resize(h.rows(), h.cols());
      for (Eigen::Index c = 0; c < h.cols(); ++c)
        for (Eigen::Index r = 0; r < h.rows(); ++r) lc.mask(r, c) = rng.bernoulli(keep) ? 1.0 / keep : 0.0;
      h.array() *= lc.mask.array();
    }
  }
  const auto& last = cache.layers.back().pre;
  out.scores = last.col(0).unaryExpr([](double z) { return sigmoid(z); });
  cache.output = out.scores;
  return out;
}

// ---------------------------------------------------------------------------
// Losses. Scores are clamped to [kScoreClamp, 1 - kScoreClamp] before logs.

inline constexpr double kScoreClamp = 1e-7;

inline double clamp_score(double s) { return std::min(std::max(s, kScoreClamp), 1.0 - kScoreClamp); }

namespace detail {

inline void check_loss_inputs(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels, std::size_t k) {
  const auto n = static_cast<std::size_t>(scores.size());
  if (static_cast<std::size_t>(labels.size()) != n) throw std::invalid_argument("loss: score/label size mismatch");
  if (k == 0 || k >= n) throw std::invalid_argument("loss: k must satisfy 0 < k < n");
  if (std::abs(labels.sum() - static_cast<double>(k)) > 1e-9) throw std::invalid_argument("loss: labels do not sum to k");
}

}  // namespace detail

// -sum_i [ y_i ln s_i / k + (1 - y_i) ln(1 - s_i) / (n - k) ]
inline double wbce_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels, std::size_t k) {
  detail::check_loss_inputs(scores, labels, k);
  const double n = static_cast<double>(scores.size());
  const double wp = 1.0 / static_cast<double>(k);
  const double wn = 1.0 / (n - static_cast<double>(k));
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double s = clamp_score(scores(i));
    total += wp * labels(i) * std::log(s) + wn * (1.0 - labels(i)) * std::log(1.0 - s);
  }
  return -total;
}

// Pairwise agreement term over all ordered (i, j), diagonal included.
inline double pairwise_penalty(const Eigen::VectorXd& scores, const Graph& g) {
  const auto n = scores.size();
  double total = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const double si = clamp_score(scores(i));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double prod = si * clamp_score(scores(j));
      const bool edge = i != j && g.has_edge(static_cast<Vertex>(i), static_cast<Vertex>(j));
      total += edge ? std::log((1.0 + prod) / 2.0) : std::log((1.0 - prod) / 2.0);
    }
  }
  return -total / static_cast<double>(n * n);
}

inline double binomial_penalty(const Eigen::VectorXd& scores, std::size_t k) {
  const double n = static_cast<double>(scores.size());
  const double rate = static_cast<double>(k) / n;
  double total = 0.0;
  for (Eigen::Index i = 0; i < scores.size(); ++i) {
    const double s = clamp_score(scores(i));
    total += s * std::log(rate) + (1.0 - s) * std::log(1.0 - rate);
  }
  return -total / n;
}

struct LossWeights {
  double pairwise = 0.0;  // c1
  double binomial = 0.0;  // c2
};

inline double extended_loss(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels, const Graph& g,
                            std::size_t k, LossWeights w) {
  double loss = wbce_loss(scores, labels, k);
  if (w.pairwise != 0.0) loss += w.pairwise * pairwise_penalty(scores, g);
  if (w.binomial != 0.0) loss += w.binomial * binomial_penalty(scores, k);
  return loss;
}

// dL/dscores of extended_loss. Zero where the clamp is active.
inline Eigen::VectorXd loss_gradient(const Eigen::VectorXd& scores, const Eigen::VectorXd& labels, const Graph& g,
                                     std::size_t k, LossWeights w) {
  detail::check_loss_inputs(scores, labels, k);
  const auto n = scores.size();
  const double nd = static_cast<double>(n);
  const double wp = 1.0 / static_cast<double>(k);
  const double wn = 1.0 / (nd - static_cast<double>(k));
  Eigen::VectorXd s = scores.unaryExpr([](double v) { return clamp_score(v); });
  Eigen::VectorXd grad(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    grad(i) = -wp * labels(i) / s(i) + wn * (1.0 - labels(i)) / (1.0 - s(i));
  }
  if (w.pairwise != 0.0) {
    const double c = -w.pairwise / (nd * nd);
    for (Eigen::Index m = 0; m < n; ++m) {
      double acc = 0.0;
      for (Eigen::Index j = 0; j < n; ++j) {
        const double prod = s(m) * s(j);
        // Term (m, j) and term (j, m); the diagonal collects both.
        const bool out_edge = m != j && g.has_edge(static_cast<Vertex>(m), static_cast<Vertex>(j));
        const bool in_edge = m != j && g.has_edge(static_cast<Vertex>(j), static_cast<Vertex>(m));
        acc += out_edge ? s(j) / (1.0 + prod) : -s(j) / (1.0 - prod);
        acc += in_edge ? s(j) / (1.0 + prod) : -s(j) / (1.0 - prod);
      }
      grad(m) += c * acc;
    }
  }
  if (w.binomial != 0.0) {
    const double rate = static_cast<double>(k) / nd;
    grad.array() += -w.binomial / nd * (std::log(rate) - std::log(1.0 - rate));
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (scores(i) < kScoreClamp || scores(i) > 1.0 - kScoreClamp) grad(i) = 0.0;
  }
  return grad;
}

// ---------------------------------------------------------------------------
// Backpropagation.

struct Gradients {
  std::vector<Eigen::MatrixXd> weights;
  double beta = 0.0;
  double gamma = 0.0;
};

// Gradients of a loss with dL/dscores = `score_grad` w.r.t. every weight
// matrix, beta and gamma. alpha is frozen and gets no entry.
inline Gradients backward(const PygonModel& model, const ModifiedAdjacency& adj, const ForwardCache& cache,
                          const Eigen::VectorXd& score_grad) {
  if (cache.model_version != model.version || cache.layers.size() != model.layers() ||
      cache.beta != model.beta || cache.gamma != model.gamma || adj.beta != model.beta ||
      adj.gamma != model.gamma) {
    throw std::logic_error("backward: stale forward cache");
  }
  const auto n = adj.matrix.rows();
  const double inv_sqrt_n = 1.0 / std::sqrt(static_cast<double>(n));
  const double a = adj.edge_weight;
  const double b = adj.nonedge_weight;
  const double d = adj.diag_weight;

  Gradients grads;
  grads.weights.resize(model.layers());

  // Sigmoid output layer.
  Eigen::MatrixXd g(n, 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double s = cache.output(i);
    g(i, 0) = score_grad(i) * s * (1.0 - s);
  }

  for (std::size_t l = model.layers(); l-- > 0;) {
    const auto& lc = cache.layers[l];
    const auto& w = model.weights[l];
    const bool need_input_grad = l > 0;
    Eigen::MatrixXd dh;
    // With P = H W: s_diag = sum_i <G_i, P_i>, s_all = sum_ij <G_i, P_j>.
    double s_diag = 0.0;
    double s_all = 0.0;
    if (lc.aggregate_first) {
      grads.weights[l].noalias() = lc.mixed.transpose() * g;
      Eigen::MatrixXd gw = g * w.transpose();
      s_diag = (gw.array() * lc.input.array()).sum();
      s_all = gw.colwise().sum().dot(lc.input.colwise().sum());
      if (need_input_grad) dh.noalias() = adj.matrix.transpose() * gw;
    } else {
      Eigen::MatrixXd t = adj.matrix.transpose() * g;
      grads.weights[l].noalias() = lc.input.transpose() * t;
      s_diag = (g.array() * lc.mixed.array()).sum();
      s_all = g.colwise().sum().dot(lc.mixed.colwise().sum());
      if (need_input_grad) dh.noalias() = t * w.transpose();
    }
    // sum_ij A_ij <G_i, P_j> = <G, Z> = d s_diag + a s_edge - b s_non and
    // s_edge + s_non = s_all - s_diag give the non-edge sum without an n x n
    // gradient matrix.
    const double s_gz = (g.array() * lc.pre.array()).sum();
    const double s_non = (d * s_diag + a * (s_all - s_diag) - s_gz) / (a + b);
    grads.gamma += s_diag * inv_sqrt_n;
    grads.beta += -b * s_non;

    if (need_input_grad) {
      const auto& prev = cache.layers[l - 1];
      g = dh.array() * (prev.pre.array() > 0.0).cast<double>();
      if (prev.mask.size() != 0) g.array() *= prev.mask.array();
    }
  }
  return grads;
}

inline Gradients backward(const PygonModel& model, const ModifiedAdjacency& adj, const ForwardCache& cache,
                          const Eigen::VectorXd& labels, const Graph& g, std::size_t k, LossWeights w) {
  return backward(model, adj, cache, loss_gradient(cache.output, labels, g, k, w));
}

}  // namespace pygon
