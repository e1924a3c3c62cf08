#pragma once

#include <algorithm>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "pygon/features.hpp"
#include "pygon/harness.hpp"
#include "pygon/model.hpp"
#include "pygon/train.hpp"

namespace pygon {

using ordered_json = nlohmann::ordered_json;

struct SweepConfig {
  std::size_t k_min = 0;  // 0: unset
  std::size_t k_max = 0;
  std::vector<std::size_t> n_values;  // several n -> regression over thresholds
  bool stop_at_first = false;
};

// Everything a batch run needs. JSON layout:
//   { "experiment": {...}, "train": {...}, "sweep": {...},
//     "output_dir": "runs", "threads": 1 }
// Every section is optional; unknown keys are rejected.
struct RunConfig {
  ExperimentConfig experiment;
  SweepConfig sweep;
  std::string output_dir = "runs";
  std::size_t threads = 1;
};

namespace detail {

inline void reject_unknown(const nlohmann::json& j, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) throw std::invalid_argument(std::string(where) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw std::invalid_argument(std::string(where) + ": unknown key '" + item.key() + "'");
    }
  }
}

template <typename T>
void read_opt(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace detail

inline ordered_json to_json(const TrainConfig& c) {
  ordered_json j;
  j["max_epochs"] = c.max_epochs;
  j["patience"] = c.patience;
  j["learning_rate"] = c.learning_rate;
  j["l2_coeff"] = c.l2_coeff;
  j["dropout"] = c.dropout;
  j["hidden_dims"] = c.hidden_dims;
  j["loss_c1"] = c.loss_c1;
  j["loss_c2"] = c.loss_c2;
  return j;
}

inline void from_json_into(const nlohmann::json& j, TrainConfig& c) {
  detail::reject_unknown(j, "train", {"max_epochs", "patience", "learning_rate", "l2_coeff", "dropout", "hidden_dims", "loss_c1", "loss_c2"});
  detail::read_opt(j, "max_epochs", c.max_epochs);
  detail::read_opt(j, "patience", c.patience);
  detail::read_opt(j, "learning_rate", c.learning_rate);
  detail::read_opt(j, "l2_coeff", c.l2_coeff);
  detail::read_opt(j, "dropout", c.dropout);
  detail::read_opt(j, "hidden_dims", c.hidden_dims);
  detail::read_opt(j, "loss_c1", c.loss_c1);
  detail::read_opt(j, "loss_c2", c.loss_c2);
}

inline ordered_json to_json(const ExperimentConfig& c) {
  ordered_json j;
  j["kind"] = std::string(to_string(c.kind.variant));
  j["q"] = c.kind.q;
  j["n"] = c.n;
  j["p"] = c.p;
  j["k"] = c.k;
  j["graphs"] = c.graphs;
  j["folds"] = c.folds;
  j["feature_set"] = std::string(to_string(c.feature_set));
  j["master_seed"] = c.master_seed.value;
  j["edge_correction"] = c.edge_correction;
  j["clean"] = c.run_cleaning;
  j["clean_rounds"] = c.clean_rounds;
  return j;
}

inline void from_json_into(const nlohmann::json& j, ExperimentConfig& c) {
  detail::reject_unknown(j, "experiment", {"kind", "q", "n", "p", "k", "graphs", "folds", "feature_set", "master_seed",
                                           "edge_correction", "clean", "clean_rounds"});
  if (j.contains("kind")) c.kind.variant = parse_variant(j.at("kind").get<std::string>());
  detail::read_opt(j, "q", c.kind.q);
  detail::read_opt(j, "n", c.n);
  detail::read_opt(j, "p", c.p);
  detail::read_opt(j, "k", c.k);
  detail::read_opt(j, "graphs", c.graphs);
  detail::read_opt(j, "folds", c.folds);
  if (j.contains("feature_set")) c.feature_set = parse_feature_set(j.at("feature_set").get<std::string>());
  detail::read_opt(j, "master_seed", c.master_seed.value);
  detail::read_opt(j, "edge_correction", c.edge_correction);
  detail::read_opt(j, "clean", c.run_cleaning);
  detail::read_opt(j, "clean_rounds", c.clean_rounds);
}

inline ordered_json to_json(const SweepConfig& c) {
  ordered_json j;
  j["k_min"] = c.k_min;
  j["k_max"] = c.k_max;
  j["n_values"] = c.n_values;
  j["stop_at_first"] = c.stop_at_first;
  return j;
}

inline void from_json_into(const nlohmann::json& j, SweepConfig& c) {
  detail::reject_unknown(j, "sweep", {"k_min", "k_max", "n_values", "stop_at_first"});
  detail::read_opt(j, "k_min", c.k_min);
  detail::read_opt(j, "k_max", c.k_max);
  detail::read_opt(j, "n_values", c.n_values);
  detail::read_opt(j, "stop_at_first", c.stop_at_first);
}

inline ordered_json to_json(const RunConfig& c) {
  ordered_json j;
  j["experiment"] = to_json(c.experiment);
  j["train"] = to_json(c.experiment.train);
  j["sweep"] = to_json(c.sweep);
  j["output_dir"] = c.output_dir;
  j["threads"] = c.threads;
  return j;
}

inline void from_json_into(const nlohmann::json& j, RunConfig& c) {
  detail::reject_unknown(j, "config", {"experiment", "train", "sweep", "output_dir", "threads"});
  if (j.contains("experiment")) from_json_into(j.at("experiment"), c.experiment);
  if (j.contains("train")) from_json_into(j.at("train"), c.experiment.train);
  if (j.contains("sweep")) from_json_into(j.at("sweep"), c.sweep);
  detail::read_opt(j, "output_dir", c.output_dir);
  detail::read_opt(j, "threads", c.threads);
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot open config " + path.string());
  RunConfig c;
  try {
    from_json_into(nlohmann::json::parse(is), c);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config " + path.string() + ": " + e.what());
  }
  return c;
}

// ---------------------------------------------------------------------------
// Model checkpoint: dims, weights (row-major), alpha/beta/gamma, p, dropout,
// edge correction, feature set, normalization statistics and the training
// config. Doubles are written in shortest round-trip form, so save/load is
// bit-exact.

struct Checkpoint {
  PygonModel model;
  FeatureSet feature_set = FeatureSet::Degrees;
  std::optional<NormalizationStats> normalization;
  TrainConfig config;
};

inline ordered_json to_json(const Checkpoint& c) {
  ordered_json j;
  j["format"] = "pygon-model";
  j["version"] = 1;
  std::vector<std::size_t> dims{c.model.input_dim()};
  for (const auto& w : c.model.weights) dims.push_back(static_cast<std::size_t>(w.cols()));
  j["dims"] = dims;
  j["p"] = c.model.p;
  j["alpha"] = c.model.alpha;
  j["beta"] = c.model.beta;
  j["gamma"] = c.model.gamma;
  j["dropout"] = c.model.dropout;
  j["edge_correction"] = c.model.edge_correction;
  ordered_json weights = ordered_json::array();
  for (const auto& w : c.model.weights) {
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index col = 0; col < w.cols(); ++col) flat.push_back(w(r, col));
    weights.push_back(flat);
  }
  j["weights"] = weights;
  j["feature_set"] = std::string(to_string(c.feature_set));
  if (c.normalization) {
    j["normalization"] = {{"names", c.normalization->names}, {"mean", c.normalization->mean}, {"stddev", c.normalization->stddev}};
  } else {
    j["normalization"] = nullptr;
  }
  j["config"] = to_json(c.config);
  j["seed"] = c.config.seed.value;
  return j;
}

inline Checkpoint checkpoint_from_json(const nlohmann::json& j) {
  if (j.value("format", "") != "pygon-model") throw std::invalid_argument("checkpoint: not a pygon model file");
  Checkpoint c;
  const auto dims = j.at("dims").get<std::vector<std::size_t>>();
  const auto& weights = j.at("weights");
  if (dims.size() < 2 || weights.size() + 1 != dims.size()) throw std::invalid_argument("checkpoint: inconsistent dims");
  for (std::size_t l = 0; l + 1 < dims.size(); ++l) {
    const auto flat = weights.at(l).get<std::vector<double>>();
    if (flat.size() != dims[l] * dims[l + 1]) throw std::invalid_argument("checkpoint: weight size mismatch");
    Eigen::MatrixXd w(static_cast<Eigen::Index>(dims[l]), static_cast<Eigen::Index>(dims[l + 1]));
    std::size_t idx = 0;
    for (Eigen::Index r = 0; r < w.rows(); ++r)
      for (Eigen::Index col = 0; col < w.cols(); ++col) w(r, col) = flat[idx++];
    c.model.weights.push_back(std::move(w));
  }
  c.model.p = j.at("p").get<double>();
  c.model.alpha = j.at("alpha").get<double>();
  c.model.beta = j.at("beta").get<double>();
  c.model.gamma = j.at("gamma").get<double>();
  c.model.dropout = j.at("dropout").get<double>();
  c.model.edge_correction = j.at("edge_correction").get<bool>();
  c.feature_set = parse_feature_set(j.at("feature_set").get<std::string>());
  if (!j.at("normalization").is_null()) {
    const auto& nj = j.at("normalization");
    c.normalization = NormalizationStats{nj.at("names").get<std::vector<std::string>>(), nj.at("mean").get<std::vector<double>>(),
                                         nj.at("stddev").get<std::vector<double>>()};
  }
  from_json_into(j.at("config"), c.config);
  c.config.seed.value = j.at("seed").get<std::uint64_t>();
  return c;
}

inline void save_checkpoint(const std::filesystem::path& path, const Checkpoint& c) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path.string());
  os << to_json(c).dump(1) << '\n';
}

inline Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot open " + path.string());
  return checkpoint_from_json(nlohmann::json::parse(is));
}

}  // namespace pygon
