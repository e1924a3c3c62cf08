#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "pygon/config.hpp"

using namespace pygon;
namespace fs = std::filesystem;

TEST(RunConfigJson, RoundTrip) {
  RunConfig c;
  c.experiment.kind = SubgraphKind{SubgraphVariant::DenseGnq, 0.85};
  c.experiment.n = 300;
  c.experiment.p = 0.4;
  c.experiment.k = 33;
  c.experiment.feature_set = FeatureSet::Both;
  c.experiment.master_seed = Seed{0xFFFFFFFFFFFFFFF1ULL};
  c.experiment.edge_correction = false;
  c.experiment.train.hidden_dims = {10, 20};
  c.experiment.train.loss_c1 = 0.25;
  c.sweep.k_min = 5;
  c.sweep.k_max = 9;
  c.sweep.n_values = {128, 256};
  c.output_dir = "elsewhere";
  c.threads = 3;
  RunConfig back;
  from_json_into(nlohmann::json::parse(to_json(c).dump()), back);
  EXPECT_EQ(to_json(back).dump(), to_json(c).dump());
  EXPECT_EQ(back.experiment.master_seed, c.experiment.master_seed);
}

TEST(RunConfigJson, PartialSectionsKeepDefaults) {
  RunConfig c;
  from_json_into(nlohmann::json::parse(R"({"experiment": {"k": 12}})"), c);
  EXPECT_EQ(c.experiment.k, 12u);
  EXPECT_EQ(c.experiment.n, 256u);
  EXPECT_EQ(c.experiment.train.patience, 40u);
}

TEST(RunConfigJson, RejectsUnknownKeysAndBadValues) {
  RunConfig c;
  EXPECT_THROW(from_json_into(nlohmann::json::parse(R"({"experiments": {}})"), c), std::invalid_argument);
  EXPECT_THROW(from_json_into(nlohmann::json::parse(R"({"train": {"lr": 0.1}})"), c), std::invalid_argument);
  EXPECT_THROW(from_json_into(nlohmann::json::parse(R"({"experiment": {"kind": "star"}})"), c), std::invalid_argument);
  EXPECT_ANY_THROW(from_json_into(nlohmann::json::parse(R"({"experiment": {"n": "big"}})"), c));
}

TEST(RunConfigJson, LoadFromFile) {
  const auto path = fs::temp_directory_path() / "pygon_cfg_test.json";
  std::ofstream(path) << R"({"experiment": {"kind": "biclique", "p": 0.4}, "threads": 2})";
  const auto c = load_run_config(path);
  EXPECT_EQ(c.experiment.kind.variant, SubgraphVariant::Biclique);
  EXPECT_EQ(c.experiment.p, 0.4);
  EXPECT_EQ(c.threads, 2u);
  fs::remove(path);
  EXPECT_THROW(load_run_config(path), std::runtime_error);
}

TEST(Checkpoint, RoundTripIsBitExact) {
  auto model = init_model(3, {7, 4}, 0.35, 0.4, false, Seed{1});
  model.beta = 0.123456789012345;
  model.gamma = -1.0 / 3.0;
  NormalizationStats stats{{"degree", "motif3_path", "motif3_triangle"}, {1.5, 2.0 / 3.0, 0.1}, {0.2, 0.0, 1e-3}};
  TrainConfig tc;
  tc.seed = Seed{99};
  const Checkpoint ck{model, FeatureSet::Both, stats, tc};
  const auto path = fs::temp_directory_path() / "pygon_ck_test.json";
  save_checkpoint(path, ck);
  const auto back = load_checkpoint(path);
  fs::remove(path);
  ASSERT_EQ(back.model.layers(), 3u);
  for (std::size_t l = 0; l < 3; ++l) EXPECT_EQ(back.model.weights[l], model.weights[l]);
  EXPECT_EQ(back.model.beta, model.beta);
  EXPECT_EQ(back.model.gamma, model.gamma);
  EXPECT_EQ(back.model.p, 0.35);
  EXPECT_FALSE(back.model.edge_correction);
  EXPECT_EQ(back.feature_set, FeatureSet::Both);
  ASSERT_TRUE(back.normalization.has_value());
  EXPECT_EQ(back.normalization->mean, stats.mean);
  EXPECT_EQ(back.normalization->stddev, stats.stddev);
  EXPECT_EQ(back.config.seed, Seed{99});
  const auto g = gen_gnp(20, 0.35, false, Seed{2});
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(20, 3);
  EXPECT_EQ(predict(back.model, g, x), predict(model, g, x));
}

TEST(Checkpoint, RejectsForeignJson) {
  EXPECT_THROW(checkpoint_from_json(nlohmann::json::parse(R"({"format": "other"})")), std::invalid_argument);
}
