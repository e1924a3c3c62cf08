#include <cmath>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "pygon/features.hpp"
#include "pygon/planting.hpp"

using namespace pygon;

namespace {

Graph from_edges(std::size_t n, bool directed, std::initializer_list<std::pair<Vertex, Vertex>> edges) {
  Graph g(n, directed, 0.5);
  for (auto [u, v] : edges) g.set_edge(u, v, true);
  return g;
}

}  // namespace

TEST(DegreeFeatures, Triangle) {
  const auto f = degree_features(from_edges(3, false, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(f.names, std::vector<std::string>{"degree"});
  EXPECT_EQ(f.values, Eigen::MatrixXd::Constant(3, 1, 2.0));
}

TEST(DegreeFeatures, DirectedPathUsesTotalDegree) {
  const auto f = degree_features(from_edges(3, true, {{0, 1}, {1, 2}}));
  EXPECT_EQ(f.values(0, 0), 1.0);
  EXPECT_EQ(f.values(1, 0), 2.0);
  EXPECT_EQ(f.values(2, 0), 1.0);
}

TEST(DegreeFeatures, EqualsGraphDegree) {
  for (bool directed : {false, true}) {
    const auto g = gen_gnp(70, 0.3, directed, Seed{4});
    const auto f = degree_features(g);
    for (Vertex v = 0; v < 70; ++v) EXPECT_EQ(f.values(static_cast<Eigen::Index>(v), 0), static_cast<double>(degree(g, v)));
  }
}

TEST(DegreeFeatures, PlantedCliqueVerticesHaveHigherDegree) {
  double planted = 0.0, background = 0.0;
  std::size_t np = 0, nb = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    const auto pi = generate_instance(500, 0.5, SubgraphKind{}, 20, Seed{31}, i);
    const auto f = degree_features(pi.graph);
    for (Vertex v = 0; v < 500; ++v) {
      if (pi.labels[v] == 1.0) planted += f.values(static_cast<Eigen::Index>(v), 0), ++np;
      else background += f.values(static_cast<Eigen::Index>(v), 0), ++nb;
    }
  }
  // Planted: 19 + 480 * 0.5 = 259. Background: 499 * 0.5 = 249.5.
  EXPECT_NEAR(planted / static_cast<double>(np), 259.0, 2.0);
  EXPECT_NEAR(background / static_cast<double>(nb), 249.5, 1.0);
}

TEST(Motif3, Triangle) {
  const auto f = motif3_features(from_edges(3, false, {{0, 1}, {1, 2}, {0, 2}}));
  EXPECT_EQ(f.names, motif3_names(false));
  for (int v = 0; v < 3; ++v) {
    EXPECT_EQ(f.values(v, 0), 0.0);
    EXPECT_EQ(f.values(v, 1), 1.0);
  }
}

TEST(Motif3, PathCreditsAllThreeVertices) {
  const auto f = motif3_features(from_edges(3, false, {{0, 1}, {1, 2}}));
  for (int v = 0; v < 3; ++v) {
    EXPECT_EQ(f.values(v, 0), 1.0);
    EXPECT_EQ(f.values(v, 1), 0.0);
  }
}

TEST(Motif3, K4) {
  const auto f = motif3_features(gen_gnp(4, 1.0, false, Seed{0}));
  for (int v = 0; v < 4; ++v) {
    EXPECT_EQ(f.values(v, 0), 0.0);
    EXPECT_EQ(f.values(v, 1), 3.0);
  }
}

TEST(Motif3, DirectedClasses) {
  // 0 -> 1 -> 2: path, no reciprocal pair.
  auto f = motif3_features(from_edges(3, true, {{0, 1}, {1, 2}}));
  EXPECT_EQ(f.names.size(), 6u);
  EXPECT_EQ(f.values(0, 0), 1.0);
  // 0 <-> 1, 1 -> 2, 2 -> 0: triangle with one reciprocal pair.
  f = motif3_features(from_edges(3, true, {{0, 1}, {1, 0}, {1, 2}, {2, 0}}));
  EXPECT_EQ(f.values(2, 4), 1.0);
  // Fully reciprocal triangle lands in the 2+ bucket.
  f = motif3_features(gen_gnp(3, 1.0, true, Seed{0}));
  EXPECT_EQ(f.values(1, 5), 1.0);
  EXPECT_EQ(f.values.sum(), 3.0);
}

TEST(Motif3, MatchesNaiveOracle) {
  for (std::uint64_t i = 0; i < 50; ++i) {
    Rng rng(derive_seed(Seed{32}, i));
    const std::size_t n = 3 + rng.below(38);
    const auto g = gen_gnp(n, rng.uniform(0.05, 0.95), i % 2 == 0, Seed{rng.next()});
    ASSERT_EQ(motif3_features(g).values, oracle::naive_motif3(g)) << "graph " << i << " n=" << n;
  }
}

TEST(Motif3, MatchesOracleAcrossWordBoundaries) {
  // n > 128 exercises multi-word bitset rows.
  for (bool directed : {false, true}) {
    const auto g = gen_gnp(150, 0.2, directed, Seed{33});
    ASSERT_EQ(motif3_features(g).values, oracle::naive_motif3(g));
  }
}

TEST(Motif3, CountConservation) {
  const auto g = gen_gnp(60, 0.3, false, Seed{34});
  const auto f = motif3_features(g);
  double triangles = 0.0, paths = 0.0;
  for (Vertex a = 0; a < 60; ++a)
    for (Vertex b = a + 1; b < 60; ++b)
      for (Vertex c = b + 1; c < 60; ++c) {
        const int e = int(g.has_edge(a, b)) + int(g.has_edge(a, c)) + int(g.has_edge(b, c));
        triangles += e == 3;
        paths += e == 2;
      }
  EXPECT_EQ(f.values.col(1).sum(), 3.0 * triangles);
  EXPECT_EQ(f.values.col(0).sum(), 3.0 * paths);
}

TEST(Identity, IsIdentity) {
  const auto f = identity_features(3);
  EXPECT_EQ(f.values, Eigen::MatrixXd::Identity(3, 3));
  EXPECT_EQ(identity_features(17).values.rowwise().sum(), Eigen::VectorXd::Ones(17));
}

TEST(Concat, JoinsColumnsAndNames) {
  const auto g = gen_gnp(10, 0.5, false, Seed{35});
  const auto c = concat_features(degree_features(g), motif3_features(g));
  EXPECT_EQ(c.cols(), 3u);
  EXPECT_EQ(c.names, (std::vector<std::string>{"degree", "motif3_path", "motif3_triangle"}));
  EXPECT_THROW(concat_features(degree_features(g), identity_features(11)), std::invalid_argument);
}

TEST(Normalize, ConstantColumnBecomesZeros) {
  FeatureMatrix m{Eigen::MatrixXd::Constant(5, 1, 7.0), {"c"}, false};
  const auto out = normalize(std::span<const FeatureMatrix>(&m, 1));
  EXPECT_EQ(out[0].values, Eigen::MatrixXd::Zero(5, 1));
  EXPECT_TRUE(out[0].normalized);
}

TEST(Normalize, ZeroHitsLogFloor) { EXPECT_EQ(log_floor(0.0), -10.0); }

TEST(Normalize, TwoGraphsPooled) {
  std::vector<FeatureMatrix> mats{{Eigen::MatrixXd::Constant(1, 1, 10.0), {"x"}, false},
                                  {Eigen::MatrixXd::Constant(1, 1, 1000.0), {"x"}, false}};
  const auto out = normalize(mats);
  EXPECT_NEAR(out[0].values(0, 0), -1.0, 1e-12);
  EXPECT_NEAR(out[1].values(0, 0), 1.0, 1e-12);
}

TEST(Normalize, PooledMeanZeroStdOne) {
  std::vector<FeatureMatrix> mats;
  for (std::uint64_t i = 0; i < 4; ++i) mats.push_back(motif3_features(gen_gnp(40 + 5 * i, 0.3, false, Seed{36 + i})));
  const auto out = normalize(mats);
  for (Eigen::Index c = 0; c < 2; ++c) {
    double s = 0.0, s2 = 0.0, rows = 0.0;
    for (const auto& m : out) {
      s += m.values.col(c).sum();
      s2 += m.values.col(c).squaredNorm();
      rows += static_cast<double>(m.values.rows());
    }
    const double mean = s / rows;
    EXPECT_LT(std::abs(mean), 1e-9);
    EXPECT_LT(std::abs(std::sqrt(s2 / rows - mean * mean) - 1.0), 1e-9);
  }
}

TEST(Normalize, RejectsMismatchedOrRepeated) {
  std::vector<FeatureMatrix> mats{{Eigen::MatrixXd::Ones(2, 1), {"a"}, false}, {Eigen::MatrixXd::Ones(2, 1), {"b"}, false}};
  EXPECT_THROW(normalize(mats), std::invalid_argument);
  FeatureMatrix done{Eigen::MatrixXd::Ones(2, 1), {"a"}, true};
  EXPECT_THROW(normalize(std::span<const FeatureMatrix>(&done, 1)), std::invalid_argument);
}
