#include <cmath>

#include <gtest/gtest.h>

#include "pygon/thresholds.hpp"

using namespace pygon;

namespace {

ThresholdQuery query(SubgraphVariant v, std::size_t n, double p, double q = 0.9) { return {SubgraphKind{v, q}, n, p}; }

// ln C(n, k) as a running sum of ln((n - i) / (i + 1)).
double log_choose_by_product(std::size_t n, std::size_t k) {
  double s = 0.0;
  for (std::size_t i = 0; i < k; ++i) s += std::log(static_cast<double>(n - i) / static_cast<double>(i + 1));
  return s;
}

// Clique threshold by direct product evaluation, independent of lgamma.
std::size_t clique_scan_oracle(std::size_t n, double p) {
  for (std::size_t k = 2; k <= n; ++k) {
    const double pairs = 0.5 * static_cast<double>(k * (k - 1));
    if (log_choose_by_product(n, k) + pairs * std::log(p) <= 0.0) return k;
  }
  return 0;
}

}  // namespace

TEST(LogExpectedCount, CliqueSinglePair) {
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::Clique, 2, 0.5), 2), std::log(0.5), 1e-12);
}

TEST(LogExpectedCount, CliquePairsInFiveHundred) {
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::Clique, 500, 0.5), 2), std::log(62375.0), 1e-9);
  EXPECT_NEAR(std::log(62375.0), 11.041, 1e-3);
}

TEST(LogExpectedCount, DacOnThreeVertices) {
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::DAC, 3, 0.5), 2), std::log(1.5), 1e-12);
}

TEST(LogExpectedCount, MatchesProductFormForEveryKind) {
  const std::size_t n = 200, k = 9;
  const double p = 0.35, q = 0.8;
  const double lp = std::log(p), lq = std::log(1.0 - p);
  const double pairs = 36.0;
  double lf_k = 0.0;
  for (std::size_t i = 2; i <= k; ++i) lf_k += std::log(static_cast<double>(i));
  const double lc = log_choose_by_product(n, k);
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::Clique, n, p), k), lc + pairs * lp, 1e-9);
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::DAC, n, p), k), lc + lf_k + pairs * (lp + lq), 1e-9);
  // 2-plex on 9 vertices: 4 removed pairs; 9! / (2^4 4! 1!) matchings of size 4.
  const double matchings = std::log(362880.0 / (16.0 * 24.0));
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::TwoPlex, n, p), k), lc + matchings + 32.0 * lp + 4.0 * lq, 1e-9);
  // Biclique 5 + 4: ordered side choice C(n,5) C(n-5,4), 20 cross edges, 16 absent inner pairs.
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::Biclique, n, p), k),
              log_choose_by_product(n, 5) + log_choose_by_product(n - 5, 4) + 20.0 * lp + 16.0 * lq, 1e-9);
  // G(k, q): ceil(36 * 0.8) = 29 required edges among 36 pairs.
  EXPECT_NEAR(log_expected_count(query(SubgraphVariant::DenseGnq, n, p, q), k),
              lc + log_choose_by_product(36, 29) + 29.0 * lp, 1e-9);
}

TEST(LogExpectedCount, RejectsKOutOfRange) {
  const auto q = query(SubgraphVariant::Clique, 10, 0.5);
  EXPECT_THROW(log_expected_count(q, 1), std::out_of_range);
  EXPECT_THROW(log_expected_count(q, 11), std::out_of_range);
  EXPECT_THROW(log_expected_count(query(SubgraphVariant::Clique, 10, 1.0), 3), std::invalid_argument);
  EXPECT_THROW(log_expected_count(query(SubgraphVariant::DenseGnq, 10, 0.5, 0.4), 3), std::invalid_argument);
}

TEST(DenseEdgeQuota, ExactProductsDoNotRoundUp) {
  EXPECT_EQ(dense_edge_quota(10, 0.9), 41.0);  // 45 * 0.9 = 40.5
  EXPECT_EQ(dense_edge_quota(5, 0.9), 9.0);    // 10 * 0.9 = 9 exactly
  EXPECT_EQ(dense_edge_quota(5, 1.0), 10.0);
}

TEST(ThresholdScan, TwoVertices) { EXPECT_EQ(threshold_scan(query(SubgraphVariant::Clique, 2, 0.5)), 2u); }

TEST(ThresholdScan, CliqueMatchesProductOracle) {
  for (std::size_t n : {64u, 500u, 1024u, 4096u}) {
    for (double p : {0.3, 0.5, 0.6}) {
      EXPECT_EQ(threshold_scan(query(SubgraphVariant::Clique, n, p)), clique_scan_oracle(n, p)) << n << " " << p;
    }
  }
}

TEST(ThresholdScan, CliqueAt1024CloseToClosedForm) {
  const auto q = query(SubgraphVariant::Clique, 1024, 0.5);
  const long scan = static_cast<long>(threshold_scan(q));
  EXPECT_LE(std::labs(scan - std::lround(closed_form_threshold(q))), 2);
}

TEST(ThresholdScan, BicliqueAt512CloseToClosedForm) {
  const auto q = query(SubgraphVariant::Biclique, 512, 0.4);
  const double scan = static_cast<double>(threshold_scan(q));
  EXPECT_LE(std::abs(scan - closed_form_threshold(q)), 3.0);
}

TEST(ThresholdScan, ResultIsFirstNonPositive) {
  for (auto v : {SubgraphVariant::Clique, SubgraphVariant::DAC, SubgraphVariant::TwoPlex, SubgraphVariant::Biclique,
                 SubgraphVariant::DenseGnq}) {
    const auto q = query(v, 700, 0.45);
    const auto k = threshold_scan(q);
    EXPECT_LE(log_expected_count(q, k), 0.0);
    if (k > 2) { EXPECT_GT(log_expected_count(q, k - 1), 0.0); }
  }
}

TEST(ThresholdScan, DecreasingPastPeakAndMarkovTail) {
  for (auto v : {SubgraphVariant::Clique, SubgraphVariant::DAC, SubgraphVariant::TwoPlex, SubgraphVariant::Biclique,
                 SubgraphVariant::DenseGnq}) {
    for (double p : {0.3, 0.5, 0.6}) {
      const auto q = query(v, 1024, p);
      const auto k0 = threshold_scan(q);
      std::size_t peak = 2;
      for (std::size_t k = 2; k <= k0; ++k)
        if (log_expected_count(q, k) > log_expected_count(q, peak)) peak = k;
      for (std::size_t k = peak + 1; k <= 2 * k0 && k <= q.n; ++k) {
        ASSERT_LT(log_expected_count(q, k), log_expected_count(q, k - 1)) << to_string(v) << " k=" << k;
      }
      EXPECT_LT(log_expected_count(q, 2 * k0), -10.0);
    }
  }
}

TEST(ClosedForm, CliqueAt500) {
  const double l = std::log2(500.0);
  EXPECT_NEAR(closed_form_threshold(query(SubgraphVariant::Clique, 500, 0.5)), 2 * l - 2 * std::log2(l), 1e-12);
  EXPECT_NEAR(closed_form_threshold(query(SubgraphVariant::Clique, 500, 0.5)), 11.60, 0.01);
}

TEST(ClosedForm, LogCollapsesAtInverseP) {
  EXPECT_NEAR(closed_form_threshold(query(SubgraphVariant::Clique, 4, 0.25)), 2.0, 1e-12);
}

TEST(ClosedForm, DacAt500) {
  EXPECT_NEAR(closed_form_threshold(query(SubgraphVariant::DAC, 500, 0.5)), 2 * std::log(500.0) / std::log(4.0), 1e-12);
  EXPECT_NEAR(closed_form_threshold(query(SubgraphVariant::DAC, 500, 0.5)), 8.97, 0.01);
}

TEST(ClosedForm, DacAndBicliquePeakAtHalf) {
  for (auto v : {SubgraphVariant::DAC, SubgraphVariant::Biclique}) {
    for (std::size_t n : {128u, 1024u, 8192u}) {
      const double at_half = closed_form_threshold(query(v, n, 0.5));
      for (double p : {0.1, 0.3, 0.4, 0.45, 0.55, 0.6, 0.7, 0.9}) {
        EXPECT_LE(closed_form_threshold(query(v, n, p)), at_half + 1e-12) << to_string(v) << " n=" << n << " p=" << p;
      }
    }
  }
}
