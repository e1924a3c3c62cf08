#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "pygon/graph.hpp"

namespace pygon {

struct FeatureMatrix {
  Eigen::MatrixXd values;  // n x f
  std::vector<std::string> names;
  bool normalized = false;

  std::size_t rows() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t cols() const { return static_cast<std::size_t>(values.cols()); }
};

inline FeatureMatrix degree_features(const Graph& g) {
  FeatureMatrix out{Eigen::MatrixXd(g.n(), 1), {"degree"}, false};
  const auto d = degrees(g);
  for (std::size_t v = 0; v < g.n(); ++v) out.values(static_cast<Eigen::Index>(v), 0) = static_cast<double>(d[v]);
  return out;
}

inline FeatureMatrix identity_features(std::size_t n) {
  FeatureMatrix out{Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n)), {}, false};
  out.names.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.names.push_back("onehot_" + std::to_string(i));
  return out;
}

// Connected 3-vertex motif classes.
//   undirected: path (2 edges), triangle (3 edges)
//   directed:   {path, triangle} x {0, 1, >=2 reciprocal pairs}
inline std::vector<std::string> motif3_names(bool directed) {
  if (!directed) return {"motif3_path", "motif3_triangle"};
  return {"motif3_path_recip0", "motif3_path_recip1", "motif3_path_recip2",
          "motif3_tri_recip0",  "motif3_tri_recip1",  "motif3_tri_recip2plus"};
}

// Class index of the triplet {a, b, c}, or -1 when it is disconnected.
inline int motif3_class(const Graph& g, Vertex a, Vertex b, Vertex c) {
  const std::array<std::array<Vertex, 2>, 3> pairs{{{a, b}, {a, c}, {b, c}}};
  int linked = 0;
  int reciprocal = 0;
  for (const auto& [u, v] : pairs) {
    const bool fwd = g.has_edge(u, v);
    const bool bwd = g.has_edge(v, u);
    linked += (fwd || bwd) ? 1 : 0;
    reciprocal += (fwd && bwd) ? 1 : 0;
  }
  if (linked < 2) return -1;
  const int shape = linked == 2 ? 0 : 1;
  if (!g.directed()) return shape;
  return shape * 3 + (reciprocal < 2 ? reciprocal : 2);
}

// Per-vertex counts of connected induced 3-motifs: every unordered triplet is
// visited once and credited to its three members. O(n^3) worst case; the
// third vertex is drawn from word-level neighbour masks so disconnected
// triplets are skipped.
inline FeatureMatrix motif3_features(const Graph& g) {
  const std::size_t n = g.n();
  const std::size_t words = g.words_per_row();
  const bool directed = g.directed();
  auto names = motif3_names(directed);
  const std::size_t f = names.size();

  // Weak adjacency rows (row | column) for directed graphs.
  std::vector<std::uint64_t> weak(n * words, 0);
  for (Vertex i = 0; i < n; ++i) {
    auto row = g.row(i);
    for (std::size_t w = 0; w < words; ++w) weak[i * words + w] |= row[w];
    if (directed) {
      for (std::size_t w = 0; w < words; ++w) {
        for (auto bits = row[w]; bits != 0; bits &= bits - 1) {
          const Vertex j = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          weak[j * words + (i >> 6)] |= std::uint64_t{1} << (i & 63);
        }
      }
    }
  }
  auto weak_bit = [&](Vertex i, Vertex j) { return (weak[i * words + (j >> 6)] >> (j & 63)) & 1U; };

  std::vector<std::uint64_t> counts(n * f, 0);
  std::vector<std::uint64_t> candidates(words);
  for (Vertex i = 0; i < n; ++i) {
    const std::uint64_t* wi = weak.data() + i * words;
    for (Vertex j = i + 1; j < n; ++j) {
      const std::uint64_t* wj = weak.data() + j * words;
      const bool ij = weak_bit(i, j) != 0;
      for (std::size_t w = 0; w < words; ++w) {
        candidates[w] = ij ? (wi[w] | wj[w]) : (wi[w] & wj[w]);
      }
      // Restrict to l > j.
      const std::size_t first = (j + 1) >> 6;
      for (std::size_t w = 0; w < first && w < words; ++w) candidates[w] = 0;
      if (first < words) candidates[first] &= ~std::uint64_t{0} << ((j + 1) & 63);
      for (std::size_t w = first; w < words; ++w) {
        for (auto bits = candidates[w]; bits != 0; bits &= bits - 1) {
          const Vertex l = w * 64 + static_cast<std::size_t>(std::countr_zero(bits));
          const int cls = motif3_class(g, i, j, l);
          if (cls < 0) continue;
          const auto c = static_cast<std::size_t>(cls);
          ++counts[i * f + c];
          ++counts[j * f + c];
          ++counts[l * f + c];
        }
      }
    }
  }

  FeatureMatrix out{Eigen::MatrixXd(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(f)), std::move(names), false};
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t c = 0; c < f; ++c)
      out.values(static_cast<Eigen::Index>(v), static_cast<Eigen::Index>(c)) = static_cast<double>(counts[v * f + c]);
  return out;
}

// Column-wise concatenation; row counts must agree.
inline FeatureMatrix concat_features(const FeatureMatrix& a, const FeatureMatrix& b) {
  if (a.values.rows() != b.values.rows()) throw std::invalid_argument("concat_features: row mismatch");
  FeatureMatrix out;
  out.values.resize(a.values.rows(), a.values.cols() + b.values.cols());
  out.values << a.values, b.values;
  out.names = a.names;
  out.names.insert(out.names.end(), b.names.begin(), b.names.end());
  out.normalized = false;
  return out;
}

// Pooled per-column statistics of log10(max(1e-10, x)).
struct NormalizationStats {
  std::vector<std::string> names;
  std::vector<double> mean;
  std::vector<double> stddev;  // population std; 0 marks a constant column
};

inline double log_floor(double x) { return std::log10(std::max(1e-10, x)); }

inline NormalizationStats fit_normalization(std::span<const FeatureMatrix> mats) {
  if (mats.empty()) throw std::invalid_argument("fit_normalization: empty input");
  const auto& names = mats.front().names;
  const std::size_t f = names.size();
  std::vector<double> sum(f, 0.0);
  std::size_t rows = 0;
  for (const auto& m : mats) {
    if (m.names != names) throw std::invalid_argument("normalize: feature names differ across graphs");
    if (m.normalized) throw std::invalid_argument("normalize: matrix already normalized");
    for (Eigen::Index r = 0; r < m.values.rows(); ++r)
      for (std::size_t c = 0; c < f; ++c) sum[c] += log_floor(m.values(r, static_cast<Eigen::Index>(c)));
    rows += m.rows();
  }
  NormalizationStats stats{names, std::vector<double>(f), std::vector<double>(f)};
  for (std::size_t c = 0; c < f; ++c) stats.mean[c] = sum[c] / static_cast<double>(rows);
  std::vector<double> sq(f, 0.0);
  for (const auto& m : mats) {
    for (Eigen::Index r = 0; r < m.values.rows(); ++r)
      for (std::size_t c = 0; c < f; ++c) {
        const double d = log_floor(m.values(r, static_cast<Eigen::Index>(c))) - stats.mean[c];
        sq[c] += d * d;
      }
  }
  for (std::size_t c = 0; c < f; ++c) {
    const double sd = std::sqrt(sq[c] / static_cast<double>(rows));
    // Rounding leaves a residue on constant columns; treat it as zero.
    stats.stddev[c] = sd <= 1e-12 * std::max(1.0, std::abs(stats.mean[c])) ? 0.0 : sd;
  }
  return stats;
}

inline FeatureMatrix apply_normalization(const FeatureMatrix& raw, const NormalizationStats& stats) {
  if (raw.names != stats.names) throw std::invalid_argument("apply_normalization: feature names differ");
  if (raw.normalized) throw std::invalid_argument("apply_normalization: matrix already normalized");
  FeatureMatrix out{Eigen::MatrixXd(raw.values.rows(), raw.values.cols()), raw.names, true};
  for (Eigen::Index r = 0; r < raw.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < raw.values.cols(); ++c) {
      const auto cc = static_cast<std::size_t>(c);
      out.values(r, c) = stats.stddev[cc] == 0.0 ? 0.0 : (log_floor(raw.values(r, c)) - stats.mean[cc]) / stats.stddev[cc];
    }
  }
  return out;
}

// log10 floor, then z-score each column with statistics pooled over every
// vertex of every matrix.
inline std::vector<FeatureMatrix> normalize(std::span<const FeatureMatrix> mats) {
  const auto stats = fit_normalization(mats);
  std::vector<FeatureMatrix> out;
  out.reserve(mats.size());
  for (const auto& m : mats) out.push_back(apply_normalization(m, stats));
  return out;
}

}  // namespace pygon
