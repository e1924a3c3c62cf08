#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "pygon/rng.hpp"

namespace pygon {

using Vertex = std::size_t;

// Dense adjacency stored as one bitset row per vertex. Row i, bit j set means
// edge i->j. Undirected graphs keep the matrix symmetric. No self-loops.
class Graph {
 public:
  Graph() = default;

  Graph(std::size_t n, bool directed, double p)
      : n_(n), words_((n + 63) / 64), directed_(directed), p_(p),
        bits_(n * words_, 0) {}

  std::size_t n() const { return n_; }
  bool directed() const { return directed_; }
  double p() const { return p_; }
  std::size_t words_per_row() const { return words_; }

  bool has_edge(Vertex i, Vertex j) const {
    return (bits_[i * words_ + (j >> 6)] >> (j & 63)) & 1U;
  }

  // Edge in either direction.
  bool weakly_adjacent(Vertex i, Vertex j) const {
    return has_edge(i, j) || (directed_ && has_edge(j, i));
  }

  // Sets edge i->j (and j->i when undirected). Self-loops are ignored.
  void set_edge(Vertex i, Vertex j, bool present) {
    if (i == j) return;
    set_bit(i, j, present);
    if (!directed_) set_bit(j, i, present);
  }

  std::span<const std::uint64_t> row(Vertex i) const {
    return {bits_.data() + i * words_, words_};
  }

  std::size_t out_degree(Vertex i) const {
    std::size_t d = 0;
    for (auto w : row(i)) d += std::popcount(w);
    return d;
  }

  // Undirected: each edge counted once.
  std::size_t edge_count() const {
    std::size_t total = 0;
    for (auto w : bits_) total += std::popcount(w);
    return directed_ ? total : total / 2;
  }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  void set_bit(Vertex i, Vertex j, bool present) {
    auto& w = bits_[i * words_ + (j >> 6)];
    const std::uint64_t mask = std::uint64_t{1} << (j & 63);
    w = present ? (w | mask) : (w & ~mask);
  }

  std::size_t n_ = 0;
  std::size_t words_ = 0;
  bool directed_ = false;
  double p_ = 0.0;
  std::vector<std::uint64_t> bits_;
};

inline void check_vertex(const Graph& g, Vertex v) {
  if (v >= g.n()) {
    throw std::out_of_range("vertex " + std::to_string(v) +
                            " out of range for graph with n=" +
                            std::to_string(g.n()));
  }
}

// G(n, p): every unordered (undirected) or ordered (directed) pair carries an
// edge independently with probability p.
inline Graph gen_gnp(std::size_t n, double p, bool directed, Seed seed) {
  if (n < 1) throw std::invalid_argument("gen_gnp: n must be >= 1");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("gen_gnp: p must lie in [0, 1]");
  }
  Graph g(n, directed, p);
  Rng rng(seed);
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = directed ? 0 : i + 1; j < n; ++j) {
      if (i == j) continue;
      if (rng.bernoulli(p)) g.set_edge(i, j, true);
    }
  }
  return g;
}

// Total degree: neighbour count when undirected, in + out when directed.
inline std::size_t degree(const Graph& g, Vertex v) {
  check_vertex(g, v);
  if (!g.directed()) return g.out_degree(v);
  std::size_t in = 0;
  for (Vertex u = 0; u < g.n(); ++u) in += g.has_edge(u, v) ? 1 : 0;
  return g.out_degree(v) + in;
}

// Weak neighbourhood, ascending.
inline std::vector<Vertex> neighbors(const Graph& g, Vertex v) {
  check_vertex(g, v);
  std::vector<Vertex> out;
  for (Vertex u = 0; u < g.n(); ++u) {
    if (u != v && g.weakly_adjacent(v, u)) out.push_back(u);
  }
  return out;
}

// Per-vertex total degrees in one O(n^2 / 64) pass.
inline std::vector<std::size_t> degrees(const Graph& g) {
  std::vector<std::size_t> d(g.n(), 0);
  for (Vertex i = 0; i < g.n(); ++i) {
    d[i] += g.out_degree(i);
    if (g.directed()) {
      auto row = g.row(i);
      for (std::size_t w = 0; w < row.size(); ++w) {
        for (auto bits = row[w]; bits != 0; bits &= bits - 1) {
          d[w * 64 + std::countr_zero(bits)] += 1;
        }
      }
    }
  }
  return d;
}

}  // namespace pygon
