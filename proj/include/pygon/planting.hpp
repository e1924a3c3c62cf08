#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "pygon/graph.hpp"
#include "pygon/rng.hpp"

namespace pygon {

enum class SubgraphVariant { Clique, DAC, TwoPlex, Biclique, DenseGnq };

struct SubgraphKind {
  SubgraphVariant variant = SubgraphVariant::Clique;
  double q = 0.0;  // only meaningful for DenseGnq

  bool needs_directed() const { return variant == SubgraphVariant::DAC; }

  friend bool operator==(const SubgraphKind&, const SubgraphKind&) = default;
};

inline std::string_view to_string(SubgraphVariant v) {
  switch (v) {
    case SubgraphVariant::Clique: return "clique";
    case SubgraphVariant::DAC: return "dac";
    case SubgraphVariant::TwoPlex: return "twoplex";
    case SubgraphVariant::Biclique: return "biclique";
    case SubgraphVariant::DenseGnq: return "densegnq";
  }
  return "unknown";
}

inline SubgraphVariant parse_variant(std::string_view s) {
  for (auto v : {SubgraphVariant::Clique, SubgraphVariant::DAC,
                 SubgraphVariant::TwoPlex, SubgraphVariant::Biclique,
                 SubgraphVariant::DenseGnq}) {
    if (to_string(v) == s) return v;
  }
  throw std::invalid_argument("unknown subgraph kind '" + std::string(s) +
                              "' (expected clique|dac|twoplex|biclique|densegnq)");
}

struct PlantedInstance {
  Graph graph;
  std::vector<Vertex> planted;  // ascending
  SubgraphKind kind;
  std::vector<double> labels;  // 1 on planted vertices, 0 elsewhere

  std::size_t k() const { return planted.size(); }
};

inline void check_kind_compatible(const SubgraphKind& kind, const Graph& g) {
  if (kind.needs_directed() != g.directed()) {
    throw std::invalid_argument(
        std::string("subgraph kind '") + std::string(to_string(kind.variant)) +
        "' requires a " + (kind.needs_directed() ? "directed" : "undirected") +
        " host graph");
  }
  if (kind.variant == SubgraphVariant::DenseGnq &&
      !(kind.q > g.p() && kind.q <= 1.0)) {
    throw std::invalid_argument("densegnq requires p < q <= 1");
  }
}

// Replaces every pair inside a uniformly chosen k-set S with the target
// pattern. Pairs with an endpoint outside S are left untouched.
inline PlantedInstance plant(const Graph& host, const SubgraphKind& kind,
                             std::size_t k, Seed seed) {
  const std::size_t n = host.n();
  if (k > n) throw std::invalid_argument("plant: k exceeds n");
  check_kind_compatible(kind, host);
  if (kind.variant == SubgraphVariant::TwoPlex && k < 3) {
    throw std::invalid_argument("plant: twoplex needs k >= 3");
  }
  if (kind.variant == SubgraphVariant::Biclique && k < 2) {
    throw std::invalid_argument("plant: biclique needs k >= 2");
  }

  Rng select_rng(derive_seed(seed, 0));
  Rng pattern_rng(derive_seed(seed, 1));

  std::vector<Vertex> pool(n);
  for (Vertex v = 0; v < n; ++v) pool[v] = v;
  for (std::size_t i = 0; i < k; ++i) {
    std::swap(pool[i], pool[i + select_rng.below(n - i)]);
  }
  std::vector<Vertex> chosen(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));

  Graph g = host;
  auto clear_inside = [&] {
    for (auto a : chosen)
      for (auto b : chosen) g.set_edge(a, b, false);
  };

  switch (kind.variant) {
    case SubgraphVariant::Clique:
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) g.set_edge(chosen[a], chosen[b], true);
      break;
    case SubgraphVariant::DAC: {
      clear_inside();
      std::vector<Vertex> order = chosen;
      pattern_rng.shuffle(std::span<Vertex>(order));
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) g.set_edge(order[a], order[b], true);
      break;
    }
    case SubgraphVariant::TwoPlex: {
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b) g.set_edge(chosen[a], chosen[b], true);
      std::vector<Vertex> order = chosen;
      pattern_rng.shuffle(std::span<Vertex>(order));
      // Odd k leaves the last vertex unmatched at full degree.
      for (std::size_t a = 0; a + 1 < k; a += 2) g.set_edge(order[a], order[a + 1], false);
      break;
    }
    case SubgraphVariant::Biclique: {
      clear_inside();
      std::vector<Vertex> order = chosen;
      pattern_rng.shuffle(std::span<Vertex>(order));
      const std::size_t big = (k + 1) / 2;
      for (std::size_t a = 0; a < big; ++a)
        for (std::size_t b = big; b < k; ++b) g.set_edge(order[a], order[b], true);
      break;
    }
    case SubgraphVariant::DenseGnq:
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          g.set_edge(chosen[a], chosen[b], pattern_rng.bernoulli(kind.q));
      break;
  }

  std::sort(chosen.begin(), chosen.end());
  std::vector<double> labels(n, 0.0);
  for (auto v : chosen) labels[v] = 1.0;
  return PlantedInstance{std::move(g), std::move(chosen), kind, std::move(labels)};
}

struct PatternReport {
  bool valid = false;
  double density = 0.0;  // fraction of present unordered pairs inside S
};

namespace detail {

inline bool is_acyclic(const Graph& g, std::span<const Vertex> s) {
  // Kahn's algorithm on the induced directed subgraph.
  const std::size_t k = s.size();
  std::vector<std::size_t> indeg(k, 0);
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      if (a != b && g.has_edge(s[a], s[b])) ++indeg[b];
  std::vector<std::size_t> ready;
  for (std::size_t a = 0; a < k; ++a)
    if (indeg[a] == 0) ready.push_back(a);
  std::size_t seen = 0;
  while (!ready.empty()) {
    auto a = ready.back();
    ready.pop_back();
    ++seen;
    for (std::size_t b = 0; b < k; ++b) {
      if (a != b && g.has_edge(s[a], s[b]) && --indeg[b] == 0) ready.push_back(b);
    }
  }
  return seen == k;
}

}  // namespace detail

// Structural check of the induced subgraph on `s` against `kind`.
// DenseGnq has no fixed structure: always valid, with the density reported.
inline PatternReport verify_pattern(const Graph& g, std::span<const Vertex> s,
                                    const SubgraphKind& kind) {
  const std::size_t k = s.size();
  std::size_t present = 0;
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = a + 1; b < k; ++b)
      if (g.weakly_adjacent(s[a], s[b])) ++present;
  const std::size_t pairs = k * (k - (k > 0 ? 1 : 0)) / 2;
  PatternReport report;
  report.density = pairs == 0 ? 1.0 : static_cast<double>(present) / static_cast<double>(pairs);

  switch (kind.variant) {
    case SubgraphVariant::Clique:
      report.valid = present == pairs;
      break;
    case SubgraphVariant::DAC: {
      if (!g.directed()) break;
      bool one_way = true;
      for (std::size_t a = 0; a < k && one_way; ++a)
        for (std::size_t b = a + 1; b < k && one_way; ++b)
          one_way = g.has_edge(s[a], s[b]) != g.has_edge(s[b], s[a]);
      report.valid = one_way && detail::is_acyclic(g, s);
      break;
    }
    case SubgraphVariant::TwoPlex: {
      // Every vertex misses at most one other: the absent pairs form a matching.
      bool ok = true;
      for (std::size_t a = 0; a < k && ok; ++a) {
        std::size_t inner = 0;
        for (std::size_t b = 0; b < k; ++b)
          if (a != b && g.weakly_adjacent(s[a], s[b])) ++inner;
        ok = inner + 2 >= k;
      }
      report.valid = ok;
      break;
    }
    case SubgraphVariant::Biclique: {
      if (k < 2) break;
      // Side of s[0] = s[0] plus its non-neighbours; the rest is the other side.
      std::vector<int> side(k, 0);
      for (std::size_t b = 1; b < k; ++b) side[b] = g.weakly_adjacent(s[0], s[b]) ? 1 : 0;
      bool ok = true;
      std::size_t ones = 0;
      for (std::size_t a = 0; a < k; ++a) ones += static_cast<std::size_t>(side[a]);
      for (std::size_t a = 0; a < k && ok; ++a)
        for (std::size_t b = a + 1; b < k && ok; ++b)
          ok = g.weakly_adjacent(s[a], s[b]) == (side[a] != side[b]);
      const std::size_t zeros = k - ones;
      const std::size_t hi = (k + 1) / 2;
      const std::size_t lo = k / 2;
      report.valid = ok && ((ones == hi && zeros == lo) || (ones == lo && zeros == hi));
      break;
    }
    case SubgraphVariant::DenseGnq:
      report.valid = true;
      break;
  }
  return report;
}

inline PatternReport verify_pattern(const PlantedInstance& inst) {
  return verify_pattern(inst.graph, inst.planted, inst.kind);
}

// `count` independent host graphs with planted subgraphs. Instance i uses
// seeds derived from (seed, i), so any single instance is regenerable alone.
inline PlantedInstance generate_instance(std::size_t n, double p, const SubgraphKind& kind,
                                         std::size_t k, Seed seed, std::size_t index) {
  const Seed base = derive_seed(seed, index);
  Graph host = gen_gnp(n, p, kind.needs_directed(), derive_seed(base, 0));
  return plant(host, kind, k, derive_seed(base, 1));
}

inline std::vector<PlantedInstance> generate_dataset(std::size_t n, double p,
                                                     const SubgraphKind& kind, std::size_t k,
                                                     std::size_t count, Seed seed) {
  if (count < 1) throw std::invalid_argument("generate_dataset: count must be >= 1");
  std::vector<PlantedInstance> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(generate_instance(n, p, kind, k, seed, i));
  return out;
}

}  // namespace pygon
