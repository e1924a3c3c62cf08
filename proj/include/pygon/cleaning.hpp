#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>

#include "pygon/graph.hpp"
#include "pygon/planting.hpp"

namespace pygon {

struct CandidateSet {
  std::vector<Vertex> vertices;  // descending score
  std::vector<double> source_scores;
};

// Indices of the m largest entries, descending; ties by ascending index.
inline std::vector<Vertex> top_indices(std::span<const double> values, std::size_t m) {
  if (m > values.size()) throw std::invalid_argument("top_indices: m exceeds the number of values");
  std::vector<Vertex> idx(values.size());
  std::iota(idx.begin(), idx.end(), Vertex{0});
  auto by_value = [&](Vertex a, Vertex b) { return values[a] > values[b] || (values[a] == values[b] && a < b); };
  std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(m), idx.end(), by_value);
  idx.resize(m);
  return idx;
}

inline CandidateSet top_candidates(std::span<const double> scores, std::size_t m) {
  return CandidateSet{top_indices(scores, m), std::vector<double>(scores.begin(), scores.end())};
}

struct EigenPair {
  Eigen::VectorXd vector;  // unit norm
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
};

// Dominant (largest |lambda|) eigenpair of a symmetric matrix by power
// iteration from the all-ones vector. Convergence is measured up to sign so
// negative dominant eigenvalues also settle.
template <typename Matrix>
EigenPair power_iteration(const Matrix& m, std::size_t max_iters, double tol) {
  if (m.rows() != m.cols()) throw std::invalid_argument("power_iteration: matrix must be square");
  if (max_iters < 1) throw std::invalid_argument("power_iteration: max_iters must be >= 1");
  const auto n = m.rows();
  EigenPair out;
  Eigen::VectorXd u = Eigen::VectorXd::Ones(n) / std::sqrt(static_cast<double>(n));
  Eigen::VectorXd next(n);
  for (std::size_t it = 1; it <= max_iters; ++it) {
    next.noalias() = m * u;
    const double norm = next.norm();
    out.iterations = it;
    if (norm == 0.0) break;  // start vector annihilated
    next /= norm;
    const double diff = std::min((next - u).norm(), (next + u).norm());
    u.swap(next);
    if (diff < tol) {
      out.converged = true;
      break;
    }
  }
  out.value = u.dot(m * u);
  out.vector = std::move(u);
  return out;
}

// +1 for weakly adjacent candidate pairs, -1 otherwise, 1 on the diagonal.
inline Eigen::MatrixXd candidate_sign_matrix(const Graph& g, std::span<const Vertex> cands) {
  const auto m = static_cast<Eigen::Index>(cands.size());
  Eigen::MatrixXd a(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    a(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < m; ++j) {
      const double v = g.weakly_adjacent(cands[static_cast<std::size_t>(i)], cands[static_cast<std::size_t>(j)]) ? 1.0 : -1.0;
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  return a;
}

struct CleanResult {
  std::vector<Vertex> vertices;  // ascending
  bool success = false;
  std::size_t rounds = 0;  // refinement rounds executed
  bool spectral_converged = false;
};

inline constexpr std::size_t kDefaultCleanRounds = 30;

// Spectral seed on the candidate sign matrix, then repeated top-k
// reselection over all vertices by the number of current members each vertex
// is weakly adjacent to (a member counts itself).
inline CleanResult clean(const Graph& g, const CandidateSet& cands, std::size_t k, const SubgraphKind& kind,
                         std::size_t max_rounds = kDefaultCleanRounds) {
  if (cands.vertices.size() < k) throw std::invalid_argument("clean: fewer candidates than k");
  if (k == 0) throw std::invalid_argument("clean: k must be positive");
  CleanResult out;

  const auto sign = candidate_sign_matrix(g, cands.vertices);
  const auto eig = power_iteration(sign, 1000, 1e-10);
  out.spectral_converged = eig.converged;
  std::vector<double> magnitude(cands.vertices.size());
  for (std::size_t i = 0; i < magnitude.size(); ++i) magnitude[i] = std::abs(eig.vector(static_cast<Eigen::Index>(i)));
  // Tie-break by vertex index, not candidate position.
  std::vector<std::size_t> pos(magnitude.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::stable_sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    if (magnitude[a] != magnitude[b]) return magnitude[a] > magnitude[b];
    return cands.vertices[a] < cands.vertices[b];
  });
  std::vector<Vertex> current;
  for (std::size_t i = 0; i < k; ++i) current.push_back(cands.vertices[pos[i]]);
  std::sort(current.begin(), current.end());

  auto passes = [&](const std::vector<Vertex>& s) { return verify_pattern(g, s, kind).valid; };
  std::vector<char> member(g.n(), 0);
  std::vector<double> counts(g.n(), 0.0);
  while (!passes(current) && out.rounds < max_rounds) {
    ++out.rounds;
    std::fill(member.begin(), member.end(), 0);
    for (auto v : current) member[v] = 1;
    for (Vertex v = 0; v < g.n(); ++v) {
      double c = member[v] ? 1.0 : 0.0;
      for (auto w : current)
        if (w != v && g.weakly_adjacent(v, w)) c += 1.0;
      counts[v] = c;
    }
    auto next = top_indices(counts, k);
    std::sort(next.begin(), next.end());
    if (next == current) break;  // fixed point; more rounds change nothing
    current = std::move(next);
  }
  out.success = passes(current);
  out.vertices = std::move(current);
  return out;
}

}  // namespace pygon
