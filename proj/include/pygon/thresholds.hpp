#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>

#include "pygon/planting.hpp"

namespace pygon {

// Expected number of copies of a pattern in a pattern-free G(n, p), and the
// smallest size at which that expectation drops to 1.
struct ThresholdQuery {
  SubgraphKind kind;
  std::size_t n = 0;
  double p = 0.5;

  void validate() const {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("threshold query: need 0 < p < 1");
    if (kind.variant == SubgraphVariant::DenseGnq && !(kind.q > p && kind.q <= 1.0)) {
      throw std::invalid_argument("threshold query: densegnq needs p < q <= 1");
    }
  }
};

inline double log_factorial(double m) { return std::lgamma(m + 1.0); }

inline double log_binomial(double n, double r) {
  return log_factorial(n) - log_factorial(r) - log_factorial(n - r);
}

// ceil(C(k,2) * q), tolerant of representation error such as 45 * 0.9.
inline double dense_edge_quota(std::size_t k, double q) {
  const double pairs = 0.5 * static_cast<double>(k) * static_cast<double>(k - 1);
  return std::ceil(pairs * q - 1e-9);
}

// ln E[X_k], evaluated exactly with log-gamma.
inline double log_expected_count(const ThresholdQuery& query, std::size_t k) {
  query.validate();
  if (k < 2 || k > query.n) {
    throw std::out_of_range("log_expected_count: need 2 <= k <= n (k=" + std::to_string(k) +
                            ", n=" + std::to_string(query.n) + ")");
  }
  const double n = static_cast<double>(query.n);
  const double kk = static_cast<double>(k);
  const double p = query.p;
  const double pairs = 0.5 * kk * (kk - 1.0);
  const double lp = std::log(p);
  const double lq = std::log1p(-p);

  switch (query.kind.variant) {
    case SubgraphVariant::Clique:
      return log_binomial(n, kk) + pairs * lp;
    case SubgraphVariant::DAC:
      return log_binomial(n, kk) + log_factorial(kk) + pairs * (lp + lq);
    case SubgraphVariant::TwoPlex: {
      const double half = std::floor(kk / 2.0);
      const double splits = log_factorial(kk) - half * std::log(2.0) - log_factorial(half);
      return log_binomial(n, kk) + splits + (pairs - half) * lp + half * lq;
    }
    case SubgraphVariant::Biclique: {
      const double hi = std::ceil(kk / 2.0);
      const double lo = std::floor(kk / 2.0);
      return log_binomial(n, hi) + log_binomial(n - hi, lo) + hi * lo * lp +
             (pairs - hi * lo) * lq;
    }
    case SubgraphVariant::DenseGnq: {
      const double quota = dense_edge_quota(k, query.kind.q);
      return log_binomial(n, kk) + log_binomial(pairs, quota) + quota * lp;
    }
  }
  return 0.0;
}

// Smallest k >= 2 with E[X_k] <= 1, scanning upward.
inline std::size_t threshold_scan(const ThresholdQuery& query) {
  query.validate();
  for (std::size_t k = 2; k <= query.n; ++k) {
    if (log_expected_count(query, k) <= 0.0) return k;
  }
  throw std::runtime_error("threshold_scan: no k <= n with E[X_k] <= 1");
}

// Asymptotic threshold with the Theta(1) term dropped.
inline double closed_form_threshold(const ThresholdQuery& query) {
  query.validate();
  const double n = static_cast<double>(query.n);
  const double p = query.p;
  auto log_base = [](double base, double x) { return std::log(x) / std::log(base); };
  switch (query.kind.variant) {
    case SubgraphVariant::Clique: {
      const double l = log_base(1.0 / p, n);
      return 2.0 * l - 2.0 * log_base(1.0 / p, l);
    }
    case SubgraphVariant::DAC:
      return 2.0 * log_base(1.0 / (p * (1.0 - p)), n);
    case SubgraphVariant::TwoPlex: {
      const double l = log_base(1.0 / p, n);
      return 2.0 * l - log_base(1.0 / p, l);
    }
    case SubgraphVariant::Biclique: {
      const double base = 1.0 / (p * (1.0 - p));
      const double l = log_base(base, n);
      return 4.0 * l - 4.0 * log_base(base, l);
    }
    case SubgraphVariant::DenseGnq: {
      const double q = query.kind.q;
      const double base = q / p;
      const double l = log_base(base, n);
      return (2.0 / q) * l - (2.0 / q) * log_base(base, l);
    }
  }
  return 0.0;
}

}  // namespace pygon
