// Test-only oracles: independent computations the implementation is checked
// against. Everything here is deliberately written the slow, obvious way and
// shares no code with the library paths it verifies.
#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <vector>

#include "osn/graph.hpp"
#include "osn/rng.hpp"

namespace oracle {

using Matrix = std::vector<std::vector<double>>;

/// MHRW transition matrix straight from its definition:
/// P[u][w] = (1/k_u) min(1, k_u/k_w) for neighbors, diagonal soaks the rest.
inline Matrix mhrw_matrix(const osn::SocialGraph& g) {
  const std::size_t n = g.node_count();
  Matrix p(n, std::vector<double>(n, 0.0));
  for (osn::NodeId u = 0; u < n; ++u) {
    const double ku = g.degree(u);
    double off = 0.0;
    for (osn::NodeId w : g.neighbors(u)) {
      p[u][w] = (1.0 / ku) * std::min(1.0, ku / static_cast<double>(g.degree(w)));
      off += p[u][w];
    }
    p[u][u] = 1.0 - off;
  }
  return p;
}

inline Matrix rw_matrix(const osn::SocialGraph& g) {
  const std::size_t n = g.node_count();
  Matrix p(n, std::vector<double>(n, 0.0));
  for (osn::NodeId u = 0; u < n; ++u) {
    for (osn::NodeId w : g.neighbors(u)) {
      p[u][w] = 1.0 / static_cast<double>(g.degree(u));
    }
  }
  return p;
}

/// Principal eigenvector (stationary distribution) by power iteration of the
/// half-lazy transform (P+I)/2: identical stationary vector, and the
/// powering converges for periodic chains (bipartite graphs) too. Implemented
/// as repeated squaring, so the result is the t -> infinity row limit.
inline std::vector<double> stationary(Matrix p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      p[i][j] = 0.5 * p[i][j] + (i == j ? 0.5 : 0.0);
    }
  }
  Matrix q = p;
  for (int step = 0; step < 64; ++step) {
    Matrix next(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        const double qik = q[i][k];
        if (qik == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) next[i][j] += qik * q[k][j];
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (double v : next[i]) row += v;
      for (double& v : next[i]) v /= row;
    }
    q = std::move(next);
  }
  return q[0];
}

inline double brute_clustering_node(const osn::SocialGraph& g, osn::NodeId v) {
  const auto nb = g.neighbors(v);
  std::size_t closed = 0;
  for (std::size_t i = 0; i < nb.size(); ++i) {
    for (std::size_t j = i + 1; j < nb.size(); ++j) {
      for (osn::NodeId x : g.neighbors(nb[i])) {
        if (x == nb[j]) {
          ++closed;
          break;
        }
      }
    }
  }
  return 2.0 * static_cast<double>(closed) /
         (static_cast<double>(nb.size()) * static_cast<double>(nb.size() - 1));
}

inline double brute_clustering_global(const osn::SocialGraph& g) {
  double sum = 0.0;
  std::size_t used = 0;
  for (osn::NodeId v = 0; v < g.node_count(); ++v) {
    if (g.degree(v) < 2) continue;
    sum += brute_clustering_node(g, v);
    ++used;
  }
  return sum / static_cast<double>(used);
}

inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline double brute_assortativity(const osn::SocialGraph& g) {
  std::vector<double> x, y;
  for (osn::NodeId u = 0; u < g.node_count(); ++u) {
    for (osn::NodeId w : g.neighbors(u)) {
      x.push_back(g.degree(u));
      y.push_back(g.degree(w));
    }
  }
  return pearson(x, y);
}

/// Exact upper binomial tail for rational p = num/den, n <= 20, evaluated in
/// unsigned 128-bit integer arithmetic: sum C(n,i) num^i (den-num)^(n-i) / den^n.
inline double exact_binomial_tail(unsigned n, unsigned num, unsigned den,
                                  unsigned i0) {
  using u128 = unsigned __int128;
  auto powi = [](u128 base, unsigned e) {
    u128 r = 1;
    for (unsigned i = 0; i < e; ++i) r *= base;
    return r;
  };
  auto choose = [](unsigned nn, unsigned kk) {
    u128 r = 1;
    for (unsigned i = 1; i <= kk; ++i) {
      r = r * (nn - kk + i) / i;
    }
    return r;
  };
  u128 sum = 0;
  for (unsigned i = i0; i <= n; ++i) {
    sum += choose(n, i) * powi(num, i) * powi(den - num, n - i);
  }
  return static_cast<double>(static_cast<long double>(sum) /
                             static_cast<long double>(powi(den, n)));
}

/// AR(1) series with unit normal innovations.
inline std::vector<double> ar1(std::size_t n, double phi, osn::Rng& rng) {
  std::vector<double> x(n);
  x[0] = rng.normal();
  for (std::size_t t = 1; t < n; ++t) x[t] = phi * x[t - 1] + rng.normal();
  return x;
}

inline double autocorrelation(const std::vector<double>& x, std::size_t lag) {
  const auto n = x.size();
  double mean = 0.0;
  for (double v : x) mean += v;
  mean /= static_cast<double>(n);
  double num = 0.0, den = 0.0;
  for (std::size_t t = 0; t < n; ++t) {
    den += (x[t] - mean) * (x[t] - mean);
    if (t + lag < n) num += (x[t] - mean) * (x[t + lag] - mean);
  }
  return num / den;
}

/// Pareto(alpha) sample with minimum k_min (inverse transform).
inline std::vector<double> pareto_sample(std::size_t n, double alpha, double k_min,
                                         osn::Rng& rng) {
  std::vector<double> out(n);
  for (auto& v : out) {
    double u = rng.real();
    while (u <= 0.0) u = rng.real();
    v = k_min * std::pow(u, -1.0 / (alpha - 1.0));
  }
  return out;
}

/// Total variation distance between an empirical count map and a probability
/// vector over node ids.
inline double visit_tv(const std::vector<std::uint64_t>& visits,
                       const std::vector<double>& target) {
  std::uint64_t total = 0;
  for (auto c : visits) total += c;
  double tv = 0.0;
  for (std::size_t i = 0; i < visits.size(); ++i) {
    tv += std::abs(static_cast<double>(visits[i]) / static_cast<double>(total) -
                   target[i]);
  }
  return 0.5 * tv;
}

}  // namespace oracle
