#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deplab/config.hpp"
#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/rng.hpp"
#include "deplab/scalar.hpp"

namespace deplab {

// A locally-determined random graph: each vertex independently draws a color
// from its own palette, and each edge's presence is a fixed 0/1 function of
// its two endpoint colors.  The vertex count is not capped at 16 — models
// are sampled and analyzed without materializing the graph distribution —
// but conversion to an explicit distribution is.
struct ColoringModel {
  int n = 2;
  std::vector<std::vector<Scalar>> palettes;  // palettes[v][c] = P(color c at v)
  // Edge rule for u < v: matrix indexed [color of u][color of v].
  std::map<std::pair<int, int>, std::vector<std::vector<std::uint8_t>>> edge_rules;

  int colors(int v) const { return static_cast<int>(palettes[v].size()); }

  bool edge_present(int u, int v, int cu, int cv) const {
    if (u > v) {
      std::swap(u, v);
      std::swap(cu, cv);
    }
    return edge_rules.at({u, v})[cu][cv] != 0;
  }
};

using Coloring = std::vector<int>;

namespace detail {

inline ScalarKind fold_model_kind(ScalarKind acc, const Scalar& p) {
  return fold_kind(acc, p.kind());
}

}  // namespace detail

// The one scalar representation needed to hold every palette probability
// (rational entries embed in either other kind).
inline ScalarKind model_kind(const ColoringModel& m) {
  ScalarKind acc = ScalarKind::rational;
  for (const auto& palette : m.palettes)
    for (const auto& p : palette) acc = detail::fold_model_kind(acc, p);
  return acc;
}

inline void validate_model(const ColoringModel& m) {
  if (m.n < 2) throw validation_error("a coloring model needs at least 2 vertices");
  if (static_cast<int>(m.palettes.size()) != m.n)
    throw validation_error("palette count does not match the vertex count");
  for (int v = 0; v < m.n; ++v) {
    if (m.palettes[v].empty())
      throw validation_error("vertex " + std::to_string(v) + " has an empty palette");
    Scalar total(Rational(0));
    bool has_float = false;
    for (const auto& p : m.palettes[v]) {
      has_float = has_float || p.is_bigfloat();
      if (sign(p) < 0) {
        if (!(p.is_bigfloat() && approx_zero(p.as_bigfloat())))
          throw validation_error("negative color probability at vertex " +
                                 std::to_string(v));
        continue;
      }
      total += p;
    }
    const Scalar one(Rational(1));
    const bool ok = has_float ? equal_within_tolerance(total, one)
                              : compare(total, one) == 0;
    if (!ok)
      throw validation_error("color probabilities at vertex " + std::to_string(v) +
                             " sum to " + describe(total) + ", not 1");
  }
  model_kind(m);  // rejects palettes mixing extensions with floats
  for (int u = 0; u < m.n; ++u) {
    for (int v = u + 1; v < m.n; ++v) {
      const auto it = m.edge_rules.find({u, v});
      if (it == m.edge_rules.end())
        throw validation_error("missing edge rule for {" + std::to_string(u) + "," +
                               std::to_string(v) + "}");
      const auto& matrix = it->second;
      if (static_cast<int>(matrix.size()) != m.colors(u))
        throw validation_error("edge rule rows do not match the palette");
      for (const auto& row : matrix) {
        if (static_cast<int>(row.size()) != m.colors(v))
          throw validation_error("edge rule columns do not match the palette");
        for (const auto cell : row) {
          if (cell != 0 && cell != 1)
            throw validation_error("edge rules must be 0/1 valued");
        }
      }
    }
  }
  if (m.edge_rules.size() != static_cast<std::size_t>(complete_edge_count(m.n)))
    throw validation_error("unexpected edge-rule keys present");
}

// The graph produced by one fixed coloring (vertex count must fit a Graph).
inline Graph realize(const ColoringModel& m, const Coloring& c) {
  if (m.n > kMaxVertices)
    throw usage_error("realized graphs need at most 16 vertices");
  if (static_cast<int>(c.size()) != m.n)
    throw usage_error("coloring length does not match the vertex count");
  for (int v = 0; v < m.n; ++v) {
    if (c[v] < 0 || c[v] >= m.colors(v))
      throw usage_error("coloring uses a color outside vertex " +
                        std::to_string(v) + "'s palette");
  }
  Graph g(m.n, 0);
  for (int u = 0; u < m.n; ++u)
    for (int v = u + 1; v < m.n; ++v)
      if (m.edge_present(u, v, c[u], c[v])) g.mask |= edge_bit(u, v, m.n);
  return g;
}

inline Scalar edge_marginal(const ColoringModel& m, int u, int v) {
  if (u > v) std::swap(u, v);
  const auto& matrix = m.edge_rules.at({u, v});
  Scalar acc(Rational(0));
  for (int cu = 0; cu < m.colors(u); ++cu)
    for (int cv = 0; cv < m.colors(v); ++cv)
      if (matrix[cu][cv]) acc += m.palettes[u][cu] * m.palettes[v][cv];
  return acc;
}

inline Scalar model_min_marginal(const ColoringModel& m) {
  std::optional<Scalar> best;
  for (int u = 0; u < m.n; ++u) {
    for (int v = u + 1; v < m.n; ++v) {
      Scalar p = edge_marginal(m, u, v);
      if (!best || compare(p, *best) < 0) best = std::move(p);
    }
  }
  return *best;
}

// Number of positive-probability colorings, or nullopt on overflow.
inline std::optional<std::int64_t> expansion_size(const ColoringModel& m) {
  std::int64_t product = 1;
  for (int v = 0; v < m.n; ++v) {
    std::int64_t live = 0;
    for (const auto& p : m.palettes[v])
      if (sign(p) > 0) ++live;
    if (live == 0) return 0;
    if (product > (std::int64_t(1) << 62) / live) return std::nullopt;
    product *= live;
  }
  return product;
}

// Pushforward to the explicit graph distribution, summing the probability of
// every positive-probability coloring onto the graph it realizes.  Guarded
// by the expansion cap (overridable via DEPLAB_CAP_EXPANSION).
inline ExplicitDistribution to_explicit(const ColoringModel& m) {
  validate_model(m);
  const auto size = expansion_size(m);
  if (!size || *size > config::expansion_cap()) {
    throw resource_error(
        "expansion cap",
        "expanding this model needs " + (size ? std::to_string(*size) : std::string(">2^62")) +
            " colorings, beyond the expansion cap " +
            std::to_string(config::expansion_cap()) +
            " (override with DEPLAB_CAP_EXPANSION or set_expansion_cap)");
  }
  if (m.n > kMaxVertices)
    throw usage_error("explicit distributions need at most 16 vertices");

  std::vector<std::vector<std::pair<int, Scalar>>> live(m.n);
  for (int v = 0; v < m.n; ++v)
    for (int c = 0; c < m.colors(v); ++c)
      if (sign(m.palettes[v][c]) > 0) live[v].emplace_back(c, m.palettes[v][c]);

  std::map<EdgeMask, Scalar> mass;
  Coloring coloring(m.n, 0);
  auto walk = [&](auto&& self, int v, const Scalar& weight) -> void {
    if (v == m.n) {
      const Graph g = realize(m, coloring);
      auto [it, fresh] = mass.emplace(g.mask, weight);
      if (!fresh) it->second += weight;
      return;
    }
    for (const auto& [c, p] : live[v]) {
      coloring[v] = c;
      self(self, v + 1, weight * p);
    }
  };
  walk(walk, 0, Scalar(Rational(1)));
  return make_distribution(m.n, model_kind(m), std::move(mass));
}

// A sampled graph on arbitrarily many vertices: adjacency bit rows, just
// enough structure to test connectivity and (for small n) convert to Graph.
struct SampledGraph {
  int n = 1;
  int words_per_row = 1;
  std::vector<std::uint64_t> bits;

  explicit SampledGraph(int n_in)
      : n(n_in), words_per_row((n_in + 63) / 64),
        bits(static_cast<std::size_t>(n_in) * words_per_row, 0) {}

  void add_edge(int u, int v) {
    bits[static_cast<std::size_t>(u) * words_per_row + v / 64] |= std::uint64_t(1)
                                                                  << (v % 64);
    bits[static_cast<std::size_t>(v) * words_per_row + u / 64] |= std::uint64_t(1)
                                                                  << (u % 64);
  }

  bool has_edge(int u, int v) const {
    return (bits[static_cast<std::size_t>(u) * words_per_row + v / 64] >>
            (v % 64)) &
           1;
  }

  bool connected() const {
    if (n <= 1) return true;
    std::vector<std::uint64_t> seen(words_per_row, 0);
    std::vector<std::uint64_t> frontier(words_per_row, 0);
    seen[0] = frontier[0] = 1;
    int reached = 1;
    while (true) {
      std::vector<std::uint64_t> next(words_per_row, 0);
      bool any = false;
      for (int w = 0; w < words_per_row; ++w) {
        std::uint64_t chunk = frontier[w];
        while (chunk != 0) {
          const int v = w * 64 + __builtin_ctzll(chunk);
          chunk &= chunk - 1;
          const std::uint64_t* row = &bits[static_cast<std::size_t>(v) * words_per_row];
          for (int x = 0; x < words_per_row; ++x) next[x] |= row[x];
        }
      }
      for (int x = 0; x < words_per_row; ++x) {
        next[x] &= ~seen[x];
        seen[x] |= next[x];
        reached += __builtin_popcountll(next[x]);
        any = any || next[x] != 0;
      }
      if (reached == n) return true;
      if (!any) return false;
      frontier.swap(next);
    }
  }

  Graph to_graph() const {
    if (n > kMaxVertices) throw usage_error("sampled graph too large for a Graph");
    Graph g(n, 0);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (has_edge(u, v)) g.mask |= edge_bit(u, v, n);
    return g;
  }
};

// Cached cumulative palette weights for fast repeated sampling.
class ModelSampler {
 public:
  explicit ModelSampler(const ColoringModel& m) : model_(&m), cdf_(m.n) {
    for (int v = 0; v < m.n; ++v) {
      double acc = 0.0;
      cdf_[v].reserve(m.palettes[v].size());
      for (const auto& p : m.palettes[v]) {
        acc += to_bigfloat(p).to_double();
        cdf_[v].push_back(acc);
      }
      cdf_[v].back() = 1.0;  // absorb rounding in the final bucket
    }
    rules_.reserve(m.edge_rules.size());
    for (int u = 0; u < m.n; ++u)
      for (int v = u + 1; v < m.n; ++v) rules_.push_back(&m.edge_rules.at({u, v}));
  }

  Coloring sample_coloring(Rng& rng) const {
    Coloring c(model_->n);
    for (int v = 0; v < model_->n; ++v) {
      const double u = rng.next_unit();
      const auto& cum = cdf_[v];
      // First bucket whose cumulative weight exceeds u; the last bucket is
      // pinned at 1.0, so the fallback only guards u == 1.0 exactly.
      const auto it = std::upper_bound(cum.begin(), cum.end(), u);
      c[v] = it == cum.end() ? static_cast<int>(cum.size()) - 1
                             : static_cast<int>(it - cum.begin());
    }
    return c;
  }

  SampledGraph sample_graph(Rng& rng) const {
    const Coloring c = sample_coloring(rng);
    SampledGraph g(model_->n);
    std::size_t e = 0;
    for (int u = 0; u < model_->n; ++u)
      for (int v = u + 1; v < model_->n; ++v, ++e)
        if ((*rules_[e])[c[u]][c[v]] != 0) g.add_edge(u, v);
    return g;
  }

 private:
  const ColoringModel* model_;
  std::vector<std::vector<double>> cdf_;
  // Rule matrices in edge-index order, resolved once so sampling avoids the
  // per-edge map lookup.
  std::vector<const std::vector<std::vector<std::uint8_t>>*> rules_;
};

// One independent draw: color every vertex, then apply the edge rules.
// Works for vertex counts far beyond the explicit-distribution cap.
inline SampledGraph sample_model(const ColoringModel& m, Rng& rng) {
  return ModelSampler(m).sample_graph(rng);
}

}  // namespace deplab
