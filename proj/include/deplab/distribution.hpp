#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>

#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/rng.hpp"
#include "deplab/scalar.hpp"

namespace deplab {

// A conjunction of edge requirements: every edge in `present` must be in the
// graph, every edge in `absent` must not be.  The two masks are disjoint.
struct EdgePattern {
  EdgeMask present = 0;
  EdgeMask absent = 0;
};

// A probability distribution over graphs on n labeled vertices, stored
// sparsely: only graphs with nonzero probability appear.  All probabilities
// share one scalar representation (`kind`); rational entries are always
// admissible since they embed in the other two.
struct ExplicitDistribution {
  int n = 2;
  ScalarKind kind = ScalarKind::rational;
  std::map<EdgeMask, Scalar> entries;
};

namespace detail {

inline void check_entry_kind(ScalarKind declared, const Scalar& p,
                             std::optional<Int>& radicand) {
  switch (p.kind()) {
    case ScalarKind::rational:
      return;  // embeds everywhere
    case ScalarKind::quadext: {
      if (declared != ScalarKind::quadext)
        throw validation_error("quadratic-extension entry in a " +
                               std::string(kind_name(declared)) + " distribution");
      const Int& d = p.as_quadext().d;
      if (!radicand) {
        radicand = d;
      } else if (*radicand != d) {
        throw validation_error("entries mix radicands " + radicand->str() + " and " +
                               d.str());
      }
      return;
    }
    case ScalarKind::bigfloat:
      if (declared != ScalarKind::bigfloat)
        throw validation_error("float entry in a " + std::string(kind_name(declared)) +
                               " distribution");
      return;
  }
}

}  // namespace detail

// Validates and normalizes a distribution: probabilities must be
// non-negative (floats may dip below zero by at most the comparison
// tolerance, and are clamped), zero entries are dropped, and the total mass
// must equal one — exactly for exact kinds, within tolerance for floats.
inline ExplicitDistribution make_distribution(int n, ScalarKind kind,
                                              std::map<EdgeMask, Scalar> raw) {
  if (n < 2 || n > kMaxVertices)
    throw usage_error("distribution vertex count must be in [2, 16]");
  const EdgeMask full = complete_mask(n);

  ExplicitDistribution dist;
  dist.n = n;
  dist.kind = kind;

  std::optional<Int> radicand;
  Scalar total(Rational(0));
  for (auto& [mask, p] : raw) {
    if (mask & ~full)
      throw validation_error("support graph has edges beyond the complete graph");
    detail::check_entry_kind(kind, p, radicand);
    Scalar prob = p;
    if (sign(prob) < 0) {
      if (prob.is_bigfloat() && approx_zero(prob.as_bigfloat())) {
        prob = Scalar(Rational(0));  // clamp float noise at zero
      } else {
        throw validation_error("negative probability in distribution");
      }
    }
    if (is_zero(prob)) continue;
    total += prob;
    dist.entries.emplace(mask, std::move(prob));
  }

  const Scalar one(Rational(1));
  const bool mass_ok = (kind == ScalarKind::bigfloat)
                           ? equal_within_tolerance(total, one)
                           : compare(total, one) == 0;
  if (!mass_ok)
    throw validation_error("probabilities sum to " + describe(total) + ", not 1");
  return dist;
}

inline void require_same_space(const ExplicitDistribution& c,
                               const ExplicitDistribution& d) {
  if (c.n != d.n)
    throw usage_error("distributions live on different vertex counts");
}

// Probability that every edge of `pattern.present` occurs and none of
// `pattern.absent` does.
inline Scalar prob_pattern(const ExplicitDistribution& d, const EdgePattern& pattern) {
  const EdgeMask full = complete_mask(d.n);
  if ((pattern.present | pattern.absent) & ~full)
    throw usage_error("pattern mentions edges beyond the complete graph");
  if (pattern.present & pattern.absent)
    throw usage_error("pattern requires an edge both present and absent");
  Scalar acc(Rational(0));
  for (const auto& [mask, p] : d.entries) {
    if ((mask & pattern.present) == pattern.present && (mask & pattern.absent) == 0)
      acc += p;
  }
  return acc;
}

inline Scalar marginal(const ExplicitDistribution& d, int i, int j) {
  return prob_pattern(d, {edge_bit(i, j, d.n), 0});
}

inline Scalar min_marginal(const ExplicitDistribution& d) {
  std::optional<Scalar> best;
  for (int e = 0; e < complete_edge_count(d.n); ++e) {
    Scalar m = prob_pattern(d, {EdgeMask(1) << e, 0});
    if (!best || compare(m, *best) < 0) best = std::move(m);
  }
  return *best;
}

// Probability that the subgraph induced on the vertex set w equals h (with
// w's vertices relabeled 0..|w|-1 ascending).
inline Scalar prob_induced(const ExplicitDistribution& d, VertexMask w, const Graph& h) {
  const auto verts = vertices_of(w);
  if (verts.empty()) throw usage_error("induced-pattern vertex set is empty");
  if (verts.back() >= d.n) throw usage_error("vertex set exceeds the graph");
  if (h.n != static_cast<int>(verts.size()))
    throw usage_error("pattern graph size does not match the vertex set");
  EdgePattern pattern;
  for (std::size_t a = 0; a < verts.size(); ++a) {
    for (std::size_t b = a + 1; b < verts.size(); ++b) {
      const EdgeMask bit = edge_bit(verts[a], verts[b], d.n);
      if (h.has_edge(static_cast<int>(a), static_cast<int>(b))) {
        pattern.present |= bit;
      } else {
        pattern.absent |= bit;
      }
    }
  }
  return prob_pattern(d, pattern);
}

inline Scalar prob_connected(const ExplicitDistribution& d) {
  Scalar acc(Rational(0));
  for (const auto& [mask, p] : d.entries) {
    if (is_connected(Graph(d.n, mask))) acc += p;
  }
  return acc;
}

namespace detail {

inline ScalarKind fold_kind(ScalarKind a, ScalarKind b) {
  if (a == b) return a;
  if (a == ScalarKind::rational) return b;
  if (b == ScalarKind::rational) return a;
  throw kind_error("cannot mix quadratic-extension and float distributions");
}

}  // namespace detail

// The mixture alpha * c + (1 - alpha) * d on a common vertex set.
inline ExplicitDistribution convex_combine(const Scalar& alpha,
                                           const ExplicitDistribution& c,
                                           const ExplicitDistribution& d) {
  require_same_space(c, d);
  if (sign(alpha) < 0 || compare(alpha, Scalar(Rational(1))) > 0)
    throw usage_error("mixture weight must lie in [0, 1]");
  const ScalarKind kind =
      detail::fold_kind(detail::fold_kind(alpha.kind(), c.kind), d.kind);
  const Scalar beta = Scalar(Rational(1)) - alpha;
  std::map<EdgeMask, Scalar> mix;
  for (const auto& [mask, p] : c.entries) {
    auto [it, fresh] = mix.emplace(mask, alpha * p);
    if (!fresh) it->second += alpha * p;
  }
  for (const auto& [mask, p] : d.entries) {
    auto [it, fresh] = mix.emplace(mask, beta * p);
    if (!fresh) it->second += beta * p;
  }
  return make_distribution(c.n, kind, std::move(mix));
}

// Draws one support graph; weights are converted to floats and inverted
// through the cumulative sums in ascending mask order, so a fixed seed gives
// a fixed sample.
inline Graph sample_explicit(const ExplicitDistribution& d, Rng& rng) {
  if (d.entries.empty()) throw usage_error("cannot sample an empty distribution");
  const BigFloat u(rng.next_unit());
  BigFloat cum(0L);
  for (const auto& [mask, p] : d.entries) {
    cum += to_bigfloat(p);
    if (compare(u, cum) < 0) return Graph(d.n, mask);
  }
  return Graph(d.n, d.entries.rbegin()->first);
}

}  // namespace deplab
