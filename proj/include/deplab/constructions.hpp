#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deplab/coloring_model.hpp"
#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/poly.hpp"
#include "deplab/scalar.hpp"
#include "deplab/trig.hpp"

namespace deplab {

namespace detail {

inline Rational pow_rational(const Rational& base, int e) {
  Rational acc(1);
  for (int i = 0; i < e; ++i) acc *= base;
  return acc;
}

inline VertexMask all_vertices(int n) { return (VertexMask(1) << n) - 1; }

// The union of the two cliques induced by a bipartition (side, complement).
inline EdgeMask split_graph_mask(VertexMask side, int n) {
  return edges_within(side, n) | edges_within(all_vertices(n) & ~side, n);
}

}  // namespace detail

// Product measure: edges appear independently, edge e with probability
// probs[e].  Enumerates the full graph space (enumeration cap applies).
inline ExplicitDistribution product_measure(int n, const std::vector<Scalar>& probs) {
  if (static_cast<int>(probs.size()) != complete_edge_count(n))
    throw usage_error("need one probability per edge");
  for (const auto& p : probs) {
    if (sign(p) < 0 || compare(p, Scalar(Rational(1))) > 0)
      throw usage_error("edge probabilities must lie in [0, 1]");
  }
  ScalarKind kind = ScalarKind::rational;
  for (const auto& p : probs) kind = detail::fold_kind(kind, p.kind());
  std::map<EdgeMask, Scalar> mass;
  enumerate_graphs(n, [&](const Graph& g) {
    Scalar w(Rational(1));
    for (int e = 0; e < complete_edge_count(n); ++e) {
      const bool on = (g.mask >> e) & 1;
      w *= on ? probs[e] : Scalar(Rational(1)) - probs[e];
    }
    if (!is_zero(w)) mass.emplace(g.mask, std::move(w));
  });
  return make_distribution(n, kind, std::move(mass));
}

inline ExplicitDistribution product_measure(int n, const Scalar& p) {
  return product_measure(n, std::vector<Scalar>(complete_edge_count(n), p));
}

inline ExplicitDistribution uniform_all_graphs(int n) {
  return product_measure(n, Scalar(Rational(1, 2)));
}

// Mixture of a near-clique regime and a perfect-matching regime on an even
// number of vertices: with probability q a uniformly chosen vertex is
// isolated and the rest form a clique; otherwise a uniform perfect matching.
// Every edge has the same probability, yet the graph is never connected.
inline ExplicitDistribution cm(int n, const Scalar& q) {
  if (n < 4 || n % 2 != 0)
    throw usage_error("cm needs an even vertex count >= 4");
  if (sign(q) < 0 || compare(q, Scalar(Rational(1))) > 0)
    throw usage_error("cm weight must lie in [0, 1]");
  const ScalarKind kind = detail::fold_kind(ScalarKind::rational, q.kind());
  std::map<EdgeMask, Scalar> mass;
  const Scalar clique_each = q / Scalar(Rational(n));
  for (int x = 0; x < n; ++x) {
    const VertexMask rest = detail::all_vertices(n) & ~(VertexMask(1) << x);
    const EdgeMask g = edges_within(rest, n);
    if (!is_zero(clique_each)) {
      auto [it, fresh] = mass.emplace(g, clique_each);
      if (!fresh) it->second += clique_each;
    }
  }
  const auto pms = all_perfect_matchings(n);
  const Scalar pm_each =
      (Scalar(Rational(1)) - q) / Scalar(Rational(static_cast<long>(pms.size())));
  if (!is_zero(pm_each)) {
    for (const auto& pm : pms) {
      auto [it, fresh] = mass.emplace(matching_mask(pm), pm_each);
      if (!fresh) it->second += pm_each;
    }
  }
  return make_distribution(n, kind, std::move(mass));
}

// The edge probability of cm(n, q) in closed form (valid for any even
// n >= 4 without materializing the distribution).
inline Scalar cm_marginal(int n, const Scalar& q) {
  return q * Scalar(Rational(n - 2, n)) +
         (Scalar(Rational(1)) - q) * Scalar(Rational(1, n - 1));
}

// The mixture weight at which cm(n, q) maximizes its edge probability
// subject to the matching-independence constraints: the larger root of
//   a q^2 + b q + c = 0
// with the coefficients below.  Rejected if the root leaves [0, 1].
inline Scalar cm_q(int n) {
  if (n < 4 || n % 2 != 0)
    throw usage_error("cm_q needs an even vertex count >= 4");
  const Int nn(n);
  const Int a = nn * nn * nn * nn * nn - 11 * nn * nn * nn * nn + 44 * nn * nn * nn -
                76 * nn * nn + 52 * nn - 12;
  const Int b = -(nn * nn * nn * nn * nn) + 11 * nn * nn * nn * nn -
                40 * nn * nn * nn + 58 * nn * nn - 24 * nn;
  const Int c = -2 * nn * nn;
  const Scalar root = quad_solve(a, b, c).second;
  if (sign(root) < 0 || compare(root, Scalar(Rational(1))) > 0) {
    throw usage_error("cm_q(" + std::to_string(n) +
                      "): optimal weight falls outside [0, 1]");
  }
  return root;
}

// Uniform bipartition into two cliques: an ordered vertex subset and its
// complement are chosen uniformly (2^n choices) and both sides become
// cliques.
inline ExplicitDistribution uniform_split_pairs(int n) {
  if (n < 2 || n > kMaxVertices) throw usage_error("need n in [2, 16]");
  std::map<EdgeMask, Scalar> mass;
  const Scalar each(Rational(Int(1), Int(1) << n));
  const VertexMask all = detail::all_vertices(n);
  for (VertexMask side = 0; side <= all; ++side) {
    const EdgeMask g = detail::split_graph_mask(side, n);
    auto [it, fresh] = mass.emplace(g, each);
    if (!fresh) it->second += each;
    if (side == all) break;
  }
  return make_distribution(n, ScalarKind::rational, std::move(mass));
}

// Half uniform random graph, half uniform two-clique bipartition.  Every
// edge has probability exactly 1/2, yet triangles are over-represented.
inline ExplicitDistribution cc(int n) {
  if (n < 6) throw usage_error("cc needs at least 6 vertices");
  return convex_combine(Scalar(Rational(1, 2)), uniform_all_graphs(n),
                        uniform_split_pairs(n));
}

// Uniform 2-coloring on an odd vertex count; the graph is the clique on the
// color class of even size (exactly one class is even when n is odd).
// Supported on {K_S : |S| even}, each with probability 2^(1-n).
inline ExplicitDistribution sc(int n) {
  if (n < 5 || n % 2 == 0)
    throw usage_error("sc needs an odd vertex count >= 5");
  std::map<EdgeMask, Scalar> mass;
  const Scalar each(Rational(Int(2), Int(1) << n));
  const VertexMask all = detail::all_vertices(n);
  for (VertexMask s = 0; s <= all; ++s) {
    if (popcount_vertices(s) % 2 != 0) continue;
    const EdgeMask g = edges_within(s, n);
    auto [it, fresh] = mass.emplace(g, each);
    if (!fresh) it->second += each;
  }
  return make_distribution(n, ScalarKind::rational, std::move(mass));
}

// Two-clique bipartitions weighted by the residue of one side's size mod 4
// (weight 1 for odd sizes, 2 for size 2 mod 4, 0 for size 0 mod 4, scaled
// by 2^-n), topped up with an empty-graph atom of mass 2^(-n/2).  Needs
// n divisible by 8 so the weights on a side and its complement agree.
inline ExplicitDistribution mod4_two_clique(int n) {
  if (n < 8 || n % 8 != 0)
    throw usage_error("mod4_two_clique needs a vertex count divisible by 8");
  auto side_weight = [](int k) -> int {
    if (k % 2 == 1) return 1;
    if (k % 4 == 2) return 2;
    return 0;
  };
  std::map<EdgeMask, Scalar> mass;
  const Rational scale(Int(1), Int(1) << n);
  // One representative per unordered bipartition: the side containing vertex 0.
  const VertexMask all = detail::all_vertices(n);
  for (VertexMask side = 1; side <= all; side += 2) {
    const int k = popcount_vertices(side);
    const int weight = side_weight(k) + side_weight(n - k);
    if (weight == 0) continue;
    const EdgeMask g = detail::split_graph_mask(side, n);
    const Scalar p(Rational(weight) * scale);
    auto [it, fresh] = mass.emplace(g, p);
    if (!fresh) it->second += p;
  }
  const Scalar atom(Rational(Int(1), Int(1) << (n / 2)));
  auto [it, fresh] = mass.emplace(EdgeMask(0), atom);
  if (!fresh) it->second += atom;
  return make_distribution(n, ScalarKind::rational, std::move(mass));
}

// A one-parameter family of two-clique distributions: vertices are colored
// red with probability z independently, both color classes become cliques.
// Stored as per-graph probability polynomials in z, grouped by the larger
// side's size a, with the number of bipartitions sharing each a.
struct PolyFamily {
  int n = 2;
  std::map<int, Poly> split_poly;   // a -> per-graph probability polynomial
  std::map<int, Int> split_count;   // a -> number of distinct bipartition graphs
};

inline PolyFamily kn_family(int n) {
  if (n < 2 || n > kMaxVertices) throw usage_error("kn_family needs n in [2, 16]");
  PolyFamily fam;
  fam.n = n;
  const Poly z = Poly::variable();
  const Poly w = Poly::constant(Rational(1)) - z;  // 1 - z
  for (int a = (n + 1) / 2; a <= n; ++a) {
    fam.split_poly[a] = z.pow(a) * w.pow(n - a) + z.pow(n - a) * w.pow(a);
    Int count;
    mpz_bin_uiui(count.backend().data(), n, a);
    if (2 * a == n) count /= 2;
    fam.split_count[a] = count;
  }
  return fam;
}

// The explicit distribution of the family at a fixed z in [0, 1].
inline ExplicitDistribution kn_family_eval(const PolyFamily& fam, const Rational& z) {
  if (z < 0 || z > 1) throw usage_error("kn_family_eval needs z in [0, 1]");
  std::map<EdgeMask, Scalar> mass;
  const VertexMask all = detail::all_vertices(fam.n);
  for (VertexMask side = 1; side <= all; side += 2) {
    const int k = popcount_vertices(side);
    const int a = std::max(k, fam.n - k);
    const Rational p = fam.split_poly.at(a).eval(z);
    if (p == 0) continue;
    const EdgeMask g = detail::split_graph_mask(side, fam.n);
    auto [it, fresh] = mass.emplace(g, Scalar(p));
    if (!fresh) it->second += Scalar(p);
  }
  return make_distribution(fam.n, ScalarKind::rational, std::move(mass));
}

struct FamilyCertification {
  bool normalization_ok = false;
  bool density_ok = false;
  bool factorization_ok = false;
  std::string detail;

  bool ok() const { return normalization_ok && density_ok && factorization_ok; }
};

// Certifies three polynomial identities of the family by exact evaluation at
// the 2n+1 integer points z = 0..2n (every identity involved has degree at
// most 2n, so vanishing at all the points proves it vanishes identically):
//   1. total mass is the constant 1;
//   2. each edge's probability is z^2 + (1-z)^2;
//   3. the induced patterns on any two disjoint vertex sets (one pair
//      (V, W) per unordered combination — the identity is symmetric) occur
//      independently, including pattern combinations of joint mass zero.
inline FamilyCertification certify_kn_family(const PolyFamily& fam) {
  FamilyCertification out;
  const int n = fam.n;
  const VertexMask all = detail::all_vertices(n);

  struct Split {
    EdgeMask graph;
    int a;
  };
  std::vector<Split> splits;
  for (VertexMask side = 1; side <= all; side += 2) {
    const int k = popcount_vertices(side);
    splits.push_back({detail::split_graph_mask(side, n), std::max(k, n - k)});
  }

  out.normalization_ok = true;
  out.density_ok = true;
  out.factorization_ok = true;

  for (int zi = 0; zi <= 2 * n && out.ok(); ++zi) {
    const Rational z(zi);
    std::map<int, Rational> value;
    for (const auto& [a, poly] : fam.split_poly) value[a] = poly.eval(z);

    Rational total(0);
    for (const auto& sp : splits) total += value[sp.a];
    if (total != 1) {
      out.normalization_ok = false;
      out.detail = "mass at z=" + std::to_string(zi) + " is " + format_rational(total);
      break;
    }

    const Rational density = z * z + (1 - z) * (1 - z);
    for (int e = 0; e < complete_edge_count(n); ++e) {
      Rational acc(0);
      for (const auto& sp : splits)
        if ((sp.graph >> e) & 1) acc += value[sp.a];
      if (acc != density) {
        out.density_ok = false;
        out.detail = "edge " + std::to_string(e) + " density off at z=" +
                     std::to_string(zi);
        break;
      }
    }
    if (!out.density_ok) break;

    for (VertexMask v = 1; v <= all && out.factorization_ok; ++v) {
      const EdgeMask fv = edges_within(v, n);
      for (VertexMask w = v + 1; w <= all; ++w) {
        if (v & w) continue;
        const EdgeMask fw = edges_within(w, n);
        std::map<EdgeMask, Rational> mv, mw;
        std::map<std::pair<EdgeMask, EdgeMask>, Rational> joint;
        for (const auto& sp : splits) {
          const Rational& p = value[sp.a];
          const EdgeMask pv = sp.graph & fv;
          const EdgeMask pw = sp.graph & fw;
          mv[pv] += p;
          mw[pw] += p;
          joint[{pv, pw}] += p;
        }
        for (const auto& [pv, a] : mv) {
          for (const auto& [pw, b] : mw) {
            const auto jt = joint.find({pv, pw});
            const Rational lhs = jt == joint.end() ? Rational(0) : jt->second;
            if (lhs != a * b) {
              out.factorization_ok = false;
              out.detail = "factorization fails at z=" + std::to_string(zi);
              break;
            }
          }
          if (!out.factorization_ok) break;
        }
        if (!out.factorization_ok) break;
      }
    }
  }
  return out;
}

// Two-clique bipartitions with trigonometric weights: the bipartition with
// larger side of size a gets probability cos(pi*(a/n - 1/2)) normalized by
// 2^(n-1) cos^n(pi/(2n)).  The all-on-one-side bipartition (the complete
// graph) has weight cos(pi/2) = 0 and is dropped exactly, so the graph is
// never connected while every edge keeps probability (1 - tan^2(pi/2n))/2.
inline ExplicitDistribution two_cliques_trig(int n) {
  if (n < 2 || n > kMaxVertices) throw usage_error("two_cliques_trig needs n in [2, 16]");
  const BigFloat denom =
      ldexp2(trig_scalar(TrigExpr::cosn_halfpi_over_n, Rational(n)), n - 1);
  std::map<EdgeMask, Scalar> mass;
  const VertexMask all = detail::all_vertices(n);
  for (VertexMask side = 1; side <= all; side += 2) {
    const int k = popcount_vertices(side);
    if (k == n) continue;  // the complete graph carries exactly zero weight
    const BigFloat numer =
        trig_scalar(TrigExpr::cos_pi_times, Rational(2 * k - n, 2 * n));
    const Scalar p(numer / denom);
    const EdgeMask g = detail::split_graph_mask(side, n);
    auto [it, fresh] = mass.emplace(g, p);
    if (!fresh) it->second += p;
  }
  return make_distribution(n, ScalarKind::bigfloat, std::move(mass));
}

// Three graphs on three vertices, each a different single edge, each with
// probability 1/3.
inline ExplicitDistribution triangle_t() {
  std::map<EdgeMask, Scalar> mass;
  for (int e = 0; e < 3; ++e) mass.emplace(EdgeMask(1) << e, Scalar(Rational(1, 3)));
  return make_distribution(3, ScalarKind::rational, std::move(mass));
}

// Uniform distribution over the graphs whose edge count is divisible by k.
inline ExplicitDistribution gnp_mod(int n, int k) {
  if (n < 3) throw usage_error("gnp_mod needs at least 3 vertices");
  if (k != 2 && k != 3) throw usage_error("gnp_mod supports modulus 2 or 3");
  std::vector<EdgeMask> support;
  enumerate_graphs(n, [&](const Graph& g) {
    if (g.num_edges() % k == 0) support.push_back(g.mask);
  });
  const Scalar each(Rational(Int(1), Int(static_cast<long>(support.size()))));
  std::map<EdgeMask, Scalar> mass;
  for (const EdgeMask g : support) mass.emplace(g, each);
  return make_distribution(n, ScalarKind::rational, std::move(mass));
}

// Coloring-model presentation of the uniform even-edge-count graph: each
// vertex draws an even-parity bit string of length n-1 (one bit per other
// vertex), and edge {u,v} is present iff u's bit for v and v's bit for u
// disagree.
inline ColoringModel gnp_mod2_model(int n) {
  if (n < 3) throw usage_error("gnp_mod2_model needs at least 3 vertices");
  std::vector<std::uint32_t> strings;
  for (std::uint32_t s = 0; s < (std::uint32_t(1) << (n - 1)); ++s) {
    if (__builtin_popcount(s) % 2 == 0) strings.push_back(s);
  }
  ColoringModel m;
  m.n = n;
  const Scalar each(Rational(Int(1), Int(static_cast<long>(strings.size()))));
  m.palettes.assign(n, std::vector<Scalar>(strings.size(), each));
  auto bit_for = [&](int owner, int other, std::uint32_t s) -> int {
    const int pos = other < owner ? other : other - 1;
    return (s >> pos) & 1;
  };
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      std::vector<std::vector<std::uint8_t>> matrix(
          strings.size(), std::vector<std::uint8_t>(strings.size(), 0));
      for (std::size_t cu = 0; cu < strings.size(); ++cu)
        for (std::size_t cv = 0; cv < strings.size(); ++cv)
          matrix[cu][cv] = static_cast<std::uint8_t>(
              bit_for(u, v, strings[cu]) ^ bit_for(v, u, strings[cv]));
      m.edge_rules.emplace(std::make_pair(u, v), std::move(matrix));
    }
  }
  validate_model(m);
  return m;
}

// Designated-neighbor model: vertex 0 picks one of the other vertices to
// shun (uniformly); every other vertex is red with probability q, blue
// otherwise.  Vertex 0 joins each blue vertex it did not shun; other
// vertices pair up when both are red.  With q the positive root of
// (n-1) q^2 + (n-2) q - (n-2) = 0 every edge gets the same probability
// q^2 = (1-q)(n-2)/(n-1), yet the graph is never connected.
inline Scalar cs_color_weight(int n) {
  if (n < 3) throw usage_error("cs needs at least 3 vertices");
  const Scalar root = quad_solve(Int(n - 1), Int(n - 2), Int(-(n - 2))).second;
  if (sign(root) < 0 || compare(root, Scalar(Rational(1))) > 0)
    throw usage_error("cs(" + std::to_string(n) + "): red weight outside [0, 1]");
  return root;
}

inline ColoringModel cs(int n) {
  const Scalar q = cs_color_weight(n);
  ColoringModel m;
  m.n = n;
  m.palettes.resize(n);
  m.palettes[0].assign(n - 1, Scalar(Rational(1, n - 1)));
  for (int v = 1; v < n; ++v) m.palettes[v] = {q, Scalar(Rational(1)) - q};
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      std::vector<std::vector<std::uint8_t>> matrix;
      if (u == 0) {
        // Color c at vertex 0 designates vertex c+1 as the shunned one.
        matrix.assign(n - 1, std::vector<std::uint8_t>(2, 0));
        for (int c = 0; c < n - 1; ++c)
          if (c + 1 != v) matrix[c][1] = 1;  // joins unshunned blue vertices
      } else {
        matrix = {{1, 0}, {0, 0}};  // red-red pairs only
      }
      m.edge_rules.emplace(std::make_pair(u, v), std::move(matrix));
    }
  }
  validate_model(m);
  return m;
}

// Three vertex blocks with a cyclic attachment rule: inside a block, edges
// need both endpoints red; from A to B and from B to C the earlier block
// must be red and the later blue; from A to C the direction reverses (C red,
// A blue).  All colors are fair coins, every edge has probability exactly
// 1/4, and the cyclic rule makes a spanning connected graph impossible.
inline ColoringModel three_block(int na, int nb, int nc) {
  if (na < 1 || nb < 1 || nc < 1)
    throw usage_error("three_block needs all block sizes >= 1");
  const int n = na + nb + nc;
  auto block_of = [&](int v) { return v < na ? 0 : (v < na + nb ? 1 : 2); };
  ColoringModel m;
  m.n = n;
  m.palettes.assign(n, {Scalar(Rational(1, 2)), Scalar(Rational(1, 2))});
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      const int bu = block_of(u), bv = block_of(v);
      std::vector<std::vector<std::uint8_t>> matrix(2, std::vector<std::uint8_t>(2, 0));
      if (bu == bv) {
        matrix[0][0] = 1;  // both red
      } else if ((bu == 0 && bv == 1) || (bu == 1 && bv == 2)) {
        matrix[0][1] = 1;  // earlier block red, later blue
      } else {
        matrix[1][0] = 1;  // A-to-C wraps around: C red, A blue
      }
      m.edge_rules.emplace(std::make_pair(u, v), std::move(matrix));
    }
  }
  validate_model(m);
  return m;
}

// Two colors with weights (z, 1-z); an edge appears iff its endpoints match.
// The result is always a disjoint union of at most two cliques.
inline ColoringModel two_clique_color_model(int n, const Scalar& z) {
  if (n < 2) throw usage_error("two_clique_color_model needs at least 2 vertices");
  if (sign(z) < 0 || compare(z, Scalar(Rational(1))) > 0)
    throw usage_error("color weight must lie in [0, 1]");
  ColoringModel m;
  m.n = n;
  m.palettes.assign(n, {z, Scalar(Rational(1)) - z});
  for (int u = 0; u < n; ++u)
    for (int v = u + 1; v < n; ++v)
      m.edge_rules.emplace(std::make_pair(u, v),
                           std::vector<std::vector<std::uint8_t>>{{1, 0}, {0, 1}});
  validate_model(m);
  return m;
}

}  // namespace deplab
