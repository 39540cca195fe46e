#pragma once

#include <array>
#include <cstdint>
#include <utility>
#include <vector>

#include "deplab/config.hpp"
#include "deplab/errors.hpp"

namespace deplab {

// Edge subsets of the complete graph on up to 16 labeled vertices, packed
// into a 128-bit mask (K_16 has 120 edges).  Edges are ordered
// (0,1),(0,2),...,(0,n-1),(1,2),...,(n-2,n-1); all vertex labels are
// 0-based.
using EdgeMask = unsigned __int128;
using VertexMask = std::uint32_t;

constexpr int kMaxVertices = 16;

inline int popcount_edges(EdgeMask m) {
  return __builtin_popcountll(static_cast<std::uint64_t>(m)) +
         __builtin_popcountll(static_cast<std::uint64_t>(m >> 64));
}

inline int popcount_vertices(VertexMask m) { return __builtin_popcount(m); }

inline int complete_edge_count(int n) { return n * (n - 1) / 2; }

// Position of edge {i,j} (i < j after normalization) in the canonical order.
inline int edge_index(int i, int j, int n) {
  if (i == j || i < 0 || j < 0 || i >= n || j >= n)
    throw usage_error("edge endpoints must be distinct vertices in [0, n)");
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

// Inverse of edge_index: endpoints (i, j) with i < j.
inline std::pair<int, int> edge_endpoints(int index, int n) {
  if (index < 0 || index >= complete_edge_count(n))
    throw usage_error("edge index out of range");
  int i = 0;
  int row = n - 1;
  while (index >= row) {
    index -= row;
    --row;
    ++i;
  }
  return {i, i + 1 + index};
}

inline EdgeMask edge_bit(int i, int j, int n) {
  return EdgeMask(1) << edge_index(i, j, n);
}

inline EdgeMask complete_mask(int n) {
  const int e = complete_edge_count(n);
  if (e == 0) return 0;
  return (EdgeMask(1) << e) - 1;
}

// A labeled graph: vertex count plus the mask of present edges.
struct Graph {
  int n = 1;
  EdgeMask mask = 0;

  Graph() = default;

  Graph(int n_in, EdgeMask mask_in) : n(n_in), mask(mask_in) {
    if (n < 1 || n > kMaxVertices)
      throw usage_error("vertex count must be in [1, 16]");
    if (mask & ~complete_mask(n))
      throw usage_error("edge mask has bits beyond the complete graph");
  }

  bool has_edge(int i, int j) const { return (mask >> edge_index(i, j, n)) & 1; }

  Graph with_edge(int i, int j) const { return Graph(n, mask | edge_bit(i, j, n)); }

  int num_edges() const { return popcount_edges(mask); }

  std::vector<std::pair<int, int>> edges() const {
    std::vector<std::pair<int, int>> out;
    for (int e = 0; e < complete_edge_count(n); ++e) {
      if ((mask >> e) & 1) out.push_back(edge_endpoints(e, n));
    }
    return out;
  }

  // Adjacency of each vertex as a vertex mask.
  std::array<VertexMask, kMaxVertices> adjacency() const {
    std::array<VertexMask, kMaxVertices> adj{};
    for (int e = 0; e < complete_edge_count(n); ++e) {
      if ((mask >> e) & 1) {
        const auto [i, j] = edge_endpoints(e, n);
        adj[i] |= VertexMask(1) << j;
        adj[j] |= VertexMask(1) << i;
      }
    }
    return adj;
  }

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n == b.n && a.mask == b.mask;
  }
};

inline Graph empty_graph(int n) { return Graph(n, 0); }
inline Graph complete_graph(int n) { return Graph(n, complete_mask(n)); }

// Connectivity by breadth-first expansion over vertex masks.  A single
// vertex counts as connected.
inline bool is_connected(const Graph& g) {
  if (g.n == 1) return true;
  const auto adj = g.adjacency();
  const VertexMask all = (VertexMask(1) << g.n) - 1;
  VertexMask seen = 1;
  VertexMask frontier = 1;
  while (frontier != 0) {
    VertexMask next = 0;
    for (VertexMask rest = frontier; rest != 0;) {
      const int v = __builtin_ctz(rest);
      rest &= rest - 1;
      next |= adj[v];
    }
    frontier = next & ~seen;
    seen |= next;
    if (seen == all) return true;
  }
  return false;
}

inline std::vector<int> vertices_of(VertexMask w) {
  std::vector<int> out;
  while (w != 0) {
    out.push_back(__builtin_ctz(w));
    w &= w - 1;
  }
  return out;
}

// Mask of all edges with both endpoints inside w.
inline EdgeMask edges_within(VertexMask w, int n) {
  EdgeMask filter = 0;
  const auto verts = vertices_of(w);
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      filter |= edge_bit(verts[a], verts[b], n);
  return filter;
}

// Subgraph induced on the vertices of w, relabeled 0..|w|-1 in ascending
// order of original label.
inline Graph induced(const Graph& g, VertexMask w) {
  const auto verts = vertices_of(w);
  if (verts.empty()) throw usage_error("induced subgraph needs a non-empty vertex set");
  if (verts.back() >= g.n) throw usage_error("vertex set exceeds the graph");
  Graph out(static_cast<int>(verts.size()), 0);
  for (std::size_t a = 0; a < verts.size(); ++a)
    for (std::size_t b = a + 1; b < verts.size(); ++b)
      if (g.has_edge(verts[a], verts[b]))
        out.mask |= edge_bit(static_cast<int>(a), static_cast<int>(b), out.n);
  return out;
}

// A matching: strictly increasing edge indices, pairwise vertex-disjoint.
using Matching = std::vector<int>;

inline EdgeMask matching_mask(const Matching& m) {
  EdgeMask out = 0;
  for (int e : m) out |= EdgeMask(1) << e;
  return out;
}

inline VertexMask matching_vertices(const Matching& m, int n) {
  VertexMask out = 0;
  for (int e : m) {
    const auto [i, j] = edge_endpoints(e, n);
    out |= (VertexMask(1) << i) | (VertexMask(1) << j);
  }
  return out;
}

// Visits every non-empty matching of K_n (single edges included) in
// depth-first order with the lowest free edge chosen first; a matching is
// always visited before its extensions, so the visit order is lexicographic
// on the edge-index sequences.  The callback returns false to stop early;
// the function returns false iff stopped.
template <typename Callback>
inline bool enumerate_matchings(int n, Callback&& visit) {
  if (n < 2 || n > kMaxVertices)
    throw usage_error("matching enumeration needs n in [2, 16]");
  const int total = complete_edge_count(n);
  std::vector<std::pair<int, int>> ends(total);
  for (int e = 0; e < total; ++e) ends[e] = edge_endpoints(e, n);

  Matching current;
  VertexMask used = 0;
  auto extend = [&](auto&& self, int first_candidate) -> bool {
    for (int e = first_candidate; e < total; ++e) {
      const VertexMask ev =
          (VertexMask(1) << ends[e].first) | (VertexMask(1) << ends[e].second);
      if (used & ev) continue;
      current.push_back(e);
      used |= ev;
      bool keep_going = visit(static_cast<const Matching&>(current));
      if (keep_going) keep_going = self(self, e + 1);
      used &= ~ev;
      current.pop_back();
      if (!keep_going) return false;
    }
    return true;
  };
  return extend(extend, 0);
}

inline std::vector<Matching> all_matchings(int n) {
  std::vector<Matching> out;
  enumerate_matchings(n, [&](const Matching& m) {
    out.push_back(m);
    return true;
  });
  return out;
}

// All perfect matchings of K_n (n even), in lexicographic edge-index order.
inline std::vector<Matching> all_perfect_matchings(int n) {
  if (n < 2 || n % 2 != 0 || n > kMaxVertices)
    throw usage_error("perfect matchings need an even n in [2, 16]");
  std::vector<Matching> out;
  Matching current;
  VertexMask covered = 0;
  const VertexMask all = (VertexMask(1) << n) - 1;
  auto pair_up = [&](auto&& self) -> void {
    if (covered == all) {
      out.push_back(current);
      return;
    }
    const int v = __builtin_ctz(~covered);
    for (int w = v + 1; w < n; ++w) {
      if ((covered >> w) & 1) continue;
      covered |= (VertexMask(1) << v) | (VertexMask(1) << w);
      current.push_back(edge_index(v, w, n));
      self(self);
      current.pop_back();
      covered &= ~((VertexMask(1) << v) | (VertexMask(1) << w));
    }
  };
  pair_up(pair_up);
  return out;
}

// Visits all 2^(n(n-1)/2) graphs on n vertices in ascending mask order.
// Guarded by the enumeration cap: full enumeration is exponential, so vertex
// counts beyond the cap are rejected rather than attempted.
template <typename Callback>
inline void enumerate_graphs(int n, Callback&& visit) {
  if (n < 1) throw usage_error("vertex count must be positive");
  if (n > config::enumeration_cap()) {
    throw resource_error("enumeration cap",
                         "full graph enumeration for n = " + std::to_string(n) +
                             " exceeds the enumeration cap " +
                             std::to_string(config::enumeration_cap()));
  }
  const EdgeMask limit = complete_mask(n);
  for (EdgeMask m = 0;; ++m) {
    visit(Graph(n, m));
    if (m == limit) break;
  }
}

}  // namespace deplab
