#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deplab/coloring_model.hpp"
#include "deplab/config.hpp"
#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/scalar.hpp"

namespace deplab {

namespace detail {

// Keep only the listed colors of vertex v: shrink its palette and the
// corresponding rows/columns of every incident edge function.
inline void keep_vertex_colors(ColoringModel& m, int v, const std::vector<int>& kept,
                               const std::vector<Scalar>& new_probs) {
  std::vector<Scalar> palette;
  palette.reserve(kept.size());
  for (std::size_t i = 0; i < kept.size(); ++i) palette.push_back(new_probs[i]);
  m.palettes[v] = std::move(palette);
  for (auto& [key, matrix] : m.edge_rules) {
    if (key.first == v) {
      std::vector<std::vector<std::uint8_t>> rows;
      rows.reserve(kept.size());
      for (const int c : kept) rows.push_back(matrix[c]);
      matrix = std::move(rows);
    } else if (key.second == v) {
      for (auto& row : matrix) {
        std::vector<std::uint8_t> cols;
        cols.reserve(kept.size());
        for (const int c : kept) cols.push_back(row[c]);
        row = std::move(cols);
      }
    }
  }
}

// Distribution over graphs conditioned on vertex v taking color c, as a
// sparse map from edge mask to probability.  Depends only on the other
// vertices' palettes, so it stays valid while v's own palette shrinks.
inline std::map<EdgeMask, Scalar> conditional_graph_distribution(const ColoringModel& m,
                                                                 int v, int c) {
  std::map<EdgeMask, Scalar> out;
  const int n = m.n;
  std::vector<int> order;
  for (int w = 0; w < n; ++w)
    if (w != v) order.push_back(w);

  Coloring coloring(n, -1);
  coloring[v] = c;

  auto walk = [&](auto&& self, std::size_t idx, const Scalar& weight) -> void {
    if (idx == order.size()) {
      EdgeMask mask = 0;
      for (int a = 0; a < n; ++a)
        for (int bb = a + 1; bb < n; ++bb)
          if (m.edge_present(a, bb, coloring[a], coloring[bb]))
            mask |= edge_bit(a, bb, n);
      auto [it, fresh] = out.emplace(mask, weight);
      if (!fresh) it->second += weight;
      return;
    }
    const int w = order[idx];
    for (int cw = 0; cw < m.colors(w); ++cw) {
      const Scalar& pw = m.palettes[w][cw];
      if (sign(pw) <= 0) continue;
      coloring[w] = cw;
      self(self, idx + 1, weight * pw);
    }
    coloring[w] = -1;
  };
  walk(walk, 0, Scalar(Rational(1)));
  return out;
}

}  // namespace detail

// Merge redundant colors, one vertex at a time.  Two or more colors of a
// vertex are redundant when their conditional graph distributions are
// affinely dependent: probability mass can then slide along the dependence
// until some color's weight hits zero, without changing the distribution
// the model induces on graphs.  The sliding direction is canonical (the
// lexicographically first kernel vector of the dependence system, first
// nonzero entry positive), so the output is deterministic.  Afterwards each
// vertex carries at most one color more than the number of graphs on n
// vertices, and the induced graph distribution is exactly preserved.
inline ColoringModel reduce_colors(ColoringModel m) {
  validate_model(m);
  if (model_kind(m) == ScalarKind::bigfloat)
    throw usage_error("color reduction needs exact color probabilities");
  if (m.n > config::enumeration_cap()) {
    throw resource_error("enumeration cap",
                         "color reduction tracks all graphs on " + std::to_string(m.n) +
                             " vertices, beyond the enumeration cap " +
                             std::to_string(config::enumeration_cap()));
  }

  // Start by discarding colors that already have zero probability.
  for (int v = 0; v < m.n; ++v) {
    std::vector<int> kept;
    std::vector<Scalar> probs;
    for (int c = 0; c < m.colors(v); ++c) {
      if (sign(m.palettes[v][c]) > 0) {
        kept.push_back(c);
        probs.push_back(m.palettes[v][c]);
      }
    }
    if (static_cast<int>(kept.size()) != m.colors(v))
      detail::keep_vertex_colors(m, v, kept, probs);
  }

  for (int v = 0; v < m.n; ++v) {
    if (m.colors(v) <= 1) continue;

    // Cost guard: conditioning expands over every other vertex's palette.
    {
      long long product = 1;
      bool overflow = false;
      for (int w = 0; w < m.n; ++w) {
        if (w == v) continue;
        product *= m.colors(w);
        if (product > config::expansion_cap()) {
          overflow = true;
          break;
        }
      }
      if (overflow) {
        throw resource_error("expansion cap",
                             "conditioning on vertex " + std::to_string(v) +
                                 " expands beyond the expansion cap " +
                                 std::to_string(config::expansion_cap()) +
                                 " (override with DEPLAB_CAP_EXPANSION)");
      }
    }

    std::vector<std::map<EdgeMask, Scalar>> conditionals;
    for (int c = 0; c < m.colors(v); ++c)
      conditionals.push_back(detail::conditional_graph_distribution(m, v, c));
    std::vector<int> alive(m.colors(v));
    for (int c = 0; c < m.colors(v); ++c) alive[c] = c;
    std::vector<Scalar> probs(m.palettes[v]);

    for (;;) {
      const int k = static_cast<int>(alive.size());
      if (k <= 1) break;

      // Row index: every edge mask carried by any surviving conditional,
      // plus one final normalization row of ones (making the dependence
      // affine rather than merely linear).
      std::vector<EdgeMask> masks;
      {
        std::map<EdgeMask, int> seen;
        for (const int c : alive)
          for (const auto& [mask, p] : conditionals[c]) seen.emplace(mask, 0);
        for (const auto& [mask, z] : seen) masks.push_back(mask);
      }
      std::vector<std::vector<Scalar>> rows;
      rows.reserve(masks.size() + 1);
      for (const EdgeMask mask : masks) {
        std::vector<Scalar> row;
        row.reserve(k);
        for (const int c : alive) {
          const auto it = conditionals[c].find(mask);
          row.push_back(it == conditionals[c].end() ? Scalar(Rational(0)) : it->second);
        }
        rows.push_back(std::move(row));
      }
      rows.emplace_back(k, Scalar(Rational(1)));

      // Reduced row echelon form by exact elimination.
      std::vector<int> pivot_row_of_col(k, -1);
      std::size_t rrow = 0;
      for (int col = 0; col < k && rrow < rows.size(); ++col) {
        std::size_t pr = rrow;
        while (pr < rows.size() && is_zero(rows[pr][col])) ++pr;
        if (pr == rows.size()) continue;
        std::swap(rows[rrow], rows[pr]);
        const Scalar inv = Scalar(Rational(1)) / rows[rrow][col];
        for (int j = col; j < k; ++j) rows[rrow][j] = rows[rrow][j] * inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
          if (i == rrow || is_zero(rows[i][col])) continue;
          const Scalar factor = rows[i][col];
          for (int j = col; j < k; ++j)
            rows[i][j] = rows[i][j] - factor * rows[rrow][j];
        }
        pivot_row_of_col[col] = static_cast<int>(rrow);
        ++rrow;
      }

      int free_col = -1;
      for (int col = 0; col < k; ++col) {
        if (pivot_row_of_col[col] == -1) {
          free_col = col;
          break;
        }
      }
      if (free_col == -1) break;  // affinely independent: vertex is done

      // Canonical kernel vector: free column set to one, pivots solved.
      std::vector<Scalar> lambda(k, Scalar(Rational(0)));
      lambda[free_col] = Scalar(Rational(1));
      for (int col = 0; col < k; ++col) {
        const int pr = pivot_row_of_col[col];
        if (pr != -1) lambda[col] = Scalar(Rational(0)) - rows[pr][free_col];
      }
      for (int col = 0; col < k; ++col) {
        const int s = sign(lambda[col]);
        if (s == 0) continue;
        if (s < 0)
          for (auto& entry : lambda) entry = Scalar(Rational(0)) - entry;
        break;
      }

      // Slide mass until the tightest positive-direction color hits zero.
      bool have_t = false;
      Scalar t(Rational(0));
      for (int col = 0; col < k; ++col) {
        if (sign(lambda[col]) <= 0) continue;
        const Scalar ratio = probs[alive[col]] / lambda[col];
        if (!have_t || compare(ratio, t) < 0) {
          t = ratio;
          have_t = true;
        }
      }
      if (!have_t) break;  // cannot happen: kernel entries sum to zero

      std::vector<int> next_alive;
      std::vector<Scalar> next_probs_by_color(probs);
      for (int col = 0; col < k; ++col) {
        const Scalar updated = probs[alive[col]] - t * lambda[col];
        next_probs_by_color[alive[col]] = updated;
        if (sign(updated) > 0) next_alive.push_back(alive[col]);
      }
      if (next_alive.size() == alive.size()) break;  // safety: no progress
      alive = std::move(next_alive);
      probs = std::move(next_probs_by_color);
    }

    if (static_cast<int>(alive.size()) != m.colors(v) ||
        [&] {
          for (const int c : alive)
            if (compare(probs[c], m.palettes[v][c]) != 0) return true;
          return false;
        }()) {
      std::vector<Scalar> final_probs;
      final_probs.reserve(alive.size());
      for (const int c : alive) final_probs.push_back(probs[c]);
      detail::keep_vertex_colors(m, v, alive, final_probs);
    }
  }

  validate_model(m);
  return m;
}

}  // namespace deplab
