#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deplab/bigfloat.hpp"
#include "deplab/coloring_model.hpp"
#include "deplab/config.hpp"
#include "deplab/errors.hpp"
#include "deplab/rng.hpp"
#include "deplab/scalar.hpp"

namespace deplab {

enum class ConnectOutcome { connected, fail, provably_impossible };

inline const char* outcome_name(ConnectOutcome o) {
  switch (o) {
    case ConnectOutcome::connected: return "connected";
    case ConnectOutcome::fail: return "fail";
    case ConnectOutcome::provably_impossible: return "provably-impossible";
  }
  return "?";
}

// Result of a connectivity search: a witness coloring when one was found,
// a definite impossibility verdict (exhaustive search only), or an honest
// failure.  Diagnostics are free-form key/value notes.
struct ConnectResult {
  ConnectOutcome outcome = ConnectOutcome::fail;
  std::string algorithm;
  std::optional<Coloring> coloring;
  std::map<std::string, std::string> diagnostics;
};

// Replay check: does this coloring use only positive-probability colors and
// realize a connected graph?
inline bool coloring_connects(const ColoringModel& m, const Coloring& c) {
  if (static_cast<int>(c.size()) != m.n) return false;
  for (int v = 0; v < m.n; ++v) {
    if (c[v] < 0 || c[v] >= m.colors(v)) return false;
    if (sign(m.palettes[v][c[v]]) <= 0) return false;
  }
  SampledGraph g(m.n);
  for (int u = 0; u < m.n; ++u)
    for (int v = u + 1; v < m.n; ++v)
      if (m.edge_present(u, v, c[u], c[v])) g.add_edge(u, v);
  return g.connected();
}

namespace detail {

inline std::vector<std::vector<int>> positive_colors(const ColoringModel& m) {
  std::vector<std::vector<int>> out(m.n);
  for (int v = 0; v < m.n; ++v)
    for (int c = 0; c < m.colors(v); ++c)
      if (sign(m.palettes[v][c]) > 0) out[v].push_back(c);
  return out;
}

// Dynamic vertex set for models beyond the 16-vertex graph cap.
class VSet {
 public:
  explicit VSet(int n) : n_(n), words_((n + 63) / 64, 0) {}

  void add(int v) { words_[v / 64] |= std::uint64_t(1) << (v % 64); }
  void remove(int v) { words_[v / 64] &= ~(std::uint64_t(1) << (v % 64)); }
  bool has(int v) const { return (words_[v / 64] >> (v % 64)) & 1; }

  int count() const {
    int c = 0;
    for (const auto w : words_) c += __builtin_popcountll(w);
    return c;
  }

  bool empty() const {
    for (const auto w : words_)
      if (w != 0) return false;
    return true;
  }

  bool intersects(const VSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  int count_and(const VSet& o) const {
    int c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i)
      c += __builtin_popcountll(words_[i] & o.words_[i]);
    return c;
  }

  VSet minus(const VSet& o) const {
    VSet out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      out.words_[i] = words_[i] & ~o.words_[i];
    return out;
  }

  VSet unite(const VSet& o) const {
    VSet out(n_);
    for (std::size_t i = 0; i < words_.size(); ++i)
      out.words_[i] = words_[i] | o.words_[i];
    return out;
  }

  std::vector<int> members() const {
    std::vector<int> out;
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w != 0) {
        out.push_back(static_cast<int>(i) * 64 + __builtin_ctzll(w));
        w &= w - 1;
      }
    }
    return out;
  }

 private:
  int n_;
  std::vector<std::uint64_t> words_;
};

}  // namespace detail

// Exhaustive depth-first search over positive-probability colorings, vertex
// 0 first, colors in ascending palette order, so the first witness found is
// the lexicographically smallest one.  A branch is pruned when the already
// colored vertices form two or more components and some component has no
// possible edge (under any positive colors) to an uncolored vertex — such a
// component can never merge with the rest.  Exhausting the search space
// proves no connected coloring exists; this is the only algorithm entitled
// to that verdict.
inline ConnectResult connect_exhaustive(const ColoringModel& m) {
  validate_model(m);
  const auto size = expansion_size(m);
  if (!size || *size > config::expansion_cap()) {
    throw resource_error("expansion cap",
                         "exhaustive search needs " +
                             (size ? std::to_string(*size) : std::string(">2^62")) +
                             " colorings, beyond the expansion cap " +
                             std::to_string(config::expansion_cap()) +
                             " (override with DEPLAB_CAP_EXPANSION or set_expansion_cap)");
  }
  const auto positive = detail::positive_colors(m);
  const int n = m.n;
  Coloring c(n, -1);

  auto can_link = [&](int u, int cu, int w) {
    for (int cw : positive[w])
      if (m.edge_present(u, w, cu, cw)) return true;
    return false;
  };

  // Union-find over the currently colored prefix.
  std::vector<int> parent(n);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };

  ConnectResult result;
  result.algorithm = "exhaustive";

  auto dfs = [&](auto&& self, int v) -> bool {
    if (v == n) {
      // All colored: connected iff one component.
      int roots = 0;
      for (int x = 0; x < n; ++x) roots += find(x) == x ? 1 : 0;
      return roots == 1;
    }
    for (int cv : positive[v]) {
      c[v] = cv;
      std::vector<int> saved(parent.begin(), parent.begin() + v + 1);
      parent[v] = v;
      for (int u = 0; u < v; ++u) {
        if (m.edge_present(u, v, c[u], cv)) {
          const int a = find(u), b2 = find(v);
          if (a != b2) parent[a] = b2;
        }
      }
      bool viable = true;
      std::vector<int> roots;
      for (int x = 0; x <= v; ++x)
        if (find(x) == x) roots.push_back(x);
      if (roots.size() >= 2) {
        if (v + 1 == n) {
          viable = false;  // finished and disconnected
        } else {
          for (int root : roots) {
            bool linked = false;
            for (int u = 0; u <= v && !linked; ++u) {
              if (find(u) != root) continue;
              for (int w = v + 1; w < n && !linked; ++w)
                linked = can_link(u, c[u], w);
            }
            if (!linked) {
              viable = false;
              break;
            }
          }
        }
      }
      if (viable && self(self, v + 1)) return true;
      std::copy(saved.begin(), saved.end(), parent.begin());
    }
    c[v] = -1;
    return false;
  };

  if (dfs(dfs, 0)) {
    if (!coloring_connects(m, c))
      throw validation_error("exhaustive witness failed replay validation");
    result.outcome = ConnectOutcome::connected;
    result.coloring = c;
  } else {
    result.outcome = ConnectOutcome::provably_impossible;
  }
  return result;
}

// Cover-and-peel search for models where every vertex has at most two
// colors.  A vertex v covers w when every positive color of w admits a
// positive color of v completing the edge; covered structure is peeled off,
// a hub is chosen in the residue by largest single-color probability, the
// residue is wired to the hub, and the peeled vertices are reattached in
// reverse order.  Succeeds on every such model whose edge probabilities all
// exceed 1/4; degrades to an honest failure otherwise (never claims
// impossibility).
inline ConnectResult connect_two_color(const ColoringModel& m) {
  validate_model(m);
  for (int v = 0; v < m.n; ++v) {
    if (m.colors(v) > 2)
      throw usage_error("two-color search needs at most two colors per vertex");
  }
  const auto positive = detail::positive_colors(m);
  const int n = m.n;

  ConnectResult result;
  result.algorithm = "two-color";

  auto covers = [&](int v, int w) {
    for (int cw : positive[w]) {
      bool ok = false;
      for (int cv : positive[v])
        if (m.edge_present(v, w, cv, cw)) {
          ok = true;
          break;
        }
      if (!ok) return false;
    }
    return !positive[w].empty();
  };

  std::vector<bool> active(n, true);
  std::vector<std::pair<int, int>> peeled;  // (vertex, its covered target)
  for (;;) {
    bool removed = false;
    for (int v = 0; v < n && !removed; ++v) {
      if (!active[v]) continue;
      for (int w = 0; w < n; ++w) {
        if (w == v || !active[w]) continue;
        if (covers(v, w)) {
          peeled.emplace_back(v, w);
          active[v] = false;
          removed = true;
          break;
        }
      }
    }
    if (!removed) break;
  }

  Coloring c(n, -1);

  // Hub: the residual vertex whose best color carries the most probability.
  int hub = -1;
  for (int v = 0; v < n; ++v) {
    if (!active[v]) continue;
    if (hub == -1) {
      hub = v;
      continue;
    }
    auto best_prob = [&](int x) {
      const Scalar* best = nullptr;
      for (int cx : positive[x]) {
        if (!best || compare(m.palettes[x][cx], *best) > 0) best = &m.palettes[x][cx];
      }
      return *best;
    };
    if (compare(best_prob(v), best_prob(hub)) > 0) hub = v;
  }
  if (hub == -1) {
    result.diagnostics["reason"] = "no residual vertex";
    return result;
  }
  {
    int best_color = positive[hub].front();
    for (int cx : positive[hub])
      if (compare(m.palettes[hub][cx], m.palettes[hub][best_color]) > 0)
        best_color = cx;
    c[hub] = best_color;
  }

  for (int v = 0; v < n; ++v) {
    if (!active[v] || v == hub) continue;
    for (int cv : positive[v]) {
      if (m.edge_present(v, hub, cv, c[hub])) {
        c[v] = cv;
        break;
      }
    }
    if (c[v] == -1) {
      result.diagnostics["reason"] =
          "residual vertex " + std::to_string(v) + " cannot reach the hub";
      return result;
    }
  }

  for (auto it = peeled.rbegin(); it != peeled.rend(); ++it) {
    const auto [v, w] = *it;
    for (int cv : positive[v]) {
      if (m.edge_present(v, w, cv, c[w])) {
        c[v] = cv;
        break;
      }
    }
    if (c[v] == -1) {
      result.diagnostics["reason"] = "reattachment failed at vertex " + std::to_string(v);
      return result;
    }
  }

  if (coloring_connects(m, c)) {
    result.outcome = ConnectOutcome::connected;
    result.coloring = c;
  } else {
    result.diagnostics["reason"] = "replay validation failed";
  }
  return result;
}

// Conditional-probability table search around vertex 0.  Picks the first
// color of vertex 0 whose conditional edge probabilities to the other
// vertices sum to at least (n-1)/2; columns with zero conditional
// probability are bridged through distinct columns exceeding 1/2 (a counting
// argument guarantees enough of them at that row sum), everything else
// attaches directly.  The witness keeps every vertex within distance two of
// vertex 0.  Succeeds whenever every edge probability is at least 1/2;
// honest failure otherwise.
inline ConnectResult connect_table(const ColoringModel& m) {
  validate_model(m);
  const auto positive = detail::positive_colors(m);
  const int n = m.n;

  ConnectResult result;
  result.algorithm = "table";

  const Scalar half(Rational(1, 2));
  const Scalar needed(Rational(n - 1, 2));

  int hub_color = -1;
  std::vector<Scalar> row(n, Scalar(Rational(0)));
  std::optional<Scalar> max_row_sum;
  for (int i : positive[0]) {
    std::vector<Scalar> trial(n, Scalar(Rational(0)));
    Scalar total(Rational(0));
    for (int j = 1; j < n; ++j) {
      Scalar p(Rational(0));
      for (int cj : positive[j])
        if (m.edge_present(0, j, i, cj)) p += m.palettes[j][cj];
      trial[j] = p;
      total += trial[j];
    }
    if (!max_row_sum || compare(total, *max_row_sum) > 0) max_row_sum = total;
    if (compare(total, needed) >= 0) {
      hub_color = i;
      row = std::move(trial);
      break;
    }
  }
  if (hub_color == -1) {
    result.diagnostics["reason"] = "no color of vertex 0 reaches the required row sum";
    if (max_row_sum) result.diagnostics["max_row_sum"] = describe(*max_row_sum);
    return result;
  }

  std::vector<int> zero_cols, strong_cols;
  for (int j = 1; j < n; ++j) {
    if (is_zero(row[j])) {
      zero_cols.push_back(j);
    } else if (compare(row[j], half) > 0) {
      strong_cols.push_back(j);
    }
  }
  if (zero_cols.size() > strong_cols.size()) {
    result.diagnostics["reason"] = "not enough strong columns to bridge the zero columns";
    return result;
  }

  Coloring c(n, -1);
  c[0] = hub_color;
  std::vector<bool> is_helper(n, false);
  for (std::size_t idx = 0; idx < zero_cols.size(); ++idx) {
    const int z = zero_cols[idx];
    const int y = strong_cols[idx];
    is_helper[y] = true;
    for (int cy : positive[y]) {
      if (!m.edge_present(0, y, hub_color, cy)) continue;
      for (int cz : positive[z]) {
        if (m.edge_present(y, z, cy, cz)) {
          c[y] = cy;
          c[z] = cz;
          break;
        }
      }
      if (c[z] != -1) break;
    }
    if (c[z] == -1) {
      result.diagnostics["reason"] =
          "no color pair bridges vertex " + std::to_string(z) + " through " +
          std::to_string(y);
      return result;
    }
  }

  for (int j = 1; j < n; ++j) {
    if (c[j] != -1) continue;
    for (int cj : positive[j]) {
      if (m.edge_present(0, j, hub_color, cj)) {
        c[j] = cj;
        break;
      }
    }
    if (c[j] == -1) {
      result.diagnostics["reason"] =
          "vertex " + std::to_string(j) + " cannot attach to vertex 0";
      return result;
    }
  }

  // Radius-2 sanity check around the hub, then the full replay.
  {
    SampledGraph g(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        if (m.edge_present(u, v, c[u], c[v])) g.add_edge(u, v);
    detail::VSet seen(n);
    seen.add(0);
    for (int v = 1; v < n; ++v)
      if (g.has_edge(0, v)) seen.add(v);
    const auto direct = seen.members();
    for (const int v : direct)
      for (int w = 0; w < n; ++w)
        if (g.has_edge(v, w)) seen.add(w);
    if (seen.count() != n) {
      result.diagnostics["reason"] = "a vertex ended up beyond distance two";
      return result;
    }
  }

  if (coloring_connects(m, c)) {
    result.outcome = ConnectOutcome::connected;
    result.coloring = c;
  } else {
    result.diagnostics["reason"] = "replay validation failed";
  }
  return result;
}

namespace detail {

// Working state for one recoloring attempt: the reference coloring (the
// random sample with the two star centers recolored) and the positive color
// lists.  Neighborhoods are always evaluated against the reference colors;
// every constructive step only targets vertices that keep those colors.
struct RecolorCtx {
  const ColoringModel* m;
  int n;
  const std::vector<std::vector<int>>* positive;
  Coloring ref;

  VSet nbhd(int v, int k) const {
    VSet out(n);
    for (int w = 0; w < n; ++w) {
      if (w == v) continue;
      if (m->edge_present(v, w, k, ref[w])) out.add(w);
    }
    return out;
  }
};

// Recolor every vertex in to_hook (ascending) to its lowest positive color
// with a neighbor among targets; targets keep their reference colors.
inline bool hook_all(const RecolorCtx& ctx, Coloring& cand,
                     const std::vector<int>& to_hook, const VSet& targets) {
  for (const int v : to_hook) {
    bool done = false;
    for (const int k : (*ctx.positive)[v]) {
      if (ctx.nbhd(v, k).intersects(targets)) {
        cand[v] = k;
        done = true;
        break;
      }
    }
    if (!done) return false;
  }
  return true;
}

inline std::vector<int> complement_of(const VSet& keep, const std::vector<bool>& fixed,
                                      int n) {
  std::vector<int> out;
  for (int v = 0; v < n; ++v)
    if (!keep.has(v) && !fixed[v]) out.push_back(v);
  return out;
}

}  // namespace detail

// Randomized star-merging search for arbitrary palettes.  Each attempt
// samples a coloring, recolors one vertex to the color with the largest
// neighborhood (a red star), then tries, in order: hooking everything onto
// the red star; growing a second (blue) star with bounded overlap and
// merging the two via a chain of deterministic constructions — hooking onto
// touching stars, emptying an obligate side, spending a logarithmic budget
// of adapters when one obligate side is large, injectively pairing the
// obligate sides (optionally through one probabilistically-robust helper),
// a single bridging vertex, or orienting the potential edges between equal
// obligate sides.  Every candidate is replay-validated; after 32 failed
// attempts the table search is tried when every edge probability is at
// least 1/2.  Guaranteed to succeed for large n when every edge probability
// exceeds (3 - sqrt(5))/2 by a margin; never claims impossibility.
inline ConnectResult connect_recolor(const ColoringModel& m,
                                     std::optional<BigFloat> epsilon,
                                     std::uint64_t seed) {
  validate_model(m);
  const auto positive = detail::positive_colors(m);
  const int n = m.n;
  const Scalar min_marg = model_min_marginal(m);
  const BigFloat p_bound = to_bigfloat(min_marg);

  // Margin above the golden-ratio threshold (3 - sqrt(5))/2; floors at 1/64
  // so the budget stays finite on best-effort inputs.
  BigFloat eps(0L);
  if (epsilon) {
    eps = *epsilon;
    if (eps.sign() <= 0) throw usage_error("epsilon must be positive");
  } else {
    const BigFloat threshold = (BigFloat(3L) - sqrt(BigFloat(5L))) / BigFloat(2L);
    const BigFloat margin = p_bound - threshold;
    const BigFloat floor_eps = BigFloat(Rational(1, 64));
    eps = compare(margin, floor_eps) > 0 ? margin : floor_eps;
  }

  // Intrusion budget C = ceil((2 + 2/eps) * log2(n)), clamped to [1, n].
  long budget = 1;
  {
    const BigFloat raw =
        (BigFloat(2L) + BigFloat(2L) / eps) * log2(BigFloat(static_cast<long>(n)));
    BigFloat ceiling(Precision{raw.precision()});
    mpfr_ceil(ceiling.raw(), raw.raw());
    long value = mpfr_get_si(ceiling.raw(), MPFR_RNDN);
    budget = std::max(1L, std::min(static_cast<long>(n), value));
  }
  const int C = static_cast<int>(budget);

  ConnectResult result;
  result.algorithm = "recolor";
  result.diagnostics["epsilon"] = eps.to_decimal(10);
  result.diagnostics["budget"] = std::to_string(C);

  const ModelSampler sampler(m);
  const BigFloat one_minus_p = BigFloat(1L) - p_bound;

  auto finish = [&](Coloring cand, int attempt, const std::string& phase)
      -> std::optional<ConnectResult> {
    if (!coloring_connects(m, cand)) return std::nullopt;
    ConnectResult ok = result;
    ok.outcome = ConnectOutcome::connected;
    ok.coloring = std::move(cand);
    ok.diagnostics["attempt"] = std::to_string(attempt);
    ok.diagnostics["phase"] = phase;
    return ok;
  };

  constexpr int kAttempts = 32;
  for (int attempt = 0; attempt < kAttempts; ++attempt) {
    Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(attempt)));
    detail::RecolorCtx ctx{&m, n, &positive, sampler.sample_coloring(rng)};
    for (int v = 0; v < n; ++v) {
      if (sign(m.palettes[v][ctx.ref[v]]) <= 0) ctx.ref[v] = positive[v].front();
    }

    // Red star: the (vertex, color) with the largest neighborhood under the
    // sampled colors; ties resolved by lowest vertex, then lowest color.
    int r = -1, cr = -1, best_size = -1;
    for (int v = 0; v < n; ++v) {
      for (const int k : positive[v]) {
        const int size = ctx.nbhd(v, k).count();
        if (size > best_size) {
          best_size = size;
          r = v;
          cr = k;
        }
      }
    }
    if (r < 0 || best_size <= 0) continue;
    ctx.ref[r] = cr;
    const detail::VSet R = ctx.nbhd(r, cr);

    std::vector<bool> fixed(n, false);
    fixed[r] = true;
    for (const int v : R.members()) fixed[v] = true;

    // Quick path: hook every outside vertex straight onto the red star.
    {
      Coloring cand = ctx.ref;
      std::vector<int> outside;
      for (int v = 0; v < n; ++v)
        if (!fixed[v]) outside.push_back(v);
      if (detail::hook_all(ctx, cand, outside, R)) {
        if (auto done = finish(std::move(cand), attempt, "single-star")) return *done;
      }
    }

    // Blue star: among vertices outside the red star, the largest
    // neighborhood that intrudes on R by at most the budget.
    int b = -1, cb = -1;
    best_size = -1;
    for (int v = 0; v < n; ++v) {
      if (fixed[v]) continue;
      for (const int k : positive[v]) {
        const detail::VSet nb = ctx.nbhd(v, k);
        if (nb.count_and(R) > C) continue;
        const int size = nb.count();
        if (size > best_size) {
          best_size = size;
          b = v;
          cb = k;
        }
      }
    }
    if (b < 0 || best_size <= 0) continue;
    ctx.ref[b] = cb;
    const detail::VSet B = ctx.nbhd(b, cb);

    // Touching stars: hook everything else onto their union.
    if (R.intersects(B) || B.has(r) || R.has(b)) {
      const detail::VSet both = R.unite(B);
      Coloring cand = ctx.ref;
      std::vector<int> outside;
      for (int v = 0; v < n; ++v)
        if (!both.has(v) && v != r && v != b) outside.push_back(v);
      if (detail::hook_all(ctx, cand, outside, both)) {
        if (auto done = finish(std::move(cand), attempt, "touching-stars")) return *done;
      }
      continue;
    }

    // Obligate sides: vertices unable to intrude deeply on the opposite
    // star under any color.
    detail::VSet OR(n), OB(n);
    for (int v = 0; v < n; ++v) {
      if (!B.has(v) && v != b) {
        bool stuck = true;
        for (const int k : positive[v])
          if (ctx.nbhd(v, k).count_and(B) > C) {
            stuck = false;
            break;
          }
        if (stuck) OR.add(v);
      }
      if (!R.has(v) && v != r) {
        bool stuck = true;
        for (const int k : positive[v])
          if (ctx.nbhd(v, k).count_and(R) > C) {
            stuck = false;
            break;
          }
        if (stuck) OB.add(v);
      }
    }

    std::vector<bool> rb_fixed(n, false);
    rb_fixed[r] = rb_fixed[b] = true;

    // Side into one star when nothing is obligated to the other.
    auto try_all_into = [&](const detail::VSet& star, int center)
        -> std::optional<ConnectResult> {
      Coloring cand = ctx.ref;
      std::vector<int> outside;
      for (int v = 0; v < n; ++v)
        if (!star.has(v) && v != center) outside.push_back(v);
      if (!detail::hook_all(ctx, cand, outside, star)) return std::nullopt;
      return finish(std::move(cand), attempt, "one-sided");
    };
    if (OR.empty()) {
      if (auto done = try_all_into(B, b)) return *done;
    }
    if (OB.empty()) {
      if (auto done = try_all_into(R, r)) return *done;
    }

    // A large obligate side: spend the budget on adapters re-anchored into
    // the opposite star, each also covering a batch of the other side's
    // obligate vertices; everything else hooks the anchor set.
    auto try_large_side = [&](const detail::VSet& big, int big_center,
                              const detail::VSet& big_star, const detail::VSet& other)
        -> std::optional<ConnectResult> {
      std::vector<int> adapters;
      for (const int v : big.members()) {
        if (v == big_center) continue;
        adapters.push_back(v);
        if (static_cast<int>(adapters.size()) == C) break;
      }
      if (static_cast<int>(adapters.size()) < C) return std::nullopt;
      detail::VSet adapter_set(n);
      for (const int v : adapters) adapter_set.add(v);
      const detail::VSet anchor = big_star.minus(adapter_set);
      if (anchor.empty()) return std::nullopt;

      Coloring cand = ctx.ref;
      std::vector<bool> handled(n, false);
      handled[r] = handled[b] = true;
      for (const int v : anchor.members()) handled[v] = true;

      std::vector<int> remaining = other.members();
      for (const int u : adapters) {
        int best_k = -1, best_cover = -1;
        for (const int k : positive[u]) {
          if (!ctx.nbhd(u, k).intersects(anchor)) continue;
          int cover = 0;
          for (const int v : remaining) {
            if (handled[v]) continue;
            for (const int kv : positive[v])
              if (m.edge_present(v, u, kv, k)) {
                ++cover;
                break;
              }
          }
          if (cover > best_cover) {
            best_cover = cover;
            best_k = k;
          }
        }
        if (best_k < 0) return std::nullopt;
        cand[u] = best_k;
        handled[u] = true;
        for (const int v : remaining) {
          if (handled[v]) continue;
          for (const int kv : positive[v]) {
            if (m.edge_present(v, u, kv, best_k)) {
              cand[v] = kv;
              handled[v] = true;
              break;
            }
          }
        }
      }
      for (const int v : remaining)
        if (!handled[v]) return std::nullopt;

      std::vector<int> leftovers;
      for (int v = 0; v < n; ++v)
        if (!handled[v]) leftovers.push_back(v);
      if (!detail::hook_all(ctx, cand, leftovers, anchor)) return std::nullopt;
      return finish(std::move(cand), attempt, "large-side");
    };
    if (OB.count() > C || OR.count() > C) {
      if (OB.count() >= OR.count()) {
        if (auto done = try_large_side(OB, b, B, OR)) return *done;
      } else {
        if (auto done = try_large_side(OR, r, R, OB)) return *done;
      }
    }

    // Injective pairing of the obligate sides: match each source vertex to
    // a distinct target that can simultaneously edge to it and anchor into
    // the target-side star; everything else hooks the anchor set.
    auto try_injective = [&](const std::vector<int>& source,
                             const std::vector<int>& targets, const detail::VSet& anchor,
                             const std::string& phase) -> std::optional<ConnectResult> {
      if (source.empty()) return std::nullopt;
      if (source.size() > targets.size()) return std::nullopt;
      if (anchor.empty()) return std::nullopt;

      std::vector<std::vector<int>> anchor_colors(targets.size());
      for (std::size_t t = 0; t < targets.size(); ++t)
        for (const int k : positive[targets[t]])
          if (ctx.nbhd(targets[t], k).intersects(anchor))
            anchor_colors[t].push_back(k);

      auto admissible = [&](int v, std::size_t t) {
        for (const int ku : anchor_colors[t])
          for (const int kv : positive[v])
            if (m.edge_present(v, targets[t], kv, ku)) return true;
        return false;
      };

      std::vector<int> match_of_target(targets.size(), -1);
      std::vector<char> used(targets.size(), 0);
      auto augment = [&](auto&& self, int v) -> bool {
        for (std::size_t t = 0; t < targets.size(); ++t) {
          if (used[t] || !admissible(v, t)) continue;
          used[t] = 1;
          if (match_of_target[t] == -1 || self(self, match_of_target[t])) {
            match_of_target[t] = v;
            return true;
          }
        }
        return false;
      };
      for (const int v : source) {
        std::fill(used.begin(), used.end(), 0);
        if (!augment(augment, v)) return std::nullopt;
      }

      Coloring cand = ctx.ref;
      std::vector<bool> handled(n, false);
      handled[r] = handled[b] = true;
      for (const int v : anchor.members()) handled[v] = true;
      for (std::size_t t = 0; t < targets.size(); ++t) {
        const int v = match_of_target[t];
        if (v == -1) continue;
        const int u = targets[t];
        bool done = false;
        for (const int ku : anchor_colors[t]) {
          for (const int kv : positive[v]) {
            if (m.edge_present(v, u, kv, ku)) {
              cand[u] = ku;
              cand[v] = kv;
              done = true;
              break;
            }
          }
          if (done) break;
        }
        if (!done) return std::nullopt;
        handled[u] = handled[v] = true;
      }
      std::vector<int> leftovers;
      for (int v = 0; v < n; ++v)
        if (!handled[v]) leftovers.push_back(v);
      if (!detail::hook_all(ctx, cand, leftovers, anchor)) return std::nullopt;
      return finish(std::move(cand), attempt, phase);
    };

    const auto or_members = OR.members();
    const auto ob_members = OB.members();
    {
      std::vector<int> targets;
      for (const int u : ob_members)
        if (u != b) targets.push_back(u);
      if (auto done = try_injective(or_members, targets, B.minus(OB), "injective"))
        return *done;
    }
    {
      std::vector<int> targets;
      for (const int u : or_members)
        if (u != r) targets.push_back(u);
      if (auto done = try_injective(ob_members, targets, R.minus(OR), "injective"))
        return *done;
    }

    // One robust helper joins the smaller target side: a non-obligate
    // vertex whose color distribution lands a deep intrusion into one star
    // with probability at least 1 - p.
    {
      for (int v = 0; v < n; ++v) {
        if (rb_fixed[v] || OR.has(v) || OB.has(v)) continue;
        for (const int side : {0, 1}) {  // 0: deep into B, 1: deep into R
          const detail::VSet& star = side == 0 ? B : R;
          BigFloat mass(0L);
          for (const int k : positive[v])
            if (ctx.nbhd(v, k).count_and(star) > C)
              mass += to_bigfloat(m.palettes[v][k]);
          if (compare(mass, one_minus_p) < 0) continue;
          if (side == 0) {
            std::vector<int> targets;
            for (const int u : ob_members)
              if (u != b) targets.push_back(u);
            targets.push_back(v);
            std::sort(targets.begin(), targets.end());
            detail::VSet excluded = OB;
            excluded.add(v);
            if (auto done = try_injective(or_members, targets, B.minus(excluded),
                                          "helper-injective")) {
              return *done;
            }
          } else {
            std::vector<int> targets;
            for (const int u : or_members)
              if (u != r) targets.push_back(u);
            targets.push_back(v);
            std::sort(targets.begin(), targets.end());
            detail::VSet excluded = OR;
            excluded.add(v);
            if (auto done = try_injective(ob_members, targets, R.minus(excluded),
                                          "helper-injective")) {
              return *done;
            }
          }
        }
      }
    }

    // A single bridging vertex adjacent to both stars at once.
    {
      const detail::VSet both = R.unite(B);
      std::optional<ConnectResult> done;
      for (int v = 0; v < n && !done; ++v) {
        if (rb_fixed[v]) continue;
        for (const int k : positive[v]) {
          const detail::VSet nb = ctx.nbhd(v, k);
          if (!nb.intersects(R) || !nb.intersects(B)) continue;
          Coloring cand = ctx.ref;
          cand[v] = k;
          std::vector<int> outside;
          for (int w = 0; w < n; ++w)
            if (!both.has(w) && w != r && w != b && w != v) outside.push_back(w);
          if (detail::hook_all(ctx, cand, outside, both)) {
            done = finish(std::move(cand), attempt, "bridge");
            if (done) break;
          }
        }
      }
      if (done) return *done;
    }

    // Equal obligate sides: orient each matched pair by which endpoint is
    // likelier to offer the edge, then wire the pairs through one large
    // neighborhood (some arc pointing back at the source side) or through
    // the union of source-side neighborhoods (all arcs forward).
    if (!or_members.empty() && or_members.size() == ob_members.size()) {
      const std::size_t pairs = or_members.size();
      std::vector<bool> toward_ob(pairs, false);
      for (std::size_t i = 0; i < pairs; ++i) {
        const int rp = or_members[i], bp = ob_members[i];
        Scalar p_rb(Rational(0)), p_br(Rational(0));
        for (const int k : positive[rp]) {
          for (const int k2 : positive[bp])
            if (m.edge_present(rp, bp, k, k2)) {
              p_rb += m.palettes[rp][k];
              break;
            }
        }
        for (const int k : positive[bp]) {
          for (const int k2 : positive[rp])
            if (m.edge_present(rp, bp, k2, k)) {
              p_br += m.palettes[bp][k];
              break;
            }
        }
        toward_ob[i] = compare(p_rb, p_br) > 0;
      }

      int back_arc = -1;
      for (std::size_t i = 0; i < pairs; ++i) {
        if (!toward_ob[i]) {
          back_arc = static_cast<int>(i);
          break;
        }
      }

      auto pair_edge_color = [&](int u, int partner, int ku) {
        for (const int kp : positive[partner])
          if (m.edge_present(partner, u, kp, ku)) return kp;
        return -1;
      };

      if (back_arc >= 0) {
        // Some pair's blue endpoint offers the edge: give it its largest
        // neighborhood color among those completing the pair edge, keep that
        // neighborhood, anchor all other pairs into it.
        const int bp = ob_members[back_arc], rp = or_members[back_arc];
        int best_k = -1, best_n = -1;
        for (const int k : positive[bp]) {
          bool partner_ok = false;
          for (const int kv : positive[rp])
            if (m.edge_present(rp, bp, kv, k)) {
              partner_ok = true;
              break;
            }
          if (!partner_ok) continue;
          const int size = ctx.nbhd(bp, k).count();
          if (size > best_n) {
            best_n = size;
            best_k = k;
          }
        }
        if (best_k >= 0) {
          Coloring cand = ctx.ref;
          cand[bp] = best_k;
          int kv = -1;
          for (const int k : positive[rp])
            if (m.edge_present(rp, bp, k, best_k)) {
              kv = k;
              break;
            }
          if (kv >= 0) {
            cand[rp] = kv;
            detail::VSet keep = ctx.nbhd(bp, best_k).minus(OR.unite(OB));
            if (!keep.empty()) {
              std::vector<bool> handled(n, false);
              handled[bp] = handled[rp] = true;
              for (const int v : keep.members()) handled[v] = true;
              bool ok = true;
              for (std::size_t i = 0; i < pairs && ok; ++i) {
                if (static_cast<int>(i) == back_arc) continue;
                const int u = ob_members[i], v = or_members[i];
                bool assigned = false;
                for (const int ku : positive[u]) {
                  if (!ctx.nbhd(u, ku).intersects(keep)) continue;
                  const int kv2 = pair_edge_color(u, v, ku);
                  if (kv2 >= 0) {
                    cand[u] = ku;
                    cand[v] = kv2;
                    handled[u] = handled[v] = true;
                    assigned = true;
                    break;
                  }
                }
                ok = assigned;
              }
              if (ok) {
                std::vector<int> leftovers;
                for (int v = 0; v < n; ++v)
                  if (!handled[v]) leftovers.push_back(v);
                if (detail::hook_all(ctx, cand, leftovers, keep)) {
                  if (auto done = finish(std::move(cand), attempt, "orient-back"))
                    return *done;
                }
              }
            }
          }
        }
      } else {
        // All arcs point forward: each red endpoint takes its largest
        // neighborhood color that still completes the pair edge; the union
        // of those neighborhoods is kept, and the rest hook into it, each
        // preferring a color meeting the most distinct parts.
        Coloring cand = ctx.ref;
        std::vector<detail::VSet> parts;
        std::vector<bool> handled(n, false);
        bool ok = true;
        for (std::size_t i = 0; i < pairs && ok; ++i) {
          const int v = or_members[i], u = ob_members[i];
          int best_k = -1, best_n = -1;
          for (const int k : positive[v]) {
            bool partner_ok = false;
            for (const int ku : positive[u])
              if (m.edge_present(v, u, k, ku)) {
                partner_ok = true;
                break;
              }
            if (!partner_ok) continue;
            const int size = ctx.nbhd(v, k).count();
            if (size > best_n) {
              best_n = size;
              best_k = k;
            }
          }
          if (best_k < 0) {
            ok = false;
            break;
          }
          cand[v] = best_k;
          int ku = -1;
          for (const int k : positive[u])
            if (m.edge_present(v, u, best_k, k)) {
              ku = k;
              break;
            }
          cand[u] = ku;
          handled[u] = handled[v] = true;
          parts.push_back(ctx.nbhd(v, best_k).minus(OR.unite(OB)));
        }
        if (ok) {
          detail::VSet keep(n);
          for (const auto& part : parts) keep = keep.unite(part);
          if (!keep.empty()) {
            for (const int v : keep.members()) handled[v] = true;
            bool hooked = true;
            for (int w = 0; w < n && hooked; ++w) {
              if (handled[w]) continue;
              int best_k = -1, best_parts = 0;
              for (const int k : positive[w]) {
                const detail::VSet nb = ctx.nbhd(w, k);
                int hit = 0;
                for (const auto& part : parts)
                  if (nb.intersects(part)) ++hit;
                if (hit > best_parts) {
                  best_parts = hit;
                  best_k = k;
                }
              }
              if (best_k < 0) {
                hooked = false;
                break;
              }
              cand[w] = best_k;
            }
            if (hooked) {
              if (auto done = finish(std::move(cand), attempt, "orient-forward"))
                return *done;
            }
          }
        }
      }
    }
  }

  result.diagnostics["attempts"] = std::to_string(kAttempts);
  if (compare(min_marg, Scalar(Rational(1, 2))) >= 0) {
    ConnectResult fallback = connect_table(m);
    fallback.algorithm = "recolor";
    for (const auto& [k, v] : result.diagnostics) fallback.diagnostics.emplace(k, v);
    fallback.diagnostics["fallback"] = "table";
    return fallback;
  }
  result.outcome = ConnectOutcome::fail;
  result.diagnostics["reason"] = "no attempt produced a validated coloring";
  return result;
}

}  // namespace deplab
