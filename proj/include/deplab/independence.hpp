#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/graph.hpp"
#include "deplab/scalar.hpp"

namespace deplab {

// The ladder of independence conditions, weakest to strongest.  Each level
// implies all levels below it, so a distribution is summarized by the
// highest level it satisfies.
enum class Level { none, pairwise, matching, edge_subgraph, subgraph };

inline const char* level_name(Level level) {
  switch (level) {
    case Level::none: return "none";
    case Level::pairwise: return "pairwise";
    case Level::matching: return "matching";
    case Level::edge_subgraph: return "edge-subgraph";
    case Level::subgraph: return "subgraph";
  }
  return "?";
}

inline Level parse_level(const std::string& name) {
  if (name == "pairwise") return Level::pairwise;
  if (name == "matching") return Level::matching;
  if (name == "edge-subgraph") return Level::edge_subgraph;
  if (name == "subgraph") return Level::subgraph;
  throw usage_error("unknown independence level: \"" + name + "\"");
}

// A concrete witness that one level's factorization fails: the violated
// level, the objects quantified over at that level, and both sides of the
// equation that should have matched.  The witness is deterministic — it is
// the first violation in the documented enumeration order — so certificates
// can be pinned in tests and re-verified independently.
struct Certificate {
  Level level = Level::none;

  // Pairwise: two vertex-disjoint edges.
  std::optional<int> edge_e;
  std::optional<int> edge_f;

  // Matching: pairwise-disjoint edge indices.
  std::optional<Matching> matching;

  // Edge-subgraph: edge_e together with a disjoint vertex set and the exact
  // induced edge pattern on it (edge masks keep original vertex labels).
  std::optional<VertexMask> set_w;
  std::optional<EdgeMask> pattern_w;

  // Subgraph: two disjoint vertex sets with their induced edge patterns.
  std::optional<VertexMask> set_v;
  std::optional<EdgeMask> pattern_v;

  Scalar lhs;
  Scalar rhs;
};

namespace detail {

// Exact equality for exact kinds; tolerance equality once floats are involved.
inline bool probs_match(const ExplicitDistribution& d, const Scalar& a, const Scalar& b) {
  if (d.kind == ScalarKind::bigfloat) return equal_within_tolerance(a, b);
  return compare(a, b) == 0;
}

inline std::vector<Scalar> all_marginals(const ExplicitDistribution& d) {
  std::vector<Scalar> out;
  out.reserve(complete_edge_count(d.n));
  for (int e = 0; e < complete_edge_count(d.n); ++e)
    out.push_back(prob_pattern(d, {EdgeMask(1) << e, 0}));
  return out;
}

}  // namespace detail

// Do all pairs of vertex-disjoint edges occur independently?  Scans pairs in
// lexicographic (e, f) order and reports the first failure.  With fewer than
// four vertices there are no disjoint pairs and the condition holds vacuously.
inline std::optional<Certificate> check_pairwise(const ExplicitDistribution& d) {
  const int total = complete_edge_count(d.n);
  const auto marg = detail::all_marginals(d);
  for (int e = 0; e < total; ++e) {
    const auto [eu, ev] = edge_endpoints(e, d.n);
    const VertexMask emask = (VertexMask(1) << eu) | (VertexMask(1) << ev);
    for (int f = e + 1; f < total; ++f) {
      const auto [fu, fv] = edge_endpoints(f, d.n);
      const VertexMask fmask = (VertexMask(1) << fu) | (VertexMask(1) << fv);
      if (emask & fmask) continue;
      const Scalar lhs =
          prob_pattern(d, {(EdgeMask(1) << e) | (EdgeMask(1) << f), 0});
      const Scalar rhs = marg[e] * marg[f];
      if (!detail::probs_match(d, lhs, rhs)) {
        Certificate cert;
        cert.level = Level::pairwise;
        cert.edge_e = e;
        cert.edge_f = f;
        cert.lhs = lhs;
        cert.rhs = rhs;
        return cert;
      }
    }
  }
  return std::nullopt;
}

// Does every matching occur with probability equal to the product of its
// edge marginals?  (Requiring this for matchings alone is equivalent to
// requiring it for all subsets of matchings, since sub-matchings are
// matchings.)  Matchings are visited depth-first, lowest free edge first, so
// the reported witness is the lexicographically first failure.
inline std::optional<Certificate> check_matching(const ExplicitDistribution& d) {
  const auto marg = detail::all_marginals(d);
  std::optional<Certificate> found;
  enumerate_matchings(d.n, [&](const Matching& m) {
    if (m.size() < 2) return true;  // single edges match their marginal by definition
    const Scalar lhs = prob_pattern(d, {matching_mask(m), 0});
    Scalar rhs(Rational(1));
    for (int e : m) rhs *= marg[e];
    if (!detail::probs_match(d, lhs, rhs)) {
      Certificate cert;
      cert.level = Level::matching;
      cert.matching = m;
      cert.lhs = lhs;
      cert.rhs = rhs;
      found = std::move(cert);
      return false;
    }
    return true;
  });
  return found;
}

// Is each edge independent of the entire induced subgraph on any disjoint
// vertex set?  For every edge e (ascending) and every non-empty vertex set w
// avoiding e's endpoints (ascending as a bit mask), the joint distribution
// of (edge e, induced pattern on w) must factorize.  Patterns are compared
// in ascending order of their edge mask, so the first failing triple
// (e, w, pattern) is deterministic.
inline std::optional<Certificate> check_edge_subgraph(const ExplicitDistribution& d) {
  const int total = complete_edge_count(d.n);
  const VertexMask all = (VertexMask(1) << d.n) - 1;
  for (int e = 0; e < total; ++e) {
    const auto [eu, ev] = edge_endpoints(e, d.n);
    const VertexMask emask = (VertexMask(1) << eu) | (VertexMask(1) << ev);
    const EdgeMask ebit = EdgeMask(1) << e;
    const Scalar marg_e = prob_pattern(d, {ebit, 0});
    for (VertexMask w = 1; w <= all; ++w) {
      if ((w & ~all) || (w & emask) || w == 0) continue;
      const EdgeMask filter = edges_within(w, d.n);
      std::map<EdgeMask, Scalar> with_edge;
      std::map<EdgeMask, Scalar> pattern_mass;
      for (const auto& [mask, p] : d.entries) {
        const EdgeMask pat = mask & filter;
        auto [it, fresh] = pattern_mass.emplace(pat, p);
        if (!fresh) it->second += p;
        if (mask & ebit) {
          auto [jt, jfresh] = with_edge.emplace(pat, p);
          if (!jfresh) jt->second += p;
        }
      }
      for (const auto& [pat, mass] : pattern_mass) {
        const auto jt = with_edge.find(pat);
        const Scalar lhs = jt == with_edge.end() ? Scalar(Rational(0)) : jt->second;
        const Scalar rhs = marg_e * mass;
        if (!detail::probs_match(d, lhs, rhs)) {
          Certificate cert;
          cert.level = Level::edge_subgraph;
          cert.edge_e = e;
          cert.set_w = w;
          cert.pattern_w = pat;
          cert.lhs = lhs;
          cert.rhs = rhs;
          return cert;
        }
      }
    }
  }
  return std::nullopt;
}

// Are the induced subgraphs on any two disjoint vertex sets independent?
// Vertex sets are scanned ascending as bit masks (v outer, w inner), and for
// each pair every combination of achievable patterns — including pairs that
// never occur jointly — is compared in ascending (pattern_v, pattern_w)
// order.
inline std::optional<Certificate> check_subgraph(const ExplicitDistribution& d) {
  const VertexMask all = (VertexMask(1) << d.n) - 1;
  for (VertexMask v = 1; v <= all; ++v) {
    const EdgeMask filter_v = edges_within(v, d.n);
    for (VertexMask w = 1; w <= all; ++w) {
      if (v & w) continue;
      const EdgeMask filter_w = edges_within(w, d.n);
      std::map<EdgeMask, Scalar> mass_v;
      std::map<EdgeMask, Scalar> mass_w;
      std::map<std::pair<EdgeMask, EdgeMask>, Scalar> joint;
      for (const auto& [mask, p] : d.entries) {
        const EdgeMask pv = mask & filter_v;
        const EdgeMask pw = mask & filter_w;
        auto [iv, fv] = mass_v.emplace(pv, p);
        if (!fv) iv->second += p;
        auto [iw, fw] = mass_w.emplace(pw, p);
        if (!fw) iw->second += p;
        auto [ij, fj] = joint.emplace(std::make_pair(pv, pw), p);
        if (!fj) ij->second += p;
      }
      for (const auto& [pv, mv] : mass_v) {
        for (const auto& [pw, mw] : mass_w) {
          const auto jt = joint.find({pv, pw});
          const Scalar lhs = jt == joint.end() ? Scalar(Rational(0)) : jt->second;
          const Scalar rhs = mv * mw;
          if (!detail::probs_match(d, lhs, rhs)) {
            Certificate cert;
            cert.level = Level::subgraph;
            cert.set_v = v;
            cert.pattern_v = pv;
            cert.set_w = w;
            cert.pattern_w = pw;
            cert.lhs = lhs;
            cert.rhs = rhs;
            return cert;
          }
        }
      }
    }
  }
  return std::nullopt;
}

inline std::optional<Certificate> check_level(const ExplicitDistribution& d, Level level) {
  switch (level) {
    case Level::pairwise: return check_pairwise(d);
    case Level::matching: return check_matching(d);
    case Level::edge_subgraph: return check_edge_subgraph(d);
    case Level::subgraph: return check_subgraph(d);
    case Level::none: throw usage_error("no check exists for level \"none\"");
  }
  throw usage_error("unknown level");
}

// The highest level a distribution satisfies, plus the certificate refuting
// the first level above it (absent only when even the strongest condition
// checked here holds).
struct Classification {
  Level level = Level::none;
  std::optional<Certificate> refutation;
};

inline Classification classify(const ExplicitDistribution& d) {
  Classification out;
  if (auto cert = check_pairwise(d)) {
    out.level = Level::none;
    out.refutation = std::move(cert);
    return out;
  }
  if (auto cert = check_matching(d)) {
    out.level = Level::pairwise;
    out.refutation = std::move(cert);
    return out;
  }
  if (auto cert = check_edge_subgraph(d)) {
    out.level = Level::matching;
    out.refutation = std::move(cert);
    return out;
  }
  if (auto cert = check_subgraph(d)) {
    out.level = Level::edge_subgraph;
    out.refutation = std::move(cert);
    return out;
  }
  out.level = Level::subgraph;
  return out;
}

// Recomputes both sides of a certificate's equation from the distribution
// and confirms (a) the recorded values are reproduced and (b) they genuinely
// differ, so a certificate can be audited without trusting the checker.
inline bool verify_certificate(const ExplicitDistribution& d, const Certificate& cert) {
  Scalar lhs, rhs;
  switch (cert.level) {
    case Level::pairwise: {
      if (!cert.edge_e || !cert.edge_f) return false;
      const EdgeMask both = (EdgeMask(1) << *cert.edge_e) | (EdgeMask(1) << *cert.edge_f);
      lhs = prob_pattern(d, {both, 0});
      rhs = prob_pattern(d, {EdgeMask(1) << *cert.edge_e, 0}) *
            prob_pattern(d, {EdgeMask(1) << *cert.edge_f, 0});
      break;
    }
    case Level::matching: {
      if (!cert.matching) return false;
      lhs = prob_pattern(d, {matching_mask(*cert.matching), 0});
      rhs = Scalar(Rational(1));
      for (int e : *cert.matching) rhs *= prob_pattern(d, {EdgeMask(1) << e, 0});
      break;
    }
    case Level::edge_subgraph: {
      if (!cert.edge_e || !cert.set_w || !cert.pattern_w) return false;
      const EdgeMask filter = edges_within(*cert.set_w, d.n);
      if (*cert.pattern_w & ~filter) return false;
      const EdgeMask ebit = EdgeMask(1) << *cert.edge_e;
      lhs = prob_pattern(d, {ebit | *cert.pattern_w, filter & ~*cert.pattern_w});
      rhs = prob_pattern(d, {ebit, 0}) *
            prob_pattern(d, {*cert.pattern_w, filter & ~*cert.pattern_w});
      break;
    }
    case Level::subgraph: {
      if (!cert.set_v || !cert.pattern_v || !cert.set_w || !cert.pattern_w) return false;
      if (*cert.set_v & *cert.set_w) return false;
      const EdgeMask fv = edges_within(*cert.set_v, d.n);
      const EdgeMask fw = edges_within(*cert.set_w, d.n);
      if ((*cert.pattern_v & ~fv) || (*cert.pattern_w & ~fw)) return false;
      lhs = prob_pattern(d, {*cert.pattern_v | *cert.pattern_w,
                             (fv & ~*cert.pattern_v) | (fw & ~*cert.pattern_w)});
      rhs = prob_pattern(d, {*cert.pattern_v, fv & ~*cert.pattern_v}) *
            prob_pattern(d, {*cert.pattern_w, fw & ~*cert.pattern_w});
      break;
    }
    case Level::none:
      return false;
  }
  if (!detail::probs_match(d, lhs, cert.lhs)) return false;
  if (!detail::probs_match(d, rhs, cert.rhs)) return false;
  return !detail::probs_match(d, lhs, rhs);
}

}  // namespace deplab
