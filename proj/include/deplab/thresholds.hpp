#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "deplab/bigfloat.hpp"
#include "deplab/coloring_model.hpp"
#include "deplab/config.hpp"
#include "deplab/constructions.hpp"
#include "deplab/distribution.hpp"
#include "deplab/errors.hpp"
#include "deplab/independence.hpp"
#include "deplab/rng.hpp"
#include "deplab/scalar.hpp"
#include "deplab/trig.hpp"

namespace deplab {

// Largest edge probability a subgraph-independent distribution on n
// vertices can have while still avoiding connectivity with certainty:
// (1 - tan^2(pi/(2n))) / 2.  Attained by the trigonometric two-clique
// distribution; zero at n = 2, strictly increasing, limit 1/2.
inline BigFloat rho_subgraph(int n, mpfr_prec_t precision = 0) {
  if (n < 2) throw usage_error("rho_subgraph needs n >= 2");
  const BigFloat t =
      trig_scalar(TrigExpr::tan2_halfpi_over_n, Rational(n), precision);
  return (BigFloat(1L) - t) / BigFloat(2L);
}

// Above 1 - 2/n, a pairwise-independent distribution has too many expected
// edges to avoid connectivity: no never-connected witness can exist.
inline Scalar rho_pairwise_upper(int n) {
  if (n < 2) throw usage_error("rho_pairwise_upper needs n >= 2");
  return Scalar(Rational(n - 2, n));
}

// Edge probability of the color-shunning model on n vertices:
// (n-2) * (3n - 4 - sqrt(5n^2 - 16n + 12)) / (2 (n-1)^2).
// Equals 1/4 at n = 3 and increases towards 2 - golden ratio.
inline BigFloat rho_coloring_lower(int n, mpfr_prec_t precision = 0) {
  if (n < 3) throw usage_error("rho_coloring_lower needs n >= 3");
  const mpfr_prec_t target = precision > 0 ? precision : config::precision();
  const BigFloat work_n(static_cast<long>(n), target + 64);
  const BigFloat disc = sqrt(BigFloat(static_cast<long>(5) * n * n - 16 * n + 12,
                                      target + 64));
  const BigFloat numerator = (work_n - BigFloat(2L)) *
                             (BigFloat(3L) * work_n - BigFloat(4L) - disc);
  const BigFloat denominator =
      BigFloat(2L) * (work_n - BigFloat(1L)) * (work_n - BigFloat(1L));
  const BigFloat wide = numerator / denominator;
  BigFloat out(Precision{target});
  mpfr_set(out.raw(), wide.raw(), MPFR_RNDN);
  return out;
}

// Symmetric Lovasz-local-lemma threshold for dependency degree d: events
// with probability below 1 - (d-1)^(d-1)/d^d (1/2 when d = 1) can always be
// avoided simultaneously.
inline Scalar lll_threshold(int d) {
  if (d < 1) throw usage_error("lll_threshold needs d >= 1");
  if (d == 1) return Scalar(Rational(1, 2));
  Int num = 1, den = 1;
  for (int i = 0; i < d - 1; ++i) num *= d - 1;
  for (int i = 0; i < d; ++i) den *= d;
  return Scalar(Rational(1) - make_rational(num, den));
}

// Does this distribution witness a lower bound at the claimed edge
// probability?  It must keep every edge probability at least the claimed
// value (exactly, or within tolerance when inexact numbers are involved)
// while never producing a connected graph.
inline bool verify_lower_bound_witness(const ExplicitDistribution& d,
                                       const Scalar& claimed) {
  const Scalar mm = min_marginal(d);
  bool margin_ok;
  if (mm.kind() != ScalarKind::bigfloat && claimed.kind() != ScalarKind::bigfloat) {
    margin_ok = compare(mm, claimed) >= 0;
  } else {
    const BigFloat diff = to_bigfloat(mm) - to_bigfloat(claimed);
    margin_ok = diff.sign() >= 0 || compare(abs(diff), float_tolerance()) <= 0;
  }
  if (!margin_ok) return false;
  const Scalar pc = prob_connected(d);
  if (pc.kind() == ScalarKind::bigfloat)
    return compare(abs(to_bigfloat(pc)), float_tolerance()) <= 0;
  return sign(pc) == 0;
}

// Local-lemma upper-bound check for edge-subgraph independence: when the
// distribution is edge-subgraph independent and every edge probability
// exceeds 3/4, a spanning path must appear with positive probability.  The
// check verifies that conclusion directly on the concrete distribution.
struct PathWitnessResult {
  bool applicable = false;
  std::string reason;
  bool holds = false;
  Scalar path_probability{Rational(0)};
};

inline PathWitnessResult verify_esub_lll(const ExplicitDistribution& d) {
  PathWitnessResult out;
  const auto cert = check_edge_subgraph(d);
  if (cert) {
    out.reason = "not edge-subgraph independent";
    return out;
  }
  const Scalar mm = min_marginal(d);
  const Scalar bound(Rational(3, 4));
  bool above;
  if (mm.kind() != ScalarKind::bigfloat) {
    above = compare(mm, bound) > 0;
  } else {
    above = compare(to_bigfloat(mm), to_bigfloat(Scalar(bound))) > 0;
  }
  if (!above) {
    out.reason = "minimum edge probability does not exceed 3/4";
    return out;
  }
  out.applicable = true;
  EdgeMask path = 0;
  for (int v = 0; v + 1 < d.n; ++v) path |= edge_bit(v, v + 1, d.n);
  out.path_probability = prob_pattern(d, EdgePattern{path, 0});
  if (out.path_probability.kind() == ScalarKind::bigfloat) {
    out.holds = to_bigfloat(out.path_probability).sign() > 0 &&
                compare(to_bigfloat(out.path_probability), float_tolerance()) > 0;
  } else {
    out.holds = sign(out.path_probability) > 0;
  }
  if (!out.holds) out.reason = "spanning path has zero probability";
  return out;
}

// Monte-Carlo connectivity estimate with a 95% Wilson score interval.
struct McEstimate {
  long long trials = 0;
  long long successes = 0;
  double estimate = 0.0;
  double wilson_lower = 0.0;
  double wilson_upper = 0.0;
};

inline McEstimate mc_connectivity(const ColoringModel& m, long long trials,
                                  std::uint64_t seed, int threads = 0) {
  if (trials < 100) throw usage_error("mc_connectivity needs at least 100 trials");
  validate_model(m);
  const ModelSampler sampler(m);

  int workers = threads > 0 ? threads : config::threads();
  workers = std::max(1, std::min<int>(workers, 64));
  if (static_cast<long long>(workers) > trials) workers = static_cast<int>(trials);

  // Every trial derives its own generator from (seed, trial index), so the
  // tally is independent of how trials are split across workers.
  auto run_range = [&](long long lo, long long hi) {
    long long hits = 0;
    for (long long t = lo; t < hi; ++t) {
      Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(t)));
      const SampledGraph g = sampler.sample_graph(rng);
      if (g.connected()) ++hits;
    }
    return hits;
  };

  long long successes = 0;
  if (workers == 1) {
    successes = run_range(0, trials);
  } else {
    std::vector<long long> partial(workers, 0);
    std::vector<std::thread> pool;
    const long long chunk = (trials + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      const long long lo = w * chunk;
      const long long hi = std::min(trials, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back([&, w, lo, hi] { partial[w] = run_range(lo, hi); });
    }
    for (auto& th : pool) th.join();
    for (const auto p : partial) successes += p;
  }

  McEstimate out;
  out.trials = trials;
  out.successes = successes;
  const double T = static_cast<double>(trials);
  const double phat = static_cast<double>(successes) / T;
  out.estimate = phat;
  constexpr double z = 1.959963984540054;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / T;
  const double center = (phat + z2 / (2.0 * T)) / denom;
  const double half =
      z * std::sqrt(phat * (1.0 - phat) / T + z2 / (4.0 * T * T)) / denom;
  // At the degenerate counts the bound is exactly the endpoint; computing it
  // through sqrt can leave a stray ulp, so pin those cases.
  out.wilson_lower = successes == 0 ? 0.0 : std::max(0.0, center - half);
  out.wilson_upper = successes == trials ? 1.0 : std::min(1.0, center + half);
  return out;
}

// One row of the threshold table: for a given vertex count and independence
// class, the best known never-connected edge probability (lower) and the
// smallest edge probability forcing possible connectivity (upper), with the
// construction backing the lower bound.
struct ThresholdRow {
  int n = 0;
  std::string model;
  Scalar lower{Rational(0)};
  Scalar upper{Rational(0)};
  std::string source;
};

namespace detail {

inline BigFloat threshold_as_bigfloat(const Scalar& s) { return to_bigfloat(s); }

}  // namespace detail

// Threshold rows for all vertex counts 3..n_max, strongest class last
// within each n.  Lower bounds come from the concrete constructions; a
// class without its own construction at that n inherits the best bound from
// any smaller (more independent) class, since such witnesses remain valid.
inline std::vector<ThresholdRow> threshold_table(int n_max) {
  if (n_max < 3) throw usage_error("threshold_table needs n_max >= 3");
  std::vector<ThresholdRow> rows;
  for (int n = 3; n <= n_max; ++n) {
    const BigFloat sub_lower = rho_subgraph(n);
    ThresholdRow pw;
    pw.n = n;
    pw.model = "pairwise";
    if (n % 2 == 0) {
      const Scalar q = cm_q(n);
      pw.lower = cm_marginal(n, q);
      pw.source = "clique-matching";
    } else {
      pw.lower = Scalar(sub_lower);
      pw.source = "inherited";
    }
    pw.upper = rho_pairwise_upper(n);
    rows.push_back(pw);

    ThresholdRow mat;
    mat.n = n;
    mat.model = "matching";
    if (n % 8 == 0) {
      mat.lower = Scalar(Rational(1, 2));
      mat.source = "parity-two-clique";
    } else {
      mat.lower = Scalar(sub_lower);
      mat.source = "inherited";
    }
    mat.upper = rho_pairwise_upper(n);
    rows.push_back(mat);

    ThresholdRow esub;
    esub.n = n;
    esub.model = "edge-subgraph";
    esub.lower = Scalar(sub_lower);
    esub.source = "inherited";
    esub.upper = Scalar(Rational(3, 4));
    rows.push_back(esub);

    ThresholdRow sub;
    sub.n = n;
    sub.model = "subgraph";
    sub.lower = Scalar(sub_lower);
    sub.source = "two-cliques";
    sub.upper = Scalar(sub_lower);
    rows.push_back(sub);

    ThresholdRow col;
    col.n = n;
    col.model = "coloring";
    col.lower = Scalar(rho_coloring_lower(n));
    col.source = "color-shunning";
    col.upper = Scalar(Rational(1, 2));
    rows.push_back(col);

    ThresholdRow col2;
    col2.n = n;
    col2.model = "coloring-two";
    col2.lower = Scalar(Rational(1, 4));
    col2.source = "three-block";
    col2.upper = Scalar(Rational(1, 4));
    rows.push_back(col2);
  }
  return rows;
}

// Format a threshold value with 30 significant digits; exact rationals also
// carry their fraction.
inline std::string format_threshold_value(const Scalar& s) {
  const BigFloat approx = to_bigfloat(s);
  std::string text = approx.to_decimal(30);
  if (s.kind() == ScalarKind::rational)
    text += " (=" + format_rational(s.as_rational()) + ")";
  return text;
}

inline std::string threshold_table_csv(const std::vector<ThresholdRow>& rows) {
  std::ostringstream out;
  out << "n,model,lower,upper,source\n";
  for (const auto& row : rows) {
    out << row.n << ',' << row.model << ',' << format_threshold_value(row.lower) << ','
        << format_threshold_value(row.upper) << ',' << row.source << '\n';
  }
  return out.str();
}

}  // namespace deplab
