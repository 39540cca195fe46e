#include <catch2/catch_amalgamated.hpp>

#include <array>
#include <map>
#include <vector>

#include "deplab/deplab.hpp"
#include "test_util.hpp"

using namespace deplab;

TEST_CASE("product measures and the uniform measure coincide at one half",
          "[constructions]") {
  const ExplicitDistribution u = uniform_all_graphs(4);
  const ExplicitDistribution p = product_measure(4, Scalar(Rational(1, 2)));
  CHECK(testutil::same_distribution(u, p));
  CHECK(u.entries.size() == 64);
}

TEST_CASE("clique-deletion/matching mixture has the closed-form marginal",
          "[constructions]") {
  for (const int n : {4, 6, 8}) {
    const Scalar q(Rational(1, 3));
    const ExplicitDistribution d = cm(n, q);
    const Scalar expect = cm_marginal(n, q);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j < n; ++j) {
        CHECK(compare(marginal(d, i, j), expect) == 0);
      }
    }
    CHECK(is_zero(prob_connected(d)));
  }
  SECTION("degenerate mixtures stay valid") {
    CHECK_NOTHROW(cm(4, Scalar(Rational(0))));
    CHECK_NOTHROW(cm(4, Scalar(Rational(1))));
  }
  SECTION("domain validation") {
    CHECK_THROWS_AS(cm(5, Scalar(Rational(1, 2))), usage_error);
    CHECK_THROWS_AS(cm(2, Scalar(Rational(1, 2))), usage_error);
    CHECK_THROWS_AS(cm(4, Scalar(Rational(3, 2))), usage_error);
  }
}

TEST_CASE("the balanced mixture weight is an exact quadratic root",
          "[constructions]") {
  SECTION("closed forms for small sizes") {
    const Scalar q4 = cm_q(4);
    REQUIRE(q4.is_quadext());
    CHECK(q4.as_quadext().a == Rational(-8));
    CHECK(q4.as_quadext().b == Rational(6));
    CHECK(q4.as_quadext().d == Int(2));

    const Scalar q6 = cm_q(6);
    REQUIRE(q6.is_quadext());
    CHECK(q6.as_quadext().a == Rational(9, 49));
    CHECK(q6.as_quadext().b == Rational(5, 49));
    CHECK(q6.as_quadext().d == Int(15));
  }
  SECTION("the resulting marginal at n = 4 is sqrt(2) - 1") {
    const Scalar m = cm_marginal(4, cm_q(4));
    REQUIRE(m.is_quadext());
    CHECK(m.as_quadext().a == Rational(-1));
    CHECK(m.as_quadext().b == Rational(1));
    CHECK(m.as_quadext().d == Int(2));
  }
  SECTION("pairwise factorization vanishes at the root") {
    // The defect Pr[both of two disjoint edges] - Pr[edge]^2 is quadratic in
    // the mixture weight; interpolate it exactly from three rational weights
    // and confirm the advertised root annihilates it.
    for (const int n : {4, 6, 8}) {
      EdgePattern pair;
      pair.present = edge_bit(0, 1, n) | edge_bit(2, 3, n);
      auto defect = [&](const Scalar& q) {
        const ExplicitDistribution d = cm(n, q);
        const Scalar m = marginal(d, 0, 1);
        return prob_pattern(d, pair) - m * m;
      };
      const Scalar f0 = defect(Scalar(Rational(0)));
      const Scalar f1 = defect(Scalar(Rational(1)));
      const Scalar fh = defect(Scalar(Rational(1, 2)));
      // f(q) = c2 q^2 + c1 q + c0 through the three samples.
      const Scalar c0 = f0;
      const Scalar c2 = (f1 + f0) * Scalar(Rational(2)) - fh * Scalar(Rational(4));
      const Scalar c1 = f1 - c0 - c2;
      const Scalar root = cm_q(n);
      const Scalar residual = (c2 * root + c1) * root + c0;
      CHECK(is_zero(residual));
      // And the full distribution at that weight passes the factoring test.
      CHECK_FALSE(check_pairwise(cm(n, root)).has_value());
    }
  }
}

TEST_CASE("half-uniform two-clique mixture keeps fair edges but clusters",
          "[constructions]") {
  const ExplicitDistribution d = cc(6);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      CHECK(marginal(d, i, j).as_rational() == Rational(1, 2));
  // Triangles are over-represented against the fair-coin value 1/8.
  const Graph triangle(3, complete_mask(3));
  CHECK(prob_induced(d, 0b000111u, triangle).as_rational() == Rational(3, 16));
  CHECK_THROWS_AS(cc(5), usage_error);
}

TEST_CASE("even-clique measure spreads uniformly over even sets",
          "[constructions]") {
  const ExplicitDistribution d = sc(5);
  // Sets of even size on five vertices: one empty set, ten pairs, five 4-sets.
  CHECK(d.entries.size() == 16);
  for (const auto& [mask, p] : d.entries) {
    (void)mask;
    CHECK(p.as_rational() == Rational(1, 16));
  }
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      CHECK(marginal(d, i, j).as_rational() == Rational(1, 4));
  CHECK_THROWS_AS(sc(4), usage_error);
  CHECK_THROWS_AS(sc(3), usage_error);
}

TEST_CASE("mod-four split weighting is supported on bipartition graphs",
          "[constructions]") {
  const ExplicitDistribution d = mod4_two_clique(8);
  CHECK(d.entries.size() == 93);
  CHECK(is_zero(prob_connected(d)));

  SECTION("the empty-graph atom carries one sixteenth") {
    const auto it = d.entries.find(EdgeMask(0));
    REQUIRE(it != d.entries.end());
    CHECK(it->second.as_rational() == Rational(1, 16));
  }
  SECTION("all remaining mass sits on two-clique bipartitions") {
    Scalar split_mass(Rational(0));
    for (const auto& [mask, p] : d.entries) {
      if (mask == 0) continue;
      CHECK(testutil::is_split_graph_mask(mask, 8));
      split_mass = split_mass + p;
    }
    CHECK(split_mass.as_rational() == Rational(15, 16));
  }
  SECTION("matchings occur like fair coins") {
    enumerate_matchings(8, [&](const Matching& m) {
      EdgePattern pattern;
      pattern.present = matching_mask(m);
      const Rational expect(Int(1), Int(1) << m.size());
      CHECK(prob_pattern(d, pattern).as_rational() == expect);
      return true;
    });
  }
  CHECK_THROWS_AS(mod4_two_clique(12), usage_error);
}

TEST_CASE("bipartition family certifies its polynomial identities",
          "[constructions]") {
  for (int n = 2; n <= 6; ++n) {
    const PolyFamily fam = kn_family(n);
    const FamilyCertification cert = certify_kn_family(fam);
    INFO(cert.detail);
    CHECK(cert.normalization_ok);
    CHECK(cert.density_ok);
    CHECK(cert.factorization_ok);
  }
}

TEST_CASE("bipartition family evaluates to exact distributions",
          "[constructions]") {
  const PolyFamily fam = kn_family(4);
  const ExplicitDistribution d = kn_family_eval(fam, Rational(1, 3));
  const Rational density = Rational(1, 9) + Rational(4, 9);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(marginal(d, i, j).as_rational() == density);
  // Only the complete graph (both trivial bipartitions) is connected.
  CHECK(prob_connected(d).as_rational() == Rational(17, 81));
  CHECK_THROWS_AS(kn_family_eval(fam, Rational(3, 2)), usage_error);
  CHECK_THROWS_AS(kn_family_eval(fam, Rational(-1, 10)), usage_error);
}

TEST_CASE("trigonometric bipartition weights hit the tight marginal",
          "[constructions]") {
  for (const int n : {3, 4, 5}) {
    const ExplicitDistribution d = two_cliques_trig(n);
    CHECK(d.kind == ScalarKind::bigfloat);
    // Never connected: the complete graph carries no mass.
    CHECK(is_zero(prob_connected(d)));
    const BigFloat expect =
        ldexp2(BigFloat(1L) - trig_scalar(TrigExpr::tan2_halfpi_over_n, Rational(n)),
               -1);
    const BigFloat got = to_bigfloat(min_marginal(d));
    CHECK(abs(got - expect) <= float_tolerance());
    // Every edge has the same probability, up to tolerance.
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        CHECK(equal_within_tolerance(marginal(d, i, j), Scalar(expect)));
  }
}

TEST_CASE("uniform graphs filtered by edge parity", "[constructions]") {
  const ExplicitDistribution even = gnp_mod(4, 2);
  CHECK(even.entries.size() == 32);  // half of the 64 graphs
  for (const auto& [mask, p] : even.entries) {
    CHECK(popcount_edges(mask) % 2 == 0);
    CHECK(p.as_rational() == Rational(1, 32));
  }
  const ExplicitDistribution third = gnp_mod(4, 3);
  CHECK(third.entries.size() == 22);
  for (const auto& [mask, p] : third.entries) {
    CHECK(popcount_edges(mask) % 3 == 0);
    (void)p;
  }
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      CHECK(marginal(even, i, j).as_rational() == Rational(1, 2));
  CHECK_THROWS_AS(gnp_mod(4, 4), usage_error);
  CHECK_THROWS_AS(gnp_mod(2, 2), usage_error);
}

TEST_CASE("designated-neighbor model equalizes marginals without connecting",
          "[constructions]") {
  SECTION("the balancing weight solves its quadratic") {
    CHECK(cs_color_weight(3).as_rational() == Rational(1, 2));
    for (int n = 3; n <= 8; ++n) {
      const Scalar q = cs_color_weight(n);
      const Scalar residual = Scalar(Rational(n - 1)) * q * q +
                              Scalar(Rational(n - 2)) * q - Scalar(Rational(n - 2));
      CHECK(is_zero(residual));
      CHECK(sign(q) > 0);
      CHECK(compare(q, Scalar(Rational(1))) < 0);
    }
  }
  SECTION("every edge marginal equals the red-red weight") {
    for (const int n : {3, 4, 5}) {
      const ColoringModel m = cs(n);
      const Scalar q = cs_color_weight(n);
      const Scalar qq = q * q;
      for (int u = 0; u < n; ++u)
        for (int v = u + 1; v < n; ++v)
          CHECK(compare(edge_marginal(m, u, v), qq) == 0);
      CHECK(compare(model_min_marginal(m), qq) == 0);
    }
  }
  SECTION("the expanded distribution never connects") {
    CHECK(is_zero(prob_connected(to_explicit(cs(4)))));
    CHECK(is_zero(prob_connected(to_explicit(cs(5)))));
  }
}

TEST_CASE("three-block cyclic model pins quarter marginals",
          "[constructions]") {
  for (const auto& sizes : std::vector<std::array<int, 3>>{
           {1, 1, 1}, {1, 1, 2}, {1, 2, 2}, {2, 2, 2}}) {
    const ColoringModel m = three_block(sizes[0], sizes[1], sizes[2]);
    const int n = sizes[0] + sizes[1] + sizes[2];
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        CHECK(edge_marginal(m, u, v).as_rational() == Rational(1, 4));
    CHECK(is_zero(prob_connected(to_explicit(m))));
  }
  CHECK_THROWS_AS(three_block(0, 1, 1), usage_error);
}

TEST_CASE("matching-color model reproduces its exact connectivity",
          "[constructions]") {
  const ColoringModel m = two_clique_color_model(4, Scalar(Rational(4, 5)));
  const ExplicitDistribution d = to_explicit(m);
  // Connected iff all four vertices drew the same color.
  const Rational z(4, 5);
  const Rational expect = z * z * z * z + (1 - z) * (1 - z) * (1 - z) * (1 - z);
  CHECK(prob_connected(d).as_rational() == expect);
  CHECK(expect == Rational(257, 625));
  for (int u = 0; u < 4; ++u)
    for (int v = u + 1; v < 4; ++v)
      CHECK(edge_marginal(m, u, v).as_rational() == z * z + (1 - z) * (1 - z));
}
