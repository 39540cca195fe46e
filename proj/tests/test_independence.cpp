#include <catch2/catch_amalgamated.hpp>

#include "deplab/deplab.hpp"
#include "test_util.hpp"

using namespace deplab;

TEST_CASE("level names round-trip", "[independence]") {
  for (const Level level : {Level::none, Level::pairwise, Level::matching,
                            Level::edge_subgraph, Level::subgraph}) {
    if (level == Level::none) continue;
    CHECK(parse_level(level_name(level)) == level);
  }
  CHECK_THROWS_AS(parse_level("total"), usage_error);
}

TEST_CASE("product measures satisfy every independence condition",
          "[independence]") {
  for (int i = 0; i < 12; ++i) {
    Rng rng(Rng::derive(404, static_cast<std::uint64_t>(i)));
    const int n = 4 + static_cast<int>(rng.next_below(2));
    const ExplicitDistribution d =
        testutil::random_product(rng, n, Rational(1, 10), Rational(9, 10));
    CHECK_FALSE(check_pairwise(d).has_value());
    CHECK_FALSE(check_matching(d).has_value());
    CHECK_FALSE(check_edge_subgraph(d).has_value());
    CHECK_FALSE(check_subgraph(d).has_value());
    CHECK(classify(d).level == Level::subgraph);
  }
}

TEST_CASE("clique-deletion/matching mixture separates the first two levels",
          "[independence]") {
  const Scalar q6 = cm_q(6);
  const ExplicitDistribution d = cm(6, q6);

  SECTION("vertex-disjoint edge pairs factor") {
    CHECK_FALSE(check_pairwise(d).has_value());
  }
  SECTION("a three-edge matching breaks") {
    const auto cert = check_matching(d);
    REQUIRE(cert.has_value());
    CHECK(cert->level == Level::matching);
    REQUIRE(cert->matching.has_value());
    CHECK(*cert->matching == Matching({0, 9, 14}));
    // Joint probability of the perfect matching versus the product of its
    // edge marginals.
    const Scalar p = cm_marginal(6, q6);
    CHECK(compare(cert->rhs, p * p * p) == 0);
    CHECK(compare(cert->lhs, (Scalar(Rational(1)) - q6) / Scalar(Rational(15))) == 0);
    CHECK(verify_certificate(d, *cert));
    CHECK(classify(d).level == Level::pairwise);
  }
}

TEST_CASE("even-clique measure separates matchings from edge patterns",
          "[independence]") {
  const ExplicitDistribution d = sc(5);
  CHECK_FALSE(check_pairwise(d).has_value());
  CHECK_FALSE(check_matching(d).has_value());

  const auto cert = check_edge_subgraph(d);
  REQUIRE(cert.has_value());
  CHECK(cert->level == Level::edge_subgraph);
  // Lexicographically first violation: edge (0,1) against the empty pattern
  // on the other three vertices.
  REQUIRE(cert->edge_e.has_value());
  CHECK(*cert->edge_e == 0);
  REQUIRE(cert->set_w.has_value());
  CHECK(*cert->set_w == VertexMask(28));  // {2, 3, 4}
  REQUIRE(cert->pattern_w.has_value());
  CHECK(*cert->pattern_w == EdgeMask(0));
  CHECK(cert->lhs.as_rational() == Rational(1, 16));
  CHECK(cert->rhs.as_rational() == Rational(1, 8));
  CHECK(verify_certificate(d, *cert));
  CHECK(classify(d).level == Level::matching);
}

TEST_CASE("half-uniform two-clique mixture separates the top two levels",
          "[independence]") {
  const ExplicitDistribution d = cc(6);
  CHECK_FALSE(check_edge_subgraph(d).has_value());

  const auto cert = check_subgraph(d);
  REQUIRE(cert.has_value());
  CHECK(cert->level == Level::subgraph);
  REQUIRE(cert->set_v.has_value());
  REQUIRE(cert->set_w.has_value());
  CHECK(*cert->set_v == VertexMask(7));   // {0, 1, 2}
  CHECK(*cert->set_w == VertexMask(56));  // {3, 4, 5}
  CHECK(*cert->pattern_v == EdgeMask(0));
  CHECK(*cert->pattern_w == EdgeMask(0));
  CHECK(cert->lhs.as_rational() == Rational(1, 128));
  CHECK(cert->rhs.as_rational() == Rational(1, 256));
  CHECK(verify_certificate(d, *cert));
}

TEST_CASE("single-edge measure on a triangle satisfies the strongest level",
          "[independence]") {
  const Classification c = classify(triangle_t());
  CHECK(c.level == Level::subgraph);
  CHECK_FALSE(c.refutation.has_value());
}

TEST_CASE("parity-filtered uniform graphs fail only at the bottom level",
          "[independence]") {
  const ExplicitDistribution d = gnp_mod(4, 3);
  CHECK(d.entries.size() == 22);
  const auto cert = check_pairwise(d);
  REQUIRE(cert.has_value());
  CHECK(cert->level == Level::pairwise);
  REQUIRE(cert->edge_e.has_value());
  REQUIRE(cert->edge_f.has_value());
  CHECK(*cert->edge_e == 0);
  CHECK(*cert->edge_f == 5);
  CHECK(cert->lhs.as_rational() == Rational(5, 22));
  CHECK(cert->rhs.as_rational() == Rational(1, 4));
  CHECK(verify_certificate(d, *cert));
  CHECK(classify(d).level == Level::none);
}

TEST_CASE("mod-four split weighting stops exactly at matchings",
          "[independence]") {
  const ExplicitDistribution d = mod4_two_clique(8);
  CHECK_FALSE(check_matching(d).has_value());
  const auto cert = check_edge_subgraph(d);
  CHECK(cert.has_value());
  CHECK(classify(d).level == Level::matching);
}

TEST_CASE("certificates replay against the distribution they refute",
          "[independence]") {
  const ExplicitDistribution d = sc(5);
  auto cert = check_edge_subgraph(d);
  REQUIRE(cert.has_value());
  CHECK(verify_certificate(d, *cert));

  SECTION("tampering with the claimed probabilities is caught") {
    Certificate bad = *cert;
    bad.lhs = Scalar(Rational(1, 2));
    CHECK_FALSE(verify_certificate(d, bad));
  }
  SECTION("tampering with the witness event is caught") {
    Certificate bad = *cert;
    bad.set_w = VertexMask(12);  // {2, 3}: a set where the condition holds
    CHECK_FALSE(verify_certificate(d, bad));
  }
  SECTION("a certificate for a satisfied level is rejected") {
    Certificate bad = *cert;
    bad.level = Level::matching;
    bad.matching = Matching({0, 5});
    CHECK_FALSE(verify_certificate(d, bad));
  }
}

TEST_CASE("check_level dispatches to the single-level tests", "[independence]") {
  const ExplicitDistribution d = sc(5);
  CHECK_FALSE(check_level(d, Level::pairwise).has_value());
  CHECK_FALSE(check_level(d, Level::matching).has_value());
  CHECK(check_level(d, Level::edge_subgraph).has_value());
  CHECK(check_level(d, Level::subgraph).has_value());
}
