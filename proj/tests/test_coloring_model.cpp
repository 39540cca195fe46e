#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <map>
#include <vector>

#include "deplab/deplab.hpp"
#include "test_util.hpp"

using namespace deplab;

namespace {

// Two fair colors everywhere; an edge appears iff the endpoint colors agree.
ColoringModel agreement_model(int n) {
  return two_clique_color_model(n, Scalar(Rational(1, 2)));
}

}  // namespace

TEST_CASE("model validation catches malformed inputs", "[model]") {
  ColoringModel m = agreement_model(3);
  CHECK_NOTHROW(validate_model(m));

  SECTION("palette mass must be one") {
    m.palettes[1] = {Scalar(Rational(1, 2)), Scalar(Rational(1, 3))};
    CHECK_THROWS_AS(validate_model(m), validation_error);
  }
  SECTION("negative palette weights are rejected") {
    m.palettes[0] = {Scalar(Rational(3, 2)), Scalar(Rational(-1, 2))};
    CHECK_THROWS_AS(validate_model(m), validation_error);
  }
  SECTION("every vertex pair needs a rule") {
    m.edge_rules.erase({0, 2});
    CHECK_THROWS_AS(validate_model(m), validation_error);
  }
  SECTION("rule matrices must match the palette shapes") {
    m.edge_rules.at({0, 1}) = {{1, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_AS(validate_model(m), validation_error);
  }
  SECTION("empty palettes are rejected") {
    m.palettes[2].clear();
    CHECK_THROWS_AS(validate_model(m), validation_error);
  }
}

TEST_CASE("edge rules answer in either vertex order", "[model]") {
  const ColoringModel m = cs(4);
  for (int u = 0; u < 4; ++u) {
    for (int v = 0; v < 4; ++v) {
      if (u == v) continue;
      for (int cu = 0; cu < m.colors(u); ++cu)
        for (int cv = 0; cv < m.colors(v); ++cv)
          CHECK(m.edge_present(u, v, cu, cv) == m.edge_present(v, u, cv, cu));
    }
  }
}

TEST_CASE("edge marginals sum palette products over accepting color pairs",
          "[model]") {
  Rng rng(863);
  for (int i = 0; i < 10; ++i) {
    const ColoringModel m =
        testutil::random_model(rng, 4, 3, Rational(0), /*strict=*/false);
    for (int u = 0; u < 4; ++u) {
      for (int v = u + 1; v < 4; ++v) {
        Scalar direct(Rational(0));
        for (int cu = 0; cu < m.colors(u); ++cu)
          for (int cv = 0; cv < m.colors(v); ++cv)
            if (m.edge_present(u, v, cu, cv))
              direct = direct + m.palettes[u][cu] * m.palettes[v][cv];
        CHECK(compare(edge_marginal(m, u, v), direct) == 0);
      }
    }
  }
}

TEST_CASE("realizing a coloring applies the rules verbatim", "[model]") {
  const ColoringModel m = agreement_model(4);
  const Graph g = realize(m, {0, 0, 1, 1});
  CHECK(g.has_edge(0, 1));
  CHECK(g.has_edge(2, 3));
  CHECK_FALSE(g.has_edge(0, 2));
  CHECK_FALSE(g.has_edge(1, 3));
  CHECK_THROWS_AS(realize(m, {0, 0, 0}), usage_error);     // wrong length
  CHECK_THROWS_AS(realize(m, {0, 0, 0, 2}), usage_error);  // color out of range
}

TEST_CASE("expansion size multiplies palette sizes with overflow guard",
          "[model]") {
  CHECK(expansion_size(agreement_model(5)) == 32);
  CHECK(expansion_size(cs(4)) == 3 * 2 * 2 * 2);

  // A model with 70 two-color vertices: 2^70 overflows the 64-bit product
  // and reports no materializable size.
  ColoringModel huge;
  huge.n = 70;
  huge.palettes.assign(70, {Scalar(Rational(1, 2)), Scalar(Rational(1, 2))});
  for (int u = 0; u < 70; ++u)
    for (int v = u + 1; v < 70; ++v)
      huge.edge_rules.emplace(std::make_pair(u, v),
                              std::vector<std::vector<std::uint8_t>>{{1, 0}, {0, 1}});
  CHECK_FALSE(expansion_size(huge).has_value());
}

TEST_CASE("expansion honors the configured cap", "[model]") {
  const auto old_cap = config::expansion_cap();
  config::set_expansion_cap(16);
  try {
    bool refused = false;
    try {
      to_explicit(agreement_model(5));
    } catch (const resource_error& e) {
      refused = true;
      CHECK(e.cap_name() == "expansion cap");
      CHECK(std::string(e.what()).find("DEPLAB_CAP_EXPANSION") != std::string::npos);
    }
    CHECK(refused);
    // At or under the cap it expands fine.
    CHECK_NOTHROW(to_explicit(agreement_model(4)));
  } catch (...) {
    config::set_expansion_cap(old_cap);
    throw;
  }
  config::set_expansion_cap(old_cap);
}

TEST_CASE("expansion agrees with a brute-force odometer", "[model]") {
  Rng rng(4242);
  for (int i = 0; i < 8; ++i) {
    const ColoringModel m =
        testutil::random_model(rng, 4, 3, Rational(0), /*strict=*/false);
    CHECK(testutil::same_distribution(to_explicit(m), testutil::brute_force_expand(m)));
  }
  const ColoringModel with_quad = cs(4);
  CHECK(testutil::same_distribution(to_explicit(with_quad),
                                    testutil::brute_force_expand(with_quad)));
}

TEST_CASE("parity bit-string model expands to the parity-filtered uniform graph",
          "[model]") {
  for (const int n : {4, 5}) {
    const ColoringModel m = gnp_mod2_model(n);
    for (int u = 0; u < n; ++u)
      for (int v = u + 1; v < n; ++v)
        CHECK(edge_marginal(m, u, v).as_rational() == Rational(1, 2));
    CHECK(testutil::same_distribution(to_explicit(m), gnp_mod(n, 2)));
  }
}

TEST_CASE("sampled adjacency structure matches its dense form", "[model]") {
  SampledGraph g(70);
  g.add_edge(3, 68);
  g.add_edge(0, 1);
  CHECK(g.has_edge(68, 3));
  CHECK(g.has_edge(1, 0));
  CHECK_FALSE(g.has_edge(3, 4));
  CHECK_FALSE(g.connected());

  // Randomized connectivity check against union-find on a small copy.
  Rng rng(17);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + static_cast<int>(rng.next_below(9));
    SampledGraph sample(n);
    Graph dense(n, 0);
    for (int u = 0; u < n; ++u) {
      for (int v = u + 1; v < n; ++v) {
        if (rng.next_below(3) == 0) {
          sample.add_edge(u, v);
          dense = dense.with_edge(u, v);
        }
      }
    }
    CHECK(sample.connected() == testutil::uf_connected(dense));
    CHECK(sample.to_graph() == dense);
  }
}

TEST_CASE("model sampling is seeded and matches the palette frequencies",
          "[model]") {
  const ColoringModel m = two_clique_color_model(6, Scalar(Rational(3, 4)));

  SECTION("same seed, same graphs") {
    Rng a(31337), b(31337);
    for (int i = 0; i < 10; ++i) {
      const SampledGraph ga = sample_model(m, a);
      const SampledGraph gb = sample_model(m, b);
      CHECK(ga.bits == gb.bits);
    }
  }
  SECTION("edge frequencies approximate the exact marginal") {
    // Marginal = (3/4)^2 + (1/4)^2 = 5/8.
    Rng rng(606);
    int present = 0;
    const int trials = 4000;
    for (int i = 0; i < trials; ++i) {
      if (sample_model(m, rng).has_edge(0, 1)) ++present;
    }
    CHECK(present > trials * 0.55);
    CHECK(present < trials * 0.70);
  }
  SECTION("a never-connected model never samples connected") {
    const ColoringModel blocks = three_block(2, 2, 2);
    Rng rng(11);
    for (int i = 0; i < 300; ++i) {
      CHECK_FALSE(sample_model(blocks, rng).connected());
    }
  }
}
