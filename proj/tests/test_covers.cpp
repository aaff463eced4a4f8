#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <set>

#include "cpb/covers.hpp"
#include "cpb/depgraph.hpp"

using namespace cpb;
using namespace cpb::covers;

TEST_CASE("iid cover is the single unit element") {
  for (int m : {1, 5}) {
    auto [graph, cover] = iid_cover(m);
    CHECK(graph.vertex_count() == m);
    CHECK(graph.edge_count() == 0);
    auto stats = validate_cover(graph, cover);
    CHECK(stats.omega == Rational(1));
  }
  CHECK_THROWS_AS(iid_cover(0), std::invalid_argument);
}

TEST_CASE("bipartite ranking graph structure") {
  BipartiteRankingShape shape(3, 3);
  auto g = bipartite_ranking_graph(shape);
  CHECK(g.vertex_count() == 9);
  // Every pair shares its positive with l_neg - 1 pairs and its negative
  // with l_pos - 1 pairs.
  for (int v = 0; v < g.vertex_count(); ++v) {
    CHECK(g.degree(v) == (3 - 1) + (3 - 1));
  }

  BipartiteRankingShape single(1, 1);
  auto g1 = bipartite_ranking_graph(single);
  CHECK(g1.vertex_count() == 1);
  CHECK(g1.edge_count() == 0);
  CHECK(fractional_chromatic_exact(g1).chi_star == Rational(1));

  CHECK_THROWS_AS(BipartiteRankingShape(0, 2), std::invalid_argument);
}

TEST_CASE("bipartite ranking chi* equals l_max at desk scale") {
  for (int lp = 1; lp <= 4; ++lp) {
    for (int ln = 1; ln <= 4; ++ln) {
      BipartiteRankingShape shape(lp, ln);
      auto g = bipartite_ranking_graph(shape);
      auto res = fractional_chromatic_exact(g);
      CHECK(res.chi_star == Rational(shape.l_max()));
    }
  }
}

TEST_CASE("bipartite ranking clique number is l_max") {
  BipartiteRankingShape shape(3, 5);
  auto g = bipartite_ranking_graph(shape);
  CHECK(clique_number(g).value == 5);
}

TEST_CASE("sigma-shift cover validates with weight l_max") {
  for (auto [lp, ln] : {std::pair{4, 2}, {2, 5}, {1, 1}, {3, 3}, {8, 8}}) {
    BipartiteRankingShape shape(lp, ln);
    auto g = bipartite_ranking_graph(shape);
    auto cover = bipartite_ranking_cover(shape);
    CHECK(cover.elements.size() ==
          static_cast<std::size_t>(shape.l_max()));
    for (const auto& e : cover.elements) {
      CHECK(e.vertices.size() == static_cast<std::size_t>(shape.l_min()));
    }
    auto stats = validate_cover(g, cover);
    CHECK(stats.omega == Rational(shape.l_max()));
  }
}

TEST_CASE("sigma-shift cover weight matches the exact chi*") {
  BipartiteRankingShape shape(2, 5);
  auto g = bipartite_ranking_graph(shape);
  auto cover = bipartite_ranking_cover(shape);
  auto res = fractional_chromatic_exact(g);
  CHECK(res.chi_star == cover.omega());
  CHECK(res.chi_star == Rational(5));
}

TEST_CASE("ustat chi bound closed forms") {
  CHECK(ustat_ranking_chi_bound(6) == Rational(10));  // 2(l-1), even l
  CHECK(ustat_ranking_chi_bound(5) == Rational(10));  // 2l, odd l
  CHECK(ustat_ranking_chi_bound(2) == Rational(2));
  CHECK(ustat_ranking_chi_bound(4) == Rational(6));
  CHECK_THROWS_AS(ustat_ranking_chi_bound(1), std::invalid_argument);
}

TEST_CASE("ordered pair index is a bijection") {
  const int l = 5;
  std::set<int> seen;
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      int id = ordered_pair_index(l, i, j);
      CHECK(id >= 0);
      CHECK(id < l * (l - 1));
      seen.insert(id);
    }
  }
  CHECK(seen.size() == static_cast<std::size_t>(l * (l - 1)));
  CHECK_THROWS_AS(ordered_pair_index(5, 2, 2), std::out_of_range);
}

TEST_CASE("ranking dependency graph oracle values") {
  // l = 2: both ordered pairs share their indices.
  auto g2 = ranking_dependency_graph(2);
  CHECK(g2.vertex_count() == 2);
  CHECK(g2.edge_count() == 1);
  CHECK(fractional_chromatic_exact(g2).chi_star == Rational(2));

  // Cliques {Z_ip} u {Z_pi} give clique number 2(l-1).
  auto g3 = ranking_dependency_graph(3);
  CHECK(clique_number(g3).value == 4);

  // Even l: the permutation bound meets the clique bound, chi* = 2(l-1).
  auto g4 = ranking_dependency_graph(4);
  auto res = fractional_chromatic_exact(g4);
  CHECK(res.chi_star == Rational(6));
  CHECK(ustat_ranking_chi_bound(4) == Rational(6));
}

TEST_CASE("ustat permutation cover enumerates and validates") {
  for (int l : {2, 3, 4, 5}) {
    auto g = ranking_dependency_graph(l);
    auto cover = ustat_ranking_cover(l);
    std::int64_t fact = 1;
    for (int i = 2; i <= l; ++i) fact *= i;
    CHECK(cover.elements.size() == static_cast<std::size_t>(fact));
    auto stats = validate_cover(g, cover);
    CHECK(stats.omega == ustat_ranking_chi_bound(l));
  }
  CHECK_THROWS_AS(ustat_ranking_cover(8), TooLargeError);
}

TEST_CASE("ustat cover at l = 2 and l = 3") {
  auto c2 = ustat_ranking_cover(2);
  CHECK(c2.elements.size() == 2);
  CHECK(c2.omega() == Rational(2));
  for (const auto& e : c2.elements) {
    CHECK(e.vertices.size() == 1);
    CHECK(e.weight == Rational(1));
  }

  auto c3 = ustat_ranking_cover(3);
  CHECK(c3.elements.size() == 6);
  CHECK(c3.omega() == Rational(6));
  for (const auto& e : c3.elements) CHECK(e.vertices.size() == 1);
}

TEST_CASE("beta block decomposition index arithmetic") {
  auto dec = beta_block_decomposition(12, 2);
  CHECK(dec.block_count == 3);
  CHECK(dec.block_length == 2);
  CHECK(!dec.dropped_last);
  CHECK(dec.z0_blocks ==
        std::vector<std::vector<int>>{{0, 1}, {4, 5}, {8, 9}});
  CHECK(dec.z1_blocks ==
        std::vector<std::vector<int>>{{2, 3}, {6, 7}, {10, 11}});
}

TEST_CASE("beta block decomposition edge cases") {
  auto tiny = beta_block_decomposition(2, 1);
  CHECK(tiny.block_count == 1);
  CHECK(tiny.z0_blocks == std::vector<std::vector<int>>{{0}});
  CHECK(tiny.z1_blocks == std::vector<std::vector<int>>{{1}});

  auto odd = beta_block_decomposition(13, 2);
  CHECK(odd.dropped_last);
  CHECK(odd.block_count == 3);

  CHECK_THROWS_AS(beta_block_decomposition(12, 5), IndivisibleBlocksError);
}

TEST_CASE("surrogate block graph and cover") {
  auto dec = beta_block_decomposition(12, 2);  // mu = 3, a = 2
  auto g = dec.surrogate_graph();
  CHECK(g.vertex_count() == 6);
  CHECK(clique_number(g).value == 2);
  CHECK(greedy_chromatic_upper(g) == 2);
  auto res = fractional_chromatic_exact(g);
  CHECK(res.chi_star == Rational(2));
  auto stats = validate_cover(g, dec.surrogate_cover());
  CHECK(stats.omega == Rational(2));
}
