#pragma once

#include <cstdint>
#include <stdexcept>
#include <utility>
#include <vector>

#include "cpb/depgraph.hpp"
#include "cpb/rational.hpp"

namespace cpb::covers {

// Bipartite pair sample: one vertex per (positive, negative) pair, numbered
// row-major so that pair (i, j) has id i * neg_count + j.
struct BipartiteRankingShape {
  int pos_count;
  int neg_count;

  BipartiteRankingShape(int pos, int neg);

  int pair_count() const { return pos_count * neg_count; }
  int l_min() const { return pos_count < neg_count ? pos_count : neg_count; }
  int l_max() const { return pos_count > neg_count ? pos_count : neg_count; }
  int pair_index(int i, int j) const { return i * neg_count + j; }
};

struct IndivisibleBlocksError : std::runtime_error {
  IndivisibleBlocksError(int m_, int a_);
  int m;
  int a;
};

// Alternating-block split of a length-m sequence: mu blocks of length a for
// each of Z0 and Z1, plus the surrogate sample where blocks are treated as
// mutually independent cliques.
struct BlockDecomposition {
  int block_length = 1;                     // a
  int block_count = 1;                      // mu
  bool dropped_last = false;                // odd m loses its final index
  std::vector<std::vector<int>> z0_blocks;  // indices into the sequence
  std::vector<std::vector<int>> z1_blocks;

  // Surrogate graph on mu * a vertices: each block a clique, no edges
  // between blocks. Vertex s * a + alpha is position alpha of block s.
  DependencyGraph surrogate_graph() const;
  // One element per within-block position, unit weights; total weight a.
  FractionalCover surrogate_cover() const;
};

// Edgeless graph plus the single-element unit cover; omega = 1.
std::pair<DependencyGraph, FractionalCover> iid_cover(int m);

// Pairs (i, j) and (p, q) are adjacent iff they share the positive or the
// negative example.
DependencyGraph bipartite_ranking_graph(const BipartiteRankingShape& shape);

// The cyclic-shift cover of size l_max with unit weights; proper, exact,
// and of minimum weight (omega = chi_star = l_max).
FractionalCover bipartite_ranking_cover(const BipartiteRankingShape& shape);

// l (l - 1) / floor(l / 2), the permutation-cover weight that upper-bounds
// the chromatic number of the ordered-pair ranking graph.
Rational ustat_ranking_chi_bound(int l);

// Vertex numbering for the l (l - 1) ordered pairs (i, j), i != j.
int ordered_pair_index(int l, int i, int j);

// Graph on ordered pairs; adjacency iff the pairs share any index.
DependencyGraph ranking_dependency_graph(int l);

// One element per permutation sigma: the floor(l / 2) disjoint pairs
// (sigma(i), sigma(floor(l/2) + i)), weight 1 / ((l-2)! floor(l/2)).
// Capped at l <= 7 (l! elements).
FractionalCover ustat_ranking_cover(int l);

// Split of [0, m) into 2 mu blocks of length a (dropping the last index
// when m is odd). Requires a to divide m / 2.
BlockDecomposition beta_block_decomposition(int m, int a);

}  // namespace cpb::covers
