#include "cpb/covers.hpp"

#include <algorithm>
#include <numeric>

namespace cpb::covers {

BipartiteRankingShape::BipartiteRankingShape(int pos, int neg)
    : pos_count(pos), neg_count(neg) {
  if (pos < 1 || neg < 1) {
    throw std::invalid_argument("BipartiteRankingShape: class counts >= 1");
  }
  if (static_cast<long long>(pos) * neg > 1'000'000) {
    throw std::overflow_error("BipartiteRankingShape: pair count too large");
  }
}

IndivisibleBlocksError::IndivisibleBlocksError(int m_, int a_)
    : std::runtime_error("block length " + std::to_string(a_) +
                         " does not divide half of m = " + std::to_string(m_)),
      m(m_),
      a(a_) {}

std::pair<DependencyGraph, FractionalCover> iid_cover(int m) {
  if (m < 1) throw std::invalid_argument("iid_cover: m >= 1");
  DependencyGraph graph(m);
  FractionalCover cover;
  cover.graph_size = m;
  CoverElement all;
  all.vertices.resize(m);
  std::iota(all.vertices.begin(), all.vertices.end(), 0);
  all.weight = Rational(1);
  cover.elements.push_back(std::move(all));
  return {std::move(graph), std::move(cover)};
}

DependencyGraph bipartite_ranking_graph(const BipartiteRankingShape& shape) {
  std::vector<std::pair<int, int>> edges;
  const int lp = shape.pos_count, ln = shape.neg_count;
  for (int i = 0; i < lp; ++i) {
    for (int j = 0; j < ln; ++j) {
      const int a = shape.pair_index(i, j);
      // Same positive, later negative.
      for (int q = j + 1; q < ln; ++q) {
        edges.emplace_back(a, shape.pair_index(i, q));
      }
      // Same negative, later positive.
      for (int p = i + 1; p < lp; ++p) {
        edges.emplace_back(a, shape.pair_index(p, j));
      }
    }
  }
  return DependencyGraph(shape.pair_count(), std::move(edges));
}

FractionalCover bipartite_ranking_cover(const BipartiteRankingShape& shape) {
  const int lp = shape.pos_count, ln = shape.neg_count;
  FractionalCover cover;
  cover.graph_size = shape.pair_count();
  if (lp >= ln) {
    // l_max sets, each pairing every negative with a cyclically shifted
    // positive; every pair lands in exactly one set.
    for (int k = 0; k < lp; ++k) {
      CoverElement elem;
      elem.weight = Rational(1);
      for (int j = 0; j < ln; ++j) {
        elem.vertices.push_back(shape.pair_index((j + k) % lp, j));
      }
      std::sort(elem.vertices.begin(), elem.vertices.end());
      cover.elements.push_back(std::move(elem));
    }
  } else {
    for (int k = 0; k < ln; ++k) {
      CoverElement elem;
      elem.weight = Rational(1);
      for (int i = 0; i < lp; ++i) {
        elem.vertices.push_back(shape.pair_index(i, (i + k) % ln));
      }
      std::sort(elem.vertices.begin(), elem.vertices.end());
      cover.elements.push_back(std::move(elem));
    }
  }
  return cover;
}

Rational ustat_ranking_chi_bound(int l) {
  if (l < 2) throw std::invalid_argument("ustat_ranking_chi_bound: l >= 2");
  return Rational(static_cast<std::int64_t>(l) * (l - 1), l / 2);
}

int ordered_pair_index(int l, int i, int j) {
  if (i == j || i < 0 || j < 0 || i >= l || j >= l) {
    throw std::out_of_range("ordered_pair_index: bad pair");
  }
  return i * (l - 1) + (j < i ? j : j - 1);
}

DependencyGraph ranking_dependency_graph(int l) {
  if (l < 2 || l > 20) {
    throw std::invalid_argument("ranking_dependency_graph: l in [2, 20]");
  }
  const int n = l * (l - 1);
  std::vector<std::pair<int, int>> edges;
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(n);
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (i != j) pairs.emplace_back(i, j);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const auto& [i, j] = pairs[a];
      const auto& [p, q] = pairs[b];
      if (i == p || i == q || j == p || j == q) edges.emplace_back(a, b);
    }
  }
  return DependencyGraph(n, std::move(edges));
}

FractionalCover ustat_ranking_cover(int l) {
  if (l < 2) throw std::invalid_argument("ustat_ranking_cover: l >= 2");
  if (l > 7) throw TooLargeError(l, 7);  // l! elements past this
  std::int64_t fact_lm2 = 1;
  for (int i = 2; i <= l - 2; ++i) fact_lm2 *= i;
  const int half = l / 2;
  const Rational weight(1, fact_lm2 * half);

  FractionalCover cover;
  cover.graph_size = l * (l - 1);
  std::vector<int> perm(l);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    CoverElement elem;
    elem.weight = weight;
    for (int i = 0; i < half; ++i) {
      elem.vertices.push_back(ordered_pair_index(l, perm[i], perm[half + i]));
    }
    std::sort(elem.vertices.begin(), elem.vertices.end());
    cover.elements.push_back(std::move(elem));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return cover;
}

BlockDecomposition beta_block_decomposition(int m, int a) {
  if (m < 2 || a < 1) {
    throw std::invalid_argument("beta_block_decomposition: m >= 2, a >= 1");
  }
  BlockDecomposition dec;
  dec.dropped_last = (m % 2 != 0);
  const int even_m = dec.dropped_last ? m - 1 : m;
  if ((even_m / 2) % a != 0) throw IndivisibleBlocksError(m, a);
  dec.block_length = a;
  dec.block_count = even_m / (2 * a);

  for (int s = 0; s < dec.block_count; ++s) {
    std::vector<int> z0(a), z1(a);
    for (int alpha = 0; alpha < a; ++alpha) {
      z0[alpha] = 2 * a * s + alpha;
      z1[alpha] = 2 * a * s + a + alpha;
    }
    dec.z0_blocks.push_back(std::move(z0));
    dec.z1_blocks.push_back(std::move(z1));
  }
  return dec;
}

DependencyGraph BlockDecomposition::surrogate_graph() const {
  const int a = block_length, mu = block_count;
  std::vector<std::pair<int, int>> edges;
  for (int s = 0; s < mu; ++s) {
    for (int x = 0; x < a; ++x) {
      for (int y = x + 1; y < a; ++y) {
        edges.emplace_back(s * a + x, s * a + y);
      }
    }
  }
  return DependencyGraph(mu * a, std::move(edges));
}

FractionalCover BlockDecomposition::surrogate_cover() const {
  const int a = block_length, mu = block_count;
  FractionalCover cover;
  cover.graph_size = mu * a;
  for (int alpha = 0; alpha < a; ++alpha) {
    CoverElement elem;
    elem.weight = Rational(1);
    for (int s = 0; s < mu; ++s) elem.vertices.push_back(s * a + alpha);
    cover.elements.push_back(std::move(elem));
  }
  return cover;
}

}  // namespace cpb::covers
