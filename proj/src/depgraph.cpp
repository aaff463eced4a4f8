#include "cpb/depgraph.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

#include "cpb/simplex.hpp"

namespace cpb {

namespace {

constexpr int kChiStarCap = 20;

int word_count(int n) { return (n + 63) / 64; }

}  // namespace

DependencyGraph::DependencyGraph(int vertex_count,
                                 std::vector<std::pair<int, int>> edges)
    : vertex_count_(vertex_count) {
  if (vertex_count < 1) {
    throw std::invalid_argument("DependencyGraph: vertex_count must be >= 1");
  }
  for (auto& [u, v] : edges) {
    if (u == v) throw std::invalid_argument("DependencyGraph: self-loop");
    if (u < 0 || v < 0 || u >= vertex_count || v >= vertex_count) {
      throw std::out_of_range("DependencyGraph: edge endpoint out of range");
    }
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  edges_ = std::move(edges);

  adj_.assign(vertex_count_,
              std::vector<std::uint64_t>(word_count(vertex_count_), 0));
  degree_.assign(vertex_count_, 0);
  for (const auto& [u, v] : edges_) {
    adj_[u][v / 64] |= std::uint64_t{1} << (v % 64);
    adj_[v][u / 64] |= std::uint64_t{1} << (u % 64);
    ++degree_[u];
    ++degree_[v];
  }
}

bool DependencyGraph::has_edge(int u, int v) const {
  if (u < 0 || v < 0 || u >= vertex_count_ || v >= vertex_count_) {
    throw std::out_of_range("has_edge: vertex out of range");
  }
  if (u == v) return false;
  return (adj_[u][v / 64] >> (v % 64)) & 1;
}

int DependencyGraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < vertex_count_; ++v) d = std::max(d, degree_[v]);
  return d;
}

Rational FractionalCover::omega() const {
  Rational total(0);
  for (const auto& e : elements) total += e.weight;
  return total;
}

NotIndependentError::NotIndependentError(int element_,
                                         std::pair<int, int> edge_)
    : std::runtime_error("cover element " + std::to_string(element_) +
                         " is not independent: edge (" +
                         std::to_string(edge_.first) + ", " +
                         std::to_string(edge_.second) + ")"),
      element(element_),
      edge(edge_) {}

NotExactError::NotExactError(int vertex_, double total_weight_)
    : std::runtime_error("cover is not exact at vertex " +
                         std::to_string(vertex_) + ": total weight " +
                         std::to_string(total_weight_)),
      vertex(vertex_),
      total_weight(total_weight_) {}

TooLargeError::TooLargeError(int vertex_count_, int cap_)
    : std::runtime_error("graph has " + std::to_string(vertex_count_) +
                         " vertices, exact computation capped at " +
                         std::to_string(cap_)),
      vertex_count(vertex_count_),
      cap(cap_) {}

CoverStats validate_cover(const DependencyGraph& graph,
                          const FractionalCover& cover) {
  if (cover.graph_size != graph.vertex_count()) {
    throw std::invalid_argument("validate_cover: graph size mismatch");
  }
  const int m = graph.vertex_count();

  for (std::size_t j = 0; j < cover.elements.size(); ++j) {
    const auto& elem = cover.elements[j];
    if (!(elem.weight > Rational(0)) || elem.weight > Rational(1)) {
      throw std::invalid_argument("validate_cover: weight outside (0, 1]");
    }
    for (std::size_t x = 0; x < elem.vertices.size(); ++x) {
      int u = elem.vertices[x];
      if (u < 0 || u >= m) {
        throw std::out_of_range("validate_cover: vertex out of range");
      }
      for (std::size_t y = x + 1; y < elem.vertices.size(); ++y) {
        int v = elem.vertices[y];
        if (u == v) {
          throw std::invalid_argument("validate_cover: repeated vertex");
        }
        if (graph.has_edge(u, v)) {
          throw NotIndependentError(static_cast<int>(j), {u, v});
        }
      }
    }
  }

  std::vector<Rational> per_vertex(m, Rational(0));
  for (const auto& elem : cover.elements) {
    for (int v : elem.vertices) per_vertex[v] += elem.weight;
  }
  for (int v = 0; v < m; ++v) {
    double total = per_vertex[v].to_double();
    if (std::abs(total - 1.0) > 1e-9) throw NotExactError(v, total);
  }

  // Weighted-sum identity on random vectors, as a redundant cross-check of
  // the exactness bookkeeping.
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> t(m);
    double direct = 0.0, norm1 = 0.0;
    for (int v = 0; v < m; ++v) {
      t[v] = unif(rng);
      direct += t[v];
      norm1 += std::abs(t[v]);
    }
    double covered = 0.0;
    for (const auto& elem : cover.elements) {
      double inner = 0.0;
      for (int v : elem.vertices) inner += t[v];
      covered += elem.weight.to_double() * inner;
    }
    if (std::abs(direct - covered) > 1e-6 * std::max(norm1, 1.0)) {
      throw std::runtime_error(
          "validate_cover: weighted-sum identity violated");
    }
  }

  CoverStats stats;
  stats.omega = cover.omega();
  stats.alpha.reserve(cover.elements.size());
  stats.pi.reserve(cover.elements.size());
  for (const auto& elem : cover.elements) {
    stats.alpha.push_back(elem.weight / stats.omega);
    stats.pi.push_back(elem.weight *
                       Rational(static_cast<std::int64_t>(elem.vertices.size()),
                                m));
  }
  return stats;
}

namespace {

// Max clique via branch and bound on single-word bitmasks (n <= 64).
struct CliqueSearch {
  const std::vector<std::uint64_t>& adj;
  int best = 0;

  void expand(int size, std::uint64_t cand) {
    if (cand == 0) {
      best = std::max(best, size);
      return;
    }
    while (cand != 0) {
      if (size + std::popcount(cand) <= best) return;
      int v = std::countr_zero(cand);
      cand &= cand - 1;
      expand(size + 1, cand & adj[v]);
    }
    best = std::max(best, size);
  }
};

int greedy_clique_lower(const DependencyGraph& g) {
  // Seed a clique from each vertex in degree order, extend greedily.
  const int n = g.vertex_count();
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](int a, int b) { return g.degree(a) > g.degree(b); });
  int best = 1;
  for (int s : order) {
    std::vector<int> clique{s};
    for (int v : order) {
      if (v == s) continue;
      bool ok = true;
      for (int u : clique) {
        if (!g.has_edge(u, v)) {
          ok = false;
          break;
        }
      }
      if (ok) clique.push_back(v);
    }
    best = std::max(best, static_cast<int>(clique.size()));
  }
  return best;
}

}  // namespace

CliqueResult clique_number(const DependencyGraph& graph) {
  const int n = graph.vertex_count();
  if (n > 64) return {greedy_clique_lower(graph), false};

  std::vector<std::uint64_t> adj(n, 0);
  for (const auto& [u, v] : graph.edges()) {
    adj[u] |= std::uint64_t{1} << v;
    adj[v] |= std::uint64_t{1} << u;
  }
  CliqueSearch search{adj};
  std::uint64_t all = (n == 64) ? ~std::uint64_t{0}
                                : ((std::uint64_t{1} << n) - 1);
  search.expand(0, all);
  return {search.best, true};
}

int greedy_chromatic_upper(const DependencyGraph& graph) {
  // DSATUR: repeatedly color the vertex seeing the most distinct neighbor
  // colors, breaking ties by degree then index.
  const int n = graph.vertex_count();
  std::vector<int> color(n, -1);
  std::vector<std::vector<bool>> seen(n);
  std::vector<int> sat(n, 0);
  for (int v = 0; v < n; ++v) seen[v].assign(n + 1, false);

  int used = 0;
  for (int step = 0; step < n; ++step) {
    int pick = -1;
    for (int v = 0; v < n; ++v) {
      if (color[v] >= 0) continue;
      if (pick < 0 || sat[v] > sat[pick] ||
          (sat[v] == sat[pick] && graph.degree(v) > graph.degree(pick))) {
        pick = v;
      }
    }
    int c = 0;
    while (seen[pick][c]) ++c;
    color[pick] = c;
    used = std::max(used, c + 1);
    for (const auto& [u, v] : graph.edges()) {
      int other = -1;
      if (u == pick) other = v;
      if (v == pick) other = u;
      if (other >= 0 && color[other] < 0 && !seen[other][c]) {
        seen[other][c] = true;
        ++sat[other];
      }
    }
  }
  return used == 0 ? 1 : used;
}

namespace {

// Bron-Kerbosch with pivoting over <= 32-vertex masks; enumerates maximal
// cliques of the complement, i.e. maximal independent sets of the graph.
struct IndependentSetEnum {
  int n;
  std::vector<std::uint32_t> nbr;  // complement adjacency
  std::vector<std::vector<int>> out;

  void run(std::uint32_t r, std::uint32_t p, std::uint32_t x) {
    if (p == 0 && x == 0) {
      std::vector<int> s;
      for (int v = 0; v < n; ++v) {
        if ((r >> v) & 1) s.push_back(v);
      }
      out.push_back(std::move(s));
      return;
    }
    std::uint32_t px = p | x;
    int pivot = -1, best = -1;
    for (int v = 0; v < n; ++v) {
      if ((px >> v) & 1) {
        int cnt = std::popcount(p & nbr[v]);
        if (cnt > best) {
          best = cnt;
          pivot = v;
        }
      }
    }
    std::uint32_t ext = p & ~nbr[pivot];
    while (ext != 0) {
      int v = std::countr_zero(ext);
      std::uint32_t bit = std::uint32_t{1} << v;
      ext &= ext - 1;
      run(r | bit, p & nbr[v], x & nbr[v]);
      p &= ~bit;
      x |= bit;
    }
  }
};

}  // namespace

std::vector<std::vector<int>> maximal_independent_sets(
    const DependencyGraph& graph) {
  const int n = graph.vertex_count();
  if (n > kChiStarCap) throw TooLargeError(n, kChiStarCap);

  IndependentSetEnum bk;
  bk.n = n;
  bk.nbr.assign(n, 0);
  std::uint32_t all = (std::uint32_t{1} << n) - 1;
  for (int v = 0; v < n; ++v) {
    std::uint32_t row = 0;
    for (int u = 0; u < n; ++u) {
      if (u != v && !graph.has_edge(u, v)) row |= std::uint32_t{1} << u;
    }
    bk.nbr[v] = row & all;
  }
  bk.run(0, all, 0);
  return bk.out;
}

namespace {

// Shrink an over-covering fractional solution into a proper exact cover of
// the same total weight: where a vertex's weights sum past 1, remove it
// from elements (splitting one element if needed) until the sum is exactly
// 1. Splitting (S, w) into (S, w - r) and (S \ {v}, r) keeps every element
// independent and the total weight unchanged.
FractionalCover trim_to_exact(std::vector<CoverElement> elements, int m) {
  for (int v = 0; v < m; ++v) {
    Rational total(0);
    for (const auto& e : elements) {
      if (std::binary_search(e.vertices.begin(), e.vertices.end(), v)) {
        total += e.weight;
      }
    }
    Rational excess = total - Rational(1);
    for (std::size_t j = 0; j < elements.size() && excess > Rational(0); ++j) {
      auto& e = elements[j];
      auto it = std::lower_bound(e.vertices.begin(), e.vertices.end(), v);
      if (it == e.vertices.end() || *it != v) continue;
      if (e.weight <= excess) {
        excess -= e.weight;
        e.vertices.erase(it);
      } else {
        CoverElement reduced = e;
        reduced.weight = excess;
        auto it2 = std::lower_bound(reduced.vertices.begin(),
                                    reduced.vertices.end(), v);
        reduced.vertices.erase(it2);
        e.weight -= excess;
        excess = Rational(0);
        elements.push_back(std::move(reduced));
      }
    }
  }
  std::erase_if(elements, [](const CoverElement& e) {
    return e.weight.is_zero() || e.vertices.empty();
  });
  FractionalCover cover;
  cover.elements = std::move(elements);
  cover.graph_size = m;
  return cover;
}

}  // namespace

ChiStarResult fractional_chromatic_exact(const DependencyGraph& graph) {
  const int n = graph.vertex_count();
  if (n > kChiStarCap) throw TooLargeError(n, kChiStarCap);

  const auto sets = maximal_independent_sets(graph);
  const int rows = static_cast<int>(sets.size());

  // Covering LP: min sum_S x_S with sum_{S contains v} x_S >= 1. Solved via
  // its dual, max sum_v y_v with sum_{v in S} y_v <= 1, whose slack basis is
  // immediately feasible; the covering weights come back as the duals.
  std::vector<std::vector<Rational>> a(rows, std::vector<Rational>(n));
  for (int i = 0; i < rows; ++i) {
    for (int v : sets[i]) a[i][v] = Rational(1);
  }
  std::vector<Rational> b(rows, Rational(1));
  std::vector<Rational> c(n, Rational(1));
  LpSolution sol = solve_max_lp(a, b, c);

  std::vector<CoverElement> elements;
  for (int i = 0; i < rows; ++i) {
    if (!sol.duals[i].is_zero()) {
      elements.push_back({sets[i], sol.duals[i]});
    }
  }

  ChiStarResult result;
  result.chi_star = sol.objective;
  result.certificate = trim_to_exact(std::move(elements), n);
  return result;
}

ChiEstimates chi_estimates(const DependencyGraph& graph) {
  ChiEstimates est;
  est.clique_lower = clique_number(graph);
  est.chi_upper = greedy_chromatic_upper(graph);
  est.delta_plus_one = graph.max_degree() + 1;
  if (graph.vertex_count() <= kChiStarCap) {
    est.has_chi_star = true;
    est.chi_star = fractional_chromatic_exact(graph).chi_star;
  }
  return est;
}

DependencyGraph induced_subgraph(const DependencyGraph& graph,
                                 const std::vector<int>& keep) {
  std::vector<int> remap(graph.vertex_count(), -1);
  for (std::size_t i = 0; i < keep.size(); ++i) {
    int v = keep[i];
    if (v < 0 || v >= graph.vertex_count()) {
      throw std::out_of_range("induced_subgraph: index out of range");
    }
    if (remap[v] >= 0) {
      throw std::invalid_argument("induced_subgraph: repeated index");
    }
    remap[v] = static_cast<int>(i);
  }
  std::vector<std::pair<int, int>> edges;
  for (const auto& [u, v] : graph.edges()) {
    if (remap[u] >= 0 && remap[v] >= 0) {
      edges.emplace_back(remap[u], remap[v]);
    }
  }
  return DependencyGraph(static_cast<int>(keep.size()), std::move(edges));
}

DependencyGraph read_graph(std::istream& in) {
  std::string line;
  int m = -1;
  std::vector<std::pair<int, int>> edges;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "m") {
      if (!(ls >> m)) {
        throw std::runtime_error("graph file: bad vertex count at line " +
                                 std::to_string(line_no));
      }
    } else if (tag == "e") {
      int u, v;
      if (!(ls >> u >> v)) {
        throw std::runtime_error("graph file: bad edge at line " +
                                 std::to_string(line_no));
      }
      edges.emplace_back(u, v);
    } else {
      throw std::runtime_error("graph file: unknown record '" + tag +
                               "' at line " + std::to_string(line_no));
    }
  }
  if (m < 1) {
    throw std::runtime_error("graph file: missing or invalid 'm' line");
  }
  return DependencyGraph(m, std::move(edges));
}

DependencyGraph read_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open graph file: " + path);
  return read_graph(in);
}

void write_graph(const DependencyGraph& graph, std::ostream& out) {
  out << "m " << graph.vertex_count() << "\n";
  for (const auto& [u, v] : graph.edges()) {
    out << "e " << u << " " << v << "\n";
  }
}

}  // namespace cpb
