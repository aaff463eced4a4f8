#pragma once

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "cpb/rational.hpp"

namespace cpb {

// Undirected graph over sample indices. An edge marks a (potential)
// probabilistic dependence between the two samples; absent edge means
// independent.
class DependencyGraph {
 public:
  explicit DependencyGraph(int vertex_count,
                           std::vector<std::pair<int, int>> edges = {});

  int vertex_count() const { return vertex_count_; }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  bool has_edge(int u, int v) const;
  int degree(int v) const { return degree_[v]; }
  int max_degree() const;

  // Adjacency bitset of v, packed 64 vertices per word.
  const std::vector<std::uint64_t>& adjacency_words(int v) const {
    return adj_[v];
  }

 private:
  int vertex_count_;
  std::vector<std::pair<int, int>> edges_;  // sorted, u < v, unique
  std::vector<std::vector<std::uint64_t>> adj_;
  std::vector<int> degree_;
};

struct CoverElement {
  std::vector<int> vertices;  // sorted, unique
  Rational weight;            // in (0, 1]
};

// Weighted independent sets; proper and exact when every element is
// independent and each vertex's weights sum to exactly 1.
struct FractionalCover {
  std::vector<CoverElement> elements;
  int graph_size = 0;

  Rational omega() const;
};

// Derived quantities of a validated cover: alpha_j = w_j / omega and
// pi_j = w_j |C_j| / m. Both vectors sum to 1.
struct CoverStats {
  Rational omega;
  std::vector<Rational> alpha;
  std::vector<Rational> pi;
};

struct CliqueResult {
  int value = 1;
  bool exact = true;  // false when only the greedy lower bound was computed
};

struct ChiStarResult {
  Rational chi_star;
  FractionalCover certificate;  // proper exact, weight == chi_star
};

// clique <= chi_star <= greedy chromatic <= max degree + 1.
struct ChiEstimates {
  CliqueResult clique_lower;
  bool has_chi_star = false;
  Rational chi_star;
  int chi_upper = 1;
  int delta_plus_one = 1;
};

struct NotIndependentError : std::runtime_error {
  NotIndependentError(int element_, std::pair<int, int> edge_);
  int element;
  std::pair<int, int> edge;
};

struct NotExactError : std::runtime_error {
  NotExactError(int vertex_, double total_weight_);
  int vertex;
  double total_weight;
};

struct TooLargeError : std::runtime_error {
  explicit TooLargeError(int vertex_count_, int cap_);
  int vertex_count;
  int cap;
};

// Checks that every element is an independent set and that per-vertex
// weights sum to 1 (tolerance 1e-9), then cross-checks the weighted-sum
// identity sum_i t_i = sum_j w_j sum_{k in C_j} t_k on random vectors.
CoverStats validate_cover(const DependencyGraph& graph,
                          const FractionalCover& cover);

// Exact clique number for graphs with at most 64 vertices (branch and
// bound on bitmasks); larger graphs get a greedy lower bound with
// exact = false.
CliqueResult clique_number(const DependencyGraph& graph);

// Exact fractional chromatic number for graphs with at most 20 vertices:
// the covering LP over all maximal independent sets, solved with the exact
// rational simplex. The returned certificate is trimmed to a proper exact
// cover of the same total weight.
ChiStarResult fractional_chromatic_exact(const DependencyGraph& graph);

// Colors used by a saturation-guided greedy coloring (DSATUR); never more
// than max degree + 1.
int greedy_chromatic_upper(const DependencyGraph& graph);

ChiEstimates chi_estimates(const DependencyGraph& graph);

// Subgraph induced by `keep` (distinct, in-range), reindexed to
// 0..keep.size()-1 in the given order.
DependencyGraph induced_subgraph(const DependencyGraph& graph,
                                 const std::vector<int>& keep);

// Text format: "m <vertex_count>" then one "e <i> <j>" line per edge,
// 0-based; lines starting with '#' are ignored.
DependencyGraph read_graph(std::istream& in);
DependencyGraph read_graph_file(const std::string& path);
void write_graph(const DependencyGraph& graph, std::ostream& out);

// All maximal independent sets, as sorted vertex lists (Bron-Kerbosch on
// the complement graph). Exposed for the LP and for oracle tests.
std::vector<std::vector<int>> maximal_independent_sets(
    const DependencyGraph& graph);

}  // namespace cpb
