#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <vector>

#include "cpb/depgraph.hpp"

namespace cpb::gibbs {

// Dense feature matrix with one label per row. Labels are +/-1 for
// classification; ranking samples carry real-valued scores instead.
struct LabeledDataset {
  std::vector<double> features;  // row-major, rows x dim
  std::vector<double> labels;
  int dim = 0;

  int rows() const { return static_cast<int>(labels.size()); }
  std::span<const double> row(int i) const {
    return {features.data() + static_cast<std::size_t>(i) * dim,
            static_cast<std::size_t>(dim)};
  }

  void validate_classification() const;
};

// Linear scoring function f(x) = w . x; the induced pairwise rule is
// h(x, x') = w . (x - x').
struct LinearScorer {
  std::vector<double> weights;

  double score(std::span<const double> x) const;
};

// Gaussian posterior over linear scorers: N(mu, 1) along the unit direction,
// N(0, 1) in every perpendicular direction. KL to the isotropic unit prior
// is mu^2 / 2.
struct GaussianLinearPosterior {
  std::vector<double> direction;  // unit norm
  double mu = 1.0;

  GaussianLinearPosterior(std::vector<double> w, double mu_);
  double kl_divergence() const { return mu * mu / 2.0; }
};

// Index lists of the positive and negative examples; the implied pairs are
// row-major, matching the bipartite ranking vertex numbering.
struct PairSet {
  std::vector<int> pos;
  std::vector<int> neg;

  long long pair_count() const {
    return static_cast<long long>(pos.size()) * neg.size();
  }
};

enum class TieMode { Half, Strict };

// Standard normal upper tail.
double normal_upper_tail(double z);

// Deterministic standard normal stream (Box-Muller over mt19937_64), stable
// across platforms.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : rng_(seed) {}
  double next();

 private:
  std::mt19937_64 rng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

// Substream seed for (seed, index) pairs; used to keep Monte-Carlo results
// independent of any partitioning of the draw loop.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Closed-form Gibbs error of the posterior on labeled data:
// mean_i Phi_bar(mu y_i (w . x_i) / |x_i|). Rows with |x| = 0 score 1/2.
double gibbs_error_binary(const GaussianLinearPosterior& post,
                          const LabeledDataset& data);

// Closed-form Gibbs misranking rate over the (pos, neg) pairs:
// mean_{ij} Phi_bar(mu w . (x_i - x_j) / |x_i - x_j|); identical pairs
// score 1/2.
double gibbs_error_auc(const GaussianLinearPosterior& post,
                       const LabeledDataset& data, const PairSet& pairs);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  int n_samples = 0;
};

// Monte-Carlo oracle for gibbs_error_binary: draws v = mu w + g with
// g ~ N(0, I) and averages the 0-1 loss. Deterministic given the seed and
// independent of partitioning (fixed-size substream chunks).
McEstimate mc_gibbs_error(const GaussianLinearPosterior& post,
                          const LabeledDataset& data, int n_samples,
                          std::uint64_t seed);

// Fraction of (pos, neg) pairs ranked wrongly by the scorer; score ties
// count 1/2 by default, 0 in strict mode.
double empirical_auc_risk(const LinearScorer& scorer,
                          const LabeledDataset& data, const PairSet& pairs,
                          TieMode tie_mode = TieMode::Half);

// Same, over precomputed scores.
double auc_risk_from_scores(const std::vector<double>& scores,
                            const PairSet& pairs,
                            TieMode tie_mode = TieMode::Half);

using PairwiseRule =
    std::function<double(std::span<const double>, std::span<const double>)>;

// Misranking rate over all ordered pairs i != j of a real-score sample:
// mean of 1[(Y_i - Y_j) h(x_i, x_j) < 0]. Score ties in Y contribute 0.
double empirical_ranking_risk(const PairwiseRule& rule,
                              const LabeledDataset& data);

// Hinge-loss stochastic subgradient with 1/(lambda t) steps and iterate
// averaging. Plumbing: any training rule works, the bounds only need the
// resulting direction.
LinearScorer train_linear(const LabeledDataset& data, double lambda,
                          int epochs, std::uint64_t seed);

using SampleGenerator = std::function<LabeledDataset(std::mt19937_64&)>;

struct MomentComparison {
  double center = 0.0;       // Monte-Carlo estimate of e_Q
  double full_moment = 0.0;  // E |e_hat(Z) - e_Q|^r
  double full_se = 0.0;
  std::vector<double> element_moments;  // one per cover element
  std::vector<double> element_ses;
};

// Monte-Carlo comparison of the full-sample moment against each
// per-element moment. Requires equal-sized cover elements.
MomentComparison moment_comparison(const GaussianLinearPosterior& post,
                                   const DependencyGraph& graph,
                                   const FractionalCover& cover,
                                   const SampleGenerator& generator, int r,
                                   int n_draws, std::uint64_t seed);

}  // namespace cpb::gibbs
