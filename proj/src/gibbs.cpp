#include "cpb/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpb::gibbs {

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(std::span<const double> a) {
  double s = 0.0;
  for (double v : a) s += v * v;
  return std::sqrt(s);
}

}  // namespace

void LabeledDataset::validate_classification() const {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] != 1.0 && labels[i] != -1.0) {
      throw std::invalid_argument("label at row " + std::to_string(i) +
                                  " is not +/-1");
    }
  }
}

double LinearScorer::score(std::span<const double> x) const {
  if (x.size() != weights.size()) {
    throw std::invalid_argument("scorer/feature dimension mismatch");
  }
  return dot(weights, x);
}

GaussianLinearPosterior::GaussianLinearPosterior(std::vector<double> w,
                                                 double mu_)
    : direction(std::move(w)), mu(mu_) {
  if (direction.empty()) {
    throw std::invalid_argument("posterior direction must be nonempty");
  }
  if (!(mu > 0.0)) throw std::domain_error("posterior scale mu must be > 0");
  double n = norm(direction);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw std::invalid_argument("posterior direction must be nonzero");
  }
  for (double& v : direction) v /= n;
}

double normal_upper_tail(double z) {
  return 0.5 * std::erfc(z / std::numbers::sqrt2);
}

double GaussianSampler::next() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 pulled away from 0.
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double u1 = 0.0;
  do {
    u1 = unif(rng_);
  } while (u1 <= 0.0);
  double u2 = unif(rng_);
  double radius = std::sqrt(-2.0 * std::log(u1));
  double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 over the combined word.
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double gibbs_error_binary(const GaussianLinearPosterior& post,
                          const LabeledDataset& data) {
  if (data.dim != static_cast<int>(post.direction.size())) {
    throw std::invalid_argument("posterior/dataset dimension mismatch");
  }
  if (data.rows() == 0) throw std::invalid_argument("empty dataset");
  double total = 0.0;
  for (int i = 0; i < data.rows(); ++i) {
    auto x = data.row(i);
    double nx = norm(x);
    if (nx == 0.0) {
      total += 0.5;
    } else {
      total += normal_upper_tail(post.mu * data.labels[i] *
                                 dot(post.direction, x) / nx);
    }
  }
  return total / data.rows();
}

double gibbs_error_auc(const GaussianLinearPosterior& post,
                       const LabeledDataset& data, const PairSet& pairs) {
  if (pairs.pos.empty() || pairs.neg.empty()) {
    throw std::invalid_argument("gibbs_error_auc: empty class");
  }
  if (data.dim != static_cast<int>(post.direction.size())) {
    throw std::invalid_argument("posterior/dataset dimension mismatch");
  }
  std::vector<double> diff(data.dim);
  double total = 0.0;
  for (int i : pairs.pos) {
    auto xi = data.row(i);
    for (int j : pairs.neg) {
      auto xj = data.row(j);
      double nd = 0.0;
      for (int k = 0; k < data.dim; ++k) {
        diff[k] = xi[k] - xj[k];
        nd += diff[k] * diff[k];
      }
      if (nd == 0.0) {
        total += 0.5;
      } else {
        total += normal_upper_tail(post.mu * dot(post.direction, diff) /
                                   std::sqrt(nd));
      }
    }
  }
  return total / static_cast<double>(pairs.pair_count());
}

McEstimate mc_gibbs_error(const GaussianLinearPosterior& post,
                          const LabeledDataset& data, int n_samples,
                          std::uint64_t seed) {
  if (n_samples < 1) throw std::invalid_argument("n_samples must be >= 1");
  if (data.dim != static_cast<int>(post.direction.size())) {
    throw std::invalid_argument("posterior/dataset dimension mismatch");
  }
  const int d = data.dim;
  const int m = data.rows();
  constexpr int kChunk = 8192;

  double total = 0.0;
  std::vector<double> v(d);
  for (int base = 0, chunk = 0; base < n_samples; base += kChunk, ++chunk) {
    const int count = std::min(kChunk, n_samples - base);
    GaussianSampler gauss(derive_seed(seed, chunk));
    for (int s = 0; s < count; ++s) {
      for (int k = 0; k < d; ++k) {
        v[k] = post.mu * post.direction[k] + gauss.next();
      }
      double loss = 0.0;
      for (int i = 0; i < m; ++i) {
        double margin = data.labels[i] * dot(v, data.row(i));
        if (margin < 0.0) {
          loss += 1.0;
        } else if (margin == 0.0 && norm(data.row(i)) == 0.0) {
          loss += 0.5;  // matches the closed form's zero-row convention
        }
      }
      total += loss / m;
    }
  }
  McEstimate est;
  est.n_samples = n_samples;
  est.value = total / n_samples;
  est.std_error =
      std::sqrt(std::max(0.0, est.value * (1.0 - est.value)) / n_samples);
  return est;
}

double auc_risk_from_scores(const std::vector<double>& scores,
                            const PairSet& pairs, TieMode tie_mode) {
  if (pairs.pos.empty() || pairs.neg.empty()) {
    throw std::invalid_argument("empty class");
  }
  double total = 0.0;
  for (int i : pairs.pos) {
    for (int j : pairs.neg) {
      if (scores[i] < scores[j]) {
        total += 1.0;
      } else if (scores[i] == scores[j] && tie_mode == TieMode::Half) {
        total += 0.5;
      }
    }
  }
  return total / static_cast<double>(pairs.pair_count());
}

double empirical_auc_risk(const LinearScorer& scorer,
                          const LabeledDataset& data, const PairSet& pairs,
                          TieMode tie_mode) {
  std::vector<double> scores(data.rows());
  for (int i = 0; i < data.rows(); ++i) scores[i] = scorer.score(data.row(i));
  return auc_risk_from_scores(scores, pairs, tie_mode);
}

double empirical_ranking_risk(const PairwiseRule& rule,
                              const LabeledDataset& data) {
  const int l = data.rows();
  if (l < 2) throw std::invalid_argument("ranking risk needs l >= 2");
  double total = 0.0;
  for (int i = 0; i < l; ++i) {
    for (int j = 0; j < l; ++j) {
      if (i == j) continue;
      double ydiff = data.labels[i] - data.labels[j];
      if (ydiff != 0.0 && ydiff * rule(data.row(i), data.row(j)) < 0.0) {
        total += 1.0;
      }
    }
  }
  return total / (static_cast<double>(l) * (l - 1));
}

LinearScorer train_linear(const LabeledDataset& data, double lambda,
                          int epochs, std::uint64_t seed) {
  if (data.rows() < 1) throw std::invalid_argument("empty dataset");
  if (!(lambda > 0.0)) throw std::domain_error("lambda must be > 0");
  if (epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  data.validate_classification();

  const int m = data.rows();
  const int d = data.dim;
  std::vector<double> w(d, 0.0), avg(d, 0.0);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> pick(0, m - 1);

  long long t = 0;
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (int step = 0; step < m; ++step) {
      ++t;
      const double eta = 1.0 / (lambda * t);
      const int i = pick(rng);
      auto x = data.row(i);
      const double y = data.labels[i];
      const double margin = y * dot(w, x);
      const double shrink = 1.0 - eta * lambda;
      if (margin < 1.0) {
        for (int k = 0; k < d; ++k) w[k] = shrink * w[k] + eta * y * x[k];
      } else {
        for (int k = 0; k < d; ++k) w[k] = shrink * w[k];
      }
      for (int k = 0; k < d; ++k) avg[k] += w[k];
    }
  }
  for (int k = 0; k < d; ++k) avg[k] /= static_cast<double>(t);
  return LinearScorer{std::move(avg)};
}

MomentComparison moment_comparison(const GaussianLinearPosterior& post,
                                   const DependencyGraph& graph,
                                   const FractionalCover& cover,
                                   const SampleGenerator& generator, int r,
                                   int n_draws, std::uint64_t seed) {
  if (r < 1) throw std::domain_error("moment order r must be >= 1");
  if (n_draws < 2) throw std::invalid_argument("n_draws must be >= 2");
  if (cover.graph_size != graph.vertex_count()) {
    throw std::invalid_argument("cover/graph size mismatch");
  }
  const std::size_t elem_size = cover.elements.at(0).vertices.size();
  for (const auto& e : cover.elements) {
    if (e.vertices.size() != elem_size) {
      throw std::invalid_argument(
          "moment_comparison requires equal-sized cover elements");
    }
  }
  const int n_elems = static_cast<int>(cover.elements.size());

  std::vector<double> full(n_draws);
  std::vector<std::vector<double>> elems(n_elems,
                                         std::vector<double>(n_draws));
  for (int draw = 0; draw < n_draws; ++draw) {
    std::mt19937_64 rng(derive_seed(seed, draw));
    LabeledDataset sample = generator(rng);
    if (sample.rows() != graph.vertex_count()) {
      throw std::invalid_argument("generator sample size mismatch");
    }
    full[draw] = gibbs_error_binary(post, sample);
    for (int j = 0; j < n_elems; ++j) {
      LabeledDataset sub;
      sub.dim = sample.dim;
      for (int v : cover.elements[j].vertices) {
        auto row = sample.row(v);
        sub.features.insert(sub.features.end(), row.begin(), row.end());
        sub.labels.push_back(sample.labels[v]);
      }
      elems[j][draw] = gibbs_error_binary(post, sub);
    }
  }

  double center = 0.0;
  for (double v : full) center += v;
  center /= n_draws;

  auto moment_of = [&](const std::vector<double>& series) {
    double mean = 0.0;
    for (double v : series) mean += std::pow(std::abs(v - center), r);
    mean /= n_draws;
    double var = 0.0;
    for (double v : series) {
      double t = std::pow(std::abs(v - center), r) - mean;
      var += t * t;
    }
    var /= (n_draws - 1.0);
    return std::pair<double, double>(mean, std::sqrt(var / n_draws));
  };

  MomentComparison out;
  out.center = center;
  auto [fm, fs] = moment_of(full);
  out.full_moment = fm;
  out.full_se = fs;
  for (int j = 0; j < n_elems; ++j) {
    auto [em, es] = moment_of(elems[j]);
    out.element_moments.push_back(em);
    out.element_ses.push_back(es);
  }
  return out;
}

}  // namespace cpb::gibbs
