#include "cpb/bounds.hpp"

#include <cmath>
#include <limits>

#include "cpb/covers.hpp"
#include "cpb/klcore.hpp"

namespace cpb::bounds {

namespace {

void check_common(double kl_div, double delta, double e_hat) {
  if (!(kl_div >= 0.0)) throw std::domain_error("kl_div must be >= 0");
  if (!(delta > 0.0 && delta <= 1.0)) {
    throw std::domain_error("delta must lie in (0, 1]");
  }
  if (!(e_hat >= 0.0 && e_hat <= 1.0)) {
    throw std::domain_error("e_hat must lie in [0, 1]");
  }
}

// Fills the inverted risk bounds from a kl budget.
BoundResult finish_kl_result(double e_hat, double budget, double delta,
                             double effective_m, Rational chi_star) {
  BoundResult r;
  r.empirical_gibbs = e_hat;
  r.kl_budget = budget;
  r.delta = delta;
  r.effective_m = effective_m;
  r.chi_star_used = chi_star;
  if (std::isinf(budget)) {
    r.risk_bound_kl = 1.0;
    r.risk_bound_pinsker = 1.0;
  } else {
    r.risk_bound_kl =
        std::min(1.0, e_hat + klcore::kl_inverse(e_hat, budget));
    r.risk_bound_pinsker =
        std::min(1.0, e_hat + klcore::pinsker_inverse(e_hat, budget));
  }
  r.vacuous = r.risk_bound_kl >= 1.0;
  return r;
}

BoundResult finish_two_sided(double e_hat, double budget, double delta,
                             double effective_m, Rational chi_star) {
  BoundResult r;
  r.empirical_gibbs = e_hat;
  r.kl_budget = budget;
  r.delta = delta;
  r.effective_m = effective_m;
  r.chi_star_used = chi_star;
  r.two_sided = true;
  const double dev = std::sqrt(budget);
  r.risk_bound_kl = std::min(1.0, e_hat + dev);
  r.risk_bound_pinsker = r.risk_bound_kl;
  r.risk_lower = std::max(0.0, e_hat - dev);
  r.vacuous = r.risk_bound_kl >= 1.0;
  return r;
}

}  // namespace

DeltaTooSmallError::DeltaTooSmallError(double delta_, double threshold_)
    : std::runtime_error("delta = " + std::to_string(delta_) +
                         " must exceed 2(mu-1)beta(a) = " +
                         std::to_string(threshold_)),
      delta(delta_),
      threshold(threshold_) {}

BetaNotAboveOneError::BetaNotAboveOneError(const std::string& what)
    : std::runtime_error(what) {}

SkewDegenerateError::SkewDegenerateError()
    : std::runtime_error("both classes must be nonempty") {}

BoundResult iid_bound(int m, double kl_div, double delta, double e_hat) {
  return chromatic_bound_II(m, Rational(1), kl_div, delta, e_hat);
}

BoundResult chromatic_bound_II(int m, const Rational& chi_star, double kl_div,
                               double delta, double e_hat) {
  if (m < 1) throw std::domain_error("m must be >= 1");
  if (chi_star < Rational(1)) throw std::domain_error("chi_star must be >= 1");
  check_common(kl_div, delta, e_hat);
  // Both ratios are reduced exactly before conversion, so e.g.
  // chi* = l_max, m = l_pos * l_neg collapses to 1/l_min and l_min + 1.
  const Rational ratio = chi_star / Rational(m);
  const Rational log_arg = (Rational(m) + chi_star) / chi_star;
  const double budget =
      ratio.to_double() * (kl_div + std::log(log_arg.to_double() / delta));
  return finish_kl_result(e_hat, budget, delta,
                          (Rational(1) / ratio).to_double(), chi_star);
}

BoundResult chromatic_bound_I(const CoverStats& stats,
                              const std::vector<double>& per_element_kl,
                              int m, double delta, double e_bar) {
  if (per_element_kl.size() != stats.alpha.size()) {
    throw std::invalid_argument(
        "chromatic_bound_I: one KL term per cover element required");
  }
  if (m < 1) throw std::domain_error("m must be >= 1");
  check_common(0.0, delta, e_bar);
  double mixed_kl = 0.0;
  for (std::size_t j = 0; j < per_element_kl.size(); ++j) {
    if (!(per_element_kl[j] >= 0.0)) {
      throw std::domain_error("per-element KL must be >= 0");
    }
    mixed_kl += stats.alpha[j].to_double() * per_element_kl[j];
  }
  const Rational ratio = stats.omega / Rational(m);
  const Rational log_arg = (Rational(m) + stats.omega) / stats.omega;
  const double budget =
      ratio.to_double() * (mixed_kl + std::log(log_arg.to_double() / delta));
  return finish_kl_result(e_bar, budget, delta,
                          (Rational(1) / ratio).to_double(), stats.omega);
}

BoundResult subgraph_bound(const std::vector<SubgraphCandidate>& candidates,
                           int m, int k, double kl_div, double delta) {
  if (candidates.empty()) {
    throw std::invalid_argument("subgraph_bound: no candidates");
  }
  if (k < 0 || k >= m) throw std::domain_error("subgraph_bound: 0 <= k < m");
  check_common(kl_div, delta, 0.0);
  const double log_choose = std::lgamma(m + 1.0) - std::lgamma(k + 1.0) -
                            std::lgamma(m - k + 1.0);

  BoundResult best;
  bool have = false;
  for (const auto& cand : candidates) {
    if (cand.subset_size != m - k) {
      throw std::invalid_argument(
          "subgraph_bound: candidate size must equal m - k");
    }
    if (!(cand.e_hat_s >= 0.0 && cand.e_hat_s <= 1.0)) {
      throw std::domain_error("subgraph_bound: e_hat_s in [0, 1]");
    }
    const Rational ratio = cand.chi_star_s / Rational(cand.subset_size);
    const Rational log_arg =
        (Rational(cand.subset_size) + cand.chi_star_s) / cand.chi_star_s;
    const double budget =
        ratio.to_double() * (kl_div + std::log(log_arg.to_double()) +
                             log_choose + std::log(1.0 / delta));
    BoundResult r = finish_kl_result(cand.e_hat_s, budget, delta,
                                     (Rational(1) / ratio).to_double(),
                                     cand.chi_star_s);
    if (!have || r.risk_bound_kl < best.risk_bound_kl) {
      best = r;
      have = true;
    }
  }
  return best;
}

BoundResult ranking_bound(int l, double kl_div, double delta,
                          double e_hat_rank) {
  if (l < 2) throw std::domain_error("ranking_bound: l must be >= 2");
  const std::int64_t m = static_cast<std::int64_t>(l) * (l - 1);
  const Rational chi(m, l / 2);
  BoundResult r = chromatic_bound_II(static_cast<int>(m), chi, kl_div, delta,
                                     e_hat_rank);
  return r;
}

BoundResult auc_bound(int l_pos, int l_neg, double kl_div, double delta,
                      double e_hat_auc) {
  if (l_pos < 1 || l_neg < 1) throw SkewDegenerateError();
  const int m = l_pos * l_neg;
  const Rational chi(std::max(l_pos, l_neg));
  return chromatic_bound_II(m, chi, kl_div, delta, e_hat_auc);
}

BoundResult auc_linear_bound(int l_min, double mu, double delta,
                             double e_hat_auc) {
  if (l_min < 1) throw SkewDegenerateError();
  if (!(mu > 0.0)) throw std::domain_error("mu must be > 0");
  // Divisor l_min with log argument l_min + 1 is the chi* = 1 form at
  // sample size l_min.
  return chromatic_bound_II(l_min, Rational(1), mu * mu / 2.0, delta,
                            e_hat_auc);
}

BoundResult beta_mixing_bound(int m, int a, double beta_a, double kl_div,
                              double delta, double e_hat) {
  if (m < 2 || a < 1) throw std::domain_error("beta_mixing_bound: m, a");
  if (m % (2 * a) != 0) throw covers::IndivisibleBlocksError(m, a);
  check_common(kl_div, delta, e_hat);
  if (!(beta_a >= 0.0)) throw std::domain_error("beta(a) must be >= 0");
  const int mu = m / (2 * a);
  const double threshold = 2.0 * (mu - 1) * beta_a;
  if (!(delta > threshold)) throw DeltaTooSmallError(delta, threshold);
  const double budget =
      (kl_div + std::log(2.0 * (mu + 1) / (delta - threshold))) / mu;
  BoundResult r = finish_kl_result(e_hat, budget, delta, mu, Rational(a));
  return r;
}

BoundResult generalized_chromatic_bound(int m, const Rational& chi_star,
                                        double loss_range, double kl_div,
                                        double delta, double e_hat) {
  if (m < 1) throw std::domain_error("m must be >= 1");
  if (chi_star < Rational(1)) throw std::domain_error("chi_star >= 1");
  if (!(loss_range > 0.0)) throw std::domain_error("loss range M > 0");
  check_common(kl_div, delta, e_hat);
  const double c = chi_star.to_double() * loss_range * loss_range;
  if (!(2.0 * m > c)) {
    throw BetaNotAboveOneError("generalized_chromatic_bound: need 2m > chi* M^2");
  }
  const double budget = c / (2.0 * m - c) *
                        (kl_div + std::log(2.0 * m / c) + std::log(1.0 / delta));
  return finish_two_sided(e_hat, budget, delta, (2.0 * m - c) / c, chi_star);
}

BoundResult phi_mixing_bound(int m, double loss_range,
                             const std::vector<double>& phi, double kl_div,
                             double delta, double e_hat) {
  if (m < 1) throw std::domain_error("m must be >= 1");
  if (!(loss_range > 0.0)) throw std::domain_error("loss range M > 0");
  check_common(kl_div, delta, e_hat);
  double lambda = 1.0;
  for (double p : phi) {
    if (!(p >= 0.0)) throw std::domain_error("phi(k) must be >= 0");
    lambda += 2.0 * p;
  }
  const double c = 2.0 * loss_range * loss_range * lambda * lambda;
  if (!(m > c)) {
    throw BetaNotAboveOneError("phi_mixing_bound: need m > 2 M^2 Lambda^2");
  }
  const double budget =
      c / (m - c) *
      (kl_div + std::log(m / (loss_range * loss_range * lambda * lambda)) +
       std::log(1.0 / delta));
  return finish_two_sided(e_hat, budget, delta, (m - c) / c, Rational(1));
}

double generic_pacbayes_budget(double alpha, double beta, double kl_div,
                               double delta) {
  if (!(alpha >= 1.0)) throw std::domain_error("alpha must be >= 1");
  if (!(beta > 1.0)) throw std::domain_error("beta must be > 1");
  check_common(kl_div, delta, 0.0);
  return (kl_div + std::log(alpha * beta / delta)) / (beta - 1.0);
}

double bayes_risk_factor(double e_gibbs) {
  if (!(e_gibbs >= 0.0 && e_gibbs <= 1.0)) {
    throw std::domain_error("e must lie in [0, 1]");
  }
  return std::min(1.0, 2.0 * e_gibbs);
}

}  // namespace cpb::bounds
