#pragma once

#include <stdexcept>
#include <vector>

#include "cpb/depgraph.hpp"
#include "cpb/rational.hpp"

namespace cpb::bounds {

// Evaluated bound: the kl budget (right-hand side of the kl inequality),
// plus the inverted risk bounds. Squared-deviation bounds (the generalized
// chromatic and phi-mixing forms) fill the same risk fields with
// e_hat +/- sqrt(budget) and set two_sided.
struct BoundResult {
  double empirical_gibbs = 0.0;  // e_hat
  double kl_budget = 0.0;        // nats (or squared deviation, two-sided)
  double risk_bound_kl = 0.0;    // e_hat + kl_inverse(e_hat, budget)
  double risk_bound_pinsker = 0.0;
  double risk_lower = 0.0;  // only meaningful for two-sided bounds
  double delta = 0.0;
  double effective_m = 0.0;  // the divisor in force: m/chi*, l_min, ...
  Rational chi_star_used = Rational(1);
  bool two_sided = false;
  bool vacuous = false;  // risk bound reached 1
};

struct DeltaTooSmallError : std::runtime_error {
  DeltaTooSmallError(double delta_, double threshold_);
  double delta;
  double threshold;
};

struct BetaNotAboveOneError : std::runtime_error {
  explicit BetaNotAboveOneError(const std::string& what);
};

struct SkewDegenerateError : std::runtime_error {
  SkewDegenerateError();
};

// (1/m) [KL + ln((m+1)/delta)]; the chromatic bound at chi* = 1.
BoundResult iid_bound(int m, double kl_div, double delta, double e_hat);

// (omega/m) [sum_j alpha_j KL_j + ln((m+omega)/(delta omega))].
BoundResult chromatic_bound_I(const CoverStats& stats,
                              const std::vector<double>& per_element_kl,
                              int m, double delta, double e_bar);

// (chi*/m) [KL + ln((m+chi*)/(delta chi*))]. chi* enters as a rational and
// is reduced against m before any floating-point evaluation, so the IID,
// AUC and ranking instantiations reproduce their simplified formulas
// bit for bit.
BoundResult chromatic_bound_II(int m, const Rational& chi_star, double kl_div,
                               double delta, double e_hat);

struct SubgraphCandidate {
  int subset_size;     // |s| = m - k
  Rational chi_star_s;  // fractional chromatic number of the induced graph
  double e_hat_s;      // empirical Gibbs error on the subset
};

// min over candidates of e_s + kl_inv(e_s, (chi_s/|s|)[KL +
// ln((|s|+chi_s)/chi_s) + ln C(m,k) + ln(1/delta)]).
BoundResult subgraph_bound(const std::vector<SubgraphCandidate>& candidates,
                           int m, int k, double kl_div, double delta);

// Divisor floor(l/2): (1/floor(l/2)) [KL + ln((floor(l/2)+1)/delta)].
BoundResult ranking_bound(int l, double kl_div, double delta,
                          double e_hat_rank);

// Divisor l_min: (1/l_min) [KL + ln((l_min+1)/delta)].
BoundResult auc_bound(int l_pos, int l_neg, double kl_div, double delta,
                      double e_hat_auc);

// auc form with KL = mu^2/2 (isotropic Gaussian posterior at scale mu).
BoundResult auc_linear_bound(int l_min, double mu, double delta,
                             double e_hat_auc);

// (1/mu) [KL + ln(2(mu+1)/(delta - 2(mu-1) beta_a))], mu = m/(2a).
// Requires delta > 2(mu-1) beta_a.
BoundResult beta_mixing_bound(int m, int a, double beta_a, double kl_div,
                              double delta, double e_hat);

// Squared-deviation bound (chi* M^2 / (2m - chi* M^2)) [KL +
// ln(2m/(chi* M^2)) + ln(1/delta)]; requires 2m > chi* M^2.
BoundResult generalized_chromatic_bound(int m, const Rational& chi_star,
                                        double loss_range, double kl_div,
                                        double delta, double e_hat);

// Squared-deviation bound with Lambda = 1 + 2 sum_k phi(k):
// (2 M^2 L^2 / (m - 2 M^2 L^2)) [KL + ln(m/(M^2 L^2)) + ln(1/delta)];
// requires m > 2 M^2 L^2.
BoundResult phi_mixing_bound(int m, double loss_range,
                             const std::vector<double>& phi, double kl_div,
                             double delta, double e_hat);

// (KL + ln(alpha beta / delta)) / (beta - 1), the budget of the generic
// concentration-to-PAC-Bayes template. alpha = 1, beta = m + 1 recovers the
// IID budget.
double generic_pacbayes_budget(double alpha, double beta, double kl_div,
                               double delta);

// min(1, 2 e): deterministic-vote risk from the Gibbs risk.
double bayes_risk_factor(double e_gibbs);

}  // namespace cpb::bounds
