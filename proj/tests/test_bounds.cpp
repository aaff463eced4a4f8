#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "cpb/bounds.hpp"
#include "cpb/covers.hpp"
#include "cpb/klcore.hpp"

using namespace cpb;
using namespace cpb::bounds;

TEST_CASE("iid budget arithmetic") {
  auto r = iid_bound(100, 0.0, 1.0, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.0461512051684126).epsilon(1e-13));
  CHECK(r.effective_m == 100.0);
  CHECK(!r.vacuous);
  CHECK_THROWS_AS(iid_bound(0, 0.0, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(iid_bound(10, -1.0, 0.5, 0.0), std::domain_error);
  CHECK_THROWS_AS(iid_bound(10, 0.0, 0.0, 0.0), std::domain_error);
  CHECK_THROWS_AS(iid_bound(10, 0.0, 0.5, 1.5), std::domain_error);
}

TEST_CASE("iid budget vanishes for large m") {
  auto r = iid_bound(1000000, 0.0, 1.0, 0.1);
  CHECK(r.risk_bound_kl == doctest::Approx(0.1).epsilon(0.01));
}

TEST_CASE("chromatic II reduces exactly to the IID bound at chi* = 1") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int m = 1 + static_cast<int>(rng() % 5000);
    double kl = 3.0 * unif(rng);
    double delta = 0.01 + 0.99 * unif(rng);
    double ehat = unif(rng);
    auto a = iid_bound(m, kl, delta, ehat);
    auto b = chromatic_bound_II(m, Rational(1), kl, delta, ehat);
    CHECK(a.kl_budget == b.kl_budget);  // same code path, bitwise equal
    CHECK(a.risk_bound_kl == b.risk_bound_kl);
  }
}

TEST_CASE("auc bound is the chromatic II bound after exact reduction") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    int lp = 1 + static_cast<int>(rng() % 40);
    int ln = 1 + static_cast<int>(rng() % 40);
    double kl = 2.0 * unif(rng);
    double delta = 0.01 + 0.99 * unif(rng);
    double ehat = unif(rng);
    auto via_chrom = chromatic_bound_II(lp * ln, Rational(std::max(lp, ln)),
                                        kl, delta, ehat);
    auto direct = auc_bound(lp, ln, kl, delta, ehat);
    CHECK(direct.kl_budget == via_chrom.kl_budget);
    // And both equal the simplified l_min formula to the last bit.
    int lmin = std::min(lp, ln);
    double simplified =
        (1.0 / lmin) * (kl + std::log((lmin + 1.0) / delta));
    CHECK(std::abs(direct.kl_budget - simplified) <=
          1e-15 * std::abs(simplified));
  }
}

TEST_CASE("auc bound is symmetric in the class counts") {
  auto a = auc_bound(89, 211, 0.7, 0.05, 0.2);
  auto b = auc_bound(211, 89, 0.7, 0.05, 0.2);
  CHECK(a.kl_budget == b.kl_budget);
  CHECK(a.effective_m == 89.0);
  CHECK_THROWS_AS(auc_bound(0, 5, 0.0, 0.5, 0.0), SkewDegenerateError);
}

TEST_CASE("auc budget arithmetic") {
  auto r = auc_bound(100, 500, 0.5 * 9.0, 0.01, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.1372029070282935).epsilon(1e-13));
}

TEST_CASE("auc linear bound plugs mu^2/2 into the kl budget") {
  auto r = auc_linear_bound(100, 1.0, 0.05, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.0811085279039525).epsilon(1e-13));
  auto zero = auc_linear_bound(100, 1e-9, 0.05, 0.1);
  auto ref = auc_bound(100, 100, 0.0, 0.05, 0.1);
  CHECK(zero.kl_budget == doctest::Approx(ref.kl_budget).epsilon(1e-12));
  // Doubling mu quadruples the KL part.
  auto m1 = auc_linear_bound(50, 1.5, 0.1, 0.0);
  auto m2 = auc_linear_bound(50, 3.0, 0.1, 0.0);
  double kl_part1 = m1.kl_budget - auc_linear_bound(50, 1e-12, 0.1, 0.0).kl_budget;
  double kl_part2 = m2.kl_budget - auc_linear_bound(50, 1e-12, 0.1, 0.0).kl_budget;
  CHECK(kl_part2 == doctest::Approx(4.0 * kl_part1).epsilon(1e-9));
  CHECK_THROWS_AS(auc_linear_bound(10, 0.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("ranking bound simplifies to the floor(l/2) divisor") {
  auto r = ranking_bound(100, 0.0, 0.05, 0.0);
  CHECK(r.kl_budget == doctest::Approx(std::log(1020.0) / 50.0).epsilon(1e-15));
  CHECK(r.effective_m == 50.0);

  // Consistency with the chromatic form at m = l(l-1), chi = m / floor(l/2).
  auto via_chrom =
      chromatic_bound_II(9900, Rational(9900, 50), 0.0, 0.05, 0.0);
  CHECK(r.kl_budget == via_chrom.kl_budget);

  auto l2 = ranking_bound(2, 0.0, 0.5, 0.0);
  CHECK(l2.effective_m == 1.0);
  CHECK_THROWS_AS(ranking_bound(1, 0.0, 0.5, 0.0), std::domain_error);
}

TEST_CASE("chromatic I arithmetic and reductions") {
  // omega = 2, m = 10, delta = 0.1, KL = {0, 1}, alpha = {1/2, 1/2}.
  CoverStats stats;
  stats.omega = Rational(2);
  stats.alpha = {Rational(1, 2), Rational(1, 2)};
  stats.pi = {Rational(1, 2), Rational(1, 2)};
  auto r = chromatic_bound_I(stats, {0.0, 1.0}, 10, 0.1, 0.3);
  CHECK(r.kl_budget == doctest::Approx(0.9188689124444201).epsilon(1e-13));

  // Single unit element: exactly the IID budget.
  CoverStats one;
  one.omega = Rational(1);
  one.alpha = {Rational(1)};
  one.pi = {Rational(1)};
  auto lhs = chromatic_bound_I(one, {0.7}, 20, 0.05, 0.1);
  auto rhs = iid_bound(20, 0.7, 0.05, 0.1);
  CHECK(lhs.kl_budget == rhs.kl_budget);

  // Equal per-element KL terms collapse to the chromatic II budget at
  // chi* = omega.
  auto all_equal = chromatic_bound_I(stats, {0.8, 0.8}, 10, 0.1, 0.3);
  auto ii = chromatic_bound_II(10, Rational(2), 0.8, 0.1, 0.3);
  CHECK(all_equal.kl_budget == doctest::Approx(ii.kl_budget).epsilon(1e-12));

  CHECK_THROWS_AS(chromatic_bound_I(stats, {0.0}, 10, 0.1, 0.3),
                  std::invalid_argument);
}

TEST_CASE("subgraph bound takes the best candidate") {
  // One-edge graph on 10 vertices, k = 1: dropping an endpoint gives
  // chi* = 1 on 9 vertices; dropping any other vertex keeps chi* = 2.
  const double kl = 0.0, delta = 0.05;
  std::vector<SubgraphCandidate> cands{
      {9, Rational(1), 0.0},
      {9, Rational(2), 0.0},
  };
  auto best = subgraph_bound(cands, 10, 1, kl, delta);
  const double drop_u =
      (std::log(10.0) + std::log(10.0) + std::log(20.0)) / 9.0;
  CHECK(best.kl_budget == doctest::Approx(drop_u).epsilon(1e-13));
  CHECK(best.kl_budget == doctest::Approx(0.8445447177268980).epsilon(1e-13));

  // The losing branch evaluates to the larger budget.
  auto keep_edge = subgraph_bound({{9, Rational(2), 0.0}}, 10, 1, kl, delta);
  CHECK(keep_edge.kl_budget ==
        doctest::Approx(1.5562367686192138).epsilon(1e-13));

  // Both are worth computing: the full-graph chromatic bound sits between.
  auto full = chromatic_bound_II(10, Rational(2), kl, delta, 0.0);
  CHECK(full.kl_budget == doctest::Approx(0.9574983485564092).epsilon(1e-13));
  CHECK(best.risk_bound_kl < full.risk_bound_kl);

  // k = 0 with the full graph reduces to chromatic II (ln C(m,0) = 0).
  auto k0 = subgraph_bound({{10, Rational(2), 0.0}}, 10, 0, kl, delta);
  CHECK(k0.kl_budget == doctest::Approx(full.kl_budget).epsilon(1e-12));

  // Identical candidates: the min is any single evaluation.
  auto twice = subgraph_bound(
      {{9, Rational(2), 0.1}, {9, Rational(2), 0.1}}, 10, 1, kl, delta);
  CHECK(twice.kl_budget == keep_edge.kl_budget);

  CHECK_THROWS_AS(subgraph_bound({}, 10, 1, kl, delta),
                  std::invalid_argument);
  CHECK_THROWS_AS(subgraph_bound({{5, Rational(1), 0.0}}, 10, 1, kl, delta),
                  std::invalid_argument);
}

TEST_CASE("beta mixing bound arithmetic and delta guard") {
  auto r = beta_mixing_bound(200, 10, 0.001, 0.0, 0.05, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.6533061829540726).epsilon(1e-13));
  CHECK(r.effective_m == 10.0);

  // Zero mixing reduces to the plain mu-divisor formula.
  auto z = beta_mixing_bound(200, 10, 0.0, 0.4, 0.05, 0.0);
  double direct = (0.4 + std::log(2.0 * 11.0 / 0.05)) / 10.0;
  CHECK(z.kl_budget == direct);

  // The budget diverges as delta approaches the threshold from above.
  double prev = 0.0;
  for (double delta : {0.05, 0.02, 0.0185, 0.01801}) {
    auto d = beta_mixing_bound(200, 10, 0.001, 0.0, delta, 0.0);
    CHECK(d.kl_budget > prev);
    prev = d.kl_budget;
  }
  CHECK_THROWS_AS(beta_mixing_bound(200, 10, 0.001, 0.0, 0.018, 0.0),
                  DeltaTooSmallError);
  CHECK_THROWS_AS(beta_mixing_bound(201, 10, 0.0, 0.0, 0.5, 0.0),
                  covers::IndivisibleBlocksError);
}

TEST_CASE("generalized chromatic bound") {
  auto r = generalized_chromatic_bound(1000, Rational(1), 1.0, 0.0, 0.05, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.0053009678504733).epsilon(1e-12));
  CHECK(r.two_sided);
  CHECK(r.risk_bound_kl == doctest::Approx(std::sqrt(r.kl_budget)));
  CHECK(r.risk_lower == 0.0);

  // Lower side floors at zero but tracks e_hat - sqrt(budget).
  auto mid = generalized_chromatic_bound(1000, Rational(1), 1.0, 0.0, 0.05, 0.4);
  CHECK(mid.risk_lower ==
        doctest::Approx(0.4 - std::sqrt(mid.kl_budget)).epsilon(1e-12));

  // Doubling M with m scaled by 4 and chi* fixed leaves the budget alone.
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 50 + static_cast<int>(rng() % 1000);
    double M = 0.5 + (rng() % 100) / 50.0;
    auto a = generalized_chromatic_bound(m, Rational(2), M, 0.3, 0.1, 0.0);
    auto b =
        generalized_chromatic_bound(4 * m, Rational(2), 2.0 * M, 0.3, 0.1, 0.0);
    CHECK(a.kl_budget == doctest::Approx(b.kl_budget).epsilon(1e-12));
  }

  CHECK_THROWS_AS(generalized_chromatic_bound(1, Rational(2), 1.0, 0.0, 0.5, 0.0),
                  BetaNotAboveOneError);
}

TEST_CASE("phi mixing bound") {
  // Lambda = 2 from sum(phi) = 0.5.
  auto r = phi_mixing_bound(10000, 1.0, {0.25, 0.25}, 0.0, 0.05, 0.0);
  CHECK(r.kl_budget == doctest::Approx(0.0086627528297921).epsilon(1e-12));

  // phi = 0 gives the McDiarmid-style IID form.
  auto z = phi_mixing_bound(1000, 1.0, {}, 0.2, 0.05, 0.0);
  double direct =
      2.0 / (1000.0 - 2.0) * (0.2 + std::log(1000.0) + std::log(20.0));
  CHECK(z.kl_budget == doctest::Approx(direct).epsilon(1e-14));

  // Budget is monotone in each phi(k).
  std::mt19937_64 rng(78);
  std::uniform_real_distribution<double> unif(0.0, 0.2);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> phi{unif(rng), unif(rng), unif(rng)};
    auto base = phi_mixing_bound(5000, 1.0, phi, 0.1, 0.1, 0.0);
    for (std::size_t k = 0; k < phi.size(); ++k) {
      auto bumped = phi;
      bumped[k] += 0.05;
      auto more = phi_mixing_bound(5000, 1.0, bumped, 0.1, 0.1, 0.0);
      CHECK(more.kl_budget >= base.kl_budget);
    }
  }

  CHECK_THROWS_AS(phi_mixing_bound(10, 1.0, {1.0, 1.0}, 0.0, 0.5, 0.0),
                  BetaNotAboveOneError);
}

TEST_CASE("generic budget recovers the IID form") {
  std::mt19937_64 rng(79);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 100; ++trial) {
    int m = 1 + static_cast<int>(rng() % 2000);
    double kl = 3.0 * unif(rng);
    double delta = 0.01 + 0.99 * unif(rng);
    double generic = generic_pacbayes_budget(1.0, m + 1.0, kl, delta);
    double direct = (kl + std::log((m + 1.0) / delta)) / m;
    CHECK(generic == doctest::Approx(direct).epsilon(1e-14));
  }
  // alpha doubles the delta-term argument.
  double a1 = generic_pacbayes_budget(1.0, 10.0, 0.0, 0.1);
  double a2 = generic_pacbayes_budget(2.0, 10.0, 0.0, 0.1);
  CHECK(a2 - a1 == doctest::Approx(std::log(2.0) / 9.0).epsilon(1e-12));
  CHECK_THROWS_AS(generic_pacbayes_budget(0.5, 10.0, 0.0, 0.1),
                  std::domain_error);
  CHECK_THROWS_AS(generic_pacbayes_budget(1.0, 1.0, 0.0, 0.1),
                  std::domain_error);
}

TEST_CASE("bayes risk factor") {
  CHECK(bayes_risk_factor(0.0) == 0.0);
  CHECK(bayes_risk_factor(0.3) == doctest::Approx(0.6));
  CHECK(bayes_risk_factor(0.7) == 1.0);
  CHECK_THROWS_AS(bayes_risk_factor(1.2), std::domain_error);
}

TEST_CASE("vacuous budgets clamp the risk at one instead of throwing") {
  auto r = chromatic_bound_II(5, Rational(5), 50.0, 0.001, 0.4);
  CHECK(r.vacuous);
  CHECK(r.risk_bound_kl == 1.0);
  CHECK(r.risk_bound_pinsker == 1.0);
  auto ehat1 = iid_bound(100, 0.0, 0.5, 1.0);
  CHECK(ehat1.vacuous);
  CHECK(ehat1.risk_bound_kl == 1.0);
}

TEST_CASE("kl risk bound never exceeds the Pinsker risk bound") {
  std::mt19937_64 rng(80);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 500; ++trial) {
    int m = 1 + static_cast<int>(rng() % 3000);
    auto r = chromatic_bound_II(m, Rational(1 + static_cast<int>(rng() % m)),
                                4.0 * unif(rng), 0.01 + 0.99 * unif(rng),
                                unif(rng));
    CHECK(r.risk_bound_kl <= r.risk_bound_pinsker + 1e-12);
    CHECK(r.risk_bound_kl >= r.empirical_gibbs);
    CHECK(r.risk_bound_kl <= 1.0);
  }
}

TEST_CASE("budgets are monotone in KL, chi*, omega and antitone in delta") {
  std::mt19937_64 rng(81);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 2000; ++trial) {
    int m = 2 + static_cast<int>(rng() % 2000);
    double kl = 4.0 * unif(rng);
    double delta = 0.01 + 0.99 * unif(rng);
    std::int64_t chi_num = 1 + static_cast<std::int64_t>(rng() % (2 * m));
    Rational chi(chi_num, 2);
    if (chi < Rational(1)) chi = Rational(1);
    if (chi > Rational(m)) chi = Rational(m);

    double base = chromatic_bound_II(m, chi, kl, delta, 0.0).kl_budget;
    CHECK(chromatic_bound_II(m, chi, kl + 0.5, delta, 0.0).kl_budget >= base);
    CHECK(chromatic_bound_II(m, chi, kl, std::min(1.0, delta * 1.5), 0.0)
              .kl_budget <= base);
    Rational bigger = chi + Rational(1, 2);
    if (bigger <= Rational(m)) {
      CHECK(chromatic_bound_II(m, bigger, kl, delta, 0.0).kl_budget >=
            base - 1e-15);
    }
  }
}

TEST_CASE("omega to budget map is nondecreasing on [1, m]") {
  std::mt19937_64 rng(82);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int trial = 0; trial < 300; ++trial) {
    int m = 2 + static_cast<int>(rng() % 500);
    double kl = 3.0 * unif(rng);
    double delta = 0.01 + 0.99 * unif(rng);
    double prev = -1.0;
    for (int step = 0; step <= 40; ++step) {
      double omega = 1.0 + (m - 1.0) * step / 40.0;
      double budget =
          omega / m * (kl + std::log((m + omega) / (delta * omega)));
      CHECK(budget >= prev - 1e-12);
      prev = budget;
    }
  }
}
