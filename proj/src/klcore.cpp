#include "cpb/klcore.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace cpb::klcore {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kOneMinus = 1.0 - 1e-15;

void check_rate(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1]");
  }
}

void check_budget(double epsilon) {
  if (!(epsilon >= 0.0)) {
    throw std::domain_error("epsilon must be nonnegative");
  }
}

}  // namespace

KlBudget::KlBudget(double q_, double epsilon_) : q(q_), epsilon(epsilon_) {
  check_rate(q, "q");
  check_budget(epsilon);
}

double kl_bernoulli(double q, double p) {
  check_rate(q, "q");
  check_rate(p, "p");
  double total = 0.0;
  if (q > 0.0) {
    if (p == 0.0) return kInf;
    total += q * std::log(q / p);
  }
  if (q < 1.0) {
    if (p == 1.0) return kInf;
    total += (1.0 - q) * std::log((1.0 - q) / (1.0 - p));
  }
  return total;
}

double kl_inverse(double q, double epsilon) {
  check_rate(q, "q");
  check_budget(epsilon);
  if (epsilon == 0.0 || q >= kOneMinus) return 0.0;

  const double hi_max = kOneMinus - q;
  if (kl_bernoulli(q, kOneMinus) <= epsilon) return hi_max;

  double lo = 0.0;
  double hi = hi_max;
  for (int it = 0; it < 200 && hi - lo > 1e-12; ++it) {
    double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(q, q + mid) < epsilon) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

double pinsker_inverse(double q, double epsilon) {
  check_rate(q, "q");
  check_budget(epsilon);
  double t = std::sqrt(epsilon / 2.0);
  return std::min(t, 1.0 - q);
}

double binomial_moment(int m, double p) {
  if (m < 1 || m > 10000) {
    throw std::domain_error("binomial_moment: m must lie in [1, 10000]");
  }
  check_rate(p, "p");
  // k = 0 and k = m both contribute exactly 1 (0^0 = 1 convention).
  double sum = 2.0;
  const double md = static_cast<double>(m);
  const double lg_m1 = std::lgamma(md + 1.0);
  for (int k = 1; k < m; ++k) {
    const double kd = static_cast<double>(k);
    double log_term = lg_m1 - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0)
                      + kd * std::log(kd / md)
                      + (md - kd) * std::log(1.0 - kd / md);
    sum += std::exp(log_term);
  }
  return sum;
}

}  // namespace cpb::klcore
