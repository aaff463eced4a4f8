#pragma once

#include <cstdint>

namespace cpb::klcore {

// Empirical rate together with a kl budget in nats. kl_inverse(b.q, b.epsilon)
// is the largest admissible excess of the true rate over the empirical one.
struct KlBudget {
  double q = 0.0;        // empirical rate, in [0, 1]
  double epsilon = 0.0;  // nonnegative budget, nats

  KlBudget() = default;
  KlBudget(double q_, double epsilon_);
};

// kl(q||p) between Bernoulli(q) and Bernoulli(p), with 0 ln 0 := 0.
// Returns +infinity when p is 0 or 1 and q disagrees.
double kl_bernoulli(double q, double p);

// Largest t in [0, 1-q) with kl(q||q+t) <= epsilon, by bisection
// (absolute tolerance 1e-12 on t, at most 200 iterations). q+t is clamped
// to 1 - 1e-15 when epsilon exceeds the reachable range; q = 1 gives 0.
double kl_inverse(double q, double epsilon);

// sqrt(epsilon/2), clamped so q + t <= 1. Always >= kl_inverse(q, epsilon).
double pinsker_inverse(double q, double epsilon);

// E exp(m kl(K/m||p)) for K ~ Binomial(m, p). After simplification the sum
// is sum_k C(m,k) (k/m)^k (1-k/m)^(m-k) with 0^0 := 1, independent of p;
// terms are accumulated from log-gamma to keep m up to 10^4 in range.
// Always <= m + 1.
double binomial_moment(int m, double p);

}  // namespace cpb::klcore
