// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace ldakit {

namespace {

void require_positive(double x, const char* fn) {
  if (!(x > 0.0)) {
    throw std::domain_error(std::string(fn) + ": requires x > 0, got " +
                            std::to_string(x));
  }
}

constexpr double kShift = 10.0;

}  // namespace

double lgamma(double x) {
  require_positive(x, "lgamma");
  return std::lgamma(x);
}

double digamma(double x) {
  require_positive(x, "digamma");
  double acc = 0.0;
  while (x < kShift) {
    acc -= 1.0 / x;
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi(x) ~ ln x - 1/(2x) - 1/(12x^2) + 1/(120x^4) - 1/(252x^6)
  //          + 1/(240x^8) - 1/(132x^10)
  const double series =
      inv2 * (1.0 / 12 -
              inv2 * (1.0 / 120 -
                      inv2 * (1.0 / 252 - inv2 * (1.0 / 240 - inv2 / 132))));
  return acc + std::log(x) - 0.5 * inv - series;
}

double trigamma(double x) {
  require_positive(x, "trigamma");
  double acc = 0.0;
  while (x < kShift) {
    acc += 1.0 / (x * x);
    x += 1.0;
  }
  const double inv = 1.0 / x;
  const double inv2 = inv * inv;
  // psi'(x) ~ 1/x + 1/(2x^2) + 1/(6x^3) - 1/(30x^5) + 1/(42x^7)
  //           - 1/(30x^9) + 5/(66x^11)
  const double series =
      inv *
      (1.0 +
       inv * (0.5 + inv * (1.0 / 6 -
                           inv2 * (1.0 / 30 -
                                   inv2 * (1.0 / 42 -
                                           inv2 * (1.0 / 30 - inv2 * 5.0 / 66))))));
  return acc + series;
}

double log_sum(double log_a, double log_b) {
  const double neg_inf = -std::numeric_limits<double>::infinity();
  if (log_a == neg_inf) return log_b;
  if (log_b == neg_inf) return log_a;
  if (log_a < log_b) std::swap(log_a, log_b);
  return log_a + std::log1p(std::exp(log_b - log_a));
}

}  // namespace ldakit
