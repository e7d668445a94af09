// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_SPECIAL_HPP
#define LDAKIT_SPECIAL_HPP

namespace ldakit {

// Log-gamma, its first derivative (digamma) and second derivative
// (trigamma), for x > 0. digamma/trigamma use a recurrence shift to
// x >= 10 followed by the asymptotic Bernoulli series.
double lgamma(double x);
double digamma(double x);
double trigamma(double x);

// log(a + b) given log a and log b. -inf inputs stand for zero mass.
double log_sum(double log_a, double log_b);

}  // namespace ldakit

#endif  // LDAKIT_SPECIAL_HPP
