// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_SRC_SAMPLE_KERNEL_HPP
#define LDAKIT_SRC_SAMPLE_KERNEL_HPP

#include <span>
#include <stdexcept>
#include <vector>

#include "ldakit/gibbs.hpp"
#include "ldakit/rng.hpp"

namespace ldakit::detail {

// Eq-style full conditional over whatever count tables the caller owns
// (global, worker copy, or partition). Counts must already exclude the
// token being resampled; ndsum_minus is the doc total minus one.
inline void fc_weights(const int* nw_row, const int* nwsum, const int* nd_row,
                       int ndsum_minus, int num_topics, int num_terms,
                       double alpha, double beta, double* out) {
  const double vbeta = num_terms * beta;
  const double doc_denom = ndsum_minus + num_topics * alpha;
  for (int k = 0; k < num_topics; ++k) {
    if (nw_row[k] < 0 || nwsum[k] < 0 || nd_row[k] < 0) {
      throw std::logic_error(
          "full_conditional: negative count, missed decrement/increment");
    }
    out[k] = (nw_row[k] + beta) / (nwsum[k] + vbeta) * (nd_row[k] + alpha) /
             doc_denom;
  }
}

// The -1 -> reassign -> +1 exchange for one token.
inline int resample_token(int old_topic, int num_topics, int num_terms,
                          double alpha, double beta, int* nw_row, int* nwsum,
                          int* nd_row, int ndsum_m,
                          std::vector<double>& weights, Rng& rng) {
  --nw_row[old_topic];
  --nwsum[old_topic];
  --nd_row[old_topic];
  fc_weights(nw_row, nwsum, nd_row, ndsum_m - 1, num_topics, num_terms, alpha,
             beta, weights.data());
  const int new_topic = cumulative_sample(weights, rng.next_double());
  ++nw_row[new_topic];
  ++nwsum[new_topic];
  ++nd_row[new_topic];
  return new_topic;
}

// Applies fn(position_index, word) to every token of the doc in expansion
// order (each unique term repeated count times).
template <typename Fn>
inline void for_each_token(const Document& doc, Fn&& fn) {
  int pos = 0;
  for (int i = 0; i < doc.length(); ++i) {
    for (int c = 0; c < doc.counts[i]; ++c) {
      fn(pos++, doc.terms[i]);
    }
  }
}

}  // namespace ldakit::detail

#endif  // LDAKIT_SRC_SAMPLE_KERNEL_HPP
