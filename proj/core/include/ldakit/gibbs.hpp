// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_GIBBS_HPP
#define LDAKIT_GIBBS_HPP

#include <cstdint>
#include <span>
#include <vector>

#include "ldakit/corpus.hpp"
#include "ldakit/grid.hpp"

namespace ldakit {

// Symmetric Dirichlet hyperparameters: one scalar alpha (doc side) and one
// scalar beta (word side).
struct GibbsHyper {
  int num_topics = 0;
  double alpha = 0.0;  // <= 0 means "use the 50/K default"
  double beta = 0.0;   // <= 0 means "use the 0.1 default"
};

GibbsHyper resolve_hyper(GibbsHyper hyper);

// Topic assignments plus the four count tables they imply.
//   nw    : V x K, tokens of word w assigned topic k
//   nwsum : K, tokens assigned topic k
//   nd    : M x K, tokens of doc m assigned topic k
//   ndsum : M, tokens in doc m
struct GibbsState {
  GibbsHyper hyper;
  std::uint64_t seed = 0;
  std::vector<std::vector<int>> z;  // ragged, one entry per token position
  Grid<int> nw;
  std::vector<int> nwsum;
  Grid<int> nd;
  std::vector<int> ndsum;

  int num_topics() const { return hyper.num_topics; }
  int num_terms() const { return static_cast<int>(nw.rows()); }
  int num_docs() const { return static_cast<int>(nd.rows()); }
};

struct CountTables {
  Grid<int> nw;
  std::vector<int> nwsum;
  Grid<int> nd;
  std::vector<int> ndsum;

  friend bool operator==(const CountTables&, const CountTables&) = default;
};

// Tallies implied by a full pass over z; the check route for the
// incrementally maintained tables.
CountTables recount(const Corpus& corpus,
                    const std::vector<std::vector<int>>& z, int num_topics,
                    int num_terms);
bool counts_consistent(const GibbsState& state, const Corpus& corpus);

// Smallest index i with prefix[i] > u01 * prefix[last] (the cumulative
// method). u01 in [0, 1); at least one weight must be positive.
int cumulative_sample(std::span<const double> weights, double u01);

GibbsState init_state(const Corpus& corpus, GibbsHyper hyper,
                      std::uint64_t seed);

// Unnormalized Eq-style full conditional for one token of word `word` in
// doc `doc`. Call with the token's counts already removed from nw, nwsum
// and nd; ndsum stays at the full document length.
void full_conditional(const GibbsState& state, int doc, int word,
                      std::span<double> out);
std::vector<double> full_conditional(const GibbsState& state, int doc,
                                     int word);

// Resamples every token once (decrement, full conditional, cumulative
// draw, increment). `iteration` is the global sweep index feeding the
// RNG stream rule.
void sweep(GibbsState& state, const Corpus& corpus, int iteration);

// init_state + `iterations` serial sweeps numbered from `first_iteration`.
GibbsState train_gibbs(const Corpus& corpus, GibbsHyper hyper, int iterations,
                       std::uint64_t seed);

// theta[m][k] = (nd+alpha)/(ndsum+K alpha), phi[k][w] = (nw+beta)/(nwsum+V beta)
Grid<double> estimate_theta(const GibbsState& state);
Grid<double> estimate_phi(const GibbsState& state);

struct TopicModel {
  Grid<double> theta;  // M x K row-stochastic
  Grid<double> phi;    // K x V row-stochastic
};

TopicModel make_topic_model(const GibbsState& state);

// exp of the per-token negative log likelihood; theta rows must correspond
// 1:1 to the held-out docs.
double perplexity(const Grid<double>& theta, const Grid<double>& phi,
                  const Corpus& heldout);

struct InferOptions {
  int iterations = 20;  // "20 samples suffice" for prediction
  bool strict_vocabulary = false;
};

struct InferResult {
  Grid<double> theta;               // one row per new doc
  std::vector<std::vector<int>> z;  // -1 marks skipped out-of-vocabulary tokens
  long long skipped_tokens = 0;
};

// Samples topics for new docs against the trained counts, which act as
// pseudo-counts and are never modified.
InferResult infer_new(const GibbsState& trained, const Corpus& new_docs,
                      InferOptions options, std::uint64_t seed);

// Memory footprint of a V x K count table.
constexpr double count_table_megabytes(long long num_terms,
                                       long long num_topics,
                                       int bytes_per_counter = 4) {
  return static_cast<double>(num_terms * num_topics * bytes_per_counter) /
         (1024.0 * 1024.0);
}

}  // namespace ldakit

#endif  // LDAKIT_GIBBS_HPP
