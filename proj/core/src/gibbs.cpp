// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <stdexcept>

#include "ldakit/rng.hpp"
#include "sample_kernel.hpp"

namespace ldakit {

GibbsHyper resolve_hyper(GibbsHyper hyper) {
  if (hyper.num_topics < 1) {
    throw std::invalid_argument("num_topics must be >= 1");
  }
  if (hyper.alpha <= 0.0) hyper.alpha = 50.0 / hyper.num_topics;
  if (hyper.beta <= 0.0) hyper.beta = 0.1;
  return hyper;
}

CountTables recount(const Corpus& corpus,
                    const std::vector<std::vector<int>>& z, int num_topics,
                    int num_terms) {
  const int num_docs = corpus.num_docs();
  if (static_cast<int>(z.size()) != num_docs) {
    throw std::invalid_argument("recount: z/corpus doc count mismatch");
  }
  CountTables t;
  t.nw = Grid<int>(num_terms, num_topics);
  t.nwsum.assign(num_topics, 0);
  t.nd = Grid<int>(num_docs, num_topics);
  t.ndsum.assign(num_docs, 0);
  for (int m = 0; m < num_docs; ++m) {
    const Document& doc = corpus.docs[m];
    if (static_cast<int>(z[m].size()) != doc.total) {
      throw std::invalid_argument("recount: z length mismatch in doc " +
                                  std::to_string(m));
    }
    detail::for_each_token(doc, [&](int pos, int word) {
      const int k = z[m][pos];
      if (k < 0 || k >= num_topics) {
        throw std::invalid_argument("recount: topic id out of range");
      }
      ++t.nw(word, k);
      ++t.nwsum[k];
      ++t.nd(m, k);
      ++t.ndsum[m];
    });
  }
  return t;
}

bool counts_consistent(const GibbsState& state, const Corpus& corpus) {
  const CountTables t =
      recount(corpus, state.z, state.num_topics(), state.num_terms());
  return t.nw == state.nw && t.nwsum == state.nwsum && t.nd == state.nd &&
         t.ndsum == state.ndsum;
}

int cumulative_sample(std::span<const double> weights, double u01) {
  if (weights.empty()) {
    throw std::invalid_argument("cumulative_sample: empty weights");
  }
  if (!(u01 >= 0.0 && u01 < 1.0)) {
    throw std::invalid_argument("cumulative_sample: u01 outside [0,1)");
  }
  double total = 0.0;
  for (const double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw std::invalid_argument("cumulative_sample: negative weight");
    }
    total += w;
  }
  if (total <= 0.0) {
    throw std::domain_error("cumulative_sample: degenerate distribution");
  }
  const double threshold = u01 * total;
  double prefix = 0.0;
  const int last = static_cast<int>(weights.size()) - 1;
  for (int i = 0; i < last; ++i) {
    prefix += weights[i];
    if (prefix > threshold) return i;
  }
  return last;
}

GibbsState init_state(const Corpus& corpus, GibbsHyper hyper,
                      std::uint64_t seed) {
  hyper = resolve_hyper(hyper);
  const int K = hyper.num_topics;
  const int V = corpus.num_terms;
  const int M = corpus.num_docs();

  GibbsState state;
  state.hyper = hyper;
  state.seed = seed;
  state.z.resize(M);
  state.nw = Grid<int>(V, K);
  state.nwsum.assign(K, 0);
  state.nd = Grid<int>(M, K);
  state.ndsum.assign(M, 0);

  Rng rng(derive_stream(seed, StreamPhase::kInit));
  for (int m = 0; m < M; ++m) {
    const Document& doc = corpus.docs[m];
    state.z[m].resize(doc.total);
    detail::for_each_token(doc, [&](int pos, int word) {
      const int k = static_cast<int>(rng.next_below(K));
      state.z[m][pos] = k;
      ++state.nw(word, k);
      ++state.nwsum[k];
      ++state.nd(m, k);
      ++state.ndsum[m];
    });
  }
  return state;
}

void full_conditional(const GibbsState& state, int doc, int word,
                      std::span<double> out) {
  if (static_cast<int>(out.size()) != state.num_topics()) {
    throw std::invalid_argument("full_conditional: bad output length");
  }
  detail::fc_weights(state.nw.row(word), state.nwsum.data(), state.nd.row(doc),
                     state.ndsum[doc] - 1, state.num_topics(),
                     state.num_terms(), state.hyper.alpha, state.hyper.beta,
                     out.data());
}

std::vector<double> full_conditional(const GibbsState& state, int doc,
                                     int word) {
  std::vector<double> out(state.num_topics());
  full_conditional(state, doc, word, out);
  return out;
}

void sweep(GibbsState& state, const Corpus& corpus, int iteration) {
  const int K = state.num_topics();
  const int V = state.num_terms();
  Rng rng(derive_stream(state.seed, StreamPhase::kSweep,
                        static_cast<std::uint64_t>(iteration)));
  std::vector<double> weights(K);
  for (int m = 0; m < corpus.num_docs(); ++m) {
    const Document& doc = corpus.docs[m];
    detail::for_each_token(doc, [&](int pos, int word) {
      state.z[m][pos] = detail::resample_token(
          state.z[m][pos], K, V, state.hyper.alpha, state.hyper.beta,
          state.nw.row(word), state.nwsum.data(), state.nd.row(m),
          state.ndsum[m], weights, rng);
    });
  }
}

GibbsState train_gibbs(const Corpus& corpus, GibbsHyper hyper, int iterations,
                       std::uint64_t seed) {
  GibbsState state = init_state(corpus, hyper, seed);
  for (int t = 0; t < iterations; ++t) sweep(state, corpus, t);
  return state;
}

Grid<double> estimate_theta(const GibbsState& state) {
  const int M = state.num_docs();
  const int K = state.num_topics();
  const double alpha = state.hyper.alpha;
  Grid<double> theta(M, K);
  for (int m = 0; m < M; ++m) {
    const double denom = state.ndsum[m] + K * alpha;
    for (int k = 0; k < K; ++k) {
      theta(m, k) = (state.nd(m, k) + alpha) / denom;
    }
  }
  return theta;
}

Grid<double> estimate_phi(const GibbsState& state) {
  const int V = state.num_terms();
  const int K = state.num_topics();
  const double beta = state.hyper.beta;
  Grid<double> phi(K, V);
  for (int k = 0; k < K; ++k) {
    const double denom = state.nwsum[k] + V * beta;
    for (int w = 0; w < V; ++w) {
      phi(k, w) = (state.nw(w, k) + beta) / denom;
    }
  }
  return phi;
}

TopicModel make_topic_model(const GibbsState& state) {
  return {estimate_theta(state), estimate_phi(state)};
}

double perplexity(const Grid<double>& theta, const Grid<double>& phi,
                  const Corpus& heldout) {
  if (theta.rows() != static_cast<std::size_t>(heldout.num_docs())) {
    throw std::invalid_argument(
        "perplexity: theta rows must match held-out docs");
  }
  const int K = static_cast<int>(phi.rows());
  if (theta.cols() != static_cast<std::size_t>(K)) {
    throw std::invalid_argument("perplexity: theta/phi topic mismatch");
  }
  double log_prob = 0.0;
  long long tokens = 0;
  for (int m = 0; m < heldout.num_docs(); ++m) {
    const Document& doc = heldout.docs[m];
    for (int i = 0; i < doc.length(); ++i) {
      const int w = doc.terms[i];
      if (w < 0 || static_cast<std::size_t>(w) >= phi.cols()) {
        throw std::invalid_argument("perplexity: token id outside vocabulary");
      }
      double p = 0.0;
      for (int k = 0; k < K; ++k) p += theta(m, k) * phi(k, w);
      if (!(p > 0.0)) {
        throw std::domain_error("perplexity: zero token probability");
      }
      log_prob += doc.counts[i] * std::log(p);
      tokens += doc.counts[i];
    }
  }
  if (tokens == 0) {
    throw std::invalid_argument("perplexity: held-out corpus has no tokens");
  }
  return std::exp(-log_prob / static_cast<double>(tokens));
}

InferResult infer_new(const GibbsState& trained, const Corpus& new_docs,
                      InferOptions options, std::uint64_t seed) {
  const int K = trained.num_topics();
  const int V = trained.num_terms();
  const int M = new_docs.num_docs();
  const double alpha = trained.hyper.alpha;
  const double beta = trained.hyper.beta;

  if (options.strict_vocabulary) {
    std::set<int> offending;
    for (const auto& doc : new_docs.docs) {
      for (const int w : doc.terms) {
        if (w < 0 || w >= V) offending.insert(w);
      }
    }
    if (!offending.empty()) {
      std::ostringstream msg;
      msg << "infer_new: vocabulary mismatch, term ids";
      for (const int w : offending) msg << ' ' << w;
      throw std::invalid_argument(msg.str());
    }
  }

  Grid<int> new_nw(V, K);
  std::vector<int> new_nwsum(K, 0);
  Grid<int> new_nd(M, K);
  std::vector<int> new_ndsum(M, 0);
  InferResult result;
  result.z.resize(M);

  Rng rng(derive_stream(seed, StreamPhase::kInfer));
  for (int m = 0; m < M; ++m) {
    const Document& doc = new_docs.docs[m];
    result.z[m].assign(doc.total, -1);
    detail::for_each_token(doc, [&](int pos, int word) {
      if (word < 0 || word >= V) {
        ++result.skipped_tokens;
        return;
      }
      const int k = static_cast<int>(rng.next_below(K));
      result.z[m][pos] = k;
      ++new_nw(word, k);
      ++new_nwsum[k];
      ++new_nd(m, k);
      ++new_ndsum[m];
    });
  }

  std::vector<double> weights(K);
  const double vbeta = V * beta;
  for (int iter = 0; iter < options.iterations; ++iter) {
    for (int m = 0; m < M; ++m) {
      const Document& doc = new_docs.docs[m];
      const double doc_denom = new_ndsum[m] - 1 + K * alpha;
      detail::for_each_token(doc, [&](int pos, int word) {
        const int old_k = result.z[m][pos];
        if (old_k < 0) return;  // skipped out-of-vocabulary token
        --new_nw(word, old_k);
        --new_nwsum[old_k];
        --new_nd(m, old_k);
        for (int k = 0; k < K; ++k) {
          weights[k] = (trained.nw(word, k) + new_nw(word, k) + beta) /
                       (trained.nwsum[k] + new_nwsum[k] + vbeta) *
                       (new_nd(m, k) + alpha) / doc_denom;
        }
        const int new_k = cumulative_sample(weights, rng.next_double());
        result.z[m][pos] = new_k;
        ++new_nw(word, new_k);
        ++new_nwsum[new_k];
        ++new_nd(m, new_k);
      });
    }
  }

  result.theta = Grid<double>(M, K);
  for (int m = 0; m < M; ++m) {
    const double denom = new_ndsum[m] + K * alpha;
    for (int k = 0; k < K; ++k) {
      result.theta(m, k) = (new_nd(m, k) + alpha) / denom;
    }
  }
  return result;
}

}  // namespace ldakit
