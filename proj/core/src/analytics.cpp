// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ldakit {

namespace {

void sort_by_score_desc(RankedList& list) {
  std::stable_sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score > b.score;
    return a.id < b.id;
  });
}

// Min-max map onto [0, 1]; all-equal scores collapse to 0.
void normalize_scores(RankedList& list) {
  if (list.empty()) return;
  double lo = list.front().score, hi = list.front().score;
  for (const auto& item : list) {
    lo = std::min(lo, item.score);
    hi = std::max(hi, item.score);
  }
  for (auto& item : list) {
    item.score = (hi > lo) ? (item.score - lo) / (hi - lo) : 0.0;
  }
}

double kl_divergence(std::span<const double> p, std::span<const double> q,
                     bool strict) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] == 0.0) continue;
    if (q[i] == 0.0) {
      if (strict) {
        throw std::domain_error("distance: KL undefined, q[i]=0 < p[i]");
      }
      return kKlCap;
    }
    sum += p[i] * std::log(p[i] / q[i]);
  }
  return sum;
}

double one_minus_cosine(std::span<const double> p, std::span<const double> q) {
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    pp += p[i] * p[i];
    qq += q[i] * q[i];
  }
  if (pp == 0.0 || qq == 0.0) return 1.0;
  return 1.0 - dot / (std::sqrt(pp) * std::sqrt(qq));
}

double one_minus_pearson(std::span<const double> p, std::span<const double> q) {
  const double n = static_cast<double>(p.size());
  double mp = 0.0, mq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    mp += p[i];
    mq += q[i];
  }
  mp /= n;
  mq /= n;
  double cov = 0.0, vp = 0.0, vq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cov += (p[i] - mp) * (q[i] - mq);
    vp += (p[i] - mp) * (p[i] - mp);
    vq += (q[i] - mq) * (q[i] - mq);
  }
  if (vp == 0.0 || vq == 0.0) return 1.0;
  return 1.0 - cov / (std::sqrt(vp) * std::sqrt(vq));
}

}  // namespace

double distance(std::span<const double> p, std::span<const double> q,
                DistanceMetric metric, bool strict) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("distance: length mismatch");
  }
  if (p.empty()) throw std::invalid_argument("distance: empty input");
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0 || q[i] < 0) {
      throw std::invalid_argument("distance: negative entry");
    }
  }
  switch (metric) {
    case DistanceMetric::kHellingerSq: {
      double sum = 0.0;
      for (std::size_t i = 0; i < p.size(); ++i) {
        const double d = std::sqrt(p[i]) - std::sqrt(q[i]);
        sum += d * d;
      }
      return sum;
    }
    case DistanceMetric::kKl:
      return kl_divergence(p, q, strict);
    case DistanceMetric::kOneMinusCosine:
      return one_minus_cosine(p, q);
    case DistanceMetric::kOneMinusPearson:
      return one_minus_pearson(p, q);
  }
  throw std::invalid_argument("distance: unknown metric");
}

RankedList similar_docs(const Grid<double>& theta, int doc, int top_n) {
  const int M = static_cast<int>(theta.rows());
  if (doc < 0 || doc >= M) {
    throw std::invalid_argument("similar_docs: doc index out of range");
  }
  if (top_n < 1) throw std::invalid_argument("similar_docs: top_n >= 1");
  const std::span<const double> self{theta.row(doc), theta.cols()};

  RankedList all;
  all.reserve(M > 0 ? M - 1 : 0);
  for (int f = 0; f < M; ++f) {
    if (f == doc) continue;
    all.push_back(
        {f, distance(self, {theta.row(f), theta.cols()},
                     DistanceMetric::kHellingerSq)});
  }
  std::stable_sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
    if (a.score != b.score) return a.score < b.score;  // ascending distance
    return a.id < b.id;
  });
  if (static_cast<int>(all.size()) > top_n) all.resize(top_n);
  return all;
}

std::vector<std::pair<std::string, double>> auto_tags(
    std::span<const double> theta_row, const Grid<double>& phi,
    const Vocabulary& vocab, int top_n) {
  const int V = static_cast<int>(phi.cols());
  if (top_n < 0 || top_n > V) {
    throw std::invalid_argument("auto_tags: top_n must be in [0, V]");
  }
  int best_topic = 0;
  for (int k = 1; k < static_cast<int>(theta_row.size()); ++k) {
    if (theta_row[k] > theta_row[best_topic]) best_topic = k;
  }

  RankedList words(V);
  for (int w = 0; w < V; ++w) words[w] = {w, phi(best_topic, w)};
  sort_by_score_desc(words);

  std::vector<std::pair<std::string, double>> tags;
  tags.reserve(top_n);
  for (int i = 0; i < top_n; ++i) {
    tags.emplace_back(vocab.term_of(words[i].id), words[i].score);
  }
  return tags;
}

RankedList topic_rank(const GibbsState& state, TopicRankWeights weights,
                      DistanceMetric metric) {
  if (weights.doc_side < 0 || weights.word_side < 0 ||
      weights.doc_side + weights.word_side <= 0) {
    throw std::invalid_argument("topic_rank: weights must be >= 0, a+b > 0");
  }
  const int K = state.num_topics();
  const int D = state.num_docs();
  const int V = state.num_terms();
  const double alpha = state.hyper.alpha;
  const Grid<double> phi = estimate_phi(state);

  const std::vector<double> doc_uniform(D, 1.0 / D);
  const std::vector<double> word_uniform(V, 1.0 / V);

  RankedList scores(K);
  std::vector<double> topic_doc(D);
  for (int k = 0; k < K; ++k) {
    long long nd_col = 0;
    for (int m = 0; m < D; ++m) nd_col += state.nd(m, k);
    const double denom = static_cast<double>(nd_col) + D * alpha;
    for (int m = 0; m < D; ++m) {
      topic_doc[m] = (state.nd(m, k) + alpha) / denom;
    }
    const double score_doc = distance(topic_doc, doc_uniform, metric);
    const double score_word =
        distance({phi.row(k), phi.cols()}, word_uniform, metric);
    scores[k] = {k, weights.doc_side * score_doc + weights.word_side * score_word};
  }
  sort_by_score_desc(scores);
  return scores;
}

RankedList word_rank(const GibbsState& state, DistanceMetric metric) {
  const int K = state.num_topics();
  const int V = state.num_terms();
  const double beta = state.hyper.beta;
  const std::vector<double> uniform(K, 1.0 / K);

  RankedList scores(V);
  std::vector<double> word_topics(K);
  for (int w = 0; w < V; ++w) {
    long long nw_row = 0;
    for (int k = 0; k < K; ++k) nw_row += state.nw(w, k);
    const double denom = static_cast<double>(nw_row) + K * beta;
    for (int k = 0; k < K; ++k) {
      word_topics[k] = (state.nw(w, k) + beta) / denom;
    }
    scores[w] = {w, distance(word_topics, uniform, metric)};
  }
  normalize_scores(scores);
  sort_by_score_desc(scores);
  return scores;
}

std::vector<double> corpus_topic_prior(const Grid<double>& theta) {
  std::vector<double> prior(theta.cols(), 0.0);
  double total = 0.0;
  for (std::size_t d = 0; d < theta.rows(); ++d) {
    for (std::size_t k = 0; k < theta.cols(); ++k) {
      prior[k] += theta(d, k);
      total += theta(d, k);
    }
  }
  for (auto& p : prior) p /= total;
  return prior;
}

RankedList doc_quality(const GibbsState& state, const TopicModel& model,
                       const Corpus& corpus) {
  const int M = corpus.num_docs();
  const int V = corpus.num_terms;
  const int K = state.num_topics();
  if (static_cast<int>(model.theta.rows()) != M ||
      static_cast<int>(model.phi.cols()) != V) {
    throw std::invalid_argument("doc_quality: state/model/corpus mismatch");
  }

  const std::vector<double> prior = corpus_topic_prior(model.theta);
  std::vector<double> mass(V, 0.0);
  for (int w = 0; w < V; ++w) {
    for (int k = 0; k < K; ++k) mass[w] += prior[k] * model.phi(k, w);
  }

  RankedList scores(M);
  std::vector<double> generation(V);
  for (int m = 0; m < M; ++m) {
    std::fill(generation.begin(), generation.end(), 0.0);
    const Document& doc = corpus.docs[m];
    // First occurrence's sampled topic stands for the word.
    int pos = 0;
    for (int i = 0; i < doc.length(); ++i) {
      const int w = doc.terms[i];
      const int zw = state.z[m][pos];
      generation[w] = model.theta(m, zw) * model.phi(zw, w);
      pos += doc.counts[i];
    }
    const double d_kl = distance(generation, mass, DistanceMetric::kKl);
    const double d_cos =
        distance(generation, mass, DistanceMetric::kOneMinusCosine);
    const double d_pear =
        distance(generation, mass, DistanceMetric::kOneMinusPearson);
    scores[m] = {m, (d_kl + d_cos + d_pear) / 3.0};
  }
  normalize_scores(scores);
  sort_by_score_desc(scores);
  return scores;
}

}  // namespace ldakit
