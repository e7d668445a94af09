// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_ANALYTICS_HPP
#define LDAKIT_ANALYTICS_HPP

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ldakit/corpus.hpp"
#include "ldakit/gibbs.hpp"
#include "ldakit/grid.hpp"

namespace ldakit {

enum class DistanceMetric {
  kHellingerSq,      // sum (sqrt p - sqrt q)^2, the 1/sqrt(2) constant dropped
  kKl,               // sum p ln(p/q) with 0 ln 0 = 0
  kOneMinusCosine,
  kOneMinusPearson,  // 1 on zero-variance input, to keep rankings total
};

// Lenient KL caps a p>0,q==0 term's distance at this constant instead of
// +inf so rankings stay total; strict mode throws.
inline constexpr double kKlCap = 1e9;

double distance(std::span<const double> p, std::span<const double> q,
                DistanceMetric metric, bool strict = false);

struct ScoredItem {
  int id = 0;
  double score = 0.0;

  friend bool operator==(const ScoredItem&, const ScoredItem&) = default;
};

// Sorted by score (descending for scores, ascending for distances); ties
// break toward the lowest id.
using RankedList = std::vector<ScoredItem>;

// Top-n docs nearest to doc d by the theta-row Hellinger-squared distance,
// ascending, d itself excluded.
RankedList similar_docs(const Grid<double>& theta, int doc, int top_n);

// Top-n words of the doc's argmax topic, phi-descending.
std::vector<std::pair<std::string, double>> auto_tags(
    std::span<const double> theta_row, const Grid<double>& phi,
    const Vocabulary& vocab, int top_n);

struct TopicRankWeights {
  double doc_side = 0.5;
  double word_side = 0.5;
};

// Distinctiveness score per topic: distance of the topic->doc distribution
// to the uniform background plus distance of the topic->word distribution
// to uniform, combined as a*doc + b*word. Higher = more distinctive.
RankedList topic_rank(const GibbsState& state, TopicRankWeights weights = {},
                      DistanceMetric metric = DistanceMetric::kHellingerSq);

// Per-word distance of its topic distribution to uniform 1/K, min-max
// normalized to [0, 1]. A degenerate corpus (all words equal) maps to 0.
RankedList word_rank(const GibbsState& state,
                     DistanceMetric metric = DistanceMetric::kHellingerSq);

// Corpus-level topic prior p(k) = sum_d theta[d][k] / sum_d sum_z theta[d][z].
std::vector<double> corpus_topic_prior(const Grid<double>& theta);

// Per-doc generation vector vs the corpus mass vector, scored by the mean
// of KL, 1-cosine and 1-Pearson distances, min-max normalized to [0, 1].
RankedList doc_quality(const GibbsState& state, const TopicModel& model,
                       const Corpus& corpus);

}  // namespace ldakit

#endif  // LDAKIT_ANALYTICS_HPP
