// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_VEM_HPP
#define LDAKIT_VEM_HPP

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ldakit/corpus.hpp"
#include "ldakit/grid.hpp"
#include "ldakit/special.hpp"

namespace ldakit {

// Corpus-level model: log p(w|z=k) rows plus the scalar symmetric alpha.
// Zero-mass entries carry the -100 sentinel for file compatibility;
// normalization holds over the positive-mass entries.
struct VemModel {
  Grid<double> log_beta;  // K x V
  double alpha = 1.0;

  int num_topics() const { return static_cast<int>(log_beta.rows()); }
  int num_terms() const { return static_cast<int>(log_beta.cols()); }
};

// Free variational parameters of one document.
struct DocVariational {
  std::vector<double> gamma;  // K, Dirichlet parameter
  Grid<double> phi;           // unique-terms x K, row-stochastic
};

struct SuffStats {
  Grid<double> class_word;         // K x V
  std::vector<double> class_total; // K
  double alpha_suffstats = 0.0;
  int num_docs = 0;

  SuffStats() = default;
  SuffStats(int num_topics, int num_terms)
      : class_word(num_topics, num_terms), class_total(num_topics, 0.0) {}

  void zero();
};

struct VemSettings {
  int var_max_iter = 20;  // -1 runs variational inference to convergence
  double var_convergence = 1e-6;
  int em_max_iter = 100;
  double em_convergence = 1e-4;
  bool estimate_alpha = true;
};

// settings.txt grammar: "var max iter", "var convergence", "em max iter",
// "em convergence", "alpha [fixed/estimate]". Missing keys keep defaults.
VemSettings parse_settings(std::istream& in);

struct EStepResult {
  DocVariational var;
  double likelihood = 0.0;
  std::vector<double> likelihood_trace;  // one entry per variational iteration
};

// Coordinate ascent on (phi, gamma) for one document against a fixed model.
EStepResult e_step_doc(const Document& doc, const VemModel& model,
                       const VemSettings& settings);

// Five-term variational lower bound, Blei's compute_likelihood shape with a
// symmetric alpha.
double compute_elbo(const Document& doc, const VemModel& model,
                    std::span<const double> gamma, const Grid<double>& phi);

void accumulate_suffstats(SuffStats& ss, const Document& doc,
                          const DocVariational& var);

// MLE of log beta from the sufficient statistics (sentinel -100 on zero
// mass); Newton alpha update when estimate_alpha is set.
void m_step(VemModel& model, const SuffStats& ss, bool estimate_alpha);

struct OptAlphaInfo {
  int iterations = 0;
  double residual = 0.0;
  bool converged = false;
};

// Newton iteration in log alpha; init 100, restart at 10x on non-finite
// iterates, stop at |f'| <= 1e-5 or 1000 iterations.
double opt_alpha(double alpha_suffstats, int num_docs, int num_topics,
                 OptAlphaInfo* info = nullptr);

struct VemInit {
  enum class Mode { kRandom, kSeeded, kFromModel };
  Mode mode = Mode::kRandom;
  std::optional<VemModel> model;  // required for kFromModel
  int num_init = 1;               // seeded docs per topic
};

struct EmTracePoint {
  double likelihood = 0.0;
  double converged = 0.0;  // (old - new) / old, inf on the first iteration
};

// The model EM starts from: seeded/random sufficient statistics pushed
// through one M-step, alpha forced to initial_alpha (or the given model
// for Mode::kFromModel).
VemModel initial_model(const Corpus& corpus, int num_topics,
                       double initial_alpha, const VemInit& init,
                       std::uint64_t seed);

struct RunEmResult {
  VemModel model;
  Grid<double> gammas;  // M x K, final variational Dirichlet parameters
  std::vector<EmTracePoint> trace;
  int var_max_iter_final = 0;  // after any doubling
};

using EmCheckpointFn =
    std::function<void(int iteration, const VemModel&, const Grid<double>&)>;

RunEmResult run_em(const Corpus& corpus, int num_topics, double initial_alpha,
                   const VemSettings& settings, const VemInit& init,
                   std::uint64_t seed, int num_threads = 1,
                   const EmCheckpointFn& on_iteration = nullptr,
                   std::ostream* verbose = nullptr);

struct VemInferResult {
  std::vector<DocVariational> docs;
  std::vector<double> likelihoods;

  Grid<double> gammas() const;
};

// Fresh gamma per document against a trained, unmodified model.
VemInferResult vem_infer(const VemModel& model, const Corpus& corpus,
                         const VemSettings& settings);

}  // namespace ldakit

#endif  // LDAKIT_VEM_HPP
