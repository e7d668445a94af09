// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_MODEL_IO_HPP
#define LDAKIT_MODEL_IO_HPP

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "ldakit/corpus.hpp"
#include "ldakit/gibbs.hpp"
#include "ldakit/grid.hpp"
#include "ldakit/vem.hpp"

namespace ldakit {

// --- Gibbs model family -------------------------------------------------

// Per doc one line of "wordid:topicid" pairs, one per token in corpus
// expansion order.
void write_tassign(std::ostream& out, const Corpus& corpus,
                   const std::vector<std::vector<int>>& z);
std::vector<std::vector<int>> read_tassign(std::istream& in,
                                           const Corpus& corpus);

// Rebuilds all four count tables from a tassign file.
GibbsState state_from_tassign(std::istream& in, const Corpus& corpus,
                              GibbsHyper hyper, std::uint64_t seed);

// Whitespace-separated decimal matrix, `precision` fractional digits on
// write, any whitespace accepted on read. Ragged rows are an error.
void write_matrix(std::ostream& out, const Grid<double>& matrix,
                  int precision = 6);
Grid<double> read_matrix(std::istream& in);

// "Topic {k}th:" header, then up to top_n phi-descending "term prob" lines.
// Returns the per-topic count actually written (top_n clamped to V).
int write_twords(std::ostream& out, const Grid<double>& phi,
                 const Vocabulary& vocab, int top_n);

// Key-value metadata for resumable Gibbs models.
struct GibbsMeta {
  double alpha = 0.0;
  double beta = 0.0;
  int num_topics = 0;
  int num_docs = 0;
  int num_terms = 0;
  int iterations = 0;  // sweeps completed so far (global index)
  std::uint64_t seed = 0;
};

void write_gibbs_meta(std::ostream& out, const GibbsMeta& meta);
GibbsMeta read_gibbs_meta(std::istream& in);

// --- Variational EM model family ----------------------------------------

void write_vem_beta(std::ostream& out, const VemModel& model);
void write_vem_other(std::ostream& out, const VemModel& model);

// Writes <prefix>.beta, <prefix>.gamma and <prefix>.other.
void write_vem_model(const VemModel& model, const Grid<double>& gammas,
                     const std::string& prefix);
// Writes <prefix>.beta and <prefix>.other only (the pre-training "000"
// checkpoint has no gammas yet).
void write_vem_model(const VemModel& model, const std::string& prefix);

// Reads <prefix>.beta and <prefix>.other; gammas are never loaded.
VemModel load_vem_model(const std::string& prefix);
VemModel read_vem_model(std::istream& beta_in, std::istream& other_in);

// Per doc: zero-padded unique-term count, then "wordid:argmax-topic" pairs
// in %04d:%02d fields (wider ids/topics widen the field).
void write_word_assignments(std::ostream& out, const Corpus& corpus,
                            const std::vector<DocVariational>& docs);

// Two columns: likelihood ("%10.10f") and converged ("%5.5e", "inf" on the
// first iteration).
void write_likelihood_trace(std::ostream& out,
                            std::span<const EmTracePoint> trace);

// One "%5.5f" likelihood per line (the <name>-lda-lhood.dat format).
void write_doc_likelihoods(std::ostream& out, std::span<const double> values);

}  // namespace ldakit

#endif  // LDAKIT_MODEL_IO_HPP
