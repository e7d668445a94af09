// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_CORPUS_HPP
#define LDAKIT_CORPUS_HPP

#include <iosfwd>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace ldakit {

// Bijective term <-> id map with dense ids 0..V-1.
class Vocabulary {
 public:
  int size() const { return static_cast<int>(id_to_term_.size()); }

  // Returns the existing id or appends the term in first-seen order.
  int add(const std::string& term);

  // -1 when the term is unknown.
  int id_of(const std::string& term) const;
  const std::string& term_of(int id) const { return id_to_term_.at(id); }

  const std::vector<std::string>& terms() const { return id_to_term_; }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.id_to_term_ == b.id_to_term_;
  }

 private:
  std::unordered_map<std::string, int> term_to_id_;
  std::vector<std::string> id_to_term_;
};

// Bag-of-words document: unique term ids with positive counts.
struct Document {
  std::vector<int> terms;
  std::vector<int> counts;
  int total = 0;  // token count, sum of counts

  int length() const { return static_cast<int>(terms.size()); }

  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::vector<Document> docs;
  int num_terms = 0;  // V

  int num_docs() const { return static_cast<int>(docs.size()); }
  long long token_total() const;

  friend bool operator==(const Corpus&, const Corpus&) = default;
};

// One whitespace-tokenized document per line; repeated tokens are folded
// into (term, count) pairs in first-seen order. New terms extend `vocab`.
// A leading line holding a single integer equal to the number of remaining
// lines is treated as the optional document-count header and skipped.
// Blank lines become empty documents; a corpus with no non-blank document
// is an error.
Corpus parse_line_corpus(std::istream& in, Vocabulary& vocab);
std::pair<Corpus, Vocabulary> parse_line_corpus(std::istream& in);

// "[L] [id]:[count] ..." with L pairs per line; V = 1 + max id seen.
Corpus parse_sparse_corpus(std::istream& in);

void write_sparse_corpus(std::ostream& out, const Corpus& corpus);
void write_line_corpus(std::ostream& out, const Corpus& corpus,
                       const Vocabulary& vocab);

// One "term id" pair per line, written in id order.
void write_wordmap(std::ostream& out, const Vocabulary& vocab);
Vocabulary read_wordmap(std::istream& in);

}  // namespace ldakit

#endif  // LDAKIT_CORPUS_HPP
