// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ldakit {

namespace {

std::vector<std::string> read_lines(std::istream& in) {
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> tokens;
  std::istringstream iss(line);
  std::string token;
  while (iss >> token) tokens.push_back(token);
  return tokens;
}

bool is_all_digits(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(),
                     [](unsigned char c) { return std::isdigit(c); });
}

[[noreturn]] void parse_fail(std::size_t line_no, const std::string& what) {
  throw std::runtime_error("line " + std::to_string(line_no) + ": " + what);
}

long long parse_int(const std::string& tok, std::size_t line_no,
                    const char* what) {
  try {
    std::size_t pos = 0;
    const long long value = std::stoll(tok, &pos);
    if (pos != tok.size()) parse_fail(line_no, std::string("bad ") + what);
    return value;
  } catch (const std::invalid_argument&) {
    parse_fail(line_no, std::string("bad ") + what + " '" + tok + "'");
  } catch (const std::out_of_range&) {
    parse_fail(line_no, std::string(what) + " out of range '" + tok + "'");
  }
}

}  // namespace

int Vocabulary::add(const std::string& term) {
  auto [it, inserted] = term_to_id_.try_emplace(term, size());
  if (inserted) id_to_term_.push_back(term);
  return it->second;
}

int Vocabulary::id_of(const std::string& term) const {
  auto it = term_to_id_.find(term);
  return it == term_to_id_.end() ? -1 : it->second;
}

long long Corpus::token_total() const {
  long long total = 0;
  for (const auto& doc : docs) total += doc.total;
  return total;
}

Corpus parse_line_corpus(std::istream& in, Vocabulary& vocab) {
  std::vector<std::string> lines = read_lines(in);

  // Optional document-count header emitted by the reference tooling.
  if (!lines.empty()) {
    const auto head = split_ws(lines.front());
    if (head.size() == 1 && is_all_digits(head.front())) {
      const long long declared = parse_int(head.front(), 1, "document count");
      if (declared == static_cast<long long>(lines.size()) - 1) {
        lines.erase(lines.begin());
      }
    }
  }

  Corpus corpus;
  bool any_nonblank = false;
  for (const auto& line : lines) {
    Document doc;
    std::unordered_map<int, int> slot_of;
    for (const auto& token : split_ws(line)) {
      any_nonblank = true;
      const int id = vocab.add(token);
      auto [it, inserted] = slot_of.try_emplace(id, doc.length());
      if (inserted) {
        doc.terms.push_back(id);
        doc.counts.push_back(1);
      } else {
        ++doc.counts[it->second];
      }
      ++doc.total;
    }
    corpus.docs.push_back(std::move(doc));
  }
  if (!any_nonblank) throw std::runtime_error("empty corpus");
  corpus.num_terms = vocab.size();
  return corpus;
}

std::pair<Corpus, Vocabulary> parse_line_corpus(std::istream& in) {
  Vocabulary vocab;
  Corpus corpus = parse_line_corpus(in, vocab);
  return {std::move(corpus), std::move(vocab)};
}

Corpus parse_sparse_corpus(std::istream& in) {
  Corpus corpus;
  int max_id = -1;
  std::size_t line_no = 0;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) parse_fail(line_no, "expected a document record");

    const long long declared = parse_int(tokens.front(), line_no, "pair count");
    if (declared < 0) parse_fail(line_no, "negative pair count");
    const std::size_t found = tokens.size() - 1;
    if (static_cast<std::size_t>(declared) != found) {
      parse_fail(line_no, "declared " + std::to_string(declared) +
                              " pair" + (declared == 1 ? "" : "s") + ", found " +
                              std::to_string(found));
    }

    Document doc;
    std::unordered_map<int, int> seen;
    for (std::size_t i = 1; i < tokens.size(); ++i) {
      const auto colon = tokens[i].find(':');
      if (colon == std::string::npos) {
        parse_fail(line_no, "expected id:count, got '" + tokens[i] + "'");
      }
      const long long id =
          parse_int(tokens[i].substr(0, colon), line_no, "term id");
      const long long count =
          parse_int(tokens[i].substr(colon + 1), line_no, "count");
      if (id < 0) parse_fail(line_no, "negative term id");
      if (count < 0) parse_fail(line_no, "negative count");
      if (count == 0) parse_fail(line_no, "zero count");
      if (!seen.try_emplace(static_cast<int>(id), 0).second) {
        parse_fail(line_no, "duplicate term id " + std::to_string(id));
      }
      doc.terms.push_back(static_cast<int>(id));
      doc.counts.push_back(static_cast<int>(count));
      doc.total += static_cast<int>(count);
      max_id = std::max(max_id, static_cast<int>(id));
    }
    corpus.docs.push_back(std::move(doc));
  }
  corpus.num_terms = max_id + 1;
  return corpus;
}

void write_sparse_corpus(std::ostream& out, const Corpus& corpus) {
  for (const auto& doc : corpus.docs) {
    out << doc.length();
    for (int i = 0; i < doc.length(); ++i) {
      out << ' ' << doc.terms[i] << ':' << doc.counts[i];
    }
    out << '\n';
  }
}

void write_line_corpus(std::ostream& out, const Corpus& corpus,
                       const Vocabulary& vocab) {
  for (const auto& doc : corpus.docs) {
    bool first = true;
    for (int i = 0; i < doc.length(); ++i) {
      for (int c = 0; c < doc.counts[i]; ++c) {
        if (!first) out << ' ';
        out << vocab.term_of(doc.terms[i]);
        first = false;
      }
    }
    out << '\n';
  }
}

void write_wordmap(std::ostream& out, const Vocabulary& vocab) {
  for (int id = 0; id < vocab.size(); ++id) {
    out << vocab.term_of(id) << ' ' << id << '\n';
  }
}

Vocabulary read_wordmap(std::istream& in) {
  std::vector<std::pair<std::string, long long>> pairs;
  std::size_t line_no = 0;
  long long max_id = -1;
  for (const auto& line : read_lines(in)) {
    ++line_no;
    const auto tokens = split_ws(line);
    if (tokens.empty()) continue;
    if (tokens.size() != 2) parse_fail(line_no, "expected 'term id'");
    const long long id = parse_int(tokens[1], line_no, "term id");
    if (id < 0) parse_fail(line_no, "negative term id");
    pairs.emplace_back(tokens[0], id);
    max_id = std::max(max_id, id);
  }

  if (max_id + 1 != static_cast<long long>(pairs.size())) {
    throw std::runtime_error("wordmap ids are not dense 0.." +
                             std::to_string(pairs.size() - 1));
  }
  std::vector<std::string> terms(pairs.size());
  std::vector<bool> used(pairs.size(), false);
  for (const auto& [term, id] : pairs) {
    if (used[id]) {
      throw std::runtime_error("duplicate id " + std::to_string(id) +
                               " in wordmap");
    }
    used[id] = true;
    terms[id] = term;
  }

  Vocabulary vocab;
  for (const auto& term : terms) {
    if (vocab.id_of(term) != -1) {
      throw std::runtime_error("duplicate term '" + term + "' in wordmap");
    }
    vocab.add(term);
  }
  return vocab;
}

}  // namespace ldakit
