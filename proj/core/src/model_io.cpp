// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/model_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ldakit {

namespace {

std::string fixed(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

[[noreturn]] void fail(const std::string& what) {
  throw std::runtime_error(what);
}

std::ifstream open_or_fail(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open " + path);
  return in;
}

std::ofstream create_or_fail(const std::string& path) {
  std::ofstream out(path);
  if (!out) fail("cannot write " + path);
  return out;
}

}  // namespace

void write_tassign(std::ostream& out, const Corpus& corpus,
                   const std::vector<std::vector<int>>& z) {
  if (z.size() != corpus.docs.size()) {
    fail("write_tassign: z/corpus doc count mismatch");
  }
  for (std::size_t m = 0; m < corpus.docs.size(); ++m) {
    const Document& doc = corpus.docs[m];
    if (static_cast<int>(z[m].size()) != doc.total) {
      fail("write_tassign: z length mismatch in doc " + std::to_string(m));
    }
    int pos = 0;
    for (int i = 0; i < doc.length(); ++i) {
      for (int c = 0; c < doc.counts[i]; ++c, ++pos) {
        if (pos > 0) out << ' ';
        out << doc.terms[i] << ':' << z[m][pos];
      }
    }
    out << '\n';
  }
}

std::vector<std::vector<int>> read_tassign(std::istream& in,
                                           const Corpus& corpus) {
  std::vector<std::vector<int>> z;
  std::string line;
  std::size_t m = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (m >= corpus.docs.size()) {
      fail("read_tassign: more lines than documents");
    }
    const Document& doc = corpus.docs[m];
    std::vector<int> doc_z;
    doc_z.reserve(doc.total);
    std::istringstream iss(line);
    std::string pair;
    int pos = 0;
    int slot = 0, remaining = 0;
    while (iss >> pair) {
      const auto colon = pair.find(':');
      if (colon == std::string::npos) {
        fail("read_tassign: expected wordid:topicid, got '" + pair + "'");
      }
      const int word = std::stoi(pair.substr(0, colon));
      const int topic = std::stoi(pair.substr(colon + 1));
      if (remaining == 0) {
        if (slot >= doc.length()) {
          fail("read_tassign: token count mismatch in doc " +
               std::to_string(m));
        }
        remaining = doc.counts[slot];
      }
      if (word != doc.terms[slot]) {
        fail("read_tassign: word id mismatch in doc " + std::to_string(m) +
             " at position " + std::to_string(pos));
      }
      if (--remaining == 0) ++slot;
      doc_z.push_back(topic);
      ++pos;
    }
    if (pos != doc.total) {
      fail("read_tassign: token count mismatch in doc " + std::to_string(m) +
           ": expected " + std::to_string(doc.total) + ", got " +
           std::to_string(pos));
    }
    z.push_back(std::move(doc_z));
    ++m;
  }
  if (m != corpus.docs.size()) {
    fail("read_tassign: fewer lines than documents");
  }
  return z;
}

GibbsState state_from_tassign(std::istream& in, const Corpus& corpus,
                              GibbsHyper hyper, std::uint64_t seed) {
  hyper = resolve_hyper(hyper);
  GibbsState state;
  state.hyper = hyper;
  state.seed = seed;
  state.z = read_tassign(in, corpus);
  CountTables tables =
      recount(corpus, state.z, hyper.num_topics, corpus.num_terms);
  state.nw = std::move(tables.nw);
  state.nwsum = std::move(tables.nwsum);
  state.nd = std::move(tables.nd);
  state.ndsum = std::move(tables.ndsum);
  return state;
}

void write_matrix(std::ostream& out, const Grid<double>& matrix,
                  int precision) {
  for (std::size_t r = 0; r < matrix.rows(); ++r) {
    for (std::size_t c = 0; c < matrix.cols(); ++c) {
      if (c > 0) out << ' ';
      out << fixed(matrix(r, c), precision);
    }
    out << '\n';
  }
}

Grid<double> read_matrix(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream iss(line);
    std::vector<double> row;
    double value;
    while (iss >> value) row.push_back(value);
    if (row.empty()) continue;
    if (!rows.empty() && row.size() != rows.front().size()) {
      fail("read_matrix: ragged row " + std::to_string(rows.size() + 1));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) return {};
  Grid<double> matrix(rows.size(), rows.front().size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    std::copy(rows[r].begin(), rows[r].end(), matrix.row(r));
  }
  return matrix;
}

int write_twords(std::ostream& out, const Grid<double>& phi,
                 const Vocabulary& vocab, int top_n) {
  const int V = static_cast<int>(phi.cols());
  if (vocab.size() != V) fail("write_twords: vocabulary/phi size mismatch");
  const int n = std::min(top_n, V);

  std::vector<int> order(V);
  for (int k = 0; k < static_cast<int>(phi.rows()); ++k) {
    out << "Topic " << k << "th:\n";
    for (int w = 0; w < V; ++w) order[w] = w;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      if (phi(k, a) != phi(k, b)) return phi(k, a) > phi(k, b);
      return a < b;
    });
    for (int i = 0; i < n; ++i) {
      out << '\t' << vocab.term_of(order[i]) << ' '
          << fixed(phi(k, order[i]), 6) << '\n';
    }
  }
  return n;
}

void write_gibbs_meta(std::ostream& out, const GibbsMeta& meta) {
  out << "alpha " << fixed(meta.alpha, 10) << '\n'
      << "beta " << fixed(meta.beta, 10) << '\n'
      << "num_topics " << meta.num_topics << '\n'
      << "num_docs " << meta.num_docs << '\n'
      << "num_terms " << meta.num_terms << '\n'
      << "iterations " << meta.iterations << '\n'
      << "seed " << meta.seed << '\n';
}

GibbsMeta read_gibbs_meta(std::istream& in) {
  GibbsMeta meta;
  bool saw[7] = {};
  std::string key;
  while (in >> key) {
    if (key == "alpha") {
      in >> meta.alpha;
      saw[0] = true;
    } else if (key == "beta") {
      in >> meta.beta;
      saw[1] = true;
    } else if (key == "num_topics") {
      in >> meta.num_topics;
      saw[2] = true;
    } else if (key == "num_docs") {
      in >> meta.num_docs;
      saw[3] = true;
    } else if (key == "num_terms") {
      in >> meta.num_terms;
      saw[4] = true;
    } else if (key == "iterations") {
      in >> meta.iterations;
      saw[5] = true;
    } else if (key == "seed") {
      in >> meta.seed;
      saw[6] = true;
    } else {
      fail("gibbs meta: unknown key '" + key + "'");
    }
    if (!in) fail("gibbs meta: missing value for '" + key + "'");
  }
  for (const bool s : saw) {
    if (!s) fail("gibbs meta: missing key");
  }
  return meta;
}

void write_vem_beta(std::ostream& out, const VemModel& model) {
  write_matrix(out, model.log_beta, 10);
}

void write_vem_other(std::ostream& out, const VemModel& model) {
  out << "num_topics " << model.num_topics() << '\n'
      << "num_terms " << model.num_terms() << '\n'
      << "alpha " << fixed(model.alpha, 10) << '\n';
}

void write_vem_model(const VemModel& model, const Grid<double>& gammas,
                     const std::string& prefix) {
  write_vem_model(model, prefix);
  auto gamma_out = create_or_fail(prefix + ".gamma");
  write_matrix(gamma_out, gammas, 10);
}

void write_vem_model(const VemModel& model, const std::string& prefix) {
  auto beta_out = create_or_fail(prefix + ".beta");
  write_vem_beta(beta_out, model);
  auto other_out = create_or_fail(prefix + ".other");
  write_vem_other(other_out, model);
}

VemModel read_vem_model(std::istream& beta_in, std::istream& other_in) {
  int num_topics = -1, num_terms = -1;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  std::string key;
  while (other_in >> key) {
    if (key == "num_topics") {
      other_in >> num_topics;
    } else if (key == "num_terms") {
      other_in >> num_terms;
    } else if (key == "alpha") {
      other_in >> alpha;
    } else {
      fail(".other: unknown key '" + key + "'");
    }
    if (!other_in) fail(".other: missing value for '" + key + "'");
  }
  if (num_topics < 0) fail(".other: missing num_topics");
  if (num_terms < 0) fail(".other: missing num_terms");
  if (std::isnan(alpha)) fail(".other: missing alpha");

  VemModel model;
  model.alpha = alpha;
  model.log_beta = read_matrix(beta_in);
  if (static_cast<int>(model.log_beta.rows()) != num_topics ||
      static_cast<int>(model.log_beta.cols()) != num_terms) {
    fail(".beta shape does not match .other");
  }
  return model;
}

VemModel load_vem_model(const std::string& prefix) {
  auto beta_in = open_or_fail(prefix + ".beta");
  auto other_in = open_or_fail(prefix + ".other");
  return read_vem_model(beta_in, other_in);
}

void write_word_assignments(std::ostream& out, const Corpus& corpus,
                            const std::vector<DocVariational>& docs) {
  if (docs.size() != corpus.docs.size()) {
    fail("write_word_assignments: per-doc phi count mismatch");
  }
  char buf[48];
  for (std::size_t m = 0; m < corpus.docs.size(); ++m) {
    const Document& doc = corpus.docs[m];
    const Grid<double>& phi = docs[m].phi;
    if (phi.rows() != static_cast<std::size_t>(doc.length())) {
      fail("write_word_assignments: phi rows mismatch in doc " +
           std::to_string(m));
    }
    std::snprintf(buf, sizeof(buf), "%03d", doc.length());
    out << buf;
    for (int n = 0; n < doc.length(); ++n) {
      int argmax = 0;
      for (int k = 1; k < static_cast<int>(phi.cols()); ++k) {
        if (phi(n, k) > phi(n, argmax)) argmax = k;
      }
      std::snprintf(buf, sizeof(buf), " %04d:%02d", doc.terms[n], argmax);
      out << buf;
    }
    out << '\n';
  }
}

void write_likelihood_trace(std::ostream& out,
                            std::span<const EmTracePoint> trace) {
  char buf[64];
  for (const auto& point : trace) {
    std::snprintf(buf, sizeof(buf), "%10.10f", point.likelihood);
    out << buf << '\t';
    if (std::isinf(point.converged)) {
      out << (point.converged > 0 ? "inf" : "-inf");
    } else {
      std::snprintf(buf, sizeof(buf), "%5.5e", point.converged);
      out << buf;
    }
    out << '\n';
  }
}

void write_doc_likelihoods(std::ostream& out, std::span<const double> values) {
  char buf[64];
  for (const double value : values) {
    std::snprintf(buf, sizeof(buf), "%5.5f", value);
    out << buf << '\n';
  }
}

}  // namespace ldakit
