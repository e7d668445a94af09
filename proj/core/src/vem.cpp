// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/vem.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "ldakit/rng.hpp"

namespace ldakit {

namespace {

constexpr double kLogBetaSentinel = -100.0;
constexpr double kNewtonThresh = 1e-5;
constexpr int kMaxAlphaIter = 1000;

double d_alhood(double a, double ss, int D, int K) {
  return D * (K * digamma(K * a) - K * digamma(a)) + ss;
}

double d2_alhood(double a, int D, int K) {
  return D * (K * K * trigamma(K * a) - K * trigamma(a));
}

}  // namespace

void SuffStats::zero() {
  std::fill(class_word.data().begin(), class_word.data().end(), 0.0);
  std::fill(class_total.begin(), class_total.end(), 0.0);
  alpha_suffstats = 0.0;
  num_docs = 0;
}

VemSettings parse_settings(std::istream& in) {
  VemSettings settings;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream probe(line);
    std::string first;
    if (!(probe >> first)) continue;  // blank line

    auto value_after = [&](const std::string& key) {
      const std::string rest = line.substr(key.size());
      std::istringstream iss(rest);
      std::string value;
      if (!(iss >> value)) {
        throw std::runtime_error("settings line " + std::to_string(line_no) +
                                 ": missing value for '" + key + "'");
      }
      return value;
    };

    if (line.rfind("var max iter", 0) == 0) {
      settings.var_max_iter = std::stoi(value_after("var max iter"));
    } else if (line.rfind("var convergence", 0) == 0) {
      settings.var_convergence = std::stod(value_after("var convergence"));
    } else if (line.rfind("em max iter", 0) == 0) {
      settings.em_max_iter = std::stoi(value_after("em max iter"));
    } else if (line.rfind("em convergence", 0) == 0) {
      settings.em_convergence = std::stod(value_after("em convergence"));
    } else if (line.rfind("alpha", 0) == 0) {
      const std::string value = value_after("alpha");
      if (value == "fixed") {
        settings.estimate_alpha = false;
      } else if (value == "estimate") {
        settings.estimate_alpha = true;
      } else {
        throw std::runtime_error("settings line " + std::to_string(line_no) +
                                 ": alpha must be 'fixed' or 'estimate'");
      }
    } else {
      throw std::runtime_error("settings line " + std::to_string(line_no) +
                               ": unknown key in '" + line + "'");
    }
  }
  if (settings.var_max_iter != -1 && settings.var_max_iter < 1) {
    throw std::runtime_error("settings: var max iter must be >= 1 or -1");
  }
  if (settings.em_max_iter < 1) {
    throw std::runtime_error("settings: em max iter must be >= 1");
  }
  if (!(settings.var_convergence > 0) || !(settings.em_convergence > 0)) {
    throw std::runtime_error("settings: convergence tolerances must be > 0");
  }
  return settings;
}

double compute_elbo(const Document& doc, const VemModel& model,
                    std::span<const double> gamma, const Grid<double>& phi) {
  const int K = model.num_topics();
  if (static_cast<int>(gamma.size()) != K ||
      phi.rows() != static_cast<std::size_t>(doc.length()) ||
      phi.cols() != static_cast<std::size_t>(K)) {
    throw std::invalid_argument("compute_elbo: dimension mismatch");
  }
  const double alpha = model.alpha;

  double gamma_sum = 0.0;
  std::vector<double> dig(K);
  for (int k = 0; k < K; ++k) {
    if (!std::isfinite(gamma[k])) {
      throw std::domain_error("compute_elbo: non-finite gamma");
    }
    dig[k] = digamma(gamma[k]);
    gamma_sum += gamma[k];
  }
  const double digsum = digamma(gamma_sum);

  double likelihood = ldakit::lgamma(alpha * K) - K * ldakit::lgamma(alpha) -
                      ldakit::lgamma(gamma_sum);
  for (int k = 0; k < K; ++k) {
    likelihood += (alpha - 1) * (dig[k] - digsum) + ldakit::lgamma(gamma[k]) -
                  (gamma[k] - 1) * (dig[k] - digsum);
    for (int n = 0; n < doc.length(); ++n) {
      const double p = phi(n, k);
      if (p > 0) {
        likelihood += doc.counts[n] * p *
                      ((dig[k] - digsum) - std::log(p) +
                       model.log_beta(k, doc.terms[n]));
      }
    }
  }
  return likelihood;
}

EStepResult e_step_doc(const Document& doc, const VemModel& model,
                       const VemSettings& settings) {
  const int K = model.num_topics();
  const int L = doc.length();
  for (const int w : doc.terms) {
    if (w < 0 || w >= model.num_terms()) {
      throw std::invalid_argument("e_step_doc: term id outside vocabulary");
    }
  }

  EStepResult result;
  result.var.gamma.assign(K, model.alpha + doc.total / static_cast<double>(K));
  result.var.phi = Grid<double>(L, K, 1.0 / K);
  std::vector<double>& gamma = result.var.gamma;
  Grid<double>& phi = result.var.phi;

  std::vector<double> digamma_gam(K);
  for (int k = 0; k < K; ++k) digamma_gam[k] = digamma(gamma[k]);

  std::vector<double> oldphi(K);
  double likelihood_old = 0.0;
  double converged = 1.0;
  int var_iter = 0;
  while (converged > settings.var_convergence &&
         (var_iter < settings.var_max_iter || settings.var_max_iter == -1)) {
    ++var_iter;
    for (int n = 0; n < L; ++n) {
      double phisum = 0.0;
      for (int k = 0; k < K; ++k) {
        oldphi[k] = phi(n, k);
        phi(n, k) = digamma_gam[k] + model.log_beta(k, doc.terms[n]);
        phisum = (k > 0) ? log_sum(phisum, phi(n, k)) : phi(n, k);
      }
      for (int k = 0; k < K; ++k) {
        phi(n, k) = std::exp(phi(n, k) - phisum);
        gamma[k] += doc.counts[n] * (phi(n, k) - oldphi[k]);
        digamma_gam[k] = digamma(gamma[k]);
      }
    }
    result.likelihood = compute_elbo(doc, model, gamma, phi);
    if (!std::isfinite(result.likelihood)) {
      throw std::runtime_error("e_step_doc: non-finite likelihood at "
                               "variational iteration " +
                               std::to_string(var_iter));
    }
    converged = (likelihood_old - result.likelihood) / likelihood_old;
    likelihood_old = result.likelihood;
    result.likelihood_trace.push_back(result.likelihood);
  }
  if (result.likelihood_trace.empty()) {
    // var_max_iter edge: report the bound of the initialized parameters.
    result.likelihood = compute_elbo(doc, model, gamma, phi);
    result.likelihood_trace.push_back(result.likelihood);
  }
  return result;
}

void accumulate_suffstats(SuffStats& ss, const Document& doc,
                          const DocVariational& var) {
  const int K = static_cast<int>(ss.class_total.size());
  for (int n = 0; n < doc.length(); ++n) {
    for (int k = 0; k < K; ++k) {
      const double mass = doc.counts[n] * var.phi(n, k);
      ss.class_word(k, doc.terms[n]) += mass;
      ss.class_total[k] += mass;
    }
  }
  double gamma_sum = 0.0;
  double dig_acc = 0.0;
  for (const double g : var.gamma) {
    gamma_sum += g;
    dig_acc += digamma(g);
  }
  ss.alpha_suffstats += dig_acc - K * digamma(gamma_sum);
  ss.num_docs += 1;
}

void m_step(VemModel& model, const SuffStats& ss, bool estimate_alpha) {
  const int K = model.num_topics();
  const int V = model.num_terms();
  for (int k = 0; k < K; ++k) {
    if (!(ss.class_total[k] > 0)) {
      throw std::runtime_error("m_step: empty topic " + std::to_string(k));
    }
    const double log_total = std::log(ss.class_total[k]);
    for (int w = 0; w < V; ++w) {
      model.log_beta(k, w) = ss.class_word(k, w) > 0
                                 ? std::log(ss.class_word(k, w)) - log_total
                                 : kLogBetaSentinel;
    }
  }
  if (estimate_alpha) {
    model.alpha = opt_alpha(ss.alpha_suffstats, ss.num_docs, K);
  }
}

double opt_alpha(double alpha_suffstats, int num_docs, int num_topics,
                 OptAlphaInfo* info) {
  if (num_docs < 1 || num_topics < 1) {
    throw std::invalid_argument("opt_alpha: num_docs and num_topics >= 1");
  }
  double init_a = 100.0;
  double log_a = std::log(init_a);
  double df = 0.0;
  int iter = 0;
  int restarts = 0;
  do {
    ++iter;
    double a = std::exp(log_a);
    if (!std::isfinite(a) || a > 1e300 || a < 1e-300) {
      if (++restarts > 40) {
        throw std::runtime_error("opt_alpha: persistent non-finite iterates");
      }
      init_a *= 10.0;
      a = init_a;
      log_a = std::log(a);
    }
    df = d_alhood(a, alpha_suffstats, num_docs, num_topics);
    const double d2f = d2_alhood(a, num_docs, num_topics);
    log_a = log_a - df / (d2f * a + df);
  } while (std::fabs(df) > kNewtonThresh && iter < kMaxAlphaIter);

  if (info != nullptr) {
    info->iterations = iter;
    info->residual = std::fabs(df);
    info->converged = std::fabs(df) <= kNewtonThresh;
  }
  return std::exp(log_a);
}

namespace {

void seed_suffstats(SuffStats& ss, const Corpus& corpus, int num_topics,
                    const VemInit& init, std::uint64_t seed) {
  const int V = corpus.num_terms;
  Rng rng(derive_stream(seed, StreamPhase::kVemInit));
  if (init.mode == VemInit::Mode::kSeeded) {
    for (int k = 0; k < num_topics; ++k) {
      for (int i = 0; i < init.num_init; ++i) {
        const int d =
            static_cast<int>(rng.next_double() * corpus.num_docs());
        const Document& doc = corpus.docs[std::min(d, corpus.num_docs() - 1)];
        for (int n = 0; n < doc.length(); ++n) {
          ss.class_word(k, doc.terms[n]) += doc.counts[n];
        }
      }
      for (int n = 0; n < V; ++n) {
        ss.class_word(k, n) += 1.0;  // smoothing pass
        ss.class_total[k] += ss.class_word(k, n);
      }
    }
  } else {
    for (int k = 0; k < num_topics; ++k) {
      for (int n = 0; n < V; ++n) {
        ss.class_word(k, n) += 1.0 / V + rng.next_double();
        ss.class_total[k] += ss.class_word(k, n);
      }
    }
  }
  ss.num_docs = corpus.num_docs();
}

struct EStepTotals {
  double likelihood = 0.0;
  SuffStats ss;
};

}  // namespace

VemModel initial_model(const Corpus& corpus, int num_topics,
                       double initial_alpha, const VemInit& init,
                       std::uint64_t seed) {
  if (num_topics < 1) {
    throw std::invalid_argument("initial_model: num_topics >= 1");
  }
  if (corpus.num_docs() < 1) {
    throw std::invalid_argument("initial_model: empty corpus");
  }
  if (init.mode == VemInit::Mode::kFromModel) {
    if (!init.model.has_value()) {
      throw std::invalid_argument("initial_model: init mode needs a model");
    }
    if (init.model->num_topics() != num_topics ||
        init.model->num_terms() != corpus.num_terms) {
      throw std::invalid_argument("initial_model: init model shape mismatch");
    }
    return *init.model;
  }
  VemModel model;
  model.log_beta = Grid<double>(num_topics, corpus.num_terms);
  SuffStats ss(num_topics, corpus.num_terms);
  seed_suffstats(ss, corpus, num_topics, init, seed);
  m_step(model, ss, /*estimate_alpha=*/false);
  model.alpha = initial_alpha;
  return model;
}

RunEmResult run_em(const Corpus& corpus, int num_topics, double initial_alpha,
                   const VemSettings& settings, const VemInit& init,
                   std::uint64_t seed, int num_threads,
                   const EmCheckpointFn& on_iteration, std::ostream* verbose) {
  const int K = num_topics;
  const int V = corpus.num_terms;
  const int M = corpus.num_docs();
  num_threads = std::max(1, num_threads);

  RunEmResult result;
  result.model = initial_model(corpus, num_topics, initial_alpha, init, seed);

  VemSettings live = settings;
  result.gammas = Grid<double>(M, K);
  SuffStats ss(K, V);
  std::vector<SuffStats> shard_ss(num_threads);
  for (auto& shard : shard_ss) shard = SuffStats(K, V);

  double likelihood_old = 0.0;
  for (int iter = 1; iter <= live.em_max_iter; ++iter) {
    if (verbose != nullptr) {
      *verbose << "**** em iteration " << iter << " ****\n";
    }
    ss.zero();
    double likelihood = 0.0;

    if (num_threads == 1) {
      for (int d = 0; d < M; ++d) {
        EStepResult estep = e_step_doc(corpus.docs[d], result.model, live);
        accumulate_suffstats(ss, corpus.docs[d], estep.var);
        std::copy(estep.var.gamma.begin(), estep.var.gamma.end(),
                  result.gammas.row(d));
        likelihood += estep.likelihood;
      }
    } else {
      std::vector<double> shard_likelihood(num_threads, 0.0);
      std::vector<std::thread> threads;
      threads.reserve(num_threads);
      for (int t = 0; t < num_threads; ++t) {
        threads.emplace_back([&, t] {
          shard_ss[t].zero();
          const int lo =
              static_cast<int>(static_cast<long long>(t) * M / num_threads);
          const int hi = static_cast<int>(static_cast<long long>(t + 1) * M /
                                          num_threads);
          for (int d = lo; d < hi; ++d) {
            EStepResult estep = e_step_doc(corpus.docs[d], result.model, live);
            accumulate_suffstats(shard_ss[t], corpus.docs[d], estep.var);
            std::copy(estep.var.gamma.begin(), estep.var.gamma.end(),
                      result.gammas.row(d));
            shard_likelihood[t] += estep.likelihood;
          }
        });
      }
      for (auto& thread : threads) thread.join();
      for (int t = 0; t < num_threads; ++t) {
        likelihood += shard_likelihood[t];
        for (std::size_t i = 0; i < ss.class_word.data().size(); ++i) {
          ss.class_word.data()[i] += shard_ss[t].class_word.data()[i];
        }
        for (int k = 0; k < K; ++k) {
          ss.class_total[k] += shard_ss[t].class_total[k];
        }
        ss.alpha_suffstats += shard_ss[t].alpha_suffstats;
        ss.num_docs += shard_ss[t].num_docs;
      }
    }

    m_step(result.model, ss, live.estimate_alpha);
    if (verbose != nullptr && live.estimate_alpha) {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "new alpha = %5.5f\n",
                    result.model.alpha);
      *verbose << buf;
    }

    const double converged = (likelihood_old - likelihood) / likelihood_old;
    if (converged < 0 && live.var_max_iter > 0) {
      live.var_max_iter *= 2;
    }
    likelihood_old = likelihood;
    result.trace.push_back({likelihood, converged});
    if (on_iteration) on_iteration(iter, result.model, result.gammas);

    if (iter > 2 && converged >= 0 && converged <= live.em_convergence) {
      break;
    }
  }
  result.var_max_iter_final = live.var_max_iter;
  return result;
}

Grid<double> VemInferResult::gammas() const {
  if (docs.empty()) return {};
  Grid<double> out(docs.size(), docs.front().gamma.size());
  for (std::size_t d = 0; d < docs.size(); ++d) {
    std::copy(docs[d].gamma.begin(), docs[d].gamma.end(), out.row(d));
  }
  return out;
}

VemInferResult vem_infer(const VemModel& model, const Corpus& corpus,
                         const VemSettings& settings) {
  VemInferResult result;
  result.docs.reserve(corpus.docs.size());
  result.likelihoods.reserve(corpus.docs.size());
  for (const auto& doc : corpus.docs) {
    EStepResult estep = e_step_doc(doc, model, settings);
    result.docs.push_back(std::move(estep.var));
    result.likelihoods.push_back(estep.likelihood);
  }
  return result;
}

}  // namespace ldakit
