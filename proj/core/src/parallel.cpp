// Apache License, Version 2.0, refer to LICENSE.txt

#include "ldakit/parallel.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <thread>

#include "ldakit/rng.hpp"
#include "sample_kernel.hpp"

namespace ldakit {

namespace {

// Contiguous cuts so that each of the P parts carries roughly total/P mass.
std::vector<int> balanced_cuts(const std::vector<long long>& mass, int parts) {
  const int n = static_cast<int>(mass.size());
  const long long total = std::accumulate(mass.begin(), mass.end(), 0LL);
  std::vector<int> bounds(parts + 1, n);
  bounds[0] = 0;
  int item = 0;
  long long cum = 0;
  for (int part = 1; part < parts; ++part) {
    const double target = static_cast<double>(total) * part / parts;
    while (item < n && static_cast<double>(cum) < target) {
      cum += mass[item];
      ++item;
    }
    bounds[part] = item;
  }
  return bounds;
}

std::vector<int> group_of(const std::vector<int>& perm,
                          const std::vector<int>& bounds, int size) {
  std::vector<int> group(size, 0);
  const int parts = static_cast<int>(bounds.size()) - 1;
  for (int part = 0; part < parts; ++part) {
    for (int i = bounds[part]; i < bounds[part + 1]; ++i) {
      group[perm[i]] = part;
    }
  }
  return group;
}

void shuffle(std::vector<int>& perm, Rng& rng) {
  for (int i = static_cast<int>(perm.size()) - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(i + 1));
    std::swap(perm[i], perm[j]);
  }
}

void run_workers(std::vector<std::thread>& threads) {
  for (auto& t : threads) t.join();
  threads.clear();
}

}  // namespace

std::vector<std::vector<BlockCoord>> diagonal_schedule(int P) {
  if (P < 1) throw std::invalid_argument("diagonal_schedule: P must be >= 1");
  std::vector<std::vector<BlockCoord>> groups(P);
  for (int g = 0; g < P; ++g) {
    groups[g].reserve(P);
    for (int r = 0; r < P; ++r) {
      groups[g].emplace_back(r, (r + g) % P);
    }
  }
  return groups;
}

BlockPlan partition_blocks(const Corpus& corpus, int P, int trials,
                           std::uint64_t seed) {
  if (P < 1) throw std::invalid_argument("partition_blocks: P must be >= 1");
  if (trials < 1) {
    throw std::invalid_argument("partition_blocks: trials must be >= 1");
  }
  const int M = corpus.num_docs();
  const int V = corpus.num_terms;

  std::vector<long long> doc_mass(M, 0);
  std::vector<long long> term_mass(V, 0);
  for (int m = 0; m < M; ++m) {
    const Document& doc = corpus.docs[m];
    doc_mass[m] = doc.total;
    for (int i = 0; i < doc.length(); ++i) {
      term_mass[doc.terms[i]] += doc.counts[i];
    }
  }

  BlockPlan best;
  bool have_best = false;
  std::vector<int> row_perm(M), col_perm(V);
  std::vector<long long> permuted;
  for (int trial = 0; trial < trials; ++trial) {
    std::iota(row_perm.begin(), row_perm.end(), 0);
    std::iota(col_perm.begin(), col_perm.end(), 0);
    if (trial > 0) {
      Rng rng(derive_stream(seed, StreamPhase::kPartition,
                            static_cast<std::uint64_t>(trial)));
      shuffle(col_perm, rng);
      shuffle(row_perm, rng);
    }

    permuted.resize(V);
    for (int j = 0; j < V; ++j) permuted[j] = term_mass[col_perm[j]];
    std::vector<int> col_bounds = balanced_cuts(permuted, P);
    permuted.resize(M);
    for (int i = 0; i < M; ++i) permuted[i] = doc_mass[row_perm[i]];
    std::vector<int> row_bounds = balanced_cuts(permuted, P);

    const std::vector<int> row_of_doc = group_of(row_perm, row_bounds, M);
    const std::vector<int> col_of_term = group_of(col_perm, col_bounds, V);

    Grid<long long> block_mass(P, P);
    for (int m = 0; m < M; ++m) {
      const Document& doc = corpus.docs[m];
      const int r = row_of_doc[m];
      for (int i = 0; i < doc.length(); ++i) {
        block_mass(r, col_of_term[doc.terms[i]]) += doc.counts[i];
      }
    }
    const auto [lo, hi] =
        std::minmax_element(block_mass.data().begin(), block_mass.data().end());
    const long long score = *hi - *lo;

    if (!have_best || score < best.balance) {
      have_best = true;
      best.P = P;
      best.row_perm = row_perm;
      best.col_perm = col_perm;
      best.row_bounds = std::move(row_bounds);
      best.col_bounds = std::move(col_bounds);
      best.row_of_doc = row_of_doc;
      best.col_of_term = col_of_term;
      best.balance = score;
    }
  }
  best.groups = diagonal_schedule(P);
  return best;
}

void adlda_sweep(GibbsState& state, const Corpus& corpus, int workers,
                 int iteration) {
  const int M = corpus.num_docs();
  if (workers < 1) throw std::invalid_argument("adlda_sweep: workers >= 1");
  if (workers > M) {
    throw std::invalid_argument("adlda_sweep: more workers than documents");
  }
  const int K = state.num_topics();
  const int V = state.num_terms();

  const Grid<int> base_nw = state.nw;
  const std::vector<int> base_nwsum = state.nwsum;
  std::vector<Grid<int>> worker_nw(workers, base_nw);
  std::vector<std::vector<int>> worker_nwsum(workers, base_nwsum);

  std::vector<std::thread> threads;
  threads.reserve(workers);
  for (int p = 0; p < workers; ++p) {
    threads.emplace_back([&, p] {
      Grid<int>& nw_p = worker_nw[p];
      std::vector<int>& nwsum_p = worker_nwsum[p];
      Rng rng(derive_stream(state.seed, StreamPhase::kSweep,
                            static_cast<std::uint64_t>(iteration),
                            static_cast<std::uint64_t>(p)));
      std::vector<double> weights(K);
      const int lo = static_cast<int>(static_cast<long long>(p) * M / workers);
      const int hi =
          static_cast<int>(static_cast<long long>(p + 1) * M / workers);
      for (int m = lo; m < hi; ++m) {
        const Document& doc = corpus.docs[m];
        detail::for_each_token(doc, [&](int pos, int word) {
          state.z[m][pos] = detail::resample_token(
              state.z[m][pos], K, V, state.hyper.alpha, state.hyper.beta,
              nw_p.row(word), nwsum_p.data(), state.nd.row(m),
              state.ndsum[m], weights, rng);
        });
      }
    });
  }
  run_workers(threads);

  // Global update, Eq-style: nw <- nw + sum_p (nw_p - nw), then nwsum
  // recomputed from the merged columns.
  for (int w = 0; w < V; ++w) {
    for (int k = 0; k < K; ++k) {
      int merged = base_nw(w, k);
      for (int p = 0; p < workers; ++p) {
        merged += worker_nw[p](w, k) - base_nw(w, k);
      }
      state.nw(w, k) = merged;
    }
  }
  std::fill(state.nwsum.begin(), state.nwsum.end(), 0);
  for (int w = 0; w < V; ++w) {
    for (int k = 0; k < K; ++k) state.nwsum[k] += state.nw(w, k);
  }
}

GibbsState adlda_train(const Corpus& corpus, GibbsHyper hyper, int workers,
                       int iterations, std::uint64_t seed) {
  GibbsState state = init_state(corpus, hyper, seed);
  for (int t = 0; t < iterations; ++t) {
    adlda_sweep(state, corpus, workers, t);
  }
  return state;
}

void blocked_sweep(GibbsState& state, const Corpus& corpus,
                   const BlockPlan& plan, int iteration) {
  const int M = corpus.num_docs();
  const int V = state.num_terms();
  const int K = state.num_topics();
  if (static_cast<int>(plan.row_of_doc.size()) != M ||
      static_cast<int>(plan.col_of_term.size()) != V) {
    throw std::invalid_argument("blocked_sweep: plan does not cover corpus");
  }

  for (const auto& group : plan.groups) {
    const std::vector<int> base_nwsum = state.nwsum;
    std::vector<std::vector<int>> worker_nwsum(group.size(), base_nwsum);

    std::vector<std::thread> threads;
    threads.reserve(group.size());
    for (std::size_t b = 0; b < group.size(); ++b) {
      threads.emplace_back([&, b] {
        const auto [r, c] = group[b];
        std::vector<int>& nwsum_p = worker_nwsum[b];
        Rng rng(derive_stream(state.seed, StreamPhase::kSweep,
                              static_cast<std::uint64_t>(iteration),
                              static_cast<std::uint64_t>(r),
                              static_cast<std::uint64_t>(c)));
        std::vector<double> weights(K);
        for (int i = plan.row_bounds[r]; i < plan.row_bounds[r + 1]; ++i) {
          const int m = plan.row_perm[i];
          const Document& doc = corpus.docs[m];
          detail::for_each_token(doc, [&](int pos, int word) {
            if (plan.col_of_term[word] != c) return;
            state.z[m][pos] = detail::resample_token(
                state.z[m][pos], K, V, state.hyper.alpha, state.hyper.beta,
                state.nw.row(word), nwsum_p.data(), state.nd.row(m),
                state.ndsum[m], weights, rng);
          });
        }
      });
    }
    run_workers(threads);

    // Group barrier: merge back the only conflicted statistic.
    for (int k = 0; k < K; ++k) {
      int merged = base_nwsum[k];
      for (std::size_t b = 0; b < group.size(); ++b) {
        merged += worker_nwsum[b][k] - base_nwsum[k];
      }
      state.nwsum[k] = merged;
    }
  }
}

GibbsState blocked_train(const Corpus& corpus, GibbsHyper hyper,
                         const BlockPlan& plan, int iterations,
                         std::uint64_t seed) {
  GibbsState state = init_state(corpus, hyper, seed);
  for (int t = 0; t < iterations; ++t) {
    blocked_sweep(state, corpus, plan, t);
  }
  return state;
}

}  // namespace ldakit
