// Apache License, Version 2.0, refer to LICENSE.txt

#ifndef LDAKIT_PARALLEL_HPP
#define LDAKIT_PARALLEL_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "ldakit/gibbs.hpp"

namespace ldakit {

using BlockCoord = std::pair<int, int>;  // (row group, column group)

// P x P partition of the doc x term grid plus the diagonal execution
// groups. Within any group no two blocks share a row or a column, so the
// blocks of a group can be sampled concurrently without count conflicts.
struct BlockPlan {
  int P = 0;
  std::vector<int> row_perm;   // position -> doc id, order before cutting
  std::vector<int> col_perm;   // position -> term id
  std::vector<int> row_bounds; // P+1 cut points into row_perm
  std::vector<int> col_bounds; // P+1 cut points into col_perm
  std::vector<int> row_of_doc; // doc id -> row group
  std::vector<int> col_of_term;// term id -> column group
  std::vector<std::vector<BlockCoord>> groups;
  long long balance = 0;       // max block token mass - min block token mass
};

// Diagonal groups: group g = { (r, (r+g) mod P) : r in 0..P-1 }.
std::vector<std::vector<BlockCoord>> diagonal_schedule(int P);

// Token-mass-balanced P x P partition. Trial 0 keeps the given doc/term
// order; later trials draw random whole permutations; the plan with the
// smallest max-min block mass difference wins (first best kept on ties).
BlockPlan partition_blocks(const Corpus& corpus, int P, int trials,
                           std::uint64_t seed);

// One AD-LDA iteration: per-worker copies of nw/nwsum, disjoint doc ranges,
// then the global update nw <- nw + sum_p (nw_p - nw) and nwsum recomputed
// column-wise.
void adlda_sweep(GibbsState& state, const Corpus& corpus, int workers,
                 int iteration);
GibbsState adlda_train(const Corpus& corpus, GibbsHyper hyper, int workers,
                       int iterations, std::uint64_t seed);

// One blocked iteration: groups run in sequence, blocks of a group run
// concurrently over disjoint nd rows / nw rows with a private nwsum copy
// per worker, merged back at the group barrier (the only approximate
// statistic).
void blocked_sweep(GibbsState& state, const Corpus& corpus,
                   const BlockPlan& plan, int iteration);
GibbsState blocked_train(const Corpus& corpus, GibbsHyper hyper,
                         const BlockPlan& plan, int iterations,
                         std::uint64_t seed);

}  // namespace ldakit

#endif  // LDAKIT_PARALLEL_HPP
