#ifndef THMC_SUFF_STAT_HPP
#define THMC_SUFF_STAT_HPP

#include <cstdint>
#include <vector>

#include "thmc/table.hpp"

namespace thmc {

// The sufficient statistic b of the toric homogeneous Markov chain model:
// initial-state counts x^1_i plus transition counts x^+_ij pooled over
// t = 1..T-1.
struct SuffStat {
  int S = 0;
  std::vector<std::int64_t> initial;      // size S
  std::vector<std::int64_t> transitions;  // S*S, row-major (i, j)

  explicit SuffStat(int n_states)
      : S(n_states),
        initial(static_cast<std::size_t>(n_states), 0),
        transitions(static_cast<std::size_t>(n_states) * n_states, 0) {}

  std::int64_t& trans(int i, int j) {
    return transitions[static_cast<std::size_t>(i - 1) * S + (j - 1)];
  }
  std::int64_t trans(int i, int j) const {
    return transitions[static_cast<std::size_t>(i - 1) * S + (j - 1)];
  }
  std::int64_t total() const;

  // Flat vector in configuration row order: initial rows then transitions.
  std::vector<std::int64_t> flat() const;

  bool operator==(const SuffStat& other) const = default;
};

SuffStat suff_stat(const PathTable& table);

// Per-slice transition counts x^t_ij for one t in 1..T-1, as an S*S
// row-major matrix.
std::vector<std::int64_t> slice_transition_counts(const PathTable& table, int t);

// Node counts x^t_i for one t in 1..T.
std::vector<std::int64_t> node_counts(const PathTable& table, int t);

}  // namespace thmc

#endif
