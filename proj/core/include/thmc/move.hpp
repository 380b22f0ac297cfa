#ifndef THMC_MOVE_HPP
#define THMC_MOVE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "thmc/table.hpp"

namespace thmc {

// Sparse signed integer table z; the MCMC proposal unit.  A move is valid
// for the THMC model when A z = 0, i.e. when its initial-state and pooled
// transition deltas all vanish (see is_valid_move).
class Move {
public:
  Move(int n_states, int length,
       std::vector<std::pair<PathIndex, std::int64_t>> delta);

  int S() const { return n_states_; }
  int T() const { return length_; }
  const std::vector<std::pair<PathIndex, std::int64_t>>& delta() const {
    return delta_;
  }
  bool zero() const { return delta_.empty(); }
  std::int64_t coefficient(PathIndex path) const;

  Move negated() const;
  // Sign-normalized representative of {z, -z}: first nonzero entry positive.
  Move canonical() const;

  bool operator==(const Move& other) const = default;
  bool operator<(const Move& other) const;

private:
  std::vector<std::pair<PathIndex, std::int64_t>> delta_;  // sorted, nonzero
  int n_states_;
  int length_;
};

// Accumulates +1 per path in `plus` and -1 per path in `minus`.
Move move_from_path_lists(int n_states, int length,
                          const std::vector<PathIndex>& plus,
                          const std::vector<PathIndex>& minus);

// Returns the table with counts(w) + sign * z(w); throws NegativityError if
// any cell would become negative (a rejected MCMC proposal).
PathTable apply_move(const PathTable& table, const Move& move, int sign);

// True iff A z = 0 for the configuration of (S, T): the move changes no
// initial-state count and no pooled transition count.
bool is_valid_move(const Move& move);

// Per-slice transition deltas z^t_ij, (T-1) x S x S flattened row-major.
std::vector<std::int64_t> edge_deltas(const Move& move);

// Per-slice node deltas z^t_i for t = 1..T, T x S flattened.
std::vector<std::int64_t> node_deltas(const Move& move);

}  // namespace thmc

#endif
