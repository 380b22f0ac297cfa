#ifndef THMC_BASIS_HPP
#define THMC_BASIS_HPP

#include <cstdint>
#include <vector>

#include "thmc/move.hpp"
#include "thmc/rng.hpp"
#include "thmc/table.hpp"

namespace thmc {

// Default cap on S^T for finite basis enumeration / export.
inline constexpr std::int64_t kDefaultBasisEnumCap = 1 << 16;

enum class MoveKind {
  CrossingSwap,
  DegreeOne,
  TwoByTwoSwap,
  Type4Swap,
  MPermutation,
};

const char* move_kind_name(MoveKind kind);

// Which slots of a 2x2 swap are carried by one shared path unit.  Slots are
// numbered 1: t:i1j1, 2: t:i2j2, 3: t':i1j2, 4: t':i2j1; a unit can serve a
// t-slot and a t'-slot at once when one path passes through both edges,
// which yields the degree-2 and degree-3 swaps.
enum class SwapMerge {
  None,
  Merge13,
  Merge14,
  Merge23,
  Merge24,
  Merge13And24,
  Merge14And23,
};

// Tail-swapping of two paths that occupy the same state at time t.
// Returns the zero move when the swap reproduces the same multiset.
Move crossing_swap(const StatePath& a, const StatePath& b, int t);
Move crossing_swap(int n_states, int length, PathIndex a, PathIndex b, int t);

// Exchanges the transition pair {t: i1j1, t: i2j2} against
// {t': i1j2, t': i2j1} on four completion paths (w1..w4 pass through the
// four edges in slot order).  Merged slots make the degree-2/3 variants.
Move two_by_two_swap(int n_states, int length, int t, int tp, int i1, int j1,
                     int i2, int j2, PathIndex w1, PathIndex w2, PathIndex w3,
                     PathIndex w4, SwapMerge merge = SwapMerge::None);

// S=2 only: exchanges the length-3 blocks 112 at t and 122 at t' between two
// paths (each keeps its own head and tail); `relabeled` uses the 1<->2
// image, blocks 221 and 211.  w_first carries the first block at t, w_second
// the second at t'.  Includes the collapsed double-transition case when both
// arguments name the same path and |t - t'| = 1.
Move type4_move(int length, int t, int tp, PathIndex w_first,
                PathIndex w_second, bool relabeled = false);

// T=3: the m x m permutation move with the cyclic sigma, +W1 -W2.  Fills
// are the free states s_j for j in I\J and s~_j for j in J\I, listed in
// increasing order of j.
Move m_permutation(int n_states, const std::vector<int>& i_list,
                   const std::vector<int>& j_list,
                   const std::vector<int>& fills_i,
                   const std::vector<int>& fills_j);

// The move families of the two-state basis (S=2) or the length-three
// basis (T=3), or an imported move list for other shapes.
class BasisDescriptor {
public:
  static BasisDescriptor external(int n_states, int length,
                                  std::vector<Move> moves);

  int S() const { return n_states_; }
  int T() const { return length_; }
  bool is_external() const { return !external_.empty(); }
  const std::vector<Move>& external_moves() const { return external_; }

  const std::vector<MoveKind>& families() const { return families_; }
  bool has(MoveKind kind) const;
  const std::vector<int>& mperm_sizes() const { return mperm_sizes_; }
  const std::vector<std::vector<PathIndex>>& degree_one_classes() const {
    return classes_;
  }

  // Copies with one family (or one permutation size) removed, for
  // negative-control experiments.
  BasisDescriptor without(MoveKind kind) const;
  BasisDescriptor without_mperm(int m) const;

private:
  friend BasisDescriptor markov_basis(int n_states, int length);
  BasisDescriptor(int n_states, int length)
      : n_states_(n_states), length_(length) {}
  void refresh_active();

  int n_states_;
  int length_;
  std::vector<MoveKind> families_;
  std::vector<int> mperm_sizes_;
  std::vector<std::vector<PathIndex>> classes_;  // identical-column classes
  std::vector<MoveKind> active_;                 // instantiable families
  std::vector<Move> external_;

  friend Move random_move(const PathTable&, const BasisDescriptor&, Rng&);
};

// The two-state basis for S=2 (crossing swaps, degree-one moves and 2x2
// swaps, plus partial-path swaps once T >= 4) or the length-three basis
// for T=3 (crossing swaps plus m-permutations, m = 2..S).  Throws
// UnsupportedShapeError for other shapes; supply an external move file then.
BasisDescriptor markov_basis(int n_states, int length);

// One instantiated move with every basis element having positive selection
// probability.  The draw is a fixed distribution (kind uniform over the
// instantiable families, parameters and completion segments uniform over
// their ranges), independent of the table, so the MCMC proposal is
// symmetric.  May return a zero move or one that apply_move later rejects.
Move random_move(const PathTable& table, const BasisDescriptor& basis,
                 Rng& rng);

// All basis moves instantiated against the support of the given table
// (canonical representatives, deduplicated).  Together with +-signs these
// cover every basis edge incident to the table.
std::vector<Move> applicable_moves(const PathTable& table,
                                   const BasisDescriptor& basis);

// Finite enumeration of the whole basis (canonical, deduplicated); only
// available while S^T <= cell_cap.
std::vector<Move> enumerate_basis(const BasisDescriptor& basis,
                                  std::int64_t cell_cap = kDefaultBasisEnumCap);

}  // namespace thmc

#endif
