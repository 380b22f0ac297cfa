#ifndef THMC_CONFIGURATION_HPP
#define THMC_CONFIGURATION_HPP

#include <cstdint>
#include <vector>

#include "thmc/move.hpp"
#include "thmc/path.hpp"
#include "thmc/suff_stat.hpp"

namespace thmc {

// Default cap on rows * cols of an explicitly built configuration matrix.
inline constexpr std::int64_t kDefaultConfigEntryCap = 20'000'000;

// The S(S+1) x S^T configuration matrix A with b = A x.  Row order: initial
// rows x^1_1..x^1_S, then pooled transition rows x^+_ij in row-major (i, j)
// order.  Columns are paths in lexicographic order; every column sums to T.
class Configuration {
public:
  static Configuration build(int n_states, int length,
                             std::int64_t entry_cap = kDefaultConfigEntryCap);

  int S() const { return n_states_; }
  int T() const { return length_; }
  int rows() const { return n_states_ + n_states_ * n_states_; }
  PathIndex cols() const { return n_cols_; }

  std::int32_t entry(int row, PathIndex col) const {
    return entries_[static_cast<std::size_t>(col) * rows() + row];
  }
  std::vector<std::int64_t> column(PathIndex col) const;

  // b = A x for a table with matching shape.
  std::vector<std::int64_t> apply(const PathTable& table) const;

private:
  Configuration(int n_states, int length, PathIndex n_cols)
      : n_states_(n_states), length_(length), n_cols_(n_cols) {}

  std::vector<std::int32_t> entries_;  // column-major
  int n_states_;
  int length_;
  PathIndex n_cols_;
};

// Equivalence classes of equal columns, singletons omitted; the members are
// column (= path) indices in increasing order.
std::vector<std::vector<PathIndex>> identical_column_classes(
    const Configuration& config);

// One (+1, -1) move per unordered pair inside each identical-column class.
std::vector<Move> degree_one_moves(int n_states, int length);

// Exact rank over the rationals, by fraction-free Gaussian elimination.
int design_rank(const Configuration& config);

// Rank of the stacked per-slice transition indicator matrix (the design of
// the non-homogeneous alternative H1), computed the same way.
int h1_rank(int n_states, int length);

// Degrees of freedom of the homogeneity test: h1_rank - design_rank.
int degrees_of_freedom(int n_states, int length);

// Exact rank of an arbitrary integer matrix (row-major, rows x cols);
// exposed for reuse and for cross-checks in tests.
int integer_matrix_rank(std::vector<std::vector<std::int64_t>> matrix);

}  // namespace thmc

#endif
