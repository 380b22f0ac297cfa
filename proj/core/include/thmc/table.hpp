#ifndef THMC_TABLE_HPP
#define THMC_TABLE_HPP

#include <cstdint>
#include <map>
#include <vector>

#include "thmc/path.hpp"

namespace thmc {

// Sparse nonnegative-integer contingency table over the S^T path cells:
// a multiset of N observed paths.  Zero cells are never stored.
class PathTable {
public:
  PathTable(int n_states, int length);

  static PathTable from_paths(const std::vector<StatePath>& paths);
  static PathTable from_counts(
      int n_states, int length,
      const std::vector<std::pair<PathIndex, std::int64_t>>& counts);

  int S() const { return n_states_; }
  int T() const { return length_; }
  std::int64_t total() const { return total_; }

  std::int64_t count(PathIndex path) const;
  // Adds delta to a cell; the result must stay nonnegative.
  void add(PathIndex path, std::int64_t delta);

  const std::map<PathIndex, std::int64_t>& cells() const { return cells_; }
  std::size_t support_size() const { return cells_.size(); }

  // Sorted (path index, count) pairs; usable as a canonical key.
  std::vector<std::pair<PathIndex, std::int64_t>> entries() const;

  bool operator==(const PathTable& other) const = default;

private:
  std::map<PathIndex, std::int64_t> cells_;
  std::int64_t total_ = 0;
  int n_states_;
  int length_;
};

}  // namespace thmc

#endif
