#ifndef THMC_PATH_HPP
#define THMC_PATH_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace thmc {

// Index of a path in the lexicographic order over states 1 < 2 < ... < S:
// index(w) = sum_t (s_t - 1) * S^(T-t).  This matches the column order of
// the configuration matrix and of move files.
using PathIndex = std::uint64_t;

// Number of length-T paths over S states, i.e. S^T.  Throws CapExceededError
// if the value would not fit comfortably in a PathIndex.
PathIndex num_paths(int n_states, int length);

PathIndex path_index(const std::vector<int>& states, int n_states);
std::vector<int> decode_path(PathIndex index, int n_states, int length);

// State at 1-based time t of the path with the given index.
int state_at(PathIndex index, int n_states, int length, int t);

// One observed chain trajectory (s_1, ..., s_T), states in 1..S, T >= 3.
class StatePath {
public:
  StatePath(std::vector<int> states, int n_states);
  static StatePath from_index(PathIndex index, int n_states, int length);

  int S() const { return n_states_; }
  int T() const { return static_cast<int>(states_.size()); }
  const std::vector<int>& states() const { return states_; }
  int at(int t) const { return states_[static_cast<std::size_t>(t) - 1]; }
  PathIndex index() const;

  // Digits without separators, e.g. "1121"; states >= 10 are dot-separated.
  std::string to_string() const;

  bool operator==(const StatePath& other) const = default;

private:
  std::vector<int> states_;
  int n_states_;
};

}  // namespace thmc

#endif
