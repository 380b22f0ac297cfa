#include "thmc/suff_stat.hpp"

#include <numeric>
#include <stdexcept>

namespace thmc {

std::int64_t SuffStat::total() const {
  return std::accumulate(initial.begin(), initial.end(), std::int64_t{0});
}

std::vector<std::int64_t> SuffStat::flat() const {
  std::vector<std::int64_t> out = initial;
  out.insert(out.end(), transitions.begin(), transitions.end());
  return out;
}

SuffStat suff_stat(const PathTable& table) {
  SuffStat b(table.S());
  const int T = table.T();
  for (const auto& [path, count] : table.cells()) {
    const std::vector<int> w = decode_path(path, table.S(), T);
    b.initial[static_cast<std::size_t>(w[0] - 1)] += count;
    for (int t = 0; t + 1 < T; ++t) b.trans(w[t], w[t + 1]) += count;
  }
  return b;
}

std::vector<std::int64_t> slice_transition_counts(const PathTable& table, int t) {
  const int S = table.S(), T = table.T();
  if (t < 1 || t > T - 1) throw std::invalid_argument("slice index out of 1..T-1");
  std::vector<std::int64_t> out(static_cast<std::size_t>(S) * S, 0);
  for (const auto& [path, count] : table.cells()) {
    const int i = state_at(path, S, T, t);
    const int j = state_at(path, S, T, t + 1);
    out[static_cast<std::size_t>(i - 1) * S + (j - 1)] += count;
  }
  return out;
}

std::vector<std::int64_t> node_counts(const PathTable& table, int t) {
  const int S = table.S(), T = table.T();
  if (t < 1 || t > T) throw std::invalid_argument("time index out of 1..T");
  std::vector<std::int64_t> out(static_cast<std::size_t>(S), 0);
  for (const auto& [path, count] : table.cells())
    out[static_cast<std::size_t>(state_at(path, S, T, t) - 1)] += count;
  return out;
}

}  // namespace thmc
