#include "thmc/table.hpp"

#include <stdexcept>

#include "thmc/errors.hpp"

namespace thmc {

PathTable::PathTable(int n_states, int length)
    : n_states_(n_states), length_(length) {
  if (n_states < 2) throw std::invalid_argument("need at least 2 states");
  if (length < 3) throw std::invalid_argument("need path length T >= 3");
  num_paths(n_states, length);  // size sanity
}

PathTable PathTable::from_paths(const std::vector<StatePath>& paths) {
  if (paths.empty()) throw std::invalid_argument("empty path list");
  PathTable table(paths.front().S(), paths.front().T());
  for (const StatePath& p : paths) {
    if (p.S() != table.S() || p.T() != table.T())
      throw std::invalid_argument("paths with mixed (S, T)");
    table.add(p.index(), 1);
  }
  return table;
}

PathTable PathTable::from_counts(
    int n_states, int length,
    const std::vector<std::pair<PathIndex, std::int64_t>>& counts) {
  PathTable table(n_states, length);
  for (const auto& [path, c] : counts) table.add(path, c);
  return table;
}

std::int64_t PathTable::count(PathIndex path) const {
  auto it = cells_.find(path);
  return it == cells_.end() ? 0 : it->second;
}

void PathTable::add(PathIndex path, std::int64_t delta) {
  if (path >= num_paths(n_states_, length_))
    throw std::invalid_argument("path index out of range");
  if (delta == 0) return;
  auto [it, inserted] = cells_.try_emplace(path, 0);
  it->second += delta;
  if (it->second < 0) {
    it->second -= delta;
    if (inserted) cells_.erase(it);
    throw NegativityError("cell count would become negative");
  }
  if (it->second == 0) cells_.erase(it);
  total_ += delta;
}

std::vector<std::pair<PathIndex, std::int64_t>> PathTable::entries() const {
  return {cells_.begin(), cells_.end()};
}

}  // namespace thmc
