#include "thmc/move.hpp"

#include <algorithm>
#include <stdexcept>

#include "thmc/errors.hpp"
#include "thmc/suff_stat.hpp"

namespace thmc {

Move::Move(int n_states, int length,
           std::vector<std::pair<PathIndex, std::int64_t>> delta)
    : n_states_(n_states), length_(length) {
  const PathIndex cells = num_paths(n_states, length);
  std::sort(delta.begin(), delta.end());
  for (const auto& [path, value] : delta) {
    if (path >= cells) throw std::invalid_argument("path index out of range");
    if (value == 0) continue;
    if (!delta_.empty() && delta_.back().first == path)
      delta_.back().second += value;
    else
      delta_.emplace_back(path, value);
    if (delta_.back().second == 0) delta_.pop_back();
  }
}

std::int64_t Move::coefficient(PathIndex path) const {
  auto it = std::lower_bound(
      delta_.begin(), delta_.end(), path,
      [](const auto& entry, PathIndex p) { return entry.first < p; });
  return (it != delta_.end() && it->first == path) ? it->second : 0;
}

Move Move::negated() const {
  auto d = delta_;
  for (auto& [path, value] : d) value = -value;
  return Move(n_states_, length_, std::move(d));
}

Move Move::canonical() const {
  if (!delta_.empty() && delta_.front().second < 0) return negated();
  return *this;
}

bool Move::operator<(const Move& other) const { return delta_ < other.delta_; }

Move move_from_path_lists(int n_states, int length,
                          const std::vector<PathIndex>& plus,
                          const std::vector<PathIndex>& minus) {
  std::vector<std::pair<PathIndex, std::int64_t>> delta;
  delta.reserve(plus.size() + minus.size());
  for (PathIndex p : plus) delta.emplace_back(p, 1);
  for (PathIndex p : minus) delta.emplace_back(p, -1);
  return Move(n_states, length, std::move(delta));
}

PathTable apply_move(const PathTable& table, const Move& move, int sign) {
  if (table.S() != move.S() || table.T() != move.T())
    throw std::invalid_argument("table and move shapes differ");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +-1");
  PathTable out = table;
  for (const auto& [path, value] : move.delta())
    out.add(path, sign * value);  // throws NegativityError on underflow
  return out;
}

bool is_valid_move(const Move& move) {
  const int S = move.S(), T = move.T();
  std::vector<std::int64_t> initial(static_cast<std::size_t>(S), 0);
  std::vector<std::int64_t> pooled(static_cast<std::size_t>(S) * S, 0);
  for (const auto& [path, value] : move.delta()) {
    const std::vector<int> w = decode_path(path, S, T);
    initial[static_cast<std::size_t>(w[0] - 1)] += value;
    for (int t = 0; t + 1 < T; ++t)
      pooled[static_cast<std::size_t>(w[t] - 1) * S + (w[t + 1] - 1)] += value;
  }
  for (std::int64_t v : initial)
    if (v != 0) return false;
  for (std::int64_t v : pooled)
    if (v != 0) return false;
  return true;
}

std::vector<std::int64_t> edge_deltas(const Move& move) {
  const int S = move.S(), T = move.T();
  std::vector<std::int64_t> out(
      static_cast<std::size_t>(T - 1) * S * S, 0);
  for (const auto& [path, value] : move.delta()) {
    const std::vector<int> w = decode_path(path, S, T);
    for (int t = 0; t + 1 < T; ++t)
      out[(static_cast<std::size_t>(t) * S + (w[t] - 1)) * S + (w[t + 1] - 1)] +=
          value;
  }
  return out;
}

std::vector<std::int64_t> node_deltas(const Move& move) {
  const int S = move.S(), T = move.T();
  std::vector<std::int64_t> out(static_cast<std::size_t>(T) * S, 0);
  for (const auto& [path, value] : move.delta()) {
    const std::vector<int> w = decode_path(path, S, T);
    for (int t = 0; t < T; ++t)
      out[static_cast<std::size_t>(t) * S + (w[t] - 1)] += value;
  }
  return out;
}

}  // namespace thmc
