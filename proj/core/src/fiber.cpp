#include "thmc/fiber.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>
#include <unordered_map>

#include "thmc/errors.hpp"

namespace thmc {

namespace {

std::uint64_t table_key_hash(const std::vector<std::pair<PathIndex, std::int64_t>>& e) {
  std::uint64_t h = 1469598103934665603ull;
  for (const auto& [path, count] : e) {
    h ^= path + 0x9e3779b97f4a7c15ull;
    h *= 1099511628211ull;
    h ^= static_cast<std::uint64_t>(count);
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

Fiber enumerate_fiber(const SuffStat& b, int n_states, int length,
                      std::int64_t work_cap) {
  if (b.S != n_states) throw std::invalid_argument("suff stat has wrong S");
  const PathIndex cells = num_paths(n_states, length);
  const std::int64_t n_total = b.total();
  std::int64_t trans_total = 0;
  for (std::int64_t v : b.transitions) {
    if (v < 0) throw std::invalid_argument("negative sufficient statistic");
    trans_total += v;
  }
  Fiber fiber{.b = b, .S = 0, .T = 0, .N = 0, .members = {}};
  fiber.S = n_states;
  fiber.T = length;
  fiber.N = n_total;
  if (trans_total != (length - 1) * n_total) return fiber;  // infeasible b
  if (n_total == 0) {
    fiber.members.push_back(PathTable(n_states, length));
    return fiber;
  }
  if (n_total * static_cast<std::int64_t>(cells) > work_cap)
    throw CapExceededError("fiber enumeration exceeds the work cap");

  // per-path column of A, as (row, coefficient) pairs
  const int n_rows = n_states + n_states * n_states;
  std::vector<std::vector<std::pair<int, std::int8_t>>> columns(
      static_cast<std::size_t>(cells));
  for (PathIndex w = 0; w < cells; ++w) {
    const std::vector<int> path = decode_path(w, n_states, length);
    std::vector<std::int8_t> dense(static_cast<std::size_t>(n_rows), 0);
    dense[static_cast<std::size_t>(path[0] - 1)] = 1;
    for (int t = 0; t + 1 < length; ++t)
      ++dense[static_cast<std::size_t>(n_states + (path[t] - 1) * n_states +
                                       (path[t + 1] - 1))];
    for (int r = 0; r < n_rows; ++r)
      if (dense[static_cast<std::size_t>(r)] != 0)
        columns[static_cast<std::size_t>(w)].emplace_back(
            r, dense[static_cast<std::size_t>(r)]);
  }

  std::vector<std::int64_t> budget = b.flat();
  std::vector<std::pair<PathIndex, std::int64_t>> current;
  std::int64_t work = 0;

  auto fits = [&](PathIndex w) {
    for (const auto& [r, c] : columns[static_cast<std::size_t>(w)])
      if (budget[static_cast<std::size_t>(r)] < c) return false;
    return true;
  };
  auto take = [&](PathIndex w, int sign) {
    for (const auto& [r, c] : columns[static_cast<std::size_t>(w)])
      budget[static_cast<std::size_t>(r)] -= sign * c;
  };

  auto rec = [&](auto&& self, PathIndex start, std::int64_t remaining) -> void {
    if (remaining == 0) {
      fiber.members.push_back(
          PathTable::from_counts(n_states, length, current));
      return;
    }
    for (PathIndex w = start; w < cells; ++w) {
      if (++work > work_cap)
        throw CapExceededError("fiber enumeration exceeds the work cap");
      if (!fits(w)) continue;
      take(w, +1);
      if (!current.empty() && current.back().first == w)
        ++current.back().second;
      else
        current.emplace_back(w, 1);
      self(self, w, remaining - 1);
      if (current.back().second > 1)
        --current.back().second;
      else
        current.pop_back();
      take(w, -1);
    }
  };
  rec(rec, 0, n_total);
  return fiber;
}

ConnectivityReport check_connectivity(const Fiber& fiber,
                                      const BasisDescriptor& basis) {
  ConnectivityReport report;
  report.component.assign(fiber.members.size(), -1);
  if (fiber.members.empty()) {
    report.connected = true;
    return report;
  }

  std::unordered_map<std::uint64_t, std::vector<std::size_t>> index;
  std::vector<std::vector<std::pair<PathIndex, std::int64_t>>> keys;
  keys.reserve(fiber.members.size());
  for (std::size_t k = 0; k < fiber.members.size(); ++k) {
    keys.push_back(fiber.members[k].entries());
    index[table_key_hash(keys.back())].push_back(k);
  }
  auto find_member = [&](const PathTable& table) -> std::ptrdiff_t {
    const auto entries = table.entries();
    auto it = index.find(table_key_hash(entries));
    if (it == index.end()) return -1;
    for (std::size_t k : it->second)
      if (keys[k] == entries) return static_cast<std::ptrdiff_t>(k);
    return -1;
  };
  auto feasible_apply = [&](const PathTable& table, const Move& move,
                            int sign) -> std::ptrdiff_t {
    for (const auto& [path, value] : move.delta())
      if (table.count(path) + sign * value < 0) return -1;
    return find_member(apply_move(table, move, sign));
  };

  int n_components = 0;
  for (std::size_t root = 0; root < fiber.members.size(); ++root) {
    if (report.component[root] >= 0) continue;
    const int comp = n_components++;
    std::queue<std::size_t> queue;
    queue.push(root);
    report.component[root] = comp;
    while (!queue.empty()) {
      const std::size_t at = queue.front();
      queue.pop();
      for (const Move& z : applicable_moves(fiber.members[at], basis)) {
        for (int sign : {+1, -1}) {
          const std::ptrdiff_t next =
              feasible_apply(fiber.members[at], z, sign);
          if (next >= 0 && report.component[static_cast<std::size_t>(next)] < 0) {
            report.component[static_cast<std::size_t>(next)] = comp;
            queue.push(static_cast<std::size_t>(next));
          }
        }
      }
    }
  }
  report.n_components = n_components;
  report.connected = n_components <= 1;
  return report;
}

std::vector<double> exact_conditional(const Fiber& fiber) {
  if (fiber.N > 20)
    throw CapExceededError("exact conditional weights need N <= 20");
  auto binomial = [](std::int64_t n, std::int64_t k) {
    unsigned long long out = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
      const unsigned __int128 next =
          static_cast<unsigned __int128>(out) *
          static_cast<unsigned long long>(n - k + i) /
          static_cast<unsigned long long>(i);
      out = static_cast<unsigned long long>(next);
    }
    return out;
  };
  std::vector<unsigned long long> weights;
  unsigned __int128 total = 0;
  for (const PathTable& member : fiber.members) {
    unsigned long long w = 1;
    std::int64_t placed = 0;
    for (const auto& [path, count] : member.cells()) {
      placed += count;
      w *= binomial(placed, count);  // multinomial coefficient N!/prod x!
    }
    weights.push_back(w);
    total += w;
  }
  std::vector<double> out;
  out.reserve(weights.size());
  const long double denom = static_cast<long double>(total);
  for (unsigned long long w : weights)
    out.push_back(static_cast<double>(static_cast<long double>(w) / denom));
  return out;
}

std::int64_t l1_move_norm(const PathTable& x, const PathTable& y) {
  if (x.S() != y.S() || x.T() != y.T())
    throw std::invalid_argument("tables with mixed (S, T)");
  std::int64_t out = 0;
  for (int t = 1; t <= x.T() - 1; ++t) {
    const auto ex = slice_transition_counts(x, t);
    const auto ey = slice_transition_counts(y, t);
    for (std::size_t k = 0; k < ex.size(); ++k)
      out += std::abs(ex[k] - ey[k]);
  }
  return out;
}

}  // namespace thmc
