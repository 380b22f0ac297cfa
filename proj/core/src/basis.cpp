#include "thmc/basis.hpp"

#include <algorithm>
#include <array>
#include <set>
#include <stdexcept>

#include "thmc/configuration.hpp"
#include "thmc/errors.hpp"

namespace thmc {

namespace {

struct Edge {
  int src = 0;
  int tgt = 0;
  bool operator<(const Edge& o) const {
    return src != o.src ? src < o.src : tgt < o.tgt;
  }
  bool operator==(const Edge& o) const = default;
};

// One path unit together with transition overrides at selected layers
// (layer r in 1..T-1 is the transition from time r to r+1).
struct Unit {
  std::vector<int> states;
  std::vector<std::pair<int, Edge>> overrides;
};

bool passes_edge(const std::vector<int>& w, int layer, int src, int tgt) {
  return w[static_cast<std::size_t>(layer) - 1] == src &&
         w[static_cast<std::size_t>(layer)] == tgt;
}

// Applies the overrides and re-splices the unit segments layer by layer.
// The override sets used here always preserve, at every layer, the multiset
// of transition sources among the involved units, so the greedy matching
// below cannot get stuck; re-splicings that differ in tie-breaking differ
// only by crossing path swappings.
std::vector<std::vector<int>> reassemble(int length,
                                         const std::vector<Unit>& units) {
  const std::size_t k = units.size();
  std::vector<std::vector<Edge>> trans(k);
  for (std::size_t u = 0; u < k; ++u) {
    trans[u].resize(static_cast<std::size_t>(length));
    for (int r = 1; r < length; ++r)
      trans[u][static_cast<std::size_t>(r)] = {
          units[u].states[static_cast<std::size_t>(r) - 1],
          units[u].states[static_cast<std::size_t>(r)]};
    for (const auto& [layer, edge] : units[u].overrides)
      trans[u][static_cast<std::size_t>(layer)] = edge;
  }

  std::vector<std::vector<int>> out(k);
  for (std::size_t u = 0; u < k; ++u) out[u] = {units[u].states[0]};
  std::vector<std::pair<Edge, std::size_t>> pool(k);
  for (int r = 1; r < length; ++r) {
    for (std::size_t u = 0; u < k; ++u)
      pool[u] = {trans[u][static_cast<std::size_t>(r)], u};
    std::sort(pool.begin(), pool.end());
    std::array<bool, 8> used{};
    for (std::size_t u = 0; u < k; ++u) {
      const int at = out[u].back();
      bool found = false;
      for (std::size_t p = 0; p < k; ++p) {
        if (!used[p] && pool[p].first.src == at) {
          used[p] = true;
          out[u].push_back(pool[p].first.tgt);
          found = true;
          break;
        }
      }
      if (!found)
        throw std::invalid_argument("inconsistent completions for swap move");
    }
  }
  return out;
}

Move surgery_move(int n_states, int length, const std::vector<Unit>& units) {
  std::vector<std::pair<PathIndex, std::int64_t>> delta;
  delta.reserve(2 * units.size());
  for (const Unit& u : units)
    delta.emplace_back(path_index(u.states, n_states), 1);
  for (const auto& w : reassemble(length, units))
    delta.emplace_back(path_index(w, n_states), -1);
  return Move(n_states, length, std::move(delta));
}

struct Type4Blocks {
  std::array<int, 3> first;
  std::array<int, 3> second;
};

Type4Blocks type4_blocks(bool relabeled) {
  if (relabeled) return {{2, 2, 1}, {2, 1, 1}};
  return {{1, 1, 2}, {1, 2, 2}};
}

bool passes_block(const std::vector<int>& w, int t, const std::array<int, 3>& b) {
  return w[static_cast<std::size_t>(t) - 1] == b[0] &&
         w[static_cast<std::size_t>(t)] == b[1] &&
         w[static_cast<std::size_t>(t) + 1] == b[2];
}

// Membership resolution of the T=3 permutation move (the W1/W2 sets).
struct MPermPaths {
  std::vector<std::array<int, 3>> w1;
  std::vector<std::array<int, 3>> w2;
};

MPermPaths resolve_m_permutation(const std::vector<int>& i_list,
                                 const std::vector<int>& j_list,
                                 const std::vector<int>& fills_i,
                                 const std::vector<int>& fills_j) {
  const int m = static_cast<int>(i_list.size());
  auto pos = [](const std::vector<int>& list, int v) {
    for (int k = 0; k < static_cast<int>(list.size()); ++k)
      if (list[static_cast<std::size_t>(k)] == v) return k;
    return -1;
  };
  auto cyc = [m](int k) { return ((k % m) + m) % m; };

  int max_state = 0;
  for (int s : i_list) max_state = std::max(max_state, s);
  for (int s : j_list) max_state = std::max(max_state, s);
  std::vector<int> both, only_i, only_j;
  for (int s = 1; s <= max_state; ++s) {
    const bool in_i = pos(i_list, s) >= 0, in_j = pos(j_list, s) >= 0;
    if (in_i && in_j) both.push_back(s);
    else if (in_i) only_i.push_back(s);
    else if (in_j) only_j.push_back(s);
  }
  if (fills_i.size() != only_i.size() || fills_j.size() != only_j.size())
    throw std::invalid_argument("permutation fill lists have wrong length");

  MPermPaths out;
  for (int j : both) {
    const int a = pos(i_list, j);  // j = i_a
    const int b = pos(j_list, j);  // j = j_b
    out.w1.push_back({i_list[static_cast<std::size_t>(b)], j,
                      j_list[static_cast<std::size_t>(cyc(a - 1))]});
    out.w2.push_back({i_list[static_cast<std::size_t>(cyc(b + 1))], j,
                      j_list[static_cast<std::size_t>(a)]});
  }
  for (std::size_t k = 0; k < only_i.size(); ++k) {
    const int j = only_i[k];
    const int a = pos(i_list, j);
    out.w1.push_back({fills_i[k], j, j_list[static_cast<std::size_t>(cyc(a - 1))]});
    out.w2.push_back({fills_i[k], j, j_list[static_cast<std::size_t>(a)]});
  }
  for (std::size_t k = 0; k < only_j.size(); ++k) {
    const int j = only_j[k];
    const int b = pos(j_list, j);
    out.w1.push_back({i_list[static_cast<std::size_t>(b)], j, fills_j[k]});
    out.w2.push_back({i_list[static_cast<std::size_t>(cyc(b + 1))], j, fills_j[k]});
  }
  return out;
}

void check_distinct_states(const std::vector<int>& list, int n_states) {
  for (std::size_t a = 0; a < list.size(); ++a) {
    if (list[a] < 1 || list[a] > n_states)
      throw std::invalid_argument("permutation state out of range");
    for (std::size_t b = a + 1; b < list.size(); ++b)
      if (list[a] == list[b])
        throw std::invalid_argument("permutation states must be distinct");
  }
}

}  // namespace

const char* move_kind_name(MoveKind kind) {
  switch (kind) {
    case MoveKind::CrossingSwap: return "crossing-swap";
    case MoveKind::DegreeOne: return "degree-one";
    case MoveKind::TwoByTwoSwap: return "2x2-swap";
    case MoveKind::Type4Swap: return "partial-path-swap";
    case MoveKind::MPermutation: return "m-permutation";
  }
  return "?";
}

Move crossing_swap(const StatePath& a, const StatePath& b, int t) {
  if (a.S() != b.S() || a.T() != b.T())
    throw std::invalid_argument("paths with mixed (S, T)");
  return crossing_swap(a.S(), a.T(), a.index(), b.index(), t);
}

Move crossing_swap(int n_states, int length, PathIndex a, PathIndex b, int t) {
  if (t < 1 || t > length) throw std::invalid_argument("crossing time out of range");
  std::vector<int> wa = decode_path(a, n_states, length);
  std::vector<int> wb = decode_path(b, n_states, length);
  if (wa[static_cast<std::size_t>(t) - 1] != wb[static_cast<std::size_t>(t) - 1])
    throw std::invalid_argument("paths do not cross at t");
  std::vector<int> na(wa.begin(), wa.begin() + t), nb(wb.begin(), wb.begin() + t);
  na.insert(na.end(), wb.begin() + t, wb.end());
  nb.insert(nb.end(), wa.begin() + t, wa.end());
  return move_from_path_lists(
      n_states, length, {a, b},
      {path_index(na, n_states), path_index(nb, n_states)});
}

Move two_by_two_swap(int n_states, int length, int t, int tp, int i1, int j1,
                     int i2, int j2, PathIndex w1, PathIndex w2, PathIndex w3,
                     PathIndex w4, SwapMerge merge) {
  if (!(1 <= t && t < tp && tp <= length - 1))
    throw std::invalid_argument("need 1 <= t < t' <= T-1");
  if (i1 == i2 || j1 == j2)
    throw std::invalid_argument("need i1 != i2 and j1 != j2");
  for (int s : {i1, i2, j1, j2})
    if (s < 1 || s > n_states) throw std::invalid_argument("state out of range");

  const std::array<PathIndex, 4> slot_path{w1, w2, w3, w4};
  const std::array<int, 4> slot_layer{t, t, tp, tp};
  const std::array<Edge, 4> slot_edge{Edge{i1, j1}, Edge{i2, j2},
                                      Edge{i1, j2}, Edge{i2, j1}};
  const std::array<Edge, 4> slot_new{Edge{i1, j2}, Edge{i2, j1},
                                     Edge{i1, j1}, Edge{i2, j2}};

  std::array<int, 4> group{0, 1, 2, 3};
  auto merge_pair = [&](int a, int b) { group[static_cast<std::size_t>(b)] = group[static_cast<std::size_t>(a)]; };
  switch (merge) {
    case SwapMerge::None: break;
    case SwapMerge::Merge13: merge_pair(0, 2); break;
    case SwapMerge::Merge14: merge_pair(0, 3); break;
    case SwapMerge::Merge23: merge_pair(1, 2); break;
    case SwapMerge::Merge24: merge_pair(1, 3); break;
    case SwapMerge::Merge13And24: merge_pair(0, 2); merge_pair(1, 3); break;
    case SwapMerge::Merge14And23: merge_pair(0, 3); merge_pair(1, 2); break;
  }

  std::vector<Unit> units;
  std::array<int, 4> unit_of{-1, -1, -1, -1};
  for (int s = 0; s < 4; ++s) {
    const int g = group[static_cast<std::size_t>(s)];
    if (unit_of[static_cast<std::size_t>(g)] < 0) {
      unit_of[static_cast<std::size_t>(g)] = static_cast<int>(units.size());
      units.push_back({decode_path(slot_path[static_cast<std::size_t>(s)],
                                   n_states, length),
                       {}});
    } else if (slot_path[static_cast<std::size_t>(s)] !=
               slot_path[static_cast<std::size_t>(g)]) {
      throw std::invalid_argument("merged slots must share one path");
    }
    Unit& u = units[static_cast<std::size_t>(
        unit_of[static_cast<std::size_t>(g)])];
    if (!passes_edge(u.states, slot_layer[static_cast<std::size_t>(s)],
                     slot_edge[static_cast<std::size_t>(s)].src,
                     slot_edge[static_cast<std::size_t>(s)].tgt))
      throw std::invalid_argument("completion path misses its slot edge");
    u.overrides.emplace_back(slot_layer[static_cast<std::size_t>(s)],
                             slot_new[static_cast<std::size_t>(s)]);
  }
  return surgery_move(n_states, length, units);
}

Move type4_move(int length, int t, int tp, PathIndex w_first,
                PathIndex w_second, bool relabeled) {
  constexpr int n_states = 2;
  if (t < 1 || t > length - 2 || tp < 1 || tp > length - 2 || t == tp)
    throw std::invalid_argument("need distinct t, t' in 1..T-2");
  const Type4Blocks blocks = type4_blocks(relabeled);
  std::vector<int> wa = decode_path(w_first, n_states, length);
  std::vector<int> wb = decode_path(w_second, n_states, length);
  if (!passes_block(wa, t, blocks.first) || !passes_block(wb, tp, blocks.second))
    throw std::invalid_argument("completion path misses its block");

  Unit ua{std::move(wa),
          {{t, {blocks.second[0], blocks.second[1]}},
           {t + 1, {blocks.second[1], blocks.second[2]}}}};
  Unit ub{std::move(wb),
          {{tp, {blocks.first[0], blocks.first[1]}},
           {tp + 1, {blocks.first[1], blocks.first[2]}}}};
  return surgery_move(n_states, length, {std::move(ua), std::move(ub)});
}

Move m_permutation(int n_states, const std::vector<int>& i_list,
                   const std::vector<int>& j_list,
                   const std::vector<int>& fills_i,
                   const std::vector<int>& fills_j) {
  constexpr int length = 3;
  const std::size_t m = i_list.size();
  if (m < 2 || m != j_list.size() || m > static_cast<std::size_t>(n_states))
    throw std::invalid_argument("need distinct index lists of equal size 2..S");
  check_distinct_states(i_list, n_states);
  check_distinct_states(j_list, n_states);
  for (int s : fills_i)
    if (s < 1 || s > n_states) throw std::invalid_argument("fill state out of range");
  for (int s : fills_j)
    if (s < 1 || s > n_states) throw std::invalid_argument("fill state out of range");

  const MPermPaths sets = resolve_m_permutation(i_list, j_list, fills_i, fills_j);
  std::vector<PathIndex> plus, minus;
  for (const auto& w : sets.w1)
    plus.push_back(path_index({w[0], w[1], w[2]}, n_states));
  for (const auto& w : sets.w2)
    minus.push_back(path_index({w[0], w[1], w[2]}, n_states));
  return move_from_path_lists(n_states, length, plus, minus);
}

bool BasisDescriptor::has(MoveKind kind) const {
  return std::find(families_.begin(), families_.end(), kind) != families_.end();
}

void BasisDescriptor::refresh_active() {
  active_.clear();
  for (MoveKind kind : families_) {
    if (kind == MoveKind::DegreeOne && classes_.empty()) continue;
    if (kind == MoveKind::MPermutation && mperm_sizes_.empty()) continue;
    active_.push_back(kind);
  }
}

BasisDescriptor BasisDescriptor::external(int n_states, int length,
                                          std::vector<Move> moves) {
  if (moves.empty()) throw std::invalid_argument("empty external move list");
  BasisDescriptor basis(n_states, length);
  for (std::size_t k = 0; k < moves.size(); ++k) {
    if (moves[k].S() != n_states || moves[k].T() != length)
      throw std::invalid_argument("external move shape mismatch");
    if (!is_valid_move(moves[k]))
      throw std::invalid_argument("external move " + std::to_string(k + 1) +
                                  " violates A z = 0");
  }
  basis.external_ = std::move(moves);
  return basis;
}

BasisDescriptor BasisDescriptor::without(MoveKind kind) const {
  BasisDescriptor out = *this;
  std::erase(out.families_, kind);
  if (kind == MoveKind::DegreeOne) out.classes_.clear();
  if (kind == MoveKind::MPermutation) out.mperm_sizes_.clear();
  out.refresh_active();
  return out;
}

BasisDescriptor BasisDescriptor::without_mperm(int m) const {
  BasisDescriptor out = *this;
  std::erase(out.mperm_sizes_, m);
  out.refresh_active();
  return out;
}

BasisDescriptor markov_basis(int n_states, int length) {
  BasisDescriptor basis(n_states, length);
  if (n_states == 2 && length >= 3) {
    basis.families_ = {MoveKind::CrossingSwap, MoveKind::DegreeOne,
                       MoveKind::TwoByTwoSwap};
    if (length >= 4) basis.families_.push_back(MoveKind::Type4Swap);
    basis.classes_ =
        identical_column_classes(Configuration::build(n_states, length));
  } else if (length == 3) {
    basis.families_ = {MoveKind::CrossingSwap, MoveKind::MPermutation};
    for (int m = 2; m <= n_states; ++m) basis.mperm_sizes_.push_back(m);
  } else {
    throw UnsupportedShapeError(
        "no closed-form Markov basis for S=" + std::to_string(n_states) +
        ", T=" + std::to_string(length) +
        "; compute one externally (e.g. with 4ti2) and import it as a move "
        "file via --moves");
  }
  basis.refresh_active();
  return basis;
}

namespace {

// Uniform path with pinned positions; pos/state lists are 1-based times.
PathIndex random_pinned_path(int n_states, int length, Rng& rng,
                             const std::vector<std::pair<int, int>>& pins) {
  std::vector<int> w(static_cast<std::size_t>(length), 0);
  for (const auto& [pos, state] : pins) {
    int& slot = w[static_cast<std::size_t>(pos) - 1];
    if (slot != 0 && slot != state) return PathIndex(~0ull);  // infeasible
    slot = state;
  }
  for (int& s : w)
    if (s == 0) s = rng.state(n_states);
  return path_index(w, n_states);
}

std::vector<std::pair<int, int>> edge_pins(int layer, Edge e) {
  return {{layer, e.src}, {layer + 1, e.tgt}};
}

Move zero_move(int n_states, int length) { return Move(n_states, length, {}); }

Move random_crossing(int n_states, int length, Rng& rng) {
  const int t = length == 3 ? 2 : 2 + static_cast<int>(rng.below(
                                          static_cast<std::uint64_t>(length - 2)));
  const PathIndex a = rng.below(num_paths(n_states, length));
  const int s = state_at(a, n_states, length, t);
  const PathIndex b = random_pinned_path(n_states, length, rng, {{t, s}});
  return crossing_swap(n_states, length, a, b, t);
}

Move random_degree_one(const BasisDescriptor& basis, Rng& rng) {
  const auto& classes = basis.degree_one_classes();
  const auto& cls = classes[rng.below(classes.size())];
  const std::size_t a = rng.below(cls.size());
  std::size_t b = rng.below(cls.size() - 1);
  if (b >= a) ++b;
  return move_from_path_lists(basis.S(), basis.T(), {cls[a]}, {cls[b]});
}

Move random_two_by_two(int n_states, int length, Rng& rng) {
  int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(length - 1)));
  int tp = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(length - 2)));
  if (tp >= t) ++tp;
  if (t > tp) std::swap(t, tp);
  const int i1 = rng.state(n_states);
  int i2 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states - 1)));
  if (i2 >= i1) ++i2;
  const int j1 = rng.state(n_states);
  int j2 = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(n_states - 1)));
  if (j2 >= j1) ++j2;

  const auto merge = static_cast<SwapMerge>(rng.below(7));
  const std::array<Edge, 4> edges{Edge{i1, j1}, Edge{i2, j2}, Edge{i1, j2},
                                  Edge{i2, j1}};
  std::array<int, 4> group{0, 1, 2, 3};
  switch (merge) {
    case SwapMerge::None: break;
    case SwapMerge::Merge13: group[2] = 0; break;
    case SwapMerge::Merge14: group[3] = 0; break;
    case SwapMerge::Merge23: group[2] = 1; break;
    case SwapMerge::Merge24: group[3] = 1; break;
    case SwapMerge::Merge13And24: group[2] = 0; group[3] = 1; break;
    case SwapMerge::Merge14And23: group[3] = 0; group[2] = 1; break;
  }
  std::array<PathIndex, 4> slot{};
  for (int g = 0; g < 4; ++g) {
    std::vector<std::pair<int, int>> pins;
    bool mine = false;
    for (int s = 0; s < 4; ++s) {
      if (group[static_cast<std::size_t>(s)] != g) continue;
      mine = true;
      const int layer = s < 2 ? t : tp;
      for (auto pin : edge_pins(layer, edges[static_cast<std::size_t>(s)]))
        pins.push_back(pin);
    }
    if (!mine) continue;
    const PathIndex w = random_pinned_path(n_states, length, rng, pins);
    if (w == PathIndex(~0ull)) return zero_move(n_states, length);
    for (int s = 0; s < 4; ++s)
      if (group[static_cast<std::size_t>(s)] == g)
        slot[static_cast<std::size_t>(s)] = w;
  }
  return two_by_two_swap(n_states, length, t, tp, i1, j1, i2, j2, slot[0],
                         slot[1], slot[2], slot[3], merge);
}

Move random_type4(int length, Rng& rng) {
  const bool relabeled = rng.coin();
  int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(length - 2)));
  int tp = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(length - 3)));
  if (tp >= t) ++tp;
  const Type4Blocks blocks = type4_blocks(relabeled);
  const PathIndex w1 = random_pinned_path(
      2, length, rng,
      {{t, blocks.first[0]}, {t + 1, blocks.first[1]}, {t + 2, blocks.first[2]}});
  const PathIndex w2 = random_pinned_path(
      2, length, rng,
      {{tp, blocks.second[0]}, {tp + 1, blocks.second[1]}, {tp + 2, blocks.second[2]}});
  return type4_move(length, t, tp, w1, w2, relabeled);
}

Move random_mperm(int n_states, const BasisDescriptor& basis, Rng& rng) {
  const auto& sizes = basis.mperm_sizes();
  const int m = sizes[rng.below(sizes.size())];
  auto draw_tuple = [&](int count) {
    std::vector<int> all(static_cast<std::size_t>(n_states));
    for (int s = 0; s < n_states; ++s) all[static_cast<std::size_t>(s)] = s + 1;
    std::vector<int> out;
    for (int k = 0; k < count; ++k) {
      const std::size_t pick = rng.below(all.size());
      out.push_back(all[pick]);
      all.erase(all.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    return out;
  };
  const std::vector<int> i_list = draw_tuple(m);
  const std::vector<int> j_list = draw_tuple(m);
  std::size_t n_only_i = 0, n_only_j = 0;
  for (int v : i_list)
    if (std::find(j_list.begin(), j_list.end(), v) == j_list.end()) ++n_only_i;
  for (int v : j_list)
    if (std::find(i_list.begin(), i_list.end(), v) == i_list.end()) ++n_only_j;
  std::vector<int> fills_i(n_only_i), fills_j(n_only_j);
  for (int& s : fills_i) s = rng.state(n_states);
  for (int& s : fills_j) s = rng.state(n_states);
  return m_permutation(n_states, i_list, j_list, fills_i, fills_j);
}

}  // namespace

Move random_move(const PathTable& table, const BasisDescriptor& basis,
                 Rng& rng) {
  if (table.S() != basis.S() || table.T() != basis.T())
    throw std::invalid_argument("table and basis shapes differ");
  if (basis.is_external()) {
    const auto& moves = basis.external_moves();
    return moves[rng.below(moves.size())];
  }
  const auto& active = basis.active_;
  if (active.empty()) throw std::invalid_argument("basis has no move families");
  switch (active[rng.below(active.size())]) {
    case MoveKind::CrossingSwap:
      return random_crossing(basis.S(), basis.T(), rng);
    case MoveKind::DegreeOne:
      return random_degree_one(basis, rng);
    case MoveKind::TwoByTwoSwap:
      return random_two_by_two(basis.S(), basis.T(), rng);
    case MoveKind::Type4Swap:
      return random_type4(basis.T(), rng);
    case MoveKind::MPermutation:
      return random_mperm(basis.S(), basis, rng);
  }
  return zero_move(basis.S(), basis.T());
}

namespace {

void collect_crossings(const std::vector<PathIndex>& support, int n_states,
                       int length, std::set<Move>& out) {
  for (std::size_t a = 0; a < support.size(); ++a) {
    const std::vector<int> wa = decode_path(support[a], n_states, length);
    for (std::size_t b = a + 1; b < support.size(); ++b) {
      const std::vector<int> wb = decode_path(support[b], n_states, length);
      for (int t = 2; t <= length - 1; ++t) {
        if (wa[static_cast<std::size_t>(t) - 1] != wb[static_cast<std::size_t>(t) - 1])
          continue;
        Move z = crossing_swap(n_states, length, support[a], support[b], t);
        if (!z.zero()) out.insert(z.canonical());
      }
    }
  }
}

void collect_degree_one(const std::vector<PathIndex>& support,
                        const BasisDescriptor& basis, std::set<Move>& out) {
  for (const auto& cls : basis.degree_one_classes()) {
    for (PathIndex w : support) {
      if (!std::binary_search(cls.begin(), cls.end(), w)) continue;
      for (PathIndex c : cls)
        if (c != w)
          out.insert(move_from_path_lists(basis.S(), basis.T(), {c}, {w})
                         .canonical());
    }
  }
}

void collect_two_by_two(const std::vector<PathIndex>& support, int n_states,
                        int length, std::set<Move>& out) {
  constexpr std::array<SwapMerge, 7> kMerges{
      SwapMerge::None,         SwapMerge::Merge13,     SwapMerge::Merge14,
      SwapMerge::Merge23,      SwapMerge::Merge24,     SwapMerge::Merge13And24,
      SwapMerge::Merge14And23};
  std::vector<std::vector<int>> decoded;
  decoded.reserve(support.size());
  for (PathIndex w : support) decoded.push_back(decode_path(w, n_states, length));

  for (int t = 1; t <= length - 2; ++t) {
    for (int tp = t + 1; tp <= length - 1; ++tp) {
      for (int i1 = 1; i1 <= n_states; ++i1)
        for (int i2 = i1 + 1; i2 <= n_states; ++i2)
          for (int j1 = 1; j1 <= n_states; ++j1)
            for (int j2 = 1; j2 <= n_states; ++j2) {
              if (j1 == j2) continue;
              const std::array<Edge, 4> edges{Edge{i1, j1}, Edge{i2, j2},
                                              Edge{i1, j2}, Edge{i2, j1}};
              std::array<std::vector<PathIndex>, 4> slot_cands;
              for (int s = 0; s < 4; ++s) {
                const int layer = s < 2 ? t : tp;
                for (std::size_t k = 0; k < support.size(); ++k)
                  if (passes_edge(decoded[k], layer,
                                  edges[static_cast<std::size_t>(s)].src,
                                  edges[static_cast<std::size_t>(s)].tgt))
                    slot_cands[static_cast<std::size_t>(s)].push_back(support[k]);
              }
              for (SwapMerge merge : kMerges) {
                std::array<int, 4> group{0, 1, 2, 3};
                switch (merge) {
                  case SwapMerge::None: break;
                  case SwapMerge::Merge13: group[2] = 0; break;
                  case SwapMerge::Merge14: group[3] = 0; break;
                  case SwapMerge::Merge23: group[2] = 1; break;
                  case SwapMerge::Merge24: group[3] = 1; break;
                  case SwapMerge::Merge13And24: group[2] = 0; group[3] = 1; break;
                  case SwapMerge::Merge14And23: group[3] = 0; group[2] = 1; break;
                }
                // group candidates: intersection of the member slots' lists
                std::array<std::vector<PathIndex>, 4> group_cands;
                bool feasible = true;
                for (int g = 0; g < 4 && feasible; ++g) {
                  std::vector<PathIndex> cands;
                  bool mine = false;
                  for (int s = 0; s < 4; ++s) {
                    if (group[static_cast<std::size_t>(s)] != g) continue;
                    const auto& list = slot_cands[static_cast<std::size_t>(s)];
                    if (!mine) {
                      cands = list;
                      mine = true;
                    } else {
                      std::vector<PathIndex> merged;
                      std::set_intersection(cands.begin(), cands.end(),
                                            list.begin(), list.end(),
                                            std::back_inserter(merged));
                      cands = std::move(merged);
                    }
                  }
                  if (mine && cands.empty()) feasible = false;
                  group_cands[static_cast<std::size_t>(g)] = std::move(cands);
                }
                if (!feasible) continue;
                std::array<std::size_t, 4> pick{};
                std::array<std::size_t, 4> sizes{};
                for (int g = 0; g < 4; ++g)
                  sizes[static_cast<std::size_t>(g)] =
                      group_cands[static_cast<std::size_t>(g)].empty()
                          ? 1
                          : group_cands[static_cast<std::size_t>(g)].size();
                while (true) {
                  std::array<PathIndex, 4> slot{};
                  for (int s = 0; s < 4; ++s) {
                    const int g = group[static_cast<std::size_t>(s)];
                    slot[static_cast<std::size_t>(s)] =
                        group_cands[static_cast<std::size_t>(g)]
                                   [pick[static_cast<std::size_t>(g)]];
                  }
                  Move z = two_by_two_swap(n_states, length, t, tp, i1, j1, i2,
                                           j2, slot[0], slot[1], slot[2],
                                           slot[3], merge);
                  if (!z.zero()) out.insert(z.canonical());
                  int g = 0;
                  for (; g < 4; ++g) {
                    std::size_t& p = pick[static_cast<std::size_t>(g)];
                    if (++p < sizes[static_cast<std::size_t>(g)]) break;
                    p = 0;
                  }
                  if (g == 4) break;
                }
              }
            }
    }
  }
}

void collect_type4(const std::vector<PathIndex>& support, int length,
                   std::set<Move>& out) {
  for (const bool relabeled : {false, true}) {
    const Type4Blocks blocks = type4_blocks(relabeled);
    for (int t = 1; t <= length - 2; ++t) {
      for (int tp = 1; tp <= length - 2; ++tp) {
        if (t == tp) continue;
        for (PathIndex a : support) {
          const std::vector<int> wa = decode_path(a, 2, length);
          if (!passes_block(wa, t, blocks.first)) continue;
          for (PathIndex b : support) {
            const std::vector<int> wb = decode_path(b, 2, length);
            if (!passes_block(wb, tp, blocks.second)) continue;
            Move z = type4_move(length, t, tp, a, b, relabeled);
            if (!z.zero()) out.insert(z.canonical());
          }
        }
      }
    }
  }
}

void collect_mperms(const std::vector<PathIndex>& support, int n_states,
                    const BasisDescriptor& basis, std::set<Move>& out) {
  // Fill states are drawn from the supported middle-state patterns so the
  // generated moves are exactly those with a side applicable to the table.
  std::vector<std::array<int, 3>> sup3;
  for (PathIndex w : support) {
    const std::vector<int> v = decode_path(w, n_states, 3);
    sup3.push_back({v[0], v[1], v[2]});
  }
  for (int m : basis.mperm_sizes()) {
    std::vector<int> i_list(static_cast<std::size_t>(m)),
        j_list(static_cast<std::size_t>(m));
    // enumerate ordered distinct tuples via odometer over 1..S with
    // distinctness filter
    std::vector<int> odo(static_cast<std::size_t>(2 * m), 1);
    while (true) {
      bool distinct = true;
      for (int a = 0; a < m && distinct; ++a)
        for (int b = a + 1; b < m && distinct; ++b) {
          if (odo[static_cast<std::size_t>(a)] == odo[static_cast<std::size_t>(b)]) distinct = false;
          if (odo[static_cast<std::size_t>(m + a)] == odo[static_cast<std::size_t>(m + b)]) distinct = false;
        }
      if (distinct) {
        for (int k = 0; k < m; ++k) {
          i_list[static_cast<std::size_t>(k)] = odo[static_cast<std::size_t>(k)];
          j_list[static_cast<std::size_t>(k)] = odo[static_cast<std::size_t>(m + k)];
        }
        std::vector<int> only_i, only_j;
        for (int v : i_list)
          if (std::find(j_list.begin(), j_list.end(), v) == j_list.end())
            only_i.push_back(v);
        for (int v : j_list)
          if (std::find(i_list.begin(), i_list.end(), v) == i_list.end())
            only_j.push_back(v);
        std::sort(only_i.begin(), only_i.end());
        std::sort(only_j.begin(), only_j.end());
        // candidate fills per free slot, from the table's support
        std::vector<std::vector<int>> cand_i, cand_j;
        bool feasible = true;
        for (int j : only_i) {
          std::set<int> states;
          for (const auto& w : sup3)
            if (w[1] == j) states.insert(w[0]);
          if (states.empty()) feasible = false;
          cand_i.emplace_back(states.begin(), states.end());
        }
        for (int j : only_j) {
          std::set<int> states;
          for (const auto& w : sup3)
            if (w[1] == j) states.insert(w[2]);
          if (states.empty()) feasible = false;
          cand_j.emplace_back(states.begin(), states.end());
        }
        if (feasible) {
          std::vector<std::size_t> pick(cand_i.size() + cand_j.size(), 0);
          while (true) {
            std::vector<int> fills_i, fills_j;
            for (std::size_t k = 0; k < cand_i.size(); ++k)
              fills_i.push_back(cand_i[k][pick[k]]);
            for (std::size_t k = 0; k < cand_j.size(); ++k)
              fills_j.push_back(cand_j[k][pick[cand_i.size() + k]]);
            Move z = m_permutation(n_states, i_list, j_list, fills_i, fills_j);
            if (!z.zero()) out.insert(z.canonical());
            std::size_t g = 0;
            for (; g < pick.size(); ++g) {
              const std::size_t limit = g < cand_i.size()
                                            ? cand_i[g].size()
                                            : cand_j[g - cand_i.size()].size();
              if (++pick[g] < limit) break;
              pick[g] = 0;
            }
            if (g == pick.size()) break;
          }
        }
      }
      // advance odometer
      std::size_t d = 0;
      for (; d < odo.size(); ++d) {
        if (odo[d] < n_states) {
          ++odo[d];
          std::fill(odo.begin(), odo.begin() + static_cast<std::ptrdiff_t>(d), 1);
          break;
        }
      }
      if (d == odo.size()) break;
    }
  }
}

}  // namespace

std::vector<Move> applicable_moves(const PathTable& table,
                                   const BasisDescriptor& basis) {
  if (table.S() != basis.S() || table.T() != basis.T())
    throw std::invalid_argument("table and basis shapes differ");
  std::set<Move> out;
  if (basis.is_external()) {
    for (const Move& z : basis.external_moves())
      if (!z.zero()) out.insert(z.canonical());
    return {out.begin(), out.end()};
  }
  std::vector<PathIndex> support;
  support.reserve(table.support_size());
  for (const auto& [path, count] : table.cells()) support.push_back(path);

  for (MoveKind kind : basis.families()) {
    switch (kind) {
      case MoveKind::CrossingSwap:
        collect_crossings(support, basis.S(), basis.T(), out);
        break;
      case MoveKind::DegreeOne:
        collect_degree_one(support, basis, out);
        break;
      case MoveKind::TwoByTwoSwap:
        collect_two_by_two(support, basis.S(), basis.T(), out);
        break;
      case MoveKind::Type4Swap:
        collect_type4(support, basis.T(), out);
        break;
      case MoveKind::MPermutation:
        collect_mperms(support, basis.S(), basis, out);
        break;
    }
  }
  return {out.begin(), out.end()};
}

std::vector<Move> enumerate_basis(const BasisDescriptor& basis,
                                  std::int64_t cell_cap) {
  if (basis.is_external()) {
    std::set<Move> out;
    for (const Move& z : basis.external_moves())
      if (!z.zero()) out.insert(z.canonical());
    return {out.begin(), out.end()};
  }
  const PathIndex cells = num_paths(basis.S(), basis.T());
  if (static_cast<std::int64_t>(cells) > cell_cap)
    throw CapExceededError("basis enumeration exceeds the S^T cap");
  std::vector<std::pair<PathIndex, std::int64_t>> counts;
  counts.reserve(static_cast<std::size_t>(cells));
  for (PathIndex w = 0; w < cells; ++w) counts.emplace_back(w, 1);
  return applicable_moves(
      PathTable::from_counts(basis.S(), basis.T(), counts), basis);
}

}  // namespace thmc
