#include <doctest.h>

#include <cmath>
#include <set>

#include "thmc/basis.hpp"
#include "thmc/errors.hpp"
#include "thmc/model.hpp"
#include "thmc/move.hpp"
#include "thmc/path.hpp"
#include "thmc/rng.hpp"
#include "thmc/suff_stat.hpp"
#include "thmc/table.hpp"

using namespace thmc;

namespace {

PathTable table_of(int S, int T,
                   std::initializer_list<std::pair<const char*, std::int64_t>>
                       rows) {
  std::vector<std::pair<PathIndex, std::int64_t>> counts;
  for (const auto& [digits, count] : rows) {
    std::vector<int> states;
    for (const char* c = digits; *c; ++c) states.push_back(*c - '0');
    counts.emplace_back(path_index(states, S), count);
  }
  return PathTable::from_counts(S, T, counts);
}

PathIndex idx(int S, const char* digits) {
  std::vector<int> states;
  for (const char* c = digits; *c; ++c) states.push_back(*c - '0');
  return path_index(states, S);
}

PathTable random_table(int S, int T, std::int64_t n, Rng& rng) {
  PathTable out(S, T);
  for (std::int64_t k = 0; k < n; ++k)
    out.add(rng.below(num_paths(S, T)), 1);
  return out;
}

}  // namespace

TEST_CASE("state paths validate their invariants") {
  CHECK_THROWS_AS(StatePath({1, 2}, 2), std::invalid_argument);
  CHECK_THROWS_AS(StatePath({1, 2, 3}, 2), std::invalid_argument);
  CHECK_THROWS_AS(StatePath({0, 1, 1}, 2), std::invalid_argument);
  const StatePath p({1, 1, 2, 1}, 2);
  CHECK(p.T() == 4);
  CHECK(p.index() == idx(2, "1121"));
  CHECK(StatePath::from_index(p.index(), 2, 4) == p);
  CHECK(p.to_string() == "1121");
}

TEST_CASE("path index is lexicographic") {
  CHECK(idx(2, "1111") == 0);
  CHECK(idx(2, "2222") == 15);
  CHECK(idx(2, "1121") == 2);
  CHECK(idx(2, "1211") == 4);
  for (PathIndex w = 0; w + 1 < num_paths(3, 3); ++w)
    CHECK(decode_path(w, 3, 3) < decode_path(w + 1, 3, 3));
}

TEST_CASE("tables cache totals and drop zero cells") {
  PathTable t(2, 4);
  t.add(idx(2, "1122"), 3);
  t.add(idx(2, "1122"), -3);
  CHECK(t.total() == 0);
  CHECK(t.support_size() == 0);
  t.add(idx(2, "1122"), 2);
  t.add(idx(2, "2211"), 1);
  CHECK(t.total() == 3);
  CHECK(t.count(idx(2, "1122")) == 2);
  CHECK_THROWS_AS(t.add(idx(2, "2211"), -2), NegativityError);
  CHECK(t.total() == 3);  // failed update must not corrupt the table
}

TEST_CASE("suff_stat counts initial states and pooled transitions") {
  // single path 1122: transitions 11, 12, 22
  const SuffStat a = suff_stat(table_of(2, 4, {{"1122", 1}}));
  CHECK(a.initial == std::vector<std::int64_t>{1, 0});
  CHECK(a.transitions == std::vector<std::int64_t>{1, 1, 0, 1});
  // configuration column of 1111: initial (1,0), transitions (3,0,0,0)
  const SuffStat b = suff_stat(table_of(2, 4, {{"1111", 1}}));
  CHECK(b.initial == std::vector<std::int64_t>{1, 0});
  CHECK(b.transitions == std::vector<std::int64_t>{3, 0, 0, 0});
  // configuration column of 1212: initial (1,0), transitions (0,2,1,0)
  const SuffStat c = suff_stat(table_of(2, 4, {{"1212", 1}}));
  CHECK(c.initial == std::vector<std::int64_t>{1, 0});
  CHECK(c.transitions == std::vector<std::int64_t>{0, 2, 1, 0});
}

TEST_CASE("slice transition counts") {
  const PathTable t = table_of(2, 4, {{"1122", 2}});
  CHECK(slice_transition_counts(t, 2) == std::vector<std::int64_t>{0, 2, 0, 0});
  const PathTable u = table_of(2, 4, {{"1122", 1}, {"2211", 1}});
  CHECK(slice_transition_counts(u, 1) == std::vector<std::int64_t>{1, 0, 0, 1});
  CHECK_THROWS_AS(slice_transition_counts(u, 0), std::invalid_argument);
  CHECK_THROWS_AS(slice_transition_counts(u, 4), std::invalid_argument);
}

TEST_CASE("slices sum to the pooled transitions") {
  Rng rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    const PathTable t = random_table(3, 4, 6, rng);
    const SuffStat b = suff_stat(t);
    std::vector<std::int64_t> pooled(9, 0);
    for (int s = 1; s <= 3; ++s) {
      const auto slice = slice_transition_counts(t, s);
      for (std::size_t k = 0; k < pooled.size(); ++k) pooled[k] += slice[k];
    }
    CHECK(pooled == b.transitions);
  }
}

TEST_CASE("node counts") {
  CHECK(node_counts(table_of(2, 4, {{"1122", 3}}), 3) ==
        std::vector<std::int64_t>{0, 3});
  Rng rng(12);
  for (int rep = 0; rep < 10; ++rep) {
    const PathTable t = random_table(2, 5, 5, rng);
    CHECK(node_counts(t, 1) == suff_stat(t).initial);
  }
}

TEST_CASE("apply_move moves mass between cells") {
  // degree-one move on the identical columns 1121 / 1211
  const PathTable t = table_of(2, 4, {{"1121", 1}});
  const Move z(2, 4, {{idx(2, "1121"), -1}, {idx(2, "1211"), +1}});
  const PathTable moved = apply_move(t, z, +1);
  CHECK(moved == table_of(2, 4, {{"1211", 1}}));
  CHECK_THROWS_AS(apply_move(t, z, -1), NegativityError);
  CHECK(suff_stat(moved) == suff_stat(t));
}

TEST_CASE("apply then unapply is the identity") {
  Rng rng(13);
  const Move z(2, 4, {{idx(2, "1121"), -1}, {idx(2, "1211"), +1}});
  for (int rep = 0; rep < 20; ++rep) {
    PathTable t = random_table(2, 4, 6, rng);
    t.add(idx(2, "1121"), 1);
    const PathTable there = apply_move(t, z, +1);
    CHECK(apply_move(there, z, -1) == t);
  }
}

TEST_CASE("is_valid_move") {
  CHECK(is_valid_move(Move(2, 4, {{idx(2, "1121"), 1}, {idx(2, "1211"), -1}})));
  CHECK_FALSE(is_valid_move(Move(2, 4, {{idx(2, "1111"), 1}})));
}

TEST_CASE("move accumulation merges and drops zeros") {
  const Move z = move_from_path_lists(
      2, 3, {idx(2, "112"), idx(2, "221"), idx(2, "111")},
      {idx(2, "122"), idx(2, "211"), idx(2, "111")});
  CHECK(z.delta().size() == 4);
  CHECK(z.coefficient(idx(2, "111")) == 0);
  CHECK(z.coefficient(idx(2, "112")) == 1);
  CHECK(z.negated().coefficient(idx(2, "112")) == -1);
  CHECK(z.canonical() == z.negated().canonical());
}

TEST_CASE("tables reject mixed shapes") {
  CHECK_THROWS_AS(PathTable::from_paths(
                      {StatePath({1, 1, 2}, 2), StatePath({1, 1, 2, 2}, 2)}),
                  std::invalid_argument);
  CHECK_THROWS_AS(crossing_swap(StatePath({1, 1, 2}, 2),
                                StatePath({1, 1, 2, 2}, 2), 2),
                  std::invalid_argument);
  const Move z(2, 4, {{0, 1}, {1, -1}});
  CHECK_THROWS_AS(apply_move(PathTable(2, 3), z, 1), std::invalid_argument);
  CHECK_THROWS_AS(apply_move(PathTable(2, 4), z, 2), std::invalid_argument);
}

TEST_CASE("model parameters validate") {
  CHECK_THROWS_AS(ModelParams::homogeneous({0.5, 0.6}, {1, 0, 0, 1}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ModelParams::homogeneous({0.5, 0.5}, {0.9, 0.2, 0, 1}),
                  std::invalid_argument);
  CHECK_NOTHROW(ModelParams::toric({2.0, 3.0}, {1, 0.5, 0.25, 4}));
  CHECK_THROWS_AS(ModelParams::toric({-1.0, 1.0}, {1, 1, 1, 1}),
                  std::invalid_argument);
}

TEST_CASE("simulate_paths degenerate chains") {
  const ModelParams stay = ModelParams::homogeneous({1, 0}, {1, 0, 0, 1});
  CHECK(simulate_paths(stay, 5, 4, 7) == table_of(2, 4, {{"1111", 5}}));
  const ModelParams funnel = ModelParams::homogeneous({0, 1}, {1, 0, 1, 0});
  CHECK(simulate_paths(funnel, 3, 3, 7) == table_of(2, 3, {{"211", 3}}));
  CHECK(simulate_paths(stay, 5, 4, 1) == simulate_paths(stay, 5, 4, 1));
  CHECK_THROWS_AS(
      simulate_paths(ModelParams::toric({1, 1}, {1, 1, 1, 1}), 5, 4, 7),
      std::invalid_argument);
}

TEST_CASE("simulated transition frequencies approach p") {
  const std::vector<double> p{0.7, 0.3, 0.4, 0.6};
  const ModelParams model = ModelParams::homogeneous({0.5, 0.5}, p);
  const std::int64_t n = 10000;
  const int length = 4;
  const PathTable t = simulate_paths(model, n, length, 99);
  const SuffStat b = suff_stat(t);
  for (int i = 1; i <= 2; ++i) {
    const double row_total = static_cast<double>(b.trans(i, 1) + b.trans(i, 2));
    for (int j = 1; j <= 2; ++j) {
      const double pij = p[static_cast<std::size_t>(i - 1) * 2 + (j - 1)];
      const double sigma = std::sqrt(pij * (1 - pij) * row_total);
      CHECK(std::abs(static_cast<double>(b.trans(i, j)) - pij * row_total) <=
            3.0 * sigma);
    }
  }
}
