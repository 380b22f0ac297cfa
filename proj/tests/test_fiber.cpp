#include <doctest.h>

#include <map>

#include "thmc/basis.hpp"
#include "thmc/errors.hpp"
#include "thmc/fiber.hpp"
#include "thmc/suff_stat.hpp"

using namespace thmc;

namespace {

PathIndex idx(int S, const char* digits) {
  std::vector<int> states;
  for (const char* c = digits; *c; ++c) states.push_back(*c - '0');
  return path_index(states, S);
}

PathTable table_of(int S, int T,
                   std::initializer_list<std::pair<const char*, std::int64_t>>
                       rows) {
  std::vector<std::pair<PathIndex, std::int64_t>> counts;
  for (const auto& [digits, count] : rows)
    counts.emplace_back(idx(S, digits), count);
  return PathTable::from_counts(S, T, counts);
}

}  // namespace

TEST_CASE("single-path fibers") {
  const Fiber f = enumerate_fiber(suff_stat(table_of(2, 3, {{"112", 1}})), 2, 3);
  REQUIRE(f.size() == 1);
  CHECK(f.members.front() == table_of(2, 3, {{"112", 1}}));
}

TEST_CASE("the 1121 fiber holds exactly the two identical-column singletons") {
  const Fiber f =
      enumerate_fiber(suff_stat(table_of(2, 4, {{"1121", 1}})), 2, 4);
  REQUIRE(f.size() == 2);
  CHECK(f.members[0] == table_of(2, 4, {{"1121", 1}}));
  CHECK(f.members[1] == table_of(2, 4, {{"1211", 1}}));
}

TEST_CASE("fiber sizes for N=2, (2,4) match a direct scan of all tables") {
  // independent oracle: scan all C(16,2) + 16 = 136 two-path tables
  std::map<std::vector<std::int64_t>, std::int64_t> sizes;
  for (PathIndex a = 0; a < 16; ++a)
    for (PathIndex b = a; b < 16; ++b) {
      PathTable t(2, 4);
      t.add(a, 1);
      t.add(b, 1);
      ++sizes[suff_stat(t).flat()];
    }
  std::int64_t checked = 0;
  for (const auto& [flat, expected_size] : sizes) {
    SuffStat b(2);
    b.initial = {flat[0], flat[1]};
    b.transitions = {flat[2], flat[3], flat[4], flat[5]};
    const Fiber f = enumerate_fiber(b, 2, 4);
    CHECK(static_cast<std::int64_t>(f.size()) == expected_size);
    checked += expected_size;
  }
  CHECK(checked == 136);
}

TEST_CASE("fiber members are distinct and share the sufficient statistic") {
  const SuffStat b = suff_stat(
      table_of(2, 4, {{"1122", 1}, {"2211", 1}, {"1212", 1}}));
  const Fiber f = enumerate_fiber(b, 2, 4);
  CHECK(f.size() >= 2);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(suff_stat(f.members[i]) == b);
    CHECK(f.members[i].total() == 3);
    for (std::size_t j = i + 1; j < f.size(); ++j)
      CHECK_FALSE(f.members[i] == f.members[j]);
  }
}

TEST_CASE("terminal frequencies are common across each fiber") {
  // terminal counts are a function of b; checked over every two-path fiber
  for (PathIndex a = 0; a < 16; ++a)
    for (PathIndex b = a; b < 16; ++b) {
      PathTable t(2, 4);
      t.add(a, 1);
      t.add(b, 1);
      const Fiber f = enumerate_fiber(suff_stat(t), 2, 4);
      for (const PathTable& member : f.members) {
        CHECK(node_counts(member, 1) == node_counts(f.members.front(), 1));
        CHECK(node_counts(member, 4) == node_counts(f.members.front(), 4));
      }
    }
}

TEST_CASE("for T=3 all node counts are common across each fiber") {
  for (int S = 2; S <= 3; ++S) {
    const PathIndex cells = num_paths(S, 3);
    for (PathIndex a = 0; a < cells; ++a)
      for (PathIndex b = a; b < cells; ++b)
        for (PathIndex c = b; c < cells; ++c) {
          PathTable t(S, 3);
          t.add(a, 1);
          t.add(b, 1);
          t.add(c, 1);
          const Fiber f = enumerate_fiber(suff_stat(t), S, 3);
          for (const PathTable& member : f.members)
            for (int time = 1; time <= 3; ++time)
              CHECK(node_counts(member, time) ==
                    node_counts(f.members.front(), time));
        }
  }
}

TEST_CASE("connectivity of the 1121/1211 fiber needs the degree-one moves") {
  const Fiber f =
      enumerate_fiber(suff_stat(table_of(2, 4, {{"1121", 1}})), 2, 4);
  const BasisDescriptor full = markov_basis(2, 4);
  CHECK(check_connectivity(f, full).connected);
  const ConnectivityReport crippled =
      check_connectivity(f, full.without(MoveKind::DegreeOne));
  CHECK_FALSE(crippled.connected);
  CHECK(crippled.n_components == 2);
}

TEST_CASE("single-member fibers are connected") {
  const Fiber f = enumerate_fiber(suff_stat(table_of(2, 3, {{"112", 1}})), 2, 3);
  CHECK(check_connectivity(f, markov_basis(2, 3)).connected);
}

TEST_CASE("exact conditional distribution") {
  const Fiber singleton =
      enumerate_fiber(suff_stat(table_of(2, 3, {{"112", 1}})), 2, 3);
  CHECK(exact_conditional(singleton) == std::vector<double>{1.0});

  const Fiber pair =
      enumerate_fiber(suff_stat(table_of(2, 4, {{"1121", 1}})), 2, 4);
  const std::vector<double> p = exact_conditional(pair);
  REQUIRE(p.size() == 2);
  CHECK(p[0] == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(p[1] == doctest::Approx(0.5).epsilon(1e-14));

  // weights are 1 / prod x!: a doubled cell halves the weight twice over
  PathTable t(2, 4);
  t.add(idx(2, "1122"), 1);
  t.add(idx(2, "2211"), 1);
  const Fiber f = enumerate_fiber(suff_stat(t), 2, 4);
  double total = 0;
  for (double v : exact_conditional(f)) total += v;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("l1 move norm") {
  const PathTable x = table_of(2, 3, {{"112", 1}, {"221", 1}});
  CHECK(l1_move_norm(x, x) == 0);
  // crossing-swap related tables are edge-wise equivalent
  const PathTable swapped = table_of(2, 3, {{"111", 1}, {"212", 1}});
  const PathTable crossed = table_of(2, 3, {{"112", 1}, {"211", 1}});
  CHECK(l1_move_norm(crossed, swapped) == 0);
  // the 2x2 swap of the T=3 distance-reduction step moves |z| by eight
  const PathTable y = table_of(2, 3, {{"122", 1}, {"211", 1}});
  CHECK(suff_stat(x) == suff_stat(y));
  CHECK(l1_move_norm(x, y) == 8);
}

TEST_CASE("fiber caps") {
  const SuffStat b = suff_stat(table_of(2, 4, {{"1122", 2}, {"2211", 2}}));
  CHECK_THROWS_AS(enumerate_fiber(b, 2, 4, 10), CapExceededError);
}

TEST_CASE("inconsistent sufficient statistics have empty fibers") {
  SuffStat b(2);
  b.initial = {1, 0};
  b.transitions = {1, 0, 0, 0};  // one transition for a length-4 path
  CHECK(enumerate_fiber(b, 2, 4).size() == 0);
}

TEST_CASE("exact conditional weights require N <= 20") {
  Fiber fiber{.b = SuffStat(2), .S = 2, .T = 3, .N = 21, .members = {}};
  CHECK_THROWS_AS(exact_conditional(fiber), CapExceededError);
}

TEST_CASE("l1 norm rejects mismatched shapes") {
  CHECK_THROWS_AS(l1_move_norm(PathTable(2, 3), PathTable(2, 4)),
                  std::invalid_argument);
}
