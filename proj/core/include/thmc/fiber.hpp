#ifndef THMC_FIBER_HPP
#define THMC_FIBER_HPP

#include <cstdint>
#include <vector>

#include "thmc/basis.hpp"
#include "thmc/suff_stat.hpp"
#include "thmc/table.hpp"

namespace thmc {

// Default cap on N * S^T work units for exhaustive fiber enumeration.
inline constexpr std::int64_t kDefaultFiberWorkCap = 10'000'000;

// All nonnegative integer tables sharing one sufficient statistic.
struct Fiber {
  SuffStat b;
  int S = 0;
  int T = 0;
  std::int64_t N = 0;
  std::vector<PathTable> members;

  std::size_t size() const { return members.size(); }
};

// Exhaustive depth-first enumeration of F_b as multisets of N paths in
// non-decreasing index order, pruned on the remaining initial and pooled
// transition budgets.  Throws CapExceededError beyond the work cap.
Fiber enumerate_fiber(const SuffStat& b, int n_states, int length,
                      std::int64_t work_cap = kDefaultFiberWorkCap);

struct ConnectivityReport {
  bool connected = false;
  int n_components = 0;
  std::vector<int> component;  // component id per fiber member
};

// Graph over fiber members with an edge when some basis move (+- sign) maps
// one member to another; components by breadth-first search.
ConnectivityReport check_connectivity(const Fiber& fiber,
                                      const BasisDescriptor& basis);

// Normalized conditional probabilities p(x | b) proportional to
// 1 / prod_w x(w)!, computed from exact integer multinomial weights
// (requires N <= 20 so the weights fit a 64-bit integer exactly).
std::vector<double> exact_conditional(const Fiber& fiber);

// The proof distance |z| = sum_{t,i,j} |x^t_ij - y^t_ij|.
std::int64_t l1_move_norm(const PathTable& x, const PathTable& y);

}  // namespace thmc

#endif
