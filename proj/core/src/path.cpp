#include "thmc/path.hpp"

#include <sstream>
#include <stdexcept>

#include "thmc/errors.hpp"

namespace thmc {

PathIndex num_paths(int n_states, int length) {
  if (n_states < 2) throw std::invalid_argument("need at least 2 states");
  if (length < 3) throw std::invalid_argument("need path length T >= 3");
  PathIndex n = 1;
  for (int t = 0; t < length; ++t) {
    if (n > (PathIndex{1} << 62) / static_cast<PathIndex>(n_states))
      throw CapExceededError("S^T does not fit in a path index");
    n *= static_cast<PathIndex>(n_states);
  }
  return n;
}

PathIndex path_index(const std::vector<int>& states, int n_states) {
  PathIndex idx = 0;
  for (int s : states) {
    if (s < 1 || s > n_states)
      throw std::invalid_argument("state out of range 1..S");
    idx = idx * static_cast<PathIndex>(n_states) + static_cast<PathIndex>(s - 1);
  }
  return idx;
}

std::vector<int> decode_path(PathIndex index, int n_states, int length) {
  std::vector<int> states(static_cast<std::size_t>(length));
  for (int t = length - 1; t >= 0; --t) {
    states[static_cast<std::size_t>(t)] =
        static_cast<int>(index % static_cast<PathIndex>(n_states)) + 1;
    index /= static_cast<PathIndex>(n_states);
  }
  return states;
}

int state_at(PathIndex index, int n_states, int length, int t) {
  PathIndex div = 1;
  for (int k = 0; k < length - t; ++k) div *= static_cast<PathIndex>(n_states);
  return static_cast<int>((index / div) % static_cast<PathIndex>(n_states)) + 1;
}

StatePath::StatePath(std::vector<int> states, int n_states)
    : states_(std::move(states)), n_states_(n_states) {
  if (n_states_ < 2) throw std::invalid_argument("need at least 2 states");
  if (states_.size() < 3)
    throw std::invalid_argument("paths of length < 3 are not supported");
  for (int s : states_)
    if (s < 1 || s > n_states_)
      throw std::invalid_argument("state out of range 1..S");
}

StatePath StatePath::from_index(PathIndex index, int n_states, int length) {
  return StatePath(decode_path(index, n_states, length), n_states);
}

PathIndex StatePath::index() const { return path_index(states_, n_states_); }

std::string StatePath::to_string() const {
  std::ostringstream out;
  const bool wide = n_states_ > 9;
  for (std::size_t k = 0; k < states_.size(); ++k) {
    if (wide && k > 0) out << '.';
    out << states_[k];
  }
  return out.str();
}

}  // namespace thmc
