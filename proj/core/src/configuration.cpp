#include "thmc/configuration.hpp"

#include <algorithm>
#include <stdexcept>
#include <unordered_map>

#include "thmc/errors.hpp"

namespace thmc {

Configuration Configuration::build(int n_states, int length,
                                   std::int64_t entry_cap) {
  const PathIndex n_cols = num_paths(n_states, length);
  const int rows = n_states + n_states * n_states;
  if (static_cast<std::int64_t>(n_cols) * rows > entry_cap)
    throw CapExceededError("configuration matrix exceeds the entry cap");

  Configuration config(n_states, length, n_cols);
  config.entries_.assign(static_cast<std::size_t>(n_cols) * rows, 0);
  std::vector<int> w(static_cast<std::size_t>(length), 1);
  for (PathIndex col = 0; col < n_cols; ++col) {
    std::int32_t* column = config.entries_.data() +
                           static_cast<std::size_t>(col) * rows;
    column[w[0] - 1] = 1;
    for (int t = 0; t + 1 < length; ++t)
      column[n_states + (w[t] - 1) * n_states + (w[t + 1] - 1)] += 1;
    // next path in lexicographic order
    for (int t = length - 1; t >= 0; --t) {
      if (w[static_cast<std::size_t>(t)] < n_states) {
        ++w[static_cast<std::size_t>(t)];
        std::fill(w.begin() + t + 1, w.end(), 1);
        break;
      }
    }
  }
  return config;
}

std::vector<std::int64_t> Configuration::column(PathIndex col) const {
  std::vector<std::int64_t> out(static_cast<std::size_t>(rows()));
  for (int r = 0; r < rows(); ++r) out[static_cast<std::size_t>(r)] = entry(r, col);
  return out;
}

std::vector<std::int64_t> Configuration::apply(const PathTable& table) const {
  if (table.S() != n_states_ || table.T() != length_)
    throw std::invalid_argument("table shape does not match configuration");
  std::vector<std::int64_t> b(static_cast<std::size_t>(rows()), 0);
  for (const auto& [path, count] : table.cells())
    for (int r = 0; r < rows(); ++r)
      b[static_cast<std::size_t>(r)] += static_cast<std::int64_t>(entry(r, path)) * count;
  return b;
}

std::vector<std::vector<PathIndex>> identical_column_classes(
    const Configuration& config) {
  const int rows = config.rows();
  std::unordered_map<std::uint64_t, std::vector<PathIndex>> buckets;
  for (PathIndex col = 0; col < config.cols(); ++col) {
    std::uint64_t h = 1469598103934665603ull;
    for (int r = 0; r < rows; ++r) {
      h ^= static_cast<std::uint64_t>(config.entry(r, col));
      h *= 1099511628211ull;
    }
    buckets[h].push_back(col);
  }
  std::vector<std::vector<PathIndex>> classes;
  for (auto& [hash, cols] : buckets) {
    if (cols.size() < 2) continue;
    // exact comparison inside a bucket to rule out hash collisions
    std::sort(cols.begin(), cols.end());
    std::vector<bool> used(cols.size(), false);
    for (std::size_t a = 0; a < cols.size(); ++a) {
      if (used[a]) continue;
      std::vector<PathIndex> cls{cols[a]};
      for (std::size_t b = a + 1; b < cols.size(); ++b) {
        if (used[b]) continue;
        bool equal = true;
        for (int r = 0; r < rows && equal; ++r)
          equal = config.entry(r, cols[a]) == config.entry(r, cols[b]);
        if (equal) {
          cls.push_back(cols[b]);
          used[b] = true;
        }
      }
      if (cls.size() > 1) classes.push_back(std::move(cls));
    }
  }
  std::sort(classes.begin(), classes.end());
  return classes;
}

std::vector<Move> degree_one_moves(int n_states, int length) {
  const Configuration config = Configuration::build(n_states, length);
  std::vector<Move> moves;
  for (const auto& cls : identical_column_classes(config))
    for (std::size_t a = 0; a < cls.size(); ++a)
      for (std::size_t b = a + 1; b < cls.size(); ++b)
        moves.push_back(move_from_path_lists(n_states, length,
                                             {cls[a]}, {cls[b]}));
  return moves;
}

int integer_matrix_rank(std::vector<std::vector<std::int64_t>> matrix) {
  if (matrix.empty()) return 0;
  const std::size_t rows = matrix.size(), cols = matrix.front().size();
  // Bareiss fraction-free elimination; every intermediate value is a minor
  // of the input so the divisions below are exact.
  std::int64_t prev_pivot = 1;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t pivot = rank;
    while (pivot < rows && matrix[pivot][col] == 0) ++pivot;
    if (pivot == rows) continue;
    std::swap(matrix[rank], matrix[pivot]);
    const std::int64_t piv = matrix[rank][col];
    for (std::size_t r = rank + 1; r < rows; ++r) {
      for (std::size_t c = col + 1; c < cols; ++c) {
        const __int128 num = static_cast<__int128>(piv) * matrix[r][c] -
                             static_cast<__int128>(matrix[r][col]) * matrix[rank][c];
        const __int128 value = num / prev_pivot;
        if (value > INT64_MAX || value < INT64_MIN)
          throw CapExceededError("rank elimination overflow");
        matrix[r][c] = static_cast<std::int64_t>(value);
      }
      matrix[r][col] = 0;
    }
    prev_pivot = piv;
    ++rank;
  }
  return static_cast<int>(rank);
}

int design_rank(const Configuration& config) {
  std::vector<std::vector<std::int64_t>> rows(
      static_cast<std::size_t>(config.rows()),
      std::vector<std::int64_t>(static_cast<std::size_t>(config.cols())));
  for (int r = 0; r < config.rows(); ++r)
    for (PathIndex c = 0; c < config.cols(); ++c)
      rows[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)] =
          config.entry(r, c);
  return integer_matrix_rank(std::move(rows));
}

int h1_rank(int n_states, int length) {
  const PathIndex n_cols = num_paths(n_states, length);
  const std::size_t n_rows =
      static_cast<std::size_t>(length - 1) * n_states * n_states;
  if (static_cast<std::int64_t>(n_cols) * static_cast<std::int64_t>(n_rows) >
      kDefaultConfigEntryCap)
    throw CapExceededError("H1 design exceeds the entry cap");
  std::vector<std::vector<std::int64_t>> rows(
      n_rows, std::vector<std::int64_t>(static_cast<std::size_t>(n_cols), 0));
  for (PathIndex col = 0; col < n_cols; ++col) {
    const std::vector<int> w = decode_path(col, n_states, length);
    for (int t = 0; t + 1 < length; ++t) {
      const std::size_t r = (static_cast<std::size_t>(t) * n_states +
                             (w[static_cast<std::size_t>(t)] - 1)) *
                                n_states +
                            (w[static_cast<std::size_t>(t) + 1] - 1);
      rows[r][static_cast<std::size_t>(col)] = 1;
    }
  }
  return integer_matrix_rank(std::move(rows));
}

int degrees_of_freedom(int n_states, int length) {
  return h1_rank(n_states, length) -
         design_rank(Configuration::build(n_states, length));
}

}  // namespace thmc
