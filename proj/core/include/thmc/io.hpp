#ifndef THMC_IO_HPP
#define THMC_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "thmc/configuration.hpp"
#include "thmc/inference.hpp"
#include "thmc/model.hpp"
#include "thmc/move.hpp"
#include "thmc/table.hpp"

namespace thmc {

// Path data files: one path per line, T states in 1..S separated by commas
// or whitespace; '#' starts a comment.  In aggregated form the last
// comma-separated field is a positive count: "1 1 2 2,3".  S and T are
// inferred (max state / line length) unless overridden.
PathTable parse_paths(std::istream& in, bool aggregated = false,
                      int n_states_override = 0, int length_override = 0);
PathTable parse_paths_file(const std::string& file, bool aggregated = false,
                           int n_states_override = 0, int length_override = 0);

// Aggregated format; parse(write(x)) == x.
void write_paths(const PathTable& table, std::ostream& out);
void write_paths_file(const PathTable& table, const std::string& file);

// Move files (4ti2-compatible): first line "R C" with C = S^T, then R rows
// of C integers, columns in lexicographic path order.
std::vector<Move> read_moves(std::istream& in, int n_states, int length);
std::vector<Move> read_moves_file(const std::string& file, int n_states,
                                  int length);
void write_moves(const std::vector<Move>& moves, int n_states, int length,
                 std::ostream& out);
void write_moves_file(const std::vector<Move>& moves, int n_states, int length,
                      const std::string& file);

// Matrix dump: first line "rows cols", then row-major integers.
void write_matrix(const Configuration& config, std::ostream& out);

// Homogeneous model parameter files: S on the first line, then pi (S
// numbers), then the S rows of the transition matrix; '#' comments allowed.
ModelParams read_model_params(std::istream& in);
ModelParams read_model_params_file(const std::string& file);

// "key: value" report lines.  The timestamp line is the only
// non-deterministic output; pass empty to omit it.
void write_report(const TestReport& report, const PathTable& data,
                  const std::string& timestamp, std::ostream& out);
void write_histogram_csv(const TestReport& report, std::ostream& out);

std::string current_timestamp();

}  // namespace thmc

#endif
