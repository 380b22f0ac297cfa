#include "thmc/io.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "thmc/errors.hpp"

namespace thmc {

namespace {

std::string strip_comment(const std::string& line) {
  const auto hash = line.find('#');
  return hash == std::string::npos ? line : line.substr(0, hash);
}

bool blank(const std::string& line) {
  return std::all_of(line.begin(), line.end(),
                     [](unsigned char c) { return std::isspace(c); });
}

std::vector<std::string> split_tokens(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) out.push_back(std::move(token));
      token.clear();
    } else {
      token.push_back(c);
    }
  }
  if (!token.empty()) out.push_back(std::move(token));
  return out;
}

std::int64_t parse_int(const std::string& token, int line_no) {
  std::size_t used = 0;
  std::int64_t value = 0;
  try {
    value = std::stoll(token, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": expected an integer, got '" + token + "'");
  }
  if (used != token.size())
    throw ParseError("line " + std::to_string(line_no) +
                     ": expected an integer, got '" + token + "'");
  return value;
}

double parse_double(const std::string& token, int line_no) {
  std::size_t used = 0;
  double value = 0;
  try {
    value = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("line " + std::to_string(line_no) +
                     ": expected a number, got '" + token + "'");
  }
  if (used != token.size())
    throw ParseError("line " + std::to_string(line_no) +
                     ": expected a number, got '" + token + "'");
  return value;
}

std::string format_double(double value) {
  char buffer[64];
  std::snprintf(buffer, sizeof(buffer), "%.12g", value);
  return buffer;
}

std::ifstream open_input(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw ParseError("cannot open " + file);
  return in;
}

std::ofstream open_output(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw Error("cannot write " + file);
  return out;
}

}  // namespace

PathTable parse_paths(std::istream& in, bool aggregated,
                      int n_states_override, int length_override) {
  struct Row {
    std::vector<int> states;
    std::int64_t count;
  };
  std::vector<Row> rows;
  int max_state = 0;
  int length = length_override;

  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string body = strip_comment(line);
    if (blank(body)) continue;

    std::string path_part = body;
    std::int64_t count = 1;
    if (aggregated) {
      const auto comma = body.rfind(',');
      if (comma == std::string::npos)
        throw ParseError("line " + std::to_string(line_no) +
                         ": aggregated rows need a trailing ,count field");
      path_part = body.substr(0, comma);
      count = parse_int(body.substr(comma + 1), line_no);
      if (count <= 0)
        throw ParseError("line " + std::to_string(line_no) +
                         ": count must be positive");
    }
    const std::vector<std::string> tokens = split_tokens(path_part);
    if (tokens.empty())
      throw ParseError("line " + std::to_string(line_no) + ": empty path");
    if (length == 0) length = static_cast<int>(tokens.size());
    if (static_cast<int>(tokens.size()) != length)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(length) + " states, got " +
                       std::to_string(tokens.size()));
    Row row;
    row.count = count;
    for (const std::string& token : tokens) {
      const std::int64_t s = parse_int(token, line_no);
      if (s < 1)
        throw ParseError("line " + std::to_string(line_no) +
                         ": states must be >= 1");
      if (n_states_override > 0 && s > n_states_override)
        throw ParseError("line " + std::to_string(line_no) + ": state " +
                         std::to_string(s) + " exceeds --states " +
                         std::to_string(n_states_override));
      max_state = std::max(max_state, static_cast<int>(s));
      row.states.push_back(static_cast<int>(s));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError("no data rows found");
  if (length < 3)
    throw ParseError("paths of length " + std::to_string(length) +
                     " are not supported (need T >= 3)");
  const int n_states =
      n_states_override > 0 ? n_states_override : std::max(max_state, 2);
  PathTable table(n_states, length);
  for (const Row& row : rows)
    table.add(path_index(row.states, n_states), row.count);
  return table;
}

PathTable parse_paths_file(const std::string& file, bool aggregated,
                           int n_states_override, int length_override) {
  std::ifstream in = open_input(file);
  try {
    return parse_paths(in, aggregated, n_states_override, length_override);
  } catch (const ParseError& e) {
    throw ParseError(file + ": " + e.what());
  }
}

void write_paths(const PathTable& table, std::ostream& out) {
  for (const auto& [path, count] : table.cells()) {
    const std::vector<int> w = decode_path(path, table.S(), table.T());
    for (std::size_t k = 0; k < w.size(); ++k) {
      if (k > 0) out << ' ';
      out << w[k];
    }
    out << ',' << count << '\n';
  }
}

void write_paths_file(const PathTable& table, const std::string& file) {
  std::ofstream out = open_output(file);
  write_paths(table, out);
}

std::vector<Move> read_moves(std::istream& in, int n_states, int length) {
  const PathIndex cells = num_paths(n_states, length);
  std::string line;
  int line_no = 0;
  auto next_tokens = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      const std::string body = strip_comment(line);
      if (!blank(body)) return split_tokens(body);
    }
    throw ParseError("line " + std::to_string(line_no + 1) +
                     ": unexpected end of move file");
  };
  const std::vector<std::string> header = next_tokens();
  if (header.size() != 2)
    throw ParseError("line " + std::to_string(line_no) +
                     ": move file header must be 'R C'");
  const std::int64_t n_moves = parse_int(header[0], line_no);
  const std::int64_t n_cols = parse_int(header[1], line_no);
  if (n_cols != static_cast<std::int64_t>(cells))
    throw ParseError("line " + std::to_string(line_no) + ": expected " +
                     std::to_string(cells) + " columns for S=" +
                     std::to_string(n_states) + ", T=" + std::to_string(length));
  std::vector<Move> moves;
  moves.reserve(static_cast<std::size_t>(n_moves));
  for (std::int64_t r = 0; r < n_moves; ++r) {
    const std::vector<std::string> tokens = next_tokens();
    if (static_cast<std::int64_t>(tokens.size()) != n_cols)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_cols) + " integers");
    std::vector<std::pair<PathIndex, std::int64_t>> delta;
    for (std::int64_t c = 0; c < n_cols; ++c) {
      const std::int64_t v =
          parse_int(tokens[static_cast<std::size_t>(c)], line_no);
      if (v != 0) delta.emplace_back(static_cast<PathIndex>(c), v);
    }
    moves.emplace_back(n_states, length, std::move(delta));
  }
  return moves;
}

std::vector<Move> read_moves_file(const std::string& file, int n_states,
                                  int length) {
  std::ifstream in = open_input(file);
  try {
    return read_moves(in, n_states, length);
  } catch (const ParseError& e) {
    throw ParseError(file + ": " + e.what());
  }
}

void write_moves(const std::vector<Move>& moves, int n_states, int length,
                 std::ostream& out) {
  const PathIndex cells = num_paths(n_states, length);
  out << moves.size() << ' ' << cells << '\n';
  for (const Move& move : moves) {
    auto it = move.delta().begin();
    for (PathIndex c = 0; c < cells; ++c) {
      std::int64_t v = 0;
      if (it != move.delta().end() && it->first == c) {
        v = it->second;
        ++it;
      }
      if (c > 0) out << ' ';
      out << v;
    }
    out << '\n';
  }
}

void write_moves_file(const std::vector<Move>& moves, int n_states, int length,
                      const std::string& file) {
  std::ofstream out = open_output(file);
  write_moves(moves, n_states, length, out);
}

void write_matrix(const Configuration& config, std::ostream& out) {
  out << config.rows() << ' ' << config.cols() << '\n';
  for (int r = 0; r < config.rows(); ++r) {
    for (PathIndex c = 0; c < config.cols(); ++c) {
      if (c > 0) out << ' ';
      out << config.entry(r, c);
    }
    out << '\n';
  }
}

ModelParams read_model_params(std::istream& in) {
  std::string line;
  int line_no = 0;
  auto next_tokens = [&]() {
    while (std::getline(in, line)) {
      ++line_no;
      const std::string body = strip_comment(line);
      if (!blank(body)) return split_tokens(body);
    }
    throw ParseError("line " + std::to_string(line_no + 1) +
                     ": unexpected end of parameter file");
  };
  const std::vector<std::string> header = next_tokens();
  if (header.size() != 1)
    throw ParseError("line " + std::to_string(line_no) +
                     ": first line must be the state count S");
  const int n_states = static_cast<int>(parse_int(header[0], line_no));
  if (n_states < 2)
    throw ParseError("line " + std::to_string(line_no) + ": need S >= 2");
  auto read_row = [&](const char* what) {
    const std::vector<std::string> tokens = next_tokens();
    if (static_cast<int>(tokens.size()) != n_states)
      throw ParseError("line " + std::to_string(line_no) + ": expected " +
                       std::to_string(n_states) + " numbers for " + what);
    std::vector<double> row;
    for (const std::string& token : tokens)
      row.push_back(parse_double(token, line_no));
    return row;
  };
  const std::vector<double> pi = read_row("pi");
  std::vector<double> p;
  for (int i = 0; i < n_states; ++i) {
    const std::vector<double> row = read_row("a transition row");
    p.insert(p.end(), row.begin(), row.end());
  }
  try {
    return ModelParams::homogeneous(pi, p);
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("invalid parameters: ") + e.what());
  }
}

ModelParams read_model_params_file(const std::string& file) {
  std::ifstream in = open_input(file);
  try {
    return read_model_params(in);
  } catch (const ParseError& e) {
    throw ParseError(file + ": " + e.what());
  }
}

void write_report(const TestReport& report, const PathTable& data,
                  const std::string& timestamp, std::ostream& out) {
  if (!timestamp.empty()) out << "timestamp: " << timestamp << '\n';
  out << "states: " << data.S() << '\n';
  out << "length: " << data.T() << '\n';
  out << "paths: " << data.total() << '\n';
  out << "statistic: " << statistic_name(report.statistic) << '\n';
  out << "chi2: " << format_double(report.chi2_observed) << '\n';
  out << "df: " << report.df << '\n';
  out << "p_asymptotic: " << format_double(report.p_asymptotic) << '\n';
  out << "seed: " << report.seed << '\n';
  out << "burnin: " << report.n_burnin << '\n';
  out << "samples: " << report.n_samples << '\n';
  out << "acceptance_rate: " << format_double(report.acceptance_rate) << '\n';
  out << "p_exact: " << format_double(report.p_exact) << '\n';
  out << "p_exact_mcse: " << format_double(report.p_exact_mcse) << '\n';
  out << "fit_converged: " << (report.fit_converged ? "true" : "false") << '\n';
  out << "fit_iterations: " << report.fit_iterations << '\n';
  out << "fit_residual: " << format_double(report.fit_residual) << '\n';
}

void write_histogram_csv(const TestReport& report, std::ostream& out) {
  out << "bin_left,bin_right,count\n";
  for (const HistogramBin& bin : report.histogram)
    out << format_double(bin.left) << ',' << format_double(bin.right) << ','
        << bin.count << '\n';
}

std::string current_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buffer[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buffer;
}

}  // namespace thmc
