// Command-line driver: Markov-basis construction and verification, exact
// conditional goodness-of-fit tests of time-homogeneity, and path
// simulation for longitudinal categorical data.

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_set>
#include <vector>

#include <CLI11.hpp>

#include "thmc/basis.hpp"
#include "thmc/configuration.hpp"
#include "thmc/errors.hpp"
#include "thmc/fiber.hpp"
#include "thmc/inference.hpp"
#include "thmc/io.hpp"
#include "thmc/model.hpp"

namespace {

constexpr int kExitParse = 2;
constexpr int kExitUnsupportedShape = 3;
constexpr int kExitCapExceeded = 4;

std::ofstream open_out(const std::string& file) {
  std::ofstream out(file);
  if (!out) throw thmc::Error("cannot write " + file);
  return out;
}

int cmd_basis(int n_states, int length, const std::string& out_file,
              bool enumerate, std::int64_t cap) {
  const thmc::BasisDescriptor basis = thmc::markov_basis(n_states, length);
  if (enumerate) {
    const std::vector<thmc::Move> moves = thmc::enumerate_basis(basis, cap);
    if (out_file.empty()) {
      thmc::write_moves(moves, n_states, length, std::cout);
    } else {
      std::ofstream out = open_out(out_file);
      thmc::write_moves(moves, n_states, length, out);
      std::cout << "wrote " << moves.size() << " moves to " << out_file << '\n';
    }
    return 0;
  }
  std::ostringstream summary;
  summary << "basis for S=" << n_states << ", T=" << length << '\n';
  for (thmc::MoveKind kind : basis.families()) {
    summary << "  family: " << thmc::move_kind_name(kind);
    if (kind == thmc::MoveKind::DegreeOne)
      summary << " (" << basis.degree_one_classes().size()
              << " identical-column classes)";
    if (kind == thmc::MoveKind::MPermutation) {
      summary << " (m =";
      for (int m : basis.mperm_sizes()) summary << ' ' << m;
      summary << ')';
    }
    summary << '\n';
  }
  if (out_file.empty()) {
    std::cout << summary.str();
  } else {
    std::ofstream out = open_out(out_file);
    out << summary.str();
  }
  return 0;
}

struct FiberVerdict {
  std::string b_text;
  std::size_t size = 0;
  int components = 0;
};

int cmd_verify(int n_states, int length, int max_n, bool disable_degree_one,
               int disable_mperm, int threads, std::int64_t work_cap,
               const std::string& out_file) {
  thmc::BasisDescriptor basis = thmc::markov_basis(n_states, length);
  if (disable_degree_one) basis = basis.without(thmc::MoveKind::DegreeOne);
  if (disable_mperm > 0) basis = basis.without_mperm(disable_mperm);

  const thmc::PathIndex cells = thmc::num_paths(n_states, length);
  if (static_cast<std::int64_t>(cells) * max_n > work_cap)
    throw thmc::CapExceededError("verification sweep exceeds the work cap");

  // all b arising from multisets of 1..max_n paths
  std::unordered_set<std::string> seen;
  std::vector<thmc::SuffStat> stats;
  std::vector<std::int8_t> column(
      static_cast<std::size_t>(n_states + n_states * n_states));
  std::vector<std::int64_t> acc(column.size(), 0);
  std::vector<std::vector<std::int8_t>> columns(static_cast<std::size_t>(cells));
  for (thmc::PathIndex w = 0; w < cells; ++w) {
    std::vector<std::int8_t> col(acc.size(), 0);
    const std::vector<int> path = thmc::decode_path(w, n_states, length);
    col[static_cast<std::size_t>(path[0] - 1)] = 1;
    for (int t = 0; t + 1 < length; ++t)
      ++col[static_cast<std::size_t>(n_states + (path[t] - 1) * n_states +
                                     (path[t + 1] - 1))];
    columns[static_cast<std::size_t>(w)] = std::move(col);
  }
  auto record = [&]() {
    std::string key(reinterpret_cast<const char*>(acc.data()),
                    acc.size() * sizeof(std::int64_t));
    if (!seen.insert(std::move(key)).second) return;
    thmc::SuffStat b(n_states);
    for (int i = 0; i < n_states; ++i)
      b.initial[static_cast<std::size_t>(i)] = acc[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < b.transitions.size(); ++k)
      b.transitions[k] = acc[static_cast<std::size_t>(n_states) + k];
    stats.push_back(std::move(b));
  };
  auto sweep = [&](auto&& self, thmc::PathIndex start, int remaining) -> void {
    record();
    if (remaining == 0) return;
    for (thmc::PathIndex w = start; w < cells; ++w) {
      const auto& col = columns[static_cast<std::size_t>(w)];
      for (std::size_t k = 0; k < col.size(); ++k) acc[k] += col[k];
      self(self, w, remaining - 1);
      for (std::size_t k = 0; k < col.size(); ++k) acc[k] -= col[k];
    }
  };
  sweep(sweep, 0, max_n);
  seen.clear();

  std::atomic<std::size_t> next{0};
  std::atomic<std::size_t> n_checked{0};
  std::mutex mutex;
  std::vector<FiberVerdict> verdicts(stats.size());
  std::vector<FiberVerdict> disconnected;
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = next.fetch_add(1);
      if (k >= stats.size()) return;
      const thmc::SuffStat& b = stats[k];
      if (b.total() == 0) {
        verdicts[k] = {"", 1, 1};
        continue;
      }
      const thmc::Fiber fiber =
          thmc::enumerate_fiber(b, n_states, length, work_cap);
      const thmc::ConnectivityReport report =
          thmc::check_connectivity(fiber, basis);
      std::ostringstream text;
      text << "b=[";
      const auto flat = b.flat();
      for (std::size_t i = 0; i < flat.size(); ++i)
        text << (i ? " " : "") << flat[i];
      text << "]";
      verdicts[k] = {text.str(), fiber.size(), report.n_components};
      n_checked.fetch_add(1);
      if (!report.connected) {
        std::lock_guard<std::mutex> lock(mutex);
        disconnected.push_back(verdicts[k]);
      }
    }
  };
  std::vector<std::thread> pool;
  const int n_threads = std::max(1, threads);
  for (int t = 0; t < n_threads - 1; ++t) pool.emplace_back(worker);
  worker();
  for (std::thread& t : pool) t.join();

  if (!out_file.empty()) {
    std::ofstream out = open_out(out_file);
    for (const FiberVerdict& v : verdicts) {
      if (v.b_text.empty()) continue;
      out << v.b_text << " size=" << v.size << " components=" << v.components
          << (v.components <= 1 ? " connected" : " DISCONNECTED") << '\n';
    }
  }
  std::cout << "checked " << n_checked.load() << " fibers (S=" << n_states
            << ", T=" << length << ", N<=" << max_n << ")\n";
  if (disconnected.empty()) {
    std::cout << "all fibers connected\n";
    return 0;
  }
  std::sort(disconnected.begin(), disconnected.end(),
            [](const FiberVerdict& a, const FiberVerdict& b) {
              return a.b_text < b.b_text;
            });
  std::cout << disconnected.size() << " disconnected fibers:\n";
  for (const FiberVerdict& v : disconnected)
    std::cout << "  " << v.b_text << " size=" << v.size
              << " components=" << v.components << '\n';
  return 0;
}

int cmd_test(const std::string& data_file, bool aggregated, int n_states,
             int length, const std::string& moves_file,
             const std::string& statistic_name, std::uint64_t seed,
             std::int64_t burnin, std::int64_t samples,
             const std::string& out_file) {
  const thmc::PathTable data =
      thmc::parse_paths_file(data_file, aggregated, n_states, length);
  thmc::BasisDescriptor basis = [&]() {
    if (!moves_file.empty()) {
      auto moves = thmc::read_moves_file(moves_file, data.S(), data.T());
      try {
        return thmc::BasisDescriptor::external(data.S(), data.T(),
                                               std::move(moves));
      } catch (const std::invalid_argument& e) {
        throw thmc::ParseError(moves_file + ": " + e.what());
      }
    }
    return thmc::markov_basis(data.S(), data.T());
  }();
  const thmc::Statistic statistic = thmc::statistic_from_name(statistic_name);
  const thmc::TestReport report =
      thmc::run_test(data, basis, statistic, burnin, samples, seed);

  std::ostringstream body;
  thmc::write_report(report, data, "", body);
  std::cout << body.str();
  if (!out_file.empty()) {
    std::ofstream out = open_out(out_file);
    out << "timestamp: " << thmc::current_timestamp() << '\n' << body.str();
    std::ofstream hist = open_out(out_file + ".hist.csv");
    thmc::write_histogram_csv(report, hist);
  }
  return 0;
}

int cmd_simulate(const std::string& params_file, std::int64_t n_paths,
                 int length, std::uint64_t seed, const std::string& out_file) {
  const thmc::ModelParams params = thmc::read_model_params_file(params_file);
  const thmc::PathTable table =
      thmc::simulate_paths(params, n_paths, length, seed);
  if (out_file.empty()) {
    thmc::write_paths(table, std::cout);
  } else {
    thmc::write_paths_file(table, out_file);
    std::cout << "wrote " << table.total() << " paths to " << out_file << '\n';
  }
  return 0;
}

int cmd_matrix(int n_states, int length, const std::string& out_file) {
  const thmc::Configuration config = thmc::Configuration::build(n_states, length);
  if (out_file.empty()) {
    thmc::write_matrix(config, std::cout);
  } else {
    std::ofstream out = open_out(out_file);
    thmc::write_matrix(config, out);
  }
  return 0;
}

int cmd_fiber(const std::string& data_file, bool aggregated, int n_states,
              int length, std::int64_t work_cap, const std::string& out_file) {
  const thmc::PathTable data =
      thmc::parse_paths_file(data_file, aggregated, n_states, length);
  const thmc::Fiber fiber =
      thmc::enumerate_fiber(thmc::suff_stat(data), data.S(), data.T(), work_cap);
  std::ostringstream body;
  for (const thmc::PathTable& member : fiber.members) {
    bool first = true;
    for (const auto& [path, count] : member.cells()) {
      if (!first) body << ';';
      first = false;
      const std::vector<int> w = thmc::decode_path(path, data.S(), data.T());
      for (std::size_t k = 0; k < w.size(); ++k)
        body << (k ? " " : "") << w[k];
      body << ',' << count;
    }
    body << '\n';
  }
  if (out_file.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream out = open_out(out_file);
    out << body.str();
    std::cout << "fiber size " << fiber.size() << " written to " << out_file
              << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Markov bases and exact conditional homogeneity tests for the toric "
      "homogeneous Markov chain model"};
  app.require_subcommand(1);

  int n_states = 0, length = 0, max_n = 2, threads = 1, disable_mperm = 0;
  std::int64_t burnin = 0, samples = 0, n_paths = 0;
  std::int64_t enum_cap = thmc::kDefaultBasisEnumCap;
  std::int64_t work_cap = thmc::kDefaultFiberWorkCap;
  std::uint64_t seed = 0;
  bool enumerate = false, aggregated = false, disable_degree_one = false;
  std::string out_file, data_file, moves_file, params_file;
  std::string statistic = "pearson";

  CLI::App* basis = app.add_subcommand(
      "basis", "Export the Markov basis (template summary or move file)");
  basis->add_option("--states", n_states, "State count S")->required();
  basis->add_option("--length", length, "Chain length T")->required();
  basis->add_flag("--enumerate", enumerate,
                  "Write the finite move enumeration instead of a summary");
  basis->add_option("--cap", enum_cap, "Enumeration cap on S^T");
  basis->add_option("--out", out_file, "Output file");

  CLI::App* verify = app.add_subcommand(
      "verify", "Check fiber connectivity for all b with N <= max-n paths");
  verify->add_option("--states", n_states, "State count S")->required();
  verify->add_option("--length", length, "Chain length T")->required();
  verify->add_option("--max-n", max_n, "Largest path count per fiber")
      ->required();
  verify->add_flag("--disable-degree-one", disable_degree_one,
                   "Drop degree-one moves from the basis");
  verify->add_option("--disable-mperm", disable_mperm,
                     "Drop m-permutations of this size from the basis");
  verify->add_option("--threads", threads, "Worker threads (default 1)");
  verify->add_option("--cap", work_cap, "Fiber enumeration work cap");
  verify->add_option("--out", out_file, "Per-fiber verdict file");

  CLI::App* test = app.add_subcommand(
      "test", "Exact conditional goodness-of-fit test of homogeneity");
  test->add_option("--data", data_file, "Path data file")->required();
  test->add_flag("--counts", aggregated, "Data rows carry a trailing ,count");
  test->add_option("--states", n_states, "Override the inferred state count");
  test->add_option("--length", length, "Override the inferred chain length");
  test->add_option("--moves", moves_file,
                   "External move file (for shapes without a built-in basis)");
  test->add_option("--statistic", statistic,
                   "pearson | pearson-full | anderson-goodman")
      ->check(CLI::IsMember({"pearson", "pearson-full", "anderson-goodman"}));
  test->add_option("--seed", seed, "RNG seed (required; no silent entropy)")
      ->required();
  test->add_option("--burnin", burnin, "Burn-in steps")->required();
  test->add_option("--samples", samples, "Post-burn-in samples")->required();
  test->add_option("--out", out_file,
                   "Report file; histogram goes to <out>.hist.csv");

  CLI::App* simulate = app.add_subcommand(
      "simulate", "Draw i.i.d. paths from a homogeneous chain");
  simulate->add_option("--params", params_file, "Model parameter file")
      ->required();
  simulate->add_option("--paths", n_paths, "Number of paths N")->required();
  simulate->add_option("--length", length, "Chain length T")->required();
  simulate->add_option("--seed", seed, "RNG seed (required)")->required();
  simulate->add_option("--out", out_file, "Output data file");

  CLI::App* matrix = app.add_subcommand(
      "matrix", "Dump the configuration matrix A for (S, T)");
  matrix->add_option("--states", n_states, "State count S")->required();
  matrix->add_option("--length", length, "Chain length T")->required();
  matrix->add_option("--out", out_file, "Output file");

  CLI::App* fiber = app.add_subcommand(
      "fiber", "Enumerate the fiber of a data set, one member per line");
  fiber->add_option("--data", data_file, "Path data file")->required();
  fiber->add_flag("--counts", aggregated, "Data rows carry a trailing ,count");
  fiber->add_option("--states", n_states, "Override the inferred state count");
  fiber->add_option("--length", length, "Override the inferred chain length");
  fiber->add_option("--cap", work_cap, "Fiber enumeration work cap");
  fiber->add_option("--out", out_file, "Output file");

  CLI11_PARSE(app, argc, argv);

  try {
    if (basis->parsed())
      return cmd_basis(n_states, length, out_file, enumerate, enum_cap);
    if (verify->parsed())
      return cmd_verify(n_states, length, max_n, disable_degree_one,
                        disable_mperm, threads, work_cap, out_file);
    if (test->parsed())
      return cmd_test(data_file, aggregated, n_states, length, moves_file,
                      statistic, seed, burnin, samples, out_file);
    if (simulate->parsed())
      return cmd_simulate(params_file, n_paths, length, seed, out_file);
    if (matrix->parsed()) return cmd_matrix(n_states, length, out_file);
    if (fiber->parsed())
      return cmd_fiber(data_file, aggregated, n_states, length, work_cap,
                       out_file);
  } catch (const thmc::ParseError& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const thmc::UnsupportedShapeError& e) {
    std::cerr << "unsupported shape: " << e.what() << '\n';
    return kExitUnsupportedShape;
  } catch (const thmc::CapExceededError& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kExitCapExceeded;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
