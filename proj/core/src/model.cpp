#include "thmc/model.hpp"

#include <cmath>
#include <stdexcept>

#include "thmc/rng.hpp"

namespace thmc {

namespace {

constexpr double kStochasticTol = 1e-9;

void check_distribution(const std::vector<double>& p, const char* what) {
  double sum = 0;
  for (double v : p) {
    if (!(v >= 0)) throw std::invalid_argument(std::string(what) + ": negative entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kStochasticTol)
    throw std::invalid_argument(std::string(what) + ": does not sum to 1");
}

void check_nonnegative(const std::vector<double>& p, const char* what) {
  for (double v : p)
    if (!(v >= 0)) throw std::invalid_argument(std::string(what) + ": negative entry");
}

int sample_from(const double* weights, int n, double total, Rng& rng) {
  double u = rng.unit() * total;
  for (int k = 0; k < n - 1; ++k) {
    u -= weights[k];
    if (u < 0) return k;
  }
  return n - 1;
}

}  // namespace

ModelParams ModelParams::homogeneous(std::vector<double> pi,
                                     std::vector<double> p) {
  ModelParams out;
  out.kind = ModelKind::Homogeneous;
  out.S = static_cast<int>(pi.size());
  out.initial = std::move(pi);
  out.transition.push_back(std::move(p));
  out.validate();
  return out;
}

ModelParams ModelParams::toric(std::vector<double> gamma,
                               std::vector<double> beta) {
  ModelParams out;
  out.kind = ModelKind::Toric;
  out.S = static_cast<int>(gamma.size());
  out.initial = std::move(gamma);
  out.transition.push_back(std::move(beta));
  out.validate();
  return out;
}

ModelParams ModelParams::non_homogeneous(
    std::vector<double> pi, std::vector<std::vector<double>> p_t) {
  ModelParams out;
  out.kind = ModelKind::NonHomogeneous;
  out.S = static_cast<int>(pi.size());
  out.initial = std::move(pi);
  out.transition = std::move(p_t);
  out.validate();
  return out;
}

void ModelParams::validate() const {
  if (S < 2) throw std::invalid_argument("need at least 2 states");
  if (initial.size() != static_cast<std::size_t>(S))
    throw std::invalid_argument("initial vector has wrong length");
  const std::size_t n_matrices =
      kind == ModelKind::NonHomogeneous ? transition.size() : 1;
  if (transition.size() != n_matrices || n_matrices == 0)
    throw std::invalid_argument("wrong number of transition matrices");
  for (const auto& mat : transition)
    if (mat.size() != static_cast<std::size_t>(S) * S)
      throw std::invalid_argument("transition matrix has wrong shape");

  if (kind == ModelKind::Toric) {
    check_nonnegative(initial, "gamma");
    check_nonnegative(transition.front(), "beta");
    return;
  }
  check_distribution(initial, "pi");
  for (const auto& mat : transition)
    for (int i = 0; i < S; ++i) {
      std::vector<double> row(mat.begin() + static_cast<std::ptrdiff_t>(i) * S,
                              mat.begin() + static_cast<std::ptrdiff_t>(i + 1) * S);
      check_distribution(row, "transition row");
    }
}

PathTable simulate_paths(const ModelParams& params, std::int64_t n_paths,
                         int length, std::uint64_t seed) {
  params.validate();
  if (params.kind != ModelKind::Homogeneous)
    throw std::invalid_argument("simulation requires homogeneous parameters");
  if (n_paths <= 0) throw std::invalid_argument("need a positive path count");

  const int S = params.S;
  const std::vector<double>& p = params.transition.front();
  PathTable table(S, length);
  Rng rng(seed);
  std::vector<int> w(static_cast<std::size_t>(length));
  for (std::int64_t k = 0; k < n_paths; ++k) {
    int state = sample_from(params.initial.data(), S, 1.0, rng) + 1;
    w[0] = state;
    for (int t = 1; t < length; ++t) {
      const double* row = p.data() + static_cast<std::ptrdiff_t>(state - 1) * S;
      state = sample_from(row, S, 1.0, rng) + 1;
      w[static_cast<std::size_t>(t)] = state;
    }
    table.add(path_index(w, S), 1);
  }
  return table;
}

}  // namespace thmc
