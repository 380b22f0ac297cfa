#include "thmc/inference.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thmc/configuration.hpp"
#include "thmc/errors.hpp"
#include "thmc/rng.hpp"
#include "thmc/suff_stat.hpp"

namespace thmc {

namespace {

constexpr double kCellEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

FitResult fit_thmc_mle(const PathTable& table, double tol, int max_iter) {
  const int S = table.S(), T = table.T();
  const PathIndex cells = num_paths(S, T);
  if (static_cast<std::int64_t>(cells) > kDefaultFitCellCap)
    throw CapExceededError("MLE fit exceeds the dense cell cap");
  if (table.total() <= 0) throw std::invalid_argument("empty table");

  const int n_rows = S + S * S;
  const SuffStat stat = suff_stat(table);
  const std::vector<std::int64_t> b64 = stat.flat();
  std::vector<double> b(b64.begin(), b64.end());

  // column structure of A: per cell, the touched rows with coefficients
  std::vector<std::vector<std::pair<int, std::int8_t>>> columns(
      static_cast<std::size_t>(cells));
  for (PathIndex w = 0; w < cells; ++w) {
    const std::vector<int> path = decode_path(w, S, T);
    std::vector<std::int8_t> dense(static_cast<std::size_t>(n_rows), 0);
    dense[static_cast<std::size_t>(path[0] - 1)] = 1;
    for (int t = 0; t + 1 < T; ++t)
      ++dense[static_cast<std::size_t>(S + (path[t] - 1) * S + (path[t + 1] - 1))];
    for (int r = 0; r < n_rows; ++r)
      if (dense[static_cast<std::size_t>(r)] != 0)
        columns[static_cast<std::size_t>(w)].emplace_back(
            r, dense[static_cast<std::size_t>(r)]);
  }

  FitResult fit;
  fit.S = S;
  fit.T = T;
  fit.expected.assign(static_cast<std::size_t>(cells),
                      static_cast<double>(table.total()) /
                          static_cast<double>(cells));
  std::vector<double> margins(static_cast<std::size_t>(n_rows));
  std::vector<double> log_ratio(static_cast<std::size_t>(n_rows));

  // every column of A sums to T, so plain GIS divides exponents by T
  const double inv_c = 1.0 / static_cast<double>(T);
  double residual = kInf;
  int iter = 0;
  for (; iter < max_iter; ++iter) {
    std::fill(margins.begin(), margins.end(), 0.0);
    for (PathIndex w = 0; w < cells; ++w) {
      const double m = fit.expected[static_cast<std::size_t>(w)];
      if (m == 0.0) continue;
      for (const auto& [r, c] : columns[static_cast<std::size_t>(w)])
        margins[static_cast<std::size_t>(r)] += c * m;
    }
    residual = 0.0;
    for (int r = 0; r < n_rows; ++r)
      residual = std::max(residual,
                          std::abs(margins[static_cast<std::size_t>(r)] -
                                   b[static_cast<std::size_t>(r)]));
    if (residual < tol) {
      fit.converged = true;
      break;
    }
    for (int r = 0; r < n_rows; ++r) {
      const double bm = b[static_cast<std::size_t>(r)];
      const double am = margins[static_cast<std::size_t>(r)];
      if (bm <= 0.0)
        log_ratio[static_cast<std::size_t>(r)] = -kInf;  // zero margin
      else if (am > 0.0)
        log_ratio[static_cast<std::size_t>(r)] = std::log(bm / am);
      else
        log_ratio[static_cast<std::size_t>(r)] = 0.0;
    }
    for (PathIndex w = 0; w < cells; ++w) {
      double& m = fit.expected[static_cast<std::size_t>(w)];
      if (m == 0.0) continue;
      double exponent = 0.0;
      for (const auto& [r, c] : columns[static_cast<std::size_t>(w)])
        exponent += c * log_ratio[static_cast<std::size_t>(r)];
      m = std::isfinite(exponent) ? m * std::exp(exponent * inv_c) : 0.0;
    }
  }
  fit.iterations = iter;
  fit.residual = residual;
  return fit;
}

double chi_square(const PathTable& table, const FitResult& fit) {
  if (table.S() != fit.S || table.T() != fit.T)
    throw std::invalid_argument("table and fit shapes differ");
  double out = 0.0;
  PathIndex w = 0;
  for (const double m : fit.expected) {
    const double x = static_cast<double>(table.count(w++));
    if (m > kCellEps) {
      const double d = x - m;
      out += d * d / m;
    } else if (x > 0) {
      return kInf;  // observed mass on a boundary cell
    }
  }
  return out;
}

namespace {

// Closed-form fitted means of the linearly ordered conditional independence
// model H1 (decomposable): m1(w) = prod_t x^t(s_t, s_{t+1}) / prod x^t(s_t).
std::vector<double> h1_fitted_means(const PathTable& table) {
  const int S = table.S(), T = table.T();
  const PathIndex cells = num_paths(S, T);
  std::vector<std::vector<std::int64_t>> edges(static_cast<std::size_t>(T - 1));
  std::vector<std::vector<std::int64_t>> nodes(static_cast<std::size_t>(T));
  for (int t = 1; t <= T - 1; ++t)
    edges[static_cast<std::size_t>(t - 1)] = slice_transition_counts(table, t);
  for (int t = 1; t <= T; ++t)
    nodes[static_cast<std::size_t>(t - 1)] = node_counts(table, t);

  std::vector<double> out(static_cast<std::size_t>(cells), 0.0);
  std::vector<int> w(static_cast<std::size_t>(T), 1);
  for (PathIndex idx = 0; idx < cells; ++idx) {
    double value = 1.0;
    for (int t = 0; t + 1 < T && value > 0; ++t) {
      const std::int64_t e =
          edges[static_cast<std::size_t>(t)]
               [static_cast<std::size_t>(w[static_cast<std::size_t>(t)] - 1) * S +
                (w[static_cast<std::size_t>(t) + 1] - 1)];
      value *= static_cast<double>(e);
      if (t > 0) {
        const std::int64_t sep =
            nodes[static_cast<std::size_t>(t)]
                 [static_cast<std::size_t>(w[static_cast<std::size_t>(t)] - 1)];
        value = sep > 0 ? value / static_cast<double>(sep) : 0.0;
      }
    }
    out[static_cast<std::size_t>(idx)] = value;
    for (int t = T - 1; t >= 0; --t) {
      if (w[static_cast<std::size_t>(t)] < S) {
        ++w[static_cast<std::size_t>(t)];
        std::fill(w.begin() + t + 1, w.end(), 1);
        break;
      }
    }
  }
  return out;
}

}  // namespace

double chi_square_nested(const PathTable& table, const FitResult& fit) {
  if (table.S() != fit.S || table.T() != fit.T)
    throw std::invalid_argument("table and fit shapes differ");
  const std::vector<double> m1 = h1_fitted_means(table);
  double out = 0.0;
  for (std::size_t w = 0; w < m1.size(); ++w) {
    const double m0 = fit.expected[w];
    if (m0 > kCellEps) {
      const double d = m1[w] - m0;
      out += d * d / m0;
    } else if (m1[w] > kCellEps) {
      return kInf;
    }
  }
  return out;
}

double chi_square_anderson_goodman(const PathTable& table) {
  const int S = table.S(), T = table.T();
  const SuffStat stat = suff_stat(table);
  std::vector<double> row_total(static_cast<std::size_t>(S), 0.0);
  for (int i = 1; i <= S; ++i)
    for (int j = 1; j <= S; ++j)
      row_total[static_cast<std::size_t>(i - 1)] +=
          static_cast<double>(stat.trans(i, j));
  double out = 0.0;
  for (int t = 1; t <= T - 1; ++t) {
    const auto slice = slice_transition_counts(table, t);
    const auto nodes = node_counts(table, t);
    for (int i = 1; i <= S; ++i) {
      if (row_total[static_cast<std::size_t>(i - 1)] <= 0) continue;
      for (int j = 1; j <= S; ++j) {
        const double p = static_cast<double>(stat.trans(i, j)) /
                         row_total[static_cast<std::size_t>(i - 1)];
        const double expected =
            static_cast<double>(nodes[static_cast<std::size_t>(i - 1)]) * p;
        const double x = static_cast<double>(
            slice[static_cast<std::size_t>(i - 1) * S + (j - 1)]);
        if (expected > kCellEps) {
          const double d = x - expected;
          out += d * d / expected;
        } else if (x > 0) {
          return kInf;
        }
      }
    }
  }
  return out;
}

Statistic statistic_from_name(const std::string& name) {
  if (name == "pearson") return Statistic::Pearson;
  if (name == "pearson-full") return Statistic::PearsonFull;
  if (name == "anderson-goodman") return Statistic::AndersonGoodman;
  throw std::invalid_argument("unknown statistic: " + name);
}

const char* statistic_name(Statistic statistic) {
  switch (statistic) {
    case Statistic::Pearson: return "pearson";
    case Statistic::PearsonFull: return "pearson-full";
    case Statistic::AndersonGoodman: return "anderson-goodman";
  }
  return "?";
}

double evaluate_statistic(Statistic statistic, const PathTable& table,
                          const FitResult& fit) {
  switch (statistic) {
    case Statistic::Pearson: return chi_square_nested(table, fit);
    case Statistic::PearsonFull: return chi_square(table, fit);
    case Statistic::AndersonGoodman: return chi_square_anderson_goodman(table);
  }
  return 0.0;
}

namespace {

// Regularized incomplete gamma: lower P(a, x) by power series.
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int n = 1; n < 10000; ++n) {
    term *= x / (a + n);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper Q(a, x) by modified Lentz continued fraction.
double gamma_q_cf(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 10000; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double asymptotic_p(double chi2, int df) {
  if (df < 1) throw std::invalid_argument("need df >= 1");
  if (!(chi2 >= 0)) throw std::invalid_argument("need chi2 >= 0");
  if (chi2 == 0.0) return 1.0;
  if (std::isinf(chi2)) return 0.0;
  const double a = 0.5 * df;
  const double x = 0.5 * chi2;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_cf(a, x);
}

namespace {

// Cache of support-instantiated basis moves per visited table, for the
// small-fiber exchange kernel below.
class ApplicableCache {
public:
  explicit ApplicableCache(const BasisDescriptor& basis) : basis_(basis) {}

  const std::vector<Move>& of(const PathTable& table) {
    std::string key;
    key.reserve(table.support_size() * 16);
    for (const auto& [path, count] : table.cells()) {
      key.append(reinterpret_cast<const char*>(&path), sizeof(path));
      key.append(reinterpret_cast<const char*>(&count), sizeof(count));
    }
    auto [it, inserted] = cache_.try_emplace(std::move(key));
    if (inserted) it->second = applicable_moves(table, basis_);
    return it->second;
  }

private:
  const BasisDescriptor& basis_;
  std::unordered_map<std::string, std::vector<Move>> cache_;
};

}  // namespace

McmcResult run_mcmc(const PathTable& start, const BasisDescriptor& basis,
                    std::int64_t n_burnin, std::int64_t n_samples,
                    std::uint64_t seed,
                    const std::function<double(const PathTable&)>& statistic) {
  if (start.S() != basis.S() || start.T() != basis.T())
    throw std::invalid_argument("table and basis shapes differ");
  if (n_burnin < 0 || n_samples <= 0)
    throw std::invalid_argument("need n_burnin >= 0 and n_samples > 0");
  const std::int64_t n_total = start.total();
  if (n_total > 1000000) throw CapExceededError("table total exceeds 10^6");

  std::vector<double> log_fact(static_cast<std::size_t>(n_total) + 1, 0.0);
  for (std::int64_t k = 1; k <= n_total; ++k)
    log_fact[static_cast<std::size_t>(k)] =
        log_fact[static_cast<std::size_t>(k) - 1] + std::log(static_cast<double>(k));

  // On fibers of very few paths the state-independent template proposals
  // are rarely feasible, so every other step draws uniformly from the moves
  // instantiated on the current support, with the exact Hastings count
  // correction |A(x)| / |A(y)|.  Both kernels leave 1 / prod x(w)!
  // invariant; N is constant along the chain so the schedule is fixed.
  constexpr std::int64_t kExchangeKernelMaxN = 6;
  const bool interleave_exchange = n_total <= kExchangeKernelMaxN;
  ApplicableCache cache(basis);

  McmcResult result;
  result.samples.reserve(static_cast<std::size_t>(n_samples));
  PathTable state = start;
  Rng rng(seed);
  double current_stat = statistic(state);
  std::int64_t accepted = 0;
  const std::int64_t steps = n_burnin + n_samples;

  auto log_ratio = [&](const Move& move, int sign, bool& feasible) {
    double dlog = 0.0;  // log pi(x') - log pi(x)
    feasible = true;
    for (const auto& [path, value] : move.delta()) {
      const std::int64_t old_count = state.count(path);
      const std::int64_t new_count = old_count + sign * value;
      if (new_count < 0) {
        feasible = false;
        return 0.0;
      }
      dlog += log_fact[static_cast<std::size_t>(old_count)] -
              log_fact[static_cast<std::size_t>(new_count)];
    }
    return dlog;
  };
  auto commit = [&](const Move& move, int sign) {
    for (const auto& [path, value] : move.delta())
      state.add(path, sign * value);
    current_stat = statistic(state);
    ++accepted;
  };

  for (std::int64_t step = 0; step < steps; ++step) {
    if (interleave_exchange && (step & 1) != 0) {
      const std::vector<Move>& at_state = cache.of(state);
      if (!at_state.empty()) {
        const std::uint64_t pick = rng.below(2 * at_state.size());
        const Move& move = at_state[pick / 2];
        const int sign = (pick & 1) ? -1 : 1;
        const double u = rng.unit();
        bool feasible = false;
        const double dlog = log_ratio(move, sign, feasible);
        if (feasible) {
          const PathTable proposed = apply_move(state, move, sign);
          const std::vector<Move>& at_proposed = cache.of(proposed);
          const bool reversible = std::binary_search(
              at_proposed.begin(), at_proposed.end(), move);
          const double log_accept =
              dlog + std::log(static_cast<double>(at_state.size())) -
              std::log(static_cast<double>(at_proposed.size()));
          if (reversible && (log_accept >= 0.0 || u < std::exp(log_accept)))
            commit(move, sign);
        }
      }
    } else {
      const Move move = random_move(state, basis, rng);
      const int sign = rng.coin() ? 1 : -1;
      const double u = rng.unit();
      if (!move.zero()) {
        bool feasible = false;
        const double dlog = log_ratio(move, sign, feasible);
        if (feasible && (dlog >= 0.0 || u < std::exp(dlog))) commit(move, sign);
      }
    }
    if (step >= n_burnin) result.samples.push_back(current_stat);
  }
  result.acceptance_rate =
      static_cast<double>(accepted) / static_cast<double>(steps);
  result.n_steps = steps;
  return result;
}

double exact_p(const std::vector<double>& samples, double observed) {
  if (samples.empty()) throw std::invalid_argument("no samples");
  std::int64_t hits = 0;
  for (double s : samples)
    if (s >= observed - 1e-12) ++hits;
  return static_cast<double>(hits) / static_cast<double>(samples.size());
}

namespace {

double batch_means_mcse(const std::vector<double>& indicator) {
  const std::size_t n = indicator.size();
  const std::size_t n_batches = std::max<std::size_t>(
      2, static_cast<std::size_t>(std::sqrt(static_cast<double>(n))));
  const std::size_t batch = n / n_batches;
  if (batch < 1) return 0.0;
  std::vector<double> means;
  means.reserve(n_batches);
  double grand = 0.0;
  for (std::size_t b = 0; b < n_batches; ++b) {
    double sum = 0.0;
    for (std::size_t k = b * batch; k < (b + 1) * batch; ++k) sum += indicator[k];
    means.push_back(sum / static_cast<double>(batch));
    grand += means.back();
  }
  grand /= static_cast<double>(n_batches);
  double var = 0.0;
  for (double m : means) var += (m - grand) * (m - grand);
  var /= static_cast<double>(n_batches - 1);
  return std::sqrt(var / static_cast<double>(n_batches));
}

}  // namespace

TestReport run_test(const PathTable& data, const BasisDescriptor& basis,
                    Statistic statistic, std::int64_t n_burnin,
                    std::int64_t n_samples, std::uint64_t seed) {
  TestReport report;
  report.statistic = statistic;
  report.n_burnin = n_burnin;
  report.n_samples = n_samples;
  report.seed = seed;

  const FitResult fit = fit_thmc_mle(data);
  report.fit_converged = fit.converged;
  report.fit_iterations = fit.iterations;
  report.fit_residual = fit.residual;
  report.chi2_observed = evaluate_statistic(statistic, data, fit);
  report.df = degrees_of_freedom(data.S(), data.T());
  report.p_asymptotic = asymptotic_p(report.chi2_observed, report.df);

  const McmcResult mcmc = run_mcmc(
      data, basis, n_burnin, n_samples, seed,
      [&](const PathTable& t) { return evaluate_statistic(statistic, t, fit); });
  report.acceptance_rate = mcmc.acceptance_rate;
  report.p_exact = exact_p(mcmc.samples, report.chi2_observed);

  std::vector<double> indicator;
  indicator.reserve(mcmc.samples.size());
  for (double s : mcmc.samples)
    indicator.push_back(s >= report.chi2_observed - 1e-12 ? 1.0 : 0.0);
  report.p_exact_mcse = batch_means_mcse(indicator);

  // 50 equal-width bins from 0 to 1.05 * max(sample max, observed)
  double top = report.chi2_observed;
  for (double s : mcmc.samples)
    if (std::isfinite(s)) top = std::max(top, s);
  top = std::isfinite(top) && top > 0 ? 1.05 * top : 1.0;
  constexpr int kBins = 50;
  const double width = top / kBins;
  report.histogram.assign(kBins, {});
  for (int k = 0; k < kBins; ++k) {
    report.histogram[static_cast<std::size_t>(k)].left = k * width;
    report.histogram[static_cast<std::size_t>(k)].right = (k + 1) * width;
  }
  for (double s : mcmc.samples) {
    int bin = std::isfinite(s) ? static_cast<int>(s / width) : kBins - 1;
    bin = std::clamp(bin, 0, kBins - 1);
    ++report.histogram[static_cast<std::size_t>(bin)].count;
  }
  return report;
}

}  // namespace thmc
