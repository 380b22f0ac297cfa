#ifndef THMC_INFERENCE_HPP
#define THMC_INFERENCE_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "thmc/basis.hpp"
#include "thmc/table.hpp"

namespace thmc {

// Dense-fit size guard: the MLE routines materialize all S^T cells.
inline constexpr std::int64_t kDefaultFitCellCap = 1 << 22;

// Maximum-likelihood fit of the THMC log-linear model.
struct FitResult {
  std::vector<double> expected;  // fitted cell means over all S^T cells
  bool converged = false;
  int iterations = 0;
  double residual = 0.0;  // max |A m - b| at exit
  int S = 0;
  int T = 0;
};

// Generalized iterative scaling on the column-normalized design (columns of
// A all sum to T).  Stops when max |A m - b| < tol.
FitResult fit_thmc_mle(const PathTable& table, double tol = 1e-10,
                       int max_iter = 100000);

enum class Statistic {
  Pearson,          // nested-model Pearson: sum (m1 - m0)^2 / m0
  PearsonFull,      // full-table Pearson:   sum (x - m0)^2 / m0
  AndersonGoodman,  // per-slice transition counts vs pooled estimates
};

Statistic statistic_from_name(const std::string& name);
const char* statistic_name(Statistic statistic);

// Full-table Pearson chi-square of the table against the fitted means.
// Cells with m <= eps contribute 0 when x = 0 and +infinity otherwise.
double chi_square(const PathTable& table, const FitResult& fit);

// Pearson chi-square between the fitted means of the non-homogeneous
// alternative H1 (the linearly ordered conditional independence model,
// fitted in closed form) and the THMC fit: sum (m1 - m0)^2 / m0.  This is
// the statistic whose observed value on the Table 1 data is 11.533.
double chi_square_nested(const PathTable& table, const FitResult& fit);

// Anderson-Goodman style per-slice statistic:
// sum_t,i,j (x^t_ij - x^t_i p_ij)^2 / (x^t_i p_ij) with pooled p_ij.
double chi_square_anderson_goodman(const PathTable& table);

double evaluate_statistic(Statistic statistic, const PathTable& table,
                          const FitResult& fit);

// Upper-tail probability of the chi-square distribution with df degrees of
// freedom, via the regularized incomplete gamma function (series /
// continued-fraction evaluation, absolute accuracy ~1e-12).
double asymptotic_p(double chi2, int df);

struct McmcResult {
  std::vector<double> samples;  // statistic value at every post-burn-in step
  double acceptance_rate = 0.0;
  std::int64_t n_steps = 0;
};

// Markov-basis Metropolis chain targeting p(x | b) proportional to
// 1 / prod_w x(w)!.  Each step draws z = random_move(...), a +-1 sign, and
// accepts x' = x + sign z with probability min(1, prod x! / prod x'!);
// infeasible or rejected proposals repeat the current state.  Deterministic
// given the seed.
McmcResult run_mcmc(const PathTable& start, const BasisDescriptor& basis,
                    std::int64_t n_burnin, std::int64_t n_samples,
                    std::uint64_t seed,
                    const std::function<double(const PathTable&)>& statistic);

// Monte Carlo tail probability: #{samples >= observed - 1e-12} / n.
double exact_p(const std::vector<double>& samples, double observed);

struct HistogramBin {
  double left = 0.0;
  double right = 0.0;
  std::int64_t count = 0;
};

struct TestReport {
  double chi2_observed = 0.0;
  int df = 0;
  double p_asymptotic = 0.0;
  double p_exact = 0.0;
  std::int64_t n_samples = 0;
  std::int64_t n_burnin = 0;
  std::uint64_t seed = 0;
  double acceptance_rate = 0.0;
  double p_exact_mcse = 0.0;  // batch-means standard error of p_exact
  std::vector<HistogramBin> histogram;
  Statistic statistic = Statistic::Pearson;
  bool fit_converged = false;
  int fit_iterations = 0;
  double fit_residual = 0.0;
};

// End-to-end exact test: fit, observed statistic, asymptotic p, MCMC with
// the statistic recorded each step, exact p, and a 50-bin histogram.
TestReport run_test(const PathTable& data, const BasisDescriptor& basis,
                    Statistic statistic, std::int64_t n_burnin,
                    std::int64_t n_samples, std::uint64_t seed);

}  // namespace thmc

#endif
