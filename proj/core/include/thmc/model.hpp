#ifndef THMC_MODEL_HPP
#define THMC_MODEL_HPP

#include <cstdint>
#include <vector>

#include "thmc/table.hpp"

namespace thmc {

enum class ModelKind {
  Homogeneous,     // pi_i and row-stochastic p_ij
  Toric,           // free nonnegative gamma_i, beta_ij (normalized on demand)
  NonHomogeneous,  // pi_i and row-stochastic p^(t)_ij per slice
};

// Parameters of one of the three chain models.  `transition` holds one S*S
// row-major matrix for the homogeneous and toric kinds and T-1 of them for
// the non-homogeneous kind.
struct ModelParams {
  ModelKind kind = ModelKind::Homogeneous;
  int S = 0;
  std::vector<double> initial;                       // pi or gamma
  std::vector<std::vector<double>> transition;       // p, beta, or p^(t)

  static ModelParams homogeneous(std::vector<double> pi,
                                 std::vector<double> p);
  static ModelParams toric(std::vector<double> gamma,
                           std::vector<double> beta);
  static ModelParams non_homogeneous(std::vector<double> pi,
                                     std::vector<std::vector<double>> p_t);

  // Throws std::invalid_argument when shapes or stochasticity constraints
  // are violated.
  void validate() const;
};

// Draws n_paths i.i.d. trajectories of length T by sequential sampling from
// a homogeneous chain.  Deterministic given the seed.
PathTable simulate_paths(const ModelParams& params, std::int64_t n_paths,
                         int length, std::uint64_t seed);

}  // namespace thmc

#endif
