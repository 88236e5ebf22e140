#ifndef NPDRIFT_SAMPLER_HPP
#define NPDRIFT_SAMPLER_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "npdrift/basis.hpp"
#include "npdrift/diffusion.hpp"
#include "npdrift/linalg.hpp"
#include "npdrift/rng.hpp"
#include "npdrift/suffstats.hpp"

namespace npdrift {

// Hyperparameters of the hierarchical prior and the model-proposal kernel.
struct PriorConfig {
  double ig_shape = 2.5;              // inverse-gamma a
  double ig_rate = 2.5;               // inverse-gamma b
  double model_decay = 0.05129329438755058;  // C in p(j) ~ exp(-C m_j); -log(0.95)
  double q_stay = 0.5;
  double q_up = 0.25;
  double q_down = 0.25;

  void validate() const;
  // Defaults per basis: Fourier (1/2, 1/4, 1/4), Schauder (0.9, 0.05, 0.05).
  static PriorConfig defaults_for(BasisFamily family);
};

struct SamplerConfig {
  int iters = 3000;
  int burn_in = 500;
  uint64_t seed = 1;
  std::optional<int> fixed_level;     // disable Move II, Gibbs at this level
  std::optional<double> fixed_scale;  // disable Move I, pin s^2
  std::size_t n_interior = 49;        // imputed points per segment (discrete mode)
  long resync_every = 1000;           // full suffstat recompute cadence, in bridge sweeps
  bool sparse_schauder = true;        // fill-free factorization for Schauder

  void validate() const;
};

// Full state of the transdimensional chain.
struct ChainState {
  int j = 1;
  Eigen::VectorXd theta;
  double s_sq = 1.0;
  Path latent;  // discrete mode only; empty otherwise
  SuffStats stats;
};

// Per-iteration record (post burn-in): sampled state, the Rao-Blackwell
// posterior-mean coefficients at the iteration's model, and acceptance info.
struct ChainRecord {
  int j = 0;
  int j_prev = 0;
  int proposed_j = 0;
  bool accepted_model = false;
  double s_sq = 0.0;
  Eigen::VectorXd theta;
  Eigen::VectorXd post_mean;
  double bridge_accept = 0.0;  // mean Move III acceptance this iteration
};

// Move I: Gibbs draw s^2 ~ IG(a + m_j/2, b + (1/2) theta^T Xi^{-1} theta).
void move_scale(ChainState& state, const PriorConfig& prior, const BasisSpec& spec, Rng& rng);

struct ModelMoveResult {
  int proposed_j = 0;
  bool accepted = false;
  PosteriorFactor factor;  // factor at max(j, j') (dense) or at the final j (sparse)
};

// Move II: reversible jump between models. Proposes j' ~ q(.|j); accepts with
// min{1, B(j'|j) R(j'|j)}; theta is drawn at the new level only on acceptance.
// Out-of-range proposals are rejected (self-loop).
ModelMoveResult move_model(ChainState& state, const PriorConfig& prior, const BasisSpec& spec,
                           bool sparse_schauder, Rng& rng);

// Move III: independent Brownian-bridge proposals per segment, accepted with
// the Girsanov likelihood ratio. Returns the mean acceptance rate. Segment k
// uses the RNG substream (seed, iter, k) so results are schedule-independent.
double move_bridges(ChainState& state, const BasisSpec& spec, uint64_t master_seed,
                    uint64_t iter, long resync_every);

std::vector<ChainRecord> run_continuous(const Path& path, const BasisSpec& spec,
                                        const PriorConfig& prior, const SamplerConfig& cfg);

// obs are values at times 0, delta, ..., n*delta; the latent path starts as
// their linear interpolation on the delta/(n_interior+1) grid.
std::vector<ChainRecord> run_discrete(const std::vector<double>& obs, double delta,
                                      const BasisSpec& spec, const PriorConfig& prior,
                                      const SamplerConfig& cfg);

}  // namespace npdrift

#endif
