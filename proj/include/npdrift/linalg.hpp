#ifndef NPDRIFT_LINALG_HPP
#define NPDRIFT_LINALG_HPP

#include <Eigen/Dense>

#include "npdrift/basis.hpp"
#include "npdrift/rng.hpp"
#include "npdrift/suffstats.hpp"

namespace npdrift {

// Which product the stored upper-triangular factor represents.
//   UpperMtM: W = M^T M   (standard Cholesky; leading blocks nest)
//   UpperKKt: W = K K^T   (reverse-ordered elimination; fill-free for Schauder)
enum class FactorKind { UpperMtM, UpperKKt };

// Factorization of W^j = Sigma^j + (s^2 Xi^j)^{-1} together with the
// transformed data vector z (||z||^2 = mu^T W^{-1} mu for either kind).
struct PosteriorFactor {
  int j = 0;
  int m = 0;
  FactorKind kind = FactorKind::UpperMtM;
  Eigen::MatrixXd chol;  // upper triangular
  Eigen::VectorXd z;

  // (W^j)^{-1} mu^j
  Eigen::VectorXd mean() const;
  // U ~ N(W^{-1} mu, W^{-1}) by backsolving with z + Z
  Eigen::VectorXd sample(Rng& rng) const;
  // sum_i log chol(i,i) = (1/2) log |W|
  double sum_log_diag() const;
  // Sub-factor for a smaller model from the leading block (UpperMtM only).
  PosteriorFactor leading(const BasisSpec& spec, int j_small) const;
};

PosteriorFactor factorize(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                          const BasisSpec& spec, double s_sq, int j);
PosteriorFactor factorize(const SuffStats& stats, const BasisSpec& spec, double s_sq, int j);

// Fill-free sparse elimination for the Schauder basis: rows/columns are
// processed fine-to-coarse (the perfect elimination ordering of the support
// tree) and the factor is mapped back, giving W = K K^T on the structural
// pattern of Sigma. Falls back to the dense route if unexpected fill shows up.
PosteriorFactor sparse_factorize_schauder(const SuffStats& stats, const BasisSpec& spec,
                                          double s_sq, int j);
PosteriorFactor sparse_factorize_schauder(const Eigen::VectorXd& mu,
                                          const Eigen::MatrixXd& sigma, const BasisSpec& spec,
                                          double s_sq, int j);

Eigen::VectorXd posterior_mean(const PosteriorFactor& factor);
Eigen::VectorXd sample_coefficients(const PosteriorFactor& factor, Rng& rng);
Eigen::VectorXd sample_coefficients(const PosteriorFactor& factor, uint64_t seed);

// log p(x^T | j, s^2) = (1/2)||z||^2 - sum_i log(s xi_i M_ii)
double log_predictive(const PosteriorFactor& factor, const BasisSpec& spec, double s_sq);

// log B(j_to | j_from) at fixed scale, computed from a single factorization at
// the larger model: 2 log B = ||g||^2 - 2 sum_{i>m_lo} log(s xi_i M_ii).
double log_bayes_factor(const SuffStats& stats, const BasisSpec& spec, double s_sq,
                        int j_from, int j_to);

}  // namespace npdrift

#endif
