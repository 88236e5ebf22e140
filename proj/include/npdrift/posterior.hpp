#ifndef NPDRIFT_POSTERIOR_HPP
#define NPDRIFT_POSTERIOR_HPP

#include <map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "npdrift/basis.hpp"
#include "npdrift/sampler.hpp"

namespace npdrift {

// Estimates and diagnostics computed from a chain.
struct PosteriorSummary {
  Eigen::VectorXd grid;
  Eigen::VectorXd mean;              // Rao-Blackwellized posterior mean drift
  Eigen::VectorXd band_lo, band_hi;  // pointwise 1-alpha credible bounds
  double alpha = 0.10;
  std::vector<double> s_sq_samples;
  std::vector<int> j_samples;
  std::map<int, long> model_histogram;
  // (from, to) -> (accepted, proposed) counts for Move II
  std::map<std::pair<int, int>, std::pair<long, long>> model_acceptance;
  double mean_bridge_accept = 0.0;
  double s_sq_mean = 0.0;
  double s_sq_median = 0.0;
};

Eigen::VectorXd uniform_grid(int n_points);  // n_points values spanning [0,1]

// Average over iterations of the drift curve built from each iteration's
// posterior-mean coefficients; vectors of different lengths are averaged in
// function space.
Eigen::VectorXd rao_blackwell_mean(const std::vector<ChainRecord>& records,
                                   const BasisSpec& spec, const Eigen::VectorXd& grid);

// Pointwise empirical alpha/2 and 1-alpha/2 quantiles of the sampled drift
// curves. Needs at least 10 records.
std::pair<Eigen::VectorXd, Eigen::VectorXd> credible_bands(
    const std::vector<ChainRecord>& records, const BasisSpec& spec,
    const Eigen::VectorXd& grid, double alpha);

// Trace of the sampled drift at fixed design points, one series per point.
std::vector<std::vector<double>> drift_traces(const std::vector<ChainRecord>& records,
                                              const BasisSpec& spec,
                                              const std::vector<double>& design_points);

PosteriorSummary summarize(const std::vector<ChainRecord>& records, const BasisSpec& spec,
                           const Eigen::VectorXd& grid, double alpha = 0.10);

double empirical_quantile(std::vector<double> values, double q);

}  // namespace npdrift

#endif
