#include "npdrift/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace npdrift {

Eigen::VectorXd uniform_grid(int n_points) {
  if (n_points < 2) throw std::invalid_argument("grid needs at least 2 points");
  return Eigen::VectorXd::LinSpaced(n_points, 0.0, 1.0);
}

double empirical_quantile(std::vector<double> values, double q) {
  if (values.empty()) throw std::invalid_argument("quantile of empty sample");
  q = std::clamp(q, 0.0, 1.0);
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = pos - static_cast<double>(lo);
  return (1.0 - frac) * values[lo] + frac * values[lo + 1];
}

Eigen::VectorXd rao_blackwell_mean(const std::vector<ChainRecord>& records,
                                   const BasisSpec& spec, const Eigen::VectorXd& grid) {
  if (records.empty()) throw std::invalid_argument("no records");
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(grid.size());
  for (const ChainRecord& rec : records)
    for (Eigen::Index g = 0; g < grid.size(); ++g)
      acc[g] += eval_drift(spec, rec.post_mean, grid[g]);
  return acc / static_cast<double>(records.size());
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> credible_bands(
    const std::vector<ChainRecord>& records, const BasisSpec& spec,
    const Eigen::VectorXd& grid, double alpha) {
  if (records.size() < 10) throw std::invalid_argument("too few records for quantiles");
  Eigen::VectorXd lo(grid.size()), hi(grid.size());
  std::vector<double> vals(records.size());
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    for (std::size_t r = 0; r < records.size(); ++r)
      vals[r] = eval_drift(spec, records[r].theta, grid[g]);
    lo[g] = empirical_quantile(vals, alpha / 2.0);
    hi[g] = empirical_quantile(vals, 1.0 - alpha / 2.0);
  }
  return {lo, hi};
}

std::vector<std::vector<double>> drift_traces(const std::vector<ChainRecord>& records,
                                              const BasisSpec& spec,
                                              const std::vector<double>& design_points) {
  std::vector<std::vector<double>> traces(design_points.size());
  for (std::size_t p = 0; p < design_points.size(); ++p) {
    traces[p].reserve(records.size());
    for (const ChainRecord& rec : records)
      traces[p].push_back(eval_drift(spec, rec.theta, design_points[p]));
  }
  return traces;
}

PosteriorSummary summarize(const std::vector<ChainRecord>& records, const BasisSpec& spec,
                           const Eigen::VectorXd& grid, double alpha) {
  if (records.empty()) throw std::invalid_argument("no records");
  PosteriorSummary s;
  s.grid = grid;
  s.alpha = alpha;
  s.mean = rao_blackwell_mean(records, spec, grid);
  if (records.size() >= 10) {
    auto [lo, hi] = credible_bands(records, spec, grid, alpha);
    s.band_lo = lo;
    s.band_hi = hi;
  }
  double bridge_acc = 0.0;
  for (const ChainRecord& rec : records) {
    s.s_sq_samples.push_back(rec.s_sq);
    s.j_samples.push_back(rec.j);
    s.model_histogram[rec.j] += 1;
    auto& [acc, tot] = s.model_acceptance[{rec.j_prev, rec.proposed_j}];
    tot += 1;
    if (rec.accepted_model) acc += 1;
    bridge_acc += rec.bridge_accept;
  }
  s.mean_bridge_accept = bridge_acc / static_cast<double>(records.size());
  s.s_sq_mean = std::accumulate(s.s_sq_samples.begin(), s.s_sq_samples.end(), 0.0) /
                static_cast<double>(s.s_sq_samples.size());
  s.s_sq_median = empirical_quantile(s.s_sq_samples, 0.5);
  return s;
}

}  // namespace npdrift
