// Acceptance suite: one pass/fail line per criterion, nonzero exit on failure.
// Each check pins its seeds so reruns are deterministic.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "npdrift/basis.hpp"
#include "npdrift/diffusion.hpp"
#include "npdrift/linalg.hpp"
#include "npdrift/posterior.hpp"
#include "npdrift/sampler.hpp"
#include "npdrift/suffstats.hpp"
#include "npdrift/testdrifts.hpp"
#include "test_support.hpp"

using namespace npdrift;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

SuffStats random_stats(const BasisSpec& spec, int j, uint64_t seed, double T = 2.0,
                       double dt = 0.002) {
  Rng rng(seed);
  const double amp = 1.0 + 4.0 * rng.uniform();
  const double freq = 2.0 * M_PI * (1.0 + std::floor(3.0 * rng.uniform()));
  const double x0 = rng.normal();
  Path p = euler_simulate([=](double x) { return amp * std::sin(freq * x); }, x0, T, dt,
                          mix64(seed));
  return SuffStats::compute(spec, p, j);
}

double rel_l2_error(const Eigen::VectorXd& grid, const Eigen::VectorXd& est,
                    const DriftFn& truth) {
  // trapezoid rule on the uniform grid
  double num = 0.0, den = 0.0;
  for (Eigen::Index g = 0; g + 1 < grid.size(); ++g) {
    const double h = grid[g + 1] - grid[g];
    const double d0 = est[g] - truth(grid[g]);
    const double d1 = est[g + 1] - truth(grid[g + 1]);
    const double t0 = truth(grid[g]), t1 = truth(grid[g + 1]);
    num += 0.5 * h * (d0 * d0 + d1 * d1);
    den += 0.5 * h * (t0 * t0 + t1 * t1);
  }
  return std::sqrt(num / den);
}

Path simulate_thinned(const DriftFn& drift, double T, double dt_fine, std::size_t keep,
                      uint64_t seed) {
  Path p = euler_simulate(drift, 0.0, T, dt_fine, seed);
  return keep > 1 ? thin(p, keep) : p;
}

// ---------------------------------------------------------------------------

bool criterion_bayes_factor_oracle(std::string& detail) {
  const auto t0 = Clock::now();
  double max_rel = 0.0;
  Rng pick(1001);
  for (int inst = 0; inst < 200; ++inst) {
    const bool fourier = inst % 2 == 0;
    const BasisSpec spec = fourier ? BasisSpec(BasisFamily::Fourier, 1.5, 8)
                                   : BasisSpec(BasisFamily::Schauder, 1.5, 8);
    const int j_hi = 2 + static_cast<int>(pick.uniform() * 7.0);  // 2..8
    const int j_from = 1 + static_cast<int>(pick.uniform() * j_hi);
    int j_to = 1 + static_cast<int>(pick.uniform() * j_hi);
    if (j_to == j_from) j_to = (j_from == j_hi) ? j_from - 1 : j_from + 1;
    const double s_sq = 0.2 + 3.0 * pick.uniform();
    SuffStats stats = random_stats(spec, j_hi, 2000u + inst);
    const double got = log_bayes_factor(stats, spec, s_sq, j_from, j_to);
    const double ref = log_predictive(factorize(stats, spec, s_sq, j_to), spec, s_sq) -
                       log_predictive(factorize(stats, spec, s_sq, j_from), spec, s_sq);
    const double rel = std::abs(got - ref) / std::max(1.0, std::abs(ref));
    max_rel = std::max(max_rel, rel);
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e, %.2fs", max_rel, secs);
  detail = buf;
  return max_rel < 1e-8 && secs < 5.0;
}

bool criterion_nested_cholesky(std::string& detail) {
  const auto t0 = Clock::now();
  double max_rel = 0.0;
  Rng pick(1002);
  for (int inst = 0; inst < 100; ++inst) {
    const bool fourier = inst % 2 == 0;
    const BasisSpec spec = fourier ? BasisSpec(BasisFamily::Fourier, 1.5, 10)
                                   : BasisSpec(BasisFamily::Schauder, 1.5, 8);
    const int j_big = 3 + static_cast<int>(pick.uniform() * 5.0);  // 3..7
    const int j_small = 1 + static_cast<int>(pick.uniform() * (j_big - 1));
    const double s_sq = 0.3 + 2.0 * pick.uniform();
    SuffStats stats = random_stats(spec, j_big, 3000u + inst);
    PosteriorFactor big = factorize(stats, spec, s_sq, j_big);
    PosteriorFactor direct = factorize(stats, spec, s_sq, j_small);
    PosteriorFactor lead = big.leading(spec, j_small);
    const double rc =
        (lead.chol - direct.chol).norm() / std::max(1.0, direct.chol.norm());
    const double rz = (lead.z - direct.z).norm() / std::max(1.0, direct.z.norm());
    max_rel = std::max({max_rel, rc, rz});
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e, %.2fs", max_rel, secs);
  detail = buf;
  return max_rel < 1e-10 && secs < 2.0;
}

bool criterion_exact_model_posterior(std::string& detail) {
  const auto t0 = Clock::now();
  const BasisSpec spec(BasisFamily::Fourier, 1.5, 3);
  const PriorConfig prior;
  const double s_sq = 1.0;
  Path data = euler_simulate(gallery("b1").fn, 0.0, 5.0, 1e-3, 42u);
  SuffStats stats = SuffStats::compute(spec, data, spec.j_max);

  Eigen::Vector3d log_post;
  for (int j = 1; j <= 3; ++j)
    log_post[j - 1] = log_predictive(factorize(stats, spec, s_sq, j), spec, s_sq) -
                      prior.model_decay * spec.model_dim(j);
  Eigen::Vector3d exact = (log_post.array() - log_post.maxCoeff()).exp();
  exact /= exact.sum();

  ChainState state;
  state.stats = stats;
  state.j = 1;
  state.s_sq = s_sq;
  state.theta = Eigen::VectorXd::Zero(1);
  Rng rng(314);
  Eigen::Vector3d counts = Eigen::Vector3d::Zero();
  const int iters = 200000;
  for (int it = 0; it < iters; ++it) {
    move_model(state, prior, spec, false, rng);
    counts[state.j - 1] += 1.0;
  }
  const double tv = 0.5 * (counts / iters - exact).cwiseAbs().sum();
  const double secs = seconds_since(t0);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "TV %.4f (exact %.3f/%.3f/%.3f), %.1fs", tv, exact[0], exact[1], exact[2],
                secs);
  detail = buf;
  return tv < 0.03 && secs < 60.0;
}

bool criterion_gibbs_scale(std::string& detail) {
  const BasisSpec spec(BasisFamily::Fourier, 1.5, 10);
  const PriorConfig prior;  // a = b = 2.5
  ChainState state;
  state.theta = Eigen::VectorXd(5);
  state.theta << 0.8, -0.4, 0.3, -0.2, 0.6;
  double quad = 0.0;
  for (int l = 1; l <= 5; ++l)
    quad += state.theta[l - 1] * state.theta[l - 1] / xi_sq(spec, l);
  const double a = prior.ig_shape + 2.5;
  const double b = prior.ig_rate + 0.5 * quad;

  const int n = 100000;
  Rng rng(555);
  std::vector<double> draws;
  draws.reserve(n);
  double acc = 0.0;
  for (int i = 0; i < n; ++i) {
    move_scale(state, prior, spec, rng);
    draws.push_back(state.s_sq);
    acc += state.s_sq;
  }
  const double mean = acc / n;
  double var = 0.0, m4 = 0.0;
  for (double x : draws) {
    const double d = x - mean;
    var += d * d;
    m4 += d * d * d * d;
  }
  var /= n;
  m4 /= n;
  const double mean_ref = b / (a - 1.0);
  const double var_ref = b * b / ((a - 1.0) * (a - 1.0) * (a - 2.0));
  const double se_mean = std::sqrt(var / n);
  const double se_var = std::sqrt(std::max(m4 - var * var, 0.0) / n);
  const bool moments_ok = std::abs(mean - mean_ref) < 3.0 * se_mean &&
                          std::abs(var - var_ref) < 3.0 * se_var;

  // chi-square GoF with 40 equiprobable bins (edges by bisection on the CDF)
  const int n_bins = 40;
  std::vector<double> edges(n_bins + 1);
  edges[0] = 0.0;
  edges[n_bins] = 1e300;
  for (int k = 1; k < n_bins; ++k) {
    const double q = static_cast<double>(k) / n_bins;
    double lo = 1e-8, hi = 1e6;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      (testsupport::inv_gamma_cdf(mid, a, b) < q ? lo : hi) = mid;
    }
    edges[k] = 0.5 * (lo + hi);
  }
  std::vector<long> obs(n_bins, 0);
  for (double x : draws) {
    const auto it = std::upper_bound(edges.begin() + 1, edges.end(), x);
    ++obs[std::min<std::size_t>(it - edges.begin() - 1, n_bins - 1)];
  }
  const double expect = static_cast<double>(n) / n_bins;
  double chi2 = 0.0;
  for (long o : obs) chi2 += (o - expect) * (o - expect) / expect;
  const double p = testsupport::chi2_sf(chi2, n_bins - 1);

  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "mean %.4f (ref %.4f, 3se %.4f), var %.4f (ref %.4f), GoF p %.3f", mean,
                mean_ref, 3.0 * se_mean, var, var_ref, p);
  detail = buf;
  return moments_ok && p > 0.01;
}

bool criterion_bridge_law(std::string& detail) {
  const double delta = 0.8;
  const int n = 100000;
  Rng rng(717);
  bool endpoints_ok = true;
  double acc_mid = 0.0, acc2_mid = 0.0, acc_prof = 0.0;
  for (int i = 0; i < n; ++i) {
    Path b = sample_bridge(0.25, -1.5, delta, 3, rng);  // grid step delta/4
    endpoints_ok = endpoints_ok && b.values.front() == 0.25 && b.values.back() == -1.5;
    acc_mid += b.values[2];
    acc2_mid += b.values[2] * b.values[2];
    acc_prof += b.values[1];
  }
  const double mid_mean = acc_mid / n;
  const double mid_var = acc2_mid / n - mid_mean * mid_mean;
  const double var_ref = delta / 4.0;  // t(1 - t/delta) at t = delta/2
  const double mid_mean_ref = 0.25 + 0.5 * (-1.5 - 0.25);
  const double prof_ref = 0.25 + 0.25 * (-1.5 - 0.25);  // t = delta/4
  const double prof_var = 0.25 * delta * (1.0 - 0.25);
  const bool var_ok = std::abs(mid_var - var_ref) < 3.0 * var_ref * std::sqrt(2.0 / n);
  const bool mean_ok =
      std::abs(mid_mean - mid_mean_ref) < 3.0 * std::sqrt(var_ref / n) &&
      std::abs(acc_prof / n - prof_ref) < 3.0 * std::sqrt(prof_var / n);
  char buf[200];
  std::snprintf(buf, sizeof(buf),
                "endpoints bitwise %s, midpoint var %.5f (ref %.5f), mean %.5f (ref %.5f)",
                endpoints_ok ? "yes" : "NO", mid_var, var_ref, mid_mean, mid_mean_ref);
  detail = buf;
  return endpoints_ok && var_ok && mean_ok;
}

bool criterion_girsanov_identity(std::string& detail) {
  double max_rel = 0.0;
  Rng rng(818);
  for (const auto& spec :
       {BasisSpec(BasisFamily::Fourier, 1.5, 8), BasisSpec(BasisFamily::Schauder, 1.5, 7)}) {
    for (int inst = 0; inst < 100; ++inst) {
      const int j = 1 + static_cast<int>(rng.uniform() * 5.0);
      Path p = euler_simulate(
          [&](double x) { return 2.0 * std::sin(2.0 * M_PI * x); }, rng.normal(), 1.0, 0.001,
          mix_seed(4000u + inst, 7));
      SuffStats stats = SuffStats::compute(spec, p, j);
      const int m = spec.model_dim(j);
      Eigen::VectorXd theta(m);
      for (int i = 0; i < m; ++i) theta[i] = rng.normal();
      const double ref = theta.dot(stats.mu()) - 0.5 * theta.dot(stats.sigma() * theta);
      const double got =
          log_girsanov([&](double x) { return eval_drift(spec, theta, x); }, p);
      const double rel = std::abs(got - ref) / std::max(1.0, std::abs(ref));
      max_rel = std::max(max_rel, rel);
    }
  }
  char buf[120];
  std::snprintf(buf, sizeof(buf), "max rel err %.2e", max_rel);
  detail = buf;
  return max_rel < 1e-10;
}

bool criterion_end_to_end(std::string& detail) {
  const auto t0 = Clock::now();
  const DriftFn truth = gallery("b1").fn;
  Path data = simulate_thinned(truth, 200.0, 1e-4, 10, 20260823u);  // delta = 1e-3

  const BasisSpec spec(BasisFamily::Fourier, 1.5, 25);
  const PriorConfig prior = PriorConfig::defaults_for(BasisFamily::Fourier);
  SamplerConfig cfg;
  cfg.iters = 5000;
  cfg.burn_in = 1000;
  cfg.seed = 7;
  auto records = run_continuous(data, spec, prior, cfg);

  const Eigen::VectorXd grid = uniform_grid(201);
  const PosteriorSummary summary = summarize(records, spec, grid, 0.10);
  const double err = rel_l2_error(grid, summary.mean, truth);

  // occupancy of x mod 1 in bins centered at the grid points
  std::vector<long> occupancy(grid.size(), 0);
  const double bin = 1.0 / static_cast<double>(grid.size() - 1);
  for (double x : data.values) {
    const double u = wrap_unit(x);
    const auto g = static_cast<std::size_t>(std::llround(u / bin)) % occupancy.size();
    ++occupancy[g];
  }
  std::vector<long> sorted = occupancy;
  std::nth_element(sorted.begin(), sorted.begin() + sorted.size() / 2, sorted.end());
  const long median_occ = sorted[sorted.size() / 2];
  long covered = 0, eligible = 0;
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    if (occupancy[g] <= median_occ) continue;
    ++eligible;
    const double tv = truth(grid[g]);
    if (summary.band_lo[g] <= tv && tv <= summary.band_hi[g]) ++covered;
  }
  const double coverage = static_cast<double>(covered) / static_cast<double>(eligible);
  const double secs = seconds_since(t0);
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "rel L2 err %.4f, band coverage %.1f%% over %ld high-occupancy points, %.0fs"
                " [known limitation: the left-point likelihood at delta=1e-3 biases the"
                " leading sine coefficient by about -(delta/4)*b'' ~ -0.22 (~2.8 posterior"
                " sd); with model-exact Euler data the same bands cover ~90%%]",
                err, 100.0 * coverage, eligible, secs);
  detail = buf;
  return err < 0.15 && coverage >= 0.80 && secs < 600.0;
}

bool criterion_scale_headline(std::string& detail) {
  const auto t0 = Clock::now();
  const DriftFn truth = gallery("main").fn;
  const BasisSpec spec(BasisFamily::Fourier, 1.5, 25);
  const PriorConfig prior = PriorConfig::defaults_for(BasisFamily::Fourier);
  const Eigen::VectorXd grid = uniform_grid(201);

  bool s_sq_ok = true;
  double first_adaptive_err = 0.0, s_lo = 1e300, s_hi = 0.0;
  Path first_data;
  for (int seed = 1; seed <= 5; ++seed) {
    Path data = simulate_thinned(truth, 200.0, 1e-4, 10, 9000u + seed);
    SamplerConfig cfg;
    cfg.iters = 3000;
    cfg.burn_in = 500;
    cfg.seed = 100u + seed;
    auto records = run_continuous(data, spec, prior, cfg);
    PosteriorSummary s = summarize(records, spec, grid, 0.10);
    s_lo = std::min(s_lo, s.s_sq_mean);
    s_hi = std::max(s_hi, s.s_sq_mean);
    s_sq_ok = s_sq_ok && s.s_sq_mean >= 0.5 && s.s_sq_mean <= 8.0;
    if (seed == 1) {
      first_adaptive_err = rel_l2_error(grid, s.mean, truth);
      first_data = data;
    }
  }

  SamplerConfig fixed_cfg;
  fixed_cfg.iters = 3000;
  fixed_cfg.burn_in = 500;
  fixed_cfg.seed = 101;
  fixed_cfg.fixed_scale = 0.25;
  auto fixed_records = run_continuous(first_data, spec, prior, fixed_cfg);
  PosteriorSummary fixed = summarize(fixed_records, spec, grid, 0.10);
  const double fixed_err = rel_l2_error(grid, fixed.mean, truth);

  const double secs = seconds_since(t0);
  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "s_sq means in [%.2f, %.2f] over 5 seeds; L2 err adaptive %.4f vs fixed "
                "s^2=0.25 %.4f, %.0fs",
                s_lo, s_hi, first_adaptive_err, fixed_err, secs);
  detail = buf;
  return s_sq_ok && fixed_err > first_adaptive_err;
}

bool criterion_augmentation_bias(std::string& detail) {
  const auto t0 = Clock::now();
  const DriftFn truth = gallery("b1").fn;
  const BasisSpec spec(BasisFamily::Fourier, 1.5, 10);
  const PriorConfig prior = PriorConfig::defaults_for(BasisFamily::Fourier);
  const Eigen::VectorXd grid = uniform_grid(201);

  bool all_ok = true;
  double min_ratio = 1e300;
  for (int seed = 1; seed <= 3; ++seed) {
    Path coarse = simulate_thinned(truth, 200.0, 1e-4, 500, 7000u + seed);  // delta = 0.05

    SamplerConfig plain;
    plain.iters = 3000;
    plain.burn_in = 500;
    plain.seed = 200u + seed;
    plain.n_interior = 0;
    auto rec_plain = run_discrete(coarse.values, coarse.dt, spec, prior, plain);
    const double err_plain =
        rel_l2_error(grid, summarize(rec_plain, spec, grid, 0.10).mean, truth);

    SamplerConfig aug;
    aug.iters = 2000;
    aug.burn_in = 500;
    aug.seed = 300u + seed;
    aug.n_interior = 49;
    auto rec_aug = run_discrete(coarse.values, coarse.dt, spec, prior, aug);
    const double err_aug =
        rel_l2_error(grid, summarize(rec_aug, spec, grid, 0.10).mean, truth);

    const double ratio = err_plain / err_aug;
    min_ratio = std::min(min_ratio, ratio);
    all_ok = all_ok && ratio >= 1.5;
  }
  const double secs = seconds_since(t0);
  char buf[160];
  std::snprintf(buf, sizeof(buf), "min error ratio %.2f over 3 seeds, %.0fs", min_ratio, secs);
  detail = buf;
  return all_ok && secs < 1200.0;
}

bool criterion_sparse_schauder(std::string& detail) {
  const BasisSpec spec(BasisFamily::Schauder, 1.5, 10);

  bool nnz_ok = true;
  for (int j = 1; j <= 9; ++j) {
    SigmaPattern pat(spec, spec.model_dim(j));
    nnz_ok = nnz_ok && pat.nnz() == schauder_upper_nnz(j);
  }

  double max_rel = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int j = 3 + inst % 6;  // 3..8
    SuffStats stats = random_stats(spec, j, 6000u + inst);
    const double s_sq = 0.4 + 0.2 * inst;
    Eigen::VectorXd dense = factorize(stats, spec, s_sq, j).mean();
    Eigen::VectorXd sparse = sparse_factorize_schauder(stats, spec, s_sq, j).mean();
    max_rel = std::max(max_rel, (dense - sparse).norm() / std::max(1.0, dense.norm()));
  }

  // soft timing comparison at j = 8 (m = 128), logged but not asserted
  SuffStats stats = random_stats(spec, 8, 6100u);
  const int reps = 200;
  auto td = Clock::now();
  double sink = 0.0;
  for (int r = 0; r < reps; ++r) sink += factorize(stats, spec, 1.0, 8).sum_log_diag();
  const double dense_t = seconds_since(td);
  auto ts = Clock::now();
  for (int r = 0; r < reps; ++r)
    sink += sparse_factorize_schauder(stats, spec, 1.0, 8).sum_log_diag();
  const double sparse_t = seconds_since(ts);
  (void)sink;

  char buf[220];
  std::snprintf(buf, sizeof(buf),
                "nnz formula %s, max posterior-mean rel diff %.2e; timing j=8 x%d: sparse "
                "%.3fs vs dense %.3fs (soft)",
                nnz_ok ? "ok" : "WRONG", max_rel, reps, sparse_t, dense_t);
  detail = buf;
  return nnz_ok && max_rel < 1e-10;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<bool(std::string&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {"Bayes-factor oracle equivalence", criterion_bayes_factor_oracle},
      {"nested Cholesky leading blocks", criterion_nested_cholesky},
      {"exact model-posterior recovery", criterion_exact_model_posterior},
      {"Gibbs scale conditional", criterion_gibbs_scale},
      {"bridge sampler law", criterion_bridge_law},
      {"Girsanov / sufficient-statistics identity", criterion_girsanov_identity},
      {"end-to-end estimation quality", criterion_end_to_end},
      {"adaptive scale headline", criterion_scale_headline},
      {"data-augmentation bias reduction", criterion_augmentation_bias},
      {"sparse Schauder factorization", criterion_sparse_schauder},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].fn(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    std::printf("%s  %2zu  %-44s %s\n", ok ? "PASS" : "FAIL", i + 1, criteria[i].name,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (failures > 0) std::printf("%d of %zu acceptance criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
