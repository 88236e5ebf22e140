#include "npdrift/sampler.hpp"

#include <cmath>
#include <stdexcept>

namespace npdrift {

namespace {

PosteriorFactor make_factor(const SuffStats& stats, const BasisSpec& spec, double s_sq, int j,
                            bool sparse_schauder) {
  if (sparse_schauder && spec.family == BasisFamily::Schauder)
    return sparse_factorize_schauder(stats, spec, s_sq, j);
  return factorize(stats, spec, s_sq, j);
}

// log B(j_hi | j_lo) from the factor at j_hi (M^T M convention).
double incremental_log_bf(const PosteriorFactor& f, const BasisSpec& spec, double s_sq,
                          int m_lo) {
  double val = 0.5 * f.z.tail(f.m - m_lo).squaredNorm();
  const double log_s = 0.5 * std::log(s_sq);
  for (int i = m_lo + 1; i <= f.m; ++i)
    val -= log_s + 0.5 * std::log(xi_sq(spec, i)) + std::log(f.chol(i - 1, i - 1));
  return val;
}

Eigen::VectorXd prior_theta_draw(const BasisSpec& spec, int j, double s_sq, Rng& rng) {
  const int m = spec.model_dim(j);
  Eigen::VectorXd theta(m);
  for (int l = 1; l <= m; ++l)
    theta[l - 1] = std::sqrt(s_sq * xi_sq(spec, l)) * rng.normal();
  return theta;
}

}  // namespace

void PriorConfig::validate() const {
  if (!(ig_shape > 0.0) || !(ig_rate > 0.0))
    throw std::invalid_argument("inverse-gamma hyperparameters must be positive");
  if (model_decay < 0.0) throw std::invalid_argument("model_decay must be >= 0");
  if (q_stay < 0.0 || q_up < 0.0 || q_down < 0.0 ||
      std::abs(q_stay + q_up + q_down - 1.0) > 1e-12)
    throw std::invalid_argument("model-proposal probabilities must sum to 1");
}

PriorConfig PriorConfig::defaults_for(BasisFamily family) {
  PriorConfig p;
  if (family == BasisFamily::Schauder) {
    p.q_stay = 0.9;
    p.q_up = 0.05;
    p.q_down = 0.05;
  }
  return p;
}

void SamplerConfig::validate() const {
  if (iters <= 0 || burn_in < 0 || burn_in >= iters + 1)
    throw std::invalid_argument("require iters > 0 and 0 <= burn_in <= iters");
  if (fixed_level && *fixed_level < 1) throw std::invalid_argument("fixed_level must be >= 1");
  if (fixed_scale && !(*fixed_scale > 0.0))
    throw std::invalid_argument("fixed_scale must be positive");
  if (resync_every < 1) throw std::invalid_argument("resync_every must be >= 1");
}

void move_scale(ChainState& state, const PriorConfig& prior, const BasisSpec& spec, Rng& rng) {
  const int m = static_cast<int>(state.theta.size());
  double quad = 0.0;
  for (int l = 1; l <= m; ++l)
    quad += state.theta[l - 1] * state.theta[l - 1] / xi_sq(spec, l);
  state.s_sq = rng.inverse_gamma(prior.ig_shape + 0.5 * m, prior.ig_rate + 0.5 * quad);
}

ModelMoveResult move_model(ChainState& state, const PriorConfig& prior, const BasisSpec& spec,
                           bool sparse_schauder, Rng& rng) {
  const int j = state.j;
  const double u = rng.uniform();
  int jp = j;
  if (u < prior.q_up)
    jp = j + 1;
  else if (u < prior.q_up + prior.q_down)
    jp = j - 1;

  ModelMoveResult res;
  res.proposed_j = jp;

  if (jp < 1 || jp > spec.j_max) {
    // target has no mass outside [1, j_max]: reject, keep the factor at j for
    // the Rao-Blackwell record
    res.accepted = false;
    res.factor = make_factor(state.stats, spec, state.s_sq, j, sparse_schauder);
    return res;
  }

  const bool sparse = sparse_schauder && spec.family == BasisFamily::Schauder;
  double log_b = 0.0;
  PosteriorFactor f_cur, f_prop;
  if (sparse) {
    f_cur = make_factor(state.stats, spec, state.s_sq, j, true);
    if (jp != j) {
      f_prop = make_factor(state.stats, spec, state.s_sq, jp, true);
      log_b = log_predictive(f_prop, spec, state.s_sq) -
              log_predictive(f_cur, spec, state.s_sq);
    } else {
      f_prop = f_cur;
    }
  } else {
    const int j_hi = std::max(j, jp);
    f_cur = factorize(state.stats, spec, state.s_sq, j_hi);
    if (jp != j) {
      const int m_lo = spec.model_dim(std::min(j, jp));
      const double inc = incremental_log_bf(f_cur, spec, state.s_sq, m_lo);
      log_b = jp > j ? inc : -inc;
    }
  }

  double log_r = log_b;
  if (jp != j) {
    log_r += -prior.model_decay * (spec.model_dim(jp) - spec.model_dim(j));
    const double q_fwd = jp > j ? prior.q_up : prior.q_down;
    const double q_bwd = jp > j ? prior.q_down : prior.q_up;
    log_r += std::log(q_bwd) - std::log(q_fwd);
  }

  const double u_acc = rng.uniform();
  const bool accept = log_r >= 0.0 || std::log(u_acc) < log_r;
  res.accepted = accept;
  if (accept) {
    PosteriorFactor f_new;
    if (sparse) {
      f_new = std::move(f_prop);
    } else if (jp == f_cur.j) {
      f_new = std::move(f_cur);
    } else {
      f_new = f_cur.leading(spec, jp);
    }
    state.theta = f_new.sample(rng);
    state.j = jp;
    res.factor = std::move(f_new);
  } else {
    // factor at the (unchanged) current model for the RB record
    if (sparse)
      res.factor = std::move(f_cur);
    else
      res.factor = (f_cur.j == j) ? std::move(f_cur) : f_cur.leading(spec, j);
  }
  return res;
}

double move_bridges(ChainState& state, const BasisSpec& spec, uint64_t master_seed,
                    uint64_t iter, long resync_every) {
  SuffStats& stats = state.stats;
  if (stats.n_segments() == 0) throw std::logic_error("move_bridges requires segmented stats");
  const std::size_t step = stats.seg_increments();
  const std::size_t n_seg = stats.n_segments();
  const double dt = state.latent.dt;
  const double t_len = static_cast<double>(step) * dt;
  const DriftFn b = [&](double x) { return eval_drift(spec, state.theta, x); };

  std::size_t accepted = 0;
  Path cur_seg;
  cur_seg.dt = dt;
  for (std::size_t k = 0; k < n_seg; ++k) {
    Rng sub = Rng(mix_seed(master_seed, 0x6272696467653372ULL, iter, k));
    const std::size_t base = k * step;
    const double xa = state.latent.values[base];
    const double xb = state.latent.values[base + step];
    Path prop = sample_bridge(xa, xb, t_len, step - 1, sub);
    cur_seg.t0 = state.latent.time_at(base);
    cur_seg.values.assign(state.latent.values.begin() + base,
                          state.latent.values.begin() + base + step + 1);
    const double log_r = log_girsanov(b, prop) - log_girsanov(b, cur_seg);
    const double u = sub.uniform();
    if (log_r >= 0.0 || std::log(u) < log_r) {
      stats.replace_segment(k, prop);
      std::copy(prop.values.begin() + 1, prop.values.end() - 1,
                state.latent.values.begin() + base + 1);
      ++accepted;
    }
  }
  // cadence counts full sweeps, not individual replacements
  if (stats.replacements_since_sync() >= resync_every * static_cast<long>(n_seg))
    stats.resync(state.latent);
  return static_cast<double>(accepted) / static_cast<double>(n_seg);
}

namespace {

std::vector<ChainRecord> run_chain(ChainState state, const BasisSpec& spec,
                                   const PriorConfig& prior, const SamplerConfig& cfg,
                                   bool discrete) {
  Rng rng(cfg.seed);
  if (cfg.fixed_level) {
    state.j = *cfg.fixed_level;
    if (*cfg.fixed_level > spec.j_max)
      throw std::invalid_argument("fixed_level exceeds j_max");
  }
  if (cfg.fixed_scale) state.s_sq = *cfg.fixed_scale;
  state.theta = prior_theta_draw(spec, state.j, state.s_sq, rng);

  std::vector<ChainRecord> records;
  records.reserve(cfg.iters - cfg.burn_in);
  for (int it = 0; it < cfg.iters; ++it) {
    if (!cfg.fixed_scale) move_scale(state, prior, spec, rng);

    ChainRecord rec;
    rec.j_prev = state.j;
    if (cfg.fixed_level) {
      PosteriorFactor f =
          make_factor(state.stats, spec, state.s_sq, state.j, cfg.sparse_schauder);
      state.theta = f.sample(rng);
      rec.proposed_j = state.j;
      rec.accepted_model = true;
      rec.post_mean = f.mean();
    } else {
      ModelMoveResult res = move_model(state, prior, spec, cfg.sparse_schauder, rng);
      rec.proposed_j = res.proposed_j;
      rec.accepted_model = res.accepted;
      const PosteriorFactor& f = res.factor;
      rec.post_mean = (f.kind == FactorKind::UpperMtM && f.j > state.j)
                          ? f.leading(spec, state.j).mean()
                          : f.mean();
    }
    if (discrete)
      rec.bridge_accept = move_bridges(state, spec, cfg.seed, static_cast<uint64_t>(it),
                                       cfg.resync_every);
    if (it >= cfg.burn_in) {
      rec.j = state.j;
      rec.s_sq = state.s_sq;
      rec.theta = state.theta;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

}  // namespace

std::vector<ChainRecord> run_continuous(const Path& path, const BasisSpec& spec,
                                        const PriorConfig& prior, const SamplerConfig& cfg) {
  prior.validate();
  cfg.validate();
  ChainState state;
  state.stats = SuffStats::compute(spec, path, spec.j_max);
  return run_chain(std::move(state), spec, prior, cfg, /*discrete=*/false);
}

std::vector<ChainRecord> run_discrete(const std::vector<double>& obs, double delta,
                                      const BasisSpec& spec, const PriorConfig& prior,
                                      const SamplerConfig& cfg) {
  prior.validate();
  cfg.validate();
  if (obs.size() < 2) throw std::invalid_argument("need at least 2 observations");
  if (!(delta > 0.0)) throw std::invalid_argument("delta must be positive");

  const std::size_t step = cfg.n_interior + 1;
  const std::size_t n_seg = obs.size() - 1;
  ChainState state;
  state.latent.t0 = 0.0;
  state.latent.dt = delta / static_cast<double>(step);
  state.latent.values.resize(n_seg * step + 1);
  for (std::size_t k = 0; k < n_seg; ++k) {
    for (std::size_t i = 0; i < step; ++i) {
      const double frac = static_cast<double>(i) / static_cast<double>(step);
      state.latent.values[k * step + i] = (1.0 - frac) * obs[k] + frac * obs[k + 1];
    }
    state.latent.values[k * step] = obs[k];  // keep observations bitwise
  }
  state.latent.values.back() = obs.back();
  state.stats = SuffStats::compute_segmented(spec, state.latent, spec.j_max, step);
  return run_chain(std::move(state), spec, prior, cfg, /*discrete=*/true);
}

}  // namespace npdrift
