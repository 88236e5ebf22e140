#include "npdrift/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <stdexcept>
#include <string>

namespace npdrift {

namespace {

Eigen::MatrixXd build_w(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                        const BasisSpec& spec, double s_sq, int m) {
  if (!(s_sq > 0.0)) throw std::invalid_argument("s_sq must be positive");
  if (mu.size() < m || sigma.rows() < m || sigma.cols() < m)
    throw std::invalid_argument("statistics smaller than requested model");
  Eigen::MatrixXd w = sigma.topLeftCorner(m, m);
  for (int l = 1; l <= m; ++l) w(l - 1, l - 1) += 1.0 / (s_sq * xi_sq(spec, l));
  return w;
}

}  // namespace

Eigen::VectorXd PosteriorFactor::mean() const {
  if (kind == FactorKind::UpperMtM)
    return chol.triangularView<Eigen::Upper>().solve(z);
  return chol.transpose().triangularView<Eigen::Lower>().solve(z);
}

Eigen::VectorXd PosteriorFactor::sample(Rng& rng) const {
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) rhs[i] = z[i] + rng.normal();
  if (kind == FactorKind::UpperMtM)
    return chol.triangularView<Eigen::Upper>().solve(rhs);
  return chol.transpose().triangularView<Eigen::Lower>().solve(rhs);
}

double PosteriorFactor::sum_log_diag() const {
  double acc = 0.0;
  for (int i = 0; i < m; ++i) acc += std::log(chol(i, i));
  return acc;
}

PosteriorFactor PosteriorFactor::leading(const BasisSpec& spec, int j_small) const {
  if (kind != FactorKind::UpperMtM)
    throw std::logic_error("leading-block extraction requires the M^T M factor");
  if (j_small > j) throw std::invalid_argument("leading() requires j_small <= j");
  const int ms = spec.model_dim(j_small);
  PosteriorFactor out;
  out.j = j_small;
  out.m = ms;
  out.kind = kind;
  out.chol = chol.topLeftCorner(ms, ms);
  out.z = z.head(ms);
  return out;
}

PosteriorFactor factorize(const Eigen::VectorXd& mu, const Eigen::MatrixXd& sigma,
                          const BasisSpec& spec, double s_sq, int j) {
  const int m = spec.model_dim(j);
  Eigen::MatrixXd w = build_w(mu, sigma, spec, s_sq, m);
  Eigen::LLT<Eigen::MatrixXd> llt(w);
  if (llt.info() != Eigen::Success)
    throw std::runtime_error("Cholesky factorization failed (matrix not SPD)");
  PosteriorFactor f;
  f.j = j;
  f.m = m;
  f.kind = FactorKind::UpperMtM;
  f.chol = llt.matrixU();
  f.z = f.chol.transpose().triangularView<Eigen::Lower>().solve(mu.head(m));
  return f;
}

PosteriorFactor factorize(const SuffStats& stats, const BasisSpec& spec, double s_sq, int j) {
  return factorize(stats.mu(), stats.sigma(), spec, s_sq, j);
}

PosteriorFactor sparse_factorize_schauder(const Eigen::VectorXd& mu,
                                          const Eigen::MatrixXd& sigma, const BasisSpec& spec,
                                          double s_sq, int j) {
  if (spec.family != BasisFamily::Schauder)
    throw std::invalid_argument("sparse factorization is Schauder-only");
  const int m = spec.model_dim(j);
  const SigmaPattern pattern(spec, m);
  // upper-triangular working copy of W on the pattern
  Eigen::MatrixXd u = Eigen::MatrixXd::Zero(m, m);
  for (int col = 1; col <= m; ++col)
    for (int r : pattern.col_rows(col)) u(r - 1, col - 1) = sigma(r - 1, col - 1);
  for (int l = 1; l <= m; ++l) {
    if (!(s_sq > 0.0)) throw std::invalid_argument("s_sq must be positive");
    u(l - 1, l - 1) += 1.0 / (s_sq * xi_sq(spec, l));
  }

  // Eliminate fine to coarse. Column o of K has entries at the pattern rows of
  // column o of Sigma; the Schur update touches ancestor pairs only, which are
  // themselves pattern entries (support chains), so no fill occurs.
  PosteriorFactor f;
  f.j = j;
  f.m = m;
  f.kind = FactorKind::UpperKKt;
  f.chol = Eigen::MatrixXd::Zero(m, m);
  for (int o = m; o >= 1; --o) {
    const auto& rows = pattern.col_rows(o);  // ascending, last entry == o
    const double pivot = u(o - 1, o - 1);
    if (!(pivot > 0.0))
      throw std::runtime_error("nonpositive pivot at index " + std::to_string(o));
    const double d = std::sqrt(pivot);
    f.chol(o - 1, o - 1) = d;
    const int n_anc = static_cast<int>(rows.size()) - 1;
    for (int a = 0; a < n_anc; ++a) f.chol(rows[a] - 1, o - 1) = u(rows[a] - 1, o - 1) / d;
    for (int b = 0; b < n_anc; ++b) {
      const int rb = rows[b];
      const double eb = f.chol(rb - 1, o - 1);
      for (int a = 0; a <= b; ++a) {
        const int ra = rows[a];
        // ancestors of o form a chain, so (ra, rb) is a pattern entry; verify
        const auto& rb_rows = pattern.col_rows(rb);
        if (!std::binary_search(rb_rows.begin(), rb_rows.end(), ra)) {
          std::cerr << "npdrift: unexpected fill at (" << ra << "," << rb
                    << "); falling back to dense factorization\n";
          return factorize(mu, sigma, spec, s_sq, j);
        }
        u(ra - 1, rb - 1) -= f.chol(ra - 1, o - 1) * eb;
      }
    }
  }
  f.z = f.chol.triangularView<Eigen::Upper>().solve(mu.head(m));
  return f;
}

PosteriorFactor sparse_factorize_schauder(const SuffStats& stats, const BasisSpec& spec,
                                          double s_sq, int j) {
  return sparse_factorize_schauder(stats.mu(), stats.sigma(), spec, s_sq, j);
}

Eigen::VectorXd posterior_mean(const PosteriorFactor& factor) { return factor.mean(); }

Eigen::VectorXd sample_coefficients(const PosteriorFactor& factor, Rng& rng) {
  return factor.sample(rng);
}

Eigen::VectorXd sample_coefficients(const PosteriorFactor& factor, uint64_t seed) {
  Rng rng(seed);
  return factor.sample(rng);
}

double log_predictive(const PosteriorFactor& factor, const BasisSpec& spec, double s_sq) {
  double acc = 0.5 * factor.z.squaredNorm();
  const double log_s = 0.5 * std::log(s_sq);
  for (int l = 1; l <= factor.m; ++l)
    acc -= log_s + 0.5 * std::log(xi_sq(spec, l)) + std::log(factor.chol(l - 1, l - 1));
  return acc;
}

double log_bayes_factor(const SuffStats& stats, const BasisSpec& spec, double s_sq,
                        int j_from, int j_to) {
  if (j_from < 1 || j_from > spec.j_max || j_to < 1 || j_to > spec.j_max)
    throw std::invalid_argument("model index out of range");
  if (j_from == j_to) return 0.0;
  const int j_lo = std::min(j_from, j_to);
  const int j_hi = std::max(j_from, j_to);
  const PosteriorFactor f = factorize(stats, spec, s_sq, j_hi);
  const int m_lo = spec.model_dim(j_lo);
  const int m_hi = f.m;
  double val = 0.5 * f.z.tail(m_hi - m_lo).squaredNorm();
  const double log_s = 0.5 * std::log(s_sq);
  for (int i = m_lo + 1; i <= m_hi; ++i)
    val -= log_s + 0.5 * std::log(xi_sq(spec, i)) + std::log(f.chol(i - 1, i - 1));
  return j_to > j_from ? val : -val;
}

}  // namespace npdrift
