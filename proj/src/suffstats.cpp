#include "npdrift/suffstats.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace npdrift {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;
constexpr std::size_t kChunk = 8192;  // two-level summation block size

double hat(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
}

// Basis values at x for l = 1..m, as (index, value) pairs ordered so that the
// entry at position a is the row at position a in the pattern row list of any
// later active column. Fourier: all indices. Schauder: the support chain
// (constant, then the containing hat of each level).
void active_eval(const BasisSpec& spec, int m, double x,
                 std::vector<std::pair<int, double>>& out) {
  out.clear();
  const double u = wrap_unit(x);
  if (spec.family == BasisFamily::Fourier) {
    out.emplace_back(1, 1.0);
    // harmonics by the angle-addition recurrence: one sincos per point
    const double s1 = std::sin(2.0 * kPi * u), c1 = std::cos(2.0 * kPi * u);
    double sk = 0.0, ck = 1.0;
    for (int k = 1; 2 * k <= m; ++k) {
      const double s = sk * c1 + ck * s1;
      const double c = ck * c1 - sk * s1;
      sk = s;
      ck = c;
      out.emplace_back(2 * k, kSqrt2 * sk);
      if (2 * k + 1 <= m) out.emplace_back(2 * k + 1, kSqrt2 * ck);
    }
    return;
  }
  out.emplace_back(1, 1.0);
  for (int level = 1; (1 << (level - 1)) + 1 <= m; ++level) {
    const int scale = 1 << (level - 1);
    const int k = static_cast<int>(scale * u) + 1;
    const int l = scale + k;
    if (l > m) break;  // levels are complete, so this only guards u ~ 1 edge
    out.emplace_back(l, hat(scale * u - (k - 1)));
  }
}

}  // namespace

SigmaPattern::SigmaPattern(const BasisSpec& spec, int m) : m_(m) {
  rows_.resize(m);
  col_offset_.resize(m);
  int off = 0;
  for (int col = 1; col <= m; ++col) {
    auto& rows = rows_[col - 1];
    if (spec.family == BasisFamily::Fourier || col == 1) {
      rows.resize(col);
      for (int r = 1; r <= col; ++r) rows[r - 1] = r;
    } else {
      auto [level, k] = schauder_index(col);
      rows.push_back(1);
      for (int t = 1; t < level; ++t) {
        const int kk = (k - 1) / (1 << (level - t)) + 1;
        rows.push_back((1 << (t - 1)) + kk);
      }
      rows.push_back(col);
    }
    col_offset_[col - 1] = off;
    for (int r : rows) {
      row_of_.push_back(r);
      col_of_.push_back(col);
    }
    off += static_cast<int>(rows.size());
  }
  nnz_ = off;
}

long schauder_upper_nnz(int j) {
  if (j < 1) throw std::invalid_argument("level must be >= 1");
  return (1L << (j - 1)) * (j - 1) + 1;
}

void SuffStats::init(const BasisSpec& spec, int j, double dt) {
  if (j < 1 || j > spec.j_max) throw std::invalid_argument("level out of range");
  spec_ = spec;
  j_ = j;
  m_ = spec.model_dim(j);
  dt_ = dt;
  pattern_ = SigmaPattern(spec, m_);
  mu_ = Eigen::VectorXd::Zero(m_);
  sigma_packed_ = Eigen::VectorXd::Zero(pattern_.nnz());
  sigma_ = Eigen::MatrixXd::Zero(m_, m_);
  segments_.clear();
  seg_increments_ = 0;
  replacements_since_sync_ = 0;
}

SuffStats::SegContrib SuffStats::segment_contrib(const double* vals, std::size_t n_incr) const {
  SegContrib c;
  c.x_first = vals[0];
  c.x_last = vals[n_incr];
  std::vector<std::pair<int, double>> chain;
  chain.reserve(m_);
  // scatter accumulation with touched lists; indices are compressed at the end
  static thread_local std::vector<double> mu_acc, sig_acc;
  static thread_local std::vector<int> mu_touched, sig_touched;
  mu_acc.assign(m_, 0.0);
  sig_acc.assign(pattern_.nnz(), 0.0);
  mu_touched.clear();
  sig_touched.clear();
  for (std::size_t i = 0; i < n_incr; ++i) {
    const double dx = vals[i + 1] - vals[i];
    active_eval(spec_, m_, vals[i], chain);
    const int A = static_cast<int>(chain.size());
    for (int a = 0; a < A; ++a) {
      const auto [l, v] = chain[a];
      if (mu_acc[l - 1] == 0.0) mu_touched.push_back(l - 1);
      mu_acc[l - 1] += v * dx;
    }
    for (int b = 0; b < A; ++b) {
      const auto [col, vb] = chain[b];
      const int base = pattern_.col_offset(col);
      for (int a = 0; a <= b; ++a) {
        const int p = base + a;
        if (sig_acc[p] == 0.0) sig_touched.push_back(p);
        sig_acc[p] += chain[a].second * vb * dt_;
      }
    }
  }
  for (int i : mu_touched)
    if (mu_acc[i] != 0.0) c.mu.emplace_back(i + 1, mu_acc[i]);
  for (int p : sig_touched)
    if (sig_acc[p] != 0.0) c.sig.emplace_back(p, sig_acc[p]);
  return c;
}

void SuffStats::apply_contrib(const SegContrib& c, double sign) {
  for (const auto& [l, v] : c.mu) mu_[l - 1] += sign * v;
  for (const auto& [p, v] : c.sig) sigma_packed_[p] += sign * v;
}

void SuffStats::scatter_packed_to_dense() {
  sigma_.setZero();
  for (int col = 1; col <= m_; ++col) {
    const auto& rows = pattern_.col_rows(col);
    const int base = pattern_.col_offset(col);
    for (std::size_t a = 0; a < rows.size(); ++a) {
      const double v = sigma_packed_[base + static_cast<int>(a)];
      sigma_(rows[a] - 1, col - 1) = v;
      sigma_(col - 1, rows[a] - 1) = v;
    }
  }
}

SuffStats SuffStats::compute(const BasisSpec& spec, const Path& path, int j) {
  path.validate();
  SuffStats s;
  s.init(spec, j, path.dt);
  const std::size_t n_incr = path.values.size() - 1;
  std::vector<std::pair<int, double>> chain;
  chain.reserve(s.m_);
  Eigen::VectorXd mu_loc = Eigen::VectorXd::Zero(s.m_);
  Eigen::VectorXd sig_loc = Eigen::VectorXd::Zero(s.pattern_.nnz());
  for (std::size_t start = 0; start < n_incr; start += kChunk) {
    const std::size_t stop = std::min(start + kChunk, n_incr);
    mu_loc.setZero();
    sig_loc.setZero();
    for (std::size_t i = start; i < stop; ++i) {
      const double dx = path.values[i + 1] - path.values[i];
      active_eval(spec, s.m_, path.values[i], chain);
      const int A = static_cast<int>(chain.size());
      for (int a = 0; a < A; ++a) mu_loc[chain[a].first - 1] += chain[a].second * dx;
      for (int b = 0; b < A; ++b) {
        const auto [col, vb] = chain[b];
        const int base = s.pattern_.col_offset(col);
        for (int a = 0; a <= b; ++a) sig_loc[base + a] += chain[a].second * vb * s.dt_;
      }
    }
    s.mu_ += mu_loc;
    s.sigma_packed_ += sig_loc;
  }
  s.scatter_packed_to_dense();
  return s;
}

SuffStats SuffStats::compute_segmented(const BasisSpec& spec, const Path& path, int j,
                                       std::size_t seg_increments) {
  path.validate();
  if (seg_increments == 0) throw std::invalid_argument("seg_increments must be >= 1");
  const std::size_t n_incr = path.values.size() - 1;
  if (n_incr % seg_increments != 0)
    throw std::invalid_argument("path length incompatible with segment size");
  SuffStats s;
  s.init(spec, j, path.dt);
  s.seg_increments_ = seg_increments;
  const std::size_t n_seg = n_incr / seg_increments;
  s.segments_.reserve(n_seg);
  for (std::size_t k = 0; k < n_seg; ++k) {
    SegContrib c = s.segment_contrib(path.values.data() + k * seg_increments, seg_increments);
    s.apply_contrib(c, 1.0);
    s.segments_.push_back(std::move(c));
  }
  s.scatter_packed_to_dense();
  return s;
}

StatsView SuffStats::view(int j) const {
  if (j < 1 || j > j_) throw std::invalid_argument("view level out of range");
  const int m = spec_.model_dim(j);
  return {mu_.head(m), sigma_.topLeftCorner(m, m)};
}

void SuffStats::replace_segment(std::size_t k, const Path& new_segment) {
  if (segments_.empty()) throw std::logic_error("segment cache not active");
  if (k >= segments_.size()) throw std::invalid_argument("segment index out of range");
  new_segment.validate();
  if (new_segment.values.size() != seg_increments_ + 1)
    throw std::invalid_argument("segment has wrong number of points");
  if (std::abs(new_segment.dt - dt_) > 1e-12 * dt_)
    throw std::invalid_argument("segment dt mismatch");
  const SegContrib& old = segments_[k];
  if (new_segment.values.front() != old.x_first || new_segment.values.back() != old.x_last)
    throw std::invalid_argument("segment endpoints do not match pinned observations");
  SegContrib fresh = segment_contrib(new_segment.values.data(), seg_increments_);
  if (fresh.mu == old.mu && fresh.sig == old.sig) return;  // unchanged segment
  apply_contrib(old, -1.0);
  apply_contrib(fresh, 1.0);
  // resync the dense mirror on the touched entries only
  auto mirror = [&](const SegContrib& c) {
    for (const auto& [p, v] : c.sig) {
      (void)v;
      const int r = pattern_.row_of(p) - 1, cc = pattern_.col_of(p) - 1;
      sigma_(r, cc) = sigma_packed_[p];
      sigma_(cc, r) = sigma_packed_[p];
    }
  };
  mirror(old);
  mirror(fresh);
  segments_[k] = std::move(fresh);
  ++replacements_since_sync_;
}

void SuffStats::resync(const Path& full_path) {
  *this = compute_segmented(spec_, full_path, j_, seg_increments_);
}

}  // namespace npdrift
