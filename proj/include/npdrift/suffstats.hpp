#ifndef NPDRIFT_SUFFSTATS_HPP
#define NPDRIFT_SUFFSTATS_HPP

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "npdrift/basis.hpp"
#include "npdrift/diffusion.hpp"

namespace npdrift {

// Structural sparsity pattern of the upper triangle of Sigma (1-based indices,
// row <= col). Fourier has no structural zeros; for Schauder the rows of
// column l are exactly the support ancestors of psi_l plus the constant and
// the diagonal, which is what makes fine-to-coarse elimination fill-free.
class SigmaPattern {
 public:
  SigmaPattern() = default;
  SigmaPattern(const BasisSpec& spec, int m);

  int dim() const { return m_; }
  int nnz() const { return nnz_; }
  // rows of column col (1-based, ascending, ending with col itself)
  const std::vector<int>& col_rows(int col) const { return rows_[col - 1]; }
  // packed position of the p-th row entry of column col
  int packed_index(int col, int p) const { return col_offset_[col - 1] + p; }
  int col_offset(int col) const { return col_offset_[col - 1]; }
  // (row, col) of a packed position, 1-based
  int row_of(int p) const { return row_of_[p]; }
  int col_of(int p) const { return col_of_[p]; }

 private:
  int m_ = 0;
  int nnz_ = 0;
  std::vector<std::vector<int>> rows_;
  std::vector<int> col_offset_;
  std::vector<int> row_of_, col_of_;
};

// Number of structurally nonzero entries in the upper triangle of the
// Schauder Sigma at model level j (2^{j-1}(j-1) + 1).
long schauder_upper_nnz(int j);

struct StatsView {
  Eigen::Ref<const Eigen::VectorXd> mu;
  Eigen::Ref<const Eigen::MatrixXd, 0, Eigen::OuterStride<>> sigma;
};

// Sufficient statistics of a path at the maximal level:
//   mu_l       = sum_i psi_l(x_i) (x_{i+1}-x_i)
//   Sigma_ll'  = sum_i psi_l(x_i) psi_l'(x_i) dt
// computed once and exposed through nested sub-model views. In segmented mode
// (data augmentation) per-segment contributions are cached so a bridge update
// costs O(points-per-segment), independent of the number of segments.
class SuffStats {
 public:
  SuffStats() = default;

  static SuffStats compute(const BasisSpec& spec, const Path& path, int j);
  // path must consist of n_segments segments of seg_increments increments
  // each, sharing endpoints: path.size() == n_segments*seg_increments + 1.
  static SuffStats compute_segmented(const BasisSpec& spec, const Path& path, int j,
                                     std::size_t seg_increments);

  int level() const { return j_; }
  int dim() const { return m_; }
  double dt() const { return dt_; }
  const Eigen::VectorXd& mu() const { return mu_; }
  const Eigen::MatrixXd& sigma() const { return sigma_; }
  const SigmaPattern& pattern() const { return pattern_; }

  // Leading m_j sub-vector / principal submatrix, no copy.
  StatsView view(int j) const;

  std::size_t n_segments() const { return segments_.size(); }
  std::size_t seg_increments() const { return seg_increments_; }

  // Swap segment k's cached contribution for the one of new_segment, whose
  // endpoints must match the pinned observations of segment k.
  void replace_segment(std::size_t k, const Path& new_segment);

  // Full recompute from the concatenated latent path; resynchronizes the
  // float error accumulated by repeated replace_segment calls.
  void resync(const Path& full_path);
  long replacements_since_sync() const { return replacements_since_sync_; }

 private:
  struct SegContrib {
    std::vector<std::pair<int, double>> mu;   // (1-based index, value)
    std::vector<std::pair<int, double>> sig;  // (packed index, value)
    double x_first = 0.0, x_last = 0.0;
  };

  void init(const BasisSpec& spec, int j, double dt);
  SegContrib segment_contrib(const double* vals, std::size_t n_incr) const;
  void apply_contrib(const SegContrib& c, double sign);
  void scatter_packed_to_dense();

  BasisSpec spec_;
  int j_ = 0, m_ = 0;
  double dt_ = 0.0;
  SigmaPattern pattern_;
  Eigen::VectorXd mu_;
  Eigen::VectorXd sigma_packed_;
  Eigen::MatrixXd sigma_;  // dense mirror of the packed upper triangle
  std::vector<SegContrib> segments_;
  std::size_t seg_increments_ = 0;
  long replacements_since_sync_ = 0;
};

}  // namespace npdrift

#endif
