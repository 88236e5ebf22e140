#ifndef NPDRIFT_BASIS_HPP
#define NPDRIFT_BASIS_HPP

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace npdrift {

enum class BasisFamily { Fourier, Schauder };

std::string to_string(BasisFamily f);
BasisFamily basis_family_from_string(const std::string& s);

// Hierarchical periodic basis: family, prior regularity beta and a hard cap
// j_max on the model index. Level j contains the first m_j basis functions.
struct BasisSpec {
  BasisFamily family = BasisFamily::Fourier;
  double beta = 1.5;
  int j_max = 25;

  BasisSpec() = default;
  BasisSpec(BasisFamily fam, double beta_, int j_max_);

  // m_j: Fourier 2j-1, Schauder 2^{j-1}.
  int model_dim(int j) const;
  int max_dim() const { return model_dim(j_max); }
};

// psi_l(x mod 1), l >= 1. Fourier: 1, sqrt2 sin(2k pi x), sqrt2 cos(2k pi x).
// Schauder: 1 and translated/dilated hat functions.
double eval_basis(const BasisSpec& spec, int l, double x);

// Prior coefficient variance xi_l^2. Fourier: l^{-1-2 beta}.
// Schauder: 1 for l=1, 2^{-2 beta j} within level j.
double xi_sq(const BasisSpec& spec, int l);

// sum_l theta_l psi_l(x mod 1). Uses the level structure for Schauder so only
// the O(log m) active functions are touched.
double eval_drift(const BasisSpec& spec, const Eigen::VectorXd& theta, double x);

// Support of psi_l within [0,1]. Fourier functions are global.
std::pair<double, double> support(const BasisSpec& spec, int l);

// Level/offset decomposition for a Schauder hat index l >= 2: l = 2^{level-1} + k.
struct SchauderIndex {
  int level;  // >= 1
  int k;      // 1..2^{level-1}
};
SchauderIndex schauder_index(int l);

// Indices of the basis functions that are nonzero at x (among l = 1..m).
// For Fourier this is all of 1..m; for Schauder the constant plus one hat per level.
std::vector<int> active_indices(const BasisSpec& spec, int m, double x);

inline double wrap_unit(double x) {
  double r = x - std::floor(x);
  return r;  // in [0,1)
}

}  // namespace npdrift

#endif
