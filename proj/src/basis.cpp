#include "npdrift/basis.hpp"

#include <bit>
#include <cmath>

namespace npdrift {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kSqrt2 = 1.41421356237309504880;

// Continuous hat on [0,1]: rises to 1 at 1/2, back to 0 at 1, zero outside.
double hat(double u) {
  if (u <= 0.0 || u >= 1.0) return 0.0;
  return u < 0.5 ? 2.0 * u : 2.0 * (1.0 - u);
}

}  // namespace

std::string to_string(BasisFamily f) {
  return f == BasisFamily::Fourier ? "fourier" : "schauder";
}

BasisFamily basis_family_from_string(const std::string& s) {
  if (s == "fourier") return BasisFamily::Fourier;
  if (s == "schauder") return BasisFamily::Schauder;
  throw std::invalid_argument("unknown basis family: " + s);
}

BasisSpec::BasisSpec(BasisFamily fam, double beta_, int j_max_)
    : family(fam), beta(beta_), j_max(j_max_) {
  if (beta <= 0.0) throw std::invalid_argument("beta must be positive");
  if (j_max < 1) throw std::invalid_argument("j_max must be >= 1");
  if (family == BasisFamily::Schauder && j_max > 30)
    throw std::invalid_argument("Schauder j_max too large");
}

int BasisSpec::model_dim(int j) const {
  if (j < 1 || j > j_max)
    throw std::invalid_argument("model index out of range: " + std::to_string(j));
  if (family == BasisFamily::Fourier) return 2 * j - 1;
  return 1 << (j - 1);
}

SchauderIndex schauder_index(int l) {
  if (l < 2) throw std::invalid_argument("schauder_index requires l >= 2");
  // l in [2^{level-1}+1, 2^level]
  int level = std::bit_width(static_cast<unsigned>(l - 1));
  int k = l - (1 << (level - 1));
  return {level, k};
}

double eval_basis(const BasisSpec& spec, int l, double x) {
  if (l < 1) throw std::invalid_argument("basis index must be >= 1");
  if (l == 1) return 1.0;
  double u = wrap_unit(x);
  if (spec.family == BasisFamily::Fourier) {
    int k = l / 2;
    double arg = 2.0 * kPi * k * u;
    return (l % 2 == 0) ? kSqrt2 * std::sin(arg) : kSqrt2 * std::cos(arg);
  }
  auto [level, k] = schauder_index(l);
  double scale = static_cast<double>(1 << (level - 1));
  return hat(scale * u - (k - 1));
}

double xi_sq(const BasisSpec& spec, int l) {
  if (l < 1) throw std::invalid_argument("basis index must be >= 1");
  if (spec.family == BasisFamily::Fourier)
    return std::pow(static_cast<double>(l), -1.0 - 2.0 * spec.beta);
  if (l == 1) return 1.0;
  int level = schauder_index(l).level;
  return std::exp2(-2.0 * spec.beta * level);
}

double eval_drift(const BasisSpec& spec, const Eigen::VectorXd& theta, double x) {
  const int m = static_cast<int>(theta.size());
  if (m < 1) throw std::invalid_argument("empty coefficient vector");
  double u = wrap_unit(x);
  if (spec.family == BasisFamily::Fourier) {
    double acc = theta[0];
    // sin/cos of k*omega by the angle-addition recurrence: one sincos total
    const double s1 = std::sin(2.0 * kPi * u), c1 = std::cos(2.0 * kPi * u);
    double sk = 0.0, ck = 1.0;
    for (int k = 1; 2 * k <= m; ++k) {
      const double s = sk * c1 + ck * s1;
      const double c = ck * c1 - sk * s1;
      sk = s;
      ck = c;
      acc += theta[2 * k - 1] * kSqrt2 * sk;
      if (2 * k + 1 <= m) acc += theta[2 * k] * kSqrt2 * ck;
    }
    return acc;
  }
  // Schauder: one active hat per level.
  double acc = theta[0];
  for (int level = 1; (1 << (level - 1)) + 1 <= m; ++level) {
    double scale = static_cast<double>(1 << (level - 1));
    int k = static_cast<int>(scale * u) + 1;  // 1-based cell index
    int l = (1 << (level - 1)) + k;
    if (l > m) continue;
    acc += theta[l - 1] * hat(scale * u - (k - 1));
  }
  return acc;
}

std::pair<double, double> support(const BasisSpec& spec, int l) {
  if (l < 1) throw std::invalid_argument("basis index must be >= 1");
  if (spec.family == BasisFamily::Fourier || l == 1) return {0.0, 1.0};
  auto [level, k] = schauder_index(l);
  double w = std::exp2(-(level - 1));
  return {(k - 1) * w, k * w};
}

std::vector<int> active_indices(const BasisSpec& spec, int m, double x) {
  std::vector<int> idx;
  if (spec.family == BasisFamily::Fourier) {
    idx.resize(m);
    for (int l = 1; l <= m; ++l) idx[l - 1] = l;
    return idx;
  }
  double u = wrap_unit(x);
  idx.push_back(1);
  for (int level = 1; (1 << (level - 1)) + 1 <= m; ++level) {
    int scale = 1 << (level - 1);
    int k = static_cast<int>(scale * u) + 1;
    int l = scale + k;
    if (l <= m) idx.push_back(l);
  }
  return idx;
}

}  // namespace npdrift
