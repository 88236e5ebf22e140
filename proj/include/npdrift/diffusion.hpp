#ifndef NPDRIFT_DIFFUSION_HPP
#define NPDRIFT_DIFFUSION_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "npdrift/rng.hpp"

namespace npdrift {

using DriftFn = std::function<double(double)>;

// A path on a uniform time grid: values[i] is the state at t0 + i*dt.
struct Path {
  double t0 = 0.0;
  double dt = 0.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  double duration() const { return (values.size() - 1) * dt; }
  double time_at(std::size_t i) const { return t0 + static_cast<double>(i) * dt; }

  void validate() const;
};

// Euler scheme for dX = b(X) dt + dW:  x_{i+1} = x_i + b(x_i) dt + sqrt(dt) Z_i.
// Deterministic given the seed. Throws if the drift evaluates non-finite.
Path euler_simulate(const DriftFn& drift, double x0, double T, double dt, uint64_t seed);
Path euler_simulate(const DriftFn& drift, double x0, double T, double dt, Rng& rng);

// Keep indices 0, keep_every, 2*keep_every, ...; dt scales accordingly.
Path thin(const Path& path, std::size_t keep_every);

// Brownian bridge from xa to xb over [0, t_len] with n_interior interior grid
// points: endpoint-corrected Brownian path, exact in law at the grid points.
// Endpoints are xa and xb bitwise.
Path sample_bridge(double xa, double xb, double t_len, std::size_t n_interior, Rng& rng);
Path sample_bridge(double xa, double xb, double t_len, std::size_t n_interior, uint64_t seed);

// Discretized Girsanov log-likelihood of the path under drift b relative to
// Brownian motion: sum_i b(x_i)(x_{i+1}-x_i) - (1/2) sum_i b(x_i)^2 dt,
// with left-point (Ito) sums. Also serves as the per-segment log L_k.
double log_girsanov(const DriftFn& drift, const Path& path);

}  // namespace npdrift

#endif
