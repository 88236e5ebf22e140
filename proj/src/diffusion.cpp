#include "npdrift/diffusion.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace npdrift {

void Path::validate() const {
  if (values.size() < 2) throw std::invalid_argument("path needs at least 2 values");
  if (!(dt > 0.0)) throw std::invalid_argument("path dt must be positive");
  for (double v : values)
    if (!std::isfinite(v)) throw std::invalid_argument("path contains non-finite value");
}

Path euler_simulate(const DriftFn& drift, double x0, double T, double dt, Rng& rng) {
  if (!(T > 0.0) || !(dt > 0.0) || dt > T)
    throw std::invalid_argument("require 0 < dt <= T");
  const auto n_steps = static_cast<std::size_t>(std::llround(T / dt));
  Path path;
  path.t0 = 0.0;
  path.dt = dt;
  path.values.resize(n_steps + 1);
  path.values[0] = x0;
  const double sqrt_dt = std::sqrt(dt);
  double x = x0;
  for (std::size_t i = 0; i < n_steps; ++i) {
    const double b = drift(x);
    if (!std::isfinite(b))
      throw std::runtime_error("simulation diverged: non-finite drift at step " +
                               std::to_string(i));
    x += b * dt + sqrt_dt * rng.normal();
    path.values[i + 1] = x;
  }
  return path;
}

Path euler_simulate(const DriftFn& drift, double x0, double T, double dt, uint64_t seed) {
  Rng rng(seed);
  return euler_simulate(drift, x0, T, dt, rng);
}

Path thin(const Path& path, std::size_t keep_every) {
  if (keep_every == 0) throw std::invalid_argument("keep_every must be >= 1");
  path.validate();
  Path out;
  out.t0 = path.t0;
  out.dt = path.dt * static_cast<double>(keep_every);
  for (std::size_t i = 0; i < path.values.size(); i += keep_every)
    out.values.push_back(path.values[i]);
  if (out.values.size() < 2)
    throw std::invalid_argument("thinning leaves fewer than 2 points");
  return out;
}

Path sample_bridge(double xa, double xb, double t_len, std::size_t n_interior, Rng& rng) {
  if (!(t_len > 0.0)) throw std::invalid_argument("bridge t_len must be positive");
  const std::size_t n = n_interior + 1;  // number of increments
  Path path;
  path.t0 = 0.0;
  path.dt = t_len / static_cast<double>(n);
  path.values.resize(n + 1);
  const double sqrt_dt = std::sqrt(path.dt);
  // Brownian path started at 0, then pin both ends.
  double w = 0.0;
  path.values[0] = xa;
  std::vector<double> wpath(n + 1);
  wpath[0] = 0.0;
  for (std::size_t i = 1; i <= n; ++i) {
    w += sqrt_dt * rng.normal();
    wpath[i] = w;
  }
  const double drift_corr = wpath[n] - (xb - xa);
  for (std::size_t i = 1; i < n; ++i) {
    const double frac = static_cast<double>(i) / static_cast<double>(n);
    path.values[i] = xa + wpath[i] - frac * drift_corr;
  }
  path.values[n] = xb;
  return path;
}

Path sample_bridge(double xa, double xb, double t_len, std::size_t n_interior, uint64_t seed) {
  Rng rng(seed);
  return sample_bridge(xa, xb, t_len, n_interior, rng);
}

double log_girsanov(const DriftFn& drift, const Path& path) {
  path.validate();
  double ito = 0.0, quad = 0.0;
  for (std::size_t i = 0; i + 1 < path.values.size(); ++i) {
    const double x = path.values[i];
    const double b = drift(x);
    if (!std::isfinite(b))
      throw std::runtime_error("non-finite drift value at x = " + std::to_string(x));
    ito += b * (path.values[i + 1] - x);
    quad += b * b;
  }
  return ito - 0.5 * quad * path.dt;
}

}  // namespace npdrift
