#ifndef NPDRIFT_TESTDRIFTS_HPP
#define NPDRIFT_TESTDRIFTS_HPP

#include <string>

#include "npdrift/diffusion.hpp"

namespace npdrift {

struct NamedDrift {
  std::string name;
  DriftFn fn;
};

// The 1-periodic benchmark drift 12(a(x) + 0.05) with the piecewise a(x)
// that is Hoelder-continuous of order 1.5.
double main_drift(double x);

// Benchmark drifts by name: "main", "b1", "b2", "b3", "zero".
NamedDrift gallery(const std::string& name);

}  // namespace npdrift

#endif
