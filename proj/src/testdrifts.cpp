#include "npdrift/testdrifts.hpp"

#include <cmath>
#include <stdexcept>

#include "npdrift/basis.hpp"

namespace npdrift {

namespace {

constexpr double kPi = 3.14159265358979323846;

double b1(double x) { return 8.0 * std::sin(4.0 * kPi * x); }

double b2(double x) {
  const double u = wrap_unit(x);
  if (u < 0.5) return 200.0 * u * std::pow(1.0 - 2.0 * u, 3);
  return -(400.0 / 3.0) * (1.0 - u) * std::pow(2.0 * u - 1.0, 3);
}

double b3(double x) {
  const double u = wrap_unit(x);
  if (u < 0.25 || u > 0.75) return 0.0;
  return -8.0 * std::sin(kPi * (4.0 * u - 1.0));
}

}  // namespace

double main_drift(double x) {
  const double u = wrap_unit(x);
  double a;
  if (u < 2.0 / 3.0) {
    const double w = 1.0 - 3.0 * u;
    a = 2.0 / 7.0 - u - (2.0 / 7.0) * w * std::sqrt(std::abs(w));
  } else {
    a = -2.0 / 7.0 + (2.0 / 7.0) * u;
  }
  return 12.0 * (a + 0.05);
}

NamedDrift gallery(const std::string& name) {
  if (name == "main") return {name, [](double x) { return main_drift(x); }};
  if (name == "b1") return {name, b1};
  if (name == "b2") return {name, b2};
  if (name == "b3") return {name, b3};
  if (name == "zero") return {name, [](double) { return 0.0; }};
  throw std::invalid_argument("unknown drift name: " + name);
}

}  // namespace npdrift
