#include "npdrift/io.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace npdrift {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

uint64_t fnv1a(const std::string& s) {
  uint64_t h = 14695981039346656037ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

void write_path_csv(const Path& path, const std::string& file, const std::string& meta_comment) {
  std::ofstream out(file);
  if (!out) throw std::invalid_argument("cannot write file: " + file);
  if (!meta_comment.empty()) out << "# " << meta_comment << "\n";
  out << "t,x\n";
  for (std::size_t i = 0; i < path.values.size(); ++i)
    out << format_double(path.time_at(i)) << ',' << format_double(path.values[i]) << '\n';
  if (!out) throw std::invalid_argument("write failed: " + file);
}

Path read_path_csv(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw std::invalid_argument("cannot open file: " + file);
  std::string line;
  std::vector<double> times, values;
  bool header_seen = false;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    if (!header_seen) {
      header_seen = true;  // "t,x" header row
      if (line.find("t") != std::string::npos && line.find(",") != std::string::npos &&
          !std::isdigit(static_cast<unsigned char>(line[0])) && line[0] != '-')
        continue;
    }
    std::istringstream row(line);
    std::string tok;
    if (!std::getline(row, tok, ',')) throw std::invalid_argument("malformed CSV row: " + line);
    double t, x;
    try {
      t = std::stod(tok);
      if (!std::getline(row, tok, ',')) throw std::invalid_argument("missing x column");
      x = std::stod(tok);
    } catch (const std::exception&) {
      throw std::invalid_argument("malformed CSV row: " + line);
    }
    if (!std::isfinite(t) || !std::isfinite(x))
      throw std::invalid_argument("non-finite value in data file");
    times.push_back(t);
    values.push_back(x);
  }
  if (values.size() < 2) throw std::invalid_argument("data file has fewer than 2 rows");
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw std::invalid_argument("non-increasing time column");
  for (std::size_t i = 1; i < times.size(); ++i) {
    const double step = times[i] - times[i - 1];
    if (std::abs(step - dt) > 1e-6 * dt)
      throw std::invalid_argument("non-uniform time spacing at row " + std::to_string(i));
  }
  Path p;
  p.t0 = times[0];
  p.dt = dt;
  p.values = std::move(values);
  return p;
}

}  // namespace npdrift
