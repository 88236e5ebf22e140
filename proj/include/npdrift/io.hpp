#ifndef NPDRIFT_IO_HPP
#define NPDRIFT_IO_HPP

#include <cstdint>
#include <string>

#include "npdrift/diffusion.hpp"

namespace npdrift {

// %.17g — lossless round-trip for doubles
std::string format_double(double v);

// CSV body: optional '#'-prefixed metadata lines, then a "t,x" header.
void write_path_csv(const Path& path, const std::string& file, const std::string& meta_comment);
Path read_path_csv(const std::string& file);

// FNV-1a over a canonical string, for embedding a config fingerprint in outputs
uint64_t fnv1a(const std::string& s);

}  // namespace npdrift

#endif
