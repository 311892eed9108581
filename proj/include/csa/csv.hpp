#ifndef CSA_CSV_HPP
#define CSA_CSV_HPP

#include <cstdint>
#include <string>

namespace csa {

inline constexpr const char* kVersion = "0.1.0";

/// Round-trippable double formatting used by every CSV writer.
std::string format_double(double v);

/// FNV-1a 64-bit hash (config provenance).
std::uint64_t fnv1a64(const std::string& data);

/// Write a string to a file, replacing any existing content.
void write_file(const std::string& path, const std::string& content);

/// Read an entire file.
std::string read_file(const std::string& path);

}  // namespace csa

#endif
