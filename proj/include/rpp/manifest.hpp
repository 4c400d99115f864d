#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rpp {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a64(const void* data, std::size_t len);
std::string digest_hex(const std::string& bytes);

// Reproducibility record for one CLI run. Identical inputs and seed must
// reproduce the identical output digest; wall time lives here and never in
// the run's stdout payload.
struct RunManifest {
  std::vector<std::string> command_line;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  std::vector<std::pair<std::string, std::string>> input_digests;  // (path, fnv64)
  double wall_time_ms = 0;
  std::string output_digest;

  nlohmann::json to_json() const;
};

}  // namespace rpp
