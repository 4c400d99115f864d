#include "rpp/manifest.hpp"

#include <cstdio>

namespace rpp {

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string digest_hex(const std::string& bytes) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(fnv1a64(bytes.data(), bytes.size())));
  return buf;
}

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command_line"] = command_line;
  j["seed"] = seed;
  j["version"] = version;
  nlohmann::json d = nlohmann::json::object();
  for (const auto& [path, dig] : input_digests) d[path] = dig;
  j["input_digests"] = d;
  j["wall_time_ms"] = wall_time_ms;
  j["output_digest"] = output_digest;
  return j;
}

}  // namespace rpp
