#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace rpp {

struct SuiteItem {
  std::string id;
  std::string name;
  double budget_seconds = 0;  // 0 = unbudgeted
  bool pass = false;
  nlohmann::json details;     // deterministic content only
  double seconds = 0;         // console/manifest only, never in the summary
};

struct SuiteResult {
  std::string profile;
  std::uint64_t seed = 0;
  std::vector<SuiteItem> items;
  bool all_pass = false;

  // Byte-stable summary: excludes every wall-clock measurement.
  nlohmann::json summary_json() const;
  nlohmann::json timings_json() const;
};

// profile: "quick" or "full". The determinism criterion re-runs the whole
// item list internally and byte-compares the two summaries.
SuiteResult run_suite(const std::string& profile, std::uint64_t seed);

}  // namespace rpp
