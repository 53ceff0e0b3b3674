#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "evchain/datamodel.hpp"

namespace evchain {

using BigCount = boost::multiprecision::cpp_int;

// Locations of the nine dataset files plus the distance fallback policy.
// Relative paths in a manifest file resolve against the manifest's directory.
struct DatasetManifest {
  std::filesystem::path nodes;
  std::filesystem::path minerals;
  std::filesystem::path chemistries;
  std::filesystem::path choices;
  std::filesystem::path conditional_choices;
  std::filesystem::path links;
  std::filesystem::path factors;
  std::filesystem::path manufacturers;
  std::filesystem::path sales;
  FallbackPolicy fallback;

  // Default file names inside `dir`.
  static DatasetManifest in_directory(const std::filesystem::path& dir);
  // JSON manifest: {"nodes": "...", ..., "fallback": "great-circle:1.2"}.
  // Missing keys take the default file name.
  static DatasetManifest from_file(const std::filesystem::path& manifest_path);

  // (label, path) in a fixed order; used for hashing and reporting.
  std::vector<std::pair<std::string, std::filesystem::path>> files() const;
};

// Per-file parsing with file:line diagnostics. Cross-file references are
// checked here when the referenced file has already been read.
NetworkData read_network_data(const DatasetManifest& manifest);
std::vector<ChoiceTable> read_choices(const std::filesystem::path& path);
std::vector<ConditionalChoiceTable> read_conditional_choices(const std::filesystem::path& path);

// Validate and freeze. Throws ReferenceError, CoverageError, ProbabilityError,
// MissingLinkError (fallback = error and a reachable pair has no link).
SupplyNetwork build_network(NetworkData data, FallbackPolicy fallback);

SupplyNetwork load_network(const DatasetManifest& manifest);

// Writes the nine files and a manifest.json into `dir`.
void write_dataset(const NetworkData& data, const FallbackPolicy& fallback, const std::filesystem::path& dir);

inline constexpr double kEarthRadiusKm = 6371.0;

double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg);

// Distance components for shipping from `origin` to `destination` on leg
// `transition`. Self links are free; otherwise the explicit link wins and the
// great-circle fallback applies only when the policy allows it.
ResolvedLeg resolve_distance(const Node& origin, const Node& destination, const LinkSet& links,
                             const FallbackPolicy& policy, Transition transition);

struct ScenarioCount {
  // Product of support sizes, using the widest reachable conditional row.
  BigCount upper_bound;
  // Exact number of reachable scenarios; absent when the number of
  // conditional branches to walk exceeds the cap.
  std::optional<BigCount> reachable;
};

inline constexpr std::uint64_t kDefaultEnumerationCap = 10'000'000;

ScenarioCount count_scenarios(const SupplyNetwork& network, std::string_view chemistry,
                              std::uint64_t enumeration_cap = kDefaultEnumerationCap);

}  // namespace evchain
