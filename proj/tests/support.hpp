#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "evchain/datamodel.hpp"
#include "evchain/hubopt.hpp"
#include "evchain/ingest.hpp"
#include "evchain/sampler.hpp"

namespace evchain::testing {

std::filesystem::path source_dir();
std::filesystem::path bundled_manifest();
std::filesystem::path bundled_scenario();

// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const noexcept { return path_; }

 private:
  std::filesystem::path path_;
};

Node make_node(std::string id, std::string region, std::string roles, double lat = 0.0, double lon = 0.0);

// One mineral "lithium" and one node per phase, chained by explicit links:
// E1->P1 100 km land, P1->B1 1000 km sea, B1->V1 500 km sea, V1->M1 2000 km
// sea. Masses (10, 5, 6, 15) kg/kWh, beta = 0.1, gamma = 0.01, 0.01, 0.02.
NetworkData singleton_data();

// Two minerals with (2, 3) extraction options, (2, 2) processing options,
// two battery plants, a two-wide V row per battery plant and a two-wide M row
// per vehicle plant: 192 scenarios. `skewed` selects uneven probabilities.
NetworkData tiny_data(bool skewed);

// Two minerals with three options at E and P and three-wide B, V and M
// stages: 3^7 scenarios.
NetworkData fig6_data();

// Random network with up to `max_minerals` minerals; some options carry zero
// probability and rows vary in width. Coordinates are spread so distances
// differ.
NetworkData random_data(std::mt19937_64& rng, std::size_t max_minerals = 3, std::size_t max_width = 3);

// Every scenario with positive probability and its probability, enumerated
// from the raw tables.
std::map<std::vector<std::uint32_t>, double> enumerate_scenarios(const SupplyNetwork& network,
                                                                 const std::string& chemistry);

// Compact key for a scenario: routes (E, P per mineral), then B, V, M.
std::vector<std::uint32_t> scenario_key(const Scenario& s);

// Random hub instance with dyadic costs (multiples of 1/1024), so every
// objective sum is exact in binary floating point.
HubInstance random_instance(std::mt19937_64& rng, std::size_t max_alpha, std::size_t max_j, std::size_t max_n,
                            std::size_t max_beta);

// Minimum objective over every feasible (x, y) point, computed without the
// per-hub decomposition.
double enumerate_objective(const HubInstance& instance);

std::string read_file(const std::filesystem::path& path);

}  // namespace evchain::testing
