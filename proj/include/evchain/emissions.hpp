#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "evchain/datamodel.hpp"
#include "evchain/sampler.hpp"

namespace evchain {

struct LegEmission {
  double land = 0.0;
  double sea = 0.0;
  double total() const noexcept { return land + sea; }
};

// (weight_kg / 1000) * (land_km * beta + sea_km * gamma), split by mode.
// Throws ModeMissingError for a positive distance without a vehicle/vessel.
LegEmission leg_emissions(double weight_kg, const ResolvedLeg& leg, const EmissionFactors& factors);

double link_emissions(double weight_kg, double land_km, double sea_km, LandVehicle land_vehicle,
                      SeaVessel sea_vessel, const EmissionFactors& factors);

struct LinkEmission {
  NodeIndex origin;
  NodeIndex destination;
  Transition transition = Transition::EP;
  TransportMode mode = TransportMode::Land;
  double kg_per_kwh = 0.0;
};

// Emissions of one scenario in kg e-CO2 per kWh.
struct EmissionRecord {
  std::uint64_t iteration_index = 0;
  std::size_t chemistry = 0;
  double total = 0.0;
  std::array<double, 4> by_phase{};  // indexed by Transition
  std::array<double, 2> by_mode{};   // indexed by TransportMode
  std::vector<LinkEmission> by_link;  // one entry per leg and mode with distance > 0
  Scenario scenario;
};

EmissionRecord scenario_emissions(const SupplyNetwork& network, const Scenario& scenario);

// Pairwise (cascade) sum, blocks of 8 summed sequentially at the leaves. The
// grouping depends only on the input length.
double pairwise_sum(std::span<const double> values) noexcept;

struct Pmf {
  double bin_width = 0.0;
  std::map<std::int64_t, double> bins;  // bin index -> probability mass

  double lower_edge(std::int64_t bin) const noexcept { return static_cast<double>(bin) * bin_width; }
};

inline constexpr double kDefaultBinWidth = 0.5;

std::int64_t bin_of(double value, double bin_width) noexcept;
Pmf build_pmf(std::span<const double> values, double bin_width = kDefaultBinWidth);
Pmf pmf_from_counts(const std::map<std::int64_t, std::uint64_t>& counts, double bin_width);

struct ConvergenceReport {
  std::vector<std::pair<std::uint64_t, double>> checkpoints;  // (N, mean of first N)
  std::vector<double> relative_change;                         // between consecutive checkpoints
};

inline const std::vector<std::uint64_t> kDefaultCheckpoints = {1'000, 10'000, 100'000, 1'000'000};

// Checkpoints beyond the available N are dropped and N itself is always the
// final checkpoint.
ConvergenceReport cumulative_average(std::span<const double> totals,
                                     std::span<const std::uint64_t> checkpoints = kDefaultCheckpoints);
ConvergenceReport cumulative_average(std::span<const EmissionRecord> records,
                                     std::span<const std::uint64_t> checkpoints = kDefaultCheckpoints);

}  // namespace evchain
