#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "evchain/datamodel.hpp"
#include "evchain/emissions.hpp"
#include "evchain/massflow.hpp"

namespace evchain {

struct SimulationOptions {
  std::uint64_t iterations = 10'000;
  std::uint64_t seed = 42;
  unsigned workers = 1;
  double bin_width = kDefaultBinWidth;
  std::vector<std::uint64_t> checkpoints = kDefaultCheckpoints;
};

struct MeanAccumulator {
  double sum = 0.0;
  std::uint64_t count = 0;

  void add(double v) noexcept {
    sum += v;
    ++count;
  }
  void merge(const MeanAccumulator& o) noexcept {
    sum += o.sum;
    count += o.count;
  }
  double mean() const noexcept { return count ? sum / static_cast<double>(count) : 0.0; }
};

using Histogram = std::map<std::int64_t, std::uint64_t>;

// Everything a simulation run of one chemistry produces. Iterations are
// processed in fixed-size chunks whose partial results are merged in chunk
// order, so every field is identical for any worker count.
struct ChemistryRun {
  std::string chemistry;
  std::size_t chemistry_index = 0;
  std::uint64_t iterations = 0;
  double bin_width = kDefaultBinWidth;

  std::vector<double> totals;  // per iteration, kg e-CO2 / kWh
  std::array<double, 4> phase_sum{};
  std::array<std::array<double, 2>, 4> phase_mode_sum{};
  Histogram total_histogram;
  std::array<Histogram, 4> phase_histogram;
  std::map<NodeIndex, MeanAccumulator> by_battery_node;
  std::map<NodeIndex, MeanAccumulator> by_vehicle_node;
  std::map<NodeIndex, MeanAccumulator> by_market_node;
  FlowLedger ledger{0};

  double mean() const;  // pairwise mean of totals
};

inline constexpr std::uint64_t kChunkSize = 4096;

ChemistryRun run_chemistry(const SupplyNetwork& network, std::string_view chemistry, const SimulationOptions& options);

}  // namespace evchain
