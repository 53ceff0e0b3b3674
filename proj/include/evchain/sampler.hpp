#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evchain/datamodel.hpp"
#include "evchain/rng.hpp"

namespace evchain {

// First-match inverse-CDF lookup: the smallest j with u <= F_j. Entries that
// add no probability mass (F_j == F_{j-1}, with F_{-1} = 0) never match, which
// only differs from the bare rule at u == 0 when the first option has zero
// probability. Binary search; equivalence with a linear scan is tested.
std::size_t sample_index(std::span<const double> cdf, double u);

// Same rule applied to the conditional row for `given` among `rows` of one
// phase. Throws CoverageError when no row exists.
std::size_t sample_conditional_index(std::span<const ConditionalChoiceTable> rows, Phase phase,
                                     std::string_view given, double u);

struct MineralRoute {
  NodeIndex extraction;
  NodeIndex processing;

  bool operator==(const MineralRoute&) const = default;
};

// One sampled supply chain. routes[i] belongs to plan(chemistry).minerals[i].
struct Scenario {
  std::size_t chemistry = 0;
  std::uint64_t iteration_index = 0;
  std::vector<MineralRoute> routes;
  NodeIndex battery;
  NodeIndex vehicle;
  NodeIndex market;

  bool operator==(const Scenario&) const = default;
};

// Draw order: E for each mineral (id order), P for each mineral, then B, V, M.
Scenario sample_scenario(const SupplyNetwork& network, std::size_t chemistry, RandomStream& stream);
Scenario sample_scenario(const SupplyNetwork& network, std::string_view chemistry, std::uint64_t master_seed,
                         std::uint64_t iteration_index);

}  // namespace evchain
