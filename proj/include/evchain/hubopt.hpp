#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "evchain/datamodel.hpp"
#include "evchain/engine.hpp"

namespace evchain {

// P-hub location and sourcing problem.
//
//   minimize  Z = sum_k sum_j sum_i c_ijk x_ijk + sum_k y_k sum_m w_m c_km
//   s.t.      sum_k y_k = p
//             sum_i x_ijk = y_k          for every subset j and hub k
//             x_ijk, y_k in {0, 1}
//
// Costs are kg e-CO2 per kWh with cargo mass folded in. The market weights
// w_m default to one, which charges every selected hub for every market.
struct HubInstance {
  std::vector<std::string> hubs;                  // I, size alpha
  std::vector<std::string> markets;               // M, size beta
  std::vector<std::string> subsets;               // J, size j_max
  std::vector<std::vector<std::string>> options;  // options[j]: source nodes, size n_j
  // source_cost[j][i][k]
  std::vector<std::vector<std::vector<double>>> source_cost;
  // market_cost[k][m]
  std::vector<std::vector<double>> market_cost;
  std::vector<double> market_weight;  // per market; empty means all ones
  std::size_t p = 2;

  std::size_t alpha() const noexcept { return hubs.size(); }
  std::size_t beta() const noexcept { return markets.size(); }
  std::size_t j_max() const noexcept { return subsets.size(); }

  // Shape, finiteness and sign checks (ArgumentError); alpha < p raises
  // InfeasibleError.
  void validate() const;

  double weight(std::size_t m) const noexcept { return market_weight.empty() ? 1.0 : market_weight[m]; }
  // Cheapest source option for subset j at hub k, lowest index on ties.
  std::size_t best_option(std::size_t j, std::size_t k) const;
  // Sum_j min_i c_ijk + sum_m w_m c_km.
  double hub_cost(std::size_t k) const;
  std::vector<double> hub_costs() const;
};

struct HubSolution {
  std::vector<std::size_t> selected_hubs;  // ascending hub indices
  // (hub index, subset index) -> option index, one entry per selected hub and subset
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> sourcing;
  double objective = 0.0;

  bool operator==(const HubSolution&) const = default;
};

// The objective of an arbitrary assignment. Every solver reports the value
// this function returns so that objectives compare exactly.
double evaluate_objective(const HubInstance& instance, const std::vector<std::size_t>& selected_hubs,
                          const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& sourcing);

struct FeasibilityReport {
  bool feasible = true;
  std::vector<std::string> violations;
};

// Expands the solution to dense x_ijk / y_k and checks every constraint,
// plus that the reported objective matches the one recomputed from x and y.
FeasibilityReport check_feasibility(const HubInstance& instance, const HubSolution& solution);

// Optimal by decomposition: with y fixed the sourcing separates per hub, so
// the optimum takes the p hubs of smallest hub_cost.
HubSolution solve_exact(const HubInstance& instance);

struct BnbStats {
  std::uint64_t nodes = 0;                 // search tree nodes visited
  std::uint64_t evaluated_selections = 0;  // complete hub sets evaluated
  std::uint64_t pruned = 0;
};

// Depth-first branch and bound over y, include branch first. The bound at a
// node is the fixed cost plus the cheapest remaining hub costs.
HubSolution solve_bnb(const HubInstance& instance, BnbStats* stats = nullptr);

enum class StructureKind : std::uint8_t { Current, Future, Optimized };
std::string_view structure_name(StructureKind kind) noexcept;

struct MarketGroup {
  std::string name;
  std::vector<std::string> markets;
  std::vector<std::string> candidate_hubs;  // empty: every V node
  std::optional<std::size_t> p;
};

// Sales-weighted cargo per kWh for a market group.
struct MassProfile {
  std::map<std::string, double> chemistry_share;  // sums to one
  std::map<std::string, double> mineral_mass;     // kg/kWh, extraction mass
  double vehicle_mass = 0.0;                      // kg/kWh
};

// Sales shares of the group's markets over the given chemistries
// (ArgumentError when the group has no sales).
std::vector<double> market_demand_weights(const SupplyNetwork& network, const MarketGroup& group,
                                          const std::vector<std::string>& chemistries);
MassProfile mass_profile(const SupplyNetwork& network, const MarketGroup& group,
                         const std::vector<std::string>& chemistries);

// V nodes that the network's tables can reach for the given chemistries and
// that ship to at least one group market with positive probability.
std::vector<std::string> reachable_hubs(const SupplyNetwork& network, const MarketGroup& group,
                                        const std::vector<std::string>& chemistries);

// Sources are the extraction options of each mineral (positive probability
// only, except under Optimized). Hubs are the reachable V nodes under
// Current and Future and the group's candidate set under Optimized.
HubInstance build_instance(const SupplyNetwork& network, const MarketGroup& group, StructureKind kind,
                           const std::vector<std::string>& chemistries, std::size_t p);

struct OptimizationScenario {
  std::size_t p = 2;
  std::vector<std::string> chemistries;  // empty: all
  std::optional<std::filesystem::path> future_choices;
  std::optional<std::filesystem::path> future_conditional_choices;
  std::vector<MarketGroup> groups;

  // {"p": 2, "chemistries": [...], "future": {"choices": "...",
  //  "conditional_choices": "..."}, "groups": [{"name", "markets",
  //  "candidate_hubs", "p"}]}; paths relative to the file.
  static OptimizationScenario from_file(const std::filesystem::path& path);
  std::size_t p_for(const MarketGroup& group) const { return group.p.value_or(p); }
};

// The Current network with its choice tables replaced by the Future ones.
SupplyNetwork future_network(const SupplyNetwork& current, const OptimizationScenario& scenario);

struct GroupComparison {
  std::string group;
  std::size_t p = 0;
  double current = 0.0;    // Monte Carlo, sales-weighted over group markets
  double future = 0.0;     // Monte Carlo under the Future tables
  double optimized = 0.0;  // Z / p
  // Z / p of the same problem restricted to the Current hubs and sources;
  // absent when fewer than p Current hubs exist.
  std::optional<double> current_hub_bound;
  HubInstance instance;
  HubSolution solution;
};

struct StructureComparison {
  std::vector<GroupComparison> groups;
  // Group names by ascending value of each column.
  std::vector<std::string> order(StructureKind kind) const;
};

StructureComparison compare_structures(const SupplyNetwork& current, const SupplyNetwork& future,
                                       const OptimizationScenario& scenario, const SimulationOptions& options);

nlohmann::json instance_to_json(const HubInstance& instance);
HubInstance instance_from_json(const nlohmann::json& j);
nlohmann::json solution_to_json(const HubInstance& instance, const HubSolution& solution);
HubSolution solution_from_json(const HubInstance& instance, const nlohmann::json& j);

}  // namespace evchain
