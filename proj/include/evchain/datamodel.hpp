#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace evchain {

// Supply phases in chain order. The enumerator order is the canonical total
// order E < P < B < V < M.
enum class Phase : std::uint8_t {
  Extraction,
  Processing,
  BatteryProduction,
  VehicleProduction,
  Market,
};

inline constexpr std::array<Phase, 5> kAllPhases = {
    Phase::Extraction, Phase::Processing, Phase::BatteryProduction,
    Phase::VehicleProduction, Phase::Market};

char phase_letter(Phase phase) noexcept;
std::optional<Phase> phase_from_letter(std::string_view letter) noexcept;

// The four mass-flow legs between adjacent phases.
enum class Transition : std::uint8_t { EP, PB, BV, VM };

inline constexpr std::array<Transition, 4> kAllTransitions = {
    Transition::EP, Transition::PB, Transition::BV, Transition::VM};

std::string_view transition_name(Transition t) noexcept;
Phase origin_phase(Transition t) noexcept;
Phase destination_phase(Transition t) noexcept;
std::optional<Transition> transition_between(Phase from, Phase to) noexcept;

enum class SeaVessel : std::uint8_t { None, BulkCarrier, ContainerShip, VehicleCarrier };
enum class LandVehicle : std::uint8_t { None, HeavyGoodsDiesel, ArticulatedVehicleTransport };
enum class TransportMode : std::uint8_t { Land, Sea };

std::string_view vessel_name(SeaVessel v) noexcept;
std::string_view vehicle_name(LandVehicle v) noexcept;
std::string_view mode_name(TransportMode m) noexcept;
std::optional<SeaVessel> parse_vessel(std::string_view s) noexcept;
std::optional<LandVehicle> parse_vehicle(std::string_view s) noexcept;

class PhaseSet {
 public:
  constexpr PhaseSet() = default;
  constexpr bool contains(Phase p) const noexcept { return (bits_ >> static_cast<unsigned>(p)) & 1U; }
  constexpr void insert(Phase p) noexcept { bits_ |= static_cast<std::uint8_t>(1U << static_cast<unsigned>(p)); }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  friend constexpr bool operator==(PhaseSet, PhaseSet) = default;

 private:
  std::uint8_t bits_ = 0;
};

// Dense handle into SupplyNetwork::nodes().
struct NodeIndex {
  std::uint32_t value = 0;
  friend constexpr auto operator<=>(NodeIndex, NodeIndex) = default;
};

struct Node {
  std::string id;
  std::string name;
  std::string region;
  double latitude = 0.0;
  double longitude = 0.0;
  PhaseSet roles;

  bool operator==(const Node&) const = default;
};

struct Mineral {
  std::string id;
  std::string name;

  bool operator==(const Mineral&) const = default;
};

// Masses are kg per kWh of battery capacity. A mineral absent from
// mineral_mass is outside the chemistry's subset.
struct BatteryChemistry {
  std::string id;
  std::map<std::string, double> mineral_mass;
  std::map<std::string, double> processed_mass;
  double battery_mass_per_kwh = 0.0;
  double vehicle_mass_per_kwh = 0.0;

  // Mineral ids with nonzero mass, lexicographically ordered.
  std::vector<std::string> subset() const;

  bool operator==(const BatteryChemistry&) const = default;
};

struct TransportLink {
  std::string origin;
  std::string destination;
  double land_km = 0.0;
  double sea_km = 0.0;
  SeaVessel sea_vessel = SeaVessel::None;
  LandVehicle land_vehicle = LandVehicle::None;

  double total_km() const noexcept { return land_km + sea_km; }
  bool operator==(const TransportLink&) const = default;
};

// kg e-CO2 per tonne-km.
struct EmissionFactors {
  double gamma1 = 0.0;  // bulk carrier
  double gamma2 = 0.0;  // container ship
  double gamma3 = 0.0;  // vehicle carrier
  double beta1 = 0.0;   // heavy goods vehicle, diesel
  double beta2 = 0.0;   // articulated vehicle transporter

  double sea_factor(SeaVessel v) const;
  double land_factor(LandVehicle v) const;

  bool operator==(const EmissionFactors&) const = default;
};

struct ChoiceOption {
  std::string node_id;
  double probability = 0.0;

  bool operator==(const ChoiceOption&) const = default;
};

// Normalized option list with its cumulative distribution. Probabilities
// summing within 1e-6 of one are renormalized; anything else is rejected.
class ChoiceDistribution {
 public:
  static constexpr double kSumBand = 1e-6;

  ChoiceDistribution() = default;
  static ChoiceDistribution from_options(std::vector<ChoiceOption> options,
                                         std::string_view context);

  const std::vector<ChoiceOption>& options() const noexcept { return options_; }
  const std::vector<double>& cdf() const noexcept { return cdf_; }
  std::size_t support_size() const noexcept;

  bool operator==(const ChoiceDistribution&) const = default;

 private:
  std::vector<ChoiceOption> options_;
  std::vector<double> cdf_;
};

// Independent choice for phases E and P (decision = mineral id) and B
// (decision = "battery", or a chemistry id for a chemistry-specific table).
class ChoiceTable {
 public:
  static constexpr std::string_view kBatteryDecision = "battery";

  ChoiceTable(Phase phase, std::string decision, std::vector<ChoiceOption> options);

  Phase phase() const noexcept { return phase_; }
  const std::string& decision() const noexcept { return decision_; }
  const ChoiceDistribution& distribution() const noexcept { return dist_; }
  const std::vector<ChoiceOption>& options() const noexcept { return dist_.options(); }
  const std::vector<double>& cdf() const noexcept { return dist_.cdf(); }

  bool operator==(const ChoiceTable&) const = default;

 private:
  Phase phase_;
  std::string decision_;
  ChoiceDistribution dist_;
};

// One row of a conditional choice set: options at phase V (given a B node)
// or M (given a V node).
class ConditionalChoiceTable {
 public:
  ConditionalChoiceTable(Phase phase, std::string given, std::vector<ChoiceOption> options);

  Phase phase() const noexcept { return phase_; }
  const std::string& given() const noexcept { return given_; }
  const ChoiceDistribution& distribution() const noexcept { return dist_; }
  const std::vector<ChoiceOption>& options() const noexcept { return dist_.options(); }
  const std::vector<double>& cdf() const noexcept { return dist_.cdf(); }

  bool operator==(const ConditionalChoiceTable&) const = default;

 private:
  Phase phase_;
  std::string given_;
  ChoiceDistribution dist_;
};

enum class ManufacturerKind : std::uint8_t { BatteryMaker, CarMaker };
std::string_view manufacturer_kind_name(ManufacturerKind k) noexcept;

struct Manufacturer {
  std::string id;
  ManufacturerKind kind = ManufacturerKind::CarMaker;
  std::vector<std::string> nodes;

  bool operator==(const Manufacturer&) const = default;
};

struct MarketSales {
  std::string market;
  std::string chemistry;
  double gwh = 0.0;

  bool operator==(const MarketSales&) const = default;
};

// What to do when no explicit link covers an (origin, destination) pair.
struct FallbackPolicy {
  enum class Kind : std::uint8_t { Error, GreatCircle };
  static constexpr double kDefaultDetour = 1.2;

  Kind kind = Kind::GreatCircle;
  double detour_factor = kDefaultDetour;

  static FallbackPolicy error() { return {Kind::Error, kDefaultDetour}; }
  static FallbackPolicy great_circle(double detour = kDefaultDetour);
  // "error" | "great-circle" | "great-circle:<factor>"
  static FallbackPolicy parse(std::string_view text);
  std::string to_string() const;

  bool operator==(const FallbackPolicy&) const = default;
};

struct ResolvedLeg {
  double land_km = 0.0;
  double sea_km = 0.0;
  SeaVessel sea_vessel = SeaVessel::None;
  LandVehicle land_vehicle = LandVehicle::None;

  bool operator==(const ResolvedLeg&) const = default;
};

// Explicit links keyed by (origin, destination). A missing direction falls
// back to the reverse link when one exists.
class LinkSet {
 public:
  LinkSet() = default;
  explicit LinkSet(const std::vector<TransportLink>& links);

  const TransportLink* find(std::string_view origin, std::string_view destination) const;
  std::size_t size() const noexcept { return links_.size(); }

  bool operator==(const LinkSet&) const = default;

 private:
  std::map<std::pair<std::string, std::string>, TransportLink, std::less<>> links_;
};

// Raw, unvalidated world model as read from disk or assembled in code.
struct NetworkData {
  std::vector<Node> nodes;
  std::vector<Mineral> minerals;
  std::vector<BatteryChemistry> chemistries;
  std::vector<ChoiceTable> choice_tables;
  std::vector<ConditionalChoiceTable> conditional_tables;
  std::vector<TransportLink> links;
  EmissionFactors factors;
  std::vector<Manufacturer> manufacturers;
  std::vector<MarketSales> sales;

  bool operator==(const NetworkData&) const = default;
};

// Index-resolved choice distribution used on the sampling hot path.
struct DecisionPlan {
  std::vector<NodeIndex> nodes;
  std::vector<double> probabilities;
  std::vector<double> cdf;

  bool operator==(const DecisionPlan&) const = default;
};

struct ChemistryPlan {
  std::size_t chemistry = 0;
  std::vector<std::string> minerals;  // subset S, lexicographic
  std::vector<DecisionPlan> extraction;
  std::vector<DecisionPlan> processing;
  DecisionPlan battery;

  bool operator==(const ChemistryPlan&) const = default;
};

// Immutable, validated world model. Only ingest::build_network creates one,
// so holding a SupplyNetwork means every invariant has been checked.
class SupplyNetwork {
 public:
  const NetworkData& data() const noexcept { return data_; }
  const FallbackPolicy& fallback() const noexcept { return fallback_; }

  const std::vector<Node>& nodes() const noexcept { return data_.nodes; }
  const Node& node(NodeIndex idx) const { return data_.nodes.at(idx.value); }
  std::optional<NodeIndex> find_node(std::string_view id) const;
  NodeIndex node_index(std::string_view id) const;  // throws ReferenceError

  const std::vector<Mineral>& minerals() const noexcept { return data_.minerals; }
  const std::vector<BatteryChemistry>& chemistries() const noexcept { return data_.chemistries; }
  std::optional<std::size_t> find_chemistry(std::string_view id) const;
  const BatteryChemistry& chemistry(std::string_view id) const;  // throws ArgumentError

  const ChoiceTable* find_choice_table(Phase phase, std::string_view decision) const;
  const ConditionalChoiceTable* find_conditional(Phase phase, std::string_view given) const;

  const ChemistryPlan& plan(std::size_t chemistry_index) const { return plans_.at(chemistry_index); }
  const ChemistryPlan& plan(std::string_view chemistry_id) const;
  const DecisionPlan* vehicle_row(NodeIndex battery_node) const;
  const DecisionPlan* market_row(NodeIndex vehicle_node) const;

  const LinkSet& link_set() const noexcept { return links_; }
  const TransportLink* find_link(std::string_view origin, std::string_view destination) const {
    return links_.find(origin, destination);
  }
  // Distance components for a leg; cached for every pair a scenario can
  // produce, resolved on demand (possibly throwing MissingLinkError) otherwise.
  ResolvedLeg leg(NodeIndex origin, NodeIndex destination, Transition t) const;

  const EmissionFactors& factors() const noexcept { return data_.factors; }
  const std::vector<Manufacturer>& manufacturers() const noexcept { return data_.manufacturers; }
  const std::vector<MarketSales>& sales() const noexcept { return data_.sales; }

  bool operator==(const SupplyNetwork& other) const {
    return data_ == other.data_ && fallback_ == other.fallback_;
  }

 private:
  friend SupplyNetwork build_network(NetworkData data, FallbackPolicy fallback);
  SupplyNetwork() = default;

  static std::uint64_t leg_key(NodeIndex o, NodeIndex d, Transition t) noexcept {
    return (static_cast<std::uint64_t>(o.value) << 34) | (static_cast<std::uint64_t>(d.value) << 2) |
           static_cast<std::uint64_t>(t);
  }

  NetworkData data_;
  FallbackPolicy fallback_;
  std::unordered_map<std::string, std::uint32_t> node_lookup_;
  LinkSet links_;
  std::vector<ChemistryPlan> plans_;
  std::vector<std::optional<DecisionPlan>> vehicle_rows_;  // by B node
  std::vector<std::optional<DecisionPlan>> market_rows_;   // by V node
  std::unordered_map<std::uint64_t, ResolvedLeg> leg_cache_;
};

// Cargo weight per kWh for one leg of the chain: w_E,i (EP), w_P,i (PB),
// w_B (BV) or w_V (VM). Mineral legs need a mineral; product legs reject one.
double scenario_weight(const BatteryChemistry& chemistry, Transition transition,
                       std::optional<std::string_view> mineral);

}  // namespace evchain
