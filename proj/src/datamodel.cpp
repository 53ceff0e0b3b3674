#include "evchain/datamodel.hpp"

#include <charconv>
#include <cmath>

#include "evchain/errors.hpp"

namespace evchain {

char phase_letter(Phase phase) noexcept {
  switch (phase) {
    case Phase::Extraction: return 'E';
    case Phase::Processing: return 'P';
    case Phase::BatteryProduction: return 'B';
    case Phase::VehicleProduction: return 'V';
    case Phase::Market: return 'M';
  }
  return '?';
}

std::optional<Phase> phase_from_letter(std::string_view letter) noexcept {
  if (letter.size() != 1) return std::nullopt;
  for (Phase p : kAllPhases) {
    if (phase_letter(p) == letter[0]) return p;
  }
  return std::nullopt;
}

std::string_view transition_name(Transition t) noexcept {
  switch (t) {
    case Transition::EP: return "EP";
    case Transition::PB: return "PB";
    case Transition::BV: return "BV";
    case Transition::VM: return "VM";
  }
  return "?";
}

Phase origin_phase(Transition t) noexcept { return static_cast<Phase>(static_cast<int>(t)); }

Phase destination_phase(Transition t) noexcept { return static_cast<Phase>(static_cast<int>(t) + 1); }

std::optional<Transition> transition_between(Phase from, Phase to) noexcept {
  const int f = static_cast<int>(from);
  if (static_cast<int>(to) != f + 1) return std::nullopt;
  return static_cast<Transition>(f);
}

std::string_view vessel_name(SeaVessel v) noexcept {
  switch (v) {
    case SeaVessel::None: return "None";
    case SeaVessel::BulkCarrier: return "BulkCarrier";
    case SeaVessel::ContainerShip: return "ContainerShip";
    case SeaVessel::VehicleCarrier: return "VehicleCarrier";
  }
  return "?";
}

std::string_view vehicle_name(LandVehicle v) noexcept {
  switch (v) {
    case LandVehicle::None: return "None";
    case LandVehicle::HeavyGoodsDiesel: return "HeavyGoodsDiesel";
    case LandVehicle::ArticulatedVehicleTransport: return "ArticulatedVehicleTransport";
  }
  return "?";
}

std::string_view mode_name(TransportMode m) noexcept { return m == TransportMode::Land ? "Land" : "Sea"; }

std::optional<SeaVessel> parse_vessel(std::string_view s) noexcept {
  for (auto v : {SeaVessel::None, SeaVessel::BulkCarrier, SeaVessel::ContainerShip, SeaVessel::VehicleCarrier}) {
    if (vessel_name(v) == s) return v;
  }
  if (s.empty()) return SeaVessel::None;
  return std::nullopt;
}

std::optional<LandVehicle> parse_vehicle(std::string_view s) noexcept {
  for (auto v : {LandVehicle::None, LandVehicle::HeavyGoodsDiesel, LandVehicle::ArticulatedVehicleTransport}) {
    if (vehicle_name(v) == s) return v;
  }
  if (s.empty()) return LandVehicle::None;
  return std::nullopt;
}

std::string_view manufacturer_kind_name(ManufacturerKind k) noexcept {
  return k == ManufacturerKind::BatteryMaker ? "BatteryMaker" : "CarMaker";
}

std::vector<std::string> BatteryChemistry::subset() const {
  std::vector<std::string> out;
  for (const auto& [mineral, mass] : mineral_mass) {
    if (mass > 0.0) out.push_back(mineral);
  }
  return out;  // std::map iteration is already lexicographic
}

double EmissionFactors::sea_factor(SeaVessel v) const {
  switch (v) {
    case SeaVessel::BulkCarrier: return gamma1;
    case SeaVessel::ContainerShip: return gamma2;
    case SeaVessel::VehicleCarrier: return gamma3;
    case SeaVessel::None: break;
  }
  throw ModeMissingError("no sea vessel given for a positive sea distance");
}

double EmissionFactors::land_factor(LandVehicle v) const {
  switch (v) {
    case LandVehicle::HeavyGoodsDiesel: return beta1;
    case LandVehicle::ArticulatedVehicleTransport: return beta2;
    case LandVehicle::None: break;
  }
  throw ModeMissingError("no land vehicle given for a positive land distance");
}

ChoiceDistribution ChoiceDistribution::from_options(std::vector<ChoiceOption> options,
                                                    std::string_view context) {
  if (options.empty()) {
    throw ProbabilityError(std::string(context) + ": choice set has no options");
  }
  double sum = 0.0;
  for (const auto& opt : options) {
    if (!std::isfinite(opt.probability) || opt.probability < 0.0) {
      throw ProbabilityError(std::string(context) + ": probability for '" + opt.node_id +
                             "' must be finite and >= 0");
    }
    sum += opt.probability;
  }
  if (std::abs(sum - 1.0) > kSumBand) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, sum);
    throw ProbabilityError(std::string(context) + ": probabilities sum to " +
                           std::string(buf, res.ptr) + ", outside 1 +/- 1e-6");
  }

  ChoiceDistribution dist;
  dist.cdf_.reserve(options.size());
  std::size_t last_positive = 0;
  double running = 0.0;
  for (std::size_t j = 0; j < options.size(); ++j) {
    options[j].probability /= sum;
    running += options[j].probability;
    dist.cdf_.push_back(running);
    if (options[j].probability > 0.0) last_positive = j;
  }
  // The last reachable option closes the distribution exactly, so every
  // u in [0, 1) lands on an option with positive probability.
  for (std::size_t j = last_positive; j < dist.cdf_.size(); ++j) dist.cdf_[j] = 1.0;
  dist.options_ = std::move(options);
  return dist;
}

std::size_t ChoiceDistribution::support_size() const noexcept {
  std::size_t n = 0;
  for (const auto& opt : options_) n += opt.probability > 0.0 ? 1 : 0;
  return n;
}

ChoiceTable::ChoiceTable(Phase phase, std::string decision, std::vector<ChoiceOption> options)
    : phase_(phase), decision_(std::move(decision)) {
  if (phase != Phase::Extraction && phase != Phase::Processing && phase != Phase::BatteryProduction) {
    throw ArgumentError("independent choice tables exist only for phases E, P and B");
  }
  dist_ = ChoiceDistribution::from_options(
      std::move(options), std::string("choice table ") + phase_letter(phase) + "/" + decision_);
}

ConditionalChoiceTable::ConditionalChoiceTable(Phase phase, std::string given, std::vector<ChoiceOption> options)
    : phase_(phase), given_(std::move(given)) {
  if (phase != Phase::VehicleProduction && phase != Phase::Market) {
    throw ArgumentError("conditional choice tables exist only for phases V and M");
  }
  dist_ = ChoiceDistribution::from_options(
      std::move(options), std::string("conditional table ") + phase_letter(phase) + "|" + given_);
}

FallbackPolicy FallbackPolicy::great_circle(double detour) {
  if (!(detour >= 1.0) || !std::isfinite(detour)) {
    throw ArgumentError("great-circle detour factor must be >= 1");
  }
  return {Kind::GreatCircle, detour};
}

FallbackPolicy FallbackPolicy::parse(std::string_view text) {
  if (text == "error") return error();
  constexpr std::string_view prefix = "great-circle";
  if (text.substr(0, prefix.size()) != prefix) {
    throw ArgumentError("fallback must be 'error' or 'great-circle[:<factor>]', got '" + std::string(text) + "'");
  }
  auto rest = text.substr(prefix.size());
  if (rest.empty()) return great_circle();
  if (rest.front() != ':') throw ArgumentError("malformed fallback '" + std::string(text) + "'");
  rest.remove_prefix(1);
  double factor = 0.0;
  auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), factor);
  if (ec != std::errc() || ptr != rest.data() + rest.size()) {
    throw ArgumentError("malformed detour factor in '" + std::string(text) + "'");
  }
  return great_circle(factor);
}

std::string FallbackPolicy::to_string() const {
  if (kind == Kind::Error) return "error";
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, detour_factor);
  return "great-circle:" + std::string(buf, res.ptr);
}

std::optional<NodeIndex> SupplyNetwork::find_node(std::string_view id) const {
  auto it = node_lookup_.find(std::string(id));
  if (it == node_lookup_.end()) return std::nullopt;
  return NodeIndex{it->second};
}

NodeIndex SupplyNetwork::node_index(std::string_view id) const {
  if (auto idx = find_node(id)) return *idx;
  throw ReferenceError("unknown node id '" + std::string(id) + "'");
}

std::optional<std::size_t> SupplyNetwork::find_chemistry(std::string_view id) const {
  for (std::size_t c = 0; c < data_.chemistries.size(); ++c) {
    if (data_.chemistries[c].id == id) return c;
  }
  return std::nullopt;
}

const BatteryChemistry& SupplyNetwork::chemistry(std::string_view id) const {
  if (auto c = find_chemistry(id)) return data_.chemistries[*c];
  throw ArgumentError("unknown chemistry '" + std::string(id) + "'");
}

const ChemistryPlan& SupplyNetwork::plan(std::string_view chemistry_id) const {
  if (auto c = find_chemistry(chemistry_id)) return plans_[*c];
  throw ArgumentError("unknown chemistry '" + std::string(chemistry_id) + "'");
}

const ChoiceTable* SupplyNetwork::find_choice_table(Phase phase, std::string_view decision) const {
  for (const auto& t : data_.choice_tables) {
    if (t.phase() == phase && t.decision() == decision) return &t;
  }
  return nullptr;
}

const ConditionalChoiceTable* SupplyNetwork::find_conditional(Phase phase, std::string_view given) const {
  for (const auto& t : data_.conditional_tables) {
    if (t.phase() == phase && t.given() == given) return &t;
  }
  return nullptr;
}

const DecisionPlan* SupplyNetwork::vehicle_row(NodeIndex battery_node) const {
  if (battery_node.value >= vehicle_rows_.size() || !vehicle_rows_[battery_node.value]) return nullptr;
  return &*vehicle_rows_[battery_node.value];
}

const DecisionPlan* SupplyNetwork::market_row(NodeIndex vehicle_node) const {
  if (vehicle_node.value >= market_rows_.size() || !market_rows_[vehicle_node.value]) return nullptr;
  return &*market_rows_[vehicle_node.value];
}

LinkSet::LinkSet(const std::vector<TransportLink>& links) {
  for (const auto& link : links) links_.insert_or_assign({link.origin, link.destination}, link);
}

const TransportLink* LinkSet::find(std::string_view origin, std::string_view destination) const {
  auto it = links_.find(std::pair{std::string(origin), std::string(destination)});
  if (it != links_.end()) return &it->second;
  it = links_.find(std::pair{std::string(destination), std::string(origin)});
  if (it != links_.end()) return &it->second;
  return nullptr;
}

double scenario_weight(const BatteryChemistry& chemistry, Transition transition,
                       std::optional<std::string_view> mineral) {
  const bool mineral_leg = transition == Transition::EP || transition == Transition::PB;
  if (!mineral_leg) {
    if (mineral) {
      throw ArgumentError("a mineral is meaningless for the " + std::string(transition_name(transition)) + " leg");
    }
    return transition == Transition::BV ? chemistry.battery_mass_per_kwh : chemistry.vehicle_mass_per_kwh;
  }
  if (!mineral) {
    throw ArgumentError("the " + std::string(transition_name(transition)) + " leg needs a mineral");
  }
  const auto& masses = transition == Transition::EP ? chemistry.mineral_mass : chemistry.processed_mass;
  auto it = masses.find(std::string(*mineral));
  if (it == masses.end()) {
    throw MissingMassError("chemistry '" + chemistry.id + "' has no mass for mineral '" + std::string(*mineral) + "'");
  }
  return it->second;
}

}  // namespace evchain
