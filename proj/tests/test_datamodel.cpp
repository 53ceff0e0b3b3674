#include "doctest.h"

#include <cmath>

#include "evchain/datamodel.hpp"
#include "evchain/errors.hpp"

using namespace evchain;

TEST_CASE("phase letters round trip and transitions join adjacent phases") {
  for (Phase p : kAllPhases) {
    const char c = phase_letter(p);
    CHECK(phase_from_letter(std::string_view(&c, 1)) == p);
  }
  CHECK_FALSE(phase_from_letter("X").has_value());
  for (Transition t : kAllTransitions) {
    CHECK(static_cast<int>(destination_phase(t)) == static_cast<int>(origin_phase(t)) + 1);
    CHECK(transition_between(origin_phase(t), destination_phase(t)) == t);
  }
  CHECK_FALSE(transition_between(Phase::Extraction, Phase::BatteryProduction).has_value());
  CHECK(transition_name(Transition::VM) == "VM");
}

TEST_CASE("vessel and vehicle names parse back") {
  for (auto v : {SeaVessel::None, SeaVessel::BulkCarrier, SeaVessel::ContainerShip, SeaVessel::VehicleCarrier}) {
    CHECK(parse_vessel(vessel_name(v)) == v);
  }
  for (auto v : {LandVehicle::None, LandVehicle::HeavyGoodsDiesel, LandVehicle::ArticulatedVehicleTransport}) {
    CHECK(parse_vehicle(vehicle_name(v)) == v);
  }
  CHECK(parse_vessel("") == SeaVessel::None);
  CHECK_FALSE(parse_vessel("Canoe").has_value());
}

TEST_CASE("choice distributions validate and build an inclusive cdf") {
  SUBCASE("probabilities summing to 0.8 are rejected") {
    CHECK_THROWS_AS(ChoiceDistribution::from_options({{"A", 0.5}, {"B", 0.3}}, "t"), ProbabilityError);
  }
  SUBCASE("negative, non-finite and empty inputs are rejected") {
    CHECK_THROWS_AS(ChoiceDistribution::from_options({{"A", 1.2}, {"B", -0.2}}, "t"), ProbabilityError);
    CHECK_THROWS_AS(ChoiceDistribution::from_options({{"A", std::nan("")}}, "t"), ProbabilityError);
    CHECK_THROWS_AS(ChoiceDistribution::from_options({}, "t"), ProbabilityError);
  }
  SUBCASE("sums inside the band are renormalized and the cdf ends at exactly 1") {
    auto d = ChoiceDistribution::from_options({{"A", 0.2}, {"B", 0.3000004}, {"C", 0.5}}, "t");
    CHECK(d.cdf().back() == 1.0);
    CHECK(d.cdf()[0] == doctest::Approx(0.2).epsilon(1e-6));
    double sum = 0.0;
    for (const auto& o : d.options()) sum += o.probability;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("trailing zero-probability options share the final cdf value") {
    auto d = ChoiceDistribution::from_options({{"A", 0.4}, {"B", 0.6}, {"C", 0.0}}, "t");
    CHECK(d.cdf() == std::vector<double>{0.4, 1.0, 1.0});
    CHECK(d.support_size() == 2);
  }
}

TEST_CASE("choice tables are restricted to their phases") {
  CHECK_THROWS_AS(ChoiceTable(Phase::Market, "x", {{"A", 1.0}}), ArgumentError);
  CHECK_THROWS_AS(ConditionalChoiceTable(Phase::Extraction, "x", {{"A", 1.0}}), ArgumentError);
  ChoiceTable t(Phase::Extraction, "lithium", {{"A", 1.0}});
  CHECK(t.decision() == "lithium");
}

namespace {

BatteryChemistry lithium_chemistry() {
  BatteryChemistry c;
  c.id = "NMC";
  c.mineral_mass = {{"lithium", 6.0}, {"nickel", 3.0}};
  c.processed_mass = {{"lithium", 0.7}, {"nickel", 0.8}};
  c.battery_mass_per_kwh = 7.0;
  c.vehicle_mass_per_kwh = 25.0;
  return c;
}

}  // namespace

TEST_CASE("scenario weights read the chemistry masses") {
  const auto c = lithium_chemistry();
  CHECK(scenario_weight(c, Transition::EP, "lithium") == 6.0);
  CHECK(scenario_weight(c, Transition::PB, "lithium") == 0.7);
  CHECK(scenario_weight(c, Transition::BV, std::nullopt) == c.battery_mass_per_kwh);
  CHECK(scenario_weight(c, Transition::VM, std::nullopt) == 25.0);
  CHECK_THROWS_AS(scenario_weight(c, Transition::EP, "cobalt"), MissingMassError);
  CHECK_THROWS_AS(scenario_weight(c, Transition::BV, "lithium"), ArgumentError);
  CHECK_THROWS_AS(scenario_weight(c, Transition::EP, std::nullopt), ArgumentError);
}

TEST_CASE("chemistry subset lists minerals with mass in id order") {
  auto c = lithium_chemistry();
  c.mineral_mass["cobalt"] = 0.0;
  CHECK(c.subset() == std::vector<std::string>{"lithium", "nickel"});
}

TEST_CASE("emission factors by vessel and vehicle") {
  EmissionFactors f{0.1, 0.2, 0.3, 0.4, 0.5};
  CHECK(f.sea_factor(SeaVessel::BulkCarrier) == 0.1);
  CHECK(f.sea_factor(SeaVessel::ContainerShip) == 0.2);
  CHECK(f.sea_factor(SeaVessel::VehicleCarrier) == 0.3);
  CHECK(f.land_factor(LandVehicle::HeavyGoodsDiesel) == 0.4);
  CHECK(f.land_factor(LandVehicle::ArticulatedVehicleTransport) == 0.5);
  CHECK_THROWS_AS(f.sea_factor(SeaVessel::None), ModeMissingError);
  CHECK_THROWS_AS(f.land_factor(LandVehicle::None), ModeMissingError);
}

TEST_CASE("fallback policy text form") {
  CHECK(FallbackPolicy::parse("error").kind == FallbackPolicy::Kind::Error);
  const auto gc = FallbackPolicy::parse("great-circle");
  CHECK(gc.kind == FallbackPolicy::Kind::GreatCircle);
  CHECK(gc.detour_factor == 1.2);
  CHECK(FallbackPolicy::parse("great-circle:1.5").detour_factor == 1.5);
  CHECK(FallbackPolicy::parse(FallbackPolicy::great_circle(1.35).to_string()) == FallbackPolicy::great_circle(1.35));
  CHECK_THROWS_AS(FallbackPolicy::parse("great-circle:0.9"), ArgumentError);
  CHECK_THROWS_AS(FallbackPolicy::parse("teleport"), ArgumentError);
}

TEST_CASE("link set falls back to the reverse direction") {
  LinkSet links({{"A", "B", 10.0, 0.0, SeaVessel::None, LandVehicle::HeavyGoodsDiesel},
                 {"B", "C", 0.0, 5.0, SeaVessel::ContainerShip, LandVehicle::None},
                 {"C", "B", 0.0, 7.0, SeaVessel::ContainerShip, LandVehicle::None}});
  REQUIRE(links.find("B", "A") != nullptr);
  CHECK(links.find("B", "A")->land_km == 10.0);
  CHECK(links.find("C", "B")->sea_km == 7.0);
  CHECK(links.find("A", "C") == nullptr);
}
