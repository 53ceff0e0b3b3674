#include "evchain/emissions.hpp"

#include <algorithm>
#include <cmath>

#include "evchain/errors.hpp"

namespace evchain {

LegEmission leg_emissions(double weight_kg, const ResolvedLeg& leg, const EmissionFactors& factors) {
  const double tonnes = weight_kg / 1000.0;
  LegEmission out;
  if (leg.land_km > 0.0) out.land = tonnes * (leg.land_km * factors.land_factor(leg.land_vehicle));
  if (leg.sea_km > 0.0) out.sea = tonnes * (leg.sea_km * factors.sea_factor(leg.sea_vessel));
  return out;
}

double link_emissions(double weight_kg, double land_km, double sea_km, LandVehicle land_vehicle,
                      SeaVessel sea_vessel, const EmissionFactors& factors) {
  if (weight_kg < 0.0 || land_km < 0.0 || sea_km < 0.0) {
    throw ArgumentError("weight and distances must be >= 0");
  }
  return leg_emissions(weight_kg, ResolvedLeg{land_km, sea_km, sea_vessel, land_vehicle}, factors).total();
}

EmissionRecord scenario_emissions(const SupplyNetwork& network, const Scenario& scenario) {
  const auto& plan = network.plan(scenario.chemistry);
  const auto& chem = network.chemistries()[scenario.chemistry];
  const auto& factors = network.factors();

  EmissionRecord rec;
  rec.iteration_index = scenario.iteration_index;
  rec.chemistry = scenario.chemistry;
  rec.scenario = scenario;
  rec.by_link.reserve(2 * plan.minerals.size() + 2);

  auto add = [&](NodeIndex from, NodeIndex to, Transition t, double weight) {
    const auto leg = network.leg(from, to, t);
    const auto e = leg_emissions(weight, leg, factors);
    const auto ti = static_cast<std::size_t>(t);
    rec.by_phase[ti] += e.total();
    rec.by_mode[static_cast<std::size_t>(TransportMode::Land)] += e.land;
    rec.by_mode[static_cast<std::size_t>(TransportMode::Sea)] += e.sea;
    if (leg.land_km > 0.0) rec.by_link.push_back({from, to, t, TransportMode::Land, e.land});
    if (leg.sea_km > 0.0) rec.by_link.push_back({from, to, t, TransportMode::Sea, e.sea});
  };

  for (std::size_t i = 0; i < plan.minerals.size(); ++i) {
    const auto& mineral = plan.minerals[i];
    const auto& route = scenario.routes.at(i);
    add(route.extraction, route.processing, Transition::EP, chem.mineral_mass.at(mineral));
    add(route.processing, scenario.battery, Transition::PB, chem.processed_mass.at(mineral));
  }
  add(scenario.battery, scenario.vehicle, Transition::BV, chem.battery_mass_per_kwh);
  add(scenario.vehicle, scenario.market, Transition::VM, chem.vehicle_mass_per_kwh);

  rec.total = ((rec.by_phase[0] + rec.by_phase[1]) + rec.by_phase[2]) + rec.by_phase[3];
  return rec;
}

double pairwise_sum(std::span<const double> values) noexcept {
  constexpr std::size_t kLeaf = 8;
  if (values.size() <= kLeaf) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t half = values.size() / 2;
  return pairwise_sum(values.first(half)) + pairwise_sum(values.subspan(half));
}

std::int64_t bin_of(double value, double bin_width) noexcept {
  return static_cast<std::int64_t>(std::floor(value / bin_width));
}

Pmf pmf_from_counts(const std::map<std::int64_t, std::uint64_t>& counts, double bin_width) {
  if (!(bin_width > 0.0)) throw ArgumentError("bin width must be > 0");
  std::uint64_t total = 0;
  for (const auto& [bin, n] : counts) total += n;
  if (total == 0) throw EmptyError("cannot build a PMF from no observations");
  Pmf pmf;
  pmf.bin_width = bin_width;
  for (const auto& [bin, n] : counts) {
    pmf.bins.emplace(bin, static_cast<double>(n) / static_cast<double>(total));
  }
  return pmf;
}

Pmf build_pmf(std::span<const double> values, double bin_width) {
  if (!(bin_width > 0.0)) throw ArgumentError("bin width must be > 0");
  if (values.empty()) throw EmptyError("cannot build a PMF from no observations");
  std::map<std::int64_t, std::uint64_t> counts;
  for (double v : values) ++counts[bin_of(v, bin_width)];
  return pmf_from_counts(counts, bin_width);
}

ConvergenceReport cumulative_average(std::span<const double> totals, std::span<const std::uint64_t> checkpoints) {
  if (totals.empty()) throw EmptyError("cumulative average of an empty sequence");
  std::vector<std::uint64_t> points;
  for (auto n : checkpoints) {
    if (n >= 1 && n <= totals.size()) points.push_back(n);
  }
  points.push_back(totals.size());
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  ConvergenceReport report;
  for (auto n : points) {
    report.checkpoints.emplace_back(n, pairwise_sum(totals.first(n)) / static_cast<double>(n));
  }
  for (std::size_t i = 1; i < report.checkpoints.size(); ++i) {
    const double prev = report.checkpoints[i - 1].second;
    const double cur = report.checkpoints[i].second;
    report.relative_change.push_back(prev == 0.0 ? (cur == 0.0 ? 0.0 : INFINITY) : std::abs(cur - prev) / prev);
  }
  return report;
}

ConvergenceReport cumulative_average(std::span<const EmissionRecord> records,
                                     std::span<const std::uint64_t> checkpoints) {
  if (records.empty()) throw EmptyError("cumulative average of an empty sequence");
  std::vector<double> totals;
  totals.reserve(records.size());
  for (const auto& r : records) {
    if (r.chemistry != records.front().chemistry) {
      throw ArgumentError("cumulative average mixes chemistries");
    }
    totals.push_back(r.total);
  }
  return cumulative_average(std::span<const double>(totals), checkpoints);
}

}  // namespace evchain
