#include "evchain/massflow.hpp"

#include "evchain/errors.hpp"

namespace evchain {

void FlowLedger::merge(const FlowLedger& other) {
  if (other.chemistry_ != chemistry_) throw ArgumentError("cannot merge ledgers of different chemistries");
  for (const auto& [key, kg] : other.sums_) sums_[key] += kg;
  iterations_ += other.iterations_;
}

std::map<FlowKey, double> FlowLedger::per_kwh() const {
  std::map<FlowKey, double> out;
  if (iterations_ == 0) return out;
  const double n = static_cast<double>(iterations_);
  for (const auto& [key, kg] : sums_) out.emplace(key, kg / n);
  return out;
}

std::map<FlowKey, double> FlowLedger::per_basis() const {
  auto out = per_kwh();
  for (auto& [key, kg] : out) kg *= kwh_basis_;
  return out;
}

double FlowLedger::total_per_basis() const {
  double total = 0.0;
  for (const auto& [key, kg] : per_basis()) total += kg;
  return total;
}

void accumulate(FlowLedger& ledger, const SupplyNetwork& network, const Scenario& scenario) {
  if (scenario.chemistry != ledger.chemistry()) {
    throw ArgumentError("scenario chemistry does not match the ledger");
  }
  const auto& plan = network.plan(scenario.chemistry);
  const auto& chem = network.chemistries()[scenario.chemistry];
  for (std::size_t i = 0; i < plan.minerals.size(); ++i) {
    const auto& mineral = plan.minerals[i];
    const auto& r = scenario.routes.at(i);
    ledger.add({r.extraction, r.processing, Transition::EP}, chem.mineral_mass.at(mineral));
    ledger.add({r.processing, scenario.battery, Transition::PB}, chem.processed_mass.at(mineral));
  }
  ledger.add({scenario.battery, scenario.vehicle, Transition::BV}, chem.battery_mass_per_kwh);
  ledger.add({scenario.vehicle, scenario.market, Transition::VM}, chem.vehicle_mass_per_kwh);
  ledger.count_iteration();
}

std::map<std::string, double> market_share(const FlowLedger& ledger, const SupplyNetwork& network, Phase phase) {
  const bool consumed = phase == Phase::Market;
  const Transition leg = consumed ? Transition::VM : static_cast<Transition>(static_cast<int>(phase));
  std::map<std::string, double> mass;
  double total = 0.0;
  for (const auto& [key, kg] : ledger.sums()) {
    if (key.transition != leg) continue;
    const auto& node = network.node(consumed ? key.destination : key.origin);
    mass[node.region] += kg;
    total += kg;
  }
  if (total > 0.0) {
    for (auto& [region, kg] : mass) kg /= total;
  }
  return mass;
}

std::map<std::string, double> flow_balance(const FlowLedger& ledger, const SupplyNetwork& network) {
  std::map<std::string, double> balance;
  for (const auto& [key, kg] : ledger.per_basis()) {
    const auto& from = network.node(key.origin).region;
    const auto& to = network.node(key.destination).region;
    if (from == to) {
      balance.try_emplace(from, 0.0);
      continue;
    }
    balance[from] += kg;
    balance[to] -= kg;
  }
  return balance;
}

std::map<std::string, double> domestic_fraction(const FlowLedger& ledger, const SupplyNetwork& network) {
  std::map<std::string, double> internal;
  std::map<std::string, double> touching;
  for (const auto& [key, kg] : ledger.sums()) {
    const auto& from = network.node(key.origin).region;
    const auto& to = network.node(key.destination).region;
    touching[from] += kg;
    if (from == to) {
      internal[from] += kg;
    } else {
      touching[to] += kg;
    }
  }
  std::map<std::string, double> out;
  for (const auto& [region, kg] : touching) {
    if (kg > 0.0) out.emplace(region, internal[region] / kg);
  }
  return out;
}

ResilienceReport resilience_report(const FlowLedger& ledger, const SupplyNetwork& network) {
  ResilienceReport report;
  for (Phase phase : kAllPhases) {
    for (const auto& [region, share] : market_share(ledger, network, phase)) {
      report.market_share.emplace(std::pair{phase, region}, share);
    }
  }
  report.domestic_fraction = domestic_fraction(ledger, network);
  report.flow_balance = flow_balance(ledger, network);
  report.total_mass_per_basis = ledger.total_per_basis();
  return report;
}

}  // namespace evchain
