#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>

#include "evchain/datamodel.hpp"
#include "evchain/sampler.hpp"

namespace evchain {

struct FlowKey {
  NodeIndex origin;
  NodeIndex destination;
  Transition transition = Transition::EP;

  friend auto operator<=>(const FlowKey&, const FlowKey&) = default;
};

inline constexpr double kDefaultKwhBasis = 100.0;

// Accumulated O-D mass transfers for one chemistry. Sums are kept raw and
// divided by the iteration count on read, so partial ledgers merge exactly.
class FlowLedger {
 public:
  explicit FlowLedger(std::size_t chemistry, double kwh_basis = kDefaultKwhBasis)
      : chemistry_(chemistry), kwh_basis_(kwh_basis) {}

  std::size_t chemistry() const noexcept { return chemistry_; }
  double kwh_basis() const noexcept { return kwh_basis_; }
  std::uint64_t iterations() const noexcept { return iterations_; }
  bool empty() const noexcept { return sums_.empty(); }

  void add(const FlowKey& key, double kg_per_kwh) { sums_[key] += kg_per_kwh; }
  void count_iteration(std::uint64_t n = 1) noexcept { iterations_ += n; }
  void merge(const FlowLedger& other);

  const std::map<FlowKey, double>& sums() const noexcept { return sums_; }
  // Mean kg per kWh over iterations.
  std::map<FlowKey, double> per_kwh() const;
  // Mean kg per kwh_basis kWh.
  std::map<FlowKey, double> per_basis() const;
  double total_per_basis() const;

 private:
  std::size_t chemistry_;
  double kwh_basis_;
  std::uint64_t iterations_ = 0;
  std::map<FlowKey, double> sums_;
};

// Adds the four transfers of one scenario: w_E,i on E->P, w_P,i on P->B,
// w_B on B->V and w_V on V->M. Throws ArgumentError on a chemistry mismatch.
void accumulate(FlowLedger& ledger, const SupplyNetwork& network, const Scenario& scenario);

// Share of the phase's mass by region: mass leaving phase nodes for
// E, P, B, V; mass arriving at market nodes for M.
std::map<std::string, double> market_share(const FlowLedger& ledger, const SupplyNetwork& network, Phase phase);

// Exports minus imports per region, in kg per basis.
std::map<std::string, double> flow_balance(const FlowLedger& ledger, const SupplyNetwork& network);

// Mass on links internal to a region over mass on links touching it. Regions
// with no touching mass are omitted.
std::map<std::string, double> domestic_fraction(const FlowLedger& ledger, const SupplyNetwork& network);

struct ResilienceReport {
  std::map<std::pair<Phase, std::string>, double> market_share;
  std::map<std::string, double> domestic_fraction;
  std::map<std::string, double> flow_balance;
  double total_mass_per_basis = 0.0;
};

ResilienceReport resilience_report(const FlowLedger& ledger, const SupplyNetwork& network);

}  // namespace evchain
