#include "evchain/sampler.hpp"

#include <algorithm>
#include <string>

#include "evchain/errors.hpp"

namespace evchain {

std::size_t sample_index(std::span<const double> cdf, double u) {
  if (cdf.empty()) throw EmptyChoiceError("cannot sample from an empty choice set");
  // For u > 0 lower_bound already skips zero-width entries; at u == 0 the
  // first entry with positive mass is the first F_j > 0.
  auto it = u > 0.0 ? std::lower_bound(cdf.begin(), cdf.end(), u) : std::upper_bound(cdf.begin(), cdf.end(), 0.0);
  if (it == cdf.end()) --it;  // u >= 1 never comes from RandomStream; clamp anyway
  return static_cast<std::size_t>(it - cdf.begin());
}

std::size_t sample_conditional_index(std::span<const ConditionalChoiceTable> rows, Phase phase,
                                     std::string_view given, double u) {
  for (const auto& row : rows) {
    if (row.phase() == phase && row.given() == given) return sample_index(row.cdf(), u);
  }
  throw CoverageError(std::string("no ") + phase_letter(phase) + " row for given node '" + std::string(given) + "'");
}

Scenario sample_scenario(const SupplyNetwork& network, std::size_t chemistry, RandomStream& stream) {
  const auto& plan = network.plan(chemistry);
  Scenario s;
  s.chemistry = chemistry;
  s.iteration_index = stream.iteration_index();
  s.routes.resize(plan.minerals.size());
  for (std::size_t i = 0; i < plan.minerals.size(); ++i) {
    const auto& e = plan.extraction[i];
    s.routes[i].extraction = e.nodes[sample_index(e.cdf, stream.next())];
  }
  for (std::size_t i = 0; i < plan.minerals.size(); ++i) {
    const auto& p = plan.processing[i];
    s.routes[i].processing = p.nodes[sample_index(p.cdf, stream.next())];
  }
  s.battery = plan.battery.nodes[sample_index(plan.battery.cdf, stream.next())];

  const auto* vrow = network.vehicle_row(s.battery);
  if (!vrow) throw CoverageError("no V row for battery node '" + network.node(s.battery).id + "'");
  s.vehicle = vrow->nodes[sample_index(vrow->cdf, stream.next())];

  const auto* mrow = network.market_row(s.vehicle);
  if (!mrow) throw CoverageError("no M row for vehicle node '" + network.node(s.vehicle).id + "'");
  s.market = mrow->nodes[sample_index(mrow->cdf, stream.next())];
  return s;
}

Scenario sample_scenario(const SupplyNetwork& network, std::string_view chemistry, std::uint64_t master_seed,
                         std::uint64_t iteration_index) {
  auto c = network.find_chemistry(chemistry);
  if (!c) throw ArgumentError("unknown chemistry '" + std::string(chemistry) + "'");
  RandomStream stream(master_seed, iteration_index);
  return sample_scenario(network, *c, stream);
}

}  // namespace evchain
