#include "doctest.h"

#include <cmath>
#include <random>

#include "evchain/engine.hpp"
#include "evchain/errors.hpp"
#include "evchain/massflow.hpp"
#include "support.hpp"

using namespace evchain;
using namespace evchain::testing;

TEST_CASE("singleton ledger carries the chemistry mass") {
  const auto net = build_network(singleton_data(), {});
  FlowLedger ledger(0);
  for (std::uint64_t n = 0; n < 5; ++n) accumulate(ledger, net, sample_scenario(net, "C", 9, n));
  CHECK(ledger.iterations() == 5);
  CHECK(ledger.total_per_basis() == doctest::Approx(3600.0));
  const auto flows = ledger.per_basis();
  CHECK(flows.at({net.node_index("E1"), net.node_index("P1"), Transition::EP}) == doctest::Approx(1000.0));
  CHECK(flows.at({net.node_index("V1"), net.node_index("M1"), Transition::VM}) == doctest::Approx(1500.0));

  const auto share = market_share(ledger, net, Phase::Extraction);
  CHECK(share.size() == 1);
  CHECK(share.at("A") == 1.0);
  CHECK(market_share(ledger, net, Phase::Market).at("D") == 1.0);

  const auto balance = flow_balance(ledger, net);
  CHECK(balance.at("A") == doctest::Approx(500.0));
  CHECK(balance.at("B") == doctest::Approx(100.0));
  CHECK(balance.at("C") == doctest::Approx(900.0));
  CHECK(balance.at("D") == doctest::Approx(-1500.0));

  const auto domestic = domestic_fraction(ledger, net);
  CHECK(domestic.at("A") == doctest::Approx(1000.0 / 1500.0));
  CHECK(domestic.at("D") == 0.0);

  FlowLedger other(1);
  CHECK_THROWS_AS(accumulate(other, net, sample_scenario(net, "C", 9, 0)), ArgumentError);
  CHECK_THROWS_AS(ledger.merge(other), ArgumentError);
}

TEST_CASE("hand-built ledgers") {
  const auto net = build_network(tiny_data(false), {});
  const auto ea1 = net.node_index("Ea1");  // R1
  const auto ea2 = net.node_index("Ea2");  // R2
  const auto eb2 = net.node_index("Eb2");  // R1
  const auto pa1 = net.node_index("Pa1");  // R5

  SUBCASE("two equal-mass origins split the share") {
    FlowLedger l(0);
    l.add({ea1, pa1, Transition::EP}, 0.5);
    l.add({ea2, pa1, Transition::EP}, 0.5);
    l.count_iteration();
    const auto share = market_share(l, net, Phase::Extraction);
    CHECK(share.at("R1") == 0.5);
    CHECK(share.at("R2") == 0.5);
  }
  SUBCASE("one cross-region link") {
    FlowLedger l(0);
    l.add({ea1, pa1, Transition::EP}, 0.4);
    l.count_iteration();
    const auto balance = flow_balance(l, net);
    CHECK(balance.at("R1") == doctest::Approx(40.0));
    CHECK(balance.at("R5") == doctest::Approx(-40.0));
    CHECK(domestic_fraction(l, net).at("R1") == 0.0);
  }
  SUBCASE("fully domestic and mixed regions") {
    FlowLedger l(0);
    l.add({ea1, eb2, Transition::EP}, 0.4);
    CHECK(domestic_fraction(l, net).at("R1") == 1.0);
    l.add({ea1, pa1, Transition::EP}, 0.1);
    const auto d = domestic_fraction(l, net);
    CHECK(d.at("R1") == doctest::Approx(0.8));
    CHECK(d.at("R5") == 0.0);
  }
  SUBCASE("merging splits is the same as one ledger") {
    FlowLedger a(0), b(0), whole(0);
    for (std::uint64_t n = 0; n < 100; ++n) {
      const auto s = sample_scenario(net, "T", 4, n);
      accumulate(n < 37 ? a : b, net, s);
      accumulate(whole, net, s);
    }
    a.merge(b);
    CHECK(a.iterations() == whole.iterations());
    for (const auto& [key, kg] : whole.sums()) CHECK(a.sums().at(key) == doctest::Approx(kg));
  }
}

TEST_CASE("conservation on random networks") {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    const auto net = build_network(testing::random_data(rng), {});
    SimulationOptions opts;
    opts.iterations = 3000;
    opts.seed = static_cast<std::uint64_t>(trial);
    const auto run = run_chemistry(net, "R", opts);
    const auto report = resilience_report(run.ledger, net);

    double balance = 0.0;
    double scale = 0.0;
    for (const auto& [region, v] : report.flow_balance) {
      balance += v;
      scale += std::abs(v);
    }
    CHECK(std::abs(balance) <= 1e-6 * std::max(1.0, scale));

    for (Phase phase : kAllPhases) {
      double shares = 0.0;
      for (const auto& [key, v] : report.market_share) {
        if (key.first == phase) shares += v;
      }
      CHECK(std::abs(shares - 1.0) <= 1e-9);
    }
    for (const auto& [region, f] : report.domestic_fraction) {
      CHECK(f >= 0.0);
      CHECK(f <= 1.0);
    }

    const auto& chem = net.chemistry("R");
    double per_kwh = chem.battery_mass_per_kwh + chem.vehicle_mass_per_kwh;
    for (const auto& [m, w] : chem.mineral_mass) per_kwh += w + chem.processed_mass.at(m);
    CHECK(report.total_mass_per_basis == doctest::Approx(100.0 * per_kwh).epsilon(1e-9));
  }
}
