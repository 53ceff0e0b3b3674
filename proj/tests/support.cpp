#include "support.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <iterator>
#include <limits>
#include <sstream>

#include <unistd.h>

namespace evchain::testing {

namespace fs = std::filesystem;

fs::path source_dir() { return EVCHAIN_SOURCE_DIR; }
fs::path bundled_manifest() { return source_dir() / "data" / "synthetic" / "manifest.json"; }
fs::path bundled_scenario() { return source_dir() / "data" / "synthetic" / "optimization.json"; }

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = fs::temp_directory_path() /
          ("evchain-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
  fs::remove_all(path_);
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

Node make_node(std::string id, std::string region, std::string roles, double lat, double lon) {
  Node n;
  n.id = std::move(id);
  n.name = n.id;
  n.region = std::move(region);
  n.latitude = lat;
  n.longitude = lon;
  for (char c : roles) n.roles.insert(*phase_from_letter(std::string_view(&c, 1)));
  return n;
}

namespace {

EmissionFactors unit_factors() {
  EmissionFactors f;
  f.gamma1 = 0.01;
  f.gamma2 = 0.01;
  f.gamma3 = 0.02;
  f.beta1 = 0.1;
  f.beta2 = 0.1;
  return f;
}

std::vector<ChoiceOption> opts(std::initializer_list<std::pair<const char*, double>> list) {
  std::vector<ChoiceOption> out;
  for (const auto& [id, p] : list) out.push_back({id, p});
  return out;
}

}  // namespace

NetworkData singleton_data() {
  NetworkData d;
  d.nodes = {make_node("E1", "A", "E", 0, 0), make_node("P1", "A", "P", 0, 1), make_node("B1", "B", "B", 0, 2),
             make_node("V1", "C", "V", 0, 3), make_node("M1", "D", "M", 0, 4)};
  d.minerals = {{"lithium", "Lithium"}};
  BatteryChemistry c;
  c.id = "C";
  c.mineral_mass = {{"lithium", 10.0}};
  c.processed_mass = {{"lithium", 5.0}};
  c.battery_mass_per_kwh = 6.0;
  c.vehicle_mass_per_kwh = 15.0;
  d.chemistries = {c};
  d.choice_tables = {ChoiceTable(Phase::Extraction, "lithium", opts({{"E1", 1.0}})),
                     ChoiceTable(Phase::Processing, "lithium", opts({{"P1", 1.0}})),
                     ChoiceTable(Phase::BatteryProduction, "battery", opts({{"B1", 1.0}}))};
  d.conditional_tables = {ConditionalChoiceTable(Phase::VehicleProduction, "B1", opts({{"V1", 1.0}})),
                          ConditionalChoiceTable(Phase::Market, "V1", opts({{"M1", 1.0}}))};
  d.links = {{"E1", "P1", 100.0, 0.0, SeaVessel::None, LandVehicle::HeavyGoodsDiesel},
             {"P1", "B1", 0.0, 1000.0, SeaVessel::BulkCarrier, LandVehicle::None},
             {"B1", "V1", 0.0, 500.0, SeaVessel::ContainerShip, LandVehicle::None},
             {"V1", "M1", 0.0, 2000.0, SeaVessel::VehicleCarrier, LandVehicle::None}};
  d.factors = unit_factors();
  d.manufacturers = {{"CellCo", ManufacturerKind::BatteryMaker, {"B1"}},
                     {"CarCo", ManufacturerKind::CarMaker, {"V1"}}};
  d.sales = {{"M1", "C", 2.0}};
  return d;
}

NetworkData tiny_data(bool skewed) {
  NetworkData d;
  d.nodes = {make_node("Ea1", "R1", "E", -30, 120),  make_node("Ea2", "R2", "E", -20, -70),
             make_node("Eb1", "R3", "E", -10, 25),   make_node("Eb2", "R1", "E", -2, 121),
             make_node("Eb3", "R4", "E", 45, -80),   make_node("Pa1", "R5", "P", 28, 115),
             make_node("Pa2", "R2", "P", -23, -70.5), make_node("Pb1", "R5", "P", 23, 113),
             make_node("Pb2", "R6", "P", 64, 23),    make_node("B1", "R5", "B", 27, 119.5),
             make_node("B2", "R6", "B", 51, 17),     make_node("V1", "R5", "V", 31, 121.5),
             make_node("V2", "R6", "V", 52, 10.8),   make_node("V3", "R6", "V", 50.4, 3.1),
             make_node("V4", "R4", "V", 42, -83),    make_node("M1", "R5", "M", 40, 116),
             make_node("M2", "R6", "M", 48, 11.6),   make_node("M3", "R4", "M", 34, -118)};
  d.minerals = {{"a", "Mineral A"}, {"b", "Mineral B"}};
  BatteryChemistry c;
  c.id = "T";
  c.mineral_mass = {{"a", 6.0}, {"b", 3.0}};
  c.processed_mass = {{"a", 0.7}, {"b", 1.5}};
  c.battery_mass_per_kwh = 7.0;
  c.vehicle_mass_per_kwh = 25.0;
  d.chemistries = {c};
  auto pick = [skewed](std::initializer_list<std::pair<const char*, double>> skew,
                       std::initializer_list<const char*> ids) {
    if (skewed) return opts(skew);
    std::vector<ChoiceOption> out;
    for (auto id : ids) out.push_back({id, 1.0 / static_cast<double>(ids.size())});
    return out;
  };
  d.choice_tables = {
      ChoiceTable(Phase::Extraction, "a", pick({{"Ea1", 0.9}, {"Ea2", 0.1}}, {"Ea1", "Ea2"})),
      ChoiceTable(Phase::Extraction, "b", pick({{"Eb1", 0.8}, {"Eb2", 0.15}, {"Eb3", 0.05}}, {"Eb1", "Eb2", "Eb3"})),
      ChoiceTable(Phase::Processing, "a", pick({{"Pa1", 0.85}, {"Pa2", 0.15}}, {"Pa1", "Pa2"})),
      ChoiceTable(Phase::Processing, "b", pick({{"Pb1", 0.9}, {"Pb2", 0.1}}, {"Pb1", "Pb2"})),
      ChoiceTable(Phase::BatteryProduction, "battery", pick({{"B1", 0.8}, {"B2", 0.2}}, {"B1", "B2"}))};
  d.conditional_tables = {
      ConditionalChoiceTable(Phase::VehicleProduction, "B1", pick({{"V1", 0.9}, {"V2", 0.1}}, {"V1", "V2"})),
      ConditionalChoiceTable(Phase::VehicleProduction, "B2", pick({{"V3", 0.75}, {"V4", 0.25}}, {"V3", "V4"})),
      ConditionalChoiceTable(Phase::Market, "V1", pick({{"M1", 0.9}, {"M2", 0.1}}, {"M1", "M2"})),
      ConditionalChoiceTable(Phase::Market, "V2", pick({{"M2", 0.8}, {"M3", 0.2}}, {"M2", "M3"})),
      ConditionalChoiceTable(Phase::Market, "V3", pick({{"M2", 0.85}, {"M1", 0.15}}, {"M2", "M1"})),
      ConditionalChoiceTable(Phase::Market, "V4", pick({{"M3", 0.7}, {"M2", 0.3}}, {"M3", "M2"}))};
  d.factors = {0.0048, 0.0161, 0.038, 0.105, 0.09};
  d.sales = {{"M1", "T", 10.0}, {"M2", "T", 5.0}, {"M3", "T", 3.0}};
  return d;
}

NetworkData fig6_data() {
  NetworkData d;
  const char* minerals[] = {"a", "b"};
  double lon = -170.0;
  auto add = [&](const std::string& id, const char* roles) {
    d.nodes.push_back(make_node(id, "R" + std::to_string(d.nodes.size() % 4), roles, 10.0, lon));
    lon += 7.0;
  };
  for (const char* m : minerals) {
    for (int i = 1; i <= 3; ++i) add(std::string("E") + m + std::to_string(i), "E");
    for (int i = 1; i <= 3; ++i) add(std::string("P") + m + std::to_string(i), "P");
  }
  for (const char* pre : {"B", "V", "M"}) {
    for (int i = 1; i <= 3; ++i) add(pre + std::to_string(i), pre);
  }
  d.minerals = {{"a", "A"}, {"b", "B"}};
  BatteryChemistry c;
  c.id = "F";
  c.mineral_mass = {{"a", 2.0}, {"b", 3.0}};
  c.processed_mass = {{"a", 1.0}, {"b", 1.0}};
  c.battery_mass_per_kwh = 6.0;
  c.vehicle_mass_per_kwh = 20.0;
  d.chemistries = {c};
  auto three = [](const std::string& pre) {
    return std::vector<ChoiceOption>{{pre + "1", 0.5}, {pre + "2", 0.3}, {pre + "3", 0.2}};
  };
  for (const char* m : minerals) {
    d.choice_tables.emplace_back(Phase::Extraction, m, three(std::string("E") + m));
    d.choice_tables.emplace_back(Phase::Processing, m, three(std::string("P") + m));
  }
  d.choice_tables.emplace_back(Phase::BatteryProduction, "battery", three("B"));
  for (int i = 1; i <= 3; ++i) {
    d.conditional_tables.emplace_back(Phase::VehicleProduction, "B" + std::to_string(i), three("V"));
    d.conditional_tables.emplace_back(Phase::Market, "V" + std::to_string(i), three("M"));
  }
  d.factors = {0.0048, 0.0161, 0.038, 0.105, 0.09};
  return d;
}

NetworkData random_data(std::mt19937_64& rng, std::size_t max_minerals, std::size_t max_width) {
  std::uniform_int_distribution<std::size_t> width(1, max_width);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto coord = [&](const std::string& id, const char* roles) {
    const char* regions[] = {"A", "B", "C"};
    return make_node(id, regions[rng() % 3], roles, -60.0 + 120.0 * unit(rng), -180.0 + 360.0 * unit(rng));
  };
  // Options over a pool; some options get zero probability, one always keeps mass.
  auto options = [&](const std::vector<std::string>& pool) {
    std::vector<std::string> ids = pool;
    std::shuffle(ids.begin(), ids.end(), rng);
    ids.resize(std::uniform_int_distribution<std::size_t>(1, pool.size())(rng));
    std::vector<double> w(ids.size());
    for (auto& x : w) x = unit(rng) < 0.25 ? 0.0 : 0.05 + unit(rng);
    w[rng() % w.size()] = 0.05 + unit(rng);
    double total = 0.0;
    for (double x : w) total += x;
    std::vector<ChoiceOption> out;
    for (std::size_t i = 0; i < ids.size(); ++i) out.push_back({ids[i], w[i] / total});
    return out;
  };

  NetworkData d;
  const std::size_t k = std::uniform_int_distribution<std::size_t>(1, max_minerals)(rng);
  BatteryChemistry c;
  c.id = "R";
  for (std::size_t m = 0; m < k; ++m) {
    const std::string mineral = "m" + std::to_string(m);
    d.minerals.push_back({mineral, mineral});
    std::vector<std::string> e_pool;
    std::vector<std::string> p_pool;
    const std::size_t ne = width(rng);
    const std::size_t np = width(rng);
    for (std::size_t i = 0; i < ne; ++i) {
      e_pool.push_back("E" + mineral + "_" + std::to_string(i));
      d.nodes.push_back(coord(e_pool.back(), "E"));
    }
    for (std::size_t i = 0; i < np; ++i) {
      p_pool.push_back("P" + mineral + "_" + std::to_string(i));
      d.nodes.push_back(coord(p_pool.back(), "P"));
    }
    d.choice_tables.emplace_back(Phase::Extraction, mineral, options(e_pool));
    d.choice_tables.emplace_back(Phase::Processing, mineral, options(p_pool));
    const double mass = 1.0 + 9.0 * unit(rng);
    c.mineral_mass[mineral] = mass;
    c.processed_mass[mineral] = mass * 0.5;
  }
  auto pool = [&](const char* prefix, const char* roles, std::size_t n) {
    std::vector<std::string> ids;
    for (std::size_t i = 0; i < n; ++i) {
      ids.push_back(prefix + std::to_string(i));
      d.nodes.push_back(coord(ids.back(), roles));
    }
    return ids;
  };
  const auto b_pool = pool("B", "B", width(rng));
  const auto v_pool = pool("V", "V", width(rng) + 1);
  const auto m_pool = pool("M", "M", width(rng) + 1);
  d.choice_tables.emplace_back(Phase::BatteryProduction, "battery", options(b_pool));
  for (const auto& b : b_pool) d.conditional_tables.emplace_back(Phase::VehicleProduction, b, options(v_pool));
  for (const auto& v : v_pool) d.conditional_tables.emplace_back(Phase::Market, v, options(m_pool));
  c.battery_mass_per_kwh = 6.0;
  c.vehicle_mass_per_kwh = 20.0;
  d.chemistries = {c};
  d.factors = {0.0048, 0.0161, 0.038, 0.105, 0.09};
  return d;
}

std::vector<std::uint32_t> scenario_key(const Scenario& s) {
  std::vector<std::uint32_t> key;
  for (const auto& r : s.routes) {
    key.push_back(r.extraction.value);
    key.push_back(r.processing.value);
  }
  key.push_back(s.battery.value);
  key.push_back(s.vehicle.value);
  key.push_back(s.market.value);
  return key;
}

std::map<std::vector<std::uint32_t>, double> enumerate_scenarios(const SupplyNetwork& network,
                                                                 const std::string& chemistry) {
  const auto& data = network.data();
  const auto& chem = network.chemistry(chemistry);
  auto table = [&](Phase phase, const std::string& decision) -> const ChoiceTable* {
    for (const auto& t : data.choice_tables) {
      if (t.phase() == phase && t.decision() == decision) return &t;
    }
    return nullptr;
  };
  auto row = [&](Phase phase, const std::string& given) -> const ConditionalChoiceTable* {
    for (const auto& t : data.conditional_tables) {
      if (t.phase() == phase && t.given() == given) return &t;
    }
    return nullptr;
  };
  auto positive = [](const std::vector<ChoiceOption>& options) {
    std::vector<ChoiceOption> out;
    for (const auto& o : options) {
      if (o.probability > 0.0) out.push_back(o);
    }
    return out;
  };

  // Independent stages in key order: E then P for each mineral in id order.
  std::vector<std::vector<ChoiceOption>> stages;
  for (const auto& mineral : chem.subset()) {
    stages.push_back(positive(table(Phase::Extraction, mineral)->options()));
    stages.push_back(positive(table(Phase::Processing, mineral)->options()));
  }
  const ChoiceTable* battery = table(Phase::BatteryProduction, chemistry);
  if (!battery) battery = table(Phase::BatteryProduction, std::string(ChoiceTable::kBatteryDecision));

  std::map<std::vector<std::uint32_t>, double> out;
  std::vector<std::uint32_t> key;
  std::function<void(std::size_t, double)> walk = [&](std::size_t stage, double prob) {
    if (stage < stages.size()) {
      for (const auto& o : stages[stage]) {
        key.push_back(network.node_index(o.node_id).value);
        walk(stage + 1, prob * o.probability);
        key.pop_back();
      }
      return;
    }
    for (const auto& b : positive(battery->options())) {
      for (const auto& v : positive(row(Phase::VehicleProduction, b.node_id)->options())) {
        for (const auto& m : positive(row(Phase::Market, v.node_id)->options())) {
          auto full = key;
          full.push_back(network.node_index(b.node_id).value);
          full.push_back(network.node_index(v.node_id).value);
          full.push_back(network.node_index(m.node_id).value);
          out[full] += prob * b.probability * v.probability * m.probability;
        }
      }
    }
  };
  walk(0, 1.0);
  return out;
}

HubInstance random_instance(std::mt19937_64& rng, std::size_t max_alpha, std::size_t max_j, std::size_t max_n,
                            std::size_t max_beta) {
  auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
  auto cost = [&] { return static_cast<double>(pick(0, 8192)) / 1024.0; };
  HubInstance inst;
  const std::size_t alpha = pick(1, max_alpha);
  inst.p = pick(1, std::min<std::size_t>(alpha, 3));
  for (std::size_t k = 0; k < alpha; ++k) inst.hubs.push_back("H" + std::to_string(k));
  const std::size_t beta = pick(1, max_beta);
  for (std::size_t m = 0; m < beta; ++m) inst.markets.push_back("M" + std::to_string(m));
  const std::size_t jmax = pick(1, max_j);
  for (std::size_t j = 0; j < jmax; ++j) {
    inst.subsets.push_back("J" + std::to_string(j));
    const std::size_t n = pick(1, max_n);
    std::vector<std::string> options;
    std::vector<std::vector<double>> c(n, std::vector<double>(alpha));
    for (std::size_t i = 0; i < n; ++i) {
      options.push_back("S" + std::to_string(j) + "_" + std::to_string(i));
      for (auto& x : c[i]) x = cost();
    }
    inst.options.push_back(std::move(options));
    inst.source_cost.push_back(std::move(c));
  }
  inst.market_cost.assign(alpha, std::vector<double>(beta));
  for (auto& row : inst.market_cost) {
    for (auto& x : row) x = cost();
  }
  return inst;
}

double enumerate_objective(const HubInstance& inst) {
  const std::size_t alpha = inst.alpha();
  double best = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> hubs;
  // Every y with exactly p ones, then every x consistent with y.
  for (std::uint32_t mask = 0; mask < (1U << alpha); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != inst.p) continue;
    hubs.clear();
    double fixed = 0.0;
    for (std::size_t k = 0; k < alpha; ++k) {
      if (!(mask >> k & 1U)) continue;
      hubs.push_back(k);
      for (std::size_t m = 0; m < inst.beta(); ++m) fixed += inst.weight(m) * inst.market_cost[k][m];
    }
    const std::size_t slots = hubs.size() * inst.j_max();
    std::function<void(std::size_t, double)> assign = [&](std::size_t slot, double acc) {
      if (slot == slots) {
        best = std::min(best, acc + fixed);
        return;
      }
      const std::size_t k = hubs[slot / inst.j_max()];
      const std::size_t j = slot % inst.j_max();
      for (std::size_t i = 0; i < inst.options[j].size(); ++i) assign(slot + 1, acc + inst.source_cost[j][i][k]);
    };
    assign(0, 0.0);
  }
  return best;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace evchain::testing
