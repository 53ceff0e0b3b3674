#include "evchain/hubopt.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>

#include "evchain/emissions.hpp"
#include "evchain/errors.hpp"
#include "evchain/ingest.hpp"

namespace evchain {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void require_cost(double c, const char* what) {
  if (!std::isfinite(c) || c < 0.0) throw ArgumentError(std::string(what) + " must be finite and >= 0");
}

}  // namespace

void HubInstance::validate() const {
  if (p < 1) throw ArgumentError("hub count p must be >= 1");
  if (options.size() != j_max() || source_cost.size() != j_max()) {
    throw ArgumentError("source options and costs must have one entry per subset");
  }
  for (std::size_t j = 0; j < j_max(); ++j) {
    if (options[j].empty()) throw ArgumentError("subset '" + subsets[j] + "' has no source options");
    if (source_cost[j].size() != options[j].size()) throw ArgumentError("source cost rows do not match options");
    for (const auto& row : source_cost[j]) {
      if (row.size() != alpha()) throw ArgumentError("source cost row length must equal the hub count");
      for (double c : row) require_cost(c, "source cost");
    }
  }
  if (market_cost.size() != alpha()) throw ArgumentError("market cost needs one row per hub");
  for (const auto& row : market_cost) {
    if (row.size() != beta()) throw ArgumentError("market cost row length must equal the market count");
    for (double c : row) require_cost(c, "market cost");
  }
  if (!market_weight.empty()) {
    if (market_weight.size() != beta()) throw ArgumentError("market weights must match the market count");
    for (double w : market_weight) require_cost(w, "market weight");
  }
  if (alpha() < p) {
    throw InfeasibleError("need " + std::to_string(p) + " hubs but only " + std::to_string(alpha()) +
                          " candidates exist");
  }
}

std::size_t HubInstance::best_option(std::size_t j, std::size_t k) const {
  std::size_t best = 0;
  for (std::size_t i = 1; i < source_cost[j].size(); ++i) {
    if (source_cost[j][i][k] < source_cost[j][best][k]) best = i;
  }
  return best;
}

namespace {

double market_term(const HubInstance& inst, std::size_t k) {
  double t = 0.0;
  for (std::size_t m = 0; m < inst.beta(); ++m) t += inst.weight(m) * inst.market_cost[k][m];
  return t;
}

}  // namespace

double HubInstance::hub_cost(std::size_t k) const {
  double s = 0.0;
  for (std::size_t j = 0; j < j_max(); ++j) s += source_cost[j][best_option(j, k)][k];
  return s + market_term(*this, k);
}

std::vector<double> HubInstance::hub_costs() const {
  std::vector<double> h(alpha());
  for (std::size_t k = 0; k < alpha(); ++k) h[k] = hub_cost(k);
  return h;
}

double evaluate_objective(const HubInstance& instance, const std::vector<std::size_t>& selected_hubs,
                          const std::map<std::pair<std::size_t, std::size_t>, std::size_t>& sourcing) {
  std::vector<std::size_t> hubs = selected_hubs;
  std::sort(hubs.begin(), hubs.end());
  if (std::adjacent_find(hubs.begin(), hubs.end()) != hubs.end()) throw ArgumentError("hub selected twice");
  double z = 0.0;
  for (auto k : hubs) {
    if (k >= instance.alpha()) throw ArgumentError("hub index out of range");
    double s = 0.0;
    for (std::size_t j = 0; j < instance.j_max(); ++j) {
      auto it = sourcing.find({k, j});
      if (it == sourcing.end()) throw ArgumentError("no source for subset '" + instance.subsets[j] + "'");
      if (it->second >= instance.options[j].size()) throw ArgumentError("source option out of range");
      s += instance.source_cost[j][it->second][k];
    }
    z += s + market_term(instance, k);
  }
  return z;
}

FeasibilityReport check_feasibility(const HubInstance& instance, const HubSolution& solution) {
  FeasibilityReport report;
  auto fail = [&](std::string msg) {
    report.feasible = false;
    report.violations.push_back(std::move(msg));
  };
  const std::size_t alpha = instance.alpha();

  std::vector<int> y(alpha, 0);
  for (auto k : solution.selected_hubs) {
    if (k >= alpha) {
      fail("selected hub index " + std::to_string(k) + " out of range");
      continue;
    }
    ++y[k];
  }
  // x[j][i][k]
  std::vector<std::vector<std::vector<int>>> x(instance.j_max());
  for (std::size_t j = 0; j < instance.j_max(); ++j) {
    x[j].assign(instance.options[j].size(), std::vector<int>(alpha, 0));
  }
  for (const auto& [key, i] : solution.sourcing) {
    const auto [k, j] = key;
    if (k >= alpha || j >= instance.j_max() || i >= instance.options[j].size()) {
      fail("sourcing entry out of range");
      continue;
    }
    ++x[j][i][k];
  }

  int hub_count = 0;
  for (std::size_t k = 0; k < alpha; ++k) {
    if (y[k] > 1) fail("y[" + instance.hubs[k] + "] is not binary");
    hub_count += y[k];
  }
  if (hub_count != static_cast<int>(instance.p)) {
    fail("selected " + std::to_string(hub_count) + " hubs, expected " + std::to_string(instance.p));
  }
  for (std::size_t j = 0; j < instance.j_max(); ++j) {
    for (std::size_t k = 0; k < alpha; ++k) {
      int chosen = 0;
      for (std::size_t i = 0; i < instance.options[j].size(); ++i) {
        if (x[j][i][k] > 1) fail("x is not binary");
        if (x[j][i][k] > y[k]) fail("subset '" + instance.subsets[j] + "' sourced at unselected hub '" +
                                    instance.hubs[k] + "'");
        chosen += x[j][i][k];
      }
      if (chosen != y[k]) {
        fail("hub '" + instance.hubs[k] + "' sources subset '" + instance.subsets[j] + "' " +
             std::to_string(chosen) + " times");
      }
    }
  }
  if (report.feasible) {
    std::vector<std::size_t> hubs;
    std::map<std::pair<std::size_t, std::size_t>, std::size_t> src;
    for (std::size_t k = 0; k < alpha; ++k) {
      if (!y[k]) continue;
      hubs.push_back(k);
      for (std::size_t j = 0; j < instance.j_max(); ++j) {
        for (std::size_t i = 0; i < instance.options[j].size(); ++i) {
          if (x[j][i][k]) src[{k, j}] = i;
        }
      }
    }
    const double z = evaluate_objective(instance, hubs, src);
    if (z != solution.objective) fail("reported objective does not match the assignment");
  }
  return report;
}

namespace {

HubSolution complete(const HubInstance& instance, std::vector<std::size_t> hubs) {
  std::sort(hubs.begin(), hubs.end());
  HubSolution sol;
  for (auto k : hubs) {
    for (std::size_t j = 0; j < instance.j_max(); ++j) sol.sourcing[{k, j}] = instance.best_option(j, k);
  }
  sol.selected_hubs = std::move(hubs);
  sol.objective = evaluate_objective(instance, sol.selected_hubs, sol.sourcing);
  return sol;
}

}  // namespace

HubSolution solve_exact(const HubInstance& instance) {
  instance.validate();
  const auto h = instance.hub_costs();
  std::vector<std::size_t> order(instance.alpha());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return h[a] < h[b]; });
  order.resize(instance.p);
  return complete(instance, std::move(order));
}

HubSolution solve_bnb(const HubInstance& instance, BnbStats* stats) {
  instance.validate();
  const auto h = instance.hub_costs();
  const std::size_t alpha = instance.alpha();
  const std::size_t p = instance.p;
  BnbStats local;
  BnbStats& st = stats ? *stats : local;
  st = {};

  double best = INFINITY;
  std::vector<std::size_t> best_set;
  std::vector<std::size_t> chosen;
  std::vector<double> scratch;

  auto bound = [&](std::size_t from, std::size_t needed, double fixed) {
    scratch.assign(h.begin() + static_cast<std::ptrdiff_t>(from), h.end());
    std::partial_sort(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(needed), scratch.end());
    double b = fixed;
    for (std::size_t i = 0; i < needed; ++i) b += scratch[i];
    return b;
  };

  auto dfs = [&](auto&& self, std::size_t k, double fixed) -> void {
    ++st.nodes;
    const std::size_t needed = p - chosen.size();
    if (needed == 0) {
      ++st.evaluated_selections;
      if (fixed < best) {
        best = fixed;
        best_set = chosen;
      }
      return;
    }
    if (alpha - k < needed) return;
    const double b = bound(k, needed, fixed);
    if (b > best + 1e-12 * std::max(1.0, std::abs(best))) {
      ++st.pruned;
      return;
    }
    chosen.push_back(k);
    self(self, k + 1, fixed + h[k]);
    chosen.pop_back();
    self(self, k + 1, fixed);
  };
  dfs(dfs, 0, 0.0);
  return complete(instance, std::move(best_set));
}

std::string_view structure_name(StructureKind kind) noexcept {
  switch (kind) {
    case StructureKind::Current: return "Current";
    case StructureKind::Future: return "Future";
    case StructureKind::Optimized: return "Optimized";
  }
  return "?";
}

namespace {

std::set<std::string> group_markets(const SupplyNetwork& network, const MarketGroup& group) {
  if (group.markets.empty()) throw ArgumentError("market group '" + group.name + "' has no markets");
  std::set<std::string> out;
  for (const auto& id : group.markets) {
    const auto idx = network.node_index(id);
    if (!network.node(idx).roles.contains(Phase::Market)) {
      throw ReferenceError("market group '" + group.name + "': node '" + id + "' is not a market");
    }
    out.insert(id);
  }
  return out;
}

bool listed(const std::vector<std::string>& chemistries, const std::string& id) {
  return std::find(chemistries.begin(), chemistries.end(), id) != chemistries.end();
}

}  // namespace

std::vector<double> market_demand_weights(const SupplyNetwork& network, const MarketGroup& group,
                                          const std::vector<std::string>& chemistries) {
  group_markets(network, group);
  std::vector<double> gwh(group.markets.size(), 0.0);
  double total = 0.0;
  for (const auto& s : network.sales()) {
    if (!listed(chemistries, s.chemistry)) continue;
    for (std::size_t m = 0; m < group.markets.size(); ++m) {
      if (group.markets[m] == s.market) {
        gwh[m] += s.gwh;
        total += s.gwh;
      }
    }
  }
  if (!(total > 0.0)) throw ArgumentError("market group '" + group.name + "' has no sales");
  for (auto& g : gwh) g /= total;
  return gwh;
}

MassProfile mass_profile(const SupplyNetwork& network, const MarketGroup& group,
                         const std::vector<std::string>& chemistries) {
  const auto markets = group_markets(network, group);
  MassProfile profile;
  double total = 0.0;
  for (const auto& s : network.sales()) {
    if (!listed(chemistries, s.chemistry) || !markets.count(s.market)) continue;
    profile.chemistry_share[s.chemistry] += s.gwh;
    total += s.gwh;
  }
  if (!(total > 0.0)) throw ArgumentError("market group '" + group.name + "' has no sales");
  for (auto& [chem_id, share] : profile.chemistry_share) {
    share /= total;
    const auto& chem = network.chemistry(chem_id);
    for (const auto& [mineral, kg] : chem.mineral_mass) {
      if (kg > 0.0) profile.mineral_mass[mineral] += share * kg;
    }
    profile.vehicle_mass += share * chem.vehicle_mass_per_kwh;
  }
  return profile;
}

std::vector<std::string> reachable_hubs(const SupplyNetwork& network, const MarketGroup& group,
                                        const std::vector<std::string>& chemistries) {
  const auto markets = group_markets(network, group);
  std::set<NodeIndex> hubs;
  for (const auto& chem_id : chemistries) {
    const auto& battery = network.plan(chem_id).battery;
    for (std::size_t b = 0; b < battery.nodes.size(); ++b) {
      if (!(battery.probabilities[b] > 0.0)) continue;
      const auto* vrow = network.vehicle_row(battery.nodes[b]);
      if (!vrow) continue;
      for (std::size_t v = 0; v < vrow->nodes.size(); ++v) {
        if (!(vrow->probabilities[v] > 0.0)) continue;
        const auto* mrow = network.market_row(vrow->nodes[v]);
        if (!mrow) continue;
        for (std::size_t m = 0; m < mrow->nodes.size(); ++m) {
          if (mrow->probabilities[m] > 0.0 && markets.count(network.node(mrow->nodes[m]).id)) {
            hubs.insert(vrow->nodes[v]);
            break;
          }
        }
      }
    }
  }
  std::vector<std::string> out;
  for (auto idx : hubs) out.push_back(network.node(idx).id);
  return out;
}

HubInstance build_instance(const SupplyNetwork& network, const MarketGroup& group, StructureKind kind,
                           const std::vector<std::string>& chemistries, std::size_t p) {
  const auto profile = mass_profile(network, group, chemistries);
  HubInstance inst;
  inst.p = p;
  inst.markets = group.markets;
  inst.market_weight = market_demand_weights(network, group, chemistries);

  if (kind == StructureKind::Optimized) {
    if (group.candidate_hubs.empty()) {
      for (const auto& node : network.nodes()) {
        if (node.roles.contains(Phase::VehicleProduction)) inst.hubs.push_back(node.id);
      }
    } else {
      for (const auto& id : group.candidate_hubs) {
        if (!network.node(network.node_index(id)).roles.contains(Phase::VehicleProduction)) {
          throw ReferenceError("market group '" + group.name + "': hub '" + id + "' is not a vehicle plant");
        }
        inst.hubs.push_back(id);
      }
    }
  } else {
    inst.hubs = reachable_hubs(network, group, chemistries);
  }

  const auto& factors = network.factors();
  std::vector<NodeIndex> hub_idx;
  for (const auto& id : inst.hubs) hub_idx.push_back(network.node_index(id));

  for (const auto& [mineral, kg] : profile.mineral_mass) {
    const auto* table = network.find_choice_table(Phase::Extraction, mineral);
    if (!table) throw CoverageError("no extraction table for mineral '" + mineral + "'");
    std::vector<std::string> sources;
    for (const auto& opt : table->options()) {
      if (kind == StructureKind::Optimized || opt.probability > 0.0) sources.push_back(opt.node_id);
    }
    std::vector<std::vector<double>> cost;
    for (const auto& src : sources) {
      const auto s = network.node_index(src);
      std::vector<double> row;
      for (auto k : hub_idx) row.push_back(leg_emissions(kg, network.leg(s, k, Transition::EP), factors).total());
      cost.push_back(std::move(row));
    }
    inst.subsets.push_back(mineral);
    inst.options.push_back(std::move(sources));
    inst.source_cost.push_back(std::move(cost));
  }

  for (auto k : hub_idx) {
    std::vector<double> row;
    for (const auto& m : inst.markets) {
      row.push_back(leg_emissions(profile.vehicle_mass, network.leg(k, network.node_index(m), Transition::VM), factors)
                        .total());
    }
    inst.market_cost.push_back(std::move(row));
  }
  return inst;
}

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ManifestError("scenario file not found: " + path.string());
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(path.filename().string(), 0, e.what());
  }
}

std::vector<std::string> string_list(const json& j, const std::string& where) {
  if (!j.is_array()) throw ParseError(where, 0, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& v : j) {
    if (!v.is_string()) throw ParseError(where, 0, "expected an array of strings");
    out.push_back(v.get<std::string>());
  }
  return out;
}

std::size_t positive_count(const json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<long long>() < 1) throw ParseError(where, 0, "p must be an integer >= 1");
  return j.get<std::size_t>();
}

}  // namespace

OptimizationScenario OptimizationScenario::from_file(const fs::path& path) {
  const json j = read_json(path);
  const std::string file = path.filename().string();
  if (!j.is_object()) throw ParseError(file, 0, "scenario must be a JSON object");
  const fs::path base = path.parent_path();
  OptimizationScenario sc;
  if (j.contains("p")) sc.p = positive_count(j["p"], file);
  if (j.contains("chemistries")) sc.chemistries = string_list(j["chemistries"], file);
  if (j.contains("future")) {
    const auto& f = j["future"];
    auto resolve = [&](const char* key) -> std::optional<fs::path> {
      if (!f.contains(key)) return std::nullopt;
      if (!f[key].is_string()) throw ParseError(file, 0, std::string("future.") + key + " must be a path");
      fs::path p = f[key].get<std::string>();
      p = p.is_absolute() ? p : base / p;
      if (!fs::exists(p)) throw ManifestError("future table not found: " + p.string());
      return p;
    };
    sc.future_choices = resolve("choices");
    sc.future_conditional_choices = resolve("conditional_choices");
  }
  if (!j.contains("groups") || !j["groups"].is_array() || j["groups"].empty()) {
    throw ParseError(file, 0, "scenario needs a nonempty 'groups' array");
  }
  for (const auto& g : j["groups"]) {
    MarketGroup group;
    if (!g.contains("name") || !g["name"].is_string()) throw ParseError(file, 0, "group without a name");
    group.name = g["name"].get<std::string>();
    if (!g.contains("markets")) throw ParseError(file, 0, "group '" + group.name + "' lists no markets");
    group.markets = string_list(g["markets"], file);
    if (g.contains("candidate_hubs")) group.candidate_hubs = string_list(g["candidate_hubs"], file);
    if (g.contains("p")) group.p = positive_count(g["p"], file);
    sc.groups.push_back(std::move(group));
  }
  return sc;
}

SupplyNetwork future_network(const SupplyNetwork& current, const OptimizationScenario& scenario) {
  NetworkData data = current.data();
  if (scenario.future_choices) data.choice_tables = read_choices(*scenario.future_choices);
  if (scenario.future_conditional_choices) {
    data.conditional_tables = read_conditional_choices(*scenario.future_conditional_choices);
  }
  return build_network(std::move(data), current.fallback());
}

std::vector<std::string> StructureComparison::order(StructureKind kind) const {
  auto value = [kind](const GroupComparison& g) {
    switch (kind) {
      case StructureKind::Current: return g.current;
      case StructureKind::Future: return g.future;
      case StructureKind::Optimized: return g.optimized;
    }
    return 0.0;
  };
  std::vector<const GroupComparison*> rows;
  for (const auto& g : groups) rows.push_back(&g);
  std::stable_sort(rows.begin(), rows.end(), [&](auto* a, auto* b) { return value(*a) < value(*b); });
  std::vector<std::string> out;
  for (auto* r : rows) out.push_back(r->group);
  return out;
}

namespace {

std::vector<std::string> resolve_chemistries(const SupplyNetwork& network, const OptimizationScenario& scenario) {
  if (!scenario.chemistries.empty()) {
    for (const auto& c : scenario.chemistries) network.chemistry(c);
    return scenario.chemistries;
  }
  std::vector<std::string> out;
  for (const auto& c : network.chemistries()) out.push_back(c.id);
  return out;
}

// Sales-weighted mean of the per-market conditional averages over the
// group's markets that the simulation reached.
double group_average(const SupplyNetwork& network, const std::map<std::string, ChemistryRun>& runs,
                     const MarketGroup& group) {
  double weighted = 0.0;
  double weight = 0.0;
  for (const auto& s : network.sales()) {
    auto run = runs.find(s.chemistry);
    if (run == runs.end() || s.gwh <= 0.0) continue;
    if (std::find(group.markets.begin(), group.markets.end(), s.market) == group.markets.end()) continue;
    auto acc = run->second.by_market_node.find(network.node_index(s.market));
    if (acc == run->second.by_market_node.end() || acc->second.count == 0) continue;
    weighted += s.gwh * acc->second.mean();
    weight += s.gwh;
  }
  if (!(weight > 0.0)) {
    throw EmptyError("no simulated shipment reached a market of group '" + group.name + "'");
  }
  return weighted / weight;
}

}  // namespace

StructureComparison compare_structures(const SupplyNetwork& current, const SupplyNetwork& future,
                                       const OptimizationScenario& scenario, const SimulationOptions& options) {
  const auto chemistries = resolve_chemistries(current, scenario);
  std::map<std::string, ChemistryRun> current_runs;
  std::map<std::string, ChemistryRun> future_runs;
  const bool same = &current == &future;
  for (const auto& c : chemistries) {
    current_runs.emplace(c, run_chemistry(current, c, options));
    if (!same) future_runs.emplace(c, run_chemistry(future, c, options));
  }

  StructureComparison out;
  for (const auto& group : scenario.groups) {
    GroupComparison row;
    row.group = group.name;
    row.p = scenario.p_for(group);
    row.current = group_average(current, current_runs, group);
    row.future = group_average(future, same ? current_runs : future_runs, group);
    row.instance = build_instance(current, group, StructureKind::Optimized, chemistries, row.p);
    row.solution = solve_exact(row.instance);
    row.optimized = row.solution.objective / static_cast<double>(row.p);
    const auto restricted = build_instance(current, group, StructureKind::Current, chemistries, row.p);
    if (restricted.alpha() >= row.p) {
      row.current_hub_bound = solve_exact(restricted).objective / static_cast<double>(row.p);
    }
    out.groups.push_back(std::move(row));
  }
  return out;
}

json instance_to_json(const HubInstance& instance) {
  return json{{"hubs", instance.hubs},
              {"markets", instance.markets},
              {"subsets", instance.subsets},
              {"options", instance.options},
              {"source_cost", instance.source_cost},
              {"market_cost", instance.market_cost},
              {"market_weight", instance.market_weight},
              {"p", instance.p}};
}

HubInstance instance_from_json(const json& j) {
  try {
    HubInstance inst;
    j.at("hubs").get_to(inst.hubs);
    j.at("markets").get_to(inst.markets);
    j.at("subsets").get_to(inst.subsets);
    j.at("options").get_to(inst.options);
    j.at("source_cost").get_to(inst.source_cost);
    j.at("market_cost").get_to(inst.market_cost);
    if (j.contains("market_weight")) j.at("market_weight").get_to(inst.market_weight);
    j.at("p").get_to(inst.p);
    return inst;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed hub instance: ") + e.what());
  }
}

json solution_to_json(const HubInstance& instance, const HubSolution& solution) {
  json hubs = json::array();
  for (auto k : solution.selected_hubs) hubs.push_back(instance.hubs.at(k));
  json sourcing = json::array();
  for (const auto& [key, i] : solution.sourcing) {
    const auto [k, j] = key;
    sourcing.push_back({{"hub", instance.hubs.at(k)},
                        {"subset", instance.subsets.at(j)},
                        {"source", instance.options.at(j).at(i)}});
  }
  return json{{"selected_hubs", hubs}, {"sourcing", sourcing}, {"objective", solution.objective}};
}

HubSolution solution_from_json(const HubInstance& instance, const json& j) {
  auto index_of = [](const std::vector<std::string>& ids, const std::string& id, const char* what) {
    auto it = std::find(ids.begin(), ids.end(), id);
    if (it == ids.end()) throw ArgumentError(std::string("unknown ") + what + " '" + id + "' in hub solution");
    return static_cast<std::size_t>(it - ids.begin());
  };
  try {
    HubSolution sol;
    for (const auto& h : j.at("selected_hubs")) {
      sol.selected_hubs.push_back(index_of(instance.hubs, h.get<std::string>(), "hub"));
    }
    std::sort(sol.selected_hubs.begin(), sol.selected_hubs.end());
    for (const auto& s : j.at("sourcing")) {
      const auto k = index_of(instance.hubs, s.at("hub").get<std::string>(), "hub");
      const auto sj = index_of(instance.subsets, s.at("subset").get<std::string>(), "subset");
      const auto i = index_of(instance.options.at(sj), s.at("source").get<std::string>(), "source");
      sol.sourcing[{k, sj}] = i;
    }
    sol.objective = j.at("objective").get<double>();
    return sol;
  } catch (const json::exception& e) {
    throw ArgumentError(std::string("malformed hub solution: ") + e.what());
  }
}

}  // namespace evchain
