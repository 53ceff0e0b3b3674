#include "evchain/ingest.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <set>
#include <sstream>

#include "evchain/csv.hpp"
#include "evchain/errors.hpp"
#include "json.hpp"

namespace evchain {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

json read_json(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    const auto upto = std::min<std::size_t>(e.byte, text.size());
    const auto line = 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + upto, '\n'));
    throw ParseError(path.filename().string(), line, "malformed JSON");
  }
}

double json_number(const json& j, std::string_view key, const std::string& file, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_number()) {
    throw ParseError(file, 0, context + ": '" + std::string(key) + "' must be a number");
  }
  const double v = it->get<double>();
  if (!std::isfinite(v)) throw ParseError(file, 0, context + ": '" + std::string(key) + "' must be finite");
  return v;
}

std::string json_string(const json& j, std::string_view key, const std::string& file, const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_string()) {
    throw ParseError(file, 0, context + ": '" + std::string(key) + "' must be a string");
  }
  return it->get<std::string>();
}

PhaseSet parse_roles(const csv::Reader& reader, const csv::Row& row, const std::string& text) {
  PhaseSet roles;
  if (text.empty()) return roles;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('|', start);
    if (end == std::string::npos) end = text.size();
    auto letter = std::string_view(text).substr(start, end - start);
    auto phase = phase_from_letter(letter);
    if (!phase) reader.fail(row, "unknown phase role '" + std::string(letter) + "'");
    roles.insert(*phase);
    start = end + 1;
  }
  return roles;
}

std::string roles_to_string(PhaseSet roles) {
  std::string out;
  for (Phase p : kAllPhases) {
    if (!roles.contains(p)) continue;
    if (!out.empty()) out.push_back('|');
    out.push_back(phase_letter(p));
  }
  return out;
}

std::vector<Node> read_nodes(const fs::path& path) {
  csv::Reader reader(path, {"id", "name", "region", "lat", "lon", "roles"});
  std::vector<Node> nodes;
  std::set<std::string> seen;
  for (const auto& row : reader.rows()) {
    Node n;
    n.id = reader.text(row, 0);
    n.name = reader.text(row, 1, true);
    n.region = reader.text(row, 2);
    n.latitude = reader.number(row, 3);
    n.longitude = reader.number(row, 4);
    n.roles = parse_roles(reader, row, reader.text(row, 5, true));
    if (n.latitude < -90.0 || n.latitude > 90.0) reader.fail(row, "latitude outside [-90, 90]");
    if (n.longitude < -180.0 || n.longitude > 180.0) reader.fail(row, "longitude outside [-180, 180]");
    if (!seen.insert(n.id).second) reader.fail(row, "duplicate node id '" + n.id + "'");
    nodes.push_back(std::move(n));
  }
  return nodes;
}

std::vector<Mineral> read_minerals(const fs::path& path) {
  csv::Reader reader(path, {"id", "name"});
  std::vector<Mineral> minerals;
  std::set<std::string> seen;
  for (const auto& row : reader.rows()) {
    Mineral m{reader.text(row, 0), reader.text(row, 1, true)};
    if (!seen.insert(m.id).second) reader.fail(row, "duplicate mineral id '" + m.id + "'");
    minerals.push_back(std::move(m));
  }
  return minerals;
}

std::map<std::string, double> read_mass_map(const json& j, std::string_view key, const std::string& file,
                                            const std::string& context) {
  auto it = j.find(key);
  if (it == j.end() || !it->is_object()) {
    throw ParseError(file, 0, context + ": '" + std::string(key) + "' must be an object");
  }
  std::map<std::string, double> out;
  for (const auto& [mineral, value] : it->items()) {
    if (!value.is_number()) throw ParseError(file, 0, context + ": mass for '" + mineral + "' must be a number");
    out.emplace(mineral, value.get<double>());
  }
  return out;
}

std::vector<BatteryChemistry> read_chemistries(const fs::path& path) {
  const auto file = path.filename().string();
  const json root = read_json(path);
  if (!root.is_object()) throw ParseError(file, 1, "top level must be an object keyed by chemistry id");
  std::vector<BatteryChemistry> out;
  for (const auto& [id, body] : root.items()) {
    const std::string ctx = "chemistry '" + id + "'";
    if (!body.is_object()) throw ParseError(file, 0, ctx + " must be an object");
    BatteryChemistry c;
    c.id = id;
    c.mineral_mass = read_mass_map(body, "mineral_mass", file, ctx);
    c.processed_mass = read_mass_map(body, "processed_mass", file, ctx);
    c.battery_mass_per_kwh = json_number(body, "battery_mass_per_kwh", file, ctx);
    c.vehicle_mass_per_kwh = json_number(body, "vehicle_mass_per_kwh", file, ctx);
    out.push_back(std::move(c));
  }
  return out;
}

template <typename Table>
std::vector<Table> read_grouped_choices(const fs::path& path, std::vector<std::string> header,
                                        std::initializer_list<Phase> allowed) {
  csv::Reader reader(path, std::move(header));
  struct Group {
    Phase phase;
    std::string key;
    std::size_t first_line;
    std::vector<ChoiceOption> options;
    std::set<std::string> seen;
  };
  std::vector<Group> groups;
  std::map<std::pair<Phase, std::string>, std::size_t> index;
  for (const auto& row : reader.rows()) {
    auto phase = phase_from_letter(reader.text(row, 0));
    if (!phase || std::find(allowed.begin(), allowed.end(), *phase) == allowed.end()) {
      reader.fail(row, "phase '" + row.fields[0] + "' is not valid in this file");
    }
    const auto& key = reader.text(row, 1);
    const auto& node_id = reader.text(row, 2);
    const double p = reader.number(row, 3);
    auto [it, inserted] = index.try_emplace({*phase, key}, groups.size());
    if (inserted) groups.push_back(Group{*phase, key, row.line, {}, {}});
    auto& g = groups[it->second];
    if (!g.seen.insert(node_id).second) reader.fail(row, "node '" + node_id + "' listed twice in one choice set");
    g.options.push_back({node_id, p});
  }
  std::vector<Table> tables;
  tables.reserve(groups.size());
  for (auto& g : groups) {
    try {
      tables.emplace_back(g.phase, g.key, std::move(g.options));
    } catch (const ProbabilityError& e) {
      throw ProbabilityError(reader.file() + ":" + std::to_string(g.first_line) + ": " + e.what());
    }
  }
  return tables;
}

std::vector<TransportLink> read_links(const fs::path& path) {
  csv::Reader reader(path, {"origin", "destination", "land_km", "sea_km", "sea_vessel", "land_vehicle"});
  std::vector<TransportLink> links;
  std::set<std::pair<std::string, std::string>> seen;
  for (const auto& row : reader.rows()) {
    TransportLink l;
    l.origin = reader.text(row, 0);
    l.destination = reader.text(row, 1);
    l.land_km = reader.number(row, 2);
    l.sea_km = reader.number(row, 3);
    auto vessel = parse_vessel(reader.text(row, 4, true));
    auto vehicle = parse_vehicle(reader.text(row, 5, true));
    if (!vessel) reader.fail(row, "unknown sea vessel '" + row.fields[4] + "'");
    if (!vehicle) reader.fail(row, "unknown land vehicle '" + row.fields[5] + "'");
    l.sea_vessel = *vessel;
    l.land_vehicle = *vehicle;
    if (l.land_km < 0.0 || l.sea_km < 0.0) reader.fail(row, "distances must be >= 0");
    if (l.sea_km > 0.0 && l.sea_vessel == SeaVessel::None) reader.fail(row, "sea_km > 0 requires a sea vessel");
    if (l.land_km > 0.0 && l.land_vehicle == LandVehicle::None) reader.fail(row, "land_km > 0 requires a land vehicle");
    if (!seen.insert({l.origin, l.destination}).second) {
      reader.fail(row, "duplicate link " + l.origin + " -> " + l.destination);
    }
    links.push_back(std::move(l));
  }
  return links;
}

EmissionFactors read_factors(const fs::path& path) {
  const auto file = path.filename().string();
  const json root = read_json(path);
  if (!root.is_object()) throw ParseError(file, 1, "top level must be an object");
  EmissionFactors f;
  f.gamma1 = json_number(root, "gamma1", file, "factors");
  f.gamma2 = json_number(root, "gamma2", file, "factors");
  f.gamma3 = json_number(root, "gamma3", file, "factors");
  f.beta1 = json_number(root, "beta1", file, "factors");
  f.beta2 = json_number(root, "beta2", file, "factors");
  return f;
}

std::vector<Manufacturer> read_manufacturers(const fs::path& path) {
  const auto file = path.filename().string();
  const json root = read_json(path);
  if (!root.is_array()) throw ParseError(file, 1, "top level must be an array");
  std::vector<Manufacturer> out;
  for (const auto& item : root) {
    Manufacturer m;
    m.id = json_string(item, "id", file, "manufacturer");
    const auto kind = json_string(item, "kind", file, "manufacturer '" + m.id + "'");
    if (kind == "BatteryMaker") {
      m.kind = ManufacturerKind::BatteryMaker;
    } else if (kind == "CarMaker") {
      m.kind = ManufacturerKind::CarMaker;
    } else {
      throw ParseError(file, 0, "manufacturer '" + m.id + "': kind must be BatteryMaker or CarMaker");
    }
    auto nodes = item.find("nodes");
    if (nodes == item.end() || !nodes->is_array()) {
      throw ParseError(file, 0, "manufacturer '" + m.id + "': 'nodes' must be an array");
    }
    for (const auto& n : *nodes) {
      if (!n.is_string()) throw ParseError(file, 0, "manufacturer '" + m.id + "': node ids must be strings");
      m.nodes.push_back(n.get<std::string>());
    }
    out.push_back(std::move(m));
  }
  return out;
}

std::vector<MarketSales> read_sales(const fs::path& path) {
  csv::Reader reader(path, {"market", "chemistry", "gwh"});
  std::vector<MarketSales> out;
  for (const auto& row : reader.rows()) {
    MarketSales s{reader.text(row, 0), reader.text(row, 1), reader.number(row, 2)};
    if (s.gwh < 0.0) reader.fail(row, "gwh must be >= 0");
    out.push_back(std::move(s));
  }
  return out;
}

// Cross-file references checked with line numbers, for files that carry them.
void check_csv_references(const DatasetManifest& m, const std::set<std::string>& node_ids) {
  auto check = [&](const fs::path& path, std::vector<std::string> header, std::vector<std::size_t> cols) {
    csv::Reader reader(path, std::move(header));
    for (const auto& row : reader.rows()) {
      for (auto c : cols) {
        if (!node_ids.count(row.fields[c])) {
          throw ReferenceError(reader.file() + ":" + std::to_string(row.line) + ": unknown node '" +
                               row.fields[c] + "'");
        }
      }
    }
  };
  check(m.choices, {"phase", "decision", "node_id", "probability"}, {2});
  check(m.conditional_choices, {"phase", "given_node_id", "node_id", "probability"}, {1, 2});
  check(m.links, {"origin", "destination", "land_km", "sea_km", "sea_vessel", "land_vehicle"}, {0, 1});
  check(m.sales, {"market", "chemistry", "gwh"}, {0});
}

std::string phase_str(Phase p) { return std::string(1, phase_letter(p)); }

DecisionPlan make_plan(const ChoiceDistribution& dist, const std::unordered_map<std::string, std::uint32_t>& lookup) {
  DecisionPlan plan;
  for (const auto& opt : dist.options()) {
    plan.nodes.push_back(NodeIndex{lookup.at(opt.node_id)});
    plan.probabilities.push_back(opt.probability);
  }
  plan.cdf = dist.cdf();
  return plan;
}

}  // namespace

DatasetManifest DatasetManifest::in_directory(const fs::path& dir) {
  DatasetManifest m;
  m.nodes = dir / "nodes.csv";
  m.minerals = dir / "minerals.csv";
  m.chemistries = dir / "chemistries.json";
  m.choices = dir / "choices.csv";
  m.conditional_choices = dir / "conditional_choices.csv";
  m.links = dir / "links.csv";
  m.factors = dir / "factors.json";
  m.manufacturers = dir / "manufacturers.json";
  m.sales = dir / "sales.csv";
  return m;
}

DatasetManifest DatasetManifest::from_file(const fs::path& manifest_path) {
  std::error_code ec;
  if (!fs::is_regular_file(manifest_path, ec)) {
    throw ManifestError("manifest not found: " + manifest_path.string());
  }
  const json root = read_json(manifest_path);
  const auto file = manifest_path.filename().string();
  if (!root.is_object()) throw ParseError(file, 1, "manifest must be a JSON object");
  const auto dir = manifest_path.parent_path();
  DatasetManifest m = in_directory(dir);
  auto pick = [&](const char* key, fs::path& target) {
    if (auto it = root.find(key); it != root.end()) {
      if (!it->is_string()) throw ParseError(file, 0, std::string("'") + key + "' must be a path string");
      fs::path p = it->get<std::string>();
      target = p.is_absolute() ? p : dir / p;
    }
  };
  pick("nodes", m.nodes);
  pick("minerals", m.minerals);
  pick("chemistries", m.chemistries);
  pick("choices", m.choices);
  pick("conditional_choices", m.conditional_choices);
  pick("links", m.links);
  pick("factors", m.factors);
  pick("manufacturers", m.manufacturers);
  pick("sales", m.sales);
  if (auto it = root.find("fallback"); it != root.end()) {
    if (!it->is_string()) throw ParseError(file, 0, "'fallback' must be a string");
    try {
      m.fallback = FallbackPolicy::parse(it->get<std::string>());
    } catch (const ArgumentError& e) {
      throw ParseError(file, 0, e.what());
    }
  }
  for (const auto& [label, path] : m.files()) {
    if (!fs::is_regular_file(path, ec)) {
      throw ManifestError("manifest references missing file " + path.string() + " (" + label + ")");
    }
  }
  return m;
}

std::vector<std::pair<std::string, fs::path>> DatasetManifest::files() const {
  return {{"nodes", nodes},
          {"minerals", minerals},
          {"chemistries", chemistries},
          {"choices", choices},
          {"conditional_choices", conditional_choices},
          {"links", links},
          {"factors", factors},
          {"manufacturers", manufacturers},
          {"sales", sales}};
}

std::vector<ChoiceTable> read_choices(const fs::path& path) {
  return read_grouped_choices<ChoiceTable>(path, {"phase", "decision", "node_id", "probability"},
                                           {Phase::Extraction, Phase::Processing, Phase::BatteryProduction});
}

std::vector<ConditionalChoiceTable> read_conditional_choices(const fs::path& path) {
  return read_grouped_choices<ConditionalChoiceTable>(path, {"phase", "given_node_id", "node_id", "probability"},
                                                      {Phase::VehicleProduction, Phase::Market});
}

NetworkData read_network_data(const DatasetManifest& manifest) {
  NetworkData data;
  data.nodes = read_nodes(manifest.nodes);
  std::set<std::string> node_ids;
  for (const auto& n : data.nodes) node_ids.insert(n.id);
  check_csv_references(manifest, node_ids);
  data.minerals = read_minerals(manifest.minerals);
  data.chemistries = read_chemistries(manifest.chemistries);
  data.choice_tables = read_choices(manifest.choices);
  data.conditional_tables = read_conditional_choices(manifest.conditional_choices);
  data.links = read_links(manifest.links);
  data.factors = read_factors(manifest.factors);
  data.manufacturers = read_manufacturers(manifest.manufacturers);
  data.sales = read_sales(manifest.sales);
  return data;
}

SupplyNetwork build_network(NetworkData data, FallbackPolicy fallback) {
  SupplyNetwork net;

  // Nodes.
  for (std::size_t i = 0; i < data.nodes.size(); ++i) {
    const auto& n = data.nodes[i];
    if (n.id.empty()) throw ReferenceError("node with empty id");
    if (!(n.latitude >= -90.0 && n.latitude <= 90.0) || !(n.longitude >= -180.0 && n.longitude <= 180.0)) {
      throw ReferenceError("node '" + n.id + "' has coordinates out of range");
    }
    if (!net.node_lookup_.emplace(n.id, static_cast<std::uint32_t>(i)).second) {
      throw ReferenceError("duplicate node id '" + n.id + "'");
    }
  }
  auto node_with_role = [&](const std::string& id, Phase role, const std::string& where) -> const Node& {
    auto it = net.node_lookup_.find(id);
    if (it == net.node_lookup_.end()) throw ReferenceError(where + ": unknown node '" + id + "'");
    const Node& n = data.nodes[it->second];
    if (!n.roles.contains(role)) {
      throw ReferenceError(where + ": node '" + id + "' lacks phase role " + phase_str(role));
    }
    return n;
  };

  // Minerals.
  if (data.minerals.empty()) throw ReferenceError("dataset defines no minerals");
  std::set<std::string> mineral_ids;
  for (const auto& m : data.minerals) {
    if (!mineral_ids.insert(m.id).second) throw ReferenceError("duplicate mineral id '" + m.id + "'");
  }

  // Chemistries.
  std::set<std::string> chemistry_ids;
  for (const auto& c : data.chemistries) {
    const std::string ctx = "chemistry '" + c.id + "'";
    if (!chemistry_ids.insert(c.id).second) throw ReferenceError("duplicate " + ctx);
    if (c.id == ChoiceTable::kBatteryDecision) throw ReferenceError(ctx + ": id is reserved");
    if (c.mineral_mass.empty()) throw ReferenceError(ctx + " lists no minerals");
    for (const auto& [mineral, mass] : c.mineral_mass) {
      if (!mineral_ids.count(mineral)) throw ReferenceError(ctx + ": unknown mineral '" + mineral + "'");
      if (!(mass > 0.0) || !std::isfinite(mass)) throw ReferenceError(ctx + ": mass of '" + mineral + "' must be > 0");
      auto p = c.processed_mass.find(mineral);
      if (p == c.processed_mass.end()) throw ReferenceError(ctx + ": no processed mass for '" + mineral + "'");
      if (!(p->second > 0.0) || !std::isfinite(p->second)) {
        throw ReferenceError(ctx + ": processed mass of '" + mineral + "' must be > 0");
      }
      if (p->second > mass) throw ReferenceError(ctx + ": processed mass of '" + mineral + "' exceeds extracted mass");
    }
    for (const auto& [mineral, mass] : c.processed_mass) {
      if (!c.mineral_mass.count(mineral)) {
        throw ReferenceError(ctx + ": processed mass for '" + mineral + "' without extracted mass");
      }
    }
    if (!(c.battery_mass_per_kwh > 0.0) || !(c.vehicle_mass_per_kwh > 0.0) ||
        !std::isfinite(c.battery_mass_per_kwh) || !std::isfinite(c.vehicle_mass_per_kwh)) {
      throw ReferenceError(ctx + ": battery and vehicle masses must be > 0");
    }
    if (c.battery_mass_per_kwh > c.vehicle_mass_per_kwh) {
      throw ReferenceError(ctx + ": battery mass exceeds vehicle mass");
    }
  }

  // Choice tables.
  std::set<std::pair<Phase, std::string>> table_keys;
  for (const auto& t : data.choice_tables) {
    const std::string where = std::string("choice table ") + phase_letter(t.phase()) + "/" + t.decision();
    if (!table_keys.insert({t.phase(), t.decision()}).second) throw ReferenceError("duplicate " + where);
    if (t.phase() == Phase::BatteryProduction) {
      if (t.decision() != ChoiceTable::kBatteryDecision && !chemistry_ids.count(t.decision())) {
        throw ReferenceError(where + ": decision must be 'battery' or a chemistry id");
      }
    } else if (!mineral_ids.count(t.decision())) {
      throw ReferenceError(where + ": unknown mineral");
    }
    std::set<std::string> seen;
    for (const auto& opt : t.options()) {
      node_with_role(opt.node_id, t.phase(), where);
      if (!seen.insert(opt.node_id).second) throw ReferenceError(where + ": node '" + opt.node_id + "' listed twice");
    }
  }

  // Conditional tables.
  std::set<std::pair<Phase, std::string>> row_keys;
  for (const auto& t : data.conditional_tables) {
    const std::string where = std::string("conditional table ") + phase_letter(t.phase()) + "|" + t.given();
    if (!row_keys.insert({t.phase(), t.given()}).second) throw ReferenceError("duplicate " + where);
    const Phase prev = static_cast<Phase>(static_cast<int>(t.phase()) - 1);
    node_with_role(t.given(), prev, where);
    std::set<std::string> seen;
    for (const auto& opt : t.options()) {
      node_with_role(opt.node_id, t.phase(), where);
      if (!seen.insert(opt.node_id).second) throw ReferenceError(where + ": node '" + opt.node_id + "' listed twice");
    }
  }

  // Links.
  for (const auto& l : data.links) {
    const std::string where = "link " + l.origin + " -> " + l.destination;
    if (!net.node_lookup_.count(l.origin)) throw ReferenceError(where + ": unknown node '" + l.origin + "'");
    if (!net.node_lookup_.count(l.destination)) throw ReferenceError(where + ": unknown node '" + l.destination + "'");
    if (!(l.land_km >= 0.0) || !(l.sea_km >= 0.0) || !std::isfinite(l.land_km) || !std::isfinite(l.sea_km)) {
      throw ReferenceError(where + ": distances must be finite and >= 0");
    }
    if (l.sea_km > 0.0 && l.sea_vessel == SeaVessel::None) throw ReferenceError(where + ": sea leg without vessel");
    if (l.land_km > 0.0 && l.land_vehicle == LandVehicle::None) throw ReferenceError(where + ": land leg without vehicle");
  }

  // Factors.
  const auto& f = data.factors;
  for (double v : {f.gamma1, f.gamma2, f.gamma3, f.beta1, f.beta2}) {
    if (!(v > 0.0) || !std::isfinite(v)) throw ReferenceError("emission factors must all be > 0");
  }

  // Manufacturers.
  std::set<std::string> maker_ids;
  for (const auto& m : data.manufacturers) {
    const std::string where = "manufacturer '" + m.id + "'";
    if (!maker_ids.insert(m.id).second) throw ReferenceError("duplicate " + where);
    if (m.nodes.empty()) throw ReferenceError(where + " operates no nodes");
    const Phase role = m.kind == ManufacturerKind::BatteryMaker ? Phase::BatteryProduction : Phase::VehicleProduction;
    for (const auto& id : m.nodes) node_with_role(id, role, where);
  }

  // Sales.
  for (const auto& s : data.sales) {
    const std::string where = "sales " + s.market + "/" + s.chemistry;
    node_with_role(s.market, Phase::Market, where);
    if (!chemistry_ids.count(s.chemistry)) throw ReferenceError(where + ": unknown chemistry");
    if (!(s.gwh >= 0.0) || !std::isfinite(s.gwh)) throw ReferenceError(where + ": gwh must be finite and >= 0");
  }

  // Sampling plans, one per chemistry.
  auto table = [&](Phase phase, const std::string& decision) -> const ChoiceTable* {
    for (const auto& t : data.choice_tables) {
      if (t.phase() == phase && t.decision() == decision) return &t;
    }
    return nullptr;
  };
  std::set<std::uint32_t> reachable_b;
  for (std::size_t c = 0; c < data.chemistries.size(); ++c) {
    const auto& chem = data.chemistries[c];
    ChemistryPlan plan;
    plan.chemistry = c;
    plan.minerals = chem.subset();
    for (const auto& mineral : plan.minerals) {
      const auto* e = table(Phase::Extraction, mineral);
      const auto* p = table(Phase::Processing, mineral);
      if (!e || !p) {
        throw CoverageError("chemistry '" + chem.id + "' needs E and P choice tables for mineral '" + mineral + "'");
      }
      plan.extraction.push_back(make_plan(e->distribution(), net.node_lookup_));
      plan.processing.push_back(make_plan(p->distribution(), net.node_lookup_));
    }
    const auto* b = table(Phase::BatteryProduction, chem.id);
    if (!b) b = table(Phase::BatteryProduction, std::string(ChoiceTable::kBatteryDecision));
    if (!b) throw CoverageError("no battery-production choice table applies to chemistry '" + chem.id + "'");
    plan.battery = make_plan(b->distribution(), net.node_lookup_);
    for (std::size_t j = 0; j < plan.battery.nodes.size(); ++j) {
      if (plan.battery.probabilities[j] > 0.0) reachable_b.insert(plan.battery.nodes[j].value);
    }
    net.plans_.push_back(std::move(plan));
  }

  // Conditional rows, indexed densely; coverage checked eagerly.
  net.vehicle_rows_.assign(data.nodes.size(), std::nullopt);
  net.market_rows_.assign(data.nodes.size(), std::nullopt);
  for (const auto& t : data.conditional_tables) {
    auto given = net.node_lookup_.at(t.given());
    auto& rows = t.phase() == Phase::VehicleProduction ? net.vehicle_rows_ : net.market_rows_;
    rows[given] = make_plan(t.distribution(), net.node_lookup_);
  }
  std::set<std::uint32_t> reachable_v;
  for (auto b : reachable_b) {
    if (!net.vehicle_rows_[b]) {
      throw CoverageError("battery node '" + data.nodes[b].id + "' is reachable but has no V conditional row");
    }
    const auto& row = *net.vehicle_rows_[b];
    for (std::size_t j = 0; j < row.nodes.size(); ++j) {
      if (row.probabilities[j] > 0.0) reachable_v.insert(row.nodes[j].value);
    }
  }
  for (auto v : reachable_v) {
    if (!net.market_rows_[v]) {
      throw CoverageError("vehicle node '" + data.nodes[v].id + "' is reachable but has no M conditional row");
    }
  }

  net.links_ = LinkSet(data.links);
  net.fallback_ = fallback;

  // Resolve every leg a scenario can produce.
  auto cache = [&](NodeIndex o, NodeIndex d, Transition t) {
    auto key = SupplyNetwork::leg_key(o, d, t);
    if (net.leg_cache_.count(key)) return;
    net.leg_cache_.emplace(key, resolve_distance(data.nodes[o.value], data.nodes[d.value], net.links_, fallback, t));
  };
  auto support = [](const DecisionPlan& plan) {
    std::vector<NodeIndex> out;
    for (std::size_t j = 0; j < plan.nodes.size(); ++j) {
      if (plan.probabilities[j] > 0.0) out.push_back(plan.nodes[j]);
    }
    return out;
  };
  for (const auto& plan : net.plans_) {
    const auto battery = support(plan.battery);
    for (std::size_t i = 0; i < plan.minerals.size(); ++i) {
      const auto processing = support(plan.processing[i]);
      for (auto e : support(plan.extraction[i])) {
        for (auto p : processing) cache(e, p, Transition::EP);
      }
      for (auto p : processing) {
        for (auto b : battery) cache(p, b, Transition::PB);
      }
    }
  }
  for (auto b : reachable_b) {
    for (auto v : support(*net.vehicle_rows_[b])) cache(NodeIndex{b}, v, Transition::BV);
  }
  for (auto v : reachable_v) {
    for (auto m : support(*net.market_rows_[v])) cache(NodeIndex{v}, m, Transition::VM);
  }

  net.data_ = std::move(data);
  return net;
}

SupplyNetwork load_network(const DatasetManifest& manifest) {
  return build_network(read_network_data(manifest), manifest.fallback);
}

ResolvedLeg SupplyNetwork::leg(NodeIndex origin, NodeIndex destination, Transition t) const {
  if (auto it = leg_cache_.find(leg_key(origin, destination, t)); it != leg_cache_.end()) return it->second;
  return resolve_distance(node(origin), node(destination), links_, fallback_, t);
}

double haversine_km(double lat1_deg, double lon1_deg, double lat2_deg, double lon2_deg) {
  constexpr double rad = std::numbers::pi / 180.0;
  const double phi1 = lat1_deg * rad;
  const double phi2 = lat2_deg * rad;
  const double dphi = (lat2_deg - lat1_deg) * rad;
  const double dlambda = (lon2_deg - lon1_deg) * rad;
  const double s1 = std::sin(dphi / 2.0);
  const double s2 = std::sin(dlambda / 2.0);
  const double a = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  return 2.0 * kEarthRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

ResolvedLeg resolve_distance(const Node& origin, const Node& destination, const LinkSet& links,
                             const FallbackPolicy& policy, Transition transition) {
  if (origin.id == destination.id) return {};
  if (const auto* link = links.find(origin.id, destination.id)) {
    return {link->land_km, link->sea_km, link->sea_vessel, link->land_vehicle};
  }
  if (policy.kind == FallbackPolicy::Kind::Error) {
    throw MissingLinkError("no link " + origin.id + " -> " + destination.id + " and fallback policy is 'error'");
  }
  ResolvedLeg leg;
  leg.sea_km = haversine_km(origin.latitude, origin.longitude, destination.latitude, destination.longitude) *
               policy.detour_factor;
  switch (transition) {
    case Transition::EP:
    case Transition::PB: leg.sea_vessel = SeaVessel::BulkCarrier; break;
    case Transition::BV: leg.sea_vessel = SeaVessel::ContainerShip; break;
    case Transition::VM: leg.sea_vessel = SeaVessel::VehicleCarrier; break;
  }
  if (leg.sea_km == 0.0) leg.sea_vessel = SeaVessel::None;
  return leg;
}

ScenarioCount count_scenarios(const SupplyNetwork& network, std::string_view chemistry,
                              std::uint64_t enumeration_cap) {
  const auto& plan = network.plan(chemistry);
  auto support = [](const DecisionPlan& p) {
    std::uint64_t n = 0;
    for (double prob : p.probabilities) n += prob > 0.0 ? 1 : 0;
    return n;
  };

  BigCount independent = 1;
  for (const auto& e : plan.extraction) independent *= support(e);
  for (const auto& p : plan.processing) independent *= support(p);

  // Walk the conditional tree B -> V -> M.
  std::uint64_t widest_v = 0;
  std::uint64_t widest_m = 0;
  std::uint64_t branches = 0;
  BigCount chains = 0;
  std::uint64_t battery_support = 0;
  for (std::size_t b = 0; b < plan.battery.nodes.size(); ++b) {
    if (!(plan.battery.probabilities[b] > 0.0)) continue;
    ++battery_support;
    const auto* vrow = network.vehicle_row(plan.battery.nodes[b]);
    if (!vrow) throw CoverageError("missing V row during counting");
    widest_v = std::max(widest_v, support(*vrow));
    for (std::size_t v = 0; v < vrow->nodes.size(); ++v) {
      if (!(vrow->probabilities[v] > 0.0)) continue;
      const auto* mrow = network.market_row(vrow->nodes[v]);
      if (!mrow) throw CoverageError("missing M row during counting");
      const auto width = support(*mrow);
      widest_m = std::max(widest_m, width);
      ++branches;
      chains += width;
    }
  }

  ScenarioCount out;
  out.upper_bound = independent * battery_support * widest_v * widest_m;
  if (branches <= enumeration_cap) out.reachable = independent * chains;
  return out;
}

void write_dataset(const NetworkData& data, const FallbackPolicy& fallback, const fs::path& dir) {
  fs::create_directories(dir);
  auto open = [&](const char* name) {
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw IoError("cannot write " + (dir / name).string());
    return out;
  };
  using csv::escape_field;
  using csv::format_number;
  {
    auto out = open("nodes.csv");
    out << "id,name,region,lat,lon,roles\n";
    for (const auto& n : data.nodes) {
      out << escape_field(n.id) << ',' << escape_field(n.name) << ',' << escape_field(n.region) << ','
          << format_number(n.latitude) << ',' << format_number(n.longitude) << ',' << roles_to_string(n.roles) << '\n';
    }
  }
  {
    auto out = open("minerals.csv");
    out << "id,name\n";
    for (const auto& m : data.minerals) out << escape_field(m.id) << ',' << escape_field(m.name) << '\n';
  }
  {
    json root = json::object();
    for (const auto& c : data.chemistries) {
      root[c.id] = {{"mineral_mass", c.mineral_mass},
                    {"processed_mass", c.processed_mass},
                    {"battery_mass_per_kwh", c.battery_mass_per_kwh},
                    {"vehicle_mass_per_kwh", c.vehicle_mass_per_kwh}};
    }
    open("chemistries.json") << root.dump(2) << '\n';
  }
  {
    auto out = open("choices.csv");
    out << "phase,decision,node_id,probability\n";
    for (const auto& t : data.choice_tables) {
      for (const auto& o : t.options()) {
        out << phase_letter(t.phase()) << ',' << escape_field(t.decision()) << ',' << escape_field(o.node_id) << ','
            << format_number(o.probability) << '\n';
      }
    }
  }
  {
    auto out = open("conditional_choices.csv");
    out << "phase,given_node_id,node_id,probability\n";
    for (const auto& t : data.conditional_tables) {
      for (const auto& o : t.options()) {
        out << phase_letter(t.phase()) << ',' << escape_field(t.given()) << ',' << escape_field(o.node_id) << ','
            << format_number(o.probability) << '\n';
      }
    }
  }
  {
    auto out = open("links.csv");
    out << "origin,destination,land_km,sea_km,sea_vessel,land_vehicle\n";
    for (const auto& l : data.links) {
      out << escape_field(l.origin) << ',' << escape_field(l.destination) << ',' << format_number(l.land_km) << ','
          << format_number(l.sea_km) << ',' << vessel_name(l.sea_vessel) << ',' << vehicle_name(l.land_vehicle) << '\n';
    }
  }
  {
    const auto& f = data.factors;
    json root = {{"gamma1", f.gamma1}, {"gamma2", f.gamma2}, {"gamma3", f.gamma3}, {"beta1", f.beta1}, {"beta2", f.beta2}};
    open("factors.json") << root.dump(2) << '\n';
  }
  {
    json root = json::array();
    for (const auto& m : data.manufacturers) {
      root.push_back({{"id", m.id}, {"kind", std::string(manufacturer_kind_name(m.kind))}, {"nodes", m.nodes}});
    }
    open("manufacturers.json") << root.dump(2) << '\n';
  }
  {
    auto out = open("sales.csv");
    out << "market,chemistry,gwh\n";
    for (const auto& s : data.sales) {
      out << escape_field(s.market) << ',' << escape_field(s.chemistry) << ',' << format_number(s.gwh) << '\n';
    }
  }
  {
    json manifest = {{"nodes", "nodes.csv"},
                     {"minerals", "minerals.csv"},
                     {"chemistries", "chemistries.json"},
                     {"choices", "choices.csv"},
                     {"conditional_choices", "conditional_choices.csv"},
                     {"links", "links.csv"},
                     {"factors", "factors.json"},
                     {"manufacturers", "manufacturers.json"},
                     {"sales", "sales.csv"},
                     {"fallback", fallback.to_string()}};
    open("manifest.json") << manifest.dump(2) << '\n';
  }
}

}  // namespace evchain
