#include "evchain/cli.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "evchain/csv.hpp"
#include "evchain/emissions.hpp"
#include "evchain/engine.hpp"
#include "evchain/errors.hpp"
#include "evchain/hubopt.hpp"
#include "evchain/massflow.hpp"

namespace evchain::cli {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

void RunConfig::validate() const {
  if (iterations < 1) throw ArgumentError("--iterations must be >= 1");
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) throw ArgumentError("--bin-width must be > 0");
  if (checkpoints) {
    for (auto c : *checkpoints) {
      if (c < 1 || c > iterations) {
        throw ArgumentError("checkpoint " + std::to_string(c) + " outside [1, " + std::to_string(iterations) + "]");
      }
    }
  }
}

std::vector<std::uint64_t> RunConfig::effective_checkpoints() const {
  return checkpoints ? *checkpoints : kDefaultCheckpoints;
}

unsigned RunConfig::effective_workers() const {
  if (workers > 0) return workers;
  return std::max(1U, std::thread::hardware_concurrency());
}

DatasetManifest resolve_manifest(const fs::path& path, const std::optional<std::string>& fallback) {
  DatasetManifest manifest;
  if (fs::is_directory(path)) {
    const auto file = path / "manifest.json";
    manifest = fs::exists(file) ? DatasetManifest::from_file(file) : DatasetManifest::in_directory(path);
  } else {
    manifest = DatasetManifest::from_file(path);
  }
  if (fallback) manifest.fallback = FallbackPolicy::parse(*fallback);
  return manifest;
}

std::string dataset_sha256(const DatasetManifest& manifest) {
  EVP_MD_CTX* ctx = EVP_MD_CTX_new();
  if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
    EVP_MD_CTX_free(ctx);
    throw Error("sha256 unavailable");
  }
  auto update = [&](const void* data, std::size_t n) { EVP_DigestUpdate(ctx, data, n); };
  for (const auto& [label, path] : manifest.files()) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      EVP_MD_CTX_free(ctx);
      throw IoError("cannot read '" + path.string() + "'");
    }
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    const std::string frame = label + '\0' + std::to_string(bytes.size()) + '\0';
    update(frame.data(), frame.size());
    update(bytes.data(), bytes.size());
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::ostringstream hex;
  for (unsigned i = 0; i < len; ++i) hex << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return hex.str();
}

int exit_code_for(const std::exception& e) noexcept {
  if (dynamic_cast<const InfeasibleError*>(&e)) return kInfeasible;
  if (dynamic_cast<const IoError*>(&e)) return kIo;
  if (dynamic_cast<const DatasetError*>(&e) || dynamic_cast<const ArgumentError*>(&e) ||
      dynamic_cast<const MissingMassError*>(&e) || dynamic_cast<const EmptyError*>(&e)) {
    return kValidation;
  }
  if (dynamic_cast<const fs::filesystem_error*>(&e)) return kIo;
  return kUnexpected;
}

namespace {

std::vector<std::string> chemistry_ids(const SupplyNetwork& network, const RunConfig& config) {
  if (!config.chemistries.empty()) {
    for (const auto& c : config.chemistries) network.chemistry(c);
    return config.chemistries;
  }
  std::vector<std::string> out;
  for (const auto& c : network.chemistries()) out.push_back(c.id);
  return out;
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double percent(double part, double whole) { return whole == 0.0 ? 0.0 : 100.0 * part / whole; }

void add_maker_rows(Table& table, const SupplyNetwork& network, const ChemistryRun& run, ManufacturerKind kind) {
  const auto& stats = kind == ManufacturerKind::CarMaker ? run.by_vehicle_node : run.by_battery_node;
  for (const auto& maker : network.manufacturers()) {
    if (maker.kind != kind) continue;
    MeanAccumulator acc;
    for (const auto& id : maker.nodes) {
      auto it = stats.find(network.node_index(id));
      if (it != stats.end()) acc.merge(it->second);
    }
    if (acc.count == 0) continue;
    table.add({run.chemistry, maker.id, acc.mean(), static_cast<std::int64_t>(acc.count)});
  }
}

}  // namespace

void cmd_validate(const RunConfig& config, std::ostream& out) {
  const auto manifest = resolve_manifest(config.manifest, config.fallback);
  const auto network = load_network(manifest);
  const auto& d = network.data();
  out << "dataset ok: " << config.manifest.string() << "\n";
  out << "  nodes: " << d.nodes.size() << "\n";
  out << "  minerals: " << d.minerals.size() << "\n";
  out << "  chemistries: " << d.chemistries.size() << "\n";
  out << "  choice tables: " << d.choice_tables.size() << "\n";
  out << "  conditional rows: " << d.conditional_tables.size() << "\n";
  out << "  links: " << d.links.size() << "\n";
  out << "  manufacturers: " << d.manufacturers.size() << "\n";
  out << "  sales rows: " << d.sales.size() << "\n";
  out << "  fallback: " << network.fallback().to_string() << "\n";
  for (const auto& chem : chemistry_ids(network, config)) {
    const auto count = count_scenarios(network, chem);
    out << "  scenarios " << chem << ": upper_bound=" << count.upper_bound.str()
        << " reachable=" << (count.reachable ? count.reachable->str() : std::string("not enumerated")) << "\n";
  }
}

void cmd_count_scenarios(const RunConfig& config, std::ostream& out) {
  const auto network = load_network(resolve_manifest(config.manifest, config.fallback));
  Table table{{"chemistry", "upper_bound", "reachable"}, {}};
  for (const auto& chem : chemistry_ids(network, config)) {
    const auto count = count_scenarios(network, chem);
    table.add({chem, count.upper_bound.str(), count.reachable ? Cell{count.reachable->str()} : Cell{}});
  }
  out << (config.format == OutputFormat::Csv ? to_csv(table) : to_json(table));
}

void cmd_simulate(const RunConfig& config, std::ostream& log) {
  config.validate();
  const auto manifest = resolve_manifest(config.manifest, config.fallback);
  const auto network = load_network(manifest);
  const auto chemistries = chemistry_ids(network, config);
  prepare_out_dir(config.out_dir);

  SimulationOptions options;
  options.iterations = config.iterations;
  options.seed = config.master_seed;
  options.workers = config.effective_workers();
  options.bin_width = config.bin_width;
  options.checkpoints = config.effective_checkpoints();

  Table convergence{{"chemistry", "n", "mean_kg_per_kwh", "relative_change"}, {}};
  Table phase{{"chemistry", "phase", "kg_per_kwh", "percent", "land_kg_per_kwh", "sea_kg_per_kwh"}, {}};
  Table mode{{"chemistry", "mode", "kg_per_kwh", "percent"}, {}};
  Table carmaker{{"chemistry", "manufacturer", "kg_per_kwh", "iterations"}, {}};
  Table batterymaker{{"chemistry", "manufacturer", "kg_per_kwh", "iterations"}, {}};
  Table market{{"chemistry", "market", "region", "kg_per_kwh", "iterations"}, {}};
  Table totals{{"chemistry", "market", "gwh", "kg_per_kwh", "total_kg"}, {}};
  Table massflow{{"chemistry", "transition", "origin", "destination", "origin_region", "destination_region",
                  "kg_per_100kwh"},
                 {}};
  Table resilience{{"chemistry", "metric", "phase", "region", "value"}, {}};

  for (const auto& chem : chemistries) {
    const auto run = run_chemistry(network, chem, options);
    const double n = static_cast<double>(run.iterations);

    Table pmf{{"series", "bin_lower", "mass"}, {}};
    auto add_pmf = [&](const std::string& series, const Histogram& hist) {
      const auto p = pmf_from_counts(hist, run.bin_width);
      for (const auto& [bin, mass] : p.bins) pmf.add({series, p.lower_edge(bin), mass});
    };
    add_pmf("total", run.total_histogram);
    for (auto t : kAllTransitions) add_pmf(std::string(transition_name(t)), run.phase_histogram[static_cast<int>(t)]);
    write_table(config.out_dir, "pmf_" + chem, pmf, config.format);

    const auto report = cumulative_average(std::span<const double>(run.totals), options.checkpoints);
    for (std::size_t i = 0; i < report.checkpoints.size(); ++i) {
      const auto [cn, mean] = report.checkpoints[i];
      Cell change = i == 0 ? Cell{} : Cell{report.relative_change[i - 1]};
      convergence.add({chem, static_cast<std::int64_t>(cn), mean, change});
      log << "[" << chem << "] N=" << cn << " mean=" << csv::format_number(mean);
      if (i > 0) log << " relative_change=" << csv::format_number(report.relative_change[i - 1]);
      log << "\n";
    }

    std::array<double, 4> phase_mean{};
    std::array<double, 2> mode_mean{};
    for (std::size_t t = 0; t < 4; ++t) {
      phase_mean[t] = run.phase_sum[t] / n;
      for (std::size_t m = 0; m < 2; ++m) mode_mean[m] += run.phase_mode_sum[t][m] / n;
    }
    const double phase_total = ((phase_mean[0] + phase_mean[1]) + phase_mean[2]) + phase_mean[3];
    const double mode_total = mode_mean[0] + mode_mean[1];
    for (auto t : kAllTransitions) {
      const auto ti = static_cast<std::size_t>(t);
      phase.add({chem, std::string(transition_name(t)), phase_mean[ti], percent(phase_mean[ti], phase_total),
                 run.phase_mode_sum[ti][0] / n, run.phase_mode_sum[ti][1] / n});
    }
    for (auto m : {TransportMode::Land, TransportMode::Sea}) {
      const auto mi = static_cast<std::size_t>(m);
      mode.add({chem, std::string(mode_name(m)), mode_mean[mi], percent(mode_mean[mi], mode_total)});
    }

    add_maker_rows(carmaker, network, run, ManufacturerKind::CarMaker);
    add_maker_rows(batterymaker, network, run, ManufacturerKind::BatteryMaker);
    for (const auto& [idx, acc] : run.by_market_node) {
      const auto& node = network.node(idx);
      market.add({chem, node.id, node.region, acc.mean(), static_cast<std::int64_t>(acc.count)});
    }
    for (const auto& s : network.sales()) {
      if (s.chemistry != chem) continue;
      auto it = run.by_market_node.find(network.node_index(s.market));
      if (it == run.by_market_node.end()) {
        totals.add({chem, s.market, s.gwh, Cell{}, Cell{}});
      } else {
        const double mean = it->second.mean();
        totals.add({chem, s.market, s.gwh, mean, mean * s.gwh * 1e6});
      }
    }

    for (const auto& [key, kg] : run.ledger.per_basis()) {
      const auto& o = network.node(key.origin);
      const auto& d = network.node(key.destination);
      massflow.add({chem, std::string(transition_name(key.transition)), o.id, d.id, o.region, d.region, kg});
    }
    const auto res = resilience_report(run.ledger, network);
    for (const auto& [key, share] : res.market_share) {
      resilience.add({chem, std::string("market_share"), std::string(1, phase_letter(key.first)), key.second, share});
    }
    for (const auto& [region, f] : res.domestic_fraction) {
      resilience.add({chem, std::string("domestic_fraction"), Cell{}, region, f});
    }
    for (const auto& [region, b] : res.flow_balance) {
      resilience.add({chem, std::string("flow_balance"), Cell{}, region, b});
    }
  }

  write_table(config.out_dir, "convergence", convergence, config.format);
  write_table(config.out_dir, "breakdown_phase", phase, config.format);
  write_table(config.out_dir, "breakdown_mode", mode, config.format);
  write_table(config.out_dir, "breakdown_carmaker", carmaker, config.format);
  write_table(config.out_dir, "breakdown_batterymaker", batterymaker, config.format);
  write_table(config.out_dir, "breakdown_market", market, config.format);
  write_table(config.out_dir, "totals_by_market", totals, config.format);
  write_table(config.out_dir, "massflow", massflow, config.format);
  write_table(config.out_dir, "resilience", resilience, config.format);

  ordered_json meta;
  meta["seed"] = config.master_seed;
  meta["iterations"] = config.iterations;
  meta["chemistries"] = chemistries;
  meta["bin_width"] = config.bin_width;
  meta["checkpoints"] = options.checkpoints;
  meta["fallback"] = network.fallback().to_string();
  meta["dataset_sha256"] = dataset_sha256(manifest);
  meta["timestamp"] = utc_timestamp();
  write_text(config.out_dir / "run_meta.json", meta.dump(2) + "\n");
}

void cmd_optimize(const RunConfig& config, const fs::path& scenario_path, std::ostream& log) {
  config.validate();
  const auto manifest = resolve_manifest(config.manifest, config.fallback);
  const auto current = load_network(manifest);
  auto scenario = OptimizationScenario::from_file(scenario_path);
  if (scenario.chemistries.empty() && !config.chemistries.empty()) scenario.chemistries = config.chemistries;
  const bool has_future = scenario.future_choices || scenario.future_conditional_choices;
  const auto future = has_future ? future_network(current, scenario) : current;
  prepare_out_dir(config.out_dir);

  SimulationOptions options;
  options.iterations = config.iterations;
  options.seed = config.master_seed;
  options.workers = config.effective_workers();
  options.bin_width = config.bin_width;
  options.checkpoints = {};

  const auto comparison = compare_structures(current, has_future ? future : current, scenario, options);

  ordered_json solutions = ordered_json::array();
  Table table{{"group", "p", "current", "future", "optimized", "current_hub_bound"}, {}};
  for (const auto& g : comparison.groups) {
    const auto check = check_feasibility(g.instance, g.solution);
    if (!check.feasible) throw Error("optimizer returned an infeasible solution for group '" + g.group + "'");
    ordered_json entry;
    entry["group"] = g.group;
    entry["p"] = g.p;
    const auto sol = solution_to_json(g.instance, g.solution);
    entry["selected_hubs"] = sol["selected_hubs"];
    entry["sourcing"] = sol["sourcing"];
    entry["objective"] = g.solution.objective;
    entry["instance"] = instance_to_json(g.instance);
    solutions.push_back(std::move(entry));
    table.add({g.group, static_cast<std::int64_t>(g.p), g.current, g.future, g.optimized,
               g.current_hub_bound ? Cell{*g.current_hub_bound} : Cell{}});
    log << "[" << g.group << "] current=" << csv::format_number(g.current)
        << " future=" << csv::format_number(g.future) << " optimized=" << csv::format_number(g.optimized)
        << " hubs=";
    for (std::size_t i = 0; i < g.solution.selected_hubs.size(); ++i) {
      log << (i ? "," : "") << g.instance.hubs[g.solution.selected_hubs[i]];
    }
    log << "\n";
  }
  for (auto kind : {StructureKind::Current, StructureKind::Future, StructureKind::Optimized}) {
    log << structure_name(kind) << " order:";
    for (const auto& name : comparison.order(kind)) log << " " << name;
    log << "\n";
  }
  write_text(config.out_dir / "hub_solution.json", ordered_json{{"groups", solutions}}.dump(2) + "\n");
  write_table(config.out_dir, "comparison", table, config.format);
}

namespace {

void add_common(CLI::App* cmd, RunConfig& config) {
  cmd->add_option("--manifest", config.manifest, "Dataset manifest file or directory");
  cmd->add_option("--chemistry", config.chemistries, "Chemistry to run (repeatable; default all)");
  cmd->add_option("--fallback", config.fallback, "Distance fallback: error | great-circle[:<factor>]");
}

void add_run_options(CLI::App* cmd, RunConfig& config, std::string& format) {
  cmd->add_option("--iterations,-n", config.iterations, "Monte Carlo iterations per chemistry");
  cmd->add_option("--seed", config.master_seed, "Master seed");
  cmd->add_option("--bin-width", config.bin_width, "PMF bin width in kg e-CO2/kWh");
  cmd->add_option("--checkpoints", config.checkpoints, "Iteration counts for the convergence report")
      ->delimiter(',');
  cmd->add_option("--out", config.out_dir, "Output directory");
  cmd->add_option("--format", format, "Output format: csv | json");
  cmd->add_option("--workers", config.workers, "Worker threads (0: all cores)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monte Carlo transport emissions of the EV battery supply chain"};
  app.require_subcommand(1);
  RunConfig config;
  std::string format = "csv";
  fs::path scenario;

  auto* validate = app.add_subcommand("validate", "Validate a dataset and print a summary");
  add_common(validate, config);
  auto* count = app.add_subcommand("count-scenarios", "Count scenarios per chemistry");
  add_common(count, config);
  count->add_option("--format", format, "Output format: csv | json");
  auto* simulate = app.add_subcommand("simulate", "Run the simulation and write reports");
  add_common(simulate, config);
  add_run_options(simulate, config, format);
  auto* optimize = app.add_subcommand("optimize", "Solve the hub problem and compare market structures");
  add_common(optimize, config);
  add_run_options(optimize, config, format);
  optimize->add_option("--scenario", scenario, "Optimization scenario file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kOk : kValidation;
  }

  try {
    config.format = parse_format(format);
    if (*validate) {
      cmd_validate(config, out);
    } else if (*count) {
      cmd_count_scenarios(config, out);
    } else if (*simulate) {
      cmd_simulate(config, err);
      out << "reports written to " << config.out_dir.string() << "\n";
    } else if (*optimize) {
      cmd_optimize(config, scenario, err);
      out << "hub solutions written to " << config.out_dir.string() << "\n";
    }
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return exit_code_for(e);
  }
  return kOk;
}

}  // namespace evchain::cli
