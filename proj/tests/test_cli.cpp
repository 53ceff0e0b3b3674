#include "doctest.h"

#include <fstream>
#include <sstream>

#include "evchain/cli.hpp"
#include "evchain/csv.hpp"
#include "evchain/errors.hpp"
#include "evchain/hubopt.hpp"
#include "json.hpp"
#include "support.hpp"

using namespace evchain;
using namespace evchain::testing;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
};

Outcome invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "evchain");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> read_rows(const fs::path& path) {
  std::istringstream in(read_file(path));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) rows.push_back(csv::split_line(line));
  return rows;
}

std::map<std::string, std::string> output_files(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    const auto name = entry.path().filename().string();
    if (name == "run_meta.json") {
      auto meta = nlohmann::json::parse(read_file(entry.path()));
      meta.erase("timestamp");
      files[name] = meta.dump();
    } else {
      files[name] = read_file(entry.path());
    }
  }
  return files;
}

}  // namespace

TEST_CASE("validate and count-scenarios") {
  const auto ok = invoke({"validate", "--manifest", bundled_manifest().string()});
  CHECK(ok.code == cli::kOk);
  CHECK(ok.out.find("scenarios NMC:") != std::string::npos);

  TempDir dir("cli-count");
  write_dataset(fig6_data(), FallbackPolicy{}, dir.path());
  const auto count = invoke({"count-scenarios", "--manifest", dir.path().string()});
  CHECK(count.code == cli::kOk);
  CHECK(count.out.find("F,2187,2187") != std::string::npos);
}

TEST_CASE("validation failures exit with code 2") {
  TempDir dir("cli-bad");
  write_dataset(singleton_data(), FallbackPolicy{}, dir.path());
  auto text = read_file(dir.path() / "choices.csv");
  const auto pos = text.find("B,battery,B1,1");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 14, "B,battery,B1,0.8");
  std::ofstream(dir.path() / "choices.csv", std::ios::trunc) << text;
  const auto bad = invoke({"validate", "--manifest", dir.path().string()});
  CHECK(bad.code == cli::kValidation);
  CHECK(bad.err.find("choices.csv:4") != std::string::npos);

  CHECK(invoke({"validate", "--manifest", (dir.path() / "missing.json").string()}).code == cli::kValidation);
  CHECK(invoke({"simulate", "--manifest", bundled_manifest().string(), "-n", "0"}).code == cli::kValidation);
  CHECK(invoke({"simulate", "--manifest", bundled_manifest().string(), "--bin-width", "-1"}).code ==
        cli::kValidation);
  CHECK(invoke({"simulate", "--manifest", bundled_manifest().string(), "-n", "10", "--checkpoints", "20"}).code ==
        cli::kValidation);
  CHECK(invoke({"simulate", "--manifest", bundled_manifest().string(), "--format", "xml"}).code == cli::kValidation);
  CHECK(invoke({"simulate", "--no-such-flag"}).code == cli::kValidation);
  CHECK(invoke({}).code == cli::kValidation);
  CHECK(invoke({"--help"}).code == cli::kOk);
}

TEST_CASE("a single iteration on the singleton network reproduces the hand values") {
  TempDir data("cli-single-data");
  TempDir out("cli-single-out");
  write_dataset(singleton_data(), FallbackPolicy::error(), data.path());
  const auto r = invoke({"simulate", "--manifest", data.path().string(), "-n", "1", "--out", out.path().string()});
  REQUIRE(r.code == cli::kOk);

  const auto phase = read_rows(out.path() / "breakdown_phase.csv");
  REQUIRE(phase.size() == 4);
  const double expected[] = {0.1, 0.05, 0.03, 0.6};
  double percent = 0.0;
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(std::stod(phase[i][2]) == doctest::Approx(expected[i]));
    percent += std::stod(phase[i][3]);
  }
  CHECK(std::abs(percent - 100.0) <= 1e-6);
  CHECK(std::stod(phase[3][3]) == doctest::Approx(76.923).epsilon(1e-4));

  const auto mode = read_rows(out.path() / "breakdown_mode.csv");
  REQUIRE(mode.size() == 2);
  CHECK(std::abs(std::stod(mode[0][3]) + std::stod(mode[1][3]) - 100.0) <= 1e-6);
  CHECK(std::stod(mode[1][2]) == doctest::Approx(0.68));

  const auto totals = read_rows(out.path() / "totals_by_market.csv");
  REQUIRE(totals.size() == 1);
  CHECK(std::stod(totals[0][4]) == doctest::Approx(0.78 * 2.0 * 1e6));

  const auto pmf = read_rows(out.path() / "pmf_C.csv");
  CHECK(pmf.front() == std::vector<std::string>{"total", "0.5", "1"});

  const auto carmaker = read_rows(out.path() / "breakdown_carmaker.csv");
  REQUIRE(carmaker.size() == 1);
  CHECK(carmaker[0][1] == "CarCo");

  const auto meta = nlohmann::json::parse(read_file(out.path() / "run_meta.json"));
  CHECK(meta["iterations"] == 1);
  CHECK(meta["seed"] == 42);
  CHECK(meta["fallback"] == "error");
  CHECK(meta["dataset_sha256"].get<std::string>().size() == 64);
}

TEST_CASE("reruns and worker counts give identical outputs") {
  TempDir a("cli-w1"), b("cli-w4"), c("cli-rerun");
  const auto manifest = bundled_manifest().string();
  auto sim = [&](const fs::path& out, const char* workers) {
    return invoke({"simulate", "--manifest", manifest, "-n", "9000", "--seed", "7", "--checkpoints", "1000,5000",
                   "--workers", workers, "--out", out.string()})
        .code;
  };
  REQUIRE(sim(a.path(), "1") == cli::kOk);
  REQUIRE(sim(b.path(), "4") == cli::kOk);
  REQUIRE(sim(c.path(), "1") == cli::kOk);
  const auto fa = output_files(a.path());
  CHECK(fa.size() == 13);
  CHECK(fa == output_files(b.path()));
  CHECK(fa == output_files(c.path()));
}

TEST_CASE("json output format") {
  TempDir out("cli-json");
  const auto r = invoke({"simulate", "--manifest", bundled_manifest().string(), "-n", "500", "--chemistry", "LFP",
                         "--format", "json", "--out", out.path().string()});
  REQUIRE(r.code == cli::kOk);
  const auto phase = nlohmann::json::parse(read_file(out.path() / "breakdown_phase.json"));
  REQUIRE(phase.is_array());
  CHECK(phase.size() == 4);
  CHECK(phase[0]["chemistry"] == "LFP");
  CHECK(fs::exists(out.path() / "pmf_LFP.json"));
}

TEST_CASE("the dataset hash follows the bytes") {
  TempDir a("cli-hash-a"), b("cli-hash-b");
  write_dataset(tiny_data(true), FallbackPolicy{}, a.path());
  write_dataset(tiny_data(true), FallbackPolicy{}, b.path());
  const auto ha = cli::dataset_sha256(cli::resolve_manifest(a.path(), std::nullopt));
  CHECK(ha == cli::dataset_sha256(cli::resolve_manifest(b.path(), std::nullopt)));
  std::ofstream(b.path() / "sales.csv", std::ios::app) << "\n";
  CHECK(ha != cli::dataset_sha256(cli::resolve_manifest(b.path(), std::nullopt)));
}

TEST_CASE("optimize writes a revalidating solution") {
  TempDir out("cli-opt");
  const auto r = invoke({"optimize", "--manifest", bundled_manifest().string(), "--scenario",
                         bundled_scenario().string(), "-n", "3000", "--out", out.path().string()});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.err.find("Optimized order:") != std::string::npos);
  const auto doc = nlohmann::json::parse(read_file(out.path() / "hub_solution.json"));
  REQUIRE(doc["groups"].size() == 3);
  for (const auto& g : doc["groups"]) {
    const auto inst = instance_from_json(g["instance"]);
    nlohmann::json sol{{"selected_hubs", g["selected_hubs"]}, {"sourcing", g["sourcing"]},
                       {"objective", g["objective"]}};
    const auto parsed = solution_from_json(inst, sol);
    CHECK(check_feasibility(inst, parsed).feasible);
    CHECK(parsed.objective == solve_bnb(inst).objective);
  }
  const auto rows = read_rows(out.path() / "comparison.csv");
  CHECK(rows.size() == 3);
}

TEST_CASE("optimize with more hubs than candidates exits with code 4") {
  TempDir data("cli-infeasible");
  write_dataset(singleton_data(), FallbackPolicy{}, data.path());
  std::ofstream(data.path() / "opt.json") << R"({"p": 2, "groups": [{"name": "G", "markets": ["M1"]}]})";
  const auto r = invoke({"optimize", "--manifest", data.path().string(), "--scenario",
                         (data.path() / "opt.json").string(), "-n", "10", "--out",
                         (data.path() / "out").string()});
  CHECK(r.code == cli::kInfeasible);
  CHECK(invoke({"optimize", "--manifest", data.path().string()}).code == cli::kValidation);
}

TEST_CASE("an unwritable output directory exits with code 3") {
  TempDir data("cli-io");
  write_dataset(singleton_data(), FallbackPolicy{}, data.path());
  std::ofstream(data.path() / "blocker") << "x";
  const auto r = invoke({"simulate", "--manifest", data.path().string(), "-n", "5", "--out",
                         (data.path() / "blocker" / "sub").string()});
  CHECK(r.code == cli::kIo);
}

TEST_CASE("exit code mapping") {
  CHECK(cli::exit_code_for(InfeasibleError("x")) == cli::kInfeasible);
  CHECK(cli::exit_code_for(IoError("x")) == cli::kIo);
  CHECK(cli::exit_code_for(ArgumentError("x")) == cli::kValidation);
  CHECK(cli::exit_code_for(std::runtime_error("x")) == cli::kUnexpected);
}
