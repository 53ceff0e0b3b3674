#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "evchain/ingest.hpp"
#include "evchain/report.hpp"

namespace evchain::cli {

enum ExitCode : int { kOk = 0, kUnexpected = 1, kValidation = 2, kIo = 3, kInfeasible = 4 };

struct RunConfig {
  std::filesystem::path manifest = "data/synthetic/manifest.json";
  std::uint64_t iterations = 10'000;
  std::uint64_t master_seed = 42;
  std::vector<std::string> chemistries;  // empty: every chemistry
  double bin_width = 0.5;
  std::optional<std::vector<std::uint64_t>> checkpoints;  // unset: defaults up to N
  std::filesystem::path out_dir = "out";
  OutputFormat format = OutputFormat::Csv;
  unsigned workers = 0;  // 0: hardware concurrency
  std::optional<std::string> fallback;

  // N >= 1, bin_width > 0, every checkpoint in [1, N].
  void validate() const;
  std::vector<std::uint64_t> effective_checkpoints() const;
  unsigned effective_workers() const;
};

// A manifest file, or a directory holding manifest.json or the default file
// names. The --fallback override replaces the manifest's policy.
DatasetManifest resolve_manifest(const std::filesystem::path& path, const std::optional<std::string>& fallback);

// SHA-256 over every dataset file in manifest order, each framed by its label
// and byte length.
std::string dataset_sha256(const DatasetManifest& manifest);

int exit_code_for(const std::exception& e) noexcept;

void cmd_validate(const RunConfig& config, std::ostream& out);
void cmd_count_scenarios(const RunConfig& config, std::ostream& out);
void cmd_simulate(const RunConfig& config, std::ostream& log);
void cmd_optimize(const RunConfig& config, const std::filesystem::path& scenario, std::ostream& log);

// Parses arguments, dispatches, and maps failures to exit codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace evchain::cli
