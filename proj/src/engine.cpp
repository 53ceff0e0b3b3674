#include "evchain/engine.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "evchain/errors.hpp"
#include "evchain/rng.hpp"

namespace evchain {

namespace {

struct ChunkResult {
  std::array<double, 4> phase_sum{};
  std::array<std::array<double, 2>, 4> phase_mode_sum{};
  Histogram total_histogram;
  std::array<Histogram, 4> phase_histogram;
  std::map<NodeIndex, MeanAccumulator> by_battery_node;
  std::map<NodeIndex, MeanAccumulator> by_vehicle_node;
  std::map<NodeIndex, MeanAccumulator> by_market_node;
  FlowLedger ledger{0};
};

void run_chunk(const SupplyNetwork& network, std::size_t chemistry, const SimulationOptions& options,
               std::uint64_t begin, std::uint64_t end, std::vector<double>& totals, ChunkResult& out) {
  out.ledger = FlowLedger(chemistry);
  for (std::uint64_t n = begin; n < end; ++n) {
    RandomStream stream(options.seed, n);
    const Scenario scenario = sample_scenario(network, chemistry, stream);
    const EmissionRecord rec = scenario_emissions(network, scenario);
    totals[n] = rec.total;
    for (std::size_t t = 0; t < 4; ++t) {
      out.phase_sum[t] += rec.by_phase[t];
      ++out.phase_histogram[t][bin_of(rec.by_phase[t], options.bin_width)];
    }
    for (const auto& link : rec.by_link) {
      out.phase_mode_sum[static_cast<std::size_t>(link.transition)][static_cast<std::size_t>(link.mode)] +=
          link.kg_per_kwh;
    }
    ++out.total_histogram[bin_of(rec.total, options.bin_width)];
    out.by_battery_node[scenario.battery].add(rec.total);
    out.by_vehicle_node[scenario.vehicle].add(rec.total);
    out.by_market_node[scenario.market].add(rec.total);
    accumulate(out.ledger, network, scenario);
  }
}

template <typename Map>
void merge_stats(Map& into, const Map& from) {
  for (const auto& [k, acc] : from) into[k].merge(acc);
}

void merge_histogram(Histogram& into, const Histogram& from) {
  for (const auto& [bin, n] : from) into[bin] += n;
}

}  // namespace

double ChemistryRun::mean() const {
  if (totals.empty()) throw EmptyError("run has no iterations");
  return pairwise_sum(totals) / static_cast<double>(totals.size());
}

ChemistryRun run_chemistry(const SupplyNetwork& network, std::string_view chemistry, const SimulationOptions& options) {
  if (options.iterations < 1) throw ArgumentError("iterations must be >= 1");
  if (!(options.bin_width > 0.0)) throw ArgumentError("bin width must be > 0");
  const auto chem = network.find_chemistry(chemistry);
  if (!chem) throw ArgumentError("unknown chemistry '" + std::string(chemistry) + "'");

  ChemistryRun run;
  run.chemistry = std::string(chemistry);
  run.chemistry_index = *chem;
  run.iterations = options.iterations;
  run.bin_width = options.bin_width;
  run.totals.assign(options.iterations, 0.0);
  run.ledger = FlowLedger(*chem);

  const std::uint64_t chunks = (options.iterations + kChunkSize - 1) / kChunkSize;
  std::vector<ChunkResult> partials(chunks);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (;;) {
      const auto c = next.fetch_add(1);
      if (c >= chunks) return;
      try {
        const auto begin = c * kChunkSize;
        const auto end = std::min(options.iterations, begin + kChunkSize);
        run_chunk(network, *chem, options, begin, end, run.totals, partials[c]);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(chunks);
        return;
      }
    }
  };

  const unsigned threads = std::max(1U, std::min<unsigned>(options.workers, static_cast<unsigned>(chunks)));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const auto& part : partials) {
    for (std::size_t t = 0; t < 4; ++t) {
      run.phase_sum[t] += part.phase_sum[t];
      for (std::size_t m = 0; m < 2; ++m) run.phase_mode_sum[t][m] += part.phase_mode_sum[t][m];
      merge_histogram(run.phase_histogram[t], part.phase_histogram[t]);
    }
    merge_histogram(run.total_histogram, part.total_histogram);
    merge_stats(run.by_battery_node, part.by_battery_node);
    merge_stats(run.by_vehicle_node, part.by_vehicle_node);
    merge_stats(run.by_market_node, part.by_market_node);
    run.ledger.merge(part.ledger);
  }
  return run;
}

}  // namespace evchain
