#pragma once

#include <array>
#include <cstdint>

namespace evchain {

// Philox4x32-10 counter-based generator (Salmon et al., SC'11). Stateless:
// the output block is a pure function of (counter, key).
struct Philox4x32 {
  using Counter = std::array<std::uint32_t, 4>;
  using Key = std::array<std::uint32_t, 2>;

  static Counter generate(Counter counter, Key key) noexcept;
};

// Uniform stream for one Monte Carlo iteration. Draw d of iteration n under
// master seed s is philox({d_lo, d_hi, n_lo, n_hi}, {s_lo, s_hi}), so the
// sequence never depends on scheduling or on other iterations.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t iteration_index) noexcept
      : master_seed_(master_seed), iteration_index_(iteration_index) {}

  // Next uniform in [0, 1) with 53 random bits.
  double next() noexcept { return at(draw_counter_++); }
  double at(std::uint64_t draw) const noexcept;

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t iteration_index() const noexcept { return iteration_index_; }
  std::uint64_t draw_counter() const noexcept { return draw_counter_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t iteration_index_;
  std::uint64_t draw_counter_ = 0;
};

}  // namespace evchain
