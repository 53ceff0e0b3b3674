#include "doctest.h"

#include <set>

#include "evchain/rng.hpp"

using evchain::Philox4x32;
using evchain::RandomStream;

// Published known-answer vectors for Philox4x32-10.
TEST_CASE("philox known answers") {
  CHECK(Philox4x32::generate({0, 0, 0, 0}, {0, 0}) ==
        Philox4x32::Counter{0x6627e8d5, 0xe169c58d, 0xbc57ac4c, 0x9b00dbd8});
  CHECK(Philox4x32::generate({0xffffffff, 0xffffffff, 0xffffffff, 0xffffffff}, {0xffffffff, 0xffffffff}) ==
        Philox4x32::Counter{0x408f276d, 0x41c83b0e, 0xa20bc7c6, 0x6d5451fd});
  CHECK(Philox4x32::generate({0x243f6a88, 0x85a308d3, 0x13198a2e, 0x03707344}, {0xa4093822, 0x299f31d0}) ==
        Philox4x32::Counter{0xd16cfe09, 0x94fdcceb, 0x5001e420, 0x24126ea1});
}

TEST_CASE("streams are pure functions of seed, iteration and draw") {
  RandomStream a(42, 7);
  RandomStream b(42, 7);
  for (int i = 0; i < 16; ++i) {
    const double u = a.next();
    CHECK(u == b.at(static_cast<std::uint64_t>(i)));
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  CHECK(a.draw_counter() == 16);
  CHECK(RandomStream(42, 7).at(0) != RandomStream(42, 8).at(0));
  CHECK(RandomStream(42, 7).at(0) != RandomStream(43, 7).at(0));
  CHECK(RandomStream(1ULL << 40, 1ULL << 33).at(1ULL << 35) != RandomStream(0, 1ULL << 33).at(1ULL << 35));
}

TEST_CASE("uniform draws look uniform") {
  constexpr int kDraws = 200000;
  double sum = 0.0;
  int buckets[10] = {};
  std::set<double> distinct;
  for (int n = 0; n < kDraws; ++n) {
    const double u = RandomStream(99, static_cast<std::uint64_t>(n)).at(0);
    sum += u;
    ++buckets[static_cast<int>(u * 10.0)];
    if (n < 1000) distinct.insert(u);
  }
  CHECK(sum / kDraws == doctest::Approx(0.5).epsilon(0.01));
  for (int b : buckets) CHECK(b == doctest::Approx(kDraws / 10.0).epsilon(0.03));
  CHECK(distinct.size() == 1000);
}
