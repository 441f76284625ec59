#pragma once

#include <cstdint>
#include <random>

namespace rllq {

/// Identifies the random stream of one replication.
struct SeedSpec {
  std::uint64_t base_seed = 0;
  std::uint64_t replication_index = 0;
};

/// Seeded source of uniform and standard normal draws. Each replication
/// owns one; streams are never shared between threads.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t next_u64() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// SplitMix64 finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Stream for (base_seed, replication_index). Bit-identical for identical
/// inputs; distinct indices give decorrelated streams.
RandomStream derive_stream(const SeedSpec& seed);

}  // namespace rllq
