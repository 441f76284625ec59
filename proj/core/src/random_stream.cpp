#include "rllq/random_stream.hpp"

#include <array>

namespace rllq {

RandomStream::RandomStream(std::uint64_t seed) {
  std::array<std::uint32_t, 4> words{};
  std::uint64_t state = seed;
  for (std::size_t i = 0; i < words.size(); i += 2) {
    state += 0x9e3779b97f4a7c15ULL;
    const std::uint64_t z = mix64(state);
    words[i] = static_cast<std::uint32_t>(z);
    words[i + 1] = static_cast<std::uint32_t>(z >> 32);
  }
  std::seed_seq seq(words.begin(), words.end());
  engine_.seed(seq);
}

std::uint64_t mix64(std::uint64_t x) {
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream derive_stream(const SeedSpec& seed) {
  const std::uint64_t index_key =
      mix64(seed.replication_index + 0x6a09e667f3bcc909ULL);
  return RandomStream(mix64(seed.base_seed ^ index_key) ^ seed.replication_index);
}

}  // namespace rllq
