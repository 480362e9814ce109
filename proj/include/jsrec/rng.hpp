#pragma once

#include <cstdint>

namespace jsrec {

// Counter-based deterministic generator. The value of the k-th raw word is a
// pure function of (seed, stream, k), so streams can be replayed or split
// across workers without coordination and the draw sequence is identical on
// every platform.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
      : seed_(seed), stream_(stream) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  // Fresh generator on the same seed but a different stream, counter reset.
  Rng substream(std::uint64_t stream) const { return Rng(seed_, stream); }

  std::uint64_t next_u64() { return word_at(counter_++); }

  // Uniform on the open interval (0,1); never returns an endpoint.
  double next_uniform() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  // Standard normal via Box-Muller; consumes exactly two counter slots.
  double next_normal();

  // Uniform integer in [0, bound) by rejection on the top range.
  std::uint64_t next_below(std::uint64_t bound);

private:
  std::uint64_t word_at(std::uint64_t counter) const;

  std::uint64_t seed_;
  std::uint64_t stream_;
  std::uint64_t counter_ = 0;
};

}  // namespace jsrec
