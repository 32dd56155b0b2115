#pragma once

#include <cstdint>
#include <random>

namespace bhgen {

/// A reproducible random stream identified by (master_seed, stream_index).
///
/// The engine is seeded through std::seed_seq from the 32-bit halves of both
/// identifiers plus a salt, so distinct pairs give decorrelated streams and
/// identical pairs replay bit-for-bit. A stream is owned by one replicate and
/// is never shared between threads.
class RngStream {
 public:
  using engine_type = std::mt19937_64;

  RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
            std::uint64_t salt = 0);

  std::uint64_t master_seed() const noexcept { return master_seed_; }
  std::uint64_t stream_index() const noexcept { return stream_index_; }

  /// Independent stream sharing this stream's identity (used to keep label
  /// randomness apart from the population dynamics).
  RngStream substream(std::uint64_t salt) const;

  /// Uniform draw on [0, 1).
  double uniform();

  engine_type& engine() noexcept { return engine_; }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::uint64_t salt_;
  engine_type engine_;
};

}  // namespace bhgen
