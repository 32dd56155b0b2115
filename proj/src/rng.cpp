#include "bhgen/rng.hpp"

#include <array>

namespace bhgen {
namespace {

std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t index,
                            std::uint64_t salt) {
  auto lo = [](std::uint64_t x) { return static_cast<std::uint32_t>(x); };
  auto hi = [](std::uint64_t x) { return static_cast<std::uint32_t>(x >> 32); };
  std::seed_seq seq{lo(master), hi(master), lo(index), hi(index),
                    lo(salt),   hi(salt),   0x62686765u};
  return std::mt19937_64(seq);
}

}  // namespace

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index,
                     std::uint64_t salt)
    : master_seed_(master_seed),
      stream_index_(stream_index),
      salt_(salt),
      engine_(make_engine(master_seed, stream_index, salt)) {}

RngStream RngStream::substream(std::uint64_t salt) const {
  return RngStream(master_seed_, stream_index_, salt_ ^ (salt * 0x9e3779b97f4a7c15ULL));
}

double RngStream::uniform() {
  // 53 high bits; never returns 1.0
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace bhgen
