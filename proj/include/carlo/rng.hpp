#pragma once

#include <cstdint>
#include <vector>

namespace carlo {

/// Counter-based uniform stream.
///
/// Each draw hashes (key, counter) through a 64-bit finalizer and advances the
/// counter, so the sequence is a pure function of (seed, stream_id, counter):
/// the same triple reproduces the same outputs bit for bit, streams with
/// distinct ids are independent keyed sequences, and skipping ahead is a
/// counter addition. Outputs live in the open interval (0,1); exact 0 and 1
/// are unreachable, which keeps log(u) and log1p(-u) finite downstream.
///
/// A stream is single-owner: hand it across threads if you like, but never
/// share one concurrently. Parallel code allocates one stream id per task.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id), counter_(0),
        key_(derive_key(seed, stream_id)) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }
  unsigned __int128 counter() const { return counter_; }

  /// A sibling stream with the same seed and a different id.
  RngStream substream(std::uint64_t stream_id) const {
    return RngStream(seed_, stream_id);
  }

  std::uint64_t next_u64() {
    const std::uint64_t lo = static_cast<std::uint64_t>(counter_);
    const std::uint64_t hi = static_cast<std::uint64_t>(counter_ >> 64);
    ++counter_;
    std::uint64_t z = key_ + lo * 0x9E3779B97F4A7C15ULL + hi * 0x632BE59BD9B4E019ULL;
    return mix(mix(z) ^ key_);
  }

  /// One uniform draw in the open interval (0,1).
  double uniform() {
    // 53 random high bits, shifted off the lattice so 0 and 1 cannot occur.
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
  }

  void advance(unsigned __int128 n) { counter_ += n; }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    // Stafford variant 13 of the splitmix64 finalizer.
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
  }
  static std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_id) {
    return mix(seed ^ mix(stream_id + 0x9E3779B97F4A7C15ULL));
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  unsigned __int128 counter_;
  std::uint64_t key_;
};

/// n uniform draws; the stream counter advances by exactly n.
inline std::vector<double> uniform(RngStream& stream, std::size_t n) {
  std::vector<double> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(stream.uniform());
  return out;
}

}  // namespace carlo
