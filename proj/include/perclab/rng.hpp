#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace perclab {

// Counter-based random numbers (Philox4x32-10). Every consumer derives a
// stream from (seed, purpose, entity identity); draws within a stream are
// sequential, streams are mutually independent and order-free, so sampling
// is reproducible under any parallel schedule and stable under domain
// extension: an entity (point location, vertex pair, cell, replica) keeps
// its randomness no matter which box or thread touched it.

/// Philox4x32-10 block function. `key` is the user seed, `ctr` the 128-bit
/// counter (block index + 96-bit stream identity).
std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& ctr);

/// Purpose tags separate the streams hanging off one seed.
enum class StreamPurpose : std::uint8_t {
  poisson_cell = 1,
  lattice_site = 2,
  vertex_mark = 3,
  palm_mark = 4,
  edge = 5,
  bond = 6,
  cell_skip = 7,
  replica = 8,
  trial = 9,
  walker = 10,
  generic = 11,
};

/// 96-bit stream identity derived from a purpose tag and arbitrary words.
struct StreamId {
  std::uint32_t w0 = 0, w1 = 0, w2 = 0;
};

StreamId make_stream_id(StreamPurpose purpose, std::span<const std::uint64_t> words);
StreamId make_stream_id(StreamPurpose purpose, std::uint64_t a, std::uint64_t b = 0,
                        std::uint64_t c = 0);

/// Stream id keyed by the bit patterns of a point location.
StreamId stream_for_point(StreamPurpose purpose, std::span<const double> coords);

/// Stream id keyed by an unordered pair of locations; callers must pass the
/// lexicographically smaller location first to get the canonical identity.
StreamId stream_for_pair(StreamPurpose purpose, std::span<const double> a,
                         std::span<const double> b);

/// Sequential generator on one Philox stream. Cheap to construct; up to
/// 2^32 blocks (1.7e10 uniforms) per stream.
class RngStream {
 public:
  RngStream(std::uint64_t seed, StreamId id) : key_(seed), id_(id) {}

  std::uint32_t next_u32() {
    if (pos_ == 4) refill();
    return buf_[pos_++];
  }
  std::uint64_t next_u64() {
    std::uint64_t hi = next_u32();
    return (hi << 32) | next_u32();
  }
  /// Uniform on the open interval (0,1).
  double uniform() { return (static_cast<double>(next_u32()) + 0.5) * 0x1p-32; }

  /// Uniform integer in [0, n).
  std::uint64_t uniform_below(std::uint64_t n);

  /// Poisson(mean) via Knuth product for small means, PTRS otherwise.
  std::uint64_t poisson(double mean);

 private:
  void refill();

  std::uint64_t key_;
  StreamId id_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buf_{};
  int pos_ = 4;
};

/// Derived 64-bit sub-seed, e.g. one per replica of an experiment.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index,
                          std::uint64_t salt = 0);

}  // namespace perclab
