#include "perclab/rng.hpp"

#include <bit>
#include <cmath>

namespace perclab {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::uint64_t key,
                                        const std::array<std::uint32_t, 4>& ctr) {
  std::uint32_t x0 = ctr[0], x1 = ctr[1], x2 = ctr[2], x3 = ctr[3];
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < 10; ++round) {
    std::uint64_t p0 = static_cast<std::uint64_t>(x0) * kPhiloxM0;
    std::uint64_t p1 = static_cast<std::uint64_t>(x2) * kPhiloxM1;
    std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    x0 = hi1 ^ x1 ^ k0;
    x1 = lo1;
    x2 = hi0 ^ x3 ^ k1;
    x3 = lo0;
    k0 += kPhiloxW0;
    k1 += kPhiloxW1;
  }
  return {x0, x1, x2, x3};
}

StreamId make_stream_id(StreamPurpose purpose, std::span<const std::uint64_t> words) {
  std::uint64_t h0 = splitmix64(0x7065726332303234ull ^ static_cast<std::uint64_t>(purpose));
  std::uint64_t h1 = splitmix64(h0 ^ 0x243F6A8885A308D3ull);
  for (std::uint64_t w : words) {
    h0 = splitmix64(h0 ^ w);
    h1 = splitmix64(h1 + (w ^ 0x452821E638D01377ull));
  }
  StreamId id;
  id.w0 = static_cast<std::uint32_t>(h0);
  id.w1 = static_cast<std::uint32_t>(h0 >> 32);
  id.w2 = static_cast<std::uint32_t>(h1);
  return id;
}

StreamId make_stream_id(StreamPurpose purpose, std::uint64_t a, std::uint64_t b,
                        std::uint64_t c) {
  const std::uint64_t words[3] = {a, b, c};
  return make_stream_id(purpose, std::span<const std::uint64_t>(words, 3));
}

StreamId stream_for_point(StreamPurpose purpose, std::span<const double> coords) {
  std::uint64_t h0 = splitmix64(0x6C6F636174696F6Eull ^ static_cast<std::uint64_t>(purpose));
  std::uint64_t h1 = splitmix64(h0 ^ 0x13198A2E03707344ull);
  for (double x : coords) {
    std::uint64_t w = std::bit_cast<std::uint64_t>(x);
    h0 = splitmix64(h0 ^ w);
    h1 = splitmix64(h1 + (w ^ 0xA4093822299F31D0ull));
  }
  StreamId id;
  id.w0 = static_cast<std::uint32_t>(h0);
  id.w1 = static_cast<std::uint32_t>(h0 >> 32);
  id.w2 = static_cast<std::uint32_t>(h1);
  return id;
}

StreamId stream_for_pair(StreamPurpose purpose, std::span<const double> a,
                         std::span<const double> b) {
  std::uint64_t h0 = splitmix64(0x7061697268617368ull ^ static_cast<std::uint64_t>(purpose));
  std::uint64_t h1 = splitmix64(h0 ^ 0x082EFA98EC4E6C89ull);
  auto absorb = [&](std::span<const double> pt) {
    for (double x : pt) {
      std::uint64_t w = std::bit_cast<std::uint64_t>(x);
      h0 = splitmix64(h0 ^ w);
      h1 = splitmix64(h1 + (w ^ 0xBE5466CF34E90C6Cull));
    }
  };
  absorb(a);
  absorb(b);
  StreamId id;
  id.w0 = static_cast<std::uint32_t>(h0);
  id.w1 = static_cast<std::uint32_t>(h0 >> 32);
  id.w2 = static_cast<std::uint32_t>(h1);
  return id;
}

void RngStream::refill() {
  buf_ = philox4x32(key_, {block_++, id_.w0, id_.w1, id_.w2});
  pos_ = 0;
}

std::uint64_t RngStream::uniform_below(std::uint64_t n) {
  if (n <= 1) return 0;
  // rejection from the top to avoid modulo bias
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x > limit);
  return x % n;
}

std::uint64_t RngStream::poisson(double mean) {
  if (mean <= 0.0) return 0;
  if (mean <= 30.0) {
    // Knuth: multiply uniforms until the product drops below e^{-mean}.
    const double threshold = std::exp(-mean);
    std::uint64_t k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > threshold);
    return k - 1;
  }
  // PTRS transformed rejection (Hormann), exact for large means.
  const double b = 0.931 + 2.53 * std::sqrt(mean);
  const double a = -0.059 + 0.02483 * b;
  const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
  const double vr = 0.9277 - 3.6224 / (b - 2.0);
  const double log_mean = std::log(mean);
  for (;;) {
    double u = uniform() - 0.5;
    double v = uniform();
    double us = 0.5 - std::fabs(u);
    double kf = std::floor((2.0 * a / us + b) * u + mean + 0.43);
    if (us >= 0.07 && v <= vr) return static_cast<std::uint64_t>(kf);
    if (kf < 0.0 || (us < 0.013 && v > us)) continue;
    if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
        kf * log_mean - mean - std::lgamma(kf + 1.0)) {
      return static_cast<std::uint64_t>(kf);
    }
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index, std::uint64_t salt) {
  return splitmix64(splitmix64(seed ^ 0x9216D5D98979FB1Bull) ^
                    splitmix64(index + 0x3C6EF372FE94F82Bull * (salt + 1)));
}

}  // namespace perclab
