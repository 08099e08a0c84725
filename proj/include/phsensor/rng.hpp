#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

namespace phs::rng {

// splitmix64 finalizer, used both for generator seeding and for hashing
// (seed, domain, index) triples into independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

class SplitMix64 {
 public:
  explicit constexpr SplitMix64(std::uint64_t seed) noexcept : state_(seed) {}

  constexpr std::uint64_t next() noexcept {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

 private:
  std::uint64_t state_;
};

// xoshiro256++ with 53-bit uniform doubles and a Box-Muller normal.  The
// normal is hand-rolled (not std::normal_distribution) so that streams are
// bit-reproducible across standard library implementations.
class Xoshiro256pp {
 public:
  explicit Xoshiro256pp(std::uint64_t seed) noexcept {
    SplitMix64 sm(seed);
    for (auto& w : s_) w = sm.next();
  }

  std::uint64_t next() noexcept {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform on [0, 1) with 53 significant bits.
  double uniform() noexcept {
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
  }

  // Standard normal; caches the second Box-Muller variate.  log1p(-u) keeps
  // the radius finite because uniform() < 1.
  double gaussian() noexcept {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double r = std::sqrt(-2.0 * std::log1p(-uniform()));
    const double a = 2.0 * std::numbers::pi * uniform();
    spare_ = r * std::sin(a);
    has_spare_ = true;
    return r * std::cos(a);
  }

 private:
  static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept {
    return (x << k) | (x >> (64 - k));
  }

  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Derives the generator for sub-stream `index` of the given domain.  The
// mapping depends only on (seed, domain, index), never on thread layout or
// call order, so results are reproducible under any parallel schedule.
inline Xoshiro256pp derive_stream(std::uint64_t seed, std::uint64_t domain,
                                  std::uint64_t index) noexcept {
  std::uint64_t h = mix64(seed);
  h = mix64(h ^ (0xa0761d6478bd642full * (domain + 1)));
  h = mix64(h ^ (0xe7037ed1a0b428dbull * (index + 1)));
  return Xoshiro256pp(h);
}

}  // namespace phs::rng
