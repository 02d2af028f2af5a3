#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

namespace pgchoice {

// xoshiro256** seeded through SplitMix64. Sub-streams are produced with the
// generator's 2^128-step jump polynomial, so streams derived from one seed
// never overlap.
class RngStream {
 public:
  using result_type = std::uint64_t;

  explicit RngStream(std::uint64_t seed = 42) : seed_(seed) {
    std::uint64_t sm = seed;
    for (auto& s : state_) s = splitmix64(sm);
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
  }

  std::uint64_t seed() const noexcept { return seed_; }

  // Stream `index` (0-based) of this generator: the current state advanced by
  // (index + 1) * 2^128 steps.
  RngStream substream(std::uint64_t index) const {
    RngStream out = *this;
    out.normal_ = std::normal_distribution<double>{};
    for (std::uint64_t i = 0; i <= index; ++i) out.jump();
    return out;
  }

  // Uniform on the open interval (0, 1), 53 bits of resolution.
  double uniform() {
    double u;
    do {
      u = static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    } while (u == 0.0);
    return u;
  }

  double normal() { return normal_(*this); }

  double exponential() { return -std::log(uniform()); }

  // Gamma(shape, scale = 1).
  double gamma(double shape) {
    std::gamma_distribution<double> g(shape, 1.0);
    return g(*this);
  }

  friend bool operator==(const RngStream& a, const RngStream& b) {
    return a.state_ == b.state_;
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

  static std::uint64_t splitmix64(std::uint64_t& x) {
    std::uint64_t z = (x += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  void jump() {
    static constexpr std::array<std::uint64_t, 4> kJump = {
        0x180ec6d33cfd0abaULL, 0xd5a61266f0c9392cULL, 0xa9582618e03fc9aaULL,
        0x39abdc4529b1661cULL};
    std::array<std::uint64_t, 4> acc{};
    for (std::uint64_t word : kJump) {
      for (int b = 0; b < 64; ++b) {
        if (word & (std::uint64_t{1} << b))
          for (int i = 0; i < 4; ++i) acc[i] ^= state_[i];
        (*this)();
      }
    }
    state_ = acc;
  }

  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_{};
  std::normal_distribution<double> normal_{};
};

}  // namespace pgchoice
