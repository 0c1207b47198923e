#pragma once

#include <cstdint>
#include <string_view>

namespace xmodal {

/// SplitMix64 output finalizer.
std::uint64_t mix64(std::uint64_t x);

/// Counter-based generator: draw number c of stream s under seed k is a pure
/// function mix64(key(k, s) + c * gamma), so independent purposes get
/// independent streams and never shift each other's draws.
class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::string_view stream);

  std::uint64_t next_u64();
  /// Uniform on [0, 1) with 53 random bits.
  double uniform();
  /// Standard normal via Box-Muller; the second value of each pair is cached
  /// and returned by the next call.
  double normal();

  std::uint64_t draws() const { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace xmodal
