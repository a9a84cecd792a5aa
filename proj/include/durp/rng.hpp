#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace durp {

/// Seedable generator used for every random draw in the library.
///
/// The engine is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Uniform reals take the top 53 bits of one engine draw, bounded
/// integers use rejection on the engine output, and normal variates use the
/// polar Box-Muller method (the second variate of each pair is cached).
/// Nothing here goes through std::*_distribution, so streams are identical
/// across standard library implementations.
class Rng {
 public:
  static constexpr std::string_view kName = "mt19937_64/polar-box-muller";

  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on [0, 1).
  double uniform();

  /// Uniform integer on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Standard normal variate.
  double normal();

  /// Uniformly random permutation of 0..n-1 (Fisher-Yates).
  std::vector<std::int64_t> permutation(std::int64_t n);

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

/// Derives an independent seed for a named sub-stream (splitmix64 mixing).
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

}  // namespace durp
