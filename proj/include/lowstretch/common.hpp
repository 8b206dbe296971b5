#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace lowstretch {

using VertexId = int;
using EdgeId = int;

constexpr double kInf = std::numeric_limits<double>::infinity();

/// Relative slack used by all exact-with-float-noise comparisons.
constexpr double kRelSlack = 1e-9;

class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Deterministic seeded generator. All randomness in the library flows
/// through this type; std::random distributions are avoided so results
/// are identical across standard library implementations.
class Rng {
public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    // splitmix64
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform in (0, 1].
  double uniform() {
    return (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;
  }

  /// Exponential with the given rate.
  double exponential(double rate) { return -std::log(uniform()) / rate; }

  /// Standard normal (Box-Muller, one value per call).
  double normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586 * u2);
  }

  /// Independent child stream; used to derive per-trial seeds in
  /// counter mode so trial order does not matter.
  static std::uint64_t derive_seed(std::uint64_t master, std::uint64_t counter) {
    Rng r(master ^ (0x5851f42d4c957f2dULL * (counter + 1)));
    return r.next_u64();
  }

private:
  std::uint64_t state_;
};

inline bool leq_with_slack(double a, double b) {
  return a <= b + kRelSlack * std::max(1.0, std::abs(b));
}

}  // namespace lowstretch
