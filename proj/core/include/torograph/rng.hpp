#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <vector>

namespace torograph {

/// Deterministic random source. All draws are built from raw mt19937_64
/// output with fixed algorithms (no std:: distributions, whose sequences
/// are implementation-defined), so a seed pins the exact stream on every
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; pairs are cached.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = 1.0 - uniform();  // (0, 1]
    double u2 = uniform();
    double r = std::sqrt(-2.0 * std::log(u1));
    double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  Eigen::VectorXd normal_vector(Eigen::Index n) {
    Eigen::VectorXd z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = normal();
    return z;
  }

  /// Uniform integer in [0, bound), bound > 0. Multiply-shift mapping; the
  /// bias is negligible for the bounds used here and the sequence stays
  /// platform-independent.
  std::uint64_t integer(std::uint64_t bound) {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>(engine_()) * bound) >> 64);
  }

  /// Fisher-Yates with this engine (std::shuffle's sequence is unspecified).
  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      std::swap(items[i - 1], items[integer(i)]);
    }
  }

  /// Independent child stream: a pure function of (construction seed,
  /// stream index) via splitmix64, unaffected by draws made so far.
  Rng derive(std::uint64_t stream) const {
    std::uint64_t x = seed_ + (stream + 1) * 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return Rng(x ^ (x >> 31));
  }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace torograph
