#pragma once

#include <Eigen/Core>
#include <cmath>
#include <cstdint>
#include <random>

namespace gdlab {

// SplitMix64 step. Used only to spread seeds, never as the main generator.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Stream-splitting rule: independent work units (sweep cells, repeated draws)
// seed their generator with derive_seed(base, cell_index, draw_index). The
// chain is a SplitMix64 hash of the three words, so streams are well
// separated and reproducible across platforms.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t cell,
                                 std::uint64_t draw = 0) {
  std::uint64_t s = base;
  std::uint64_t h = splitmix64(s);
  s ^= cell * 0x9e3779b97f4a7c15ULL;
  h ^= splitmix64(s);
  s ^= draw * 0xc2b2ae3d27d4eb4fULL;
  h ^= splitmix64(s);
  return h;
}

// mt19937_64 with explicit draw conversions. The standard pins the engine's
// output sequence bit for bit; std::uniform_real_distribution and friends do
// not, so every draw here goes through our own conversions to keep results
// identical across standard libraries.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t raw() { return eng_(); }

  // [0, 1), 53-bit resolution
  double uniform() {
    return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // unbiased integer in [0, n)
  int uniform_int(int n) {
    const std::uint64_t bound = n;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
    std::uint64_t v;
    do {
      v = eng_();
    } while (v >= limit);
    return static_cast<int>(v % bound);
  }

  // standard normal via Box-Muller
  double normal() {
    if (has_cached_) {
      has_cached_ = false;
      return cached_;
    }
    double u1 = uniform();
    double u2 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * M_PI * u2;
    cached_ = radius * std::sin(angle);
    has_cached_ = true;
    return radius * std::cos(angle);
  }

  Eigen::VectorXd gaussian_vector(int d) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = normal();
    return v;
  }

  Eigen::VectorXd unit_sphere(int d) {
    Eigen::VectorXd v = gaussian_vector(d);
    double norm = v.norm();
    while (norm < 1e-12) {
      v = gaussian_vector(d);
      norm = v.norm();
    }
    return v / norm;
  }

  // uniform in the box [-half_width, half_width]^d
  Eigen::VectorXd box_vector(int d, double half_width) {
    Eigen::VectorXd v(d);
    for (int i = 0; i < d; ++i) v[i] = uniform(-half_width, half_width);
    return v;
  }

 private:
  std::mt19937_64 eng_;
  double cached_ = 0.0;
  bool has_cached_ = false;
};

}  // namespace gdlab
