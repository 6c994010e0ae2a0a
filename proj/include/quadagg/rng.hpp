#pragma once

#include "quadagg/types.hpp"

#include <cstdint>

namespace quadagg {

/// Counter-based generator: every draw is a hash of (seed, stream, counter),
/// so runs are reproducible and streams are independent. No global state.
class CounterRng {
 public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(mix(seed) + 0x9e3779b97f4a7c15ULL * (stream + 1))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ULL * (++counter_)); }

  /// Uniform in [0, 1).
  double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Vector uniform_vector(const Vector& lo, const Vector& hi) {
    Vector x(lo.size());
    for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = uniform(lo(i), hi(i));
    return x;
  }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    double u1 = uniform01();
    double u2 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 6.283185307179586476925286766559 * u2;
    cached_ = r * std::sin(a);
    have_cached_ = true;
    return r * std::cos(a);
  }

  Vector normal_vector(int size) {
    Vector x(size);
    for (int i = 0; i < size; ++i) x(i) = normal();
    return x;
  }

  SymMatrix random_symmetric(int order, double scale = 1.0) {
    Matrix m(order, order);
    for (int i = 0; i < order; ++i) {
      for (int j = i; j < order; ++j) {
        m(i, j) = scale * normal();
        m(j, i) = m(i, j);
      }
    }
    return SymMatrix(m);
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xbf58476d1ce4e5b9ULL;
    z ^= z >> 27;
    z *= 0x94d049bb133111ebULL;
    z ^= z >> 31;
    return z;
  }

  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

}  // namespace quadagg
