// SPDX-License-Identifier: Apache-2.0
// Shared helpers for the test programs.
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "seaice/config.hpp"
#include "seaice/grid.hpp"

namespace seaice::test {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}
  double unit() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }
  std::uint64_t bits() { return gen_(); }

  ScalarField noise(const Grid& g, double lo, double hi) {
    ScalarField f(g);
    for (std::size_t k = 0; k < f.size(); ++k) f[k] = uniform(lo, hi);
    return f;
  }
  VectorField noise_vec(const Grid& g, double lo, double hi) { return VectorField(noise(g, lo, hi), noise(g, lo, hi)); }

  ScalarField smooth(const Grid& g, double lo, double hi, int modes = 3) {
    FieldSpec spec;
    spec.family = "random-smooth";
    spec.lo = lo;
    spec.hi = hi;
    spec.modes = modes;
    return make_field(spec, g, bits(), lo, hi);
  }
  VectorField smooth_vec(const Grid& g, double lo, double hi) { return VectorField(smooth(g, lo, hi), smooth(g, lo, hi)); }

 private:
  std::mt19937_64 gen_;
};

template <class F>
ScalarField sample(const Grid& g, F f) {
  ScalarField s(g);
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) s(i, j) = f(g.x(i), g.y(j));
  return s;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) { return norm_lp(a - b, kLinf); }
inline double max_abs_diff(const VectorField& a, const VectorField& b) { return norm_lp(a - b, kLinf); }

inline double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace seaice::test
