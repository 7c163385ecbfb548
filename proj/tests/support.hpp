#pragma once

// Helpers shared by the test programs.

#include <cmath>
#include <random>

#include "cpquad/cpquad.hpp"

namespace cpquad::test_support {

/// Field sampled on nodes x + h*i, i in [-max(r, 4), max(r, 4)]^D, so
/// that the centre node sits exactly at x.
template <Shape S>
CpField<S::dim> local_field(const S& shape, const Vec<S::dim>& x, double h, int r) {
  constexpr int D = S::dim;
  // Grids need at least 8 nodes per axis, so pad small stencils to 9.
  Vec<D> lo, hi;
  const int half = std::max(r, 4);
  for (int k = 0; k < D; ++k) {
    lo[k] = x[k] - half * h;
    hi[k] = x[k] + half * h;
  }
  return sample_field(Grid<D>::cube(lo, hi, 2 * half + 1), shape);
}

/// Linear index of the centre node of a local_field.
template <int D>
std::size_t centre_node(const CpField<D>& f) {
  Index<D> idx;
  for (int k = 0; k < D; ++k) idx[k] = f.grid.count(k) / 2;
  return f.grid.linear(idx);
}

inline Vec3 random_unit(std::mt19937_64& rng) {
  std::normal_distribution<double> n01;
  Vec3 v{n01(rng), n01(rng), n01(rng)};
  return normalized(v);
}

/// Point at signed distance eta (positive inside) from the torus.
inline Vec3 torus_point(const Torus& t, double eta, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> ang(0.0, 2.0 * pi);
  const double u = ang(rng), v = ang(rng);
  const double a = t.minor_radius() - eta;
  const double w = t.major_radius() + a * std::cos(v);
  return {w * std::cos(u), w * std::sin(u), a * std::sin(v)};
}

}  // namespace cpquad::test_support
