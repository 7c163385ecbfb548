#pragma once

// Small fixed-size vector and matrix helpers used throughout cpquad.

#include <array>
#include <cmath>
#include <cstddef>

namespace cpquad {

template <int D>
using Vec = std::array<double, D>;

/// Row-major D x D matrix; entry (j, k) is m[j][k].
template <int D>
using Mat = std::array<std::array<double, D>, D>;

using Vec2 = Vec<2>;
using Vec3 = Vec<3>;

// Free functions take std::array<double, D> directly so that D is
// deducible from a Vec<D> argument.

template <std::size_t D>
constexpr std::array<double, D> operator+(const std::array<double, D>& a, const std::array<double, D>& b) {
  std::array<double, D> r{};
  for (std::size_t i = 0; i < D; ++i) r[i] = a[i] + b[i];
  return r;
}

template <std::size_t D>
constexpr std::array<double, D> operator-(const std::array<double, D>& a, const std::array<double, D>& b) {
  std::array<double, D> r{};
  for (std::size_t i = 0; i < D; ++i) r[i] = a[i] - b[i];
  return r;
}

template <std::size_t D>
constexpr std::array<double, D> operator*(double s, const std::array<double, D>& a) {
  std::array<double, D> r{};
  for (std::size_t i = 0; i < D; ++i) r[i] = s * a[i];
  return r;
}

template <std::size_t D>
constexpr std::array<double, D> operator*(const std::array<double, D>& a, double s) {
  return s * a;
}

template <std::size_t D>
constexpr double dot(const std::array<double, D>& a, const std::array<double, D>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < D; ++i) s += a[i] * b[i];
  return s;
}

template <std::size_t D>
inline double norm(const std::array<double, D>& a) {
  return std::sqrt(dot(a, a));
}

template <std::size_t D>
inline double distance(const std::array<double, D>& a, const std::array<double, D>& b) {
  return norm(a - b);
}

template <std::size_t D>
inline std::array<double, D> normalized(const std::array<double, D>& a) {
  return (1.0 / norm(a)) * a;
}

constexpr Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

template <std::size_t D>
inline bool all_finite(const std::array<double, D>& a) {
  for (double v : a)
    if (!std::isfinite(v)) return false;
  return true;
}

/// Strict lexicographic comparison, used for deterministic tie-breaking.
template <std::size_t D>
constexpr bool lex_less(const std::array<double, D>& a, const std::array<double, D>& b) {
  for (std::size_t i = 0; i < D; ++i) {
    if (a[i] < b[i]) return true;
    if (a[i] > b[i]) return false;
  }
  return false;
}

template <std::size_t D>
constexpr std::array<std::array<double, D>, D> transpose(const std::array<std::array<double, D>, D>& m) {
  std::array<std::array<double, D>, D> t{};
  for (std::size_t j = 0; j < D; ++j)
    for (std::size_t k = 0; k < D; ++k) t[k][j] = m[j][k];
  return t;
}

template <std::size_t D>
constexpr std::array<std::array<double, D>, D> matmul(const std::array<std::array<double, D>, D>& a, const std::array<std::array<double, D>, D>& b) {
  std::array<std::array<double, D>, D> r{};
  for (std::size_t i = 0; i < D; ++i)
    for (std::size_t j = 0; j < D; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < D; ++k) s += a[i][k] * b[k][j];
      r[i][j] = s;
    }
  return r;
}

inline constexpr double pi = 3.14159265358979323846;

}  // namespace cpquad
