#pragma once

// Finite-difference Jacobians of a sampled closest-point map, their
// singular values, and the curvature identities used to check them.

#include <algorithm>
#include <cmath>
#include <string>
#include <string_view>
#include <utility>

#include "cpquad/errors.hpp"
#include "cpquad/field.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

enum class JacobianScheme { Central2, Biased3, OneSided2 };

constexpr int stencil_radius(JacobianScheme s) { return s == JacobianScheme::Central2 ? 1 : 2; }

inline std::string_view scheme_name(JacobianScheme s) {
  switch (s) {
    case JacobianScheme::Central2:
      return "central2";
    case JacobianScheme::Biased3:
      return "biased3";
    case JacobianScheme::OneSided2:
      return "onesided2";
  }
  return "?";
}

inline JacobianScheme parse_scheme(std::string_view name) {
  if (name == "central2" || name == "central") return JacobianScheme::Central2;
  if (name == "biased3") return JacobianScheme::Biased3;
  if (name == "onesided2" || name == "onesided") return JacobianScheme::OneSided2;
  throw ConfigError("unknown scheme '" + std::string(name) + "' (expected central2, biased3 or onesided2)");
}

namespace detail {

template <int D>
void require_stencil(const CpField<D>& f, std::size_t node, int radius, const char* who) {
  if (!interior(f.grid, f.grid.multi_index(node), radius))
    throw GridBoundaryError(std::string(who) + ": stencil leaves the grid");
}

// True when the forward (+) side is smoother for component `comp` along
// the axis with stride s: |S+| <= |S-| with S+- the second differences
// centred at node +- 1.
template <int D>
bool forward_is_smoother(const CpField<D>& f, std::size_t node, std::size_t s, int comp) {
  const auto u = [&](long o) { return f.cp[node + o * static_cast<long>(s)][comp]; };
  const double sp = u(2) - 2.0 * u(1) + u(0);
  const double sm = u(0) - 2.0 * u(-1) + u(-2);
  return std::abs(sp) <= std::abs(sm);
}

}  // namespace detail

/// (p_j(x + h e_k) - p_j(x - h e_k)) / 2h.
template <int D>
Mat<D> jacobian_central(const CpField<D>& f, std::size_t node) {
  detail::require_stencil(f, node, 1, "jacobian_central");
  const double inv = 1.0 / (2.0 * f.grid.spacing());
  Mat<D> m{};
  for (int k = 0; k < D; ++k) {
    const std::size_t s = f.grid.stride(k);
    const Vec<D>& hi = f.cp[node + s];
    const Vec<D>& lo = f.cp[node - s];
    for (int j = 0; j < D; ++j) m[j][k] = (hi[j] - lo[j]) * inv;
  }
  return m;
}

/// Third-order four-point stencil (-2 f[-1] - 3 f[0] + 6 f[1] - f[2]) / 6h,
/// mirrored when the backward side is smoother. Side selection per axis k
/// uses the second differences of component k.
template <int D>
Mat<D> jacobian_biased3(const CpField<D>& f, std::size_t node) {
  detail::require_stencil(f, node, 2, "jacobian_biased3");
  const double inv = 1.0 / (6.0 * f.grid.spacing());
  Mat<D> m{};
  for (int k = 0; k < D; ++k) {
    const std::size_t s = f.grid.stride(k);
    const Vec<D>& f0 = f.cp[node];
    if (detail::forward_is_smoother(f, node, s, k)) {
      const Vec<D>& fm1 = f.cp[node - s];
      const Vec<D>& fp1 = f.cp[node + s];
      const Vec<D>& fp2 = f.cp[node + 2 * s];
      for (int j = 0; j < D; ++j)
          m[j][k] = (6.0 * (fp1[j] - f0[j]) - 2.0 * (fm1[j] - f0[j]) - (fp2[j] - f0[j])) * inv;
    } else {
      const Vec<D>& fp1 = f.cp[node + s];
      const Vec<D>& fm1 = f.cp[node - s];
      const Vec<D>& fm2 = f.cp[node - 2 * s];
      for (int j = 0; j < D; ++j)
          m[j][k] = (2.0 * (fp1[j] - f0[j]) - 6.0 * (fm1[j] - f0[j]) + (fm2[j] - f0[j])) * inv;
    }
  }
  return m;
}

/// Second-order one-sided differences +-(-3 f[0] + 4 f[+-1] - f[+-2]) / 2h
/// with the side picked by the smoothness indicator of component k and
/// applied to every component's k-derivative.
template <int D>
Mat<D> jacobian_one_sided(const CpField<D>& f, std::size_t node) {
  detail::require_stencil(f, node, 2, "jacobian_one_sided");
  const double inv = 1.0 / (2.0 * f.grid.spacing());
  Mat<D> m{};
  for (int k = 0; k < D; ++k) {
    const std::size_t s = f.grid.stride(k);
    const Vec<D>& f0 = f.cp[node];
    if (detail::forward_is_smoother(f, node, s, k)) {
      const Vec<D>& f1 = f.cp[node + s];
      const Vec<D>& f2 = f.cp[node + 2 * s];
      for (int j = 0; j < D; ++j) m[j][k] = (4.0 * (f1[j] - f0[j]) - (f2[j] - f0[j])) * inv;
    } else {
      const Vec<D>& f1 = f.cp[node - s];
      const Vec<D>& f2 = f.cp[node - 2 * s];
      for (int j = 0; j < D; ++j) m[j][k] = (-4.0 * (f1[j] - f0[j]) + (f2[j] - f0[j])) * inv;
    }
  }
  return m;
}

template <int D>
Mat<D> jacobian(const CpField<D>& f, std::size_t node, JacobianScheme scheme) {
  switch (scheme) {
    case JacobianScheme::Central2:
      return jacobian_central(f, node);
    case JacobianScheme::Biased3:
      return jacobian_biased3(f, node);
    case JacobianScheme::OneSided2:
      return jacobian_one_sided(f, node);
  }
  return {};
}

namespace detail {

// Cyclic Jacobi eigenvalues of a symmetric 3x3 matrix.
inline Vec3 symmetric_eigenvalues(Mat<3> a) {
  for (int sweep = 0; sweep < 30; ++sweep) {
    const double off = a[0][1] * a[0][1] + a[0][2] * a[0][2] + a[1][2] * a[1][2];
    const double scale = a[0][0] * a[0][0] + a[1][1] * a[1][1] + a[2][2] * a[2][2] + 2.0 * off;
    if (off <= 1e-30 * scale || off == 0.0) break;
    for (int p = 0; p < 2; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int r = 0; r < 3; ++r) {  // A <- A J
          const double arp = a[r][p], arq = a[r][q];
          a[r][p] = c * arp - s * arq;
          a[r][q] = s * arp + c * arq;
        }
        for (int r = 0; r < 3; ++r) {  // A <- J^T A
          const double apr = a[p][r], aqr = a[q][r];
          a[p][r] = c * apr - s * aqr;
          a[q][r] = s * apr + c * aqr;
        }
      }
    }
  }
  return {a[0][0], a[1][1], a[2][2]};
}

}  // namespace detail

/// Singular values in descending order. 2x2 uses the closed form; 3x3 the
/// square roots of the Jacobi eigenvalues of M^T M (the finite-difference
/// matrix is generally not symmetric).
template <int D>
Vec<D> singular_values(const Mat<D>& m) {
  if constexpr (D == 2) {
    const double a = m[0][0], b = m[0][1], c = m[1][0], d = m[1][1];
    const double p = std::hypot(a + d, c - b);
    const double q = std::hypot(a - d, b + c);
    return {0.5 * (p + q), 0.5 * std::abs(p - q)};
  } else {
    const Vec3 ev = detail::symmetric_eigenvalues(matmul<3>(transpose<3>(m), m));
    Vec3 s{std::sqrt(std::max(ev[0], 0.0)), std::sqrt(std::max(ev[1], 0.0)),
           std::sqrt(std::max(ev[2], 0.0))};
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  }
}

/// Area/length change factor: sigma_1 for curves in 2D, sigma_1 sigma_2
/// for surfaces in 3D, and the single nonzero sigma_1 for curves in 3D.
template <int D>
double sigma_weight(const Mat<D>& m, int codim) {
  const Vec<D> s = singular_values<D>(m);
  if constexpr (D == 2) {
    return s[0];
  } else {
    return codim == 1 ? s[0] * s[1] : s[0];
  }
}

/// Gaussian curvature of the level set through a point, from the Hessian
/// of the distance function (valid where |grad d| = 1).
inline double gaussian_from_distance(const Mat<3>& hess) {
  const double xx = hess[0][0], yy = hess[1][1], zz = hess[2][2];
  const double xy = hess[0][1], xz = hess[0][2], yz = hess[1][2];
  return xx * yy + xx * zz + yy * zz - xy * xy - xz * xz - yz * yz;
}

/// Central-difference Hessian of the sampled distance.
inline Mat<3> hessian_central(const CpField<3>& f, std::size_t node) {
  detail::require_stencil(f, node, 1, "hessian_central");
  const double h2 = f.grid.spacing() * f.grid.spacing();
  const auto d = [&](long di, long dj, long dk) {
    const long off = di * static_cast<long>(f.grid.stride(0)) + dj * static_cast<long>(f.grid.stride(1)) + dk;
    return f.dist[node + off];
  };
  Mat<3> h{};
  const double c = d(0, 0, 0);
  h[0][0] = (d(1, 0, 0) - 2.0 * c + d(-1, 0, 0)) / h2;
  h[1][1] = (d(0, 1, 0) - 2.0 * c + d(0, -1, 0)) / h2;
  h[2][2] = (d(0, 0, 1) - 2.0 * c + d(0, 0, -1)) / h2;
  h[0][1] = h[1][0] = (d(1, 1, 0) - d(1, -1, 0) - d(-1, 1, 0) + d(-1, -1, 0)) / (4.0 * h2);
  h[0][2] = h[2][0] = (d(1, 0, 1) - d(1, 0, -1) - d(-1, 0, 1) + d(-1, 0, -1)) / (4.0 * h2);
  h[1][2] = h[2][1] = (d(0, 1, 1) - d(0, 1, -1) - d(0, -1, 1) + d(0, -1, -1)) / (4.0 * h2);
  return h;
}

/// Jacobian of the projection from the level set at distance eta onto the
/// surface: 1 + eta kappa in 2D (pass kappa as `mean_curvature`), and
/// 1 + 2 eta H + eta^2 G in 3D.
inline double jacobian_eta_reference(double eta, double mean_curvature, double gaussian, int dim) {
  const double j = dim == 2 ? 1.0 + eta * mean_curvature
                            : 1.0 + 2.0 * eta * mean_curvature + eta * eta * gaussian;
  if (j < 0.0) throw PreconditionError("jacobian_eta_reference: eta lies beyond the focal distance");
  return j;
}

}  // namespace cpquad
