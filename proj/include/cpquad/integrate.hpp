#pragma once

// Narrow-band Riemann sums that turn a surface or curve integral into a
// volume integral weighted by the singular values of the closest-point
// Jacobian:
//
//   codim 1:  int_G v = h^n  sum_band v(P(x)) delta_eps(d) Sigma(x)
//   codim 2:  int_G g = h^3 / 2pi  sum_band g(P(x)) K_eps(d)/d sigma_1(x)
//
// Summation order is fixed: nodes are summed lexicographically within
// each axis-0 plane, then plane sums are added in plane order. The
// result therefore does not depend on the thread count, nor on whether
// the field was held in memory at once or streamed in slabs.

#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "cpquad/errors.hpp"
#include "cpquad/field.hpp"
#include "cpquad/geometry.hpp"
#include "cpquad/jacobian.hpp"
#include "cpquad/kernels.hpp"
#include "cpquad/parallel.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

/// Scalar function of the closest point; an empty function is the
/// constant one.
template <int D>
struct Integrand {
  std::string name = "one";
  std::function<double(const Vec<D>&)> fn;

  double operator()(const Vec<D>& p) const { return fn ? fn(p) : 1.0; }

  static Integrand one() { return {}; }
};

struct IntegralResult {
  double value = 0.0;
  std::size_t band_nodes = 0;
  double h = 0.0;
  double eps = 0.0;
  JacobianScheme scheme = JacobianScheme::Central2;
  KernelType kernel = KernelType::Cosine;
  /// Set by the hemisphere-corrected formulation when a correction was
  /// subtracted; false for closed curves.
  bool endpoint_correction = false;
};

struct IntegrateOptions {
  int threads = 1;
  /// When known, eps * max_curvature < 1 is enforced.
  std::optional<double> max_curvature;
};

enum class Formulation { Codim1, Codim2, Codim2Corrected };

namespace detail {

struct PlaneSum {
  int plane;  // global axis-0 index
  double sum;
};

/// Per-plane sums of weight(node) over the band, in plane order.
template <int D, class Weight>
std::vector<PlaneSum> plane_sums(const CpField<D>& f, const std::vector<std::size_t>& nodes, int threads,
                                 Weight&& weight) {
  const std::size_t stride0 = f.grid.stride(0);
  std::vector<std::pair<std::size_t, std::size_t>> ranges;
  for (std::size_t i = 0; i < nodes.size();) {
    std::size_t j = i;
    const std::size_t plane = nodes[i] / stride0;
    while (j < nodes.size() && nodes[j] / stride0 == plane) ++j;
    ranges.emplace_back(i, j);
    i = j;
  }
  std::vector<PlaneSum> sums(ranges.size());
  parallel_for(ranges.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      double s = 0.0;
      for (std::size_t i = ranges[r].first; i < ranges[r].second; ++i) s += weight(nodes[i]);
      sums[r] = {static_cast<int>(nodes[ranges[r].first] / stride0) + f.grid.offset(), s};
    }
  });
  return sums;
}

inline double total(const std::vector<PlaneSum>& sums) {
  double t = 0.0;
  for (const auto& p : sums) t += p.sum;
  return t;
}

inline void check_curvature(const IntegrateOptions& opt, double eps) {
  if (opt.max_curvature && !(eps * *opt.max_curvature < 1.0))
    throw PreconditionError("eps * max|kappa| = " + std::to_string(eps * *opt.max_curvature) +
                            " must be below 1");
}

inline void check_band(const BandIndex& band, int codim, JacobianScheme scheme, bool needs_jacobian) {
  if (band.nodes.empty()) throw EmptyBandError("integrate: empty band");
  if (band.codim != codim) throw std::invalid_argument("integrate: band codimension mismatch");
  if (needs_jacobian && band.stencil_radius < stencil_radius(scheme))
    throw GridBoundaryError("integrate: band was extracted for a smaller stencil than the scheme needs");
}

template <int D>
auto codim1_weight(const CpField<D>& f, const Integrand<D>& v, const Kernel& k, JacobianScheme scheme) {
  return [&f, &v, k, scheme](std::size_t node) {
    const double w = eval_kernel(k, f.dist[node]);
    if (w == 0.0) return 0.0;
    return v(f.cp[node]) * w * sigma_weight<D>(jacobian(f, node, scheme), 1);
  };
}

inline auto codim2_weight(const CpField<3>& f, const Integrand<3>& g, const Kernel& k, JacobianScheme scheme) {
  return [&f, &g, k, scheme](std::size_t node) {
    const double w = eval_kernel_over_distance(k, f.dist[node]);
    if (w == 0.0) return 0.0;
    return g(f.cp[node]) * w * sigma_weight<3>(jacobian(f, node, scheme), 2);
  };
}

inline auto uncorrected_weight(const CpField<3>& f, const Integrand<3>& g, const Kernel& k) {
  return [&f, &g, k](std::size_t node) {
    const double w = eval_kernel_over_distance(k, f.dist[node]);
    return w == 0.0 ? 0.0 : g(f.cp[node]) * w;
  };
}

inline double endpoint_correction(const Integrand<3>& g, const Kernel& k, std::span<const Vec3> endpoints) {
  double s = 0.0;
  for (const auto& e : endpoints) s += g(e);
  return s * kernel_first_moment(k);
}

}  // namespace detail

/// Surface (3D) or curve (2D) integral of v over the zero level set.
template <int D>
IntegralResult integrate_codim1(const CpField<D>& field, const BandIndex& band, const Integrand<D>& v,
                                const Kernel& kernel, JacobianScheme scheme, const IntegrateOptions& opt = {}) {
  detail::check_curvature(opt, kernel.eps);
  detail::check_band(band, 1, scheme, true);
  if (field.codim != 1) throw std::invalid_argument("integrate_codim1: field is not codimension 1");
  const auto sums = detail::plane_sums(field, band.nodes, opt.threads, detail::codim1_weight(field, v, kernel, scheme));
  const double h = field.grid.spacing();
  return {std::pow(h, D) * detail::total(sums), band.nodes.size(), h, kernel.eps, scheme, kernel.type};
}

/// Line integral of g over a curve in 3D, weighted by the nonzero
/// singular value of the Jacobian (end caps drop out by themselves).
inline IntegralResult integrate_codim2(const CpField<3>& field, const BandIndex& band, const Integrand<3>& g,
                                       const Kernel& kernel, JacobianScheme scheme,
                                       const IntegrateOptions& opt = {}) {
  detail::check_curvature(opt, kernel.eps);
  detail::check_band(band, 2, scheme, true);
  if (field.codim != 2) throw std::invalid_argument("integrate_codim2: field is not codimension 2");
  const auto sums = detail::plane_sums(field, band.nodes, opt.threads, detail::codim2_weight(field, g, kernel, scheme));
  const double h = field.grid.spacing();
  return {h * h * h * detail::total(sums) / (2.0 * pi), band.nodes.size(), h, kernel.eps, scheme, kernel.type};
}

/// Line integral without the Jacobian weight: the plain K(d)/d band sum,
/// minus the contribution of the two hemispherical end caps, evaluated
/// with g frozen at each endpoint. `endpoints` is empty for a closed
/// curve, in which case nothing is subtracted and the result is flagged.
inline IntegralResult integrate_codim2_corrected(const CpField<3>& field, const BandIndex& band,
                                                 const Integrand<3>& g, const Kernel& kernel,
                                                 std::span<const Vec3> endpoints,
                                                 const IntegrateOptions& opt = {}) {
  if (!endpoints.empty() && endpoints.size() != 2)
    throw std::invalid_argument("integrate_codim2_corrected: an open curve has exactly two endpoints");
  detail::check_band(band, 2, JacobianScheme::Central2, false);
  if (field.codim != 2) throw std::invalid_argument("integrate_codim2_corrected: field is not codimension 2");
  const auto sums = detail::plane_sums(field, band.nodes, opt.threads, detail::uncorrected_weight(field, g, kernel));
  const double h = field.grid.spacing();
  IntegralResult r{h * h * h * detail::total(sums) / (2.0 * pi), band.nodes.size(), h, kernel.eps,
                   JacobianScheme::Central2, kernel.type};
  r.value -= detail::endpoint_correction(g, kernel, endpoints);
  r.endpoint_correction = !endpoints.empty();
  return r;
}

// ---------------------------------------------------------------------------
// Slab streaming
// ---------------------------------------------------------------------------

template <int D>
struct StreamSpec {
  Formulation formulation = Formulation::Codim1;
  Kernel kernel{KernelType::Cosine, 0.2};
  JacobianScheme scheme = JacobianScheme::Central2;
  std::vector<Vec<D>> endpoints;  // Codim2Corrected only
  IntegrateOptions options;
  int slab_planes = 0;  // 0: pick from the plane size
};

namespace detail {

inline int auto_slab_planes(std::size_t plane_size) {
  constexpr std::size_t target = std::size_t{1} << 22;
  return static_cast<int>(std::max<std::size_t>(8, target / std::max<std::size_t>(plane_size, 1)));
}

}  // namespace detail

/// Samples the shape slab by slab along axis 0 (each slab padded by the
/// stencil radius) and integrates as it goes, so memory stays bounded by
/// one slab instead of the whole grid. Gives bit-identical results to
/// sample_field + extract_band + integrate_* on the full grid.
template <Shape S>
IntegralResult integrate_streamed(const Grid<S::dim>& grid, const S& shape, const Integrand<S::dim>& integrand,
                                  const StreamSpec<S::dim>& spec) {
  constexpr int D = S::dim;
  const Kernel& k = spec.kernel;
  const bool codim2 = spec.formulation != Formulation::Codim1;
  if (codim2 != (S::codim == 2)) throw ConfigError("formulation does not match the shape's codimension");
  if (spec.formulation != Formulation::Codim2Corrected) detail::check_curvature(spec.options, k.eps);
  const int r = stencil_radius(spec.scheme);
  const double h = grid.spacing();
  const int n0 = grid.count(0);
  std::size_t plane_size = grid.size() / n0;
  const int slab = spec.slab_planes > 0 ? spec.slab_planes : detail::auto_slab_planes(plane_size);

  SampleOptions sopt;
  sopt.cutoff = k.eps + (r + 1) * h;
  sopt.clearance = k.eps;
  sopt.threads = spec.options.threads;

  std::vector<detail::PlaneSum> sums;
  std::size_t band_nodes = 0;
  for (int i0 = 0; i0 < n0; i0 += slab) {
    const int i1 = std::min(i0 + slab, n0);
    const int w0 = std::max(0, i0 - r);
    const int w1 = std::min(n0, i1 + r);
    const CpField<D> f = sample_window(grid, shape, w0, w1, sopt);
    std::vector<std::size_t> nodes = detail::band_nodes(f, k.eps, r);
    // Keep only planes owned by this slab.
    std::erase_if(nodes, [&](std::size_t lin) {
      const int plane = static_cast<int>(lin / f.grid.stride(0)) + w0;
      return plane < i0 || plane >= i1;
    });
    if (nodes.empty()) continue;
    band_nodes += nodes.size();
    std::vector<detail::PlaneSum> part;
    if constexpr (D == 3) {
      if (spec.formulation == Formulation::Codim2)
        part = detail::plane_sums(f, nodes, spec.options.threads, detail::codim2_weight(f, integrand, k, spec.scheme));
      else if (spec.formulation == Formulation::Codim2Corrected)
        part = detail::plane_sums(f, nodes, spec.options.threads, detail::uncorrected_weight(f, integrand, k));
      else
        part = detail::plane_sums(f, nodes, spec.options.threads, detail::codim1_weight(f, integrand, k, spec.scheme));
    } else {
      part = detail::plane_sums(f, nodes, spec.options.threads, detail::codim1_weight(f, integrand, k, spec.scheme));
    }
    sums.insert(sums.end(), part.begin(), part.end());
  }
  if (band_nodes == 0)
    throw EmptyBandError("no grid node within eps = " + std::to_string(k.eps) +
                         " of the shape (grid too coarse or eps too small)");

  IntegralResult res{0.0, band_nodes, h, k.eps, spec.scheme, k.type};
  const double t = detail::total(sums);
  if (!codim2) {
    res.value = std::pow(h, D) * t;
  } else {
    res.value = h * h * h * t / (2.0 * pi);
    if constexpr (D == 3) {
      if (spec.formulation == Formulation::Codim2Corrected) {
        res.scheme = JacobianScheme::Central2;
        res.value -= detail::endpoint_correction(integrand, k, spec.endpoints);
        res.endpoint_correction = !spec.endpoints.empty();
      }
    }
  }
  return res;
}

// ---------------------------------------------------------------------------

/// |x_s x x_theta| for the tube x(s, theta) = gamma(s) + eta cos(theta) N(s)
/// + eta sin(theta) B(s), by fourth-order central differences of the
/// parameterization at curve parameter t.
template <Curve S>
double tube_area_element_check(const S& curve, double t, double theta, double eta) {
  constexpr double step = 2e-4;
  auto tube = [&](double tt, double th) {
    const CurvePoint f = curve.frame(tt);
    return f.position + (eta * std::cos(th)) * f.normal + (eta * std::sin(th)) * f.binormal;
  };
  auto diff = [&](auto&& fn) {
    return (1.0 / (12.0 * step)) * (fn(-2.0) - 8.0 * fn(-1.0) + 8.0 * fn(1.0) - fn(2.0));
  };
  if (t < curve.t_begin() + 2.0 * step || t > curve.t_end() - 2.0 * step)
    throw std::out_of_range("tube_area_element_check: parameter too close to the end of the span");
  const double tc = t;
  const Vec3 x_t = diff([&](double o) { return tube(tc + o * step, theta); });
  const Vec3 g_t = diff([&](double o) { return curve.frame(tc + o * step).position; });
  const Vec3 x_th = diff([&](double o) { return tube(tc, theta + o * step); });
  const Vec3 x_s = (1.0 / norm(g_t)) * x_t;
  return norm(cross(x_s, x_th));
}

}  // namespace cpquad
