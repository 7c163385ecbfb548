#pragma once

// Exact distance / closest-point oracles for the test shapes, plus
// their analytic lengths, areas, curvatures and Jacobian weights.
//
// Sign convention: closed codimension-1 shapes return a signed distance
// that is positive inside; open shapes and all curves in 3D return the
// unsigned distance.

#include <algorithm>
#include <cmath>
#include <concepts>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cpquad/errors.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

template <int D>
struct Projection {
  double dist = 0.0;  // signed or unsigned, see shape
  Vec<D> cp{};
};

/// A shape usable by the samplers: exposes its ambient dimension,
/// codimension and a closest-point query.
template <class S>
concept Shape = requires(const S& s, const Vec<S::dim>& x) {
  { S::dim } -> std::convertible_to<int>;
  { S::codim } -> std::convertible_to<int>;
  { s.query(x) } -> std::same_as<Projection<S::dim>>;
};

/// Point on a space curve together with its Frenet frame.
struct CurvePoint {
  Vec3 position{};
  double arclength = 0.0;
  Vec3 tangent{};
  Vec3 normal{};
  Vec3 binormal{};
  double curvature = 0.0;
};

namespace detail {

inline void require_finite(std::initializer_list<double> xs, const char* what) {
  for (double v : xs)
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string(what) + ": non-finite input");
}

template <int D>
inline void require_finite(const Vec<D>& x) {
  if (!all_finite(x)) throw std::invalid_argument("shape_query: non-finite query point");
}

// Picks the nearer of two candidates; exact ties (to a few ulps) go to
// the lexicographically smaller point.
template <int D>
inline bool closer(const Vec<D>& x, const Vec<D>& a, const Vec<D>& b) {
  const double da = distance(x, a);
  const double db = distance(x, b);
  const double tol = 4.0 * std::numeric_limits<double>::epsilon() * std::max({1.0, da, db});
  if (std::abs(da - db) <= tol) return lex_less(a, b);
  return da < db;
}

// 16-point Gauss-Legendre nodes/weights on [-1, 1].
inline constexpr std::array<double, 8> gl16_x = {
    0.0950125098376374401853193, 0.2816035507792589132304605,
    0.4580167776572273863424194, 0.6178762444026437484466718,
    0.7554044083550030338951012, 0.8656312023878317438804679,
    0.9445750230732325760779884, 0.9894009349916499325961542};
inline constexpr std::array<double, 8> gl16_w = {
    0.1894506104550684962853967, 0.1826034150449235888667637,
    0.1691565193950025381893121, 0.1495959888165767320815017,
    0.1246289712555338720524763, 0.0951585116824927848099251,
    0.0622535239386478928628438, 0.0271524594117540948517806};

template <class F>
double gauss_legendre(F&& f, double a, double b, int panels) {
  const double w = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * w;
    const double half = 0.5 * w;
    double s = 0.0;
    for (std::size_t i = 0; i < gl16_x.size(); ++i)
      s += gl16_w[i] * (f(mid - half * gl16_x[i]) + f(mid + half * gl16_x[i]));
    total += half * s;
  }
  return total;
}

/// Composite Gauss-Legendre, doubling the panel count until two
/// successive estimates agree to `tol`.
template <class F>
double integrate_until_converged(F&& f, double a, double b, double tol = 1e-12) {
  int panels = 4;
  double prev = gauss_legendre(f, a, b, panels);
  for (int it = 0; it < 20; ++it) {
    panels *= 2;
    const double cur = gauss_legendre(f, a, b, panels);
    if (std::abs(cur - prev) <= tol) return cur;
    prev = cur;
  }
  return prev;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CircleArc2D
// ---------------------------------------------------------------------------

/// Arc of the circle of radius R about the origin covering the angles
/// [alpha0, alpha1], then rotated rigidly by phi. A span of exactly 2*pi
/// is the full (closed) circle, which gets a signed distance.
class CircleArc2D {
 public:
  static constexpr int dim = 2;
  static constexpr int codim = 1;

  CircleArc2D(double radius, double alpha0, double alpha1, double phi = 0.0)
      : radius_(radius), alpha0_(alpha0), alpha1_(alpha1), phi_(phi) {
    detail::require_finite({radius, alpha0, alpha1, phi}, "CircleArc2D");
    if (!(radius > 0.0)) throw std::invalid_argument("CircleArc2D: radius must be positive");
    if (!(alpha0 < alpha1) || alpha1 > alpha0 + 2.0 * pi + 1e-15)
      throw std::invalid_argument("CircleArc2D: need alpha0 < alpha1 <= alpha0 + 2 pi");
  }

  double radius() const { return radius_; }
  double alpha0() const { return alpha0_; }
  double alpha1() const { return alpha1_; }
  double phi() const { return phi_; }
  bool closed() const { return alpha1_ - alpha0_ >= 2.0 * pi - 1e-15; }

  Vec2 endpoint(int which) const {
    const double a = (which == 0 ? alpha0_ : alpha1_) + phi_;
    return {radius_ * std::cos(a), radius_ * std::sin(a)};
  }

  /// True when the world-frame polar angle `theta` lies inside the arc.
  bool covers_angle(double theta) const {
    if (closed()) return true;
    const double rel = std::fmod(std::fmod(theta - phi_ - alpha0_, 2.0 * pi) + 2.0 * pi, 2.0 * pi);
    return rel <= alpha1_ - alpha0_;
  }

  Projection<2> query(const Vec2& x) const {
    detail::require_finite<2>(x);
    const double rho = norm(x);
    if (rho == 0.0) {
      // Every arc point is equidistant; take the lexicographically smallest.
      Vec2 best = endpoint(0);
      if (lex_less(endpoint(1), best)) best = endpoint(1);
      if (covers_angle(pi)) best = {-radius_, 0.0};
      return {radius_, best};
    }
    if (covers_angle(std::atan2(x[1], x[0]))) {
      const Vec2 cp = (radius_ / rho) * x;
      const double d = closed() ? radius_ - rho : std::abs(rho - radius_);
      return {d, cp};
    }
    const Vec2 e0 = endpoint(0);
    const Vec2 e1 = endpoint(1);
    const Vec2 cp = detail::closer<2>(x, e0, e1) ? e0 : e1;
    return {distance(x, cp), cp};
  }

  double reference_measure() const { return radius_ * (alpha1_ - alpha0_); }
  double max_curvature() const { return 1.0 / radius_; }

 private:
  double radius_;
  double alpha0_;
  double alpha1_;
  double phi_;
};

// ---------------------------------------------------------------------------
// Torus
// ---------------------------------------------------------------------------

/// Torus about the z axis, centred at the origin.
class Torus {
 public:
  static constexpr int dim = 3;
  static constexpr int codim = 1;

  Torus(double major, double minor) : major_(major), minor_(minor) {
    detail::require_finite({major, minor}, "Torus");
    if (!(major > 0.0) || !(minor > 0.0) || !(minor < major))
      throw std::invalid_argument("Torus: need 0 < r < R");
  }

  double major_radius() const { return major_; }
  double minor_radius() const { return minor_; }
  bool closed() const { return true; }

  Projection<3> query(const Vec3& x) const {
    detail::require_finite<3>(x);
    const double rho = std::hypot(x[0], x[1]);
    // Azimuthal direction; on the z axis every azimuth ties and the one
    // with the smallest x coordinate wins.
    const double ux = rho > 0.0 ? x[0] / rho : -1.0;
    const double uy = rho > 0.0 ? x[1] / rho : 0.0;
    const double qr = rho - major_;
    const double qz = x[2];
    const double qn = std::hypot(qr, qz);
    if (qn == 0.0) {
      const Vec3 inner{(major_ - minor_) * ux, (major_ - minor_) * uy, 0.0};
      const Vec3 outer{(major_ + minor_) * ux, (major_ + minor_) * uy, 0.0};
      return {minor_, lex_less(inner, outer) ? inner : outer};
    }
    const double radial = major_ + minor_ * qr / qn;
    const Vec3 cp{radial * ux, radial * uy, minor_ * qz / qn};
    return {minor_ - qn, cp};
  }

  double reference_measure() const { return 4.0 * pi * pi * major_ * minor_; }
  double max_curvature() const { return 1.0 / minor_; }

  /// Closed-form product of the area-change ratios between the level set
  /// through x and the torus.
  double analytic_sigma(const Vec3& x) const {
    const double rho = std::hypot(x[0], x[1]);
    const double qr = rho - major_;
    const double a = std::hypot(qr, x[2]);
    if (rho == 0.0 || a == 0.0)
      throw SingularPointError("Torus::analytic_sigma: point on the focal set");
    const double cosv = qr / a;
    return (minor_ / a) * (major_ + minor_ * cosv) / (major_ + a * cosv);
  }

 private:
  double major_;
  double minor_;
};

// ---------------------------------------------------------------------------
// SphereSector
// ---------------------------------------------------------------------------

enum class SectorFraction { Full, Quarter, ThreeQuarter };

/// Sphere of radius R about the origin, or a part of it. The quarter is
/// {y >= 0, z >= 0}; the three-quarter sphere is its complement (closed).
/// Both parts share the boundary made of the two half great circles
/// {y = 0, z >= 0} and {z = 0, y >= 0}, meeting at the corners (+-R, 0, 0).
class SphereSector {
 public:
  static constexpr int dim = 3;
  static constexpr int codim = 1;

  SphereSector(double radius, SectorFraction fraction) : radius_(radius), fraction_(fraction) {
    detail::require_finite({radius}, "SphereSector");
    if (!(radius > 0.0)) throw std::invalid_argument("SphereSector: radius must be positive");
  }

  double radius() const { return radius_; }
  SectorFraction fraction() const { return fraction_; }
  bool closed() const { return fraction_ == SectorFraction::Full; }

  bool contains_direction(const Vec3& q) const {
    switch (fraction_) {
      case SectorFraction::Full:
        return true;
      case SectorFraction::Quarter:
        return q[1] >= 0.0 && q[2] >= 0.0;
      case SectorFraction::ThreeQuarter:
        return q[1] <= 0.0 || q[2] <= 0.0;
    }
    return false;
  }

  Projection<3> query(const Vec3& x) const {
    detail::require_finite<3>(x);
    const double rho = norm(x);
    if (rho > 0.0) {
      const Vec3 q = (radius_ / rho) * x;
      if (contains_direction(q)) {
        const double d = closed() ? radius_ - rho : std::abs(rho - radius_);
        return {d, q};
      }
    } else if (closed()) {
      return {radius_, Vec3{-radius_, 0.0, 0.0}};
    }
    // Nearest point of the boundary: two half great circles plus corners.
    Vec3 best{-radius_, 0.0, 0.0};
    auto consider = [&](const Vec3& c) {
      if (detail::closer<3>(x, c, best)) best = c;
    };
    consider(Vec3{radius_, 0.0, 0.0});
    const double w1 = std::hypot(x[0], x[2]);  // projection onto y = 0
    if (w1 > 0.0 && x[2] >= 0.0) consider(Vec3{radius_ * x[0] / w1, 0.0, radius_ * x[2] / w1});
    const double w2 = std::hypot(x[0], x[1]);  // projection onto z = 0
    if (w2 > 0.0 && x[1] >= 0.0) consider(Vec3{radius_ * x[0] / w2, radius_ * x[1] / w2, 0.0});
    return {distance(x, best), best};
  }

  double reference_measure() const {
    const double full = 4.0 * pi * radius_ * radius_;
    switch (fraction_) {
      case SectorFraction::Full:
        return full;
      case SectorFraction::Quarter:
        return 0.25 * full;
      case SectorFraction::ThreeQuarter:
        return 0.75 * full;
    }
    return full;
  }

  double max_curvature() const { return 1.0 / radius_; }

  /// (R / rho)^2 where the closest point is interior to the surface and 0
  /// on the edge cylinders and corner spheres.
  double analytic_sigma(const Vec3& x) const {
    const double rho = norm(x);
    if (rho == 0.0) throw SingularPointError("SphereSector::analytic_sigma: point at the centre");
    if (!contains_direction((radius_ / rho) * x)) return 0.0;
    return (radius_ / rho) * (radius_ / rho);
  }

 private:
  double radius_;
  SectorFraction fraction_;
};

// ---------------------------------------------------------------------------
// Curves in 3D (codimension 2)
// ---------------------------------------------------------------------------

/// Circle of radius r_c in the plane z = 0, centred at the origin.
class Circle3D {
 public:
  static constexpr int dim = 3;
  static constexpr int codim = 2;

  explicit Circle3D(double radius) : radius_(radius) {
    detail::require_finite({radius}, "Circle3D");
    if (!(radius > 0.0)) throw std::invalid_argument("Circle3D: radius must be positive");
  }

  double radius() const { return radius_; }
  bool closed() const { return true; }
  double t_begin() const { return 0.0; }
  double t_end() const { return 2.0 * pi; }

  Projection<3> query(const Vec3& x) const {
    detail::require_finite<3>(x);
    const double w = std::hypot(x[0], x[1]);
    const Vec3 cp = w > 0.0 ? Vec3{radius_ * x[0] / w, radius_ * x[1] / w, 0.0}
                            : Vec3{-radius_, 0.0, 0.0};
    return {distance(x, cp), cp};
  }

  CurvePoint frame(double t) const {
    if (!(t >= t_begin() && t <= t_end()))
      throw std::out_of_range("Circle3D::frame: parameter out of span");
    const double c = std::cos(t), s = std::sin(t);
    return {{radius_ * c, radius_ * s, 0.0}, radius_ * t, {-s, c, 0.0}, {-c, -s, 0.0},
            {0.0, 0.0, 1.0}, 1.0 / radius_};
  }

  double reference_measure() const { return 2.0 * pi * radius_; }
  double max_curvature() const { return 1.0 / radius_; }

  double analytic_sigma(const Vec3& x) const {
    const double w = std::hypot(x[0], x[1]);
    if (w == 0.0) throw SingularPointError("Circle3D::analytic_sigma: point on the axis");
    return radius_ / w;
  }

 private:
  double radius_;
};

/// Straight segment from a to b (open curve, zero curvature).
class Segment3D {
 public:
  static constexpr int dim = 3;
  static constexpr int codim = 2;

  Segment3D(const Vec3& a, const Vec3& b) : a_(a), b_(b) {
    detail::require_finite<3>(a);
    detail::require_finite<3>(b);
    if (!(distance(a, b) > 0.0)) throw std::invalid_argument("Segment3D: degenerate segment");
  }

  const Vec3& a() const { return a_; }
  const Vec3& b() const { return b_; }
  bool closed() const { return false; }
  double t_begin() const { return 0.0; }
  double t_end() const { return 1.0; }

  Projection<3> query(const Vec3& x) const {
    detail::require_finite<3>(x);
    const Vec3 ab = b_ - a_;
    const double t = std::clamp(dot(x - a_, ab) / dot(ab, ab), 0.0, 1.0);
    const Vec3 cp = a_ + t * ab;
    return {distance(x, cp), cp};
  }

  CurvePoint frame(double t) const {
    if (!(t >= t_begin() && t <= t_end()))
      throw std::out_of_range("Segment3D::frame: parameter out of span");
    const Vec3 ab = b_ - a_;
    const Vec3 tan = normalized<3>(ab);
    // Any unit normal works; take the one built from the axis least
    // aligned with the tangent.
    int k = 0;
    for (int i = 1; i < 3; ++i)
      if (std::abs(tan[i]) < std::abs(tan[k])) k = i;
    Vec3 e{};
    e[k] = 1.0;
    const Vec3 nrm = normalized<3>(e - dot(e, tan) * tan);
    return {a_ + t * ab, t * norm(ab), tan, nrm, cross(tan, nrm), 0.0};
  }

  double reference_measure() const { return distance(a_, b_); }
  double max_curvature() const { return 0.0; }

  double analytic_sigma(const Vec3& x) const {
    const Vec3 ab = b_ - a_;
    const double t = dot(x - a_, ab) / dot(ab, ab);
    return (t < 0.0 || t > 1.0) ? 0.0 : 1.0;
  }

 private:
  Vec3 a_;
  Vec3 b_;
};

/// A coil wound around the helix (r_h cos t, r_h sin t, b t):
///
///   coil(t) = helix(t) + rho_c (cos(m t) N(t) + sin(m t) B(t))
///
/// with (N, B) the helix normal and binormal and t in [t0, t1].
/// rho_c = 0 gives back the helix itself.
class HelixCoil {
 public:
  static constexpr int dim = 3;
  static constexpr int codim = 2;
  static constexpr int scan_samples = 4096;

  HelixCoil(double helix_radius, double pitch, double offset, double windings, double t0,
            double t1)
      : rh_(helix_radius), b_(pitch), rho_(offset), m_(windings), t0_(t0), t1_(t1) {
    detail::require_finite({helix_radius, pitch, offset, windings, t0, t1}, "HelixCoil");
    if (!(rh_ > 0.0) || !(b_ > 0.0)) throw std::invalid_argument("HelixCoil: r_h and b must be positive");
    if (!(rho_ >= 0.0) || !(rho_ < rh_))
      throw std::invalid_argument("HelixCoil: need 0 <= offset < r_h");
    if (!(t0_ < t1_)) throw std::invalid_argument("HelixCoil: need t0 < t1");
    speed_ = std::hypot(rh_, b_);
    kappa_ = rh_ / (speed_ * speed_);
    tau_ = b_ / (speed_ * speed_);
    if (!(rho_ * kappa_ < 1.0)) throw std::invalid_argument("HelixCoil: offset exceeds helix reach");
    samples_.resize(scan_samples);
    for (int i = 0; i < scan_samples; ++i) samples_[i] = position(sample_t(i));
  }

  double helix_radius() const { return rh_; }
  double pitch() const { return b_; }
  double offset() const { return rho_; }
  double windings() const { return m_; }
  double t_begin() const { return t0_; }
  double t_end() const { return t1_; }
  bool closed() const { return false; }

  Vec3 position(double t) const {
    const auto f = helix_frame(t);
    const double u = m_ * t;
    return Vec3{rh_ * std::cos(t), rh_ * std::sin(t), b_ * t} +
           rho_ * (std::cos(u) * f[1] + std::sin(u) * f[2]);
  }

  /// First and second derivatives with respect to t.
  std::pair<Vec3, Vec3> derivatives(double t) const {
    const auto f = helix_frame(t);
    const double u = m_ * t, cu = std::cos(u), su = std::sin(u);
    const double c = speed_, k = kappa_;
    const double w = m_ + c * tau_;
    const double a = c * (1.0 - rho_ * k * cu);
    const double da = c * rho_ * k * m_ * su;
    const Vec3 d1 = a * f[0] + (rho_ * w) * (cu * f[2] - su * f[1]);
    const Vec3 d2 = (da + rho_ * w * c * k * su) * f[0] + (a * c * k - rho_ * w * w * cu) * f[1] -
                    (rho_ * w * w * su) * f[2];
    return {d1, d2};
  }

  double speed(double t) const { return norm(derivatives(t).first); }

  CurvePoint frame(double t) const {
    if (!(t >= t0_ && t <= t1_)) throw std::out_of_range("HelixCoil::frame: parameter out of span");
    CurvePoint p = frenet(t);
    if (t != t0_)
      p.arclength =
          detail::integrate_until_converged([this](double u) { return speed(u); }, t0_, t);
    return p;
  }

  /// Parameter of the closest point: coarse scan over the sample table,
  /// golden-section refinement inside the winning bracket, then a
  /// safeguarded Newton polish on (coil(t) - x) . coil'(t) = 0.
  double closest_parameter(const Vec3& x) const {
    int best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (int i = 0; i < scan_samples; ++i) {
      const Vec3 r = samples_[i] - x;
      const double d2 = dot(r, r);
      if (d2 < best_d2) {
        best_d2 = d2;
        best = i;
      }
    }
    double lo = sample_t(std::max(best - 1, 0));
    double hi = sample_t(std::min(best + 1, scan_samples - 1));
    auto f = [&](double t) {
      const Vec3 r = position(t) - x;
      return dot(r, r);
    };
    constexpr double g = 0.6180339887498949;
    double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    double fc = f(c), fd = f(d);
    while (hi - lo > 1e-9) {
      if (fc <= fd) {
        hi = d;
        d = c;
        fd = fc;
        c = hi - g * (hi - lo);
        fc = f(c);
      } else {
        lo = c;
        c = d;
        fc = fd;
        d = lo + g * (hi - lo);
        fd = f(d);
      }
    }
    const double blo = sample_t(std::max(best - 1, 0));
    const double bhi = sample_t(std::min(best + 1, scan_samples - 1));
    double t = 0.5 * (lo + hi);
    for (int it = 0; it < 8; ++it) {
      const Vec3 r = position(t) - x;
      const auto [d1, d2] = derivatives(t);
      const double gval = dot(r, d1);
      const double gder = dot(d1, d1) + dot(r, d2);
      if (!(gder > 0.0)) break;
      const double next = std::clamp(t - gval / gder, blo, bhi);
      const double step = std::abs(next - t);
      t = next;
      if (step <= 1e-15 * std::max(1.0, std::abs(t))) break;
    }
    // Endpoints are part of the candidate set for an open curve.
    for (double te : {t0_, t1_}) {
      if (f(te) < f(t)) t = te;
    }
    return t;
  }

  Projection<3> query(const Vec3& x) const {
    detail::require_finite<3>(x);
    const Vec3 cp = position(closest_parameter(x));
    return {distance(x, cp), cp};
  }

  /// Arclength of the coil by converged composite Gauss-Legendre.
  double reference_measure() const {
    return detail::integrate_until_converged([this](double t) { return speed(t); }, t0_, t1_);
  }

  double max_curvature() const {
    double kmax = 0.0;
    constexpr int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
      const double t = t0_ + (t1_ - t0_) * i / samples;
      const auto [d1, d2] = derivatives(t);
      const double sp = norm(d1);
      kmax = std::max(kmax, norm(cross(d1, d2)) / (sp * sp * sp));
    }
    return kmax;
  }

  /// 1 / (1 - kappa eta cos(theta)) on the tube, 0 on the end caps.
  double analytic_sigma(const Vec3& x) const {
    const double t = closest_parameter(x);
    const CurvePoint fr = frenet(t);
    const Vec3 r = x - fr.position;
    if ((t == t0_ && dot(r, fr.tangent) < 0.0) || (t == t1_ && dot(r, fr.tangent) > 0.0))
      return 0.0;
    const double denom = 1.0 - fr.curvature * dot(r, fr.normal);
    if (!(denom > 0.0)) throw SingularPointError("HelixCoil::analytic_sigma: beyond focal distance");
    return 1.0 / denom;
  }

  /// Axis-aligned bounding box of the curve (from a dense sample).
  std::pair<Vec3, Vec3> bounding_box() const {
    Vec3 lo = position(t0_), hi = lo;
    constexpr int samples = 20000;
    for (int i = 0; i <= samples; ++i) {
      const Vec3 p = position(t0_ + (t1_ - t0_) * i / samples);
      for (int k = 0; k < 3; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    return {lo, hi};
  }

 private:
  double sample_t(int i) const { return t0_ + (t1_ - t0_) * i / (scan_samples - 1); }

  // Frenet frame without the arclength.
  CurvePoint frenet(double t) const {
    const auto [d1, d2] = derivatives(t);
    const Vec3 c12 = cross(d1, d2);
    const double sp = norm(d1);
    const Vec3 tan = (1.0 / sp) * d1;
    const Vec3 bin = normalized<3>(c12);
    return {position(t), 0.0, tan, cross(bin, tan), bin, norm(c12) / (sp * sp * sp)};
  }

  // Helix (T, N, B) at t.
  std::array<Vec3, 3> helix_frame(double t) const {
    const double c = std::cos(t), s = std::sin(t);
    return {{{-rh_ * s / speed_, rh_ * c / speed_, b_ / speed_},
             {-c, -s, 0.0},
             {b_ * s / speed_, -b_ * c / speed_, rh_ / speed_}}};
  }

  double rh_, b_, rho_, m_, t0_, t1_;
  double speed_ = 0.0, kappa_ = 0.0, tau_ = 0.0;
  std::vector<Vec3> samples_;
};

// ---------------------------------------------------------------------------
// Free-function surface and the runtime shape variant
// ---------------------------------------------------------------------------

using ShapeSpec = std::variant<CircleArc2D, Torus, SphereSector, Circle3D, HelixCoil, Segment3D>;

template <Shape S>
Projection<S::dim> shape_query(const S& shape, const Vec<S::dim>& x) {
  return shape.query(x);
}

template <class S>
concept Curve = Shape<S> && requires(const S& s, double t) {
  { s.frame(t) } -> std::same_as<CurvePoint>;
};

template <Curve S>
CurvePoint curve_frame(const S& shape, double t) {
  return shape.frame(t);
}

template <class S>
double reference_measure(const S& shape) {
  return shape.reference_measure();
}

inline double reference_measure(const ShapeSpec& spec) {
  return std::visit([](const auto& s) { return s.reference_measure(); }, spec);
}

inline double max_curvature(const ShapeSpec& spec) {
  return std::visit([](const auto& s) { return s.max_curvature(); }, spec);
}

inline int shape_dim(const ShapeSpec& spec) {
  return std::visit([](const auto& s) { return std::decay_t<decltype(s)>::dim; }, spec);
}

inline int shape_codim(const ShapeSpec& spec) {
  return std::visit([](const auto& s) { return std::decay_t<decltype(s)>::codim; }, spec);
}

/// Jacobian weight Sigma (codim 1) or sigma (codim 2) from the closed-form
/// geometry of the shape. Throws SingularPointError on the focal set.
inline double analytic_sigma_reference(const CircleArc2D& arc, const Vec2& x) {
  const double rho = norm(x);
  if (rho == 0.0) throw SingularPointError("CircleArc2D::analytic_sigma: point at the centre");
  return arc.covers_angle(std::atan2(x[1], x[0])) ? arc.radius() / rho : 0.0;
}

template <class S>
  requires requires(const S& s, const Vec3& x) { s.analytic_sigma(x); }
double analytic_sigma_reference(const S& shape, const Vec3& x) {
  return shape.analytic_sigma(x);
}

/// Endpoints of an open curve in 3D (empty for closed curves).
inline std::vector<Vec3> curve_endpoints(const ShapeSpec& spec) {
  if (const auto* c = std::get_if<HelixCoil>(&spec))
    return {c->position(c->t_begin()), c->position(c->t_end())};
  if (const auto* s = std::get_if<Segment3D>(&spec)) return {s->a(), s->b()};
  return {};
}

}  // namespace cpquad
