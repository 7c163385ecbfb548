#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "support.hpp"

using namespace cpquad;

namespace {

constexpr double kR = 0.75;

// Arclength of the default coil, frozen from the converged quadrature.
constexpr double kCoilLength = 27.8102684881583;

HelixCoil default_coil() { return HelixCoil(0.75, 0.25, 0.2, 10.0, 0.0, 4.0 * pi); }

template <int D>
void expect_consistent(const Projection<D>& p, const Vec<D>& x, double tol = 1e-12) {
  EXPECT_NEAR(distance(p.cp, x), std::abs(p.dist), tol);
}

}  // namespace

TEST(Torus, TubeCentreTieBreak) {
  const Torus t(kR, 0.25);
  const auto p = t.query({0.75, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(p.dist, 0.25);
  EXPECT_NEAR(p.cp[0], 0.5, 1e-15);
  EXPECT_NEAR(p.cp[1], 0.0, 1e-15);
  EXPECT_NEAR(p.cp[2], 0.0, 1e-15);
}

TEST(Torus, AxisTieBreakPicksLexicographicallySmallest) {
  const Torus t(kR, 0.25);
  const auto p = t.query({0.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(p.dist, -0.5);
  EXPECT_NEAR(p.cp[0], -0.5, 1e-15);
  EXPECT_NEAR(p.cp[1], 0.0, 1e-15);
}

TEST(Torus, SignPositiveInside) {
  const Torus t(kR, 0.25);
  EXPECT_GT(t.query({0.8, 0.0, 0.1}).dist, 0.0);
  EXPECT_LT(t.query({1.2, 0.0, 0.0}).dist, 0.0);
}

TEST(Shapes, PointsOnShapeAreFixed) {
  std::mt19937_64 rng(11);
  const Torus t(kR, 0.25);
  for (int i = 0; i < 50; ++i) {
    const Vec3 x = test_support::torus_point(t, 0.0, rng);
    const auto p = t.query(x);
    EXPECT_NEAR(p.dist, 0.0, 1e-12);
    EXPECT_NEAR(distance(p.cp, x), 0.0, 1e-12);
  }
  const CircleArc2D arc(kR, 0.0, pi, 0.3);
  const Vec2 on{kR * std::cos(1.0 + 0.3), kR * std::sin(1.0 + 0.3)};
  EXPECT_NEAR(arc.query(on).dist, 0.0, 1e-15);
  const HelixCoil coil = default_coil();
  for (double tt : {0.0, 1.3, 7.9, 4.0 * pi}) {
    const Vec3 x = coil.position(tt);
    const auto p = coil.query(x);
    EXPECT_NEAR(p.dist, 0.0, 1e-12);
    EXPECT_NEAR(distance(p.cp, x), 0.0, 1e-10);
  }
}

TEST(CircleArc2D, EndpointCaptureMatchesBruteForce) {
  const CircleArc2D arc(kR, 0.0, pi / 2.0, 0.0);
  const Vec2 x{1.0, -0.3};
  const auto p = arc.query(x);
  // Brute-force minimum over densely sampled arc points.
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= 200000; ++i) {
    const double a = (pi / 2.0) * i / 200000.0;
    best = std::min(best, std::hypot(x[0] - kR * std::cos(a), x[1] - kR * std::sin(a)));
  }
  EXPECT_NEAR(p.dist, best, 1e-12);
  EXPECT_NEAR(p.dist, std::hypot(0.25, 0.3), 1e-15);
  EXPECT_NEAR(p.dist, 0.390512, 1e-6);
  EXPECT_DOUBLE_EQ(p.cp[0], 0.75);
  EXPECT_NEAR(p.cp[1], 0.0, 1e-16);
}

TEST(CircleArc2D, OpenArcUsesUnsignedDistance) {
  const CircleArc2D arc(kR, 0.0, pi, 0.0);
  EXPECT_GT(arc.query({0.0, 0.5}).dist, 0.0);
  EXPECT_GT(arc.query({0.0, 1.0}).dist, 0.0);
}

TEST(CircleArc2D, RotationMovesEndpoints) {
  const CircleArc2D arc(kR, 0.0, pi, 0.3);
  const Vec2 e = arc.endpoint(0);
  EXPECT_NEAR(e[0], kR * std::cos(0.3), 1e-15);
  EXPECT_NEAR(e[1], kR * std::sin(0.3), 1e-15);
}

TEST(SphereSector, BoundaryProjectionMatchesBruteForce) {
  const SphereSector q(kR, SectorFraction::Quarter);
  const SphereSector tq(kR, SectorFraction::ThreeQuarter);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.1, 1.1);
  const int m = 600;
  for (int trial = 0; trial < 30; ++trial) {
    const Vec3 x{u(rng), u(rng), u(rng)};
    for (const SphereSector* s : {&q, &tq}) {
      const auto p = s->query(x);
      expect_consistent<3>(p, x);
      EXPECT_NEAR(norm(p.cp), kR, 1e-14);
      double best = std::numeric_limits<double>::infinity();
      for (int i = 0; i <= m; ++i) {
        const double th = pi * i / m;
        for (int j = 0; j < 2 * m; ++j) {
          const double ph = pi * j / m;
          const Vec3 y{kR * std::cos(th), kR * std::sin(th) * std::cos(ph), kR * std::sin(th) * std::sin(ph)};
          const bool in_quarter = y[1] >= -1e-15 && y[2] >= -1e-15;
          const bool keep = s->fraction() == SectorFraction::Quarter ? in_quarter
                                                                     : (y[1] <= 1e-15 || y[2] <= 1e-15);
          if (keep) best = std::min(best, distance(x, y));
        }
      }
      // The oracle never beats the exact projection and is within its
      // sampling resolution of it.
      EXPECT_LE(std::abs(p.dist), best + 1e-12);
      EXPECT_GE(std::abs(p.dist), best - 4e-3);
    }
  }
}

TEST(SphereSector, CornerCapture) {
  const SphereSector q(kR, SectorFraction::Quarter);
  const auto p = q.query({1.0, -0.2, -0.2});
  EXPECT_DOUBLE_EQ(p.cp[0], kR);
  EXPECT_DOUBLE_EQ(p.cp[1], 0.0);
  EXPECT_DOUBLE_EQ(p.cp[2], 0.0);
}

TEST(Shapes, RejectNonFiniteInput) {
  const double nan = std::numeric_limits<double>::quiet_NaN();
  EXPECT_THROW(Torus(kR, 0.25).query({nan, 0.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(CircleArc2D(kR, 0.0, pi, 0.0).query({0.0, nan}), std::invalid_argument);
  EXPECT_THROW(default_coil().query({0.0, 0.0, nan}), std::invalid_argument);
}

TEST(Shapes, RejectInvalidParameters) {
  EXPECT_THROW(Torus(0.25, 0.75), std::invalid_argument);
  EXPECT_THROW(CircleArc2D(kR, 1.0, 0.5, 0.0), std::invalid_argument);
  EXPECT_THROW(CircleArc2D(kR, 0.0, 7.0, 0.0), std::invalid_argument);
  EXPECT_THROW(HelixCoil(0.75, 0.25, 0.8, 10.0, 0.0, 1.0), std::invalid_argument);
  EXPECT_THROW(SphereSector(-1.0, SectorFraction::Quarter), std::invalid_argument);
}

TEST(Shapes, ProjectionIdentityAndIdempotence) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.2, 1.2);
  const ShapeSpec shapes[] = {Torus(kR, 0.25), SphereSector(kR, SectorFraction::Quarter),
                              SphereSector(kR, SectorFraction::ThreeQuarter), Circle3D(0.5),
                              Segment3D({-0.5, 0.1, 0.0}, {0.4, -0.2, 0.3})};
  for (const auto& spec : shapes) {
    std::visit(
        [&](const auto& s) {
          if constexpr (std::decay_t<decltype(s)>::dim == 3) {
            for (int i = 0; i < 200; ++i) {
              const Vec3 x{u(rng), u(rng), u(rng)};
              const auto p = s.query(x);
              expect_consistent<3>(p, x);
              const auto q = s.query(p.cp);
              EXPECT_NEAR(q.dist, 0.0, 1e-12);
              EXPECT_NEAR(distance(q.cp, p.cp), 0.0, 1e-10);
            }
          }
        },
        spec);
  }
  const CircleArc2D arc(kR, 0.0, pi, 0.3);
  for (int i = 0; i < 200; ++i) {
    const Vec2 x{u(rng), u(rng)};
    const auto p = arc.query(x);
    expect_consistent<2>(p, x);
    EXPECT_NEAR(arc.query(p.cp).dist, 0.0, 1e-12);
  }
}

TEST(HelixCoil, DistanceMatchesBruteForceSampling) {
  const HelixCoil coil = default_coil();
  constexpr int samples = 1000000;
  std::vector<Vec3> pts(samples + 1);
  for (int i = 0; i <= samples; ++i) pts[i] = coil.position(4.0 * pi * i / samples);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> ut(0.0, 4.0 * pi), ud(0.02, 0.1);
  for (int q = 0; q < 100; ++q) {
    const CurvePoint f = coil.frame(ut(rng));
    const double th = ut(rng);
    const Vec3 x = f.position + ud(rng) * (std::cos(th) * f.normal + std::sin(th) * f.binormal);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& p : pts) best = std::min(best, distance(p, x));
    const auto p = coil.query(x);
    EXPECT_NEAR(p.dist, best, 1e-8);
    expect_consistent<3>(p, x);
  }
}

TEST(CurveFrame, CircleCurvature) {
  const Circle3D c(0.5);
  for (double t : {0.0, 1.0, 4.0}) {
    const CurvePoint f = curve_frame(c, t);
    EXPECT_NEAR(f.curvature, 2.0, 1e-14);
    EXPECT_NEAR(f.arclength, 0.5 * t, 1e-14);
  }
  EXPECT_THROW(curve_frame(c, 7.0), std::out_of_range);
}

TEST(CurveFrame, HelixLimitCurvature) {
  const HelixCoil helix(0.75, 0.25, 0.0, 0.0, 0.0, 4.0 * pi);
  EXPECT_NEAR(curve_frame(helix, 0.0).curvature, 1.2, 1e-12);
}

TEST(CurveFrame, OrthonormalRightHanded) {
  const HelixCoil coil = default_coil();
  for (int i = 0; i <= 40; ++i) {
    const CurvePoint f = curve_frame(coil, 4.0 * pi * i / 40.0);
    EXPECT_NEAR(norm(f.tangent), 1.0, 1e-12);
    EXPECT_NEAR(norm(f.normal), 1.0, 1e-12);
    EXPECT_NEAR(norm(f.binormal), 1.0, 1e-12);
    EXPECT_NEAR(dot(f.tangent, f.normal), 0.0, 1e-12);
    EXPECT_NEAR(dot(f.tangent, f.binormal), 0.0, 1e-12);
    EXPECT_NEAR(dot(f.normal, f.binormal), 0.0, 1e-12);
    EXPECT_LE(norm(cross(f.tangent, f.normal) - f.binormal), 1e-12);
  }
  EXPECT_THROW(curve_frame(coil, -0.1), std::out_of_range);
}

TEST(CurveFrame, CoilFrameMatchesFiniteDifferences) {
  const HelixCoil coil = default_coil();
  const double dt = 1e-4;
  for (double t : {0.5, 3.0, 9.0}) {
    const CurvePoint f = coil.frame(t);
    const Vec3 d1 = (1.0 / (2.0 * dt)) * (coil.position(t + dt) - coil.position(t - dt));
    const Vec3 d2 = (1.0 / (dt * dt)) * (coil.position(t + dt) - 2.0 * coil.position(t) + coil.position(t - dt));
    const double kappa = norm(cross(d1, d2)) / std::pow(norm(d1), 3);
    EXPECT_NEAR(f.curvature, kappa, 1e-5 * kappa);
    EXPECT_NEAR(dot(f.tangent, normalized(d1)), 1.0, 1e-9);
  }
}

TEST(ReferenceMeasure, ClosedForms) {
  EXPECT_NEAR(reference_measure(Torus(kR, 0.25)), 7.40220330, 1e-8);
  EXPECT_NEAR(reference_measure(Torus(kR, 0.25)), 0.75 * pi * pi, 1e-14);
  EXPECT_NEAR(reference_measure(SphereSector(kR, SectorFraction::Quarter)), 1.76714587, 1e-8);
  EXPECT_NEAR(reference_measure(SphereSector(kR, SectorFraction::ThreeQuarter)), 5.30143760, 1e-8);
  EXPECT_NEAR(reference_measure(CircleArc2D(kR, 0.0, pi, 0.0)), 2.35619449, 1e-8);
  EXPECT_NEAR(reference_measure(Circle3D(0.5)), pi, 1e-15);
}

TEST(ReferenceMeasure, CoilLengthAgainstExtrapolatedPolyline) {
  const HelixCoil coil = default_coil();
  auto polyline = [&](int n) {
    double s = 0.0;
    Vec3 prev = coil.position(0.0);
    for (int i = 1; i <= n; ++i) {
      const Vec3 cur = coil.position(4.0 * pi * i / n);
      s += distance(prev, cur);
      prev = cur;
    }
    return s;
  };
  // The chord error is O(n^-2); one Richardson step removes it.
  const double l1 = polyline(200000), l2 = polyline(400000);
  const double extrapolated = (4.0 * l2 - l1) / 3.0;
  EXPECT_NEAR(coil.reference_measure(), extrapolated, 1e-9 * extrapolated);
  EXPECT_NEAR(coil.reference_measure(), kCoilLength, 1e-12 * kCoilLength);
}

TEST(ReferenceMeasure, HelixLengthClosedForm) {
  const HelixCoil helix(0.75, 0.25, 0.0, 0.0, 0.0, 2.0 * pi);
  EXPECT_NEAR(helix.reference_measure(), 2.0 * pi * std::sqrt(0.625), 1e-13);
}

TEST(AnalyticSigma, Examples) {
  const SphereSector sphere(kR, SectorFraction::Full);
  EXPECT_NEAR(analytic_sigma_reference(sphere, Vec3{0.9, 0.0, 0.0}), 0.69444444, 1e-8);
  EXPECT_NEAR(analytic_sigma_reference(sphere, Vec3{0.0, kR, 0.0}), 1.0, 1e-15);
  const CircleArc2D circle(kR, 0.0, 2.0 * pi, 0.0);
  EXPECT_NEAR(analytic_sigma_reference(circle, Vec2{0.6, 0.0}), 1.25, 1e-15);
  const Torus t(kR, 0.25);
  EXPECT_NEAR(analytic_sigma_reference(t, Vec3{1.0, 0.0, 0.0}), 1.0, 1e-15);
  EXPECT_THROW(analytic_sigma_reference(t, Vec3{0.75, 0.0, 0.0}), SingularPointError);
  EXPECT_THROW(analytic_sigma_reference(sphere, Vec3{0.0, 0.0, 0.0}), SingularPointError);
}

TEST(AnalyticSigma, SphereIsRadiusRatioSquared) {
  const SphereSector sphere(kR, SectorFraction::Full);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> rho(0.55, 0.95);
  for (int i = 0; i < 100; ++i) {
    const double r = rho(rng);
    const Vec3 x = r * test_support::random_unit(rng);
    EXPECT_NEAR(analytic_sigma_reference(sphere, x) - (kR / r) * (kR / r), 0.0, 1e-12);
  }
}

TEST(AnalyticSigma, ZeroOnCapsAndCorners) {
  const SphereSector q(kR, SectorFraction::Quarter);
  EXPECT_EQ(analytic_sigma_reference(q, Vec3{0.9, -0.1, -0.1}), 0.0);
  const Segment3D seg({0.0, 0.0, 0.0}, {1.0, 0.0, 0.0});
  EXPECT_EQ(analytic_sigma_reference(seg, Vec3{1.05, 0.01, 0.0}), 0.0);
  EXPECT_EQ(analytic_sigma_reference(seg, Vec3{0.5, 0.05, 0.0}), 1.0);
}

TEST(ShapeSpec, Dispatch) {
  const ShapeSpec s = Torus(kR, 0.25);
  EXPECT_EQ(shape_dim(s), 3);
  EXPECT_EQ(shape_codim(s), 1);
  EXPECT_EQ(shape_codim(ShapeSpec(Circle3D(0.5))), 2);
  EXPECT_EQ(shape_dim(ShapeSpec(CircleArc2D(kR, 0.0, pi, 0.0))), 2);
  EXPECT_DOUBLE_EQ(max_curvature(s), 4.0);
  EXPECT_EQ(curve_endpoints(ShapeSpec(Circle3D(0.5))).size(), 0u);
  EXPECT_EQ(curve_endpoints(ShapeSpec(default_coil())).size(), 2u);
}
