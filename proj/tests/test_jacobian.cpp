#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "support.hpp"

using namespace cpquad;

namespace {

constexpr double kR = 0.75;

// Field on [-1, 1]^D with h = 0.25 whose closest-point map is `map`.
template <int D, class F>
CpField<D> field_from(F map) {
  CpField<D> f{Grid<D>::cube(-1.0, 1.0, 9), 1, {}, {}};
  const std::size_t n = f.grid.size();
  f.dist.assign(n, 0.0);
  f.cp.resize(n);
  for (std::size_t i = 0; i < n; ++i) f.cp[i] = map(f.grid.node(i));
  return f;
}

template <int D>
std::size_t at(const CpField<D>& f, Index<D> idx) {
  return f.grid.linear(idx);
}

constexpr JacobianScheme kSchemes[] = {JacobianScheme::Central2, JacobianScheme::Biased3,
                                       JacobianScheme::OneSided2};

}  // namespace

TEST(Jacobian, PlaneIsExactProjection) {
  const auto f = field_from<3>([](const Vec3& x) { return Vec3{x[0], x[1], 0.0}; });
  const Mat<3> expect{{{1, 0, 0}, {0, 1, 0}, {0, 0, 0}}};
  for (auto s : kSchemes) EXPECT_EQ(jacobian(f, at<3>(f, {4, 3, 5}), s), expect) << scheme_name(s);
}

TEST(Jacobian, ConstantMapHasZeroWeight) {
  const auto f = field_from<3>([](const Vec3&) { return Vec3{0.3, -0.2, 0.1}; });
  for (auto s : kSchemes) {
    const auto m = jacobian(f, at<3>(f, {4, 4, 4}), s);
    EXPECT_EQ(m, Mat<3>{});
    EXPECT_EQ(sigma_weight<3>(m, 1), 0.0);
    EXPECT_EQ(sigma_weight<3>(m, 2), 0.0);
  }
}

TEST(Jacobian, SphereAxisNodeSecondOrder) {
  const SphereSector s(kR, SectorFraction::Full);
  double prev_sv = 0.0, prev_sigma = 0.0;
  for (double h : {0.02, 0.01, 0.005}) {
    const auto f = test_support::local_field(s, Vec3{0.9, 0.0, 0.0}, h, 1);
    const auto m = jacobian_central(f, test_support::centre_node(f));
    const auto sv = singular_values<3>(m);
    const double err = std::max({std::abs(sv[0] - 5.0 / 6.0), std::abs(sv[1] - 5.0 / 6.0), sv[2]});
    const double serr = std::abs(sigma_weight<3>(m, 1) - 25.0 / 36.0);
    EXPECT_LT(err, h * h);
    if (prev_sv > 0.0) {
      EXPECT_GT(prev_sv / err, 3.5);
      EXPECT_GT(prev_sigma / serr, 3.5);
    }
    prev_sv = err;
    prev_sigma = serr;
  }
}

TEST(Jacobian, Biased3ExactOnCubics) {
  const auto f = field_from<3>([](const Vec3& x) { return Vec3{x[0] * x[0] * x[0], 2.0 * x[1], x[2] * x[2]}; });
  for (int i = 2; i <= 6; ++i) {
    const double x = -1.0 + 0.25 * i;
    const auto m = jacobian_biased3(f, at<3>(f, {i, 4, 4}));
    EXPECT_NEAR(m[0][0], 3.0 * x * x, 1e-14);
    EXPECT_NEAR(m[1][1], 2.0, 1e-14);
    EXPECT_NEAR(m[2][2], 0.0, 1e-14);
  }
}

TEST(Jacobian, OneSidedExactOnQuadratics) {
  const auto f = field_from<3>([](const Vec3& x) { return Vec3{x[0] * x[0], x[1] * x[1] - x[1], 0.5 * x[2] * x[2]}; });
  for (int i = 2; i <= 6; ++i) {
    const double x = -1.0 + 0.25 * i;
    const std::size_t node = at<3>(f, {i, i, i});
    const auto one = jacobian_one_sided(f, node);
    const auto b3 = jacobian_biased3(f, node);
    EXPECT_NEAR(one[0][0], 2.0 * x, 1e-14);
    EXPECT_NEAR(one[1][1], 2.0 * x - 1.0, 1e-14);
    EXPECT_NEAR(one[2][2], x, 1e-14);
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) EXPECT_NEAR(one[j][k], b3[j][k], 1e-14);
  }
}

TEST(Jacobian, OneSidedAvoidsKink) {
  const auto f = field_from<2>([](const Vec2& x) { return Vec2{std::abs(x[0]), x[1]}; });
  // Node at x = h: the + side (h, 2h, 3h) is smooth, the - side crosses 0.
  const auto m = jacobian_one_sided(f, at<2>(f, {5, 4}));
  EXPECT_EQ(m[0][0], 1.0);
  EXPECT_EQ(m[1][1], 1.0);
  EXPECT_EQ(jacobian_central(f, at<2>(f, {4, 4}))[0][0], 0.0);
}

TEST(Jacobian, OneSidedTiePicksForward) {
  // Along x through the centre: U = 0, 0, 0, h, 2h at offsets -2..2, so
  // both second differences vanish.
  const auto f = field_from<2>([](const Vec2& x) { return Vec2{std::max(x[0], 0.0), x[1]}; });
  const std::size_t node = at<2>(f, {4, 4});
  EXPECT_EQ(jacobian_one_sided(f, node)[0][0], 1.0);
  EXPECT_DOUBLE_EQ(jacobian_biased3(f, node)[0][0], 2.0 / 3.0);  // the backward stencil gives 0
}

TEST(Jacobian, SideAppliesToAllComponents) {
  // The x-side is chosen from the first component only; the second
  // component is smooth from both sides but must follow the same choice.
  const auto f = field_from<2>([](const Vec2& x) { return Vec2{std::abs(x[0]), x[0] * x[0] * x[0]}; });
  const std::size_t node = at<2>(f, {5, 4});  // x = h = 0.25
  const auto m = jacobian_one_sided(f, node);
  const double h = 0.25;
  const double forward = (-3.0 * h * h * h + 4.0 * 8 * h * h * h - 27 * h * h * h) / (2.0 * h);
  EXPECT_NEAR(m[1][0], forward, 1e-15);
}

TEST(Jacobian, StencilNeedsInteriorNode) {
  const auto f = field_from<3>([](const Vec3& x) { return x; });
  EXPECT_NO_THROW(jacobian_central(f, at<3>(f, {1, 1, 7})));
  EXPECT_THROW(jacobian_central(f, at<3>(f, {0, 4, 4})), GridBoundaryError);
  EXPECT_THROW(jacobian_biased3(f, at<3>(f, {4, 1, 4})), GridBoundaryError);
  EXPECT_THROW(jacobian_one_sided(f, at<3>(f, {4, 4, 7})), GridBoundaryError);
}

TEST(SingularValues, Examples) {
  const Mat<3> id{{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}};
  EXPECT_EQ(singular_values<3>(id), (Vec3{1, 1, 1}));
  const Mat<3> d{{{2, 0, 0}, {0, 0, 0}, {0, 0, 0}}};
  EXPECT_EQ(singular_values<3>(d), (Vec3{2, 0, 0}));
  const Mat<2> swap{{{0, 1}, {1, 0}}};
  const auto s = singular_values<2>(swap);
  EXPECT_NEAR(s[0], 1.0, 1e-15);
  EXPECT_NEAR(s[1], 1.0, 1e-15);
  const Mat<2> shear{{{1, 1}, {0, 1}}};
  const auto g = singular_values<2>(shear);
  EXPECT_NEAR(g[0], (1.0 + std::sqrt(5.0)) / 2.0, 1e-15);
  EXPECT_NEAR(g[1], (std::sqrt(5.0) - 1.0) / 2.0, 1e-15);
}

TEST(SingularValues, MatchesRotatedDiagonal) {
  // U diag(3, 2, 0.5) V^T with U, V rotations about different axes.
  const double a = 0.7, b = -1.3;
  const Mat<3> u{{{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}}};
  const Mat<3> v{{{1, 0, 0}, {0, std::cos(b), -std::sin(b)}, {0, std::sin(b), std::cos(b)}}};
  const Mat<3> s{{{3, 0, 0}, {0, 2, 0}, {0, 0, 0.5}}};
  const auto sv = singular_values<3>(matmul<3>(matmul<3>(u, s), transpose<3>(v)));
  EXPECT_NEAR(sv[0], 3.0, 1e-13);
  EXPECT_NEAR(sv[1], 2.0, 1e-13);
  EXPECT_NEAR(sv[2], 0.5, 1e-13);
}

TEST(SingularValues, PermutationAndSignInvariance) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    Mat<3> m;
    for (auto& row : m)
      for (auto& x : row) x = u(rng);
    const auto ref = singular_values<3>(m);
    Mat<3> p = m;
    std::swap(p[0], p[2]);
    for (auto& row : p) std::swap(row[0], row[1]);
    for (auto& x : p[1]) x = -x;
    const auto got = singular_values<3>(p);
    for (int k = 0; k < 3; ++k) EXPECT_NEAR(got[k], ref[k], 1e-13 * ref[0]);
    Mat<2> q{{{m[0][0], m[0][1]}, {m[1][0], m[1][1]}}};
    const auto r2 = singular_values<2>(q);
    std::swap(q[0], q[1]);
    for (auto& x : q[0]) x = -x;
    const auto g2 = singular_values<2>(q);
    EXPECT_NEAR(g2[0], r2[0], 1e-13 * r2[0]);
    EXPECT_NEAR(g2[1], r2[1], 1e-13 * r2[0]);
  }
}

TEST(SigmaWeight, CodimensionCases) {
  const Mat<3> m{{{3, 0, 0}, {0, 2, 0}, {0, 0, 0.5}}};
  EXPECT_DOUBLE_EQ(sigma_weight<3>(m, 1), 6.0);
  EXPECT_DOUBLE_EQ(sigma_weight<3>(m, 2), 3.0);
  const Mat<2> m2{{{0, 0.5}, {0, 0}}};
  EXPECT_DOUBLE_EQ(sigma_weight<2>(m2, 1), 0.5);
}

TEST(SigmaWeight, CircleTubeNode) {
  // Node 0.05 inside the circle, in its plane: 1 / (1 - kappa eta).
  const Circle3D c(0.5);
  const double expect = 1.0 / (1.0 - 0.1);
  EXPECT_NEAR(c.analytic_sigma(Vec3{0.45, 0.0, 0.0}), expect, 1e-15);
  double prev = 0.0;
  for (double h : {0.01, 0.005, 0.0025}) {
    const auto f = test_support::local_field(c, Vec3{0.45, 0.0, 0.0}, h, 1);
    const double err = std::abs(sigma_weight<3>(jacobian_central(f, test_support::centre_node(f)), 2) - expect);
    if (prev > 0.0) EXPECT_GT(prev / err, 3.5);
    prev = err;
  }
  EXPECT_LT(prev, 1e-4);
}

TEST(SigmaWeight, TorusBiased3ThirdOrder) {
  const Torus t(kR, 0.25);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> eta(-0.15, 0.15);
  std::vector<Vec3> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(test_support::torus_point(t, eta(rng), rng));
  double prev_c = 0.0, prev_b = 0.0;
  // From h = 0.01 to 0.005 the ratio is still about 6.7; the third-order
  // rate settles from h = 0.005 on.
  for (double h : {0.005, 0.0025, 0.00125}) {
    double ec = 0.0, eb = 0.0;
    for (const auto& x : pts) {
      const auto f = test_support::local_field(t, x, h, 2);
      const std::size_t c = test_support::centre_node(f);
      const double exact = t.analytic_sigma(x);
      ec = std::max(ec, std::abs(sigma_weight<3>(jacobian_central(f, c), 1) - exact));
      eb = std::max(eb, std::abs(sigma_weight<3>(jacobian_biased3(f, c), 1) - exact));
    }
    if (prev_c > 0.0) {
      EXPECT_GE(prev_c / ec, 3.5);
      EXPECT_GE(prev_b / eb, 7.0);
    }
    prev_c = ec;
    prev_b = eb;
  }
}

TEST(Curvature, GaussianFromAnalyticHessians) {
  // d = R - |x| for a sphere: Hessian -(I - n n^T) / rho.
  const Vec3 x{0.3, -0.4, 0.5};
  const double rho = norm(x);
  const Vec3 n = normalized(x);
  Mat<3> sphere{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) sphere[i][j] = -((i == j ? 1.0 : 0.0) - n[i] * n[j]) / rho;
  EXPECT_NEAR(gaussian_from_distance(sphere), 1.0 / (rho * rho), 1e-12);

  // Cylinder about z: d = R - hypot(x, y).
  const double w = std::hypot(x[0], x[1]);
  const double cx = x[0] / w, cy = x[1] / w;
  const Mat<3> cyl{{{-(1 - cx * cx) / w, cx * cy / w, 0}, {cx * cy / w, -(1 - cy * cy) / w, 0}, {0, 0, 0}}};
  EXPECT_NEAR(gaussian_from_distance(cyl), 0.0, 1e-12);
  EXPECT_EQ(gaussian_from_distance(Mat<3>{}), 0.0);
}

TEST(Curvature, TorusCentralHessianSecondOrder) {
  const Torus t(kR, 0.25);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> eta(-0.15, 0.15);
  std::vector<Vec3> pts;
  for (int i = 0; i < 20; ++i) pts.push_back(test_support::torus_point(t, eta(rng), rng));
  double prev = 0.0;
  for (double h : {0.01, 0.005, 0.0025}) {
    double worst = 0.0;
    for (const auto& x : pts) {
      const double q = std::hypot(x[0], x[1]) - kR;
      const double a = std::hypot(q, x[2]);
      const double cosv = q / a;
      const double exact = cosv / (a * (kR + a * cosv));
      const auto f = test_support::local_field(t, x, h, 1);
      const double g = gaussian_from_distance(hessian_central(f, test_support::centre_node(f)));
      worst = std::max(worst, std::abs(g - exact));
    }
    if (prev > 0.0) EXPECT_GE(prev / worst, 3.5);
    prev = worst;
  }
}

TEST(Curvature, EtaReference) {
  EXPECT_EQ(jacobian_eta_reference(0.0, 3.0, 2.0, 3), 1.0);
  EXPECT_EQ(jacobian_eta_reference(0.0, 3.0, 0.0, 2), 1.0);
  const double rho = 0.6;
  EXPECT_NEAR(jacobian_eta_reference(kR - rho, 1.0 / rho, 1.0 / (rho * rho), 3), (kR / rho) * (kR / rho), 1e-15);
  EXPECT_NEAR(jacobian_eta_reference(kR - rho, 1.0 / rho, 0.0, 2), kR / rho, 1e-15);
  EXPECT_THROW(jacobian_eta_reference(1.0, 0.0, -2.0, 3), PreconditionError);
}

TEST(Curvature, EtaReferenceMatchesTorusSigma) {
  const Torus t(kR, 0.25);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> eta(-0.2, 0.2);
  for (int i = 0; i < 20; ++i) {
    const double e = eta(rng);
    const Vec3 x = test_support::torus_point(t, e, rng);
    const double q = std::hypot(x[0], x[1]) - kR;
    const double a = std::hypot(q, x[2]);
    const double k1 = 1.0 / a, k2 = (q / a) / (kR + q);
    const double got = jacobian_eta_reference(e, 0.5 * (k1 + k2), k1 * k2, 3);
    EXPECT_NEAR(got, t.analytic_sigma(x), 1e-12);
  }
}
