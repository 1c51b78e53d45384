#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kfuks/kfuks.hpp"
#include "oracles.hpp"

using namespace kfuks;

namespace {

constexpr double pi = std::numbers::pi;
const auto kf = MetricKind::kobayashi_fuks;

Point ellipsoid_p0() { return make_point({1.0 / std::sqrt(2.0), std::pow(2.0, -0.25)}); }

DomainModel ellipsoid() {
  ReinhardtSpec s{{1.0, 2.0}};
  s.adaptive = true;
  return ellipsoid_domain(s);
}

Point e(int n, int k) { return Point::Unit(n, k); }

}  // namespace

TEST(DomainModels, DefiningFunctionsAndDerivatives) {
  const auto ball = ball_domain(2);
  EXPECT_NEAR(ball.value(make_point({0.0, 1.0})), 0.0, 1e-15);
  EXPECT_TRUE(ball.contains(make_point({0.5, 0.5})));
  EXPECT_FALSE(ball.contains(make_point({0.8, 0.8})));
  const auto d = ball.derivatives(make_point({cplx(0.2, 0.1), 0.5}));
  EXPECT_NEAR(std::abs(d.r_zbar(0) - cplx(0.2, 0.1)), 0.0, 1e-15);
  EXPECT_LE((d.r_zzbar - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_LE(d.r_zz.norm(), 1e-15);
  EXPECT_NEAR(d.grad_real(0), 0.4, 1e-15);
  EXPECT_NEAR(d.grad_real(1), 0.2, 1e-15);
  EXPECT_LE((d.hess_real - 2.0 * Eigen::MatrixXd::Identity(4, 4)).norm(), 1e-14);

  // real gradient and Hessian of the ellipsoid against finite differences
  const auto el = ellipsoid();
  const Point z = make_point({cplx(0.3, -0.2), cplx(0.4, 0.5)});
  const auto de = el.derivatives(z);
  const double h = 1e-4;
  for (int i = 0; i < 4; ++i) {
    Eigen::VectorXd s = Eigen::VectorXd::Zero(4);
    s(i) = h;
    const Point zp = detail::to_complex(detail::to_real(z) + s), zm = detail::to_complex(detail::to_real(z) - s);
    EXPECT_NEAR((el.value(zp) - el.value(zm)) / (2 * h), de.grad_real(i), 1e-7);
    const Eigen::VectorXd col = (el.derivatives(zp).grad_real - el.derivatives(zm).grad_real) / (2 * h);
    EXPECT_LE((col - de.hess_real.col(i)).norm(), 1e-6);
  }
}

TEST(DomainModels, StrictPseudoconvexityAtTestPoints) {
  const auto el = ellipsoid();
  EXPECT_GT(el.derivatives(ellipsoid_p0()).r_zbar.norm(), 0.0);
  EXPECT_NEAR(el.value(ellipsoid_p0()), 0.0, 1e-15);
  EXPECT_GT(levi_min_eigenvalue(el, ellipsoid_p0()), 0.0);
  EXPECT_NO_THROW(require_strictly_pseudoconvex(ball_domain(3), make_point({0.0, 0.6, 0.8})));
  // a flat boundary piece: {Re z2 < 0} is Levi-flat
  DefiningFunction flat = [](std::span<const WJet> z, std::span<const WJet> zb) { return (z[1] + zb[1]) * 0.5; };
  DomainModel half(2, "half-space", flat, nullptr, 0.2);
  EXPECT_THROW(require_strictly_pseudoconvex(half, Point::Zero(2)), PseudoconvexityError);
}

TEST(NearestPoint, BallRadial) {
  const auto ball = ball_domain(2);
  const auto f = nearest_boundary_point(ball, make_point({0.0, 0.9}));
  EXPECT_LE((f.p - make_point({0.0, 1.0})).norm(), 1e-14);
  EXPECT_NEAR(f.delta, 0.1, 1e-14);
  EXPECT_LE(f.residual, 1e-10);
}

TEST(NearestPoint, EllipsoidAlongRay) {
  const auto el = ellipsoid();
  const Point p0 = ellipsoid_p0();
  const Point z = 0.99 * p0;
  const auto f = nearest_boundary_point(el, z);
  EXPECT_LE(f.residual, 1e-10);
  EXPECT_NEAR(el.value(f.p), 0.0, 1e-14);
  EXPECT_LE((f.p - p0).norm(), 0.02);
  // dense boundary sampling oracle: no sampled boundary point is closer
  double best = 1e9;
  const int m = 400;
  for (int i = 0; i <= m; ++i)
    for (int k = 0; k < 16; ++k) {
      const double r1 = 0.6 + 0.2 * i / m;
      const double r2 = std::pow(1.0 - r1 * r1, 0.25);
      const double t = 0.02 * (k - 8) / 8.0;
      const Point q = make_point({std::polar(r1, t), std::polar(r2, t)});
      best = std::min(best, (q - z).norm());
    }
  EXPECT_LE(f.delta, best + 1e-12);
  EXPECT_GE(f.delta, best - 1e-5);
}

TEST(NearestPoint, Rejections) {
  const auto ball = ball_domain(2);
  EXPECT_THROW(nearest_boundary_point(ball, Point::Zero(2)), ArgumentError);
  EXPECT_THROW(nearest_boundary_point(ball, make_point({0.0, 0.7})), ArgumentError);
  EXPECT_THROW(nearest_boundary_point(ball, make_point({0.0, 1.1})), DomainError);
}

TEST(Normalization, BallAtNorthPole) {
  const auto ball = ball_domain(2);
  const auto nm = normalize_coordinates(ball, make_point({0.0, 1.0}));
  EXPECT_LE((nm.unitary - CMatrix::Identity(2, 2)).norm(), 1e-15);
  EXPECT_NEAR(nm.gradient_norm, 1.0, 1e-15);
  const auto d = nm.domain.derivatives(Point::Zero(2));
  EXPECT_NEAR(d.value, 0.0, 1e-15);
  EXPECT_LE((d.r_zbar - e(2, 1)).norm(), 1e-14);
}

TEST(Normalization, BallAtFirstAxisSwapsCoordinates) {
  const auto nm = normalize_coordinates(ball_domain(2), make_point({1.0, 0.0}));
  EXPECT_LE((nm.unitary * e(2, 0) - e(2, 1)).norm(), 1e-15);
  EXPECT_LE((nm.domain.derivatives(Point::Zero(2)).r_zbar - e(2, 1)).norm(), 1e-14);
}

TEST(Normalization, EllipsoidPostCondition) {
  const auto nm = normalize_coordinates(ellipsoid(), ellipsoid_p0());
  const auto d = nm.domain.derivatives(Point::Zero(2));
  EXPECT_NEAR(d.value, 0.0, 1e-12);
  EXPECT_LE((d.r_zbar - e(2, 1)).norm(), 1e-12);
  EXPECT_LE((nm.unitary * nm.unitary.adjoint() - CMatrix::Identity(2, 2)).norm(), 1e-14);
  // the kernel is carried along: the normalized kernel at 0 is the original kernel at p0 - ... shifted
  const Point z = make_point({0.1, -0.1});
  EXPECT_NEAR(nm.domain.kernel()->diagonal(z) / ellipsoid().kernel()->diagonal(nm.map->inverse()->forward(z)), 1.0, 1e-12);
}

TEST(Normalization, Rejections) {
  EXPECT_THROW(normalize_coordinates(ball_domain(2), make_point({0.0, 0.9})), ArgumentError);
  EXPECT_THROW(normalize_coordinates(ball_domain(2), Point::Zero(2)), ArgumentError);
}

TEST(Phi1, BallIsTranslation) {
  const auto ball = ball_domain(2);
  const auto nm = normalize_coordinates(ball, make_point({0.0, 1.0}));
  const auto f = phi1(nm.domain, Point::Zero(2));
  EXPECT_LE((f->matrix() - CMatrix::Identity(2, 2)).norm(), 1e-14);
  EXPECT_LE(f->offset().norm(), 1e-15);
}

TEST(Phi1, MapsRealNormalIntoAxis) {
  const auto el = ellipsoid();
  for (const Point& p : {ellipsoid_p0(), Point(make_point({cplx(0.3, 0.4), 0.0}))}) {
    Point q = p;
    if (p(1) == cplx{}) q(1) = std::pow(1.0 - std::norm(p(0)), 0.25);
    const auto f = phi1(el, q);
    const Point g = el.derivatives(q).r_zbar;
    for (double t : {1e-2, -1e-2, 1e-3, -1e-3}) {
      const Point w = f->forward(q + t * g);
      EXPECT_LE(std::abs(w(0)), 1e-14);
      EXPECT_NEAR(w(1).real(), t * g.squaredNorm(), 1e-14);
      EXPECT_NEAR(w(1).imag(), 0.0, 1e-14);
    }
  }
}

TEST(QuadraticData, Ball) {
  const auto nm = normalize_coordinates(ball_domain(2), make_point({0.0, 1.0}));
  const auto q = quadratic_data(nm.domain, Point::Zero(2));
  EXPECT_LE(q.a.norm(), 1e-14);
  EXPECT_LE((q.b - CMatrix::Identity(2, 2)).norm(), 1e-14);
}

TEST(QuadraticData, TaylorExpansionOfPulledBackDefiningFunction) {
  // r(Phi1^{-1} w) = 2 Re w_n + 2 Re G(w) + L(w) + O(|w|^3), with G = w^T a w and L = w^T b conj(w)
  const auto el = ellipsoid();
  const Point p = ellipsoid_p0();
  const auto q = quadratic_data(el, p);
  const auto inv = phi1(el, p)->inverse();
  std::mt19937 rng(301);
  for (int i = 0; i < 5; ++i) {
    const Point w = oracle::random_vector(rng, 2) * 1e-3;
    const double exact = el.value(inv->forward(w));
    const double model = 2.0 * w(1).real() + 2.0 * (w.transpose() * q.a * w)(0, 0).real() +
                         (w.transpose() * q.b * w.conjugate())(0, 0).real();
    EXPECT_LE(std::abs(exact - model), 50.0 * std::pow(w.norm(), 3));
  }
}

TEST(QuadraticData, EllipsoidLeviBlockPositive) {
  const auto nm = normalize_coordinates(ellipsoid(), ellipsoid_p0());
  const auto q = quadratic_data(nm.domain, Point::Zero(2));
  EXPECT_GT(q.b(0, 0).real(), 0.0);
  EXPECT_LE(std::abs(q.b(0, 0).imag()), 1e-12);
}

TEST(QuadraticData, UnitaryConjugation) {
  // normalizing at p and at a rotated copy of the domain gives the same b up to the rotation
  const auto el = ellipsoid();
  const Point p = ellipsoid_p0();
  const CMatrix u = (CMatrix(2, 2) << std::polar(1.0, 0.7), 0.0, 0.0, std::polar(1.0, -1.1)).finished();
  const auto rot = std::make_shared<AffineMap>(u, Point::Zero(2));
  const auto el_rot = el.transformed(rot, 1.0, "rotated");
  const auto n1 = normalize_coordinates(el, p);
  const auto n2 = normalize_coordinates(el_rot, Point(u * p));
  const auto q1 = quadratic_data(n1.domain, Point::Zero(2));
  const auto q2 = quadratic_data(n2.domain, Point::Zero(2));
  // the normalized frames differ by a diagonal phase V: b2 = V^T b1 conj(V)
  const CMatrix v = n1.unitary * u.adjoint() * n2.unitary.adjoint();
  EXPECT_LE((v * v.adjoint() - CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_LE((q2.b - v.transpose() * q1.b * v.conjugate()).norm(), 1e-10);
}

TEST(Phi2, BallIsIdentityAndShearExample) {
  EXPECT_LE(phi2(CMatrix::Zero(2, 2))->coefficients().norm(), 0.0);
  CMatrix a = CMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  const auto f = phi2(a);
  const Point z = make_point({cplx(0.3, 0.2), cplx(-0.1, 0.5)});
  const Point w = f->forward(z);
  EXPECT_EQ(w(0), z(0));
  EXPECT_NEAR(std::abs(w(1) - (z(1) + z(0) * z(0))), 0.0, 1e-15);
  const CMatrix j = f->jacobian(z);
  EXPECT_EQ(j(0, 0), cplx(1.0));
  EXPECT_EQ(j(0, 1), cplx{});
  EXPECT_NEAR(std::abs(j(1, 0) - 2.0 * z(0)), 0.0, 1e-15);
  EXPECT_EQ(j(1, 1), cplx(1.0));
}

TEST(Phi3, BallIsIdentityAndStretchExample) {
  EXPECT_LE((phi3(CMatrix::Identity(2, 2))->matrix() - CMatrix::Identity(2, 2)).norm(), 1e-15);
  CMatrix bq = CMatrix::Identity(2, 2);
  bq(0, 0) = 4.0;
  const auto f = phi3(bq);
  const Point z = make_point({cplx(0.3, 0.2), cplx(-0.1, 0.5)});
  const Point w = f->forward(z);
  // L(z) = 4 |z1|^2 becomes |w1|^2 in the new coordinate
  EXPECT_NEAR(std::norm(w(0)), 4.0 * std::norm(z(0)), 1e-15);
  EXPECT_EQ(w(1), z(1));
  EXPECT_THROW(phi3((CMatrix(2, 2) << -1.0, 0.0, 0.0, 1.0).finished()), PseudoconvexityError);
}

TEST(Phi3, EigenDataSortedAndPhaseFixed) {
  CMatrix bq = CMatrix::Identity(3, 3);
  bq.topLeftCorner(2, 2) << 2.0, cplx(0.5, 0.5), cplx(0.5, -0.5), 3.0;
  const auto s = levi_stretch(bq);
  EXPECT_GT(s.lambda(0), s.lambda(1));
  for (int k = 0; k < 2; ++k) {
    EXPECT_NEAR(s.eigenvectors(0, k).imag(), 0.0, 1e-15);
    EXPECT_GT(s.eigenvectors(0, k).real(), 0.0);
  }
  // L(A^{-1} w) = |w|^2 with L(z) = z^T B conj(z)
  const CMatrix ainv = s.A.inverse();
  const CMatrix pulled = ainv.transpose() * bq.topLeftCorner(2, 2) * ainv.conjugate();
  EXPECT_LE((pulled - CMatrix::Identity(2, 2)).norm(), 1e-13);
}

TEST(Phi23, FixRealNormalAxis) {
  CMatrix a = CMatrix::Constant(3, 3, cplx(0.3, 0.1));
  CMatrix bq = CMatrix::Identity(3, 3) * 2.0;
  for (double t : {-0.5, -0.1, 0.2}) {
    const Point z = make_point({0.0, 0.0, t});
    EXPECT_LE((phi2(a)->forward(z) - z).norm(), 1e-15);
    EXPECT_LE((phi3(bq)->forward(z) - z).norm(), 1e-15);
  }
}

TEST(Dilation, Examples) {
  EXPECT_LE((dilation(3, 1.0)->matrix() - CMatrix::Identity(3, 3)).norm(), 0.0);
  const auto t = dilation(2, 0.25);
  EXPECT_NEAR(std::abs(t->matrix()(0, 0) - 2.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t->matrix()(1, 1) - 4.0), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(t->matrix().determinant() - 8.0), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(t->matrix().determinant()), std::pow(0.25, -1.5), 1e-14);
  std::mt19937 rng(302);
  const Point z = oracle::random_vector(rng, 2);
  EXPECT_LE((t->inverse()->forward(t->forward(z)) - z).norm(), 1e-14);
  EXPECT_THROW(dilation(2, 0.0), ArgumentError);
  EXPECT_THROW(dilation(2, -1.0), ArgumentError);
}

TEST(ScalingStep, BallExample) {
  const auto s = make_scaling_step(ball_domain(2), make_point({0.0, 1.0}), 0.1);
  EXPECT_NEAR(s.delta, 0.1, 1e-14);
  EXPECT_NEAR(s.eta, 0.1, 1e-14);
  EXPECT_LE(s.base_residual, 1e-10);
  EXPECT_LE(s.eta_residual, 1e-10);
  EXPECT_LE(s.det_t_residual, 1e-12);
  EXPECT_LE((s.full->forward(make_point({0.0, 0.9})) - siegel_base_point(2)).norm(), 1e-12);
  // q^j = ('0, -delta |grad r|) is Psi(zeta)
  EXPECT_LE((s.psi->forward(s.zeta) - make_point({0.0, -0.1})).norm(), 1e-14);
}

TEST(ScalingStep, InvariantsOnBallAndEllipsoid) {
  const auto el = ellipsoid();
  const Point p0 = ellipsoid_p0();
  const auto nm = normalize_coordinates(el, p0);
  const Point normal = nm.unitary.adjoint().col(1);
  const Point tangent = nm.unitary.adjoint().col(0);
  for (double d : {0.04, 0.02, 0.01}) {
    // off-normal approach so the foot moves
    const auto s = make_scaling_step(el, nm, Point(p0 - d * normal + 0.5 * d * tangent));
    EXPECT_LE(s.base_residual, 1e-10);
    EXPECT_LE(s.eta_residual, 1e-10);
    EXPECT_LE(s.det_t_residual, 1e-12);
    EXPECT_LE((s.full->forward(s.zeta_original) - siegel_base_point(2)).norm(), 1e-10);
    EXPECT_LE((s.full_inverse->forward(siegel_base_point(2)) - s.zeta_original).norm(), 1e-10);
  }
}

TEST(ScalingStep, NormalSegmentGoesToRealAxis) {
  const auto el = ellipsoid();
  const auto s = make_scaling_step(el, ellipsoid_p0(), 0.02);
  const Point foot_orig = s.full_inverse->forward(Point::Zero(2));  // S maps the foot to 0
  const Point g = el.derivatives(foot_orig).r_zbar.normalized();
  for (double t : {0.005, 0.01, 0.02, 0.03, 0.04}) {
    const Point w = s.full->forward(foot_orig - t * g);
    EXPECT_LE(std::abs(w(0)), 1e-9);
    EXPECT_LE(std::abs(w(1).imag()), 1e-9);
    EXPECT_LT(w(1).real(), 0.0);
  }
}

TEST(ScalingStep, QApproachesLimitOnEllipsoid) {
  const auto el = ellipsoid();
  const Point p0 = ellipsoid_p0();
  double prev = 1e9;
  CMatrix q_prev;
  for (double d : {0.04, 0.02, 0.01}) {
    const auto s = make_scaling_step(el, p0, d);
    const double dist = (s.Q - CMatrix::Identity(2, 2)).operatorNorm();
    EXPECT_LE(dist, 0.1) << "delta " << d;
    if (q_prev.size()) {
      const double step = (s.Q - q_prev).operatorNorm();
      EXPECT_LT(step, prev);
      prev = step;
    }
    q_prev = s.Q;
  }
}

TEST(ScalingStep, ScaledDefiningFunctionConvergesInC2) {
  const auto ball = ball_domain(2);
  const auto siegel = siegel_domain(2);
  std::vector<Point> grid;
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 5; ++k)
      grid.push_back(siegel_base_point(2) + make_point({cplx(-0.2 + 0.1 * i, 0.05 * (k - 2)), cplx(0.05 * (k - 2), -0.2 + 0.1 * i)}));
  double prev = std::numeric_limits<double>::infinity();
  for (int j = 0; j < 6; ++j) {
    const double d = 0.1 * std::pow(0.5, j);
    const auto s = make_scaling_step(ball, make_point({0.0, 1.0}), d);
    const double dev = c2_deviation(s.scaled, siegel, grid);
    EXPECT_LE(dev, prev * 1.05) << "j = " << j;
    prev = dev;
  }
  EXPECT_LT(prev, 0.05);
}

TEST(ScalingStep, BallKernelNearSiegelAtSmallDelta) {
  const auto s = make_scaling_step(ball_domain(2), make_point({0.0, 1.0}), 1e-3);
  const double target = 2.0 / (pi * pi) / 8.0;
  EXPECT_LE(std::abs(s.scaled.kernel()->diagonal(siegel_base_point(2)) - target) / target, 2e-3);
}

TEST(ScalingStep, BallQuantitiesIdentity) {
  // On the ball the scaled kernel is exact: K~ = |det S^{-1}'|^2 K(S^{-1} .), so every invariant equals the ball value
  const auto s = make_scaling_step(ball_domain(2), make_point({0.0, 1.0}), 0.05);
  PointGeometry pg(*s.scaled.kernel(), siegel_base_point(2));
  EXPECT_LE(std::abs(pg.canonical_invariant(kf) - 72.0 * pi * pi) / (72.0 * pi * pi), 1e-10);
  EXPECT_NEAR(pg.hsc(make_point({0.3, 1.0}), kf), -1.0 / 6.0, 1e-10);
  EXPECT_NEAR(pg.ricci_curvature(make_point({0.3, 1.0}), kf), -0.25, 1e-10);
}

TEST(TangentSplit, BallExamples) {
  const auto ball = ball_domain(2);
  const Point z = make_point({0.0, 0.95});
  const auto s1 = tangent_split(ball, z, make_point({1.0, 0.0}));
  EXPECT_LE((s1.x_h - make_point({1.0, 0.0})).norm(), 1e-14);
  EXPECT_LE(s1.x_n.norm(), 1e-14);
  const auto s2 = tangent_split(ball, z, make_point({0.0, cplx(0.0, 1.0)}));
  EXPECT_LE(s2.x_h.norm(), 1e-14);
  EXPECT_LE((s2.x_n - make_point({0.0, cplx(0.0, 1.0)})).norm(), 1e-14);
  EXPECT_NEAR(levi_form(ball, make_point({0.0, 1.0}), make_point({1.0, 0.0})), 1.0, 1e-14);
}

TEST(TangentSplit, EllipsoidDecomposition) {
  const auto el = ellipsoid();
  const Point z = 0.98 * ellipsoid_p0();
  std::mt19937 rng(303);
  const Point x = oracle::random_vector(rng, 2);
  const auto s = tangent_split(el, z, x);
  const Point nu = el.derivatives(s.foot).r_zbar;
  EXPECT_LE((s.x_h + s.x_n - x).norm(), 1e-12);
  EXPECT_LE(std::abs(nu.dot(s.x_h)), 1e-12 * nu.norm());
  EXPECT_LE((s.x_n - nu * (nu.dot(s.x_n) / nu.squaredNorm())).norm(), 1e-12);
  EXPECT_GT(levi_form(el, s.foot, s.x_h), 0.0);
  EXPECT_THROW(levi_form(el, s.foot, nu), ArgumentError);
}

TEST(TangentSplit, LeviFormIsNormalized) {
  // scaling r by a constant leaves the normalized Levi form unchanged
  const auto ball = ball_domain(2);
  const auto big = ball.transformed(identity_map(2), 0.25, "scaled");
  const Point p = make_point({0.6, 0.8});
  const Point xh = make_point({0.8, -0.6});
  EXPECT_NEAR(levi_form(big, p, xh), levi_form(ball, p, xh), 1e-14);
  EXPECT_NEAR(levi_form(ball, p, xh), 1.0, 1e-14);
}
