#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "kfuks/kfuks.hpp"
#include "oracles.hpp"

using namespace kfuks;

namespace {

constexpr double pi = std::numbers::pi;
const auto b = MetricKind::bergman;
const auto kf = MetricKind::kobayashi_fuks;

double rel(double a, double t) { return std::abs(a - t) / std::abs(t); }

}  // namespace

TEST(Metric, BallAtOrigin) {
  const auto k = ball_kernel(2);
  const Point z = Point::Zero(2);
  EXPECT_LE((bergman_metric(*k, z).g - 3.0 * CMatrix::Identity(2, 2)).norm(), 1e-13);
  EXPECT_LE((kf_metric(*k, z).g - 12.0 * CMatrix::Identity(2, 2)).norm(), 1e-12);
  EXPECT_NEAR(bergman_volume(*k, z), 9.0, 1e-12);
  EXPECT_NEAR(length(*k, z, make_point({1.0, 0.0}), kf), 2.0 * std::sqrt(3.0), 1e-12);
}

TEST(Metric, BallVolumeAwayFromOrigin) {
  const auto k = ball_kernel(2);
  const Point z = make_point({0.5, cplx(0.0, 0.5)});  // |z|^2 = 1/2
  EXPECT_LE(rel(bergman_volume(*k, z), 72.0), 1e-12);
  EXPECT_LE(rel(kf_volume(*k, z), 144.0 * 8.0), 1e-12);
}

TEST(Metric, DiscValues) {
  const auto k = ball_kernel(1);
  EXPECT_NEAR(bergman_volume(*k, make_point({0.0})), 2.0, 1e-13);
  EXPECT_LE(rel(bergman_metric(*k, make_point({0.5})).g(0, 0).real(), 32.0 / 9.0), 1e-13);
  auto f = [](const oracle::Vec& z) { return oracle::cplx(std::log(1.0 / (pi * std::pow(1.0 - std::norm(z(0)), 2)))); };
  const oracle::Vec z = make_point({0.5});
  EXPECT_NEAR(std::abs(oracle::wirtinger_fd(f, z, {1}, {1}) - 32.0 / 9.0), 0.0, 1e-6);
}

TEST(Metric, PolydiscBergmanAndKobayashiFuks) {
  const auto k = polydisc_kernel(2);
  const Point z = make_point({0.3, cplx(0.0, 0.4)});
  const CMatrix g = bergman_metric(*k, z).g;
  EXPECT_LE(rel(g(0, 0).real(), 2.0 / std::pow(1.0 - 0.09, 2)), 1e-13);
  EXPECT_LE(rel(g(1, 1).real(), 2.0 / std::pow(1.0 - 0.16, 2)), 1e-13);
  EXPECT_LE(std::abs(g(0, 1)), 1e-14);
  EXPECT_LE((kf_metric(*k, Point::Zero(2)).g - 8.0 * CMatrix::Identity(2, 2)).norm(), 1e-12);
}

TEST(Metric, SiegelKobayashiFuksAtBasePoint) {
  const CMatrix g = kf_metric(*siegel_kernel(2), siegel_base_point(2)).g;
  EXPECT_NEAR(std::abs(g(0, 0) - 6.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g(1, 1) - 3.0), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(g(0, 1)), 0.0, 1e-12);
  // the Cayley pullback route gives the same matrix
  const CMatrix gc = kf_metric(*siegel_kernel_via_cayley(2), siegel_base_point(2)).g;
  EXPECT_LE((g - gc).norm(), 1e-10);
}

TEST(Metric, HermitianPositiveAndInverse) {
  std::mt19937 rng(201);
  std::vector<KernelPtr> ks = {ball_kernel(3), polydisc_kernel(2), reinhardt_kernel(ReinhardtSpec{{1.0, 2.0}})};
  for (const auto& k : ks)
    for (int i = 0; i < 5; ++i) {
      const Point z = oracle::random_point_in_ball(rng, k->dim(), 0.7);
      PointGeometry pg(*k, z);
      for (auto kind : {b, kf}) {
        const auto c = pg.curvature(kind);
        EXPECT_LE((c.g - c.g.adjoint()).norm(), tol::metric_hermitian * c.g.norm());
        EXPECT_GT(Eigen::SelfAdjointEigenSolver<CMatrix>(c.g).eigenvalues().minCoeff(), 0.0);
        EXPECT_LE((c.g * c.g_inv - CMatrix::Identity(k->dim(), k->dim())).norm(), 1e-11);
      }
    }
}

TEST(Metric, TwoRouteConsistency) {
  std::mt19937 rng(202);
  std::vector<KernelPtr> ks = {ball_kernel(2), polydisc_kernel(3), siegel_kernel(2), reinhardt_kernel(ReinhardtSpec{{1.0, 2.0}})};
  for (const auto& k : ks)
    for (int i = 0; i < 5; ++i) {
      Point z = oracle::random_point_in_ball(rng, k->dim(), 0.7);
      if (k->domain_tag().rfind("siegel", 0) == 0) z(k->dim() - 1) -= 1.0;
      PointGeometry pg(*k, z, 4);
      const CMatrix r1 = double(k->dim() + 1) * pg.metric(b).g - pg.ricci_matrix(b);
      EXPECT_LE((r1 - pg.metric(kf).g).norm(), tol::kf_two_route * pg.metric(kf).g.norm());
    }
}

TEST(Invariants, BallCanonicalInvariants) {
  std::mt19937 rng(203);
  for (int n = 1; n <= 3; ++n) {
    const auto k = ball_kernel(n);
    const double bb = std::pow(n + 1.0, n) * std::pow(pi, n) / oracle::factorial(n);
    const double bkf = bb * std::pow(n + 2.0, n);
    for (int i = 0; i < 5; ++i) {
      const Point z = oracle::random_point_in_ball(rng, n, 0.8);
      EXPECT_LE(rel(canonical_invariant(*k, z, b), bb), 1e-11);
      EXPECT_LE(rel(canonical_invariant(*k, z, kf), bkf), 1e-10);
    }
  }
  EXPECT_LE(rel(canonical_invariant(*ball_kernel(2), Point::Zero(2), kf), 72.0 * pi * pi), 1e-12);
  EXPECT_LE(rel(canonical_invariant(*ball_kernel(1), make_point({0.4}), kf), 6.0 * pi), 1e-12);
}

TEST(Curvature, BallClosedForms) {
  std::mt19937 rng(204);
  for (int n = 1; n <= 3; ++n) {
    const auto k = ball_kernel(n);
    for (int i = 0; i < 5; ++i) {
      const Point z = oracle::random_point_in_ball(rng, n, 0.8);
      const Point x = oracle::random_vector(rng, n);
      PointGeometry pg(*k, z);
      EXPECT_NEAR(pg.hsc(x, b), -2.0 / (n + 1), 1e-10);
      EXPECT_NEAR(pg.ricci_curvature(x, b), -1.0, 1e-10);
      EXPECT_NEAR(pg.hsc(x, kf), -2.0 / ((n + 1.0) * (n + 2.0)), 1e-10);
      EXPECT_NEAR(pg.ricci_curvature(x, kf), -1.0 / (n + 2.0), 1e-10);
    }
  }
  EXPECT_NEAR(hsc(*ball_kernel(1), make_point({0.3}), make_point({1.0}), kf), -1.0 / 3.0, 1e-12);
  EXPECT_NEAR(ricci_curvature(*ball_kernel(1), make_point({0.3}), make_point({1.0}), kf), -1.0 / 3.0, 1e-12);
}

TEST(Curvature, PolydiscSplitsOverFactors) {
  std::mt19937 rng(205);
  const auto k = polydisc_kernel(2);
  for (int i = 0; i < 5; ++i) {
    const Point z = oracle::random_point_in_ball(rng, 2, 0.7);
    EXPECT_NEAR(hsc(*k, z, make_point({1.0, 0.0}), b), -1.0, 1e-10);
    EXPECT_NEAR(hsc(*k, z, make_point({0.0, cplx(0.0, 2.0)}), b), -1.0, 1e-10);
    EXPECT_NEAR(ricci_curvature(*k, z, make_point({1.0, 0.0}), b), -1.0, 1e-10);
  }
}

TEST(Curvature, KahlerSymmetry) {
  std::mt19937 rng(206);
  std::vector<KernelPtr> ks = {ball_kernel(2), polydisc_kernel(2), reinhardt_kernel(ReinhardtSpec{{1.0, 2.0}}),
                               transform_kernel(ball_kernel(3), std::make_shared<BallInvolution>(make_point({0.2, 0.1, cplx(0.0, 0.3)})))};
  for (const auto& k : ks) {
    const int n = k->dim();
    const Point z = oracle::random_point_in_ball(rng, n, 0.6);
    PointGeometry pg(*k, z);
    for (auto kind : {b, kf}) {
      const auto c = pg.curvature(kind);
      double scale = 0.0, worst = 0.0;
      for (int a = 0; a < n; ++a)
        for (int bb = 0; bb < n; ++bb)
          for (int g = 0; g < n; ++g)
            for (int d = 0; d < n; ++d) {
              scale = std::max(scale, std::abs(c.r(a, bb, g, d)));
              worst = std::max(worst, std::abs(c.r(a, bb, g, d) - std::conj(c.r(bb, a, d, g))));
              // Kahler: symmetric in the two holomorphic slots
              worst = std::max(worst, std::abs(c.r(a, bb, g, d) - c.r(a, g, bb, d)));
            }
      EXPECT_LE(worst, tol::curvature_symmetry * scale) << k->domain_tag();
    }
  }
}

TEST(Curvature, Homogeneity) {
  std::mt19937 rng(207);
  const auto k = reinhardt_kernel(ReinhardtSpec{{1.0, 2.0}});
  const Point z = make_point({cplx(0.3, 0.1), cplx(-0.2, 0.4)});
  PointGeometry pg(*k, z);
  for (int i = 0; i < 10; ++i) {
    const Point x = oracle::random_vector(rng, 2);
    const cplx c = oracle::random_vector(rng, 1)(0) * 3.0;
    for (auto kind : {b, kf}) {
      EXPECT_NEAR(pg.hsc(c * x, kind), pg.hsc(x, kind), 1e-12 * std::abs(pg.hsc(x, kind)) + 1e-14);
      EXPECT_NEAR(pg.ricci_curvature(c * x, kind), pg.ricci_curvature(x, kind), 1e-12 * std::abs(pg.ricci_curvature(x, kind)) + 1e-14);
      EXPECT_NEAR(pg.length(c * x, kind), std::abs(c) * pg.length(x, kind), 1e-12 * pg.length(c * x, kind));
    }
  }
  EXPECT_EQ(pg.length(Point::Zero(2), kf), 0.0);
}

TEST(Curvature, KobayashiBound) {
  std::mt19937 rng(208);
  std::vector<KernelPtr> ks = {ball_kernel(2), polydisc_kernel(3), reinhardt_kernel(ReinhardtSpec{{1.0, 2.0}}),
                               reinhardt_kernel(ReinhardtSpec{{1.0, 3.0, 1.5}, 24})};
  for (const auto& k : ks) {
    const int n = k->dim();
    for (int i = 0; i < 4; ++i) {
      const Point z = oracle::random_point_in_ball(rng, n, 0.6);
      PointGeometry pg(*k, z, 4);
      const Point x = oracle::random_vector(rng, n);
      EXPECT_LT(pg.ricci_curvature(x, b), n + 1.0) << k->domain_tag();
      EXPECT_GT(Eigen::SelfAdjointEigenSolver<CMatrix>(pg.metric(kf).g).eigenvalues().minCoeff(), 0.0);
    }
  }
}

TEST(Equivariance, BallAutomorphisms) {
  std::mt19937 rng(209);
  const int n = 2;
  const auto kb = ball_kernel(n);
  for (int i = 0; i < 10; ++i) {
    const Point a = oracle::random_point_in_ball(rng, n, 0.7);
    const auto f = std::make_shared<BallInvolution>(a);
    const auto pulled = transform_kernel(kb, f);  // kernel of the ball expressed through F
    const Point z = oracle::random_point_in_ball(rng, n, 0.6);
    const Point x = oracle::random_vector(rng, n);
    const CMatrix j = f->jacobian(z);
    const Point fz = f->forward(z);
    const Point fx = j * x;
    PointGeometry p1(*pulled, z), p2(*kb, fz);
    const CMatrix g1 = p1.metric(kf).g;
    const CMatrix g2 = j.transpose() * p2.metric(kf).g * j.conjugate();
    EXPECT_LE((g1 - g2).norm(), tol::equivariance * g2.norm());
    EXPECT_LE(rel(p1.length(x, kf), p2.length(fx, kf)), tol::equivariance);
    EXPECT_LE(rel(p1.hsc(x, kf), p2.hsc(fx, kf)), tol::equivariance);
    EXPECT_LE(rel(p1.ricci_curvature(x, kf), p2.ricci_curvature(fx, kf)), tol::equivariance);
    EXPECT_LE(rel(p1.canonical_invariant(kf), p2.canonical_invariant(kf)), tol::equivariance);
  }
}

TEST(Errors, ZeroVectorAndLowDegree) {
  const auto k = ball_kernel(2);
  PointGeometry pg(*k, Point::Zero(2), 4);
  EXPECT_THROW(pg.hsc(Point::Zero(2), b), ArgumentError);
  EXPECT_THROW(pg.ricci_curvature(Point::Zero(2), kf), ArgumentError);
  EXPECT_THROW(pg.hsc(make_point({1.0, 0.0}), kf), StructuralError);
  EXPECT_THROW(PointGeometry(*k, Point::Zero(2), 1), StructuralError);
  EXPECT_THROW(PointGeometry(*k, make_point({0.9, 0.9})), DomainError);
  PointGeometry low(*k, Point::Zero(2), 2);
  EXPECT_THROW(low.metric(kf), StructuralError);
  EXPECT_NO_THROW(low.metric(b));
}

TEST(Errors, RequiredDegree) {
  EXPECT_EQ(required_degree(b, 0), 2);
  EXPECT_EQ(required_degree(b, 1), 4);
  EXPECT_EQ(required_degree(kf, 0), 4);
  EXPECT_EQ(required_degree(kf, 1), 6);
}
