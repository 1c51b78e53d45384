#pragma once

/// \file
/// Pinchuk scaling near a strictly pseudoconvex boundary point.
///
/// Coordinates follow the usual normalization: after a rigid motion p0 = 0
/// and grad_zbar r(p0) = ('0, 1). For a boundary point p near p0,
///
///   Psi_p = Phi3 o Phi2 o Phi1,   Phi1(z) = P_p (z - p),
///   Phi2(z) = ('z, z_n + sum a1_{mu nu} z_mu z_nu),   Phi3(z) = (A_p 'z, z_n),
///
/// brings r to 2 Re z_n + |'z|^2 + (mixed and higher terms). With
/// eta = delta |grad_zbar r(p)| and T(z) = ('z / sqrt(eta), z_n / eta), the
/// scaling map S = T o Psi_p sends the interior point zeta to b* = ('0, -1).

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/kernels.hpp"
#include "kfuks/maps.hpp"
#include "kfuks/reinhardt.hpp"
#include "kfuks/tolerances.hpp"
#include "kfuks/wjet.hpp"

namespace kfuks {

/// Jet of r(z, conj z) from coordinate jets z and zbar.
using DefiningFunction = std::function<WJet(std::span<const WJet>, std::span<const WJet>)>;

/// First and second derivatives of r at a point, in complex and real form.
/// Real coordinates are interleaved: x_{2j} = Re z_j, x_{2j+1} = Im z_j.
struct BoundaryDerivatives {
  double value = 0.0;
  Point r_z;         // dr/dz_j
  Point r_zbar;      // dr/dzbar_j
  CMatrix r_zz;      // d2r/dz_j dz_k
  CMatrix r_zzbar;   // d2r/dz_j dzbar_k
  Eigen::VectorXd grad_real;
  Eigen::MatrixXd hess_real;
};

class DomainModel {
 public:
  DomainModel(int n, std::string name, DefiningFunction r, KernelPtr kernel, double uniqueness_radius)
      : n_(n), name_(std::move(name)), r_(std::move(r)), kernel_(std::move(kernel)), radius_(uniqueness_radius) {
    if (n < 1) throw ArgumentError("domain model: n >= 1 required");
    if (kernel_ && kernel_->dim() != n) throw StructuralError("domain model: kernel dimension mismatch");
    if (!(radius_ > 0.0)) throw ArgumentError("domain model: uniqueness radius must be positive");
  }

  int dim() const { return n_; }
  const std::string& name() const { return name_; }
  const KernelPtr& kernel() const { return kernel_; }
  double uniqueness_radius() const { return radius_; }
  const DefiningFunction& defining_function() const { return r_; }

  /// Proof-only constants (inclusion radius and the like); never used numerically.
  std::map<std::string, std::string> metadata;

  WJet defining_jet(const Point& z, int degree) const {
    if (z.size() != n_) throw StructuralError("domain model: point dimension mismatch");
    const auto w = seed_jets(z, degree);
    return r_(w, conj_jets(w));
  }

  double value(const Point& z) const { return defining_jet(z, 0).constant_term().real(); }
  bool contains(const Point& z) const { return value(z) < 0.0; }

  BoundaryDerivatives derivatives(const Point& z) const {
    const WJet j = defining_jet(z, 2);
    BoundaryDerivatives d;
    d.value = j.constant_term().real();
    d.r_z.resize(n_);
    d.r_zbar.resize(n_);
    d.r_zz.resize(n_, n_);
    d.r_zzbar.resize(n_, n_);
    std::vector<int> a(n_), b(n_);
    auto at = [&](int hi, int hj, int ai, int aj) {
      std::fill(a.begin(), a.end(), 0);
      std::fill(b.begin(), b.end(), 0);
      if (hi >= 0) ++a[hi];
      if (hj >= 0) ++a[hj];
      if (ai >= 0) ++b[ai];
      if (aj >= 0) ++b[aj];
      return j.coeff(a, b);
    };
    for (int i = 0; i < n_; ++i) {
      d.r_z(i) = at(i, -1, -1, -1);
      d.r_zbar(i) = at(-1, -1, i, -1);
      for (int k = 0; k < n_; ++k) {
        d.r_zz(i, k) = at(i, k, -1, -1) * (i == k ? 2.0 : 1.0);
        d.r_zzbar(i, k) = at(i, -1, k, -1);
      }
    }
    d.grad_real.resize(2 * n_);
    d.hess_real.resize(2 * n_, 2 * n_);
    for (int i = 0; i < n_; ++i) {
      d.grad_real(2 * i) = 2.0 * d.r_z(i).real();
      d.grad_real(2 * i + 1) = -2.0 * d.r_z(i).imag();
      for (int k = 0; k < n_; ++k) {
        const cplx h = d.r_zz(i, k), m = d.r_zzbar(i, k);
        d.hess_real(2 * i, 2 * k) = 2.0 * (h.real() + m.real());
        d.hess_real(2 * i + 1, 2 * k + 1) = 2.0 * (m.real() - h.real());
        d.hess_real(2 * i, 2 * k + 1) = 2.0 * (m.imag() - h.imag());
        d.hess_real(2 * i + 1, 2 * k) = -2.0 * (h.imag() + m.imag());
      }
    }
    return d;
  }

  /// The image F(Omega), with defining function r o F^{-1} / scale and the
  /// kernel pulled back through F^{-1}.
  DomainModel transformed(const MapPtr& f, double scale, std::string name) const {
    if (f->dim() != n_) throw StructuralError("domain model: map dimension mismatch");
    if (!(scale > 0.0)) throw ArgumentError("domain model: scale must be positive");
    MapPtr finv = f->inverse();
    DefiningFunction base = r_;
    DefiningFunction r = [base, finv, scale](std::span<const WJet> w, std::span<const WJet> wbar) {
      const auto z = finv->forward_jets(w);
      const auto zbar = conj_jets(finv->forward_jets(conj_jets(wbar)));
      WJet v = base(z, zbar);
      v *= 1.0 / scale;
      return v;
    };
    KernelPtr k = kernel_ ? transform_kernel(kernel_, finv) : nullptr;
    DomainModel out(n_, std::move(name), std::move(r), std::move(k), radius_);
    out.metadata = metadata;
    return out;
  }

 private:
  int n_;
  std::string name_;
  DefiningFunction r_;
  KernelPtr kernel_;
  double radius_;
};

/// Unit ball, r = |z|^2 - 1.
inline DomainModel ball_domain(int n, double uniqueness_radius = 0.2) {
  DefiningFunction r = [](std::span<const WJet> z, std::span<const WJet> zb) {
    WJet s = z[0] * zb[0];
    for (std::size_t i = 1; i < z.size(); ++i) s += z[i] * zb[i];
    return s - 1.0;
  };
  return DomainModel(n, "ball", std::move(r), ball_kernel(n), uniqueness_radius);
}

/// Siegel half-space, r = 2 Re z_n + |'z|^2.
inline DomainModel siegel_domain(int n, double uniqueness_radius = 0.2) {
  DefiningFunction r = [](std::span<const WJet> z, std::span<const WJet> zb) {
    const std::size_t m = z.size() - 1;
    WJet s = z[m] + zb[m];
    for (std::size_t i = 0; i < m; ++i) s += z[i] * zb[i];
    return s;
  };
  return DomainModel(n, "siegel", std::move(r), siegel_kernel(n), uniqueness_radius);
}

/// Reinhardt ellipsoid sum |z_i|^{2 p_i} < 1 with its series kernel.
inline DomainModel ellipsoid_domain(const ReinhardtSpec& spec, double uniqueness_radius = 0.05) {
  spec.validate();
  const auto p = spec.exponents;
  DefiningFunction r = [p](std::span<const WJet> z, std::span<const WJet> zb) {
    WJet s = jet_const(-1.0, z[0].dim(), z[0].degree());
    for (std::size_t i = 0; i < z.size(); ++i) {
      const WJet m = z[i] * zb[i];
      const double pi = p[i];
      if (pi == std::round(pi))
        s += jet_pow(m, static_cast<int>(pi));
      else
        s += jet_pow(m, pi);
    }
    return s;
  };
  return DomainModel(spec.dim(), "ellipsoid", std::move(r), reinhardt_kernel(spec), uniqueness_radius);
}

/// Foot of the perpendicular from an interior point.
struct BoundaryFoot {
  Point p;
  double delta = 0.0;
  double multiplier = 0.0;  // z - p = multiplier * (real gradient of r at p)
  double residual = 0.0;    // relative stationarity residual
  int iterations = 0;
};

struct FootOptions {
  int directions = 200;
  unsigned seed = 12345;
  int max_iterations = 60;
};

namespace detail {

inline Eigen::VectorXd to_real(const Point& z) {
  Eigen::VectorXd x(2 * z.size());
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    x(2 * i) = z(i).real();
    x(2 * i + 1) = z(i).imag();
  }
  return x;
}

inline Point to_complex(const Eigen::VectorXd& x) {
  Point z(x.size() / 2);
  for (Eigen::Index i = 0; i < z.size(); ++i) z(i) = cplx(x(2 * i), x(2 * i + 1));
  return z;
}

}  // namespace detail

/// Nearest point of the boundary to an interior z, by Newton on the Lagrange
/// system z - p = t grad r(p), r(p) = 0, seeded by ray bisection. Points
/// farther than the domain's uniqueness radius are rejected.
inline BoundaryFoot nearest_boundary_point(const DomainModel& dom, const Point& z, const FootOptions& opt = {}) {
  const int n = dom.dim();
  if (z.size() != n) throw StructuralError("nearest boundary point: dimension mismatch");
  if (!dom.contains(z)) throw DomainError("nearest boundary point: z is not interior");
  const double rmax = 2.0 * dom.uniqueness_radius();
  const Eigen::VectorXd x0 = detail::to_real(z);

  std::vector<Eigen::VectorXd> dirs;
  dirs.push_back(dom.derivatives(z).grad_real.normalized());
  std::mt19937 rng(opt.seed);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < opt.directions; ++k) {
    Eigen::VectorXd d(2 * n);
    for (int i = 0; i < 2 * n; ++i) d(i) = gauss(rng);
    dirs.push_back(d.normalized());
  }
  double best = std::numeric_limits<double>::infinity();
  Eigen::VectorXd seed;
  for (const auto& d : dirs) {
    if (dom.value(detail::to_complex(x0 + rmax * d)) <= 0.0) continue;
    double lo = 0.0, hi = rmax;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (dom.value(detail::to_complex(x0 + mid * d)) < 0.0 ? lo : hi) = mid;
    }
    if (hi < best) {
      best = hi;
      seed = x0 + hi * d;
    }
  }
  if (!std::isfinite(best))
    throw ArgumentError("nearest boundary point: no boundary within the uniqueness radius of z");

  Eigen::VectorXd x = seed;
  auto d0 = dom.derivatives(detail::to_complex(x));
  double t = (x0 - x).dot(d0.grad_real) / d0.grad_real.squaredNorm();
  BoundaryFoot foot;
  const int m = 2 * n;
  for (int it = 1; it <= opt.max_iterations; ++it) {
    const auto d = dom.derivatives(detail::to_complex(x));
    Eigen::VectorXd f(m + 1);
    f.head(m) = x0 - x - t * d.grad_real;
    f(m) = d.value;
    Eigen::MatrixXd jm = Eigen::MatrixXd::Zero(m + 1, m + 1);
    jm.topLeftCorner(m, m) = -Eigen::MatrixXd::Identity(m, m) - t * d.hess_real;
    jm.topRightCorner(m, 1) = -d.grad_real;
    jm.bottomLeftCorner(1, m) = d.grad_real.transpose();
    const Eigen::VectorXd step = jm.fullPivLu().solve(-f);
    x += step.head(m);
    t += step(m);
    foot.iterations = it;
    if (step.norm() <= 1e-15 * (1.0 + x.norm())) break;
    if (it == opt.max_iterations)
      throw ConvergenceError("nearest boundary point: Newton did not converge (last step " +
                             std::to_string(step.norm()) + ", |r| = " + std::to_string(std::abs(f(m))) + ")");
  }
  const auto d = dom.derivatives(detail::to_complex(x));
  foot.p = detail::to_complex(x);
  foot.delta = (x0 - x).norm();
  foot.multiplier = t;
  foot.residual = (x0 - x - t * d.grad_real).norm() / std::max(foot.delta, 1e-300);
  if (foot.delta > dom.uniqueness_radius())
    throw ArgumentError("nearest boundary point: distance exceeds the uniqueness radius");
  if (foot.delta > best * (1.0 + 1e-6) + 1e-14)
    throw ConvergenceError("nearest boundary point: Newton converged to a non-minimal stationary point");
  return foot;
}

/// Rigid change of coordinates z -> U (z - p0) and the rescaled defining
/// function for which p0 = 0 and grad_zbar r(0) = ('0, 1).
struct Normalization {
  Point p0;
  CMatrix unitary;
  double gradient_norm = 1.0;  // |grad_zbar r(p0)| in the original coordinates
  MapPtr map;
  DomainModel domain;
};

inline Normalization normalize_coordinates(const DomainModel& dom, const Point& p0) {
  const int n = dom.dim();
  const auto d = dom.derivatives(p0);
  const double g = d.r_zbar.norm();
  if (g == 0.0) throw ArgumentError("normalize coordinates: zero gradient at p0");
  if (std::abs(d.value) > 1e-9 * std::max(1.0, g * p0.norm()))
    throw ArgumentError("normalize coordinates: p0 is not on the boundary");
  const Point u = d.r_zbar / g;
  // columns: an orthonormal basis of u-perp (Gram-Schmidt on e_1, e_2, ...), then u
  CMatrix v(n, n);
  int filled = 0;
  for (int k = 0; k < n && filled < n - 1; ++k) {
    Point e = Point::Zero(n);
    e(k) = 1.0;
    e -= u * u.dot(e);
    for (int j = 0; j < filled; ++j) e -= v.col(j) * v.col(j).dot(e);
    if (e.norm() < 1e-8) continue;
    v.col(filled++) = e.normalized();
  }
  v.col(n - 1) = u;
  CMatrix uni = v.adjoint();
  MapPtr map = std::make_shared<AffineMap>(uni, Point(-uni * p0), "normalize");
  DomainModel nd = dom.transformed(map, g, dom.name() + "-normalized");
  return Normalization{p0, uni, g, map, std::move(nd)};
}

inline std::shared_ptr<const AffineMap> phi1(const DomainModel& dom, const Point& p) {
  const int n = dom.dim();
  const auto d = dom.derivatives(p);
  CMatrix pm = CMatrix::Zero(n, n);
  for (int mu = 0; mu < n - 1; ++mu) {
    pm(mu, mu) = d.r_zbar(n - 1);
    pm(mu, n - 1) = -d.r_zbar(mu);
  }
  for (int k = 0; k < n; ++k) pm(n - 1, k) = d.r_z(k);
  const double scale = std::pow(d.r_zbar.norm(), n + 1);
  if (std::abs(pm.determinant()) <= 1e-14 * scale) throw SingularMatrixError("phi1: P_p is singular");
  return std::make_shared<AffineMap>(pm, Point(-pm * p), "phi1");
}

/// Second-order data of r o Phi1^{-1} at 0:
///   G(z) = sum a_{mu nu} z_mu z_nu,   L(z) = sum b_{mu nu} z_mu conj(z_nu).
struct QuadraticData {
  CMatrix P;
  CMatrix a;
  CMatrix b;
};

inline QuadraticData quadratic_data(const DomainModel& dom, const Point& p) {
  const auto d = dom.derivatives(p);
  const CMatrix pm = phi1(dom, p)->matrix();
  const CMatrix pinv = pm.inverse();
  QuadraticData q;
  q.P = pm;
  q.a = 0.5 * pinv.transpose() * d.r_zz * pinv;
  q.b = pinv.transpose() * d.r_zzbar * pinv.conjugate();
  return q;
}

/// a is the full n x n matrix from quadratic_data; only the tangential block is used.
inline std::shared_ptr<const QuadraticShear> phi2(const CMatrix& a) {
  const auto m = a.rows();
  if (a.cols() != m || m < 1) throw StructuralError("phi2: coefficient matrix must be square");
  return std::make_shared<QuadraticShear>(static_cast<int>(m), CMatrix(a.topLeftCorner(m - 1, m - 1)));
}

/// Eigen-data of the tangential Levi block and the stretch A with L(A^{-1} w, 0) = |w|^2.
struct LeviStretch {
  Eigen::VectorXd lambda;  // descending
  CMatrix eigenvectors;    // columns, first nonzero entry real positive
  CMatrix A;
};

inline LeviStretch levi_stretch(const CMatrix& b) {
  const auto n = b.rows();
  if (b.cols() != n) throw StructuralError("levi stretch: matrix must be square");
  LeviStretch s;
  if (n == 1) {
    s.A = CMatrix(0, 0);
    return s;
  }
  // L('z, 0) = 'z^T B conj('z) = 'z^* M 'z with M = B^T
  const CMatrix mtx = b.topLeftCorner(n - 1, n - 1).transpose();
  const CMatrix herm = 0.5 * (mtx + mtx.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm);
  if (es.info() != Eigen::Success) throw ConvergenceError("levi stretch: eigensolver failed");
  const auto m = n - 1;
  s.lambda.resize(m);
  s.eigenvectors.resize(m, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    const Eigen::Index src = m - 1 - k;
    s.lambda(k) = es.eigenvalues()(src);
    Point v = es.eigenvectors().col(src);
    for (Eigen::Index i = 0; i < m; ++i)
      if (std::abs(v(i)) > 1e-12) {
        v *= std::conj(v(i)) / std::abs(v(i));
        break;
      }
    s.eigenvectors.col(k) = v;
  }
  if (s.lambda(m - 1) <= 0.0)
    throw PseudoconvexityError("levi form is not positive definite on the complex tangent space");
  s.A = s.lambda.cwiseSqrt().asDiagonal() * s.eigenvectors.adjoint();
  return s;
}

inline std::shared_ptr<const AffineMap> phi3(const CMatrix& b) {
  const auto n = b.rows();
  CMatrix full = CMatrix::Identity(n, n);
  if (n > 1) full.topLeftCorner(n - 1, n - 1) = levi_stretch(b).A;
  return std::make_shared<AffineMap>(full, Point::Zero(n), "phi3");
}

inline std::shared_ptr<const AffineMap> dilation(int n, double eta) {
  if (!(eta > 0.0)) throw ArgumentError("dilation: eta must be positive");
  Point d = Point::Constant(n, 1.0 / std::sqrt(eta));
  d(n - 1) = 1.0 / eta;
  return std::make_shared<AffineMap>(CMatrix(d.asDiagonal()), Point::Zero(n), "dilation");
}

inline MapPtr cayley(int n) { return std::make_shared<CayleyMap>(n); }

/// b* = ('0, -1)
inline Point siegel_base_point(int n) {
  Point b = Point::Zero(n);
  b(n - 1) = -1.0;
  return b;
}

struct ScalingStep {
  int index = 0;
  Point foot;            // p^j, normalized coordinates
  Point zeta;            // zeta^j, normalized coordinates
  Point zeta_original;   // zeta^j, original coordinates
  double delta = 0.0;
  double eta = 0.0;
  CMatrix P;
  CMatrix a1;
  CMatrix b1;
  CMatrix A;
  CMatrix Q;             // Psi_j'(zeta^j)
  MapPtr psi;            // normalized coordinates
  MapPtr dilation;
  MapPtr scaling;        // S_j = T_j o Psi_j on normalized coordinates
  MapPtr full;           // S_j o normalization, on original coordinates
  MapPtr full_inverse;
  DomainModel scaled;    // defining function r_j(T^{-1} z) / eta_j, scaled kernel
  double base_residual = 0.0;   // |S_j(zeta^j) - b*|
  double eta_residual = 0.0;    // |eta/delta - |grad_zbar r(p^j)||
  double det_t_residual = 0.0;  // |det T - eta^{-(n+1)/2}| / eta^{-(n+1)/2}
};

/// Scaling step at an interior point zeta (original coordinates), with the
/// normalization fixed at p0.
inline ScalingStep make_scaling_step(const DomainModel& dom, const Normalization& nm, const Point& zeta_original,
                                     int index = 0) {
  const int n = dom.dim();
  ScalingStep s{.scaled = nm.domain};
  s.index = index;
  s.zeta_original = zeta_original;
  s.zeta = nm.map->forward(zeta_original);
  const auto foot = nearest_boundary_point(nm.domain, s.zeta);
  s.foot = foot.p;
  s.delta = foot.delta;
  const double gnorm = nm.domain.derivatives(s.foot).r_zbar.norm();
  s.eta = s.delta * gnorm;

  const auto qd = quadratic_data(nm.domain, s.foot);
  s.P = qd.P;
  s.a1 = qd.a;
  s.b1 = qd.b;
  auto f1 = phi1(nm.domain, s.foot);
  auto f2 = phi2(qd.a);
  auto f3 = phi3(qd.b);
  s.A = f3->matrix().topLeftCorner(n - 1, n - 1);
  s.psi = std::make_shared<CompositeMap>(std::vector<MapPtr>{f1, f2, f3});
  s.Q = s.psi->jacobian(s.zeta);
  auto t = dilation(n, s.eta);
  s.dilation = t;
  s.scaling = compose(t, s.psi);
  s.full = compose(s.scaling, nm.map);
  s.full_inverse = s.full->inverse();
  s.scaled = dom.transformed(s.full, nm.gradient_norm * s.eta, dom.name() + "-scaled-" + std::to_string(index));

  s.base_residual = (s.scaling->forward(s.zeta) - siegel_base_point(n)).norm();
  s.eta_residual = std::abs(s.eta / s.delta - gnorm);
  const double det_target = std::pow(s.eta, -0.5 * (n + 1));
  s.det_t_residual = std::abs(t->matrix().determinant() - det_target) / det_target;
  return s;
}

/// Scaling step along the inward normal at p0: zeta = p0 - delta grad_zbar r / |grad_zbar r|.
inline ScalingStep make_scaling_step(const DomainModel& dom, const Point& p0, double delta, int index = 0) {
  if (!(delta > 0.0)) throw ArgumentError("scaling step: delta must be positive");
  const auto nm = normalize_coordinates(dom, p0);
  const Point g = dom.derivatives(p0).r_zbar;
  return make_scaling_step(dom, nm, Point(p0 - delta * g / g.norm()), index);
}

struct TangentSplit {
  Point base;
  Point foot;
  Point x_h;
  Point x_n;
};

inline TangentSplit tangent_split(const DomainModel& dom, const Point& z, const Point& x) {
  const auto foot = nearest_boundary_point(dom, z);
  const Point nu = dom.derivatives(foot.p).r_zbar.normalized();
  TangentSplit s;
  s.base = z;
  s.foot = foot.p;
  s.x_n = nu * nu.dot(x);
  s.x_h = x - s.x_n;
  return s;
}

/// L(p, X) = sum d2r/dz_mu dzbar_nu X^mu conj(X^nu) for r rescaled to |grad_zbar r(p)| = 1.
inline double levi_form(const DomainModel& dom, const Point& p, const Point& xh) {
  const auto d = dom.derivatives(p);
  const double g = d.r_zbar.norm();
  if (std::abs(d.r_zbar.dot(xh)) > 1e-10 * g * std::max(1.0, xh.norm()))
    throw ArgumentError("levi form: vector is not complex tangent at p");
  return (xh.transpose() * d.r_zzbar * xh.conjugate())(0, 0).real() / g;
}

/// Smallest eigenvalue of the normalized Levi form on the complex tangent space at p.
inline double levi_min_eigenvalue(const DomainModel& dom, const Point& p) {
  const int n = dom.dim();
  if (n == 1) return std::numeric_limits<double>::infinity();
  const auto nm = normalize_coordinates(dom, p);
  const CMatrix b = quadratic_data(nm.domain, Point::Zero(n)).b.topLeftCorner(n - 1, n - 1);
  const CMatrix herm = 0.5 * (b + b.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(herm, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

inline void require_strictly_pseudoconvex(const DomainModel& dom, const Point& p) {
  if (levi_min_eigenvalue(dom, p) <= 0.0)
    throw PseudoconvexityError("domain is not strictly pseudoconvex at the given boundary point");
}

/// max over points of |r_a - r_b| + |grad| + |Hessian| differences (C^2 distance on a sample).
inline double c2_deviation(const DomainModel& a, const DomainModel& b, std::span<const Point> pts) {
  double worst = 0.0;
  for (const auto& z : pts) {
    const auto da = a.derivatives(z);
    const auto db = b.derivatives(z);
    const double e = std::abs(da.value - db.value) + (da.grad_real - db.grad_real).norm() +
                     (da.hess_real - db.hess_real).norm();
    worst = std::max(worst, e);
  }
  return worst;
}

}  // namespace kfuks
