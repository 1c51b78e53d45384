#pragma once

/// \file
/// Holomorphic maps of C^n that can be evaluated pointwise and on jets.
///
/// Every concrete map writes its formula once as a template over the scalar
/// type (std::complex<double> or WJet); MapImpl turns that into the virtual
/// interface.

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/wjet.hpp"

namespace kfuks {

using Point = Eigen::VectorXcd;
using CMatrix = Eigen::MatrixXcd;

inline Point make_point(std::initializer_list<cplx> xs) {
  Point p(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) p(i++) = x;
  return p;
}

/// Coordinate jets z_i + h_i at base point z.
inline std::vector<WJet> seed_jets(const Point& z, int degree) {
  const int n = static_cast<int>(z.size());
  std::vector<WJet> out;
  out.reserve(n);
  for (int i = 0; i < n; ++i) out.push_back(WJet::variable(i, VarKind::holo, z(i), n, degree));
  return out;
}

inline std::vector<WJet> conj_jets(std::span<const WJet> w) {
  std::vector<WJet> out;
  out.reserve(w.size());
  for (const auto& x : w) out.push_back(jet_conj(x));
  return out;
}

class Biholomorphism {
 public:
  virtual ~Biholomorphism() = default;

  virtual int dim() const = 0;
  virtual std::string name() const = 0;
  virtual Point forward(const Point& z) const = 0;
  virtual std::vector<WJet> forward_jets(std::span<const WJet> z) const = 0;
  virtual CMatrix jacobian(const Point& z) const = 0;
  virtual JetMatrix jacobian_jets(std::span<const WJet> z) const = 0;

  /// Inverse map; throws ArgumentError when the map has no closed-form inverse.
  virtual std::shared_ptr<const Biholomorphism> inverse() const {
    throw ArgumentError("map '" + name() + "' has no inverse");
  }

  cplx jacobian_det(const Point& z) const { return jacobian(z).determinant(); }

  /// Jet of det J_C F at z + h.
  WJet jacobian_det_jet(const Point& z, int degree) const {
    return jet_det(jacobian_jets(seed_jets(z, degree)));
  }
};

using MapPtr = std::shared_ptr<const Biholomorphism>;

namespace detail {

template <class T>
T scalar_like(const T& proto, cplx c) {
  if constexpr (std::is_same_v<T, cplx>) {
    (void)proto;
    return c;
  } else {
    return jet_const(c, proto.dim(), proto.degree());
  }
}

}  // namespace detail

/// CRTP bridge: Derived provides
///   template <class T> std::vector<T> apply(std::span<const T>) const;
///   template <class T> std::vector<std::vector<T>> jac(std::span<const T>) const;
template <class Derived>
class MapImpl : public Biholomorphism {
 public:
  Point forward(const Point& z) const override {
    check_dim(z.size());
    const auto w = self().template apply<cplx>(std::span<const cplx>(z.data(), z.size()));
    Point out(static_cast<Eigen::Index>(w.size()));
    for (std::size_t i = 0; i < w.size(); ++i) out(i) = w[i];
    return out;
  }
  std::vector<WJet> forward_jets(std::span<const WJet> z) const override {
    check_dim(z.size());
    return self().template apply<WJet>(z);
  }
  CMatrix jacobian(const Point& z) const override {
    check_dim(z.size());
    const auto j = self().template jac<cplx>(std::span<const cplx>(z.data(), z.size()));
    const int n = dim();
    CMatrix m(n, n);
    for (int r = 0; r < n; ++r)
      for (int c = 0; c < n; ++c) m(r, c) = j[r][c];
    return m;
  }
  JetMatrix jacobian_jets(std::span<const WJet> z) const override {
    check_dim(z.size());
    return self().template jac<WJet>(z);
  }

 private:
  const Derived& self() const { return static_cast<const Derived&>(*this); }
  void check_dim(std::size_t n) const {
    if (static_cast<int>(n) != dim()) throw StructuralError("map '" + name() + "': dimension mismatch");
  }
};

/// w = A z + b.
class AffineMap : public MapImpl<AffineMap> {
 public:
  AffineMap(CMatrix a, Point b, std::string name = "affine")
      : a_(std::move(a)), b_(std::move(b)), name_(std::move(name)) {
    if (a_.rows() != a_.cols() || a_.rows() != b_.size()) throw StructuralError("affine map: shape mismatch");
  }

  int dim() const override { return static_cast<int>(b_.size()); }
  std::string name() const override { return name_; }
  const CMatrix& matrix() const { return a_; }
  const Point& offset() const { return b_; }

  MapPtr inverse() const override {
    Eigen::PartialPivLU<CMatrix> lu(a_);
    if (std::abs(lu.determinant()) == 0.0) throw ArgumentError("affine map is singular");
    CMatrix ainv = lu.inverse();
    Point binv = -ainv * b_;
    return std::make_shared<AffineMap>(std::move(ainv), std::move(binv), name_ + "^-1");
  }

  template <class T>
  std::vector<T> apply(std::span<const T> z) const {
    const int n = dim();
    std::vector<T> w;
    w.reserve(n);
    for (int i = 0; i < n; ++i) {
      T acc = detail::scalar_like(z[0], b_(i));
      for (int j = 0; j < n; ++j)
        if (a_(i, j) != cplx{}) acc += z[j] * a_(i, j);
      w.push_back(std::move(acc));
    }
    return w;
  }

  template <class T>
  std::vector<std::vector<T>> jac(std::span<const T> z) const {
    const int n = dim();
    std::vector<std::vector<T>> m(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m[i].push_back(detail::scalar_like(z[0], a_(i, j)));
    return m;
  }

 private:
  CMatrix a_;
  Point b_;
  std::string name_;
};

inline MapPtr identity_map(int n) {
  return std::make_shared<AffineMap>(CMatrix::Identity(n, n), Point::Zero(n), "identity");
}

inline MapPtr linear_map(CMatrix a, std::string name = "linear") {
  const auto n = a.rows();
  return std::make_shared<AffineMap>(std::move(a), Point::Zero(n), std::move(name));
}

/// w = ('z, z_n + sum_{mu,nu < n} a_{mu nu} z_mu z_nu).
class QuadraticShear : public MapImpl<QuadraticShear> {
 public:
  QuadraticShear(int n, CMatrix a) : n_(n), a_(std::move(a)) {
    if (a_.rows() != n - 1 || a_.cols() != n - 1) throw StructuralError("quadratic shear: coefficient block must be (n-1)x(n-1)");
  }

  int dim() const override { return n_; }
  std::string name() const override { return "quadratic-shear"; }
  const CMatrix& coefficients() const { return a_; }

  MapPtr inverse() const override { return std::make_shared<QuadraticShear>(n_, -a_); }

  template <class T>
  std::vector<T> apply(std::span<const T> z) const {
    std::vector<T> w(z.begin(), z.end());
    for (int mu = 0; mu < n_ - 1; ++mu)
      for (int nu = 0; nu < n_ - 1; ++nu)
        if (a_(mu, nu) != cplx{}) w[n_ - 1] += z[mu] * z[nu] * a_(mu, nu);
    return w;
  }

  template <class T>
  std::vector<std::vector<T>> jac(std::span<const T> z) const {
    std::vector<std::vector<T>> m(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) m[i].push_back(detail::scalar_like(z[0], i == j ? 1.0 : 0.0));
    for (int g = 0; g < n_ - 1; ++g) {
      for (int mu = 0; mu < n_ - 1; ++mu) {
        if (a_(mu, g) != cplx{}) m[n_ - 1][g] += z[mu] * a_(mu, g);
        if (a_(g, mu) != cplx{}) m[n_ - 1][g] += z[mu] * a_(g, mu);
      }
    }
    return m;
  }

 private:
  int n_;
  CMatrix a_;
};

/// Cayley map H(z) = (sqrt(2) 'z / (z_n - 1), (z_n + 1) / (z_n - 1)).
/// Involutive; exchanges the Siegel half-space {2 Re z_n + |'z|^2 < 0} and
/// the unit ball, with H(('0, -1)) = 0.
class CayleyMap : public MapImpl<CayleyMap> {
 public:
  explicit CayleyMap(int n) : n_(n) {}

  int dim() const override { return n_; }
  std::string name() const override { return "cayley"; }
  MapPtr inverse() const override { return std::make_shared<CayleyMap>(n_); }

  template <class T>
  std::vector<T> apply(std::span<const T> z) const {
    const T inv = 1.0 / pole(z);
    std::vector<T> w;
    for (int i = 0; i < n_ - 1; ++i) w.push_back(z[i] * inv * std::sqrt(2.0));
    w.push_back((z[n_ - 1] + 1.0) * inv);
    return w;
  }

  template <class T>
  std::vector<std::vector<T>> jac(std::span<const T> z) const {
    const T inv = 1.0 / pole(z);
    const T inv2 = inv * inv;
    const T zero = detail::scalar_like(z[0], 0.0);
    std::vector<std::vector<T>> m(n_, std::vector<T>(n_, zero));
    for (int i = 0; i < n_ - 1; ++i) {
      m[i][i] = inv * std::sqrt(2.0);
      m[i][n_ - 1] = z[i] * inv2 * (-std::sqrt(2.0));
    }
    m[n_ - 1][n_ - 1] = inv2 * (-2.0);
    return m;
  }

 private:
  template <class T>
  T pole(std::span<const T> z) const {
    T d = z[n_ - 1] - 1.0;
    if constexpr (std::is_same_v<T, cplx>) {
      if (d == cplx{}) throw DomainError("cayley map: z_n = 1 is singular");
    } else {
      if (d.constant_term() == cplx{}) throw DomainError("cayley map: z_n = 1 is singular");
    }
    return d;
  }

  int n_;
};

/// Involutive automorphism of the unit ball exchanging a and 0:
///   phi_a(z) = (a - P_a z - s_a Q_a z) / (1 - <z, a>),  s_a = sqrt(1 - |a|^2).
class BallInvolution : public MapImpl<BallInvolution> {
 public:
  explicit BallInvolution(Point a) : a_(std::move(a)) {
    const double a2 = a_.squaredNorm();
    if (a2 >= 1.0) throw DomainError("ball involution: centre must lie in the unit ball");
    const int n = dim();
    const double s = std::sqrt(1.0 - a2);
    CMatrix p = CMatrix::Zero(n, n);
    if (a2 > 0.0) p = a_ * a_.adjoint() / a2;
    m_ = -(p + s * (CMatrix::Identity(n, n) - p));
  }

  int dim() const override { return static_cast<int>(a_.size()); }
  std::string name() const override { return "ball-involution"; }
  MapPtr inverse() const override { return std::make_shared<BallInvolution>(a_); }
  const Point& centre() const { return a_; }

  template <class T>
  std::vector<T> apply(std::span<const T> z) const {
    const int n = dim();
    const T inv = 1.0 / denom(z);
    std::vector<T> w;
    for (int i = 0; i < n; ++i) w.push_back(numer(z, i) * inv);
    return w;
  }

  template <class T>
  std::vector<std::vector<T>> jac(std::span<const T> z) const {
    const int n = dim();
    const T inv = 1.0 / denom(z);
    const T inv2 = inv * inv;
    std::vector<std::vector<T>> m(n);
    for (int i = 0; i < n; ++i) {
      const T ni = numer(z, i);
      for (int j = 0; j < n; ++j) m[i].push_back(inv * m_(i, j) + ni * inv2 * std::conj(a_(j)));
    }
    return m;
  }

 private:
  template <class T>
  T denom(std::span<const T> z) const {
    T d = detail::scalar_like(z[0], 1.0);
    for (int j = 0; j < dim(); ++j) d -= z[j] * std::conj(a_(j));
    return d;
  }
  template <class T>
  T numer(std::span<const T> z, int i) const {
    T acc = detail::scalar_like(z[0], a_(i));
    for (int j = 0; j < dim(); ++j) acc += z[j] * m_(i, j);
    return acc;
  }

  Point a_;
  CMatrix m_;
};

/// maps[0] applied first, then maps[1], ...
class CompositeMap : public Biholomorphism {
 public:
  explicit CompositeMap(std::vector<MapPtr> maps) : maps_(std::move(maps)) {
    if (maps_.empty()) throw StructuralError("composite map: empty chain");
    for (const auto& m : maps_)
      if (m->dim() != maps_.front()->dim()) throw StructuralError("composite map: dimension mismatch");
  }

  int dim() const override { return maps_.front()->dim(); }
  std::string name() const override {
    std::string s;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) s += (s.empty() ? "" : "o") + (*it)->name();
    return s;
  }
  const std::vector<MapPtr>& stages() const { return maps_; }

  Point forward(const Point& z) const override {
    Point w = z;
    for (const auto& m : maps_) w = m->forward(w);
    return w;
  }
  std::vector<WJet> forward_jets(std::span<const WJet> z) const override {
    std::vector<WJet> w(z.begin(), z.end());
    for (const auto& m : maps_) w = m->forward_jets(w);
    return w;
  }
  CMatrix jacobian(const Point& z) const override {
    Point w = z;
    CMatrix j = CMatrix::Identity(dim(), dim());
    for (const auto& m : maps_) {
      j = m->jacobian(w) * j;
      w = m->forward(w);
    }
    return j;
  }
  JetMatrix jacobian_jets(std::span<const WJet> z) const override {
    std::vector<WJet> w(z.begin(), z.end());
    JetMatrix j = maps_.front()->jacobian_jets(w);
    w = maps_.front()->forward_jets(w);
    for (std::size_t k = 1; k < maps_.size(); ++k) {
      const JetMatrix jk = maps_[k]->jacobian_jets(w);
      j = multiply(jk, j);
      w = maps_[k]->forward_jets(w);
    }
    return j;
  }
  MapPtr inverse() const override {
    std::vector<MapPtr> inv;
    for (auto it = maps_.rbegin(); it != maps_.rend(); ++it) inv.push_back((*it)->inverse());
    return std::make_shared<CompositeMap>(std::move(inv));
  }

 private:
  static JetMatrix multiply(const JetMatrix& a, const JetMatrix& b) {
    const std::size_t n = a.size();
    JetMatrix c(n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        WJet acc = a[i][0] * b[0][j];
        for (std::size_t k = 1; k < n; ++k) acc += a[i][k] * b[k][j];
        c[i].push_back(std::move(acc));
      }
    return c;
  }

  std::vector<MapPtr> maps_;
};

/// g after f.
inline MapPtr compose(MapPtr g, MapPtr f) {
  return std::make_shared<CompositeMap>(std::vector<MapPtr>{std::move(f), std::move(g)});
}

}  // namespace kfuks
