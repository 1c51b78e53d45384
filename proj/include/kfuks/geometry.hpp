#pragma once

/// \file
/// Bergman and Kobayashi-Fuks metrics and their invariants at a point.
///
/// Everything is derived from one jet of log K. With L = log K(z, z):
///
///   g^b_{a b}    = d_a dbar_b L
///   Ric^b_{a b}  = -d_a dbar_b log det G_b
///   g^kf_{a b}   = d_a dbar_b ((n+1) L + log det G_b)  = (n+1) g^b - Ric^b
///   Ric^kf_{a b} = -d_a dbar_b log det G_kf
///
/// so the Kobayashi-Fuks curvatures consume derivatives of L up to order
/// 3 + 3 (degree 6); the Bergman ones need degree 4.

#include <Eigen/Dense>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/kernels.hpp"
#include "kfuks/tolerances.hpp"
#include "kfuks/wjet.hpp"

namespace kfuks {

enum class MetricKind { bergman, kobayashi_fuks };

inline std::string to_string(MetricKind k) { return k == MetricKind::bergman ? "b" : "kf"; }

struct MetricTensor {
  Point base;
  CMatrix g;  // g(a, b) = g_{a bbar}
  MetricKind kind = MetricKind::bergman;
};

/// Curvature coefficients of one metric at one point.
struct CurvatureData {
  Point base;
  MetricKind kind = MetricKind::bergman;
  CMatrix g;
  CMatrix g_inv;
  CMatrix ricci;  // Ric_{a bbar}
  int n = 0;
  std::vector<cplx> r4;  // R_{abar b c dbar}, row-major in (a, b, c, d)

  cplx r(int a, int b, int c, int d) const { return r4[((a * n + b) * n + c) * n + d]; }
};

namespace detail {

inline JetMatrix complex_hessian(const WJet& f) {
  const int n = f.dim();
  JetMatrix h(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) h[a].push_back(jet_hessian_entry(f, a, b));
  return h;
}

inline CMatrix constant_terms(const JetMatrix& m) {
  const int n = static_cast<int>(m.size());
  CMatrix c(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c(a, b) = m[a][b].constant_term();
  return c;
}

inline cplx hermitian_form(const CMatrix& g, const Point& x) {
  // sum g_{a bbar} X^a conj(X^b)
  return (x.transpose() * g * x.conjugate())(0, 0);
}

}  // namespace detail

/// All metric data at one point, computed once from a single log-kernel jet.
class PointGeometry {
 public:
  /// degree >= 2 gives the Bergman metric, >= 4 adds Bergman curvature and
  /// the Kobayashi-Fuks metric, >= 6 adds Kobayashi-Fuks curvature.
  PointGeometry(const KernelProvider& kernel, const Point& z, int degree = 6) : base_(z), degree_(degree) {
    if (degree < 2) throw StructuralError("point geometry: jet degree must be at least 2");
    auto kj = kernel.log_jet(z, degree);
    tail_ = kj.tail;
    n_ = kernel.dim();
    log_kernel_ = kj.log_kernel.constant_term().real();

    auto& b = layers_[0];
    b.g_jets = detail::complex_hessian(kj.log_kernel);
    b.log_det = jet_log(jet_det(b.g_jets));
    if (degree >= 4) {
      b.ric_jets = detail::complex_hessian(jet_neg(b.log_det));

      WJet potential = jet_truncate(kj.log_kernel, degree - 2) * static_cast<double>(n_ + 1);
      potential += b.log_det;
      auto& kf = layers_[1];
      kf.g_jets = detail::complex_hessian(potential);
      check_two_routes();
      kf.log_det = jet_log(jet_det(kf.g_jets));
      if (degree >= 6) kf.ric_jets = detail::complex_hessian(jet_neg(kf.log_det));
    }
    for (auto& layer : layers_) {
      if (layer.g_jets.empty()) continue;
      layer.g = detail::constant_terms(layer.g_jets);
      Eigen::LLT<CMatrix> llt(layer.g);
      if (llt.info() != Eigen::Success)
        throw PositivityError("metric is not positive definite at the evaluation point");
      layer.g_inv = llt.solve(CMatrix::Identity(n_, n_));
    }
  }

  int dim() const { return n_; }
  int degree() const { return degree_; }
  const Point& base() const { return base_; }
  double tail() const { return tail_; }

  /// K(z, z) recovered from the constant term of the log-kernel jet.
  double kernel_diagonal() const { return std::exp(log_kernel_); }

  MetricTensor metric(MetricKind kind) const { return {base_, layer(kind, 0).g, kind}; }

  /// det G_h
  double volume(MetricKind kind) const { return layer(kind, 0).g.determinant().real(); }

  /// beta_h = det G_h / K(z, z)
  double canonical_invariant(MetricKind kind) const { return std::exp(std::log(volume(kind)) - log_kernel_); }

  double length(const Point& x, MetricKind kind) const {
    return std::sqrt(std::max(0.0, detail::hermitian_form(layer(kind, 0).g, x).real()));
  }

  CMatrix ricci_matrix(MetricKind kind) const { return detail::constant_terms(layer(kind, 2).ric_jets); }

  CurvatureData curvature(MetricKind kind) const {
    const auto& l = layer(kind, 2);
    CurvatureData c;
    c.base = base_;
    c.kind = kind;
    c.n = n_;
    c.g = l.g;
    c.g_inv = l.g_inv;
    if (!l.ric_jets.empty()) c.ricci = detail::constant_terms(l.ric_jets);
    c.r4 = riemann(l);
    return c;
  }

  /// Holomorphic sectional curvature R_h(z, X).
  double hsc(const Point& x, MetricKind kind) const {
    require_nonzero(x);
    const auto c = curvature(kind);
    cplx num = 0.0;
    for (int a = 0; a < n_; ++a)
      for (int b = 0; b < n_; ++b)
        for (int g = 0; g < n_; ++g)
          for (int d = 0; d < n_; ++d) num += c.r(a, b, g, d) * std::conj(x(a)) * x(b) * x(g) * std::conj(x(d));
    const double ds2 = detail::hermitian_form(c.g, x).real();
    return num.real() / (ds2 * ds2);
  }

  /// Ric_h(z, X) as a Rayleigh quotient against G_h.
  double ricci_curvature(const Point& x, MetricKind kind) const {
    require_nonzero(x);
    const auto& l = layer(kind, 0);
    if (l.ric_jets.empty()) throw StructuralError("ricci curvature: jet degree too low for this metric");
    const CMatrix ric = detail::constant_terms(l.ric_jets);
    return detail::hermitian_form(ric, x).real() / detail::hermitian_form(l.g, x).real();
  }

 private:
  struct Layer {
    JetMatrix g_jets;
    WJet log_det{1, 0};
    JetMatrix ric_jets;
    CMatrix g;
    CMatrix g_inv;
  };

  const Layer& layer(MetricKind kind, int jet_order) const {
    const auto& l = layers_[kind == MetricKind::bergman ? 0 : 1];
    if (l.g_jets.empty() || l.g_jets[0][0].degree() < jet_order)
      throw StructuralError("point geometry: jet degree too low for the requested " + to_string(kind) + " quantity");
    return l;
  }

  static void require_nonzero(const Point& x) {
    if (x.squaredNorm() == 0.0) throw ArgumentError("tangent vector must be nonzero");
  }

  void check_two_routes() const {
    const auto& b = layers_[0];
    const auto& kf = layers_[1];
    CMatrix route1 = static_cast<double>(n_ + 1) * detail::constant_terms(b.g_jets) - detail::constant_terms(b.ric_jets);
    CMatrix route2 = detail::constant_terms(kf.g_jets);
    if ((route1 - route2).norm() > tol::kf_two_route * route2.norm())
      throw ConsistencyError("Kobayashi-Fuks metric: (n+1) g_b - Ric_b disagrees with the potential Hessian");
  }

  // R_{abar b c dbar} = -d_c dbar_d g_{b abar} + sum_{mu,nu} g^{nu mubar} d_c g_{b mubar} dbar_d g_{nu abar}
  std::vector<cplx> riemann(const Layer& l) const {
    const int n = n_;
    auto idx = [&](const WJet& j, int holo, int anti) {
      std::vector<int> a(n, 0), b(n, 0);
      if (holo >= 0) a[holo] += 1;
      if (anti >= 0) b[anti] += 1;
      return j.coeff(a, b);
    };
    std::vector<cplx> r(static_cast<std::size_t>(n * n * n * n));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            cplx v = -idx(l.g_jets[b][a], c, d);
            for (int mu = 0; mu < n; ++mu)
              for (int nu = 0; nu < n; ++nu)
                v += l.g_inv(mu, nu) * idx(l.g_jets[b][mu], c, -1) * idx(l.g_jets[nu][a], -1, d);
            r[((a * n + b) * n + c) * n + d] = v;
          }
    return r;
  }

  Point base_;
  int degree_;
  int n_ = 0;
  double tail_ = 0.0;
  double log_kernel_ = 0.0;
  Layer layers_[2];
};

inline int required_degree(MetricKind kind, int derivative_layers) {
  // derivative_layers: 0 metric, 1 curvature
  return kind == MetricKind::bergman ? 2 + 2 * derivative_layers : 4 + 2 * derivative_layers;
}

inline MetricTensor bergman_metric(const KernelProvider& k, const Point& z) {
  return PointGeometry(k, z, 2).metric(MetricKind::bergman);
}

inline double bergman_volume(const KernelProvider& k, const Point& z) {
  return PointGeometry(k, z, 2).volume(MetricKind::bergman);
}

inline CurvatureData ricci_bergman(const KernelProvider& k, const Point& z) {
  return PointGeometry(k, z, 4).curvature(MetricKind::bergman);
}

inline MetricTensor kf_metric(const KernelProvider& k, const Point& z) {
  return PointGeometry(k, z, 4).metric(MetricKind::kobayashi_fuks);
}

inline double kf_volume(const KernelProvider& k, const Point& z) {
  return PointGeometry(k, z, 4).volume(MetricKind::kobayashi_fuks);
}

inline double canonical_invariant(const KernelProvider& k, const Point& z, MetricKind kind) {
  return PointGeometry(k, z, required_degree(kind, 0)).canonical_invariant(kind);
}

inline double length(const KernelProvider& k, const Point& z, const Point& x, MetricKind kind) {
  return PointGeometry(k, z, required_degree(kind, 0)).length(x, kind);
}

inline double hsc(const KernelProvider& k, const Point& z, const Point& x, MetricKind kind) {
  return PointGeometry(k, z, required_degree(kind, 1)).hsc(x, kind);
}

inline double ricci_curvature(const KernelProvider& k, const Point& z, const Point& x, MetricKind kind) {
  return PointGeometry(k, z, required_degree(kind, 1)).ricci_curvature(x, kind);
}

}  // namespace kfuks
