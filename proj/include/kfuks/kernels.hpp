#pragma once

/// \file
/// Bergman kernel providers.
///
/// A provider evaluates K(z, w) and produces the jet of log K(w, conj w) for
/// arbitrary holomorphic coordinate jets w (and their antiholomorphic
/// partners wbar). Producing jets from coordinate jets, rather than from a
/// base point, lets a kernel be pulled back through any map whose formula can
/// be applied to jets.

#include <cmath>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/maps.hpp"
#include "kfuks/wjet.hpp"

namespace kfuks {

/// Jet of log K at a point plus the truncation-tail estimate of the series
/// that produced it (zero for closed forms).
struct KernelJet {
  WJet log_kernel;
  double tail = 0.0;
};

class KernelProvider {
 public:
  virtual ~KernelProvider() = default;

  virtual int dim() const = 0;
  virtual std::string domain_tag() const = 0;
  virtual bool contains(const Point& z) const = 0;

  /// K(z, w), holomorphic in z and antiholomorphic in w.
  virtual cplx evaluate(const Point& z, const Point& w) const = 0;

  /// Jet of log K(w, conj w) given the coordinate jets w and wbar = conj(w).
  virtual KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const = 0;

  /// Truncation tail of evaluate(z, z); zero for closed forms.
  virtual double tail_estimate(const Point& /*z*/) const { return 0.0; }

  double diagonal(const Point& z) const { return evaluate(z, z).real(); }

  KernelJet log_jet(const Point& z, int degree) const {
    if (z.size() != dim()) throw StructuralError("kernel: point dimension mismatch");
    if (!contains(z)) throw DomainError("kernel '" + domain_tag() + "': point outside the domain");
    const auto w = seed_jets(z, degree);
    return log_kernel_jet(w, conj_jets(w));
  }
};

using KernelPtr = std::shared_ptr<const KernelProvider>;

namespace detail {

inline double factorial(int n) {
  double f = 1.0;
  for (int k = 2; k <= n; ++k) f *= k;
  return f;
}

inline Point constant_terms(std::span<const WJet> w) {
  Point p(static_cast<Eigen::Index>(w.size()));
  for (std::size_t i = 0; i < w.size(); ++i) p(i) = w[i].constant_term();
  return p;
}

}  // namespace detail

/// K(z, w) = n!/pi^n (1 - <z, w>)^{-(n+1)} on the unit ball.
class BallKernel : public KernelProvider {
 public:
  explicit BallKernel(int n) : n_(n) {
    if (n < 1) throw ArgumentError("ball kernel: n >= 1 required");
  }

  int dim() const override { return n_; }
  std::string domain_tag() const override { return "ball" + std::to_string(n_); }
  bool contains(const Point& z) const override { return z.squaredNorm() < 1.0; }

  double constant() const { return detail::factorial(n_) / std::pow(std::numbers::pi, n_); }

  cplx evaluate(const Point& z, const Point& w) const override {
    if (!contains(z) || !contains(w)) throw DomainError("ball kernel: point outside the unit ball");
    const cplx s = 1.0 - w.dot(z);  // Eigen's dot conjugates its first argument
    return constant() * std::pow(s, -(n_ + 1));
  }

  KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const override {
    if (!contains(detail::constant_terms(w))) throw DomainError("ball kernel: jet base outside the unit ball");
    WJet s = 1.0 - w[0] * wbar[0];
    for (int i = 1; i < n_; ++i) s -= w[i] * wbar[i];
    WJet out = jet_log(s) * static_cast<double>(-(n_ + 1));
    out += std::log(constant());
    return {std::move(out), 0.0};
  }

 private:
  int n_;
};

/// Product of disc kernels 1 / (pi (1 - z_i conj w_i)^2).
class PolydiscKernel : public KernelProvider {
 public:
  explicit PolydiscKernel(int n) : n_(n) {
    if (n < 1) throw ArgumentError("polydisc kernel: n >= 1 required");
  }

  int dim() const override { return n_; }
  std::string domain_tag() const override { return "polydisc" + std::to_string(n_); }
  bool contains(const Point& z) const override { return z.cwiseAbs().maxCoeff() < 1.0; }

  cplx evaluate(const Point& z, const Point& w) const override {
    if (!contains(z) || !contains(w)) throw DomainError("polydisc kernel: point outside the polydisc");
    cplx k = 1.0;
    for (int i = 0; i < n_; ++i) {
      const cplx s = 1.0 - z(i) * std::conj(w(i));
      k /= std::numbers::pi * s * s;
    }
    return k;
  }

  KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const override {
    if (!contains(detail::constant_terms(w))) throw DomainError("polydisc kernel: jet base outside the polydisc");
    WJet out = jet_const(-n_ * std::log(std::numbers::pi), w[0].dim(), w[0].degree());
    for (int i = 0; i < n_; ++i) out -= 2.0 * jet_log(1.0 - w[i] * wbar[i]);
    return {std::move(out), 0.0};
  }

 private:
  int n_;
};

/// Kernel of the Siegel half-space {2 Re z_n + |'z|^2 < 0}:
///   K(z, w) = n!/pi^n (-(z_n + conj w_n + <'z, 'w>))^{-(n+1)}.
class SiegelKernel : public KernelProvider {
 public:
  explicit SiegelKernel(int n) : n_(n) {
    if (n < 1) throw ArgumentError("siegel kernel: n >= 1 required");
  }

  int dim() const override { return n_; }
  std::string domain_tag() const override { return "siegel" + std::to_string(n_); }
  bool contains(const Point& z) const override {
    return 2.0 * z(n_ - 1).real() + z.head(n_ - 1).squaredNorm() < 0.0;
  }

  double constant() const { return detail::factorial(n_) / std::pow(std::numbers::pi, n_); }

  cplx evaluate(const Point& z, const Point& w) const override {
    if (!contains(z) || !contains(w)) throw DomainError("siegel kernel: point outside the half-space");
    cplx t = -(z(n_ - 1) + std::conj(w(n_ - 1)));
    for (int i = 0; i < n_ - 1; ++i) t -= z(i) * std::conj(w(i));
    return constant() * std::pow(t, -(n_ + 1));
  }

  KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const override {
    if (!contains(detail::constant_terms(w))) throw DomainError("siegel kernel: jet base outside the half-space");
    WJet t = -(w[n_ - 1] + wbar[n_ - 1]);
    for (int i = 0; i < n_ - 1; ++i) t -= w[i] * wbar[i];
    WJet out = jet_log(t) * static_cast<double>(-(n_ + 1));
    out += std::log(constant());
    return {std::move(out), 0.0};
  }

 private:
  int n_;
};

/// Pullback of a kernel on Omega_2 through a biholomorphism F: Omega_1 -> Omega_2:
///   K_1(z, w) = det J F(z) K_2(F z, F w) conj(det J F(w)).
class TransformedKernel : public KernelProvider {
 public:
  TransformedKernel(KernelPtr target, MapPtr map) : target_(std::move(target)), map_(std::move(map)) {
    if (target_->dim() != map_->dim()) throw StructuralError("transform_kernel: dimension mismatch");
  }

  int dim() const override { return target_->dim(); }
  std::string domain_tag() const override { return target_->domain_tag() + "<-" + map_->name(); }
  const MapPtr& map() const { return map_; }
  const KernelPtr& target() const { return target_; }

  bool contains(const Point& z) const override {
    try {
      return target_->contains(map_->forward(z));
    } catch (const DomainError&) {
      return false;
    }
  }

  cplx evaluate(const Point& z, const Point& w) const override {
    const Point fz = map_->forward(z);
    const Point fw = z == w ? fz : map_->forward(w);
    if (!target_->contains(fz) || !target_->contains(fw))
      throw DomainError("transformed kernel: image point outside the target domain");
    return map_->jacobian_det(z) * target_->evaluate(fz, fw) * std::conj(map_->jacobian_det(w));
  }

  KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const override {
    const auto fw = map_->forward_jets(w);
    const auto wbar_holo = conj_jets(wbar);
    const auto fwbar = conj_jets(map_->forward_jets(wbar_holo));
    auto k = target_->log_kernel_jet(fw, fwbar);
    const WJet ld = jet_log(jet_det(map_->jacobian_jets(w)));
    const WJet ldbar = jet_conj(jet_log(jet_det(map_->jacobian_jets(wbar_holo))));
    k.log_kernel += ld;
    k.log_kernel += ldbar;
    return k;
  }

  double tail_estimate(const Point& z) const override { return target_->tail_estimate(map_->forward(z)); }

 private:
  KernelPtr target_;
  MapPtr map_;
};

inline KernelPtr ball_kernel(int n) { return std::make_shared<BallKernel>(n); }
inline KernelPtr polydisc_kernel(int n) { return std::make_shared<PolydiscKernel>(n); }
inline KernelPtr siegel_kernel(int n) { return std::make_shared<SiegelKernel>(n); }

/// Kernel on the domain of `map` obtained from the kernel on its image.
inline KernelPtr transform_kernel(KernelPtr target, MapPtr map) {
  return std::make_shared<TransformedKernel>(std::move(target), std::move(map));
}

/// The Siegel kernel built as the Cayley pullback of the ball kernel.
inline KernelPtr siegel_kernel_via_cayley(int n) {
  return transform_kernel(ball_kernel(n), std::make_shared<CayleyMap>(n));
}

}  // namespace kfuks
