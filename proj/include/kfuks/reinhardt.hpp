#pragma once

/// \file
/// Bergman kernel of a complex ellipsoid {sum_i |z_i|^{2 p_i} < 1} as a
/// truncated series over the orthogonal monomials z^alpha:
///
///     K_N(z, w) = sum_{|alpha| <= N} z^alpha conj(w)^alpha / c_alpha,
///     c_alpha   = || z^alpha ||^2.

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <cmath>
#include <functional>
#include <iomanip>
#include <istream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/kernels.hpp"
#include "kfuks/tolerances.hpp"

namespace kfuks {

struct ReinhardtSpec {
  std::vector<double> exponents;  // p_i > 0
  int truncation = 40;            // N: largest total monomial degree summed
  // When set, shells beyond N keep being added until the tail estimate drops
  // below tail_tolerance (or max_truncation is reached).
  bool adaptive = false;
  double tail_tolerance = tol::series_tail;
  int max_truncation = 20000;

  int dim() const { return static_cast<int>(exponents.size()); }

  void validate() const {
    if (exponents.empty()) throw ArgumentError("reinhardt spec: no exponents");
    for (double p : exponents)
      if (!(p > 0.0) || !std::isfinite(p)) throw ArgumentError("reinhardt spec: exponents must be positive (non-integrable otherwise)");
    if (truncation < 0) throw ArgumentError("reinhardt spec: negative truncation");
  }
};

/// log c_alpha from the closed Beta form
///   c_alpha = pi^n prod(1/p_i) prod Gamma((alpha_i+1)/p_i) / Gamma(1 + sum (alpha_i+1)/p_i).
inline double log_reinhardt_moment(const ReinhardtSpec& spec, std::span<const int> alpha) {
  spec.validate();
  if (static_cast<int>(alpha.size()) != spec.dim()) throw StructuralError("moment: multi-index length mismatch");
  double l = spec.dim() * std::log(std::numbers::pi);
  double s = 1.0;
  for (int i = 0; i < spec.dim(); ++i) {
    if (alpha[i] < 0) throw ArgumentError("moment: negative multi-index");
    const double si = (alpha[i] + 1) / spec.exponents[i];
    l += std::lgamma(si) - std::log(spec.exponents[i]);
    s += si;
  }
  return l - std::lgamma(s);
}

inline double reinhardt_moment(const ReinhardtSpec& spec, std::span<const int> alpha) {
  return std::exp(log_reinhardt_moment(spec, alpha));
}

/// c_alpha by nested tanh-sinh quadrature in polar radii:
///   (2 pi)^n int_{sum r_i^{2 p_i} < 1} prod r_i^{2 alpha_i + 1} dr.
/// The innermost radial integral is done in closed form.
inline double reinhardt_moment_quadrature(const ReinhardtSpec& spec, std::span<const int> alpha) {
  spec.validate();
  const int n = spec.dim();
  if (static_cast<int>(alpha.size()) != n) throw StructuralError("moment: multi-index length mismatch");
  std::vector<boost::math::quadrature::tanh_sinh<double>> quad(n > 1 ? n - 1 : 0);
  std::function<double(int, double)> level = [&](int k, double budget) -> double {
    budget = std::max(budget, 0.0);
    const double radius = std::pow(budget, 1.0 / (2.0 * spec.exponents[k]));
    const double e = 2.0 * alpha[k] + 1.0;
    if (k == n - 1) return std::pow(radius, e + 1.0) / (e + 1.0);
    if (radius == 0.0) return 0.0;
    auto f = [&](double r) { return std::pow(r, e) * level(k + 1, budget - std::pow(r, 2.0 * spec.exponents[k])); };
    return quad[k].integrate(f, 0.0, radius, 1e-13);
  };
  return std::pow(2.0 * std::numbers::pi, n) * level(0, 1.0);
}

/// Cacheable table of moments, exported as CSV rows alpha_1,...,alpha_n,c_alpha.
class MomentTable {
 public:
  explicit MomentTable(int dim = 1) : dim_(dim) {}

  enum class Method { closed_form, quadrature };

  static MomentTable build(const ReinhardtSpec& spec, int max_degree, Method method = Method::closed_form) {
    MomentTable t(spec.dim());
    for_each_index(spec.dim(), max_degree, [&](const std::vector<int>& a) {
      t.set(a, method == Method::closed_form ? reinhardt_moment(spec, a) : reinhardt_moment_quadrature(spec, a));
    });
    return t;
  }

  int dim() const { return dim_; }
  std::size_t size() const { return rows_.size(); }
  const std::map<std::vector<int>, double>& rows() const { return rows_; }

  void set(const std::vector<int>& alpha, double c) {
    if (static_cast<int>(alpha.size()) != dim_) throw StructuralError("moment table: multi-index length mismatch");
    if (!(c > 0.0)) throw ArgumentError("moment table: moments must be positive");
    rows_[alpha] = c;
  }

  std::optional<double> lookup(std::span<const int> alpha) const {
    auto it = rows_.find(std::vector<int>(alpha.begin(), alpha.end()));
    if (it == rows_.end()) return std::nullopt;
    return it->second;
  }

  void write_csv(std::ostream& os) const {
    for (int i = 1; i <= dim_; ++i) os << "alpha_" << i << ',';
    os << "c_alpha\n";
    os << std::setprecision(17);
    for (const auto& [a, c] : rows_) {
      for (int x : a) os << x << ',';
      os << c << '\n';
    }
  }

  static MomentTable read_csv(std::istream& is, int dim) {
    MomentTable t(dim);
    std::string line;
    while (std::getline(is, line)) {
      if (line.empty() || line.rfind("alpha_", 0) == 0) continue;
      std::stringstream ss(line);
      std::string cell;
      std::vector<std::string> cells;
      while (std::getline(ss, cell, ',')) cells.push_back(cell);
      if (static_cast<int>(cells.size()) != dim + 1) throw ArgumentError("moment table: malformed row '" + line + "'");
      std::vector<int> a(dim);
      for (int i = 0; i < dim; ++i) a[i] = std::stoi(cells[i]);
      t.set(a, std::stod(cells[dim]));
    }
    return t;
  }

  /// Calls f on every multi-index of length n and total degree <= max_degree, graded.
  template <class F>
  static void for_each_index(int n, int max_degree, F&& f) {
    std::vector<int> a(n, 0);
    for (int m = 0; m <= max_degree; ++m) for_each_in_shell(a, 0, m, f);
  }

  template <class F>
  static void for_each_in_shell(std::vector<int>& a, int var, int remaining, F& f) {
    const int n = static_cast<int>(a.size());
    if (var == n - 1) {
      a[var] = remaining;
      f(a);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      a[var] = k;
      for_each_in_shell(a, var + 1, remaining - k, f);
    }
    a[var] = 0;
  }

 private:
  int dim_;
  std::map<std::vector<int>, double> rows_;
};

/// Result of a series evaluation with its tail diagnostics.
struct SeriesValue {
  cplx value;
  double tail = 0.0;  // estimated relative size of the omitted terms
  int terms_degree = 0;
};

class ReinhardtKernel : public KernelProvider {
 public:
  /// Moments are taken from `overrides` where present and from the Beta form
  /// otherwise. The Beta form is checked against quadrature for |alpha| <= 1.
  explicit ReinhardtKernel(ReinhardtSpec spec, std::optional<MomentTable> overrides = std::nullopt)
      : spec_(std::move(spec)), overrides_(std::move(overrides)) {
    spec_.validate();
    MomentTable::for_each_index(dim(), 1, [&](const std::vector<int>& a) {
      const double closed = reinhardt_moment(spec_, a);
      const double quad = reinhardt_moment_quadrature(spec_, a);
      if (std::abs(closed - quad) > tol::moment_quadrature * quad)
        throw ConsistencyError("reinhardt kernel: Beta-form moment disagrees with quadrature");
    });
  }

  const ReinhardtSpec& spec() const { return spec_; }
  int dim() const override { return spec_.dim(); }
  std::string domain_tag() const override {
    std::string s = "ellipsoid(";
    for (int i = 0; i < dim(); ++i) {
      std::ostringstream os;
      os << spec_.exponents[i];
      s += (i ? "," : "") + os.str();
    }
    return s + ")";
  }

  bool contains(const Point& z) const override { return gauge(z) < 1.0; }

  /// sum_i |z_i|^{2 p_i}
  double gauge(const Point& z) const {
    double g = 0.0;
    for (int i = 0; i < dim(); ++i) g += std::pow(std::norm(z(i)), spec_.exponents[i]);
    return g;
  }

  double log_moment(std::span<const int> alpha) const {
    if (overrides_) {
      if (auto c = overrides_->lookup(alpha)) return std::log(*c);
    }
    return log_reinhardt_moment(spec_, alpha);
  }

  cplx evaluate(const Point& z, const Point& w) const override { return evaluate_series(z, w).value; }

  double tail_estimate(const Point& z) const override { return evaluate_series(z, z).tail; }

  SeriesValue evaluate_series(const Point& z, const Point& w) const {
    if (!contains(z) || !contains(w)) throw DomainError("reinhardt kernel: point outside the domain");
    const int n = dim();
    std::vector<double> logmod(n), arg(n);
    std::vector<bool> zero(n);
    for (int i = 0; i < n; ++i) {
      const cplx v = z(i) * std::conj(w(i));
      zero[i] = std::abs(v) < 1e-300;
      logmod[i] = zero[i] ? 0.0 : std::log(std::abs(v));
      arg[i] = zero[i] ? 0.0 : std::arg(v);
    }
    cplx sum = 0.0;
    double prev_shell = 0.0, shell = 0.0, tail = 0.0;
    int m = 0;
    std::vector<int> a(n, 0);
    for (;; ++m) {
      prev_shell = shell;
      shell = 0.0;
      auto visit = [&](const std::vector<int>& alpha) {
        double lw = -log_moment(alpha);
        double ph = 0.0;
        for (int i = 0; i < n; ++i) {
          if (alpha[i] == 0) continue;
          if (zero[i]) return;
          lw += alpha[i] * logmod[i];
          ph += alpha[i] * arg[i];
        }
        const double mag = std::exp(lw);
        sum += std::polar(mag, ph);
        shell += mag;
      };
      MomentTable::for_each_in_shell(a, 0, m, visit);
      tail = shell_tail(prev_shell, shell, std::abs(sum), m);
      if (stop(m, tail)) break;
    }
    return {sum, tail, m};
  }

  KernelJet log_kernel_jet(std::span<const WJet> w, std::span<const WJet> wbar) const override {
    const int n = dim();
    const int deg = w[0].degree();
    // u_i = w_i wbar_i; the kernel is F(u) = sum_alpha u^alpha / c_alpha.
    std::vector<WJet> u;
    std::vector<double> t0(n);
    for (int i = 0; i < n; ++i) {
      u.push_back(w[i] * wbar[i]);
      t0[i] = u[i].constant_term().real();
    }
    {
      double g = 0.0;
      for (int i = 0; i < n; ++i) g += std::pow(std::max(t0[i], 0.0), spec_.exponents[i]);
      if (!(g < 1.0)) throw DomainError("reinhardt kernel: jet base outside the domain");
    }
    const auto taylor = taylor_coefficients(t0, deg);

    // K jet = sum_kappa T_kappa prod_i (u_i - t0_i)^{kappa_i}
    std::vector<std::vector<WJet>> powers(n);
    for (int i = 0; i < n; ++i) {
      const WJet s = u[i] - t0[i];
      powers[i].push_back(jet_const(1.0, n, deg));
      for (int k = 1; k <= deg; ++k) powers[i].push_back(powers[i].back() * s);
    }
    WJet k = jet_const(0.0, n, deg);
    for (std::size_t j = 0; j < taylor.kappas.size(); ++j) {
      const auto& kap = taylor.kappas[j];
      if (taylor.coeff[j] == 0.0) continue;
      WJet term = powers[0][kap[0]];
      for (int i = 1; i < n; ++i)
        if (kap[i] > 0) term = term * powers[i][kap[i]];
      k += term * taylor.coeff[j];
    }
    return {jet_log(k), taylor.tail};
  }

  /// Taylor coefficients of F(t) = sum_alpha t^alpha / c_alpha about t0, for
  /// all kappa with |kappa| <= degree, with the largest relative tail estimate.
  struct Taylor {
    std::vector<std::vector<int>> kappas;
    std::vector<double> coeff;
    double tail = 0.0;
    int terms_degree = 0;
  };

  Taylor taylor_coefficients(const std::vector<double>& t0_in, int degree) const {
    const int n = dim();
    Taylor out;
    MomentTable::for_each_index(n, degree, [&](const std::vector<int>& k) { out.kappas.push_back(k); });
    const std::size_t nk = out.kappas.size();
    out.coeff.assign(nk, 0.0);

    std::vector<double> t0(t0_in);
    std::vector<bool> zero(n);
    std::vector<double> logt(n, 0.0);
    for (int i = 0; i < n; ++i) {
      zero[i] = t0[i] < 1e-40;
      if (!zero[i]) logt[i] = std::log(t0[i]);
    }
    // factor[i][a][k] = binom(a, k) t0_i^{-k}, or [a == k] when t0_i vanishes
    std::vector<std::vector<std::vector<double>>> factor(n);
    auto ensure = [&](int i, int a) {
      while (static_cast<int>(factor[i].size()) <= a) {
        const int aa = static_cast<int>(factor[i].size());
        std::vector<double> row(degree + 1, 0.0);
        if (zero[i]) {
          if (aa <= degree) row[aa] = 1.0;
        } else {
          double b = 1.0, inv = 1.0 / t0[i];
          for (int k = 0; k <= degree && k <= aa; ++k) {
            row[k] = b;
            b *= static_cast<double>(aa - k) / (k + 1) * inv;
          }
        }
        factor[i].push_back(std::move(row));
      }
    };

    std::vector<double> shell(nk, 0.0), prev(nk, 0.0);
    std::vector<int> a(n, 0);
    int m = 0;
    for (;; ++m) {
      std::swap(prev, shell);
      std::fill(shell.begin(), shell.end(), 0.0);
      auto visit = [&](const std::vector<int>& alpha) {
        double lw = -log_moment(alpha);
        for (int i = 0; i < n; ++i) {
          if (zero[i]) {
            if (alpha[i] > degree) return;
          } else {
            lw += alpha[i] * logt[i];
          }
          ensure(i, alpha[i]);
        }
        const double base = std::exp(lw);
        if (base == 0.0) return;
        for (std::size_t j = 0; j < nk; ++j) {
          const auto& kap = out.kappas[j];
          double c = base;
          for (int i = 0; i < n && c != 0.0; ++i) c *= kap[i] <= alpha[i] ? factor[i][alpha[i]][kap[i]] : 0.0;
          shell[j] += c;
        }
      };
      MomentTable::for_each_in_shell(a, 0, m, visit);
      double tail = 0.0;
      for (std::size_t j = 0; j < nk; ++j) {
        out.coeff[j] += shell[j];
        tail = std::max(tail, shell_tail(prev[j], shell[j], out.coeff[j], m));
      }
      out.tail = tail;
      if (m >= degree + 2 && stop(m, tail)) break;
      if (m >= std::max(spec_.truncation, spec_.adaptive ? spec_.max_truncation : 0)) break;
    }
    out.terms_degree = m;
    return out;
  }

 private:
  // Geometric-ratio estimate of the omitted tail, relative to `total`.
  static double shell_tail(double prev, double last, double total, int m) {
    if (last == 0.0) return 0.0;
    if (m == 0 || prev == 0.0 || total == 0.0) return std::numeric_limits<double>::infinity();
    const double rho = last / prev;
    if (rho >= 1.0) return std::numeric_limits<double>::infinity();
    return last * rho / (1.0 - rho) / std::abs(total);
  }

  bool stop(int m, double tail) const {
    if (m >= spec_.truncation && (!spec_.adaptive || tail <= spec_.tail_tolerance)) return true;
    return spec_.adaptive && m >= spec_.max_truncation;
  }

  ReinhardtSpec spec_;
  std::optional<MomentTable> overrides_;
};

inline KernelPtr reinhardt_kernel(ReinhardtSpec spec, std::optional<MomentTable> overrides = std::nullopt) {
  return std::make_shared<ReinhardtKernel>(std::move(spec), std::move(overrides));
}

}  // namespace kfuks
