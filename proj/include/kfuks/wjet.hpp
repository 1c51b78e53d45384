#pragma once

/// \file
/// Truncated Taylor expansions ("Wirtinger jets") of real-analytic functions
/// of (z, conj z).
///
/// A jet of dimension n and degree D stores the coefficients of
///
///     f(z + h) = sum_{|a| + |b| <= D} c_{a,b} h^a conj(h)^b
///
/// where h and conj(h) are treated as 2n independent formal increments.
/// Mixed Wirtinger derivatives are read back as
///
///     d^a/dz^a d^b/dconj(z)^b f(z) = c_{a,b} a! b!
///
/// Coefficients are stored densely in graded order: all monomials of total
/// degree d precede those of degree d + 1, so the layout of degree D' < D is a
/// prefix of the layout of degree D.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "kfuks/errors.hpp"

namespace kfuks {

using cplx = std::complex<double>;

/// Holomorphic and antiholomorphic orders of a mixed derivative.
struct MultiIndexPair {
  std::vector<int> alpha;
  std::vector<int> beta;

  int order() const {
    int s = 0;
    for (int a : alpha) s += a;
    for (int b : beta) s += b;
    return s;
  }
};

enum class VarKind { holo, anti };

namespace detail {

class JetLayout {
 public:
  static std::shared_ptr<const JetLayout> get(int dim, int degree) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, std::shared_ptr<const JetLayout>> cache;
    std::lock_guard lock(mutex);
    auto& slot = cache[{dim, degree}];
    if (!slot) slot = std::shared_ptr<const JetLayout>(new JetLayout(dim, degree));
    return slot;
  }

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int nvars() const { return 2 * dim_; }
  std::size_t size() const { return degrees_.size(); }

  std::span<const std::uint8_t> exponents(std::size_t i) const {
    return {exps_.data() + i * nvars(), static_cast<std::size_t>(nvars())};
  }
  int total_degree(std::size_t i) const { return degrees_[i]; }
  double factorial_weight(std::size_t i) const { return fact_weight_[i]; }
  std::size_t conj_index(std::size_t i) const { return conj_[i]; }

  /// Number of monomials of total degree <= d.
  std::size_t prefix_size(int d) const {
    if (d < 0) return 0;
    return shell_end_[std::min(d, degree_)];
  }

  /// Index of the monomial with the given exponents, or npos if absent.
  std::size_t find(std::span<const int> e) const {
    if (static_cast<int>(e.size()) != nvars()) return npos;
    std::uint64_t key = 0;
    int deg = 0;
    for (int v = 0; v < nvars(); ++v) {
      if (e[v] < 0) return npos;
      deg += e[v];
      if (deg > degree_) return npos;
      key |= static_cast<std::uint64_t>(e[v]) << (4 * v);
    }
    auto it = index_.find(key);
    return it == index_.end() ? npos : it->second;
  }

  /// Row i of the product table: k = mul_row(i)[j] is the index of
  /// monomial(i) * monomial(j) for j < prefix_size(degree - deg(i)).
  std::span<const std::uint32_t> mul_row(std::size_t i) const {
    return {mul_.data() + mul_offset_[i], mul_offset_[i + 1] - mul_offset_[i]};
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

 private:
  JetLayout(int dim, int degree) : dim_(dim), degree_(degree) {
    if (dim < 1 || degree < 0) throw StructuralError("jet layout: need dim >= 1 and degree >= 0");
    if (degree > 15 || 2 * dim > 16) throw StructuralError("jet layout: dim <= 8 and degree <= 15 supported");
    const int nv = nvars();
    std::vector<int> cur(nv, 0);
    shell_end_.assign(degree + 1, 0);
    for (int d = 0; d <= degree; ++d) {
      enumerate(cur, 0, d, d);
      shell_end_[d] = degrees_.size();
    }
    for (std::size_t i = 0; i < size(); ++i) {
      std::uint64_t key = 0;
      for (int v = 0; v < nv; ++v) key |= static_cast<std::uint64_t>(exps_[i * nv + v]) << (4 * v);
      index_.emplace(key, static_cast<std::uint32_t>(i));
    }
    conj_.resize(size());
    fact_weight_.resize(size());
    std::vector<int> e(nv);
    for (std::size_t i = 0; i < size(); ++i) {
      double w = 1.0;
      for (int v = 0; v < nv; ++v) {
        e[v] = exps_[i * nv + (v + dim_) % nv];
        for (int k = 2; k <= exps_[i * nv + v]; ++k) w *= k;
      }
      conj_[i] = find(e);
      fact_weight_[i] = w;
    }
    mul_offset_.assign(size() + 1, 0);
    for (std::size_t i = 0; i < size(); ++i) {
      const std::size_t lim = prefix_size(degree_ - degrees_[i]);
      for (std::size_t j = 0; j < lim; ++j) {
        for (int v = 0; v < nv; ++v) e[v] = exps_[i * nv + v] + exps_[j * nv + v];
        mul_.push_back(static_cast<std::uint32_t>(find(e)));
      }
      mul_offset_[i + 1] = mul_.size();
    }
  }

  // Monomials of total degree `total` in graded-lexicographic order.
  void enumerate(std::vector<int>& cur, int var, int remaining, int total) {
    if (var == nvars() - 1) {
      cur[var] = remaining;
      for (int v : cur) exps_.push_back(static_cast<std::uint8_t>(v));
      degrees_.push_back(total);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      cur[var] = k;
      enumerate(cur, var + 1, remaining - k, total);
    }
    cur[var] = 0;
  }

  int dim_;
  int degree_;
  std::vector<std::uint8_t> exps_;
  std::vector<int> degrees_;
  std::vector<std::size_t> shell_end_;
  std::vector<std::size_t> conj_;
  std::vector<double> fact_weight_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::uint32_t> mul_;
  std::vector<std::size_t> mul_offset_;
};

}  // namespace detail

/// Truncated Taylor table in n holomorphic and n antiholomorphic increments.
class WJet {
 public:
  WJet(int dim, int degree)
      : layout_(detail::JetLayout::get(dim, degree)), c_(layout_->size(), cplx{}) {}

  static WJet constant(cplx c, int dim, int degree) {
    WJet j(dim, degree);
    j.c_[0] = c;
    return j;
  }

  /// base + h_i (holo) or base + conj(h_i) (anti); i is zero-based.
  static WJet variable(int i, VarKind kind, cplx base, int dim, int degree) {
    if (i < 0 || i >= dim) throw StructuralError("jet variable index out of range");
    WJet j = constant(base, dim, degree);
    if (degree >= 1) {
      std::vector<int> e(2 * dim, 0);
      e[kind == VarKind::holo ? i : dim + i] = 1;
      j.c_[j.layout_->find(e)] = 1.0;
    }
    return j;
  }

  int dim() const { return layout_->dim(); }
  int degree() const { return layout_->degree(); }
  std::size_t size() const { return c_.size(); }
  const detail::JetLayout& layout() const { return *layout_; }

  cplx constant_term() const { return c_[0]; }
  std::span<const cplx> coefficients() const { return c_; }
  cplx operator[](std::size_t i) const { return c_[i]; }
  cplx& operator[](std::size_t i) { return c_[i]; }

  /// Raw Taylor coefficient of h^alpha conj(h)^beta.
  cplx coeff(std::span<const int> alpha, std::span<const int> beta) const {
    return c_[index_of(alpha, beta)];
  }
  cplx coeff(const MultiIndexPair& idx) const { return coeff(idx.alpha, idx.beta); }

  std::size_t index_of(std::span<const int> alpha, std::span<const int> beta) const {
    const int n = dim();
    if (static_cast<int>(alpha.size()) != n || static_cast<int>(beta.size()) != n)
      throw StructuralError("multi-index length does not match jet dimension");
    std::vector<int> e(2 * n);
    std::copy(alpha.begin(), alpha.end(), e.begin());
    std::copy(beta.begin(), beta.end(), e.begin() + n);
    const auto k = layout_->find(e);
    if (k == detail::JetLayout::npos) throw StructuralError("multi-index outside jet degree");
    return k;
  }

  bool same_shape(const WJet& o) const { return layout_ == o.layout_; }

  WJet& operator+=(const WJet& o) {
    check_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
    return *this;
  }
  WJet& operator-=(const WJet& o) {
    check_shape(o);
    for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
    return *this;
  }
  WJet& operator*=(cplx s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  WJet& operator+=(cplx s) {
    c_[0] += s;
    return *this;
  }
  WJet& operator-=(cplx s) {
    c_[0] -= s;
    return *this;
  }

  void check_shape(const WJet& o) const {
    if (!same_shape(o)) throw StructuralError("jet dimension/degree mismatch");
  }

 private:
  std::shared_ptr<const detail::JetLayout> layout_;
  std::vector<cplx> c_;
};

inline WJet jet_const(cplx c, int n, int degree) { return WJet::constant(c, n, degree); }

inline WJet jet_var(int i, VarKind kind, cplx base, int n, int degree) {
  return WJet::variable(i, kind, base, n, degree);
}

inline WJet jet_add(const WJet& a, const WJet& b) {
  WJet r = a;
  r += b;
  return r;
}

inline WJet jet_neg(const WJet& a) {
  WJet r = a;
  r *= -1.0;
  return r;
}

inline WJet jet_scale(const WJet& a, cplx s) {
  WJet r = a;
  r *= s;
  return r;
}

inline WJet jet_mul(const WJet& a, const WJet& b) {
  a.check_shape(b);
  const auto& L = a.layout();
  WJet r(a.dim(), a.degree());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const cplx ai = a[i];
    if (ai == cplx{}) continue;
    const auto row = L.mul_row(i);
    for (std::size_t j = 0; j < row.size(); ++j) r[row[j]] += ai * b[j];
  }
  return r;
}

inline WJet operator+(WJet a, const WJet& b) { return a += b; }
inline WJet operator-(WJet a, const WJet& b) { return a -= b; }
inline WJet operator-(const WJet& a) { return jet_neg(a); }
inline WJet operator*(const WJet& a, const WJet& b) { return jet_mul(a, b); }
inline WJet operator+(WJet a, cplx s) { return a += s; }
inline WJet operator+(cplx s, WJet a) { return a += s; }
inline WJet operator-(WJet a, cplx s) { return a -= s; }
inline WJet operator-(cplx s, const WJet& a) { return jet_neg(a) += s; }
inline WJet operator*(WJet a, cplx s) { return a *= s; }
inline WJet operator*(cplx s, WJet a) { return a *= s; }
inline WJet operator+(WJet a, double s) { return a += cplx(s); }
inline WJet operator+(double s, WJet a) { return a += cplx(s); }
inline WJet operator-(WJet a, double s) { return a -= cplx(s); }
inline WJet operator-(double s, const WJet& a) { return jet_neg(a) += cplx(s); }
inline WJet operator*(WJet a, double s) { return a *= cplx(s); }
inline WJet operator*(double s, WJet a) { return a *= cplx(s); }
inline WJet operator/(WJet a, cplx s) { return a *= (1.0 / s); }
inline WJet operator/(WJet a, double s) { return a *= cplx(1.0 / s); }

namespace detail {

inline void require_invertible(const WJet& a, const char* what) {
  double scale = 0.0;
  for (auto c : a.coefficients()) scale = std::max(scale, std::abs(c));
  if (std::abs(a.constant_term()) <= 1e-300 || std::abs(a.constant_term()) < 1e-280 * scale)
    throw SingularJetError(std::string(what) + ": jet has zero constant term");
}

// Euler operator: multiplies each coefficient by the total degree of its monomial.
inline WJet euler(const WJet& a) {
  WJet r = a;
  for (std::size_t i = 0; i < r.size(); ++i) r[i] *= static_cast<double>(a.layout().total_degree(i));
  return r;
}

}  // namespace detail

/// Multiplicative inverse by Newton iteration x <- x (2 - a x).
inline WJet jet_inv(const WJet& a) {
  detail::require_invertible(a, "jet_inv");
  WJet x = jet_const(1.0 / a.constant_term(), a.dim(), a.degree());
  for (int exact = 0; exact < a.degree(); exact = 2 * exact + 1) x = x * (2.0 - a * x);
  return x;
}

inline WJet jet_div(const WJet& a, const WJet& b) { return a * jet_inv(b); }
inline WJet operator/(const WJet& a, const WJet& b) { return jet_div(a, b); }
inline WJet operator/(cplx s, const WJet& b) { return jet_inv(b) *= s; }
inline WJet operator/(double s, const WJet& b) { return jet_inv(b) *= cplx(s); }

/// Principal logarithm. Uses the Euler derivation E(log a) = E(a) / a.
inline WJet jet_log(const WJet& a) {
  detail::require_invertible(a, "jet_log");
  WJet q = detail::euler(a) * jet_inv(a);
  for (std::size_t i = 1; i < q.size(); ++i) q[i] /= static_cast<double>(a.layout().total_degree(i));
  q[0] = std::log(a.constant_term());
  return q;
}

/// Exponential by Newton iteration y <- y (1 + a - log y).
inline WJet jet_exp(const WJet& a) {
  WJet y = jet_const(std::exp(a.constant_term()), a.dim(), a.degree());
  for (int exact = 0; exact < a.degree(); exact = 2 * exact + 1) y = y * (1.0 + a - jet_log(y));
  return y;
}

/// a^s = exp(s log a) on the principal branch.
inline WJet jet_pow(const WJet& a, double s) {
  detail::require_invertible(a, "jet_pow");
  WJet r = jet_exp(s * jet_log(a));
  r[0] = std::pow(a.constant_term(), s);
  return r;
}

/// Integer power by repeated squaring.
inline WJet jet_pow(const WJet& a, int k) {
  if (k < 0) return jet_pow(jet_inv(a), -k);
  WJet r = jet_const(1.0, a.dim(), a.degree());
  WJet base = a;
  while (k > 0) {
    if (k & 1) r = r * base;
    k >>= 1;
    if (k) base = base * base;
  }
  return r;
}

/// d^alpha/dz^alpha d^beta/dconj(z)^beta at the base point.
inline cplx extract_deriv(const WJet& a, const MultiIndexPair& idx) {
  const auto k = a.index_of(idx.alpha, idx.beta);
  return a[k] * a.layout().factorial_weight(k);
}

/// Jet of the derivative d^alpha dbar^beta f; its degree drops by |alpha| + |beta|.
inline WJet jet_shift_derivative(const WJet& a, const MultiIndexPair& idx) {
  const int n = a.dim();
  if (static_cast<int>(idx.alpha.size()) != n || static_cast<int>(idx.beta.size()) != n)
    throw StructuralError("multi-index length does not match jet dimension");
  const int s = idx.order();
  if (s > a.degree()) throw StructuralError("derivative order exceeds jet degree");
  WJet r(n, a.degree() - s);
  const auto& src = a.layout();
  const auto& dst = r.layout();
  std::vector<int> shift(2 * n), e(2 * n);
  for (int v = 0; v < n; ++v) {
    shift[v] = idx.alpha[v];
    shift[n + v] = idx.beta[v];
  }
  for (std::size_t m = 0; m < r.size(); ++m) {
    const auto em = dst.exponents(m);
    double w = 1.0;
    for (int v = 0; v < 2 * n; ++v) {
      if (shift[v] < 0) throw StructuralError("negative derivative order");
      e[v] = em[v] + shift[v];
      for (int k = em[v] + 1; k <= e[v]; ++k) w *= k;
    }
    r[m] = a[src.find(e)] * w;
  }
  return r;
}

/// Convenience: first-order shift d/dz_i (holo) or d/dconj(z_i) (anti).
inline WJet jet_partial(const WJet& a, int i, VarKind kind) {
  MultiIndexPair idx{std::vector<int>(a.dim(), 0), std::vector<int>(a.dim(), 0)};
  (kind == VarKind::holo ? idx.alpha : idx.beta)[i] = 1;
  return jet_shift_derivative(a, idx);
}

/// Mixed second derivative d^2/dz_i dconj(z_j) as a jet.
inline WJet jet_hessian_entry(const WJet& a, int i, int j) {
  MultiIndexPair idx{std::vector<int>(a.dim(), 0), std::vector<int>(a.dim(), 0)};
  idx.alpha[i] = 1;
  idx.beta[j] = 1;
  return jet_shift_derivative(a, idx);
}

/// Keeps the monomials of degree <= degree.
inline WJet jet_truncate(const WJet& a, int degree) {
  if (degree > a.degree()) throw StructuralError("cannot raise jet degree by truncation");
  WJet r(a.dim(), degree);
  std::copy_n(a.coefficients().begin(), r.size(), &r[0]);
  return r;
}

/// Jet of conj(f): coeff(a, b) -> conj(coeff(b, a)). Maps holomorphic jets to
/// antiholomorphic ones.
inline WJet jet_conj(const WJet& a) {
  WJet r(a.dim(), a.degree());
  const auto& L = a.layout();
  for (std::size_t i = 0; i < a.size(); ++i) r[L.conj_index(i)] = std::conj(a[i]);
  return r;
}

/// Largest deviation |coeff(b, a) - conj(coeff(a, b))| relative to the largest coefficient.
inline double hermitian_defect(const WJet& a) {
  const auto& L = a.layout();
  double scale = 0.0, defect = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    scale = std::max(scale, std::abs(a[i]));
    defect = std::max(defect, std::abs(a[L.conj_index(i)] - std::conj(a[i])));
  }
  return scale == 0.0 ? 0.0 : defect / scale;
}

using JetMatrix = std::vector<std::vector<WJet>>;

/// Determinant over the jet ring: Gaussian elimination pivoting on the
/// magnitude of the constant terms.
inline WJet jet_det(JetMatrix m) {
  const std::size_t n = m.size();
  if (n == 0) throw StructuralError("jet_det: empty matrix");
  for (const auto& row : m) {
    if (row.size() != n) throw StructuralError("jet_det: matrix is not square");
    for (const auto& e : row) m[0][0].check_shape(e);
  }
  double scale = 0.0;
  for (const auto& row : m)
    for (const auto& e : row) scale = std::max(scale, std::abs(e.constant_term()));
  WJet det = jet_const(1.0, m[0][0].dim(), m[0][0].degree());
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    for (std::size_t i = k + 1; i < n; ++i)
      if (std::abs(m[i][k].constant_term()) > std::abs(m[piv][k].constant_term())) piv = i;
    if (std::abs(m[piv][k].constant_term()) <= 1e-14 * scale)
      throw SingularMatrixError("jet_det: constant-term matrix is singular");
    if (piv != k) {
      std::swap(m[piv], m[k]);
      det *= -1.0;
    }
    const WJet inv_pivot = jet_inv(m[k][k]);
    det = det * m[k][k];
    for (std::size_t i = k + 1; i < n; ++i) {
      const WJet f = m[i][k] * inv_pivot;
      for (std::size_t j = k + 1; j < n; ++j) m[i][j] -= f * m[k][j];
    }
  }
  return det;
}

}  // namespace kfuks
