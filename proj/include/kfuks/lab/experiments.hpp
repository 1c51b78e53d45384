#pragma once

// Experiment runners: closed-form oracle suites, boundary asymptotics,
// scaling convergence and moment tables.

#include <algorithm>
#include <cmath>
#include <fstream>
#include <future>
#include <iomanip>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kfuks/geometry.hpp"
#include "kfuks/kernels.hpp"
#include "kfuks/lab/config.hpp"
#include "kfuks/reinhardt.hpp"
#include "kfuks/scaling.hpp"

namespace kfuks::lab {

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

inline std::ostream& operator<<(std::ostream& os, const Check& c) {
  return os << (c.passed ? "PASS " : "FAIL ") << c.name << (c.detail.empty() ? "" : ": " + c.detail);
}

inline bool all_passed(const std::vector<Check>& cs) {
  for (const auto& c : cs)
    if (!c.passed) return false;
  return true;
}

/// Relative error, or absolute error when the target vanishes.
inline double error_against(double value, double target) {
  if (!std::isfinite(value)) return std::numeric_limits<double>::infinity();
  return target == 0.0 ? std::abs(value) : std::abs(value - target) / std::abs(target);
}

/// Two-point Richardson estimate of the limit for v(delta) = L + C delta^p + ...,
/// from values at delta_prev and delta_prev * ratio.
inline double richardson(double v_prev, double v_last, double ratio, double p) {
  const double k = std::pow(ratio, p);
  return (v_last - k * v_prev) / (1.0 - k);
}

inline std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

inline std::string fmt_short(double x) {
  std::ostringstream os;
  os << std::setprecision(4) << x;
  return os.str();
}

namespace detail {

inline double ball_kf_det_constant(int n) { return std::pow(n + 1.0, n) * std::pow(n + 2.0, n); }

inline Point random_point_in_ball(std::mt19937& rng, int n, double radius) {
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u;
  Point z(n);
  for (int i = 0; i < n; ++i) z(i) = cplx(g(rng), g(rng));
  z.normalize();
  return z * (radius * std::pow(u(rng), 1.0 / (2 * n)));
}

inline Point random_vector(std::mt19937& rng, int n) {
  std::normal_distribution<double> g;
  Point x(n);
  for (int i = 0; i < n; ++i) x(i) = cplx(g(rng), g(rng));
  return x;
}

}  // namespace detail

// ---------------------------------------------------------------- oracles

struct OracleReport {
  int n = 0;
  int points = 0;
  std::vector<std::string> quantities;
  std::vector<double> max_error;
  std::vector<Check> checks;
  bool ok() const { return all_passed(checks); }
};

/// Kobayashi-Fuks closed forms on the unit ball at seeded points |z| <= 0.8.
inline OracleReport run_ball_oracle(int n, int points = 25, unsigned seed = 2024, double threshold = 1e-8) {
  if (n < 1 || n > 3) throw ArgumentError("ball oracle: 1 <= n <= 3");
  const auto k = ball_kernel(n);
  const double c = detail::ball_kf_det_constant(n);
  const double beta = c * std::pow(std::numbers::pi, n) / kfuks::detail::factorial(n);
  const double hsc_t = -2.0 / ((n + 1.0) * (n + 2.0));
  const double ric_t = -1.0 / (n + 2.0);
  OracleReport r;
  r.n = n;
  r.points = points;
  r.quantities = {"g_kf", "beta_kf", "hsc_kf", "ricci_kf"};
  r.max_error.assign(4, 0.0);
  std::mt19937 rng(seed);
  for (int i = 0; i < points; ++i) {
    const Point z = detail::random_point_in_ball(rng, n, 0.8);
    const Point x = detail::random_vector(rng, n);
    PointGeometry pg(*k, z, 6);
    const double s = 1.0 - z.squaredNorm();
    const double vals[4] = {pg.volume(MetricKind::kobayashi_fuks), pg.canonical_invariant(MetricKind::kobayashi_fuks),
                            pg.hsc(x, MetricKind::kobayashi_fuks), pg.ricci_curvature(x, MetricKind::kobayashi_fuks)};
    const double targets[4] = {c / std::pow(s, n + 1), beta, hsc_t, ric_t};
    for (int q = 0; q < 4; ++q) r.max_error[q] = std::max(r.max_error[q], error_against(vals[q], targets[q]));
  }
  for (int q = 0; q < 4; ++q)
    r.checks.push_back({"ball n=" + std::to_string(n) + " " + r.quantities[q], r.max_error[q] <= threshold,
                        "max rel err " + fmt_short(r.max_error[q])});
  return r;
}

/// Kobayashi-Fuks metric of the polydisc: diag 2(n+2)/(1-|z_a|^2)^2.
inline OracleReport run_polydisc_oracle(int n, int points = 25, unsigned seed = 2024, double threshold = 1e-9) {
  if (n < 1) throw ArgumentError("polydisc oracle: n >= 1");
  const auto k = polydisc_kernel(n);
  OracleReport r;
  r.n = n;
  r.points = points;
  r.quantities = {"g_kf_diagonal", "g_kf_offdiagonal"};
  r.max_error.assign(2, 0.0);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < points; ++i) {
    Point z(n);
    for (int a = 0; a < n; ++a) z(a) = std::polar(0.8 * std::sqrt(u(rng)), 2.0 * std::numbers::pi * u(rng));
    const CMatrix g = kf_metric(*k, z).g;
    for (int a = 0; a < n; ++a) {
      const double t = 2.0 * (n + 2) / std::pow(1.0 - std::norm(z(a)), 2);
      r.max_error[0] = std::max(r.max_error[0], std::abs(g(a, a) - t) / t);
      for (int b = 0; b < n; ++b)
        if (a != b) r.max_error[1] = std::max(r.max_error[1], std::abs(g(a, b)) / t);
    }
  }
  for (int q = 0; q < 2; ++q)
    r.checks.push_back({"polydisc n=" + std::to_string(n) + " " + r.quantities[q], r.max_error[q] <= threshold,
                        "max rel err " + fmt_short(r.max_error[q])});
  return r;
}

// ------------------------------------------------------------ sweep report

struct ExperimentRow {
  int j = 0;
  double delta = 0.0;
  double eta = 0.0;
  double tail = 0.0;
  bool trusted = true;
  std::vector<double> value;
  std::vector<double> extrapolated;  // NaN on the first row
  std::vector<double> target;
  std::vector<double> error;
  std::vector<double> extrapolated_error;
};

struct SweepReport {
  std::string kind;  // asymptotics | scaling
  std::vector<std::string> quantities;
  std::vector<ExperimentRow> rows;
  std::vector<Check> checks;
  std::vector<std::pair<std::string, std::string>> metadata;
  bool ok() const { return all_passed(checks); }
};

inline void write_csv(const SweepReport& r, std::ostream& os) {
  os << "j,delta,eta,trusted,tail";
  for (const auto& q : r.quantities) os << ',' << q << ',' << q << "_extrapolated," << q << "_target," << q << "_error," << q << "_extrapolated_error";
  os << '\n';
  for (const auto& row : r.rows) {
    os << row.j << ',' << fmt(row.delta) << ',' << fmt(row.eta) << ',' << (row.trusted ? 1 : 0) << ',' << fmt(row.tail);
    for (std::size_t q = 0; q < r.quantities.size(); ++q)
      os << ',' << fmt(row.value[q]) << ',' << fmt(row.extrapolated[q]) << ',' << fmt(row.target[q]) << ','
         << fmt(row.error[q]) << ',' << fmt(row.extrapolated_error[q]);
    os << '\n';
  }
}

inline void write_metadata(const SweepReport& r, std::ostream& os) {
  for (const auto& [k, v] : r.metadata) os << k << " = " << v << '\n';
  for (const auto& c : r.checks) os << "check = " << c << '\n';
}

inline void write_outputs(const SweepReport& r, const std::string& path) {
  if (path.empty()) return;
  std::ofstream csv(path);
  if (!csv) throw ArgumentError("cannot write '" + path + "'");
  write_csv(r, csv);
  std::ofstream meta(path + ".meta");
  if (!meta) throw ArgumentError("cannot write '" + path + ".meta'");
  write_metadata(r, meta);
}

namespace detail {

inline std::vector<std::string> selected(const std::vector<std::string>& all, const std::vector<std::string>& pick) {
  if (pick.empty()) return all;
  for (const auto& q : pick)
    if (std::find(all.begin(), all.end(), q) == all.end()) throw ArgumentError("unknown quantity '" + q + "'");
  return pick;
}

inline void fill_extrapolation(SweepReport& r, const ExperimentConfig& c) {
  for (std::size_t j = 0; j < r.rows.size(); ++j) {
    auto& row = r.rows[j];
    row.extrapolated.assign(r.quantities.size(), std::numeric_limits<double>::quiet_NaN());
    row.extrapolated_error.assign(r.quantities.size(), std::numeric_limits<double>::quiet_NaN());
    if (j == 0) continue;
    const auto& prev = r.rows[j - 1];
    for (std::size_t q = 0; q < r.quantities.size(); ++q) {
      row.extrapolated[q] = richardson(prev.value[q], row.value[q], c.ratio, c.order_for(r.quantities[q]));
      row.extrapolated_error[q] = error_against(row.extrapolated[q], row.target[q]);
    }
  }
}

inline void add_decay_check(SweepReport& r, std::size_t q, const ExperimentConfig& c, const std::string& prefix) {
  bool ok = true;
  std::string where;
  for (std::size_t j = 1; j < r.rows.size(); ++j) {
    const double e0 = r.rows[j - 1].error[q], e1 = r.rows[j].error[q];
    if (e1 > c.decay_floor && e1 > e0 * (1.0 + c.monotone_slack)) {
      ok = false;
      where = "j=" + std::to_string(j) + " error " + fmt_short(e1) + " after " + fmt_short(e0);
      break;
    }
  }
  r.checks.push_back({prefix + r.quantities[q] + " error decreasing", ok, ok ? "" : where});
}

inline std::vector<std::string> theorem_quantities() { return {"a", "b", "c", "d", "e", "f"}; }

inline std::string theorem_label(const std::string& q) {
  if (q == "a") return "delta^(n+1) g_kf";
  if (q == "b") return "delta ds_kf(X_N)";
  if (q == "c") return "sqrt(delta) ds_kf(X_H)";
  if (q == "d") return "beta_kf";
  if (q == "e") return "R_kf(X)";
  if (q == "f") return "Ric_kf(X)";
  return q;
}

}  // namespace detail

// ------------------------------------------------------ boundary asymptotics

struct ApproachData {
  Point p0;
  Point normal;   // outward unit normal at p0
  Point x;        // the test vector
  Point x_h0;     // X_H(p0)
  Point x_n0;     // X_N(p0)
  double levi = 0.0;             // L(p0, X_H(p0))
  double levi_determinant = 1.0; // det of the normalized Levi form on the complex tangent space
};

inline ApproachData approach_data(const DomainModel& dom, const ExperimentConfig& c) {
  ApproachData a;
  const int n = dom.dim();
  a.p0 = c.boundary_point;
  if (a.p0.size() != n) throw ArgumentError("asymptotics: boundary_point required");
  const auto nm = normalize_coordinates(dom, a.p0);
  a.normal = nm.unitary.adjoint().col(n - 1);
  switch (c.direction) {
    case DirectionKind::normal: a.x = a.normal; break;
    case DirectionKind::tangent:
      if (n == 1) throw ArgumentError("asymptotics: no complex tangent direction when n = 1");
      a.x = nm.unitary.adjoint().col(0);
      break;
    case DirectionKind::vector: a.x = c.vector; break;
  }
  if (a.x.squaredNorm() == 0.0) throw ArgumentError("asymptotics: test vector must be nonzero");
  a.x_n0 = a.normal * a.normal.dot(a.x);
  a.x_h0 = a.x - a.x_n0;
  a.levi = a.x_h0.norm() > 1e-14 * a.x.norm() ? levi_form(dom, a.p0, a.x_h0) : 0.0;
  if (n > 1) {
    const CMatrix b = quadratic_data(nm.domain, Point::Zero(n)).b.topLeftCorner(n - 1, n - 1);
    a.levi_determinant = b.determinant().real();
  }
  return a;
}

/// Theorem-level limits for the six quantities a..f.
inline std::vector<double> theorem_targets(int n, const ApproachData& a) {
  const double c = detail::ball_kf_det_constant(n);
  const double m = (n + 1.0) * (n + 2.0);
  return {c / std::pow(2.0, n + 1),
          0.5 * std::sqrt(m) * a.x_n0.norm(),
          std::sqrt(0.5 * m * a.levi),
          c * std::pow(std::numbers::pi, n) / kfuks::detail::factorial(n),
          -2.0 / m,
          -1.0 / (n + 2.0)};
}

/// The six quantities at zeta = p0 - delta * normal.
inline ExperimentRow asymptotics_row(const DomainModel& dom, const ApproachData& a, double delta, int j,
                                     double tail_tolerance) {
  const int n = dom.dim();
  const Point zeta = a.p0 - delta * a.normal;
  const auto split = tangent_split(dom, zeta, a.x);
  PointGeometry pg(*dom.kernel(), zeta, 6);
  const auto kf = MetricKind::kobayashi_fuks;
  ExperimentRow row;
  row.j = j;
  const double d = (zeta - split.foot).norm();
  row.delta = d;
  row.eta = d * dom.derivatives(split.foot).r_zbar.norm() / dom.derivatives(a.p0).r_zbar.norm();
  row.tail = pg.tail();
  row.trusted = row.tail <= tail_tolerance;
  row.value = {std::pow(d, n + 1) * pg.volume(kf),
               d * pg.length(split.x_n, kf),
               std::sqrt(d) * pg.length(split.x_h, kf),
               pg.canonical_invariant(kf),
               pg.hsc(a.x, kf),
               pg.ricci_curvature(a.x, kf)};
  return row;
}

inline SweepReport run_asymptotics(const ExperimentConfig& c) {
  c.validate();
  const DomainModel dom = make_domain(c);
  const int n = dom.dim();
  if (c.boundary_point.size() != n) throw ArgumentError("asymptotics: boundary_point required");
  require_strictly_pseudoconvex(dom, c.boundary_point);
  const ApproachData a = approach_data(dom, c);
  const auto all = detail::theorem_quantities();
  const auto targets_all = theorem_targets(n, a);
  const auto deltas = c.schedule();

  std::vector<std::future<ExperimentRow>> futs;
  for (std::size_t j = 0; j < deltas.size(); ++j)
    futs.push_back(std::async(std::launch::async, [&, j] {
      return asymptotics_row(dom, a, deltas[j], static_cast<int>(j), c.tail_tolerance);
    }));

  SweepReport r;
  r.kind = "asymptotics";
  r.quantities = detail::selected(all, c.quantities);
  std::vector<std::size_t> pick;
  for (const auto& q : r.quantities) pick.push_back(std::find(all.begin(), all.end(), q) - all.begin());
  for (auto& f : futs) {
    ExperimentRow full = f.get();
    ExperimentRow row = full;
    row.value.clear();
    for (auto q : pick) {
      row.value.push_back(full.value[q]);
      row.target.push_back(targets_all[q]);
      row.error.push_back(error_against(full.value[q], targets_all[q]));
    }
    r.rows.push_back(std::move(row));
  }
  detail::fill_extrapolation(r, c);

  r.metadata = {{"kind", "asymptotics"},
                {"domain", to_string(c.domain)},
                {"dim", std::to_string(n)},
                {"boundary_point", [&] {
                   std::ostringstream os;
                   for (int i = 0; i < n; ++i) os << (i ? ", " : "") << fmt(a.p0(i).real()) << (a.p0(i).imag() < 0 ? "" : "+") << fmt(a.p0(i).imag()) << "i";
                   return os.str();
                 }()},
                {"delta_schedule", fmt(c.delta0) + " * " + fmt(c.ratio) + "^j, j < " + std::to_string(c.count)},
                {"approach", "inward normal at the boundary point"},
                {"seed", std::to_string(c.seed)},
                {"levi_form_at_boundary_point", fmt(a.levi)},
                {"levi_determinant", fmt(a.levi_determinant)},
                {"series_truncation", c.domain == DomainKind::ellipsoid ? (c.adaptive ? "adaptive, tail <= " + fmt(c.tail_tolerance) : std::to_string(c.truncation)) : "closed form"}};
  for (std::size_t q = 0; q < r.quantities.size(); ++q) {
    r.metadata.push_back({"target_" + r.quantities[q] + " (" + detail::theorem_label(r.quantities[q]) + ")", fmt(r.rows[0].target[q])});
    r.metadata.push_back({"error_model_" + r.quantities[q],
                          "two-point Richardson, error ~ delta^" + fmt(c.order_for(r.quantities[q]))});
  }

  // assertions
  const auto checked = detail::selected(r.quantities, c.checked_quantities);
  std::size_t raw_j = r.rows.size() - 1;
  if (c.raw_check_delta > 0.0) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < deltas.size(); ++j)
      if (std::abs(std::log(deltas[j] / c.raw_check_delta)) < best) {
        best = std::abs(std::log(deltas[j] / c.raw_check_delta));
        raw_j = j;
      }
  }
  bool trusted = true;
  for (const auto& row : r.rows) trusted = trusted && row.trusted;
  r.checks.push_back({"series tail below tolerance on every row", trusted, ""});
  for (const auto& qn : checked) {
    const std::size_t q = std::find(r.quantities.begin(), r.quantities.end(), qn) - r.quantities.begin();
    const std::string pre = "(" + qn + ") ";
    const double e = r.rows[raw_j].error[q];
    r.checks.push_back({pre + "raw at delta=" + fmt_short(deltas[raw_j]) + " within " + fmt_short(c.raw_tolerance),
                        e <= c.raw_tolerance,
                        "value " + fmt(r.rows[raw_j].value[q]) + " target " + fmt(r.rows[raw_j].target[q]) + " err " + fmt_short(e)});
    if (r.rows.size() >= 2) {
      const auto& last = r.rows.back();
      const double ee = last.extrapolated_error[q];
      if (c.extrapolated_tolerance > 0.0)
        r.checks.push_back({pre + "extrapolated within " + fmt_short(c.extrapolated_tolerance), ee <= c.extrapolated_tolerance,
                            "value " + fmt(last.extrapolated[q]) + " err " + fmt_short(ee)});
    }
    if (c.check_decreasing) detail::add_decay_check(r, q, c, pre);
  }
  write_outputs(r, c.output);
  return r;
}

// --------------------------------------------------- scaling convergence

inline std::vector<std::string> scaling_quantities() { return {"K", "g", "beta", "ds", "R", "Ric"}; }

inline SweepReport run_scaling(const ExperimentConfig& c) {
  c.validate();
  const DomainModel dom = make_domain(c);
  const int n = dom.dim();
  if (c.boundary_point.size() != n) throw ArgumentError("scaling: boundary_point required");
  require_strictly_pseudoconvex(dom, c.boundary_point);
  const auto nm = normalize_coordinates(dom, c.boundary_point);
  const Point normal = nm.unitary.adjoint().col(n - 1);
  const Point tangent = n > 1 ? Point(nm.unitary.adjoint().col(0)) : Point::Zero(n);
  Point x = Point::Zero(n);
  x(n - 1) = 1.0;
  if (c.direction == DirectionKind::vector) x = c.vector;
  if (c.direction == DirectionKind::tangent && n > 1) x = Point::Unit(n, 0);

  const Point bstar = siegel_base_point(n);
  const auto kf = MetricKind::kobayashi_fuks;
  const auto siegel = siegel_kernel(n);
  PointGeometry target_pg(*siegel, bstar, 6);
  const std::vector<double> targets = {siegel->diagonal(bstar), target_pg.volume(kf), target_pg.canonical_invariant(kf),
                                       target_pg.length(x, kf), target_pg.hsc(x, kf), target_pg.ricci_curvature(x, kf)};
  const auto deltas = c.schedule();

  struct Out {
    ExperimentRow row;
    ScalingStep step;
  };
  std::vector<std::future<Out>> futs;
  for (std::size_t j = 0; j < deltas.size(); ++j)
    futs.push_back(std::async(std::launch::async, [&, j] {
      const double d = deltas[j];
      const Point zeta = c.boundary_point - d * normal + c.tangent_offset * d * tangent;
      ScalingStep s = make_scaling_step(dom, nm, zeta, static_cast<int>(j));
      const auto& k = *s.scaled.kernel();
      PointGeometry pg(k, bstar, 6);
      ExperimentRow row;
      row.j = static_cast<int>(j);
      row.delta = s.delta;
      row.eta = s.eta;
      row.tail = pg.tail();
      row.trusted = row.tail <= c.tail_tolerance;
      row.value = {pg.kernel_diagonal(), pg.volume(kf), pg.canonical_invariant(kf),
                   pg.length(x, kf), pg.hsc(x, kf), pg.ricci_curvature(x, kf)};
      return Out{std::move(row), std::move(s)};
    }));

  const auto all = scaling_quantities();
  SweepReport r;
  r.kind = "scaling";
  r.quantities = detail::selected(all, c.quantities);
  std::vector<std::size_t> pick;
  for (const auto& q : r.quantities) pick.push_back(std::find(all.begin(), all.end(), q) - all.begin());
  double base_res = 0.0, eta_res = 0.0, det_res = 0.0;
  for (auto& f : futs) {
    Out o = f.get();
    base_res = std::max(base_res, o.step.base_residual);
    eta_res = std::max(eta_res, o.step.eta_residual);
    det_res = std::max(det_res, o.step.det_t_residual);
    ExperimentRow row = o.row;
    row.value.clear();
    for (auto q : pick) {
      row.value.push_back(o.row.value[q]);
      row.target.push_back(targets[q]);
      row.error.push_back(error_against(o.row.value[q], targets[q]));
    }
    r.rows.push_back(std::move(row));
  }
  detail::fill_extrapolation(r, c);

  r.metadata = {{"kind", "scaling"},
                {"domain", to_string(c.domain)},
                {"dim", std::to_string(n)},
                {"delta_schedule", fmt(c.delta0) + " * " + fmt(c.ratio) + "^j, j < " + std::to_string(c.count)},
                {"tangent_offset", fmt(c.tangent_offset)},
                {"evaluation_point", "b* = ('0, -1) in scaled coordinates"},
                {"targets", "Siegel half-space closed-form kernel at b*"},
                {"seed", std::to_string(c.seed)}};
  for (std::size_t q = 0; q < r.quantities.size(); ++q) {
    r.metadata.push_back({"target_" + r.quantities[q], fmt(r.rows[0].target[q])});
    r.metadata.push_back({"error_model_" + r.quantities[q], "two-point Richardson, error ~ delta^" + fmt(c.order_for(r.quantities[q]))});
  }

  r.checks.push_back({"S(zeta) = b* at every step", base_res <= tol::map_inverse, "max residual " + fmt_short(base_res)});
  r.checks.push_back({"eta/delta = |grad r(p)| at every step", eta_res <= tol::map_inverse, "max residual " + fmt_short(eta_res)});
  r.checks.push_back({"det T = eta^(-(n+1)/2) at every step", det_res <= 1e-12, "max residual " + fmt_short(det_res)});
  bool trusted = true;
  for (const auto& row : r.rows) trusted = trusted && row.trusted;
  r.checks.push_back({"series tail below tolerance on every row", trusted, ""});
  const auto checked = detail::selected(r.quantities, c.checked_quantities);
  for (const auto& qn : checked) {
    const std::size_t q = std::find(r.quantities.begin(), r.quantities.end(), qn) - r.quantities.begin();
    if (c.check_decreasing) detail::add_decay_check(r, q, c, "(" + qn + ") ");
  }
  if (c.final_tolerance > 0.0) {
    for (const auto& qn : detail::selected(r.quantities, c.final_quantities)) {
      const std::size_t q = std::find(r.quantities.begin(), r.quantities.end(), qn) - r.quantities.begin();
      const auto& last = r.rows.back();
      r.checks.push_back({"(" + qn + ") final error within " + fmt_short(c.final_tolerance), last.error[q] <= c.final_tolerance,
                          "value " + fmt(last.value[q]) + " target " + fmt(last.target[q]) + " err " + fmt_short(last.error[q]) +
                              " (extrapolated err " + fmt_short(last.extrapolated_error[q]) + ")"});
    }
  }
  write_outputs(r, c.output);
  return r;
}

// ------------------------------------------------------------- moments

struct MomentRow {
  std::vector<int> alpha;
  double closed_form = 0.0;
  double quadrature = 0.0;
  double error = 0.0;
};

struct MomentReport {
  std::vector<MomentRow> rows;
  std::vector<Check> checks;
  bool ok() const { return all_passed(checks); }
};

inline MomentReport run_moments(const std::vector<double>& exponents, int max_degree, double threshold = tol::moment_quadrature) {
  ReinhardtSpec spec;
  spec.exponents = exponents;
  spec.validate();
  if (max_degree < 0) throw ArgumentError("moments: N must be non-negative");
  MomentReport r;
  double worst = 0.0;
  MomentTable::for_each_index(spec.dim(), max_degree, [&](const std::vector<int>& a) {
    MomentRow row;
    row.alpha = a;
    row.closed_form = reinhardt_moment(spec, a);
    row.quadrature = reinhardt_moment_quadrature(spec, a);
    row.error = error_against(row.closed_form, row.quadrature);
    worst = std::max(worst, row.error);
    r.rows.push_back(std::move(row));
  });
  r.checks.push_back({"closed form matches quadrature", worst <= threshold, "max rel err " + fmt_short(worst)});
  return r;
}

inline void write_csv(const MomentReport& r, std::ostream& os) {
  if (r.rows.empty()) return;
  for (std::size_t i = 0; i < r.rows[0].alpha.size(); ++i) os << "alpha_" << i + 1 << ',';
  os << "c_alpha,quadrature,rel_error\n";
  for (const auto& row : r.rows) {
    for (int a : row.alpha) os << a << ',';
    os << fmt(row.closed_form) << ',' << fmt(row.quadrature) << ',' << fmt(row.error) << '\n';
  }
}

}  // namespace kfuks::lab
