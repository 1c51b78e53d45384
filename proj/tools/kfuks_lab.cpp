// Experiment runner for the Kobayashi-Fuks library.

#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "kfuks/kfuks.hpp"

using namespace kfuks;

namespace {

int report(const std::vector<lab::Check>& checks) {
  for (const auto& c : checks) std::cout << c << '\n';
  return lab::all_passed(checks) ? 0 : 1;
}

KernelPtr kernel_from(const std::string& spec, int truncation, bool adaptive) {
  const auto colon = spec.find(':');
  if (colon == std::string::npos) throw ArgumentError("domain must look like ball:2 or ellipsoid:1,2");
  const std::string kind = spec.substr(0, colon), arg = spec.substr(colon + 1);
  if (kind == "ball") return ball_kernel(lab::parse_int(arg));
  if (kind == "polydisc") return polydisc_kernel(lab::parse_int(arg));
  if (kind == "siegel") return siegel_kernel(lab::parse_int(arg));
  if (kind == "ellipsoid") {
    ReinhardtSpec s;
    s.exponents = lab::parse_reals(arg);
    s.truncation = truncation;
    s.adaptive = adaptive;
    return reinhardt_kernel(s);
  }
  throw ArgumentError("unknown domain '" + kind + "'");
}

void print_matrix(const char* name, const CMatrix& m) {
  std::cout << name << ":\n";
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::cout << "  ";
    for (Eigen::Index j = 0; j < m.cols(); ++j) std::cout << lab::fmt(m(i, j).real()) << (m(i, j).imag() < 0 ? "" : "+") << lab::fmt(m(i, j).imag()) << "i  ";
    std::cout << '\n';
  }
}

void print_sweep(const lab::SweepReport& r) {
  std::cout << "j  delta";
  for (const auto& q : r.quantities) std::cout << "  " << q << "  " << q << "_extrap";
  std::cout << '\n';
  for (const auto& row : r.rows) {
    std::cout << row.j << "  " << lab::fmt_short(row.delta);
    for (std::size_t q = 0; q < r.quantities.size(); ++q)
      std::cout << "  " << lab::fmt(row.value[q]) << "  " << lab::fmt(row.extrapolated[q]);
    std::cout << (row.trusted ? "" : "  (untrusted)") << '\n';
  }
  std::cout << "targets:";
  for (std::size_t q = 0; q < r.quantities.size(); ++q) std::cout << "  " << r.quantities[q] << '=' << lab::fmt(r.rows[0].target[q]);
  std::cout << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kobayashi-Fuks metric experiments"};
  app.require_subcommand(1);

  int oracle_n = 2;
  int oracle_points = 25;
  auto* oracle = app.add_subcommand("ball-oracle", "closed forms on the unit ball");
  oracle->add_option("--n", oracle_n, "dimension (1..3)")->required();
  oracle->add_option("--points", oracle_points, "number of seeded points");

  int poly_n = 2;
  auto* poly = app.add_subcommand("polydisc-oracle", "Kobayashi-Fuks metric of the polydisc");
  poly->add_option("--n", poly_n, "dimension")->required();

  std::string asym_cfg;
  auto* asym = app.add_subcommand("asymptotics", "boundary asymptotics sweep");
  asym->add_option("--config", asym_cfg, "config file")->required()->check(CLI::ExistingFile);

  std::string scal_cfg;
  auto* scal = app.add_subcommand("scaling", "scaling convergence sweep");
  scal->add_option("--config", scal_cfg, "config file")->required()->check(CLI::ExistingFile);

  std::string mom_p;
  int mom_n = 6;
  std::string mom_out;
  auto* mom = app.add_subcommand("moments", "Reinhardt moments against quadrature");
  mom->add_option("--p", mom_p, "exponents, e.g. 1,2")->required();
  mom->add_option("--N", mom_n, "largest |alpha|");
  mom->add_option("--output", mom_out, "CSV path");

  std::string ev_domain, ev_point, ev_vector;
  int ev_trunc = 40;
  bool ev_adaptive = false;
  auto* ev = app.add_subcommand("eval", "metric data at a point");
  ev->add_option("--domain", ev_domain, "ball:N, polydisc:N, siegel:N or ellipsoid:p1,p2,...")->required();
  ev->add_option("--point", ev_point, "comma-separated complex coordinates, e.g. 0.1+0.2i,0.3")->required();
  ev->add_option("--vector", ev_vector, "tangent vector for curvatures");
  ev->add_option("--truncation", ev_trunc, "series truncation for ellipsoids");
  ev->add_flag("--adaptive", ev_adaptive, "extend the series until the tail estimate is small");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*oracle) {
      const auto r = lab::run_ball_oracle(oracle_n, oracle_points);
      return report(r.checks);
    }
    if (*poly) return report(lab::run_polydisc_oracle(poly_n).checks);
    if (*asym) {
      const auto r = lab::run_asymptotics(lab::load_config(asym_cfg));
      print_sweep(r);
      return report(r.checks);
    }
    if (*scal) {
      const auto r = lab::run_scaling(lab::load_config(scal_cfg));
      print_sweep(r);
      return report(r.checks);
    }
    if (*mom) {
      const auto r = lab::run_moments(lab::parse_reals(mom_p), mom_n);
      if (!mom_out.empty()) {
        std::ofstream os(mom_out);
        lab::write_csv(r, os);
      } else {
        lab::write_csv(r, std::cout);
      }
      return report(r.checks);
    }
    if (*ev) {
      const auto k = kernel_from(ev_domain, ev_trunc, ev_adaptive);
      const Point z = lab::parse_point(ev_point);
      PointGeometry pg(*k, z, 6);
      std::cout << "K = " << lab::fmt(pg.kernel_diagonal()) << "\n";
      if (pg.tail() > 0.0) std::cout << "series tail = " << lab::fmt(pg.tail()) << "\n";
      print_matrix("G_b", pg.metric(MetricKind::bergman).g);
      print_matrix("G_kf", pg.metric(MetricKind::kobayashi_fuks).g);
      std::cout << "beta_b = " << lab::fmt(pg.canonical_invariant(MetricKind::bergman)) << "\n";
      std::cout << "beta_kf = " << lab::fmt(pg.canonical_invariant(MetricKind::kobayashi_fuks)) << "\n";
      if (!ev_vector.empty()) {
        const Point x = lab::parse_point(ev_vector);
        for (auto kind : {MetricKind::bergman, MetricKind::kobayashi_fuks}) {
          const auto tag = to_string(kind);
          std::cout << "ds_" << tag << " = " << lab::fmt(pg.length(x, kind)) << "\n";
          std::cout << "R_" << tag << " = " << lab::fmt(pg.hsc(x, kind)) << "\n";
          std::cout << "Ric_" << tag << " = " << lab::fmt(pg.ricci_curvature(x, kind)) << "\n";
        }
      }
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
