#pragma once

// Experiment configuration: line-based `key = value`, `#` comments.

#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "kfuks/errors.hpp"
#include "kfuks/maps.hpp"
#include "kfuks/reinhardt.hpp"
#include "kfuks/scaling.hpp"

namespace kfuks::lab {

enum class DomainKind { ball, polydisc, siegel, ellipsoid };
enum class DirectionKind { normal, tangent, vector };

inline std::string trim(std::string s) {
  auto sp = [](unsigned char c) { return std::isspace(c) != 0; };
  while (!s.empty() && sp(s.back())) s.pop_back();
  std::size_t i = 0;
  while (i < s.size() && sp(s[i])) ++i;
  return s.substr(i);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

inline double parse_real(const std::string& text) {
  const std::string s = trim(text);
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ArgumentError("not a number: '" + text + "'");
  }
  if (used != s.size()) throw ArgumentError("not a number: '" + text + "'");
  return v;
}

inline int parse_int(const std::string& text) {
  const double v = parse_real(text);
  if (v != std::floor(v)) throw ArgumentError("not an integer: '" + text + "'");
  return static_cast<int>(v);
}

/// Parses "a", "bi", "a+bi", "a-bi", "i", "-i".
inline cplx parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += c;
  if (s.empty()) throw ArgumentError("empty complex number");
  if (s.back() != 'i') return parse_real(s);
  s.pop_back();
  std::size_t cut = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      cut = k;
      break;
    }
  auto imag_part = [&](const std::string& t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    return parse_real(t);
  };
  if (cut == std::string::npos) return {0.0, imag_part(s)};
  return {parse_real(s.substr(0, cut)), imag_part(s.substr(cut))};
}

inline Point parse_point(const std::string& text) {
  const auto parts = split(text, ',');
  Point p(static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) p(i) = parse_complex(parts[i]);
  return p;
}

inline std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> v;
  for (const auto& s : split(text, ',')) v.push_back(parse_real(s));
  return v;
}

inline bool parse_bool(const std::string& text) {
  const std::string s = trim(text);
  if (s == "true" || s == "yes" || s == "1" || s == "on") return true;
  if (s == "false" || s == "no" || s == "0" || s == "off") return false;
  throw ArgumentError("not a boolean: '" + text + "'");
}

struct ExperimentConfig {
  DomainKind domain = DomainKind::ball;
  int dim = 2;
  std::vector<double> exponents;  // ellipsoid
  int truncation = 40;
  bool adaptive = true;
  double tail_tolerance = tol::series_tail;
  int max_truncation = 20000;
  double uniqueness_radius = 0.0;  // 0: domain default

  Point boundary_point;
  DirectionKind direction = DirectionKind::tangent;
  Point vector;  // explicit X when direction = vector

  double delta0 = 0.1;
  double ratio = 0.5;
  int count = 8;
  double tangent_offset = 0.0;  // scaling: zeta^j offset by offset * delta_j along a tangent direction

  std::vector<std::string> quantities;  // empty: all
  std::string output;

  // error model and assertions
  double extrapolation_order = 1.0;
  std::map<std::string, double> order_overrides;  // extrapolation_order_<q>
  double raw_check_delta = 0.0;                   // 0: last delta of the schedule
  double raw_tolerance = 0.01;
  double extrapolated_tolerance = 1e-6;            // <= 0 disables
  bool check_decreasing = true;
  double monotone_slack = 0.05;
  double decay_floor = 1e-11;
  double final_tolerance = 0.0;                    // scaling: final relative error bound, <= 0 disables
  std::vector<std::string> final_quantities;       // scaling: quantities held to final_tolerance
  std::vector<std::string> checked_quantities;     // quantities whose assertions count; empty: all recorded
  unsigned seed = 12345;

  std::vector<double> schedule() const {
    std::vector<double> d;
    double v = delta0;
    for (int j = 0; j < count; ++j, v *= ratio) d.push_back(v);
    return d;
  }

  double order_for(const std::string& q) const {
    auto it = order_overrides.find(q);
    return it == order_overrides.end() ? extrapolation_order : it->second;
  }

  ReinhardtSpec reinhardt_spec() const {
    ReinhardtSpec s;
    s.exponents = exponents;
    s.truncation = truncation;
    s.adaptive = adaptive;
    s.tail_tolerance = tail_tolerance;
    s.max_truncation = max_truncation;
    return s;
  }

  void validate() const {
    if (!(ratio > 0.0 && ratio < 1.0)) throw ArgumentError("config: ratio must lie in (0, 1)");
    if (count < 1) throw ArgumentError("config: count must be positive");
    if (!(delta0 > 0.0)) throw ArgumentError("config: delta0 must be positive");
    if (domain == DomainKind::ellipsoid) {
      if (exponents.empty()) throw ArgumentError("config: ellipsoid needs exponents");
      reinhardt_spec().validate();
    } else if (dim < 1) {
      throw ArgumentError("config: dim must be positive");
    }
    const int n = domain == DomainKind::ellipsoid ? static_cast<int>(exponents.size()) : dim;
    if (boundary_point.size() != 0 && boundary_point.size() != n)
      throw ArgumentError("config: boundary_point has the wrong dimension");
    if (direction == DirectionKind::vector && vector.size() != n)
      throw ArgumentError("config: vector has the wrong dimension");
  }

  int n() const { return domain == DomainKind::ellipsoid ? static_cast<int>(exponents.size()) : dim; }
};

inline DomainKind parse_domain_kind(const std::string& s) {
  if (s == "ball") return DomainKind::ball;
  if (s == "polydisc") return DomainKind::polydisc;
  if (s == "siegel") return DomainKind::siegel;
  if (s == "ellipsoid") return DomainKind::ellipsoid;
  throw ArgumentError("unknown domain '" + s + "'");
}

inline std::string to_string(DomainKind d) {
  switch (d) {
    case DomainKind::ball: return "ball";
    case DomainKind::polydisc: return "polydisc";
    case DomainKind::siegel: return "siegel";
    case DomainKind::ellipsoid: return "ellipsoid";
  }
  return "?";
}

inline ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig c;
  std::string line;
  int lineno = 0;
  std::set<std::string> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ArgumentError("config line " + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!seen.insert(key).second) throw ArgumentError("config line " + std::to_string(lineno) + ": duplicate key " + key);
    try {
      if (key == "domain") c.domain = parse_domain_kind(val);
      else if (key == "dim") c.dim = parse_int(val);
      else if (key == "exponents") c.exponents = parse_reals(val);
      else if (key == "truncation") c.truncation = parse_int(val);
      else if (key == "adaptive") c.adaptive = parse_bool(val);
      else if (key == "tail_tolerance") c.tail_tolerance = parse_real(val);
      else if (key == "max_truncation") c.max_truncation = parse_int(val);
      else if (key == "uniqueness_radius") c.uniqueness_radius = parse_real(val);
      else if (key == "boundary_point") c.boundary_point = parse_point(val);
      else if (key == "direction") {
        if (val == "normal") c.direction = DirectionKind::normal;
        else if (val == "tangent") c.direction = DirectionKind::tangent;
        else if (val == "vector") c.direction = DirectionKind::vector;
        else throw ArgumentError("direction must be normal, tangent or vector");
      } else if (key == "vector") c.vector = parse_point(val);
      else if (key == "delta0") c.delta0 = parse_real(val);
      else if (key == "ratio") c.ratio = parse_real(val);
      else if (key == "count") c.count = parse_int(val);
      else if (key == "tangent_offset") c.tangent_offset = parse_real(val);
      else if (key == "quantities") c.quantities = split(val, ',');
      else if (key == "output") c.output = val;
      else if (key == "extrapolation_order") c.extrapolation_order = parse_real(val);
      else if (key.rfind("extrapolation_order_", 0) == 0) c.order_overrides[key.substr(20)] = parse_real(val);
      else if (key == "raw_check_delta") c.raw_check_delta = parse_real(val);
      else if (key == "raw_tolerance") c.raw_tolerance = parse_real(val);
      else if (key == "extrapolated_tolerance") c.extrapolated_tolerance = parse_real(val);
      else if (key == "check_decreasing") c.check_decreasing = parse_bool(val);
      else if (key == "monotone_slack") c.monotone_slack = parse_real(val);
      else if (key == "decay_floor") c.decay_floor = parse_real(val);
      else if (key == "final_tolerance") c.final_tolerance = parse_real(val);
      else if (key == "final_quantities") c.final_quantities = split(val, ',');
      else if (key == "checked_quantities") c.checked_quantities = split(val, ',');
      else if (key == "seed") c.seed = static_cast<unsigned>(parse_int(val));
      else throw ArgumentError("unknown key '" + key + "'");
    } catch (const ArgumentError& e) {
      throw ArgumentError("config line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  c.validate();
  return c;
}

inline ExperimentConfig parse_config_string(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open config file '" + path + "'");
  return parse_config(in);
}

/// Domain model described by a config (kernel included).
inline DomainModel make_domain(const ExperimentConfig& c) {
  const double r = c.uniqueness_radius;
  switch (c.domain) {
    case DomainKind::ball: return r > 0 ? ball_domain(c.dim, r) : ball_domain(c.dim);
    case DomainKind::siegel: return r > 0 ? siegel_domain(c.dim, r) : siegel_domain(c.dim);
    case DomainKind::ellipsoid: return r > 0 ? ellipsoid_domain(c.reinhardt_spec(), r) : ellipsoid_domain(c.reinhardt_spec());
    case DomainKind::polydisc:
      throw ArgumentError("polydisc has no smooth strictly pseudoconvex boundary; use it with the oracle or eval only");
  }
  throw ArgumentError("unknown domain");
}

}  // namespace kfuks::lab
