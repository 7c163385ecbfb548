#pragma once

// Experiment runner: flat key=value configurations, named presets for the
// convergence tables, single runs, refinement studies and CSV/JSON
// reports.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cpquad/errors.hpp"
#include "cpquad/field.hpp"
#include "cpquad/geometry.hpp"
#include "cpquad/integrate.hpp"
#include "cpquad/jacobian.hpp"
#include "cpquad/kernels.hpp"
#include "cpquad/vec.hpp"

namespace cpquad {

inline constexpr std::string_view version = "1.0.0";

using KeyValues = std::map<std::string, std::string>;

/// Fully resolved experiment description.
struct RunConfig {
  std::string preset;
  std::string shape = "torus";  // arc torus sphere quarter_sphere three_quarter_sphere circle3d coil segment
  double R = 0.75;              // arc/sphere radius, torus centre-to-tube distance
  double r = 0.25;              // torus tube radius
  double alpha0 = 0.0, alpha1 = pi, phi = 0.0;
  double rc = 0.5;  // circle3d
  double rh = 0.75, pitch = 0.25, rho = 0.2, windings = 10.0, t0 = 0.0, t1 = 4.0 * pi;
  Vec3 p0{-0.5, 0.0, 0.0}, p1{0.5, 0.0, 0.0};  // segment
  std::vector<double> lower, upper;             // empty: automatic box
  std::vector<int> n{64};
  double eps = 0.2;
  JacobianScheme scheme = JacobianScheme::Central2;
  KernelType kernel = KernelType::Cosine;
  std::string integrand = "one";
  std::string method = "sigma";  // codim 2: sigma | corrected
  std::optional<double> reference;
  // Execution only; not part of the echo.
  int threads = 1;
  std::string out;
  std::string format = "csv";
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError("'" + key + "': expected a number, got '" + text + "'");
  }
  if (used != text.size() || !std::isfinite(v))
    throw ConfigError("'" + key + "': expected a finite number, got '" + text + "'");
  return v;
}

inline int parse_int(const std::string& key, const std::string& text) {
  const double v = parse_double(key, text);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw ConfigError("'" + key + "': expected an integer, got '" + text + "'");
  return static_cast<int>(v);
}

inline std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

inline std::vector<double> parse_doubles(const std::string& key, const std::string& text) {
  std::vector<double> out;
  for (const auto& s : split_list(text)) out.push_back(parse_double(key, s));
  if (out.empty()) throw ConfigError("'" + key + "': empty list");
  return out;
}

template <class T>
std::string join(const std::vector<T>& xs) {
  std::string s;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) s += ',';
    if constexpr (std::is_same_v<T, int>)
      s += std::to_string(xs[i]);
    else
      s += fmt17(xs[i]);
  }
  return s;
}

inline Vec3 parse_point(const std::string& key, const std::string& text) {
  const auto v = parse_doubles(key, text);
  if (v.size() != 3) throw ConfigError("'" + key + "': expected three comma-separated coordinates");
  return {v[0], v[1], v[2]};
}

inline const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "preset", "shape",   "R",       "r",      "alpha0",  "alpha1",    "phi",       "rc",
      "rh",     "b",       "rho",     "m",      "t0",      "t1",        "p0",        "p1",
      "lower",  "upper",   "n",       "epsilon", "scheme", "kernel",    "integrand", "method",
      "reference", "codim", "threads", "out",   "format"};
  return keys;
}

}  // namespace detail

/// Key-value settings of the named experiments.
inline KeyValues preset_values(std::string_view name) {
  if (name == "table1")
    return {{"shape", "arc"}, {"R", "0.75"}, {"alpha0", "0"}, {"alpha1", "3.141592653589793"}, {"phi", "0"},
            {"epsilon", "0.2"}, {"kernel", "cos"}, {"scheme", "central2"}, {"n", "64,128,256,512,1024,2048,4096,8192"}};
  if (name == "table2")
    return {{"shape", "arc"}, {"R", "0.75"}, {"alpha0", "0"}, {"alpha1", "3.141592653589793"}, {"phi", "0.3"},
            {"epsilon", "0.2"}, {"kernel", "cos"}, {"scheme", "central2"}, {"n", "64,128,256,512,1024,2048,4096,8192"}};
  if (name == "table3")
    return {{"shape", "torus"}, {"R", "0.75"}, {"r", "0.25"}, {"epsilon", "0.2"},
            {"kernel", "cos"},  {"scheme", "biased3"}, {"n", "32,64,128,256,512"}};
  if (name == "table4")
    return {{"shape", "quarter_sphere"}, {"R", "0.75"}, {"epsilon", "0.2"},
            {"kernel", "cos"}, {"scheme", "central2"}, {"n", "32,64,128,256,512"}};
  if (name == "table5")
    return {{"shape", "three_quarter_sphere"}, {"R", "0.75"}, {"epsilon", "0.2"},
            {"kernel", "cos"}, {"scheme", "onesided2"}, {"n", "32,64,128,256,512"}};
  if (name == "table6")
    return {{"shape", "circle3d"}, {"rc", "0.5"}, {"epsilon", "0.1"}, {"kernel", "k11"},
            {"scheme", "central2"}, {"n", "60,120,240,480"}};
  if (name == "table7")
    return {{"shape", "coil"}, {"rh", "0.75"}, {"b", "0.25"}, {"rho", "0.2"}, {"m", "10"}, {"t0", "0"},
            {"t1", "12.566370614359172"}, {"epsilon", "0.1"}, {"kernel", "k11"}, {"scheme", "central2"},
            {"n", "60,120,240,480"}};
  throw ConfigError("unknown preset '" + std::string(name) + "' (expected table1 ... table7)");
}

/// Flat `key = value` text; '#' starts a comment.
inline KeyValues parse_config_text(std::string_view text) {
  KeyValues kv;
  std::stringstream ss{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(ss, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key = value");
    kv[detail::trim(t.substr(0, eq))] = detail::trim(t.substr(eq + 1));
  }
  return kv;
}

inline KeyValues read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

/// Builds a configuration from layered settings: the preset named by
/// the merged `preset` key first, then the merged settings on top.
inline RunConfig make_config(const KeyValues& settings) {
  for (const auto& [k, v] : settings) {
    const auto& keys = detail::known_keys();
    if (std::find(keys.begin(), keys.end(), k) == keys.end()) throw ConfigError("unknown key '" + k + "'");
  }
  KeyValues kv;
  RunConfig c;
  if (auto it = settings.find("preset"); it != settings.end() && !it->second.empty()) {
    kv = preset_values(it->second);
    c.preset = it->second;
  }
  for (const auto& [k, v] : settings) kv[k] = v;

  auto num = [&](const char* key, double& dst) {
    if (auto it = kv.find(key); it != kv.end()) dst = detail::parse_double(key, it->second);
  };
  if (auto it = kv.find("shape"); it != kv.end()) c.shape = it->second;
  num("R", c.R);
  num("r", c.r);
  num("alpha0", c.alpha0);
  num("alpha1", c.alpha1);
  num("phi", c.phi);
  num("rc", c.rc);
  num("rh", c.rh);
  num("b", c.pitch);
  num("rho", c.rho);
  num("m", c.windings);
  num("t0", c.t0);
  num("t1", c.t1);
  num("epsilon", c.eps);
  if (auto it = kv.find("p0"); it != kv.end()) c.p0 = detail::parse_point("p0", it->second);
  if (auto it = kv.find("p1"); it != kv.end()) c.p1 = detail::parse_point("p1", it->second);
  if (auto it = kv.find("lower"); it != kv.end()) c.lower = detail::parse_doubles("lower", it->second);
  if (auto it = kv.find("upper"); it != kv.end()) c.upper = detail::parse_doubles("upper", it->second);
  if (auto it = kv.find("n"); it != kv.end()) {
    c.n.clear();
    for (const auto& s : detail::split_list(it->second)) c.n.push_back(detail::parse_int("n", s));
  }
  if (auto it = kv.find("scheme"); it != kv.end()) c.scheme = parse_scheme(it->second);
  if (auto it = kv.find("kernel"); it != kv.end()) c.kernel = parse_kernel(it->second);
  if (auto it = kv.find("integrand"); it != kv.end()) c.integrand = it->second;
  if (auto it = kv.find("method"); it != kv.end()) c.method = it->second;
  if (auto it = kv.find("reference"); it != kv.end()) c.reference = detail::parse_double("reference", it->second);
  if (auto it = kv.find("threads"); it != kv.end()) c.threads = detail::parse_int("threads", it->second);
  if (auto it = kv.find("out"); it != kv.end()) c.out = it->second;
  if (auto it = kv.find("format"); it != kv.end()) c.format = it->second;

  static const std::vector<std::string> shapes = {"arc",      "torus", "sphere",  "quarter_sphere",
                                                  "three_quarter_sphere", "circle3d", "coil", "segment"};
  if (std::find(shapes.begin(), shapes.end(), c.shape) == shapes.end())
    throw ConfigError("unknown shape '" + c.shape + "'");
  const bool curve3d = c.shape == "circle3d" || c.shape == "coil" || c.shape == "segment";
  if (auto it = kv.find("codim"); it != kv.end()) {
    const int codim = detail::parse_int("codim", it->second);
    if (codim != (curve3d ? 2 : 1))
      throw ConfigError("codim " + it->second + " does not match shape '" + c.shape + "'");
  }
  if (c.n.empty()) throw ConfigError("'n': at least one grid size is required");
  for (std::size_t i = 1; i < c.n.size(); ++i)
    if (c.n[i] != 2 * c.n[i - 1]) throw ConfigError("'n': each grid size must double the previous one");
  if (!(c.eps > 0.0)) throw ConfigError("'epsilon' must be positive");
  if (curve3d && c.kernel != KernelType::K11) throw ConfigError("curves in 3D need kernel k11");
  if (c.method != "sigma" && c.method != "corrected") throw ConfigError("'method' must be sigma or corrected");
  if (c.threads < 1) throw ConfigError("'threads' must be at least 1");
  if (c.format != "csv" && c.format != "json") throw ConfigError("'format' must be csv or json");
  if (c.lower.empty() != c.upper.empty()) throw ConfigError("'lower' and 'upper' must be given together");
  static const std::vector<std::string> integrands = {"one", "x", "y", "z", "x2", "y2", "z2", "r2"};
  if (std::find(integrands.begin(), integrands.end(), c.integrand) == integrands.end())
    throw ConfigError("unknown integrand '" + c.integrand + "' (one, x, y, z, x2, y2, z2, r2)");
  if (c.shape == "arc" && c.integrand.find('z') != std::string::npos)
    throw ConfigError("integrand '" + c.integrand + "' needs a 3D shape");
  return c;
}

inline RunConfig make_preset(std::string_view name) { return make_config({{"preset", std::string(name)}}); }

inline bool is_codim2(const RunConfig& c) { return c.shape == "circle3d" || c.shape == "coil" || c.shape == "segment"; }
inline int config_dim(const RunConfig& c) { return c.shape == "arc" ? 2 : 3; }

/// Canonical key=value listing; feeding it back reproduces the run.
inline KeyValues config_echo(const RunConfig& c) {
  using detail::fmt17;
  KeyValues kv;
  if (!c.preset.empty()) kv["preset"] = c.preset;
  kv["shape"] = c.shape;
  kv["codim"] = is_codim2(c) ? "2" : "1";
  if (c.shape == "arc") {
    kv["R"] = fmt17(c.R);
    kv["alpha0"] = fmt17(c.alpha0);
    kv["alpha1"] = fmt17(c.alpha1);
    kv["phi"] = fmt17(c.phi);
  } else if (c.shape == "torus") {
    kv["R"] = fmt17(c.R);
    kv["r"] = fmt17(c.r);
  } else if (c.shape.find("sphere") != std::string::npos) {
    kv["R"] = fmt17(c.R);
  } else if (c.shape == "circle3d") {
    kv["rc"] = fmt17(c.rc);
  } else if (c.shape == "coil") {
    kv["rh"] = fmt17(c.rh);
    kv["b"] = fmt17(c.pitch);
    kv["rho"] = fmt17(c.rho);
    kv["m"] = fmt17(c.windings);
    kv["t0"] = fmt17(c.t0);
    kv["t1"] = fmt17(c.t1);
  } else if (c.shape == "segment") {
    kv["p0"] = detail::join(std::vector<double>(c.p0.begin(), c.p0.end()));
    kv["p1"] = detail::join(std::vector<double>(c.p1.begin(), c.p1.end()));
  }
  if (!c.lower.empty()) {
    kv["lower"] = detail::join(c.lower);
    kv["upper"] = detail::join(c.upper);
  }
  kv["n"] = detail::join(c.n);
  kv["epsilon"] = fmt17(c.eps);
  kv["scheme"] = std::string(scheme_name(c.scheme));
  kv["kernel"] = std::string(kernel_name(c.kernel));
  kv["integrand"] = c.integrand;
  if (is_codim2(c)) kv["method"] = c.method;
  if (c.reference) kv["reference"] = fmt17(*c.reference);
  return kv;
}

namespace detail {

inline ShapeSpec build_shape(const RunConfig& c) {
  if (c.shape == "arc") return CircleArc2D(c.R, c.alpha0, c.alpha1, c.phi);
  if (c.shape == "torus") return Torus(c.R, c.r);
  if (c.shape == "sphere") return SphereSector(c.R, SectorFraction::Full);
  if (c.shape == "quarter_sphere") return SphereSector(c.R, SectorFraction::Quarter);
  if (c.shape == "three_quarter_sphere") return SphereSector(c.R, SectorFraction::ThreeQuarter);
  if (c.shape == "circle3d") return Circle3D(c.rc);
  if (c.shape == "coil") return HelixCoil(c.rh, c.pitch, c.rho, c.windings, c.t0, c.t1);
  return Segment3D(c.p0, c.p1);
}

}  // namespace detail

inline ShapeSpec make_shape(const RunConfig& c) {
  try {
    return detail::build_shape(c);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}
/// Cube holding the shape. Shapes centred at the origin get
/// [-(extent + 0.5), extent + 0.5]^dim; curves get their bounding box
/// padded by 0.35 and grown to a cube.
inline std::pair<std::vector<double>, std::vector<double>> domain_box(const RunConfig& c, const ShapeSpec& shape) {
  const int dim = config_dim(c);
  auto broadcast = [&](const std::vector<double>& v, const char* key) {
    if (v.size() == 1) return std::vector<double>(dim, v[0]);
    if (static_cast<int>(v.size()) != dim)
      throw ConfigError(std::string("'") + key + "': expected 1 or " + std::to_string(dim) + " values");
    return v;
  };
  if (!c.lower.empty()) return {broadcast(c.lower, "lower"), broadcast(c.upper, "upper")};
  double extent = 0.0;
  if (c.shape == "arc" || c.shape.find("sphere") != std::string::npos) extent = c.R;
  if (c.shape == "torus") extent = c.R;
  if (c.shape == "circle3d") extent = c.rc;
  if (extent > 0.0) return {std::vector<double>(dim, -(extent + 0.5)), std::vector<double>(dim, extent + 0.5)};
  Vec3 lo, hi;
  if (const auto* coil = std::get_if<HelixCoil>(&shape)) {
    std::tie(lo, hi) = coil->bounding_box();
  } else {
    for (int k = 0; k < 3; ++k) {
      lo[k] = std::min(c.p0[k], c.p1[k]);
      hi[k] = std::max(c.p0[k], c.p1[k]);
    }
  }
  double half = 0.0;
  for (int k = 0; k < 3; ++k) half = std::max(half, 0.5 * (hi[k] - lo[k]));
  half += 0.35;
  std::vector<double> lower(3), upper(3);
  for (int k = 0; k < 3; ++k) {
    const double mid = 0.5 * (lo[k] + hi[k]);
    lower[k] = mid - half;
    upper[k] = mid + half;
  }
  return {lower, upper};
}

template <int D>
Integrand<D> make_integrand(const std::string& name) {
  Integrand<D> f;
  f.name = name;
  if (name == "one") return f;
  auto axis = [](char ch) { return ch - 'x'; };
  if (name.size() == 1) {
    const int k = axis(name[0]);
    f.fn = [k](const Vec<D>& p) { return p[k]; };
  } else if (name == "r2") {
    f.fn = [](const Vec<D>& p) { return dot(p, p); };
  } else {
    const int k = axis(name[0]);
    f.fn = [k](const Vec<D>& p) { return p[k] * p[k]; };
  }
  if (name != "r2" && axis(name[0]) >= D) throw ConfigError("integrand '" + name + "' needs a 3D shape");
  return f;
}

struct CaseResult {
  int n = 0;
  IntegralResult result;
  double reference = 0.0;
  double seconds = 0.0;
};

namespace detail {

template <int D>
Grid<D> make_grid(const std::vector<double>& lower, const std::vector<double>& upper, int n) {
  Vec<D> lo, hi;
  for (int k = 0; k < D; ++k) {
    lo[k] = lower[k];
    hi[k] = upper[k];
  }
  return Grid<D>::cube(lo, hi, n);
}

}  // namespace detail

/// Reference value: the configured override, else the shape's exact
/// measure (constant-one integrand only).
inline double reference_value(const RunConfig& c, const ShapeSpec& shape) {
  if (c.reference) return *c.reference;
  if (c.integrand != "one") throw ConfigError("integrand '" + c.integrand + "' needs an explicit 'reference'");
  return reference_measure(shape);
}

/// Sample, extract the band and integrate on an n^dim grid. The field is
/// streamed through in axis-0 slabs, so memory follows the band size.
inline CaseResult run_case(const RunConfig& c, int n) {
  const ShapeSpec shape = make_shape(c);
  const auto [lower, upper] = domain_box(c, shape);
  const auto start = std::chrono::steady_clock::now();
  CaseResult out;
  out.n = n;
  out.reference = reference_value(c, shape);
  IntegrateOptions opt;
  opt.threads = c.threads;
  opt.max_curvature = max_curvature(shape);
  std::visit(
      [&](const auto& s) {
        using S = std::decay_t<decltype(s)>;
        constexpr int D = S::dim;
        StreamSpec<D> spec;
        spec.kernel = Kernel(c.kernel, c.eps);
        spec.scheme = c.scheme;
        spec.options = opt;
        if constexpr (S::codim == 2) {
          spec.formulation = c.method == "corrected" ? Formulation::Codim2Corrected : Formulation::Codim2;
          spec.endpoints = curve_endpoints(shape);
        } else {
          spec.formulation = Formulation::Codim1;
        }
        out.result = integrate_streamed(detail::make_grid<D>(lower, upper, n), s, make_integrand<D>(c.integrand), spec);
      },
      shape);
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return out;
}

struct ReportRow {
  int n = 0;
  double value = 0.0;
  double relative_error = 0.0;
  std::optional<double> order;
  std::size_t band_nodes = 0;
  double seconds = 0.0;  // not serialised unless asked for

  bool operator==(const ReportRow& o) const {
    return n == o.n && value == o.value && relative_error == o.relative_error && order == o.order &&
           band_nodes == o.band_nodes;
  }
};

struct ConvergenceReport {
  std::string version{cpquad::version};
  KeyValues config;
  double reference = 0.0;
  std::vector<ReportRow> rows;
  bool valid = true;
  std::string error;

  bool operator==(const ConvergenceReport& o) const {
    return version == o.version && config == o.config && reference == o.reference && rows == o.rows &&
           valid == o.valid && error == o.error;
  }
};

/// log2(previous error / error); empty for the first row or when either
/// error is zero.
inline void fill_orders(std::vector<ReportRow>& rows) {
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].order.reset();
    if (i == 0) continue;
    const double a = rows[i - 1].relative_error, b = rows[i].relative_error;
    if (a > 0.0 && b > 0.0) rows[i].order = std::log2(a / b);
  }
}

/// Runs every grid size in order. A numerical failure stops the study;
/// the rows done so far are kept and the report is marked invalid.
/// Configuration errors propagate.
template <class Progress>
ConvergenceReport convergence_study(const RunConfig& c, Progress&& progress) {
  ConvergenceReport rep;
  rep.config = config_echo(c);
  rep.reference = reference_value(c, make_shape(c));
  for (int n : c.n) {
    try {
      const CaseResult cr = run_case(c, n);
      ReportRow row;
      row.n = n;
      row.value = cr.result.value;
      row.relative_error = std::abs(cr.result.value - cr.reference) / std::abs(cr.reference);
      row.band_nodes = cr.result.band_nodes;
      row.seconds = cr.seconds;
      rep.rows.push_back(row);
      fill_orders(rep.rows);
      progress(rep.rows.back());
    } catch (const NumericalError& e) {
      rep.valid = false;
      rep.error = "n=" + std::to_string(n) + ": " + e.what();
      break;
    }
  }
  fill_orders(rep.rows);
  return rep;
}

inline ConvergenceReport convergence_study(const RunConfig& c) {
  return convergence_study(c, [](const ReportRow&) {});
}

inline std::string report_csv(const ConvergenceReport& rep) {
  std::string s = "n,value,relative_error,order\n";
  for (const auto& row : rep.rows) {
    s += std::to_string(row.n) + ',' + detail::fmt17(row.value) + ',' + detail::fmt17(row.relative_error) + ',';
    if (row.order) s += detail::fmt17(*row.order);
    s += '\n';
  }
  return s;
}

inline nlohmann::ordered_json report_to_json(const ConvergenceReport& rep, bool timings = false) {
  nlohmann::ordered_json j;
  j["version"] = rep.version;
  j["config"] = nlohmann::ordered_json(rep.config);
  j["reference"] = rep.reference;
  j["valid"] = rep.valid;
  if (!rep.error.empty()) j["error"] = rep.error;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : rep.rows) {
    nlohmann::ordered_json r;
    r["n"] = row.n;
    r["value"] = row.value;
    r["relative_error"] = row.relative_error;
    r["order"] = row.order ? nlohmann::ordered_json(*row.order) : nlohmann::ordered_json(nullptr);
    r["band_nodes"] = row.band_nodes;
    if (timings) r["seconds"] = row.seconds;
    j["rows"].push_back(r);
  }
  return j;
}

inline std::string report_json(const ConvergenceReport& rep, bool timings = false) {
  return report_to_json(rep, timings).dump(2) + "\n";
}

inline ConvergenceReport parse_report_json(std::string_view text) {
  ConvergenceReport rep;
  try {
    const auto j = nlohmann::json::parse(text);
    rep.version = j.at("version").get<std::string>();
    rep.config = j.at("config").get<KeyValues>();
    rep.reference = j.at("reference").get<double>();
    rep.valid = j.at("valid").get<bool>();
    rep.error = j.value("error", std::string{});
    for (const auto& r : j.at("rows")) {
      ReportRow row;
      row.n = r.at("n").get<int>();
      row.value = r.at("value").get<double>();
      row.relative_error = r.at("relative_error").get<double>();
      if (!r.at("order").is_null()) row.order = r.at("order").get<double>();
      row.band_nodes = r.at("band_nodes").get<std::size_t>();
      row.seconds = r.value("seconds", 0.0);
      rep.rows.push_back(row);
    }
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed report: ") + e.what());
  }
  return rep;
}

inline std::string render_report(const ConvergenceReport& rep, std::string_view format, bool timings = false) {
  if (format == "csv") return report_csv(rep);
  if (format == "json") return report_json(rep, timings);
  throw ConfigError("unknown format '" + std::string(format) + "'");
}

/// Writes the report to `path` ("" or "-" for stdout).
inline void emit_report(const ConvergenceReport& rep, std::string_view format, const std::string& path,
                        std::ostream& stdout_stream, bool timings = false) {
  const std::string text = render_report(rep, format, timings);
  if (path.empty() || path == "-") {
    stdout_stream << text;
    stdout_stream.flush();
    return;
  }
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + path + "' for writing");
  os << text;
  if (!os.flush()) throw std::runtime_error("write to '" + path + "' failed");
}

}  // namespace cpquad
