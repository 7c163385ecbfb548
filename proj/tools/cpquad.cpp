// cpquad: run the closest-point quadrature experiments from the command line.
//
//   cpquad run table3
//   cpquad run --shape torus --R 0.75 --r 0.25 --n 128 --epsilon 0.2 --scheme biased3
//   cpquad study --preset table7 --n 60,120,240,480 --format json --out coil.json
//   cpquad dump --preset table3 --n 64 --out torus64.bin
//
// Exit status: 0 success, 2 configuration error, 3 numerical failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "cpquad/cpquad.hpp"

namespace {

struct Options {
  std::map<std::string, std::string> flags;
  std::string preset_positional;
  std::string config_file;
  std::string field_file;
  bool timings = false;
};

void add_keys(CLI::App* cmd, Options& opt) {
  cmd->add_option("preset_name", opt.preset_positional, "Preset table1 ... table7");
  cmd->add_option("--config", opt.config_file, "Flat key = value file; flags override it");
  for (const auto& key : cpquad::detail::known_keys()) {
    // Registered per key so unknown flags are rejected by the parser.
    cmd->add_option("--" + key, opt.flags[key]);
  }
  cmd->add_flag("--timings", opt.timings, "Include per-row wall-clock seconds in JSON output");
}

cpquad::RunConfig resolve(const Options& opt) {
  cpquad::KeyValues kv;
  if (!opt.config_file.empty()) kv = cpquad::read_config_file(opt.config_file);
  for (const auto& [k, v] : opt.flags)
    if (!v.empty()) kv[k] = v;
  if (!opt.preset_positional.empty()) {
    if (kv.count("preset") && kv["preset"] != opt.preset_positional)
      throw cpquad::ConfigError("conflicting presets '" + kv["preset"] + "' and '" + opt.preset_positional + "'");
    kv["preset"] = opt.preset_positional;
  }
  cpquad::RunConfig c = cpquad::make_config(kv);
  (void)cpquad::make_shape(c);  // validates shape parameters
  return c;
}

void log_row(const cpquad::ReportRow& row) {
  std::fprintf(stderr, "n=%-6d value=%.12g relative_error=%.6e", row.n, row.value, row.relative_error);
  if (row.order) std::fprintf(stderr, " order=%.3f", *row.order);
  std::fprintf(stderr, " band=%zu seconds=%.2f\n", row.band_nodes, row.seconds);
}

int run_report(const Options& opt, bool need_study) {
  const cpquad::RunConfig c = resolve(opt);
  if (need_study && c.n.size() < 2) throw cpquad::ConfigError("study needs at least two grid sizes");
  const cpquad::ConvergenceReport rep = cpquad::convergence_study(c, log_row);
  cpquad::emit_report(rep, c.format, c.out, std::cout, opt.timings);
  if (!rep.valid) {
    std::fprintf(stderr, "error: %s\n", rep.error.c_str());
    return 3;
  }
  return 0;
}

template <int D>
cpquad::ConvergenceReport integrate_file(const cpquad::RunConfig& c, std::istream& in) {
  const cpquad::CpField<D> field = cpquad::read_field<D>(in);
  const cpquad::ShapeSpec shape = cpquad::make_shape(c);
  if (cpquad::shape_dim(shape) != D || cpquad::shape_codim(shape) != field.codim)
    throw cpquad::ConfigError("field file does not match the configured shape");
  const cpquad::Kernel kernel(c.kernel, c.eps);
  cpquad::IntegrateOptions io;
  io.threads = c.threads;
  io.max_curvature = cpquad::max_curvature(shape);
  const cpquad::Integrand<D> g = cpquad::make_integrand<D>(c.integrand);
  cpquad::IntegralResult res;
  if (field.codim == 1) {
    const cpquad::BandIndex band = cpquad::extract_band(field, c.eps, cpquad::stencil_radius(c.scheme));
    res = cpquad::integrate_codim1(field, band, g, kernel, c.scheme, io);
  } else if constexpr (D == 3) {
    const cpquad::BandIndex band = cpquad::extract_band(field, c.eps, cpquad::stencil_radius(c.scheme));
    if (c.method == "corrected") {
      const auto ends = cpquad::curve_endpoints(shape);
      res = cpquad::integrate_codim2_corrected(field, band, g, kernel, ends, io);
    } else {
      res = cpquad::integrate_codim2(field, band, g, kernel, c.scheme, io);
    }
  }
  cpquad::RunConfig echo = c;
  echo.n = {field.grid.count(0)};
  cpquad::ConvergenceReport rep;
  rep.config = cpquad::config_echo(echo);
  rep.reference = cpquad::reference_value(c, shape);
  cpquad::ReportRow row;
  row.n = field.grid.count(0);
  row.value = res.value;
  row.relative_error = std::abs(res.value - rep.reference) / std::abs(rep.reference);
  row.band_nodes = res.band_nodes;
  rep.rows.push_back(row);
  return rep;
}

int run_field(const Options& opt) {
  const cpquad::RunConfig c = resolve(opt);
  std::ifstream in(opt.field_file, std::ios::binary);
  if (!in) throw cpquad::ConfigError("cannot open field file '" + opt.field_file + "'");
  const int dim = cpquad::peek_field_dim(in);
  const cpquad::ConvergenceReport rep = dim == 2 ? integrate_file<2>(c, in) : integrate_file<3>(c, in);
  log_row(rep.rows.front());
  cpquad::emit_report(rep, c.format, c.out, std::cout, false);
  return 0;
}

int run_dump(const Options& opt) {
  const cpquad::RunConfig c = resolve(opt);
  if (c.n.size() != 1) throw cpquad::ConfigError("dump needs exactly one grid size");
  if (c.out.empty()) throw cpquad::ConfigError("dump needs --out");
  const cpquad::ShapeSpec shape = cpquad::make_shape(c);
  const auto [lower, upper] = cpquad::domain_box(c, shape);
  std::ofstream os(c.out, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open '" + c.out + "' for writing");
  std::visit(
      [&](const auto& s) {
        constexpr int D = std::decay_t<decltype(s)>::dim;
        cpquad::SampleOptions so;
        so.threads = c.threads;
        so.clearance = c.eps;
        const auto grid = cpquad::detail::make_grid<D>(lower, upper, c.n.front());
        cpquad::write_field(os, cpquad::sample_field(grid, s, so));
      },
      shape);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Closest-point narrow-band quadrature experiments"};
  app.set_version_flag("--version", std::string(cpquad::version));
  app.require_subcommand(1);

  Options run_opt, study_opt, dump_opt;
  CLI::App* run = app.add_subcommand("run", "Run a preset or a single configuration");
  add_keys(run, run_opt);
  run->add_option("--field", run_opt.field_file, "Integrate a previously dumped field instead of sampling");
  CLI::App* study = app.add_subcommand("study", "Convergence study over a doubling list of n");
  add_keys(study, study_opt);
  CLI::App* dump = app.add_subcommand("dump", "Sample a field and write it in binary form");
  add_keys(dump, dump_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run->parsed()) return run_opt.field_file.empty() ? run_report(run_opt, false) : run_field(run_opt);
    if (study->parsed()) return run_report(study_opt, true);
    return run_dump(dump_opt);
  } catch (const cpquad::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const cpquad::NumericalError& e) {
    std::fprintf(stderr, "numerical error: %s\n", e.what());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
