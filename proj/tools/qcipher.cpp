// Copyright 2026 The qcipher Authors
// SPDX-License-Identifier: Apache-2.0

// qcipher: experiment driver for the keyed quantum-noise ciphers.
//
//   qcipher run <config> [--set k=v]... [--out dir]
//   qcipher sweep <config> [--axis name --values v1,v2,...] [--set k=v]... [--out file]
//   qcipher plot --csv file [--x col] [--metrics m1,m2 | --y c1,c2] [--logx] [--logy] --out file.svg
//   qcipher bounds [--set k=v]...
//   qcipher selftest [--seed n] [--csv file]
//
// Exit codes: 0 success, 2 invalid input, 3 numerical-invariant violation.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcipher/experiment/manifest.hpp"
#include "qcipher/experiment/runner.hpp"
#include "qcipher/experiment/selftest.hpp"
#include "qcipher/experiment/svg_plot.hpp"
#include "qcipher/experiment/sweep.hpp"

namespace {

using namespace qcipher;
using namespace qcipher::experiment;

constexpr int kExitValidation = 2;
constexpr int kExitNumerical = 3;

std::string command_line(int argc, char** argv) {
  std::string s;
  for (int i = 0; i < argc; ++i) s += (i ? " " : "") + std::string(argv[i]);
  return s;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path + ": cannot open for writing");
  out << content;
}

int cmd_run(const std::string& config, const std::vector<std::string>& sets, const std::string& out_dir,
            const std::string& cmdline) {
  ConfigDocument doc = load_config(config);
  apply_overrides(doc, sets);
  const auto art = run_experiment(doc);
  OutputSet out(out_dir);
  out.write("report.json", to_json(art.report, kArtifactVersion).dump(2) + "\n");
  for (const auto& [name, csv] : art.tables) out.write(name, csv);
  out.write_manifest(doc.value, cmdline);
  std::cout << "wrote " << (out.dir() / "report.json").string() << '\n';
  return 0;
}

std::vector<json> parse_values(const std::string& raw) {
  std::vector<json> values;
  try {
    const json arr = json::parse(raw);
    if (arr.is_array()) {
      for (const auto& v : arr) values.push_back(v);
      return values;
    }
  } catch (const json::parse_error&) {
  }
  std::stringstream ss(raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      values.push_back(json::parse(item));
    } catch (const json::parse_error&) {
      values.emplace_back(item);
    }
  }
  return values;
}

int cmd_sweep(const std::string& config, const std::vector<std::string>& sets, const std::string& axis_name,
              const std::string& values, const std::string& out_path) {
  ConfigDocument doc = load_config(config);
  apply_overrides(doc, sets);
  SweepAxis axis;
  if (!axis_name.empty() || !values.empty()) {
    if (axis_name.empty()) throw ValidationError("sweep: --values given without --axis");
    axis = {axis_name, parse_values(values)};
  } else {
    axis = sweep_axis_from(doc);
  }
  doc.value.erase("sweep");
  const std::string csv = run_sweep(doc, axis);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_file(out_path, csv);
    std::cout << "wrote " << out_path << '\n';
  }
  return 0;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  return out;
}

int cmd_plot(const std::string& csv, PlotSpec spec, const std::string& metrics, const std::string& ys,
             const std::string& out_path) {
  spec.metrics = split_list(metrics);
  spec.y = split_list(ys);
  const auto table = read_csv(csv);
  write_file(out_path, render_svg(series_from_table(table, spec), spec));
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

int cmd_bounds(const std::vector<std::string>& sets) {
  ConfigDocument doc = parse_config_text("{}", "<bounds>");
  doc.value = {{"amp2", 4.0},   {"M", 64},        {"J", 64},      {"fppm_M", 8},      {"cppm_M", 1 << 20},
               {"S", 4.0},      {"epsilon", 0.1}, {"n", 1e6},     {"h_k", 16.0},      {"phase_bins", 64},
               {"log_base", "binary"}};
  apply_overrides(doc, sets);
  const ConfigReader c(doc);
  const double amp = qcipher::experiment::detail::amp_from(c);
  const auto base = qcipher::experiment::detail::log_base_from(c);
  const int cppm_m = c.power_of_two("cppm_M", 2);

  Y00Config y;
  y.m_bases = c.power_of_two("M", 1);
  y.amp = amp;
  FppmConfig f;
  f.m_modes = c.power_of_two("fppm_M", 1);
  f.j_phases = c.power_of_two("J", 2);
  f.amp = amp;

  const auto cb = eve_cppm_bound(cppm_m, c.number("S"), base);
  const auto mask = fppm_masking_report(f, c.number("h_k"), static_cast<int>(c.integer("phase_bins")));
  const auto lock = locking_calc(c.number("epsilon"), c.number("n"), base);

  json j;
  j["inputs"] = doc.value;
  j["bob_cppm_error"] = bob_cppm_error(cppm_m, amp);
  j["eve_cppm_bound"] = json{{"bound", cb.bound},     {"z_opt", cb.z_opt},       {"vacuous", cb.vacuous},
                         {"converged", cb.converged}, {"grid_residual", cb.grid_residual}};
  j["cppm_bandwidth_hz"] = cppm_bandwidth(cppm_m, 1e9).hz;
  j["srm_psk_error"] = srm_symmetric_psk(f.j_phases, amp).error;
  j["heterodyne_psk_error_literal"] = heterodyne_psk_error(f.j_phases, amp, DistanceConvention::literal);
  j["heterodyne_psk_error_euclidean"] = heterodyne_psk_error(f.j_phases, amp, DistanceConvention::euclidean);
  j["eve_fppm_srm_error"] = eve_fppm_srm_error(f);
  j["eve_fppm_heterodyne_error"] = eve_fppm_heterodyne_error(f);
  j["bob_fppm_error"] = bob_fppm_error(f);
  j["y00_bob_homodyne_ber"] = bob_analytic_ber(y, BobReceiver::homodyne);
  j["y00_eve_adjacent_pair_error"] = eve_adjacent_pair_error(y);
  j["fppm_c1_bits"] = mask.c1;
  j["fppm_unicity_bound"] = json_number(mask.unicity_bound);
  j["locking"] = json{{"h_k", lock.h_k}, {"h_x_given_y_min", lock.h_x_given_y_min}, {"eta_max", lock.eta_max}};
  std::cout << j.dump(2) << '\n';
  return 0;
}

int cmd_selftest(std::uint64_t seed, const std::string& csv_path) {
  const auto r = run_selftest(seed);
  const std::string csv = r.csv();
  if (csv_path.empty()) std::cout << csv;
  else write_file(csv_path, csv);
  for (const auto& c : r.checks)
    if (!c.pass()) std::cerr << "selftest: FAIL " << c.name << " value=" << fmt(c.value) << " threshold=" << fmt(c.threshold) << '\n';
  if (!r.all_pass()) return kExitNumerical;
  std::cerr << "selftest: " << r.checks.size() << " checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qcipher: keyed quantum-noise cipher experiments"};
  app.require_subcommand(1);

  std::string config, out, axis, values, csv, metrics, ys;
  std::vector<std::string> sets;
  std::uint64_t seed = 1;
  PlotSpec spec;

  auto* run = app.add_subcommand("run", "Run one experiment config and write report, tables and manifest");
  run->add_option("config", config, "Config JSON")->required();
  run->add_option("--set", sets, "Override a config key (key=value, JSON value)");
  out = "qcipher_out";
  run->add_option("--out", out, "Output directory")->capture_default_str();

  auto* sweep = app.add_subcommand("sweep", "Sweep one parameter and emit long-form CSV");
  sweep->add_option("config", config, "Config JSON")->required();
  sweep->add_option("--set", sets, "Override a config key (key=value)");
  sweep->add_option("--axis", axis, "Parameter to sweep (defaults to the config's sweep object)");
  sweep->add_option("--values", values, "Comma list or JSON array of values");
  std::string sweep_out;
  sweep->add_option("--out", sweep_out, "Output CSV (stdout if omitted)");

  auto* plot = app.add_subcommand("plot", "Render a CSV as a static SVG chart");
  plot->add_option("--csv", csv, "Input CSV")->required();
  plot->add_option("--x", spec.x, "X column")->capture_default_str();
  plot->add_option("--metrics", metrics, "Comma list of metrics (long-form CSV)");
  plot->add_option("--y", ys, "Comma list of y columns (wide CSV)");
  plot->add_flag("--logx", spec.log_x, "Logarithmic x axis");
  plot->add_flag("--logy", spec.log_y, "Logarithmic y axis");
  plot->add_option("--title", spec.title, "Chart title");
  plot->add_option("--ylabel", spec.y_label, "Y axis label");
  std::string plot_out;
  plot->add_option("--out", plot_out, "Output SVG")->required();

  auto* bounds = app.add_subcommand("bounds", "Evaluate the closed-form error and locking figures");
  bounds->add_option("--set", sets, "Override an input (key=value)");

  auto* self = app.add_subcommand("selftest", "Run the invariant suite and emit check,value,threshold,pass CSV");
  self->add_option("--seed", seed, "Seed")->capture_default_str();
  std::string self_csv;
  self->add_option("--csv", self_csv, "Output CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitValidation;
  }

  try {
    if (*run) return cmd_run(config, sets, out, command_line(argc, argv));
    if (*sweep) return cmd_sweep(config, sets, axis, values, sweep_out);
    if (*plot) return cmd_plot(csv, spec, metrics, ys, plot_out);
    if (*bounds) return cmd_bounds(sets);
    if (*self) return cmd_selftest(seed, self_csv);
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}
