#pragma once

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/harness.hpp"
#include "hweno/problems.hpp"
#include "hweno/reference.hpp"

namespace hweno {

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

/// `key = value` lines (with `#` comments) turned into `--key value` arguments.
inline std::vector<std::string> read_config_args(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot read config file " + path.string());
  std::vector<std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || key == "config")
      throw InvalidArgument(path.string() + ":" + std::to_string(lineno) + ": bad key");
    out.push_back("--" + key);
    out.push_back(value);
  }
  return out;
}

inline std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    std::size_t pos = 0;
    int v = 0;
    try {
      v = std::stoi(item, &pos);
    } catch (const std::exception&) {
      throw InvalidArgument("bad integer '" + item + "'");
    }
    if (pos != item.size() || v < 1) throw InvalidArgument("bad resolution '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw InvalidArgument("empty resolution list");
  return out;
}

struct CliFlags {
  std::string case_name;
  std::string scheme;  // empty: hweno5 in 1D, hweno4 in 2D
  std::string mod = "none";
  std::string mp = "off";
  std::string derivative_bound = "on";
  std::string nx = "100";
  int ny = 0;
  std::optional<double> cfl;
  std::optional<double> tend;
  std::string out;
  int snapshot_every = 0;
  std::string phi_variant = "printed";
  std::string dt_rule = "cfl";
  int ref = 0;
  std::string config;
};

inline void add_common(CLI::App* sub, CliFlags& f) {
  sub->add_option("--case", f.case_name, "problem case")->required();
  sub->add_option("--scheme", f.scheme, "hweno5|weno5|hweno4|weno5-2d")
      ->check(CLI::IsMember({"hweno5", "weno5", "hweno4", "weno5-2d"}));
  sub->add_option("--mod", f.mod, "none|mod1|mod2")->check(CLI::IsMember({"none", "mod1", "mod2"}));
  sub->add_option("--mp", f.mp, "on|off")->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--derivative-bound", f.derivative_bound, "on|off: clamp evolved derivative averages")
      ->check(CLI::IsMember({"on", "off"}));
  sub->add_option("--nx", f.nx, "cells in x (comma list for convergence)");
  sub->add_option("--ny", f.ny, "cells in y (2D)");
  sub->add_option("--cfl", f.cfl, "CFL number");
  sub->add_option("--tend", f.tend, "final time");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--snapshot-every", f.snapshot_every, "snapshot cadence in steps");
  sub->add_option("--phi-variant", f.phi_variant, "printed|symmetric")
      ->check(CLI::IsMember({"printed", "symmetric"}));
  sub->add_option("--dt-rule", f.dt_rule, "cfl: dt = cfl dx/alpha; accuracy: dt = cfl dx^(5/3)/alpha")
      ->check(CLI::IsMember({"cfl", "accuracy"}));
  sub->add_option("--ref", f.ref, "reference mesh size for cases without an exact solution");
  sub->add_option("--config", f.config, "key = value file; flags override it");
}

inline SchemeConfig scheme_from(const CliFlags& f) {
  SchemeConfig s;
  if (f.scheme.empty())
    s.reconstruction = find_problem(f.case_name).dimension == 2 ? Reconstruction::Hweno4 : Reconstruction::Hweno5;
  else
    s.reconstruction = parse_reconstruction(f.scheme);
  s.modification = parse_modification(f.mod);
  s.mp_limiter = f.mp == "on";
  s.derivative_bound = f.derivative_bound == "on";
  s.phi_variant = parse_phi_variant(f.phi_variant);
  s.dt_rule = parse_dt_rule(f.dt_rule);
  return s;
}

inline std::string format_order(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

inline int cmd_run(const CliFlags& f, std::ostream& out) {
  RunOptions ro;
  ro.case_name = f.case_name;
  ro.scheme = scheme_from(f);
  ro.nx = parse_int_list(f.nx).at(0);
  ro.ny = f.ny;
  ro.t_end = f.tend;
  ro.cfl = f.cfl;
  ro.snapshot_every = f.snapshot_every;
  ro.out_dir = f.out;
  const RunReport r = run_case(ro);
  out.precision(10);
  out << "case=" << r.case_name << " scheme=" << r.scheme << " n=" << r.nx;
  if (r.ny > 0) out << "x" << r.ny;
  out << " steps=" << r.steps << " t=" << r.t_final << " wall=" << r.wall_seconds << "s"
      << " troubled_interfaces=" << r.stats.interface_fraction() << " troubled_cells=" << r.stats.cell_fraction()
      << "\n";
  const ProblemCase c = find_problem(f.case_name);
  if (c.exact == ExactKind::Characteristics || f.ref > 0) {
    const ErrorNorms e = run_error(c, r, r.t_final, f.ref, std::filesystem::path(f.out));
    out << "l1=" << e.l1 << " l2=" << e.l2 << " linf=" << e.linf << "\n";
  }
  for (const auto& p : r.snapshots) out << "wrote " << p.string() << "\n";
  return 0;
}

inline int cmd_convergence(const CliFlags& f, std::ostream& out) {
  ConvergenceOptions co;
  co.case_name = f.case_name;
  co.scheme = scheme_from(f);
  co.resolutions = parse_int_list(f.nx);
  co.t_end = f.tend;
  co.cfl = f.cfl;
  co.reference_n = f.ref;
  co.cache_dir = f.out;
  const auto rows = convergence_table(co);
  std::ostringstream csv;
  csv.precision(17);
  csv << "n,l1,l1_order,linf,linf_order\n";
  for (const auto& r : rows)
    csv << r.n << "," << r.error.l1 << "," << format_order(r.order_l1) << "," << r.error.linf << ","
        << format_order(r.order_linf) << "\n";
  out << csv.str();
  if (!f.out.empty()) {
    std::filesystem::create_directories(f.out);
    const auto path =
        std::filesystem::path(f.out) / ("convergence_" + f.case_name + "_" + scheme_label(co.scheme) + ".csv");
    std::ofstream file(path);
    if (!file) throw InvalidArgument("cannot write " + path.string());
    file << csv.str();
  }
  return 0;
}

inline int cmd_reference(const CliFlags& f, std::ostream& out) {
  const ProblemCase c = find_problem(f.case_name);
  if (f.out.empty()) throw InvalidArgument("reference: --out is required");
  std::filesystem::create_directories(f.out);
  const int nx = parse_int_list(f.nx).at(0);
  const double t_end = f.tend.value_or(c.t_end);
  const double cfl = f.cfl.value_or(0.9);
  std::filesystem::path path;
  if (c.dimension == 1) {
    reference_solution(c, nx, t_end, f.out, cfl);
    path = reference_cache_path(f.out, c, nx, 0, t_end);
  } else {
    const int ny = f.ny > 0 ? f.ny : nx;
    reference_solution_2d(c, nx, ny, t_end, f.out, cfl);
    path = reference_cache_path(f.out, c, nx, ny, t_end);
  }
  out << "wrote " << path.string() << "\n";
  return 0;
}

}  // namespace detail

/// Entry point of the `hweno` tool. Exit status: 0 success, 1 usage error, 2 runtime error.
inline int cli_main(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  std::vector<std::string> args(argv + 1, argv + argc);
  // Config file values go first so that later command-line flags win.
  try {
    for (std::size_t k = 0; k + 1 < args.size(); ++k) {
      if (args[k] == "--config") {
        auto extra = detail::read_config_args(args[k + 1]);
        const std::size_t at = args.empty() ? 0 : 1;
        args.insert(args.begin() + at, extra.begin(), extra.end());
        break;
      }
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Finite-volume HWENO/WENO solver for scalar nonconvex conservation laws", "hweno"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  detail::CliFlags flags;
  auto* run = app.add_subcommand("run", "advance one case to its final time");
  auto* conv = app.add_subcommand("convergence", "error table over a list of resolutions");
  auto* ref = app.add_subcommand("reference", "compute and cache a first-order Godunov reference");
  for (auto* s : {run, conv, ref}) detail::add_common(s, flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return 1;
  }

  try {
    if (*run) return detail::cmd_run(flags, out);
    if (*conv) return detail::cmd_convergence(flags, out);
    return detail::cmd_reference(flags, out);
  } catch (const InvalidArgument& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const LookupError& e) {
    err << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
}

}  // namespace hweno
