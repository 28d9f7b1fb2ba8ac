#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/grid.hpp"
#include "hweno/problems.hpp"
#include "hweno/quadrature.hpp"
#include "hweno/reference.hpp"
#include "hweno/solver1d.hpp"
#include "hweno/solver2d.hpp"

namespace hweno {

inline Reconstruction parse_reconstruction(std::string_view s) {
  if (s == "hweno5") return Reconstruction::Hweno5;
  if (s == "weno5") return Reconstruction::Weno5;
  if (s == "hweno4") return Reconstruction::Hweno4;
  if (s == "weno5-2d") return Reconstruction::Weno5_2D;
  throw InvalidArgument("unknown scheme '" + std::string(s) + "'");
}

inline Modification parse_modification(std::string_view s) {
  if (s == "none") return Modification::None;
  if (s == "mod1") return Modification::Mod1;
  if (s == "mod2") return Modification::Mod2;
  throw InvalidArgument("unknown modification '" + std::string(s) + "'");
}

inline PhiVariant parse_phi_variant(std::string_view s) {
  if (s == "printed") return PhiVariant::Printed;
  if (s == "symmetric") return PhiVariant::Symmetric;
  throw InvalidArgument("unknown phi variant '" + std::string(s) + "'");
}

inline TimeStepRule parse_dt_rule(std::string_view s) {
  if (s == "cfl") return TimeStepRule::Cfl;
  if (s == "accuracy") return TimeStepRule::Accuracy;
  throw InvalidArgument("unknown time-step rule '" + std::string(s) + "'");
}

inline std::string to_string(Reconstruction r) {
  switch (r) {
    case Reconstruction::Hweno5: return "hweno5";
    case Reconstruction::Weno5: return "weno5";
    case Reconstruction::Hweno4: return "hweno4";
    case Reconstruction::Weno5_2D: return "weno5-2d";
  }
  return "?";
}

inline std::string to_string(Modification m) {
  switch (m) {
    case Modification::None: return "none";
    case Modification::Mod1: return "mod1";
    case Modification::Mod2: return "mod2";
  }
  return "?";
}

inline std::string scheme_label(const SchemeConfig& s) {
  std::string out = (s.mp_limiter ? "mp" : "") + to_string(s.reconstruction);
  if (s.modification != Modification::None) out += "+" + to_string(s.modification);
  return out;
}

struct ErrorNorms {
  double l1 = 0.0;
  double l2 = 0.0;
  double linf = 0.0;
};

/// Discrete norms of a - b on a uniform mesh, normalized by the cell count.
inline ErrorNorms error_norms(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size() || a.empty())
    throw InvalidArgument("error_norms: size mismatch (" + std::to_string(a.size()) + " vs " +
                          std::to_string(b.size()) + ")");
  ErrorNorms e;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = std::abs(a[k] - b[k]);
    e.l1 += d;
    e.l2 += d * d;
    e.linf = std::max(e.linf, d);
  }
  e.l1 /= double(a.size());
  e.l2 = std::sqrt(e.l2 / double(a.size()));
  return e;
}

/// Cell averages of the characteristic solution by Gauss quadrature.
inline std::vector<double> exact_cell_averages(const ProblemCase& c, const Grid1D& g, double t, int points = 6) {
  const GaussRule& rule = gauss_legendre(points);
  std::vector<double> out(g.n_cells, 0.0);
  for (int j = 0; j < g.n_cells; ++j)
    for (std::size_t k = 0; k < rule.size(); ++k)
      out[j] += rule.weights[k] * exact_solution(c, g.center(j) + rule.nodes[k] * g.dx, t);
  return out;
}

inline std::vector<double> exact_cell_averages(const ProblemCase& c, const Grid2D& g, double t, int points = 5) {
  const GaussRule& rule = gauss_legendre(points);
  std::vector<double> out;
  out.reserve(g.cell_count());
  for (int j = 0; j < g.ny; ++j) {
    for (int i = 0; i < g.nx; ++i) {
      double s = 0.0;
      for (std::size_t a = 0; a < rule.size(); ++a)
        for (std::size_t b = 0; b < rule.size(); ++b)
          s += rule.weights[a] * rule.weights[b] *
               exact_solution(c, g.center_x(i) + rule.nodes[a] * g.dx, g.center_y(j) + rule.nodes[b] * g.dy, t);
      out.push_back(s);
    }
  }
  return out;
}

struct RunOptions {
  std::string case_name;
  SchemeConfig scheme;
  int nx = 100;
  int ny = 0;  // 0: same as nx for 2D cases
  std::optional<double> t_end;
  std::optional<double> cfl;
  int snapshot_every = 0;
  std::filesystem::path out_dir;
};

struct RunReport {
  std::string case_name;
  std::string scheme;
  int nx = 0, ny = 0;
  long steps = 0;
  double t_final = 0.0;
  double cfl = 0.0;
  double wall_seconds = 0.0;
  int n_sub = 0;
  /// Integral of q over the domain at t = 0 and at t_final.
  double mass_initial = 0.0, mass_final = 0.0;
  TroubleStats stats;
  std::vector<double> x, y;
  std::vector<double> qbar;
  std::vector<double> xibar;  // 1D only
  std::vector<std::filesystem::path> snapshots;
};

namespace detail {

inline void check_state(std::span<const double> q, double bound, long step) {
  for (std::size_t k = 0; k < q.size(); ++k)
    if (!std::isfinite(q[k]) || std::abs(q[k]) > bound)
      throw NumericalError("run_case: instability detected at step " + std::to_string(step) + " in cell " +
                           std::to_string(k));
}

inline std::filesystem::path write_snapshot(const RunReport& r, long step, double t, std::span<const double> q,
                                            std::span<const double> xi, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream name;
  name << r.case_name << "_" << r.scheme << "_n" << r.nx;
  if (r.ny > 0) name << "x" << r.ny;
  name << "_step" << step << ".csv";
  const auto path = dir / name.str();
  std::ofstream out(path);
  if (!out) throw InvalidArgument("run_case: cannot write " + path.string());
  out.precision(17);
  out << "# case=" << r.case_name << " scheme=" << r.scheme << " n=" << r.nx;
  if (r.ny > 0) out << "x" << r.ny;
  out << " t=" << t << "\n";
  if (r.ny == 0) {
    out << "x,qbar,xibar\n";
    for (std::size_t j = 0; j < q.size(); ++j) out << r.x[j] << "," << q[j] << "," << xi[j] << "\n";
  } else {
    out << "x,y,qbar\n";
    for (int j = 0; j < r.ny; ++j)
      for (int i = 0; i < r.nx; ++i) out << r.x[i] << "," << r.y[j] << "," << q[j * r.nx + i] << "\n";
  }
  return path;
}

}  // namespace detail

inline RunReport run_case(const RunOptions& opt) {
  const ProblemCase c = find_problem(opt.case_name);
  SchemeConfig scheme = opt.scheme;
  scheme.cfl = opt.cfl.value_or(c.cfl);
  scheme.validate(c.dimension);
  if (opt.nx < 1) throw InvalidArgument("run_case: nx must be positive");
  const double t_end = opt.t_end.value_or(c.t_end);
  if (!(t_end >= 0.0)) throw InvalidArgument("run_case: t_end must be non-negative");

  RunReport rep;
  rep.case_name = c.name;
  rep.scheme = scheme_label(scheme);
  rep.cfl = scheme.cfl;
  const double range = c.qmax - c.qmin;
  const double bound = 1e3 * (range > 0.0 ? range : std::max(1.0, std::abs(c.qmax)));
  const auto start = std::chrono::steady_clock::now();

  auto advance = [&](auto& solver, auto& u, double dt_max, auto&& interior, auto&& xi_interior) {
    double t = 0.0;
    const bool snap = !opt.out_dir.empty();
    if (snap) rep.snapshots.push_back(detail::write_snapshot(rep, 0, 0.0, interior(u), xi_interior(u), opt.out_dir));
    while (t < t_end) {
      const double dt = std::min(dt_max, t_end - t);
      solver.step(u, dt);
      t = (t_end - t <= dt_max) ? t_end : t + dt;
      ++rep.steps;
      const auto q = interior(u);
      detail::check_state(q, bound, rep.steps);
      if (snap && opt.snapshot_every > 0 && rep.steps % opt.snapshot_every == 0 && t < t_end)
        rep.snapshots.push_back(detail::write_snapshot(rep, rep.steps, t, q, xi_interior(u), opt.out_dir));
    }
    if (snap && rep.steps > 0)
      rep.snapshots.push_back(detail::write_snapshot(rep, rep.steps, t, interior(u), xi_interior(u), opt.out_dir));
    rep.t_final = t;
  };

  if (c.dimension == 1) {
    const Grid1D grid = build_grid(c.ax, c.bx, opt.nx);
    rep.nx = opt.nx;
    for (int j = 0; j < grid.n_cells; ++j) rep.x.push_back(grid.center(j));
    const FluxModel flux = builtin_flux_1d(c.flux_name);
    const double alpha = global_alpha(flux, c.qmin, c.qmax);
    Field1D u = init_field(grid, c.q0, 5, c.jumps);
    rep.mass_initial = grid.dx * std::accumulate(u.qbar().begin(), u.qbar().end(), 0.0);
    Solver1D solver(grid, flux, c.boundary, scheme, alpha);
    if (scheme.modification == Modification::Mod2) solver.initialize(u);
    rep.n_sub = scheme.modification == Modification::Mod2 ? solver.n_sub() : 0;
    advance(
        solver, u, cfl_dt(grid, alpha, scheme.cfl, scheme.dt_rule),
        [](const Field1D& f) { return std::vector<double>(f.qbar().begin(), f.qbar().end()); },
        [](const Field1D& f) { return std::vector<double>(f.xibar().begin(), f.xibar().end()); });
    rep.qbar.assign(u.qbar().begin(), u.qbar().end());
    rep.xibar.assign(u.xibar().begin(), u.xibar().end());
    rep.mass_final = grid.dx * std::accumulate(rep.qbar.begin(), rep.qbar.end(), 0.0);
    rep.stats = solver.stats();
  } else {
    const int ny = opt.ny > 0 ? opt.ny : opt.nx;
    const Grid2D grid = build_grid(c.ax, c.bx, opt.nx, c.ay, c.by, ny);
    rep.nx = opt.nx;
    rep.ny = ny;
    for (int i = 0; i < grid.nx; ++i) rep.x.push_back(grid.center_x(i));
    for (int j = 0; j < grid.ny; ++j) rep.y.push_back(grid.center_y(j));
    const Flux2D flux = builtin_flux_2d(c.flux_name);
    const double alpha = global_alpha(flux.fx, c.qmin, c.qmax);
    const double beta = global_alpha(flux.fy, c.qmin, c.qmax);
    Field2D u = init_field(grid, c.q0_2d, 5);
    const auto q0 = u.qbar_interior();
    rep.mass_initial = grid.dx * grid.dy * std::accumulate(q0.begin(), q0.end(), 0.0);
    Solver2D solver(grid, flux, c.boundary, scheme, alpha, beta);
    advance(
        solver, u, cfl_dt(grid, alpha, beta, scheme.cfl, scheme.dt_rule), [](const Field2D& f) { return f.qbar_interior(); },
        [](const Field2D&) { return std::vector<double>{}; });
    rep.qbar = u.qbar_interior();
    rep.mass_final = grid.dx * grid.dy * std::accumulate(rep.qbar.begin(), rep.qbar.end(), 0.0);
    rep.stats = solver.stats();
  }
  rep.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

struct ConvergenceRow {
  int n = 0;
  ErrorNorms error;
  double order_l1 = std::numeric_limits<double>::quiet_NaN();
  double order_l2 = std::numeric_limits<double>::quiet_NaN();
  double order_linf = std::numeric_limits<double>::quiet_NaN();
};

struct ConvergenceOptions {
  std::string case_name;
  SchemeConfig scheme;
  std::vector<int> resolutions;
  std::optional<double> t_end;
  std::optional<double> cfl;
  /// Reference mesh for cases without a characteristic solution (0: none).
  int reference_n = 0;
  std::filesystem::path cache_dir;
};

/// Observed orders between consecutive rows: log(e_prev / e) / log(n / n_prev).
inline void fill_orders(std::vector<ConvergenceRow>& rows) {
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double r = std::log(double(rows[k].n) / rows[k - 1].n);
    rows[k].order_l1 = std::log(rows[k - 1].error.l1 / rows[k].error.l1) / r;
    rows[k].order_l2 = std::log(rows[k - 1].error.l2 / rows[k].error.l2) / r;
    rows[k].order_linf = std::log(rows[k - 1].error.linf / rows[k].error.linf) / r;
  }
}

/// Error of a finished run against the exact averages or a restricted reference.
inline ErrorNorms run_error(const ProblemCase& c, const RunReport& r, double t_end, int reference_n,
                            const std::filesystem::path& cache_dir) {
  if (c.exact == ExactKind::Characteristics) {
    if (c.dimension == 1) return error_norms(r.qbar, exact_cell_averages(c, build_grid(c.ax, c.bx, r.nx), t_end));
    return error_norms(r.qbar, exact_cell_averages(c, build_grid(c.ax, c.bx, r.nx, c.ay, c.by, r.ny), t_end));
  }
  if (reference_n <= 0) throw InvalidArgument("convergence: case " + c.name + " needs a reference resolution");
  if (c.dimension == 1) {
    const ReferenceSolution ref = reference_solution(c, reference_n, t_end, cache_dir);
    return error_norms(r.qbar, restrict_conservative(ref.qbar, r.nx));
  }
  const ReferenceSolution ref = reference_solution_2d(c, reference_n, reference_n, t_end, cache_dir);
  return error_norms(r.qbar, restrict_conservative_2d(ref.qbar, ref.nx, ref.ny, r.nx, r.ny));
}

inline std::vector<ConvergenceRow> convergence_table(const ConvergenceOptions& opt) {
  if (opt.resolutions.empty()) throw InvalidArgument("convergence: no resolutions given");
  const ProblemCase c = find_problem(opt.case_name);
  const double t_end = opt.t_end.value_or(c.t_end);
  std::vector<ConvergenceRow> rows;
  for (int n : opt.resolutions) {
    RunOptions ro;
    ro.case_name = opt.case_name;
    ro.scheme = opt.scheme;
    ro.nx = n;
    ro.t_end = t_end;
    ro.cfl = opt.cfl;
    const RunReport r = run_case(ro);
    rows.push_back({n, run_error(c, r, t_end, opt.reference_n, opt.cache_dir)});
  }
  fill_orders(rows);
  return rows;
}

}  // namespace hweno
