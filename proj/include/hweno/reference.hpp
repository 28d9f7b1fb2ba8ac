#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/grid.hpp"
#include "hweno/problems.hpp"

namespace hweno {

/// Exact Riemann flux: min of f over [a, b] if a <= b, else max over [b, a].
inline double godunov_flux(double a, double b, const FluxModel& f, double fa, double fb) {
  if (a == b) return fa;
  return a <= b ? f.min_over(a, b, fa, fb) : f.max_over(b, a, fb, fa);
}

inline double godunov_flux(double a, double b, const FluxModel& f) {
  return godunov_flux(a, b, f, f.f(a), f.f(b));
}

inline double lf_flux(double a, double b, const FluxModel& f, double alpha) {
  return 0.5 * (f.f(a) + f.f(b) - alpha * (b - a));
}

enum class MonotoneFlux { Godunov, LaxFriedrichs };

/// Forward-Euler monotone update on interior averages with boundary ghosts.
class MonotoneStepper {
 public:
  MonotoneStepper(FluxModel flux, MonotoneFlux flavor, BoundarySpec bc, double alpha)
      : flux_(std::move(flux)), flavor_(flavor), bc_(bc), alpha_(alpha) {}

  double alpha() const noexcept { return alpha_; }
  void set_alpha(double alpha) noexcept { alpha_ = alpha; }

  void step(std::vector<double>& q, double dt, double dx) {
    if (dt * alpha_ > dx * (1.0 + 1e-12)) throw CflViolation(dt, alpha_ > 0.0 ? dx / alpha_ : dt);
    const std::size_t n = q.size();
    fvals_.resize(n);
    fluxes_.resize(n + 1);
    for (std::size_t j = 0; j < n; ++j) fvals_[j] = flux_.f(q[j]);
    double ql, fl, qr, fr;
    if (bc_.is_periodic()) {
      ql = q[n - 1], fl = fvals_[n - 1], qr = q[0], fr = fvals_[0];
    } else {
      ql = bc_.left, fl = flux_.f(bc_.left), qr = bc_.right, fr = flux_.f(bc_.right);
    }
    fluxes_[0] = numerical(ql, q[0], fl, fvals_[0]);
    for (std::size_t k = 1; k < n; ++k) fluxes_[k] = numerical(q[k - 1], q[k], fvals_[k - 1], fvals_[k]);
    fluxes_[n] = bc_.is_periodic() ? fluxes_[0] : numerical(q[n - 1], qr, fvals_[n - 1], fr);
    const double r = dt / dx;
    for (std::size_t j = 0; j < n; ++j) q[j] -= r * (fluxes_[j + 1] - fluxes_[j]);
  }

 private:
  double numerical(double a, double b, double fa, double fb) const {
    if (flavor_ == MonotoneFlux::Godunov) return godunov_flux(a, b, flux_, fa, fb);
    return 0.5 * (fa + fb - alpha_ * (b - a));
  }

  FluxModel flux_;
  MonotoneFlux flavor_;
  BoundarySpec bc_;
  double alpha_;
  std::vector<double> fvals_;
  std::vector<double> fluxes_;
};

/// One monotone step; the wave-speed bound is taken over the data range.
inline std::vector<double> first_order_step(std::vector<double> qbar, const FluxModel& flux, double dt,
                                            double dx, MonotoneFlux flavor, const BoundarySpec& bc) {
  if (qbar.empty()) throw InvalidArgument("first_order_step: empty data");
  auto [lo, hi] = std::minmax_element(qbar.begin(), qbar.end());
  double qlo = *lo, qhi = *hi;
  if (!bc.is_periodic()) {
    qlo = std::min({qlo, bc.left, bc.right});
    qhi = std::max({qhi, bc.left, bc.right});
  }
  MonotoneStepper stepper(flux, flavor, bc, flux.max_abs_df(qlo, qhi));
  stepper.step(qbar, dt, dx);
  return qbar;
}

/// Unsplit 2D Godunov step on a Field2D (q only). Requires dt (alpha/dx + beta/dy) <= 1.
inline void first_order_step_2d(Field2D& u, const Flux2D& flux, double dt, double alpha, double beta,
                                const BoundarySpec& bc, std::vector<double>& scratch) {
  const Grid2D& g = u.grid();
  if (dt * (alpha / g.dx + beta / g.dy) > 1.0 + 1e-12)
    throw CflViolation(dt, 1.0 / (alpha / g.dx + beta / g.dy));
  fill_ghosts(u, bc);
  const int nx = g.nx, ny = g.ny;
  scratch.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  const double rx = dt / g.dx, ry = dt / g.dy;
  for (int j = 0; j < ny; ++j) {
    double qa = u.q(-1, j), fa = flux.fx.f(qa);
    for (int i = 0; i <= nx; ++i) {
      const double qb = u.q(i, j), fb = flux.fx.f(qb);
      const double F = godunov_flux(qa, qb, flux.fx, fa, fb);
      if (i > 0) scratch[j * nx + i - 1] -= rx * F;
      if (i < nx) scratch[j * nx + i] += rx * F;
      qa = qb, fa = fb;
    }
  }
  for (int i = 0; i < nx; ++i) {
    double qa = u.q(i, -1), fa = flux.fy.f(qa);
    for (int j = 0; j <= ny; ++j) {
      const double qb = u.q(i, j), fb = flux.fy.f(qb);
      const double G = godunov_flux(qa, qb, flux.fy, fa, fb);
      if (j > 0) scratch[(j - 1) * nx + i] -= ry * G;
      if (j < ny) scratch[j * nx + i] += ry * G;
      qa = qb, fa = fb;
    }
  }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) u.q(i, j) += scratch[j * nx + i];
}

/// Conservative restriction: average consecutive blocks of fine cells.
inline std::vector<double> restrict_conservative(const std::vector<double>& fine, int n_coarse) {
  const int n_fine = static_cast<int>(fine.size());
  if (n_coarse < 1 || n_fine % n_coarse != 0)
    throw InvalidArgument("restrict_conservative: " + std::to_string(n_fine) +
                          " fine cells are not divisible into " + std::to_string(n_coarse));
  const int r = n_fine / n_coarse;
  std::vector<double> out(n_coarse, 0.0);
  for (int k = 0; k < n_coarse; ++k) {
    double s = 0.0;
    for (int m = 0; m < r; ++m) s += fine[k * r + m];
    out[k] = s / r;
  }
  return out;
}

/// 2D analogue on row-major data (x fastest).
inline std::vector<double> restrict_conservative_2d(const std::vector<double>& fine, int nx_f, int ny_f,
                                                    int nx_c, int ny_c) {
  if (nx_c < 1 || ny_c < 1 || nx_f % nx_c != 0 || ny_f % ny_c != 0)
    throw InvalidArgument("restrict_conservative_2d: fine grid is not divisible into the coarse grid");
  const int rx = nx_f / nx_c, ry = ny_f / ny_c;
  std::vector<double> out(static_cast<std::size_t>(nx_c) * ny_c, 0.0);
  for (int j = 0; j < ny_f; ++j)
    for (int i = 0; i < nx_f; ++i) out[(j / ry) * nx_c + i / rx] += fine[j * nx_f + i];
  for (double& v : out) v /= rx * ry;
  return out;
}

struct ReferenceSolution {
  std::string case_name;
  std::string flux_name;
  std::string scheme = "godunov";
  int nx = 0;
  int ny = 0;  // 0 for 1D
  double cfl = 0.9;
  double t_end = 0.0;
  std::vector<double> x;
  std::vector<double> y;  // 2D only
  std::vector<double> qbar;

  std::string provenance() const {
    std::ostringstream os;
    os.precision(17);
    os << "# provenance: scheme=" << scheme << " flux=" << flux_name << " n=" << nx;
    if (ny > 0) os << "x" << ny;
    os << " cfl=" << cfl << " t=" << t_end;
    return os.str();
  }
};

namespace detail {

inline bool load_reference(const std::filesystem::path& path, ReferenceSolution& ref) {
  std::ifstream in(path);
  if (!in) return false;
  std::string line;
  if (!std::getline(in, line) || line != ref.provenance()) return false;
  if (!std::getline(in, line)) return false;
  const bool two_d = ref.ny > 0;
  if (line != (two_d ? "x,y,qbar" : "x,qbar,xibar")) return false;
  const std::size_t count = two_d ? static_cast<std::size_t>(ref.nx) * ref.ny : ref.nx;
  std::vector<double> q;
  q.reserve(count);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    std::vector<double> vals;
    while (std::getline(row, cell, ',')) {
      try {
        std::size_t used = 0;
        vals.push_back(std::stod(cell, &used));
        if (used != cell.size()) return false;
      } catch (const std::exception&) {
        return false;
      }
    }
    if (vals.size() != 3 || !std::isfinite(vals[two_d ? 2 : 1])) return false;
    q.push_back(vals[two_d ? 2 : 1]);
  }
  if (q.size() != count) return false;
  ref.qbar = std::move(q);
  return true;
}

inline void save_reference(const std::filesystem::path& path, const ReferenceSolution& ref) {
  std::filesystem::create_directories(path.parent_path());
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out.precision(17);
    out << ref.provenance() << "\n";
    if (ref.ny > 0) {
      out << "x,y,qbar\n";
      for (int j = 0; j < ref.ny; ++j)
        for (int i = 0; i < ref.nx; ++i)
          out << ref.x[i] << "," << ref.y[j] << "," << ref.qbar[j * ref.nx + i] << "\n";
    } else {
      out << "x,qbar,xibar\n";
      for (int j = 0; j < ref.nx; ++j) out << ref.x[j] << "," << ref.qbar[j] << ",0\n";
    }
  }
  std::filesystem::rename(tmp, path);
}

}  // namespace detail

inline std::filesystem::path reference_cache_path(const std::filesystem::path& dir, const ProblemCase& c,
                                                  int nx, int ny, double t_end) {
  std::ostringstream name;
  name << "ref_" << c.name << "_n" << nx;
  if (ny > 0) name << "x" << ny;
  name << "_t" << t_end << ".csv";
  return dir / name.str();
}

/// Godunov reference at CFL `cfl`, reloaded from `cache_dir` when the
/// provenance line matches; an unreadable cache is recomputed and overwritten.
inline ReferenceSolution reference_solution(const ProblemCase& c, int n_cells, double t_end,
                                            const std::filesystem::path& cache_dir, double cfl = 0.9) {
  if (c.dimension != 1) throw InvalidArgument("reference_solution: use reference_solution_2d for " + c.name);
  const Grid1D grid = build_grid(c.ax, c.bx, n_cells);
  ReferenceSolution ref;
  ref.case_name = c.name;
  ref.flux_name = c.flux_name;
  ref.nx = n_cells;
  ref.cfl = cfl;
  ref.t_end = t_end;
  ref.x.resize(n_cells);
  for (int j = 0; j < n_cells; ++j) ref.x[j] = grid.center(j);

  std::filesystem::path path;
  if (!cache_dir.empty()) {
    path = reference_cache_path(cache_dir, c, n_cells, 0, t_end);
    if (std::filesystem::exists(path)) {
      if (detail::load_reference(path, ref)) return ref;
      std::cerr << "warning: reference cache " << path << " is unreadable or stale; recomputing\n";
    }
  }

  const Field1D init = init_field(grid, c.q0, 5, c.jumps);
  std::vector<double> q(init.qbar().begin(), init.qbar().end());
  const FluxModel flux = builtin_flux_1d(c.flux_name);
  MonotoneStepper stepper(flux, MonotoneFlux::Godunov, c.boundary, global_alpha(flux, c.qmin, c.qmax));
  const double dt_max = stepper.alpha() > 0.0 ? cfl * grid.dx / stepper.alpha() : t_end;
  double t = 0.0;
  while (t < t_end) {
    const double dt = std::min(dt_max, t_end - t);
    stepper.step(q, dt, grid.dx);
    t = (t_end - t <= dt_max) ? t_end : t + dt;
  }
  for (double v : q)
    if (!std::isfinite(v)) throw NumericalError("reference_solution: non-finite value for " + c.name);
  ref.qbar = std::move(q);
  if (!path.empty()) detail::save_reference(path, ref);
  return ref;
}

/// First-order 2D reference (unsplit Godunov), cached the same way.
inline ReferenceSolution reference_solution_2d(const ProblemCase& c, int nx, int ny, double t_end,
                                               const std::filesystem::path& cache_dir, double cfl = 0.9) {
  if (c.dimension != 2) throw InvalidArgument("reference_solution_2d: case is one-dimensional");
  const Grid2D grid = build_grid(c.ax, c.bx, nx, c.ay, c.by, ny);
  ReferenceSolution ref;
  ref.case_name = c.name;
  ref.flux_name = c.flux_name;
  ref.nx = nx;
  ref.ny = ny;
  ref.cfl = cfl;
  ref.t_end = t_end;
  for (int i = 0; i < nx; ++i) ref.x.push_back(grid.center_x(i));
  for (int j = 0; j < ny; ++j) ref.y.push_back(grid.center_y(j));

  std::filesystem::path path;
  if (!cache_dir.empty()) {
    path = reference_cache_path(cache_dir, c, nx, ny, t_end);
    if (std::filesystem::exists(path)) {
      if (detail::load_reference(path, ref)) return ref;
      std::cerr << "warning: reference cache " << path << " is unreadable or stale; recomputing\n";
    }
  }

  Field2D u = init_field(grid, c.q0_2d, 5);
  const Flux2D flux = builtin_flux_2d(c.flux_name);
  const double alpha = global_alpha(flux.fx, c.qmin, c.qmax);
  const double beta = global_alpha(flux.fy, c.qmin, c.qmax);
  const double dt_max = cfl / (alpha / grid.dx + beta / grid.dy);
  std::vector<double> scratch;
  double t = 0.0;
  while (t < t_end) {
    const double dt = std::min(dt_max, t_end - t);
    first_order_step_2d(u, flux, dt, alpha, beta, c.boundary, scratch);
    t = (t_end - t <= dt_max) ? t_end : t + dt;
  }
  ref.qbar = u.qbar_interior();
  for (double v : ref.qbar)
    if (!std::isfinite(v)) throw NumericalError("reference_solution_2d: non-finite value for " + c.name);
  if (!path.empty()) detail::save_reference(path, ref);
  return ref;
}

}  // namespace hweno
