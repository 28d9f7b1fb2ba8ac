#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/grid.hpp"
#include "hweno/guard.hpp"
#include "hweno/reconstruction.hpp"
#include "hweno/solver1d.hpp"

namespace hweno {

/// Semi-discrete operator for 2D FV HWENO4 / WENO5 with optional mod1.
class Solver2D {
 public:
  Solver2D(const Grid2D& grid, Flux2D flux, BoundarySpec bc, SchemeConfig scheme, double alpha, double beta)
      : grid_(grid), flux_(std::move(flux)), bc_(bc), scheme_(scheme), alpha_(alpha), beta_(beta) {
    scheme_.validate(2);
    trace_.nx = grid.nx;
    trace_.ny = grid.ny;
    trace_.vertical.resize(std::size_t(grid.nx + 1) * grid.ny * EdgeTrace2D::L);
    trace_.horizontal.resize(std::size_t(grid.nx) * (grid.ny + 1) * EdgeTrace2D::L);
    fv_.assign(std::size_t(grid.nx + 1) * grid.ny * 3, 0.0);
    fh_.assign(std::size_t(grid.nx) * (grid.ny + 1) * 3, 0.0);
  }

  const Grid2D& grid() const noexcept { return grid_; }
  const SchemeConfig& scheme() const noexcept { return scheme_; }
  const TroubleStats& stats() const noexcept { return stats_; }
  const EdgeTrace2D& trace() const noexcept { return trace_; }
  double alpha() const noexcept { return alpha_; }
  double beta() const noexcept { return beta_; }

  /// Edge Gauss-point values of all edges (after ghost fill).
  void reconstruct(Field2D& u) {
    fill_ghosts(u, bc_);
    const int nx = grid_.nx, ny = grid_.ny;
    const WeightOptions wopt{scheme_.epsilon_weights, false};
    const bool hermite = scheme_.reconstruction == Reconstruction::Hweno4;
    EdgePointValues2D v;
    for (int j = -1; j <= ny; ++j) {
      for (int i = -1; i <= nx; ++i) {
        const bool in_x = i >= 0 && i < nx, in_y = j >= 0 && j < ny;
        if (!in_x && !in_y) continue;
        if (hermite) {
          v = hweno4_edge_values(u, i, j, wopt);
        } else {
          v.q = weno5_edge_values_2d(u, i, j, wopt);
        }
        for (int a = 0; a < EdgeTrace2D::L; ++a) {
          if (in_y && i + 1 <= nx && i + 1 >= 0) put(trace_.vertical, trace_.v_index(i + 1, j, a), true, v, 0 + a);
          if (in_y && i >= 0 && i <= nx) put(trace_.vertical, trace_.v_index(i, j, a), false, v, 2 + a);
          if (in_x && j + 1 <= ny && j + 1 >= 0) put(trace_.horizontal, trace_.h_index(i, j + 1, a), true, v, 4 + a);
          if (in_x && j >= 0 && j <= ny) put(trace_.horizontal, trace_.h_index(i, j, a), false, v, 6 + a);
        }
      }
    }
  }

  void residual(Field2D& u, Field2D& out) {
    reconstruct(u);
    ++stats_.stages;
    if (scheme_.modification == Modification::Mod1) {
      const auto q = u.qbar_interior();
      const auto [lo, hi] = std::minmax_element(q.begin(), q.end());
      const TroubleFlags2D flags =
          detect_2d(trace_, u, flux_, *hi, *lo, scheme_.epsilon_indicator, scheme_.phi_variant);
      stats_.interfaces += trace_.vertical.q_minus.size() + trace_.horizontal.q_minus.size();
      stats_.troubled_interfaces += flags.troubled;
      apply_mod1_2d(trace_, flags, u);
    }
    assemble(out);
  }

  void step(Field2D& u, double dt) {
    auto l = [this](Field2D& s, Field2D& r) { residual(s, r); };
    if (scheme_.derivative_bound && evolves_gradients(scheme_.reconstruction)) {
      ssp_rk3_step(u, dt, l, [this](int, Field2D& s) { bound_derivatives(s); });
    } else {
      ssp_rk3_step(u, dt, l);
    }
  }

  /// dx |xibar| and dy |etabar| clamped to the qbar range of the row and column neighbours.
  void bound_derivatives(Field2D& u) const {
    fill_ghosts(u, bc_);
    const double ix = 1.0 / grid_.dx, iy = 1.0 / grid_.dy;
    for (int j = 0; j < grid_.ny; ++j) {
      for (int i = 0; i < grid_.nx; ++i) {
        const double c = u.q(i, j);
        const double w = u.q(i - 1, j), e = u.q(i + 1, j), s = u.q(i, j - 1), n = u.q(i, j + 1);
        const double cx = (std::max({w, c, e}) - std::min({w, c, e})) * ix;
        const double cy = (std::max({s, c, n}) - std::min({s, c, n})) * iy;
        u.xi(i, j) = std::clamp(u.xi(i, j), -cx, cx);
        u.eta(i, j) = std::clamp(u.eta(i, j), -cy, cy);
      }
    }
  }

 private:
  static void put(EdgeTrace2D::Side& s, std::size_t k, bool minus, const EdgePointValues2D& v, int p) {
    if (minus) {
      s.q_minus[k] = v.q[p];
      s.xi_minus[k] = v.xi[p];
      s.eta_minus[k] = v.eta[p];
    } else {
      s.q_plus[k] = v.q[p];
      s.xi_plus[k] = v.xi[p];
      s.eta_plus[k] = v.eta[p];
    }
  }

  /// Gauss-averaged LF fluxes of (q, xi, eta) over one edge.
  static void edge_flux(const EdgeTrace2D::Side& s, std::size_t k0, const FluxModel& f, double a, bool grad,
                        double* F) {
    F[0] = F[1] = F[2] = 0.0;
    for (int g = 0; g < EdgeTrace2D::L; ++g) {
      const std::size_t k = k0 + g;
      const double qm = s.q_minus[k], qp = s.q_plus[k];
      double fm = 0.0, fp = 0.0, dm = 0.0, dp = 0.0;
      f.f_df(qm, fm, dm);
      f.f_df(qp, fp, dp);
      F[0] += 0.25 * (fm + fp - a * (qp - qm));
      if (grad) {
        F[1] += 0.25 * (dm * s.xi_minus[k] + dp * s.xi_plus[k] - a * (s.xi_plus[k] - s.xi_minus[k]));
        F[2] += 0.25 * (dm * s.eta_minus[k] + dp * s.eta_plus[k] - a * (s.eta_plus[k] - s.eta_minus[k]));
      }
    }
  }

  void assemble(Field2D& out) {
    const int nx = grid_.nx, ny = grid_.ny;
    const bool grad = evolves_gradients(scheme_.reconstruction);
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i <= nx; ++i)
        edge_flux(trace_.vertical, trace_.v_index(i, j, 0), flux_.fx, alpha_, grad, &fv_[3 * (j * (nx + 1) + i)]);
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i < nx; ++i)
        edge_flux(trace_.horizontal, trace_.h_index(i, j, 0), flux_.fy, beta_, grad, &fh_[3 * (j * nx + i)]);
    const double ix = 1.0 / grid_.dx, iy = 1.0 / grid_.dy;
    out.fill(0.0);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        const double* w = &fv_[3 * (j * (nx + 1) + i)];
        const double* e = w + 3;
        const double* s = &fh_[3 * (j * nx + i)];
        const double* n = &fh_[3 * ((j + 1) * nx + i)];
        out.q(i, j) = -(e[0] - w[0]) * ix - (n[0] - s[0]) * iy;
        if (!std::isfinite(out.q(i, j)))
          throw NumericalError("residual_2d: non-finite residual at cell (" + std::to_string(i) + ", " +
                               std::to_string(j) + ")");
        if (grad) {
          out.xi(i, j) = -(e[1] - w[1]) * ix - (n[1] - s[1]) * iy;
          out.eta(i, j) = -(e[2] - w[2]) * ix - (n[2] - s[2]) * iy;
        }
      }
    }
  }

  Grid2D grid_;
  Flux2D flux_;
  BoundarySpec bc_;
  SchemeConfig scheme_;
  double alpha_, beta_;
  EdgeTrace2D trace_;
  std::vector<double> fv_, fh_;
  TroubleStats stats_;
};

}  // namespace hweno
