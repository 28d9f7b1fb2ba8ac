#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/grid.hpp"
#include "hweno/guard.hpp"
#include "hweno/reconstruction.hpp"
#include "hweno/reference.hpp"

namespace hweno {

enum class Reconstruction { Hweno5, Weno5, Hweno4, Weno5_2D };
enum class Modification { None, Mod1, Mod2 };

/// Cfl: dt = cfl dx / alpha. Accuracy: dt = cfl dx^(5/3) / alpha, which keeps the
/// third-order time error below the fifth-order spatial error in convergence studies.
enum class TimeStepRule { Cfl, Accuracy };

inline bool is_two_dimensional(Reconstruction r) noexcept {
  return r == Reconstruction::Hweno4 || r == Reconstruction::Weno5_2D;
}

/// Whether the scheme evolves gradient averages (the Hermite schemes do).
inline bool evolves_gradients(Reconstruction r) noexcept {
  return r == Reconstruction::Hweno5 || r == Reconstruction::Hweno4;
}

struct SchemeConfig {
  Reconstruction reconstruction = Reconstruction::Hweno5;
  Modification modification = Modification::None;
  bool mp_limiter = false;
  double cfl = 0.5;
  double epsilon_indicator = 1e-6;
  double epsilon_weights = 1e-6;
  std::optional<int> n_sub;
  PhiVariant phi_variant = PhiVariant::Printed;
  TimeStepRule dt_rule = TimeStepRule::Cfl;
  /// Clamp dx |xibar_j| to the range of qbar over {j-1, j, j+1} after each stage.
  bool derivative_bound = true;

  void validate(int dimension) const {
    if (!(cfl > 0.0)) throw InvalidArgument("scheme: cfl must be positive");
    if (!(epsilon_indicator > 0.0) || !(epsilon_weights > 0.0))
      throw InvalidArgument("scheme: epsilon values must be positive");
    if (dimension == 1 && is_two_dimensional(reconstruction))
      throw InvalidArgument("scheme: two-dimensional reconstruction on a 1D case");
    if (dimension == 2 && !is_two_dimensional(reconstruction))
      throw InvalidArgument("scheme: one-dimensional reconstruction on a 2D case");
    if (modification == Modification::Mod2 && dimension != 1)
      throw InvalidArgument("scheme: mod2 is implemented for 1D problems only");
    if (mp_limiter && reconstruction != Reconstruction::Hweno5)
      throw InvalidArgument("scheme: the MP limiter applies to hweno5 only");
    if (n_sub && *n_sub < 2) throw InvalidArgument("scheme: n_sub must be at least 2");
  }
};

/// Flux for the gradient equation, H(q, xi) = f'(q) xi.
inline double lf_flux_H(double a, double b, double c, double d, const FluxModel& f, double alpha) {
  return 0.5 * (f.df(a) * c + f.df(b) * d - alpha * (d - c));
}

inline double cfl_dt(const Grid1D& g, double alpha, double cfl, TimeStepRule rule = TimeStepRule::Cfl) {
  if (!(alpha > 0.0)) return std::numeric_limits<double>::infinity();
  const double dt = cfl * g.dx / alpha;
  return rule == TimeStepRule::Accuracy ? dt * std::cbrt(g.dx * g.dx) : dt;
}

inline double cfl_dt(const Grid2D& g, double alpha, double beta, double cfl,
                     TimeStepRule rule = TimeStepRule::Cfl) {
  const double rate = alpha / g.dx + beta / g.dy;
  if (!(rate > 0.0)) return std::numeric_limits<double>::infinity();
  const double h = std::max(g.dx, g.dy);
  return rule == TimeStepRule::Accuracy ? cfl / rate * std::cbrt(h * h) : cfl / rate;
}

/// Third-order SSP Runge-Kutta. `residual(state, out)` writes L(state) into out;
/// `after_stage(k, state)` is called with each completed stage (k = 1, 2, 3).
template <class State, class Residual, class Hook>
void ssp_rk3_step(State& u, double dt, Residual&& residual, Hook&& after_stage) {
  State r = u;
  residual(u, r);
  State u1 = u;
  u1.axpby(1.0, dt, r);
  after_stage(1, u1);
  residual(u1, r);
  State u2 = u1;
  u2.axpby(1.0, dt, r);
  u2.axpby(0.25, 0.75, u);
  after_stage(2, u2);
  residual(u2, r);
  State u3 = u2;
  u3.axpby(1.0, dt, r);
  u3.axpby(2.0 / 3.0, 1.0 / 3.0, u);
  u = std::move(u3);
  after_stage(3, u);
}

template <class State, class Residual>
void ssp_rk3_step(State& u, double dt, Residual&& residual) {
  ssp_rk3_step(u, dt, std::forward<Residual>(residual), [](int, const State&) {});
}

struct TroubleStats {
  std::size_t stages = 0;
  std::size_t troubled_interfaces = 0;
  std::size_t interfaces = 0;
  std::size_t troubled_cells = 0;
  std::size_t cells = 0;

  double interface_fraction() const { return interfaces ? double(troubled_interfaces) / interfaces : 0.0; }
  double cell_fraction() const { return cells ? double(troubled_cells) / cells : 0.0; }
};

/// Semi-discrete operator for 1D FV HWENO5 / WENO5 with the optional
/// modifications. The operator owns the mod2 stage state (entropic traces).
class Solver1D {
 public:
  Solver1D(const Grid1D& grid, FluxModel flux, BoundarySpec bc, SchemeConfig scheme, double alpha)
      : grid_(grid),
        flux_(std::move(flux)),
        bc_(bc),
        scheme_(scheme),
        alpha_(alpha),
        updater_(flux_, scheme.n_sub.value_or(default_n_sub(grid.dx))) {
    scheme_.validate(1);
    const int n = grid.n_cells;
    for (auto* v : {&face_qr_, &face_ql_, &face_xr_, &face_xl_}) v->assign(n + 2, 0.0);
    for (auto* v : {&qm_, &qp_, &xm_, &xp_, &fq_, &fx_}) v->assign(n + 1, 0.0);
    trace_ = CellTrace(n);
    next_trace_ = CellTrace(n);
    pending_good_.assign(n, 0);
    next_good_.assign(n, 0);
  }

  const Grid1D& grid() const noexcept { return grid_; }
  const SchemeConfig& scheme() const noexcept { return scheme_; }
  const FluxModel& flux() const noexcept { return flux_; }
  double alpha() const noexcept { return alpha_; }
  const TroubleStats& stats() const noexcept { return stats_; }
  const CellTrace& trace() const noexcept { return trace_; }
  int n_sub() const noexcept { return updater_.n_sub(); }

  /// Seed the entropic traces from MUSCL minmod data (mod2).
  void initialize(Field1D& u) {
    fill_ghosts(u, bc_);
    trace_ = muscl_trace(u);
    trace_.fill_ghosts(bc_);
    std::fill(pending_good_.begin(), pending_good_.end(), 0);
  }

  /// Face values of cell j after the last residual evaluation (j = -1..n).
  double face_q_right(int j) const { return face_qr_[j + 1]; }
  double face_q_left(int j) const { return face_ql_[j + 1]; }
  /// Interface traces of x_{k-1/2} (k = 0..n) after modification.
  double interface_q_minus(int k) const { return qm_[k]; }
  double interface_q_plus(int k) const { return qp_[k]; }

  /// Phase 1-2: ghost fill and reconstruction of all face values.
  void reconstruct(Field1D& u) {
    fill_ghosts(u, bc_);
    const int n = grid_.n_cells;
    const WeightOptions wopt{scheme_.epsilon_weights, false};
    const double dx = grid_.dx;
    const double* q = u.q_data();
    const double* xi = u.xi_data();
    if (scheme_.reconstruction == Reconstruction::Hweno5) {
      const Hweno5& h = Hweno5::instance();
      for (int j = -1; j <= n; ++j) {
        const CellFaceValues v = h.reconstruct(q + j - 1, xi + j - 1, dx, wopt);
        double qr = v.q_right, ql = v.q_left;
        if (scheme_.mp_limiter) {
          const double rev[5] = {q[j + 2], q[j + 1], q[j], q[j - 1], q[j - 2]};
          qr = detail::mp_limit_right(qr, q + j - 2);
          ql = detail::mp_limit_right(ql, rev);
        }
        face_qr_[j + 1] = qr;
        face_ql_[j + 1] = ql;
        face_xr_[j + 1] = v.xi_right;
        face_xl_[j + 1] = v.xi_left;
      }
    } else {
      const Weno5& w = Weno5::faces();
      for (int j = -1; j <= n; ++j) {
        double out[2];
        w.reconstruct(q + j - 2, out, wopt);
        face_qr_[j + 1] = out[0];
        face_ql_[j + 1] = out[1];
        face_xr_[j + 1] = 0.0;
        face_xl_[j + 1] = 0.0;
      }
    }
  }

  /// L(u): dqbar/dt and dxibar/dt in flux-difference form.
  void residual(Field1D& u, Field1D& out) {
    const int n = grid_.n_cells;
    reconstruct(u);
    const bool mod2 = scheme_.modification == Modification::Mod2;
    if (mod2) {
      for (int j = 0; j < n; ++j) {
        if (!pending_good_[j]) continue;
        trace_.l(j) = face_ql_[j + 1];
        trace_.r(j) = face_qr_[j + 1];
      }
      trace_.fill_ghosts(bc_);
    }
    for (int k = 0; k <= n; ++k) {
      qm_[k] = face_qr_[k];
      qp_[k] = face_ql_[k + 1];
      xm_[k] = face_xr_[k];
      xp_[k] = face_xl_[k + 1];
    }
    ++stats_.stages;
    if (scheme_.modification != Modification::None) modify(u);
    assemble(u, out);
    if (mod2) refresh_traces(u);
  }

  void step(Field1D& u, double dt) {
    dt_ = dt;
    auto l = [this](Field1D& s, Field1D& r) { residual(s, r); };
    if (scheme_.derivative_bound && evolves_gradients(scheme_.reconstruction)) {
      ssp_rk3_step(u, dt, l, [this](int, Field1D& s) { bound_derivatives(s); });
    } else {
      ssp_rk3_step(u, dt, l);
    }
  }

  void bound_derivatives(Field1D& u) const {
    fill_ghosts(u, bc_);
    const double inv = 1.0 / grid_.dx;
    for (int j = 0; j < grid_.n_cells; ++j) {
      const double a = u.q(j - 1), b = u.q(j), c = u.q(j + 1);
      const double cap = (std::max({a, b, c}) - std::min({a, b, c})) * inv;
      u.xi(j) = std::clamp(u.xi(j), -cap, cap);
    }
  }

 private:
  void modify(const Field1D& u) {
    const int n = grid_.n_cells;
    const auto qs = u.qbar();
    const auto [lo, hi] = std::minmax_element(qs.begin(), qs.end());
    const double qmin = *lo, qmax = *hi;
    const bool mod2 = scheme_.modification == Modification::Mod2;
    const double* q = u.q_data();
    stats_.interfaces += n + 1;
    for (int k = 0; k <= n; ++k) {
      const double ql = u.q(k - 1), qr = u.q(k);
      if (criterion_I(qm_[k], qp_[k], ql, qr, flux_)) continue;
      ++stats_.troubled_interfaces;
      const double phi =
          detail::indicator_phi_at(q + k - 1, qmax, qmin, scheme_.epsilon_indicator, scheme_.phi_variant);
      const double target_m = mod2 ? trace_.r(k - 1) : ql;
      const double target_p = mod2 ? trace_.l(k) : qr;
      qm_[k] = blend_toward(qm_[k], target_m, phi);
      qp_[k] = blend_toward(qp_[k], target_p, phi);
      xm_[k] = blend_toward(xm_[k], u.xi(k - 1), phi);
      xp_[k] = blend_toward(xp_[k], u.xi(k), phi);
    }
  }

  void assemble(const Field1D& u, Field1D& out) {
    const int n = grid_.n_cells;
    const bool grad = evolves_gradients(scheme_.reconstruction);
    for (int k = 0; k <= n; ++k) {
      const double a = qm_[k], b = qp_[k];
      double fa = 0.0, fb = 0.0, da = 0.0, db = 0.0;
      flux_.f_df(a, fa, da);
      flux_.f_df(b, fb, db);
      fq_[k] = 0.5 * (fa + fb - alpha_ * (b - a));
      if (grad) fx_[k] = 0.5 * (da * xm_[k] + db * xp_[k] - alpha_ * (xp_[k] - xm_[k]));
      if (!std::isfinite(fq_[k]) || (grad && !std::isfinite(fx_[k])))
        throw NumericalError("residual_1d: non-finite flux at interface " + std::to_string(k));
    }
    (void)u;
    const double inv = 1.0 / grid_.dx;
    for (int j = 0; j < n; ++j) {
      out.q(j) = -(fq_[j + 1] - fq_[j]) * inv;
      out.xi(j) = grad ? -(fx_[j + 1] - fx_[j]) * inv : 0.0;
    }
    for (int k = 1; k <= grid_.ghost_width; ++k) {
      out.q(-k) = out.xi(-k) = 0.0;
      out.q(n - 1 + k) = out.xi(n - 1 + k) = 0.0;
    }
  }

  /// Criterion II on every cell; troubled cells get traces from the refined
  /// patch evolution, good cells take the next stage's reconstruction.
  void refresh_traces(const Field1D& u) {
    const int n = grid_.n_cells;
    stats_.cells += n;
    for (int j = 0; j < n; ++j) {
      std::array<CellRegionData, 3> cells;
      for (int m = 0; m < 3; ++m) {
        const int c = j - 1 + m;
        cells[m] = {u.q(c), face_ql_[c + 1], face_qr_[c + 1], trace_.l(c), trace_.r(c)};
      }
      if (criterion_II(cells, flux_)) {
        next_good_[j] = 1;
        continue;
      }
      ++stats_.troubled_cells;
      next_good_[j] = 0;
      Patch p;
      for (int m = 0; m < 3; ++m) {
        const int c = j - 1 + m;
        p.qbar[m] = u.q(c);
        p.q_l[m] = trace_.l(c);
        p.q_r[m] = trace_.r(c);
      }
      const EntropicProjection e = updater_.update(p, dt_, grid_.dx, j);
      next_trace_.l(j) = e.q_l;
      next_trace_.r(j) = e.q_r;
    }
    for (int j = 0; j < n; ++j) {
      if (!next_good_[j]) {
        trace_.l(j) = next_trace_.l(j);
        trace_.r(j) = next_trace_.r(j);
      }
    }
    pending_good_.swap(next_good_);
  }

  Grid1D grid_;
  FluxModel flux_;
  BoundarySpec bc_;
  SchemeConfig scheme_;
  double alpha_;
  double dt_ = 0.0;
  EntropicUpdater updater_;
  std::vector<double> face_qr_, face_ql_, face_xr_, face_xl_;
  std::vector<double> qm_, qp_, xm_, xp_, fq_, fx_;
  CellTrace trace_, next_trace_;
  std::vector<char> pending_good_, next_good_;
  TroubleStats stats_;
};

}  // namespace hweno
