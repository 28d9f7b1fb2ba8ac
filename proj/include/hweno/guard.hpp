#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/reconstruction.hpp"
#include "hweno/reference.hpp"

namespace hweno {

enum class PhiVariant { Printed, Symmetric };

namespace detail {

/// phi_j with q pointing at qbar_j; reads qbar_{j-2..j+2}.
inline double indicator_phi_at(const double* q, double qmax, double qmin, double eps, PhiVariant variant) {
  const double range = qmax - qmin;
  if (range < 1e-14) return 0.0;
  auto alpha = [&](int k) {
    const double d = q[k - 1] - q[k];
    return d * d + eps;
  };
  const double d = q[1] - q[-1];
  const double tau = d * d + eps;
  const double beta = tau / alpha(-1) + tau / alpha(variant == PhiVariant::Printed ? 2 : 1);
  const double gamma = range * range / alpha(0);
  return beta / (beta + gamma);
}

}  // namespace detail

/// Discontinuity indicator for the interface x_{j+1/2} from (qbar_{j-2}, ..., qbar_{j+2}).
inline double indicator_phi(std::span<const double, 5> window, double qmax, double qmin, double eps = 1e-6,
                            PhiVariant variant = PhiVariant::Printed) {
  return detail::indicator_phi_at(window.data() + 2, qmax, qmin, eps, variant);
}

/// Good iff q^-_{j+1/2}, q^+_{j+1/2}, qbar_j, qbar_{j+1} share one convexity region.
inline bool criterion_I(double q_minus, double q_plus, double qbar_left, double qbar_right, const FluxModel& f) {
  const std::size_t r = f.classify_region(q_minus);
  return f.classify_region(q_plus) == r && f.classify_region(qbar_left) == r &&
         f.classify_region(qbar_right) == r;
}

/// (1 - phi^2) value + phi^2 target.
inline double blend_toward(double value, double target, double phi) {
  const double p2 = phi * phi;
  return (1.0 - p2) * value + p2 * target;
}

struct InterfaceValues {
  double q_minus = 0.0;
  double q_plus = 0.0;
  double xi_minus = 0.0;
  double xi_plus = 0.0;
};

/// First-order monotone modification at a troubled interface.
inline InterfaceValues mod1_blend(const InterfaceValues& v, double qbar_left, double qbar_right,
                                  double xibar_left, double xibar_right, double phi) {
  return {blend_toward(v.q_minus, qbar_left, phi), blend_toward(v.q_plus, qbar_right, phi),
          blend_toward(v.xi_minus, xibar_left, phi), blend_toward(v.xi_plus, xibar_right, phi)};
}

/// Per-cell entropic boundary values carried across RK stages, with one ghost
/// cell on each side (index j + 1 for cell j).
struct CellTrace {
  std::vector<double> q_l;
  std::vector<double> q_r;

  explicit CellTrace(int n_cells = 0) : q_l(n_cells + 2, 0.0), q_r(n_cells + 2, 0.0) {}
  int size() const noexcept { return static_cast<int>(q_l.size()) - 2; }
  double& l(int j) { return q_l[j + 1]; }
  double& r(int j) { return q_r[j + 1]; }
  double l(int j) const { return q_l[j + 1]; }
  double r(int j) const { return q_r[j + 1]; }

  void fill_ghosts(const BoundarySpec& bc) {
    const int n = size();
    if (bc.is_periodic()) {
      l(-1) = l(n - 1), r(-1) = r(n - 1);
      l(n) = l(0), r(n) = r(0);
    } else {
      l(-1) = r(-1) = bc.left;
      l(n) = r(n) = bc.right;
    }
  }
};

/// MUSCL minmod traces qbar -/+ s/2 used before the first stage.
inline CellTrace muscl_trace(const Field1D& u) {
  CellTrace t(u.size());
  for (int j = 0; j < u.size(); ++j) {
    const double s = muscl_slope(u.q(j - 1), u.q(j), u.q(j + 1));
    t.l(j) = u.q(j) - 0.5 * s;
    t.r(j) = u.q(j) + 0.5 * s;
  }
  return t;
}

/// Data of cell m needed by Criterion II: average, own face values, entropic trace.
struct CellRegionData {
  double qbar, q_face_left, q_face_right, q_l, q_r;
};

/// Good iff all fifteen values of cells j-1, j, j+1 share one convexity region.
inline bool criterion_II(std::span<const CellRegionData, 3> cells, const FluxModel& f) {
  const std::size_t r = f.classify_region(cells[0].qbar);
  for (const auto& c : cells) {
    for (double v : {c.qbar, c.q_face_left, c.q_face_right, c.q_l, c.q_r})
      if (f.classify_region(v) != r) return false;
  }
  return true;
}

/// Patch of three cells I_{j-1}, I_j, I_{j+1}.
struct Patch {
  std::array<double, 3> qbar{};
  std::array<double, 3> q_l{};
  std::array<double, 3> q_r{};
};

struct EntropicProjection {
  double avg = 0.0;
  double slope = 0.0;
  double q_l = 0.0;
  double q_r = 0.0;
};

/// Refined first-order evolution of a troubled cell's patch followed by the
/// entropic projection of I_j onto a linear profile.
///
/// Sub-cells: 3 n_sub on the periodic patch, each of width dx / n_sub. Slopes
/// are dimensionless: the profile on a cell is avg + slope * sigma with
/// sigma = (x - x_j) / dx in [-1/2, 1/2].
class EntropicUpdater {
 public:
  EntropicUpdater(FluxModel flux, int n_sub, bool full_patch = false)
      : flux_(std::move(flux)),
        n_sub_(n_sub),
        full_patch_(full_patch),
        stepper_(flux_, MonotoneFlux::Godunov, BoundarySpec::periodic(), 0.0) {
    if (n_sub < 2) throw InvalidArgument("entropic_cell_update: n_sub must be at least 2");
  }

  int n_sub() const noexcept { return n_sub_; }

  /// Sub-cell values of the whole patch after the evolution; full-patch mode only.
  const std::vector<double>& sub_cells() const noexcept { return v_; }
  /// Sub-cell values of the initial piecewise-linear data; full-patch mode only.
  const std::vector<double>& initial_sub_cells() const noexcept { return v0_; }
  /// The n evolved sub-cells of the centre cell I_j (valid after update()).
  std::span<const double> centre_cells() const noexcept {
    return {(full_patch_ ? v_ : w_).data() + centre_offset_, std::size_t(n_sub_)};
  }
  /// Number of sub-steps taken by the last update().
  int sub_steps() const noexcept { return sub_steps_; }

  /// Unless the updater evolves the full patch, only I_j and a margin of as many
  /// sub-cells as sub-steps are built and advanced: I_j cannot see further.
  EntropicProjection update(const Patch& p, double dt, double dx, int cell_index = -1) {
    if (!(dt >= 0.0)) throw InvalidArgument("entropic_cell_update: dt must be non-negative");
    const int n = n_sub_;
    std::array<double, 3> slope;
    for (int l = 0; l < 3; ++l) slope[l] = 2.0 * minmod2(p.q_r[l] - p.qbar[l], p.qbar[l] - p.q_l[l]);
    const auto value = [&](int i) {
      const int l = i / n, k = i % n;
      return p.qbar[l] + slope[l] * ((k + 0.5) / n - 0.5);
    };
    // each piece is monotone in k, so its end sub-cells bound the patch
    double lo = value(0), hi = lo;
    for (int l = 0; l < 3; ++l)
      for (int i : {l * n, l * n + n - 1}) {
        const double v = value(i);
        lo = std::min(lo, v), hi = std::max(hi, v);
      }
    const double alpha = flux_.max_abs_df(lo, hi);
    const double delta = dx / n;
    const double dt_sub = alpha > 0.0 ? 0.9 * delta / alpha : dt;

    int steps = 0;
    for (double t = 0.0; t < dt; ++steps) t = (dt - t <= dt_sub) ? dt : t + std::min(dt_sub, dt - t);
    sub_steps_ = steps;
    const int margin = full_patch_ ? n : std::min(n, steps);
    w_.resize(std::size_t(n + 2 * margin));
    for (int i = 0; i < n + 2 * margin; ++i) w_[i] = value(n - margin + i);
    if (full_patch_) v0_ = w_;

    stepper_.set_alpha(alpha);
    double t = 0.0;
    int step = 0;
    while (t < dt) {
      const double h = std::min(dt_sub, dt - t);
      stepper_.step(w_, h, delta);
      ++step;
      t = (dt - t <= dt_sub) ? dt : t + h;
      for (double v : w_)
        if (!std::isfinite(v))
          throw NumericalError("entropic_cell_update: non-finite value in cell " + std::to_string(cell_index) +
                               " at sub-step " + std::to_string(step));
    }
    if (full_patch_) v_ = w_;
    centre_offset_ = margin;
    return project(w_.data() + margin, n);
  }

  /// Entropic projection of n sub-cell values covering one cell.
  static EntropicProjection project(const double* v, int n) {
    double total = 0.0;
    for (int k = 0; k < n; ++k) total += v[k];
    const double mean = total / n;
    // zeta at the faces is one-sided; interior zeta compares the mean right and
    // left of each sub-cell boundary. The slope is the interval minmod over all.
    const double first = 2.0 * (mean - v[0]);
    double slope = first;
    bool zero = first == 0.0;
    const auto fold = [&](double z) {
      if (zero) return;
      if (z * first <= 0.0) {
        zero = true;
        return;
      }
      slope = first > 0.0 ? std::min(slope, z) : std::max(slope, z);
    };
    double prefix = 0.0;
    for (int m = 1; m < n && !zero; ++m) {
      prefix += v[m - 1];
      const double left = prefix / m;
      const double right = (total - prefix) / (n - m);
      fold(2.0 * (right - left));
    }
    fold(2.0 * (v[n - 1] - mean));
    EntropicProjection out;
    out.avg = mean;
    out.slope = zero ? 0.0 : slope;
    out.q_l = mean - 0.5 * out.slope;
    out.q_r = mean + 0.5 * out.slope;
    return out;
  }

 private:
  FluxModel flux_;
  int n_sub_;
  bool full_patch_;
  MonotoneStepper stepper_;
  int sub_steps_ = 0;
  int centre_offset_ = 0;
  std::vector<double> v_;
  std::vector<double> v0_;
  std::vector<double> w_;
};

inline EntropicProjection entropic_cell_update(const Patch& p, const FluxModel& flux, double dt, double dx,
                                               int n_sub) {
  EntropicUpdater u(flux, n_sub, true);
  return u.update(p, dt, dx);
}

/// Refined-mesh resolution: n_sub = max(8, ceil(1 / dx)), so the sub-cell width is O(dx^2).
inline int default_n_sub(double dx) { return std::max(8, static_cast<int>(std::ceil(1.0 / dx - 1e-9))); }

/// Trace of a good cell: its own reconstructed face values.
inline std::pair<double, double> good_cell_trace_update(double q_plus_left_face, double q_minus_right_face) {
  return {q_plus_left_face, q_minus_right_face};
}

// ---------------------------------------------------------------------------
// 2D detection on edge Gauss points

/// Edge values at L = 2 Gauss points per edge. Vertical edge (i, j) is
/// x_{i-1/2} for i = 0..nx, j = 0..ny-1; horizontal edge (i, j) is y_{j-1/2}
/// for i = 0..nx-1, j = 0..ny. "minus" is the left/bottom side.
struct EdgeTrace2D {
  static constexpr int L = 2;
  int nx = 0, ny = 0;
  struct Side {
    std::vector<double> q_minus, q_plus, xi_minus, xi_plus, eta_minus, eta_plus;
    void resize(std::size_t n) {
      for (auto* v : {&q_minus, &q_plus, &xi_minus, &xi_plus, &eta_minus, &eta_plus}) v->assign(n, 0.0);
    }
  };
  Side vertical;
  Side horizontal;

  EdgeTrace2D() = default;
  EdgeTrace2D(int nx_, int ny_) : nx(nx_), ny(ny_) {
    vertical.resize(static_cast<std::size_t>(nx + 1) * ny * L);
    horizontal.resize(static_cast<std::size_t>(nx) * (ny + 1) * L);
  }
  std::size_t v_index(int i, int j, int a) const { return (static_cast<std::size_t>(j) * (nx + 1) + i) * L + a; }
  std::size_t h_index(int i, int j, int a) const { return (static_cast<std::size_t>(j) * nx + i) * L + a; }
};

struct TroubleFlags2D {
  std::vector<char> vertical;    // per Gauss point, indexed like EdgeTrace2D::v_index
  std::vector<double> v_phi;
  std::vector<char> horizontal;  // per Gauss point, h_index
  std::vector<double> h_phi;
  std::size_t troubled = 0;
};

/// Criterion I per Gauss point with the normal flux component; phi from the
/// row (vertical edges) or column (horizontal edges) through the adjacent cells.
inline TroubleFlags2D detect_2d(const EdgeTrace2D& tr, const Field2D& u, const Flux2D& flux, double qmax,
                                double qmin, double eps = 1e-6, PhiVariant variant = PhiVariant::Printed) {
  const int nx = tr.nx, ny = tr.ny;
  TroubleFlags2D out;
  out.vertical.assign(tr.vertical.q_minus.size(), 0);
  out.v_phi.assign(tr.vertical.q_minus.size(), 0.0);
  out.horizontal.assign(tr.horizontal.q_minus.size(), 0);
  out.h_phi.assign(tr.horizontal.q_minus.size(), 0.0);
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      const double ql = u.q(i - 1, j), qr = u.q(i, j);
      double phi = -1.0;
      for (int a = 0; a < EdgeTrace2D::L; ++a) {
        const std::size_t k = tr.v_index(i, j, a);
        if (criterion_I(tr.vertical.q_minus[k], tr.vertical.q_plus[k], ql, qr, flux.fx)) continue;
        if (phi < 0.0) {
          std::array<double, 5> w;
          for (int m = 0; m < 5; ++m) w[m] = u.q(i - 3 + m, j);
          phi = indicator_phi(w, qmax, qmin, eps, variant);
        }
        out.vertical[k] = 1;
        out.v_phi[k] = phi;
        ++out.troubled;
      }
    }
  }
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      const double qb = u.q(i, j - 1), qt = u.q(i, j);
      double phi = -1.0;
      for (int a = 0; a < EdgeTrace2D::L; ++a) {
        const std::size_t k = tr.h_index(i, j, a);
        if (criterion_I(tr.horizontal.q_minus[k], tr.horizontal.q_plus[k], qb, qt, flux.fy)) continue;
        if (phi < 0.0) {
          std::array<double, 5> w;
          for (int m = 0; m < 5; ++m) w[m] = u.q(i, j - 3 + m);
          phi = indicator_phi(w, qmax, qmin, eps, variant);
        }
        out.horizontal[k] = 1;
        out.h_phi[k] = phi;
        ++out.troubled;
      }
    }
  }
  return out;
}

/// mod1 blend at flagged Gauss points toward the adjacent cell averages.
inline void apply_mod1_2d(EdgeTrace2D& tr, const TroubleFlags2D& flags, const Field2D& u) {
  for (int j = 0; j < tr.ny; ++j) {
    for (int i = 0; i <= tr.nx; ++i) {
      for (int a = 0; a < EdgeTrace2D::L; ++a) {
        const std::size_t k = tr.v_index(i, j, a);
        if (!flags.vertical[k]) continue;
        const double phi = flags.v_phi[k];
        auto& s = tr.vertical;
        s.q_minus[k] = blend_toward(s.q_minus[k], u.q(i - 1, j), phi);
        s.q_plus[k] = blend_toward(s.q_plus[k], u.q(i, j), phi);
        s.xi_minus[k] = blend_toward(s.xi_minus[k], u.xi(i - 1, j), phi);
        s.xi_plus[k] = blend_toward(s.xi_plus[k], u.xi(i, j), phi);
        s.eta_minus[k] = blend_toward(s.eta_minus[k], u.eta(i - 1, j), phi);
        s.eta_plus[k] = blend_toward(s.eta_plus[k], u.eta(i, j), phi);
      }
    }
  }
  for (int j = 0; j <= tr.ny; ++j) {
    for (int i = 0; i < tr.nx; ++i) {
      for (int a = 0; a < EdgeTrace2D::L; ++a) {
        const std::size_t k = tr.h_index(i, j, a);
        if (!flags.horizontal[k]) continue;
        const double phi = flags.h_phi[k];
        auto& s = tr.horizontal;
        s.q_minus[k] = blend_toward(s.q_minus[k], u.q(i, j - 1), phi);
        s.q_plus[k] = blend_toward(s.q_plus[k], u.q(i, j), phi);
        s.xi_minus[k] = blend_toward(s.xi_minus[k], u.xi(i, j - 1), phi);
        s.xi_plus[k] = blend_toward(s.xi_plus[k], u.xi(i, j), phi);
        s.eta_minus[k] = blend_toward(s.eta_minus[k], u.eta(i, j - 1), phi);
        s.eta_plus[k] = blend_toward(s.eta_plus[k], u.eta(i, j), phi);
      }
    }
  }
}

}  // namespace hweno
