#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/quadrature.hpp"

namespace hweno {

/// Ghost layers on every side; covers the five-cell stencils and the 2D 3x3 block.
inline constexpr int kGhostWidth = 3;

/// Uniform 1D mesh on [a, b]. Cells are indexed 0..n_cells-1; ghosts use negative
/// indices and indices >= n_cells.
struct Grid1D {
  double a = 0.0;
  double b = 1.0;
  int n_cells = 1;
  double dx = 1.0;
  int ghost_width = kGhostWidth;

  double center(int j) const noexcept { return a + (j + 0.5) * dx; }
  /// Left face x_{j-1/2} of cell j.
  double face(int j) const noexcept { return a + j * dx; }
  int storage_size() const noexcept { return n_cells + 2 * ghost_width; }
};

inline Grid1D build_grid(double a, double b, int n_cells) {
  if (n_cells < 1) throw InvalidArgument("build_grid: n_cells must be positive");
  if (!(b > a)) throw InvalidArgument("build_grid: requires b > a");
  return Grid1D{a, b, n_cells, (b - a) / n_cells, kGhostWidth};
}

/// Uniform tensor mesh on [ax, bx] x [ay, by].
struct Grid2D {
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;
  int nx = 1, ny = 1;
  double dx = 1.0, dy = 1.0;
  int ghost_width = kGhostWidth;

  double center_x(int i) const noexcept { return ax + (i + 0.5) * dx; }
  double center_y(int j) const noexcept { return ay + (j + 0.5) * dy; }
  int stride() const noexcept { return nx + 2 * ghost_width; }
  int storage_size() const noexcept { return stride() * (ny + 2 * ghost_width); }
  std::size_t cell_count() const noexcept { return static_cast<std::size_t>(nx) * ny; }
};

inline Grid2D build_grid(double ax, double bx, int nx, double ay, double by, int ny) {
  if (nx < 1 || ny < 1) throw InvalidArgument("build_grid: cell counts must be positive");
  if (!(bx > ax) || !(by > ay)) throw InvalidArgument("build_grid: requires b > a in both directions");
  return Grid2D{ax, bx, ay, by, nx, ny, (bx - ax) / nx, (by - ay) / ny, kGhostWidth};
}

struct BoundarySpec {
  enum class Kind { Periodic, FixedState };

  Kind kind = Kind::Periodic;
  // Frozen ghost states. In 2D left/right apply to the x-ghost columns and
  // bottom/top to the y-ghost rows.
  double left = 0.0;
  double right = 0.0;
  double bottom = 0.0;
  double top = 0.0;

  static BoundarySpec periodic() { return {}; }
  static BoundarySpec fixed(double left, double right) {
    return {Kind::FixedState, left, right, left, right};
  }
  static BoundarySpec fixed(double left, double right, double bottom, double top) {
    return {Kind::FixedState, left, right, bottom, top};
  }
  bool is_periodic() const noexcept { return kind == Kind::Periodic; }
};

/// Cell averages of q and of its x-derivative, with ghost layers.
class Field1D {
 public:
  Field1D() = default;
  explicit Field1D(const Grid1D& grid)
      : grid_(grid), qbar_(grid.storage_size(), 0.0), xibar_(grid.storage_size(), 0.0) {}

  const Grid1D& grid() const noexcept { return grid_; }
  int size() const noexcept { return grid_.n_cells; }

  double& q(int j) { return qbar_[j + grid_.ghost_width]; }
  double q(int j) const { return qbar_[j + grid_.ghost_width]; }
  double& xi(int j) { return xibar_[j + grid_.ghost_width]; }
  double xi(int j) const { return xibar_[j + grid_.ghost_width]; }

  std::span<const double> qbar() const { return {qbar_.data() + grid_.ghost_width, size_t(size())}; }
  std::span<const double> xibar() const { return {xibar_.data() + grid_.ghost_width, size_t(size())}; }
  std::span<double> qbar() { return {qbar_.data() + grid_.ghost_width, size_t(size())}; }
  std::span<double> xibar() { return {xibar_.data() + grid_.ghost_width, size_t(size())}; }

  /// Pointer to cell 0's entry; valid offsets are [-ghost_width, n_cells + ghost_width).
  const double* q_data() const { return qbar_.data() + grid_.ghost_width; }
  const double* xi_data() const { return xibar_.data() + grid_.ghost_width; }

  /// this = a * this + b * other, over all storage including ghosts.
  void axpby(double a, double b, const Field1D& other) {
    for (std::size_t k = 0; k < qbar_.size(); ++k) {
      qbar_[k] = a * qbar_[k] + b * other.qbar_[k];
      xibar_[k] = a * xibar_[k] + b * other.xibar_[k];
    }
  }

  void fill(double q_value, double xi_value) {
    std::fill(qbar_.begin(), qbar_.end(), q_value);
    std::fill(xibar_.begin(), xibar_.end(), xi_value);
  }

 private:
  Grid1D grid_{};
  std::vector<double> qbar_;
  std::vector<double> xibar_;
};

/// Cell averages of q, dq/dx and dq/dy on a 2D mesh. Storage is row-major,
/// x fastest; gradient averages are true averages over the cell area.
class Field2D {
 public:
  Field2D() = default;
  explicit Field2D(const Grid2D& grid)
      : grid_(grid),
        qbar_(grid.storage_size(), 0.0),
        xibar_(grid.storage_size(), 0.0),
        etabar_(grid.storage_size(), 0.0) {}

  const Grid2D& grid() const noexcept { return grid_; }

  int index(int i, int j) const noexcept {
    return (j + grid_.ghost_width) * grid_.stride() + (i + grid_.ghost_width);
  }
  double& q(int i, int j) { return qbar_[index(i, j)]; }
  double q(int i, int j) const { return qbar_[index(i, j)]; }
  double& xi(int i, int j) { return xibar_[index(i, j)]; }
  double xi(int i, int j) const { return xibar_[index(i, j)]; }
  double& eta(int i, int j) { return etabar_[index(i, j)]; }
  double eta(int i, int j) const { return etabar_[index(i, j)]; }

  const std::vector<double>& q_storage() const noexcept { return qbar_; }
  const std::vector<double>& xi_storage() const noexcept { return xibar_; }
  const std::vector<double>& eta_storage() const noexcept { return etabar_; }

  /// Interior q averages, row-major (x fastest).
  std::vector<double> qbar_interior() const {
    std::vector<double> out;
    out.reserve(grid_.cell_count());
    for (int j = 0; j < grid_.ny; ++j)
      for (int i = 0; i < grid_.nx; ++i) out.push_back(q(i, j));
    return out;
  }

  void axpby(double a, double b, const Field2D& other) {
    for (std::size_t k = 0; k < qbar_.size(); ++k) {
      qbar_[k] = a * qbar_[k] + b * other.qbar_[k];
      xibar_[k] = a * xibar_[k] + b * other.xibar_[k];
      etabar_[k] = a * etabar_[k] + b * other.etabar_[k];
    }
  }

  void fill(double q_value) {
    std::fill(qbar_.begin(), qbar_.end(), q_value);
    std::fill(xibar_.begin(), xibar_.end(), 0.0);
    std::fill(etabar_.begin(), etabar_.end(), 0.0);
  }

 private:
  Grid2D grid_{};
  std::vector<double> qbar_;
  std::vector<double> xibar_;
  std::vector<double> etabar_;
};

namespace detail {

inline void require_finite(double v, const std::string& where) {
  if (!std::isfinite(v)) throw NumericalError("init_field: non-finite initial value in " + where);
}

inline bool on_jump(double x, std::span<const double> jumps, double dx) {
  for (double s : jumps)
    if (std::abs(x - s) <= 1e-12 * dx) return true;
  return false;
}

}  // namespace detail

/// Cell averages of q0 by Gauss quadrature and gradient averages from endpoint
/// differences. Faces listed in `jumps` use one-sided limits from inside the cell,
/// so Riemann data aligned with an interface carries zero gradient average.
template <class InitialFn>
Field1D init_field(const Grid1D& grid, InitialFn&& q0, int quad_points = 4,
                   std::span<const double> jumps = {}) {
  const GaussRule& rule = gauss_legendre(quad_points);
  Field1D field(grid);
  const double nudge = 1e-9 * grid.dx;
  for (int j = 0; j < grid.n_cells; ++j) {
    const std::string where = "cell " + std::to_string(j);
    double avg = 0.0;
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double v = q0(grid.center(j) + rule.nodes[k] * grid.dx);
      detail::require_finite(v, where);
      avg += rule.weights[k] * v;
    }
    double xl = grid.face(j);
    double xr = grid.face(j + 1);
    if (detail::on_jump(xl, jumps, grid.dx)) xl += nudge;
    if (detail::on_jump(xr, jumps, grid.dx)) xr -= nudge;
    const double ql = q0(xl);
    const double qr = q0(xr);
    detail::require_finite(ql, where);
    detail::require_finite(qr, where);
    field.q(j) = avg;
    field.xi(j) = (qr - ql) / grid.dx;
  }
  return field;
}

/// 2D analogue: q averages by tensor Gauss quadrature, gradient averages from
/// Gauss-integrated differences along the opposite edges.
template <class InitialFn>
Field2D init_field(const Grid2D& grid, InitialFn&& q0, int quad_points = 4) {
  const GaussRule& rule = gauss_legendre(quad_points);
  Field2D field(grid);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      const std::string where = "cell (" + std::to_string(i) + ", " + std::to_string(j) + ")";
      const double xc = grid.center_x(i), yc = grid.center_y(j);
      const double xl = xc - 0.5 * grid.dx, xr = xc + 0.5 * grid.dx;
      const double yb = yc - 0.5 * grid.dy, yt = yc + 0.5 * grid.dy;
      double avg = 0.0, dx_int = 0.0, dy_int = 0.0;
      for (std::size_t a = 0; a < rule.size(); ++a) {
        const double x = xc + rule.nodes[a] * grid.dx;
        const double y = yc + rule.nodes[a] * grid.dy;
        for (std::size_t b = 0; b < rule.size(); ++b) {
          const double v = q0(x, yc + rule.nodes[b] * grid.dy);
          detail::require_finite(v, where);
          avg += rule.weights[a] * rule.weights[b] * v;
        }
        const double jump_x = q0(xr, y) - q0(xl, y);
        const double jump_y = q0(x, yt) - q0(x, yb);
        detail::require_finite(jump_x, where);
        detail::require_finite(jump_y, where);
        dx_int += rule.weights[a] * jump_x;
        dy_int += rule.weights[a] * jump_y;
      }
      field.q(i, j) = avg;
      // (1/(dx dy)) * integral over y of the x-jump; weights already carry the dy factor.
      field.xi(i, j) = dx_int / grid.dx;
      field.eta(i, j) = dy_int / grid.dy;
    }
  }
  return field;
}

inline void fill_ghosts(Field1D& field, const BoundarySpec& bc) {
  const int n = field.size();
  const int g = field.grid().ghost_width;
  for (int k = 1; k <= g; ++k) {
    if (bc.is_periodic()) {
      field.q(-k) = field.q(n - k);
      field.xi(-k) = field.xi(n - k);
      field.q(n - 1 + k) = field.q(k - 1);
      field.xi(n - 1 + k) = field.xi(k - 1);
    } else {
      field.q(-k) = bc.left;
      field.xi(-k) = 0.0;
      field.q(n - 1 + k) = bc.right;
      field.xi(n - 1 + k) = 0.0;
    }
  }
}

inline void fill_ghosts(Field2D& field, const BoundarySpec& bc) {
  const Grid2D& grid = field.grid();
  const int nx = grid.nx, ny = grid.ny, g = grid.ghost_width;
  if (bc.is_periodic()) {
    for (int j = 0; j < ny; ++j) {
      for (int k = 1; k <= g; ++k) {
        for (auto [dst, src] : {std::pair{-k, nx - k}, std::pair{nx - 1 + k, k - 1}}) {
          field.q(dst, j) = field.q(src, j);
          field.xi(dst, j) = field.xi(src, j);
          field.eta(dst, j) = field.eta(src, j);
        }
      }
    }
    for (int k = 1; k <= g; ++k) {
      for (int i = -g; i < nx + g; ++i) {
        for (auto [dst, src] : {std::pair{-k, ny - k}, std::pair{ny - 1 + k, k - 1}}) {
          field.q(i, dst) = field.q(i, src);
          field.xi(i, dst) = field.xi(i, src);
          field.eta(i, dst) = field.eta(i, src);
        }
      }
    }
    return;
  }
  for (int k = 1; k <= g; ++k) {
    for (int i = -g; i < nx + g; ++i) {
      for (auto [row, value] : {std::pair{-k, bc.bottom}, std::pair{ny - 1 + k, bc.top}}) {
        field.q(i, row) = value;
        field.xi(i, row) = 0.0;
        field.eta(i, row) = 0.0;
      }
    }
  }
  for (int k = 1; k <= g; ++k) {
    for (int j = -g; j < ny + g; ++j) {
      for (auto [col, value] : {std::pair{-k, bc.left}, std::pair{nx - 1 + k, bc.right}}) {
        field.q(col, j) = value;
        field.xi(col, j) = 0.0;
        field.eta(col, j) = 0.0;
      }
    }
  }
}

}  // namespace hweno
