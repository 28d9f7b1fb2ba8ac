#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "hweno/errors.hpp"

namespace hweno {

// ---------------------------------------------------------------------------
// Limiter primitives

inline double minmod2(double a, double b) noexcept {
  if (a * b < 0.0) return 0.0;
  if (a >= 0.0 && b >= 0.0) return std::min(a, b);
  return std::max(a, b);
}

/// minmod over samples of a function on an interval.
inline double interval_minmod(std::span<const double> samples) noexcept {
  if (samples.empty()) return 0.0;
  const double first = samples.front();
  if (first == 0.0) return 0.0;
  double m = first;
  for (double v : samples) {
    if (v * first <= 0.0) return 0.0;
    m = first > 0.0 ? std::min(m, v) : std::max(m, v);
  }
  return m;
}

inline double muscl_slope(double q_left, double q_center, double q_right) noexcept {
  return minmod2(q_center - q_left, q_right - q_center);
}

inline double minmod4(double a, double b, double c, double d) noexcept {
  if (a > 0.0 && b > 0.0 && c > 0.0 && d > 0.0) return std::min({a, b, c, d});
  if (a < 0.0 && b < 0.0 && c < 0.0 && d < 0.0) return std::max({a, b, c, d});
  return 0.0;
}

// ---------------------------------------------------------------------------
// Nonlinear weights

struct WeightOptions {
  double eps = 1e-6;
  /// Use the linear weights directly (exactness tests).
  bool linear = false;
};

/// Convex WENO combination sum_m w_m v_m with w_m ~ gamma_m / (eps + beta_m)^2.
/// Negative linear weights are split into positive and negative parts that are
/// weighted separately and recombined.
template <std::size_t M>
double weno_combine(const std::array<double, M>& gamma, const std::array<double, M>& beta,
                    const std::array<double, M>& values, const WeightOptions& opt) {
  if (opt.linear) {
    double v = 0.0;
    for (std::size_t m = 0; m < M; ++m) v += gamma[m] * values[m];
    return v;
  }
  std::array<double, M> inv{};
  for (std::size_t m = 0; m < M; ++m) {
    const double d = opt.eps + beta[m];
    inv[m] = 1.0 / (d * d);
  }
  bool positive = true;
  for (double g : gamma) positive = positive && g >= 0.0;
  if (positive) {
    double num = 0.0, den = 0.0;
    for (std::size_t m = 0; m < M; ++m) {
      const double w = gamma[m] * inv[m];
      num += w * values[m];
      den += w;
    }
    return num / den;
  }
  double sp = 0.0, sm = 0.0;
  std::array<double, M> gp{}, gm{};
  for (std::size_t m = 0; m < M; ++m) {
    gp[m] = 0.5 * (gamma[m] + 3.0 * std::abs(gamma[m]));
    gm[m] = gp[m] - gamma[m];
    sp += gp[m];
    sm += gm[m];
  }
  double np = 0.0, dp = 0.0, nm = 0.0, dm = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    np += gp[m] * inv[m] * values[m];
    dp += gp[m] * inv[m];
    nm += gm[m] * inv[m] * values[m];
    dm += gm[m] * inv[m];
  }
  return sp * np / dp - (sm > 0.0 ? sm * nm / dm : 0.0);
}

/// Normalized nonlinear weights (positive linear weights only).
template <std::size_t M>
std::array<double, M> nonlinear_weights(const std::array<double, M>& gamma,
                                        const std::array<double, M>& beta, double eps) {
  std::array<double, M> w{};
  double sum = 0.0;
  for (std::size_t m = 0; m < M; ++m) {
    const double d = eps + beta[m];
    w[m] = gamma[m] / (d * d);
    sum += w[m];
  }
  for (double& v : w) v /= sum;
  return w;
}

// ---------------------------------------------------------------------------
// Polynomial fitting to cell-average / gradient-average data

namespace detail {

enum class Datum { Avg, GradX, GradY };

/// A 1D datum: average of q or of dq/ds over the unit cell centred at `offset`.
struct Functional1D {
  Datum kind;
  int offset;
};

/// The same over unit cells of a 2D block.
struct Functional2D {
  Datum kind;
  int ox;
  int oy;
};

/// Integral of s^k over [c - 1/2, c + 1/2].
inline double seg_integral(int k, double c) {
  if (k < 0) return 0.0;
  return (std::pow(c + 0.5, k + 1) - std::pow(c - 0.5, k + 1)) / (k + 1);
}

inline double functional_value(const Functional1D& f, int k) {
  if (f.kind == Datum::Avg) return seg_integral(k, f.offset);
  return k == 0 ? 0.0 : k * seg_integral(k - 1, f.offset);
}

/// Monomial exponents (a, b) for X^a Y^b with a + b <= degree.
inline std::vector<std::array<int, 2>> monomials_2d(int degree) {
  std::vector<std::array<int, 2>> out;
  for (int d = 0; d <= degree; ++d)
    for (int a = d; a >= 0; --a) out.push_back({a, d - a});
  return out;
}

inline double functional_value(const Functional2D& f, std::array<int, 2> mono) {
  const auto [a, b] = mono;
  switch (f.kind) {
    case Datum::Avg: return seg_integral(a, f.ox) * seg_integral(b, f.oy);
    case Datum::GradX: return a == 0 ? 0.0 : a * seg_integral(a - 1, f.ox) * seg_integral(b, f.oy);
    case Datum::GradY: return b == 0 ? 0.0 : b * seg_integral(a, f.ox) * seg_integral(b - 1, f.oy);
  }
  return 0.0;
}

/// Inverse of the interpolation matrix: monomial coefficients = result * data.
inline Eigen::MatrixXd invert_fit(const Eigen::MatrixXd& a, const char* what) {
  Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
  if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-12)
    throw ConstructionError(std::string("singular reconstruction stencil: ") + what);
  return lu.inverse();
}

inline Eigen::MatrixXd fit_1d(std::span<const Functional1D> data, int degree) {
  const int n = static_cast<int>(data.size());
  if (n != degree + 1) throw ConstructionError("fit_1d: data count must equal degree + 1");
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k <= degree; ++k) a(r, k) = functional_value(data[r], k);
  return invert_fit(a, "1d");
}

inline Eigen::MatrixXd fit_2d(std::span<const Functional2D> data, int degree) {
  const auto monos = monomials_2d(degree);
  const int n = static_cast<int>(data.size());
  if (n != static_cast<int>(monos.size())) throw ConstructionError("fit_2d: data count mismatch");
  Eigen::MatrixXd a(n, n);
  for (int r = 0; r < n; ++r)
    for (int k = 0; k < n; ++k) a(r, k) = functional_value(data[r], monos[k]);
  return invert_fit(a, "2d");
}

inline double falling(int a, int l) {
  double v = 1.0;
  for (int i = 0; i < l; ++i) v *= a - i;
  return v;
}

/// Gram matrix G with c^T G c = sum_{l >= lmin} integral over [-1/2, 1/2] of (p^(l))^2.
inline Eigen::MatrixXd smoothness_gram_1d(int degree, int lmin) {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(degree + 1, degree + 1);
  for (int l = lmin; l <= degree; ++l)
    for (int a = l; a <= degree; ++a)
      for (int b = l; b <= degree; ++b)
        g(a, b) += falling(a, l) * falling(b, l) * seg_integral(a + b - 2 * l, 0.0);
  return g;
}

/// 2D analogue: sum over multi-indices |l| >= 1 of integral over the unit cell of (D^l p)^2.
inline Eigen::MatrixXd smoothness_gram_2d(int degree) {
  const auto monos = monomials_2d(degree);
  const int n = static_cast<int>(monos.size());
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(n, n);
  for (int lx = 0; lx <= degree; ++lx) {
    for (int ly = 0; lx + ly <= degree; ++ly) {
      if (lx + ly == 0) continue;
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
          const auto [a1, b1] = monos[r];
          const auto [a2, b2] = monos[c];
          if (a1 < lx || a2 < lx || b1 < ly || b2 < ly) continue;
          g(r, c) += falling(a1, lx) * falling(a2, lx) * falling(b1, ly) * falling(b2, ly) *
                     seg_integral(a1 + a2 - 2 * lx, 0.0) * seg_integral(b1 + b2 - 2 * ly, 0.0);
        }
      }
    }
  }
  return g;
}

/// Small dense polynomial stencil over N data entries of a local vector.
template <std::size_t N, std::size_t NC>
struct Stencil {
  std::array<int, N> idx{};
  std::array<std::array<double, N>, NC> coef{};  // monomial coefficients from data
  std::array<std::array<double, NC>, NC> gram{};

  void coefficients(const double* data, std::array<double, NC>& c) const {
    std::array<double, N> d;
    for (std::size_t k = 0; k < N; ++k) d[k] = data[idx[k]];
    for (std::size_t r = 0; r < NC; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k < N; ++k) v += coef[r][k] * d[k];
      c[r] = v;
    }
  }

  double smoothness(const std::array<double, NC>& c) const {
    double b = 0.0;
    for (std::size_t r = 0; r < NC; ++r) {
      double v = 0.0;
      for (std::size_t k = 0; k < NC; ++k) v += gram[r][k] * c[k];
      b += c[r] * v;
    }
    return b;
  }
};

template <std::size_t N, std::size_t NC>
void load_stencil(Stencil<N, NC>& st, const std::array<int, N>& idx, const Eigen::MatrixXd& coef,
                  const Eigen::MatrixXd& gram) {
  st.idx = idx;
  for (std::size_t r = 0; r < NC; ++r)
    for (std::size_t k = 0; k < N; ++k) st.coef[r][k] = coef(r, k);
  for (std::size_t r = 0; r < NC; ++r)
    for (std::size_t k = 0; k < NC; ++k) st.gram[r][k] = gram(r, k);
}

template <std::size_t NC>
double poly_value(const std::array<double, NC>& c, double s) {
  double v = 0.0;
  for (int k = int(NC) - 1; k >= 0; --k) v = v * s + c[k];
  return v;
}

template <std::size_t NC>
double poly_derivative(const std::array<double, NC>& c, double s) {
  double v = 0.0;
  for (int k = int(NC) - 1; k >= 1; --k) v = v * s + k * c[k];
  return v;
}

/// Linear weights gamma so that sum_m gamma_m rows[m] == target (exactly consistent).
inline Eigen::VectorXd solve_linear_weights(const Eigen::MatrixXd& rows, const Eigen::VectorXd& target,
                                            const char* what) {
  // rows: (data) x (stencils); minimum-norm solution.
  Eigen::VectorXd g = rows.completeOrthogonalDecomposition().solve(target);
  if ((rows * g - target).cwiseAbs().maxCoeff() > 1e-12)
    throw ConstructionError(std::string("inconsistent linear weights: ") + what);
  return g;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// 1D fifth-order HWENO

/// Reconstructed values at the two faces of one cell.
struct CellFaceValues {
  double q_right = 0.0;   // q^-_{j+1/2}
  double q_left = 0.0;    // q^+_{j-1/2}
  double xi_right = 0.0;  // xi^-_{j+1/2}
  double xi_left = 0.0;   // xi^+_{j-1/2}
};

/// Fifth-order Hermite WENO on the compact three-cell stencil.
///
/// Local data vector: (q_{j-1}, q_j, q_{j+1}, dx xi_{j-1}, dx xi_j, dx xi_{j+1}).
/// Point values combine three quadratics
///   {q_{j-1}, q_j, xi_{j-1}}, {q_{j-1}, q_j, q_{j+1}}, {q_j, q_{j+1}, xi_{j+1}}
/// toward the quartic on {q_{j-1}, q_j, q_{j+1}, xi_{j-1}, xi_{j+1}}. Derivative
/// values combine three cubics
///   {q_{j-1}, q_j, xi_{j-1}, xi_j}, {q_{j-1}, q_j, q_{j+1}, xi_j}, {q_j, q_{j+1}, xi_j, xi_{j+1}}
/// toward the quintic on all six data.
class Hweno5 {
 public:
  using ValueStencil = detail::Stencil<3, 3>;
  using DerivStencil = detail::Stencil<4, 4>;

  static const Hweno5& instance() {
    static const Hweno5 tables;
    return tables;
  }

  const std::array<ValueStencil, 3>& value_stencils() const noexcept { return value_; }
  const std::array<DerivStencil, 3>& derivative_stencils() const noexcept { return deriv_; }
  /// Linear weights at x_{j+1/2}; the x_{j-1/2} weights are the mirror image.
  const std::array<double, 3>& value_gamma() const noexcept { return gamma_value_; }
  const std::array<double, 3>& derivative_gamma() const noexcept { return gamma_deriv_; }
  /// Rows of the big-stencil reconstruction at x_{j+1/2} over the six local data.
  const std::array<double, 6>& big_value_row() const noexcept { return big_value_; }
  const std::array<double, 6>& big_derivative_row() const noexcept { return big_deriv_; }

  /// q window (q_{j-1}, q_j, q_{j+1}) and xi window likewise.
  CellFaceValues reconstruct(const double* q, const double* xi, double dx,
                             const WeightOptions& opt = {}) const {
    const double data[6] = {q[0], q[1], q[2], dx * xi[0], dx * xi[1], dx * xi[2]};
    std::array<double, 3> beta{}, vr{}, vl{};
    for (int m = 0; m < 3; ++m) {
      std::array<double, 3> c;
      value_[m].coefficients(data, c);
      if (!opt.linear) beta[m] = value_[m].smoothness(c);
      vr[m] = detail::poly_value<3>(c, 0.5);
      vl[m] = detail::poly_value<3>(c, -0.5);
    }
    CellFaceValues out;
    out.q_right = weno_combine<3>(gamma_value_, beta, vr, opt);
    out.q_left = weno_combine<3>(mirror(gamma_value_), beta, vl, opt);
    for (int m = 0; m < 3; ++m) {
      std::array<double, 4> c;
      deriv_[m].coefficients(data, c);
      if (!opt.linear) beta[m] = deriv_[m].smoothness(c);
      vr[m] = detail::poly_derivative<4>(c, 0.5);
      vl[m] = detail::poly_derivative<4>(c, -0.5);
    }
    out.xi_right = weno_combine<3>(gamma_deriv_, beta, vr, opt) / dx;
    out.xi_left = weno_combine<3>(mirror(gamma_deriv_), beta, vl, opt) / dx;
    return out;
  }

 private:
  static std::array<double, 3> mirror(const std::array<double, 3>& g) { return {g[2], g[1], g[0]}; }

  Hweno5() {
    using detail::Datum;
    using F = detail::Functional1D;
    // Local index for each functional in the data vector.
    auto index_of = [](const F& f) { return (f.kind == Datum::Avg ? 1 : 4) + f.offset; };

    const std::array<std::array<F, 3>, 3> vsets = {{
        {F{Datum::Avg, -1}, F{Datum::Avg, 0}, F{Datum::GradX, -1}},
        {F{Datum::Avg, -1}, F{Datum::Avg, 0}, F{Datum::Avg, 1}},
        {F{Datum::Avg, 0}, F{Datum::Avg, 1}, F{Datum::GradX, 1}},
    }};
    const std::array<std::array<F, 4>, 3> dsets = {{
        {F{Datum::Avg, -1}, F{Datum::Avg, 0}, F{Datum::GradX, -1}, F{Datum::GradX, 0}},
        {F{Datum::Avg, -1}, F{Datum::Avg, 0}, F{Datum::Avg, 1}, F{Datum::GradX, 0}},
        {F{Datum::Avg, 0}, F{Datum::Avg, 1}, F{Datum::GradX, 0}, F{Datum::GradX, 1}},
    }};
    const Eigen::MatrixXd g2 = detail::smoothness_gram_1d(2, 1);
    // Derivative stencils are judged by the smoothness of p'.
    const Eigen::MatrixXd g3 = detail::smoothness_gram_1d(3, 2);

    Eigen::MatrixXd vrows = Eigen::MatrixXd::Zero(6, 3);
    Eigen::MatrixXd drows = Eigen::MatrixXd::Zero(6, 3);
    for (int m = 0; m < 3; ++m) {
      std::array<int, 3> idx;
      for (int k = 0; k < 3; ++k) idx[k] = index_of(vsets[m][k]);
      const Eigen::MatrixXd c = detail::fit_1d(vsets[m], 2);
      detail::load_stencil(value_[m], idx, c, g2);
      for (int k = 0; k < 3; ++k)
        for (int p = 0; p < 3; ++p) vrows(idx[k], m) += c(p, k) * std::pow(0.5, p);
    }
    for (int m = 0; m < 3; ++m) {
      std::array<int, 4> idx;
      for (int k = 0; k < 4; ++k) idx[k] = index_of(dsets[m][k]);
      const Eigen::MatrixXd c = detail::fit_1d(dsets[m], 3);
      detail::load_stencil(deriv_[m], idx, c, g3);
      for (int k = 0; k < 4; ++k)
        for (int p = 1; p < 4; ++p) drows(idx[k], m) += c(p, k) * p * std::pow(0.5, p - 1);
    }

    const std::array<F, 5> big_v = {F{Datum::Avg, -1}, F{Datum::Avg, 0}, F{Datum::Avg, 1},
                                    F{Datum::GradX, -1}, F{Datum::GradX, 1}};
    const std::array<F, 6> big_d = {F{Datum::Avg, -1},   F{Datum::Avg, 0},   F{Datum::Avg, 1},
                                    F{Datum::GradX, -1}, F{Datum::GradX, 0}, F{Datum::GradX, 1}};
    const Eigen::MatrixXd cv = detail::fit_1d(big_v, 4);
    const Eigen::MatrixXd cd = detail::fit_1d(big_d, 5);
    Eigen::VectorXd tv = Eigen::VectorXd::Zero(6), td = Eigen::VectorXd::Zero(6);
    for (int k = 0; k < 5; ++k)
      for (int p = 0; p < 5; ++p) tv(index_of(big_v[k])) += cv(p, k) * std::pow(0.5, p);
    for (int k = 0; k < 6; ++k)
      for (int p = 1; p < 6; ++p) td(index_of(big_d[k])) += cd(p, k) * p * std::pow(0.5, p - 1);
    const Eigen::VectorXd gv = detail::solve_linear_weights(vrows, tv, "hweno5 value");
    const Eigen::VectorXd gd = detail::solve_linear_weights(drows, td, "hweno5 derivative");
    for (int m = 0; m < 3; ++m) {
      gamma_value_[m] = gv(m);
      gamma_deriv_[m] = gd(m);
    }
    for (int k = 0; k < 6; ++k) {
      big_value_[k] = tv(k);
      big_deriv_[k] = td(k);
    }
  }

  std::array<ValueStencil, 3> value_{};
  std::array<DerivStencil, 3> deriv_{};
  std::array<double, 3> gamma_value_{};
  std::array<double, 3> gamma_deriv_{};
  std::array<double, 6> big_value_{};
  std::array<double, 6> big_deriv_{};
};

inline CellFaceValues hweno5_interface(std::span<const double, 3> qbar, std::span<const double, 3> xibar,
                                       double dx, const WeightOptions& opt = {}) {
  return Hweno5::instance().reconstruct(qbar.data(), xibar.data(), dx, opt);
}

// ---------------------------------------------------------------------------
// 1D fifth-order WENO (five cell averages)

/// Classical finite-volume WENO5 evaluated at a fixed list of offsets s in
/// [-1/2, 1/2] of the centre cell. Linear weights for each offset are derived
/// from the quartic on the full five-cell stencil.
class Weno5 {
 public:
  using QStencil = detail::Stencil<3, 3>;

  explicit Weno5(std::vector<double> offsets) : offsets_(std::move(offsets)) {
    using detail::Datum;
    using F = detail::Functional1D;
    const Eigen::MatrixXd g2 = detail::smoothness_gram_1d(2, 1);
    std::array<Eigen::MatrixXd, 3> coef;
    for (int m = 0; m < 3; ++m) {
      const std::array<F, 3> set = {F{Datum::Avg, m - 2}, F{Datum::Avg, m - 1}, F{Datum::Avg, m}};
      coef[m] = detail::fit_1d(set, 2);
      detail::load_stencil(stencils_[m], {m, m + 1, m + 2}, coef[m], g2);
    }
    std::array<F, 5> big;
    for (int k = 0; k < 5; ++k) big[k] = F{Datum::Avg, k - 2};
    const Eigen::MatrixXd cb = detail::fit_1d(big, 4);
    for (double s : offsets_) {
      Eigen::MatrixXd rows = Eigen::MatrixXd::Zero(5, 3);
      Eigen::VectorXd target = Eigen::VectorXd::Zero(5);
      for (int m = 0; m < 3; ++m)
        for (int k = 0; k < 3; ++k)
          for (int p = 0; p < 3; ++p) rows(m + k, m) += coef[m](p, k) * std::pow(s, p);
      for (int k = 0; k < 5; ++k)
        for (int p = 0; p < 5; ++p) target(k) += cb(p, k) * std::pow(s, p);
      const Eigen::VectorXd g = detail::solve_linear_weights(rows, target, "weno5");
      gamma_.push_back({g(0), g(1), g(2)});
    }
  }

  /// Offsets (+1/2, -1/2): right and left face values.
  static const Weno5& faces() {
    static const Weno5 w({0.5, -0.5});
    return w;
  }
  /// Tangential two-point Gauss offsets (-1/(2 sqrt 3), +1/(2 sqrt 3)).
  static const Weno5& gauss2() {
    static const Weno5 w({-0.5 / std::sqrt(3.0), 0.5 / std::sqrt(3.0)});
    return w;
  }

  const std::vector<double>& offsets() const noexcept { return offsets_; }
  const std::array<double, 3>& gamma(std::size_t point) const { return gamma_.at(point); }

  /// q points at q_{j-2}; writes one value per offset.
  void reconstruct(const double* q, double* out, const WeightOptions& opt = {}) const {
    std::array<std::array<double, 3>, 3> c;
    std::array<double, 3> beta{};
    for (int m = 0; m < 3; ++m) {
      stencils_[m].coefficients(q, c[m]);
      if (!opt.linear) beta[m] = stencils_[m].smoothness(c[m]);
    }
    for (std::size_t p = 0; p < offsets_.size(); ++p) {
      std::array<double, 3> v;
      for (int m = 0; m < 3; ++m) v[m] = detail::poly_value<3>(c[m], offsets_[p]);
      out[p] = weno_combine<3>(gamma_[p], beta, v, opt);
    }
  }

 private:
  std::vector<double> offsets_;
  std::array<QStencil, 3> stencils_{};
  std::vector<std::array<double, 3>> gamma_;
};

/// Face values (q^-_{j+1/2}, q^+_{j-1/2}) from the window q_{j-2..j+2}.
inline std::pair<double, double> weno5_interface(std::span<const double, 5> qbar,
                                                 const WeightOptions& opt = {}) {
  double out[2];
  Weno5::faces().reconstruct(qbar.data(), out, opt);
  return {out[0], out[1]};
}

// ---------------------------------------------------------------------------
// Monotonicity-preserving limiter

namespace detail {

inline double median3(double a, double b, double c) {
  return a + minmod2(b - a, c - a);
}

/// Limit the right-face value v of cell j; q points at q_{j-2}.
inline double mp_limit_right(double v, const double* q) {
  constexpr double kAlpha = 4.0;
  constexpr double kTol = 1e-10;
  const double qm2 = q[0], qm1 = q[1], q0 = q[2], qp1 = q[3], qp2 = q[4];
  const double q_mp = q0 + minmod2(qp1 - q0, kAlpha * (q0 - qm1));
  if ((v - q0) * (v - q_mp) <= kTol) return v;
  const double dm = qm2 - 2.0 * qm1 + q0;
  const double d0 = qm1 - 2.0 * q0 + qp1;
  const double dp = q0 - 2.0 * qp1 + qp2;
  const double dm4_p = minmod4(4.0 * d0 - dp, 4.0 * dp - d0, d0, dp);
  const double dm4_m = minmod4(4.0 * dm - d0, 4.0 * d0 - dm, dm, d0);
  const double q_ul = q0 + kAlpha * (q0 - qm1);
  const double q_md = 0.5 * (q0 + qp1) - 0.5 * dm4_p;
  const double q_lc = q0 + 0.5 * (q0 - qm1) + (4.0 / 3.0) * dm4_m;
  const double q_min = std::max(std::min({q0, qp1, q_md}), std::min({q0, q_ul, q_lc}));
  const double q_max = std::min(std::max({q0, qp1, q_md}), std::max({q0, q_ul, q_lc}));
  return median3(v, q_min, q_max);
}

}  // namespace detail

/// Monotonicity-preserving bounds applied to both face values of cell j.
/// window = (q_{j-2}, ..., q_{j+2}).
inline std::pair<double, double> mp_limit(double q_right, double q_left, std::span<const double, 5> window) {
  const double rev[5] = {window[4], window[3], window[2], window[1], window[0]};
  return {detail::mp_limit_right(q_right, window.data()), detail::mp_limit_right(q_left, rev)};
}

// ---------------------------------------------------------------------------
// 2D fourth-order HWENO on the 3x3 block

/// Edge Gauss points of the unit cell in local coordinates, two per edge:
/// right (x = 1/2), left (x = -1/2), top (y = 1/2), bottom (y = -1/2); within an
/// edge the tangential coordinate ascends.
inline std::array<std::array<double, 2>, 8> edge_gauss_points() {
  const double g = 0.5 / std::sqrt(3.0);
  return {{{0.5, -g}, {0.5, g}, {-0.5, -g}, {-0.5, g}, {-g, 0.5}, {g, 0.5}, {-g, -0.5}, {g, -0.5}}};
}

struct EdgePointValues2D {
  std::array<double, 8> q{};
  std::array<double, 8> xi{};
  std::array<double, 8> eta{};
};

/// Fourth-order Hermite WENO for q and third-order for (xi, eta) at the eight
/// edge Gauss points of the centre cell.
///
/// Cells of the block are numbered row by row from the bottom:
///   7 8 9
///   4 5 6
///   1 2 3
/// Block data vector: q1..q9, dx xi1..dx xi9, dy eta1..dy eta9 (27 entries).
class Hweno4 {
 public:
  using QStencil = detail::Stencil<6, 6>;
  using CubicStencil = detail::Stencil<10, 10>;
  using GradStencil = detail::Stencil<6, 6>;

  static const Hweno4& instance() {
    static const Hweno4 tables;
    return tables;
  }

  static constexpr int q_index(int cell) { return cell - 1; }
  static constexpr int x_index(int cell) { return 8 + cell; }
  static constexpr int y_index(int cell) { return 17 + cell; }

  const std::array<double, 8>& gamma(std::size_t point) const { return gamma_.at(point); }
  const std::array<QStencil, 8>& q_stencils() const noexcept { return qst_; }

  EdgePointValues2D reconstruct(const std::array<double, 27>& block, double dx, double dy,
                                const WeightOptions& opt = {}) const {
    EdgePointValues2D out;
    // q: eight quadratics.
    std::array<std::array<double, 6>, 8> cq;
    std::array<double, 8> beta{};
    for (int m = 0; m < 8; ++m) {
      qst_[m].coefficients(block.data(), cq[m]);
      if (!opt.linear) beta[m] = qst_[m].smoothness(cq[m]);
    }
    for (int p = 0; p < 8; ++p) {
      std::array<double, 8> v;
      for (int m = 0; m < 8; ++m) v[m] = dot6(cq[m], mono_[p]);
      out.q[p] = weno_combine<8>(gamma_[p], beta, v, opt);
    }
    // Gradients: cubic stencils differentiated, plus quadratic fits of the
    // gradient averages themselves, equally weighted.
    std::array<std::array<double, 6>, 8> cx, cy;
    for (int m = 0; m < 4; ++m) {
      std::array<double, 10> c;
      cubic_[m].coefficients(block.data(), c);
      derivative_x(c, cx[m]);
      derivative_y(c, cy[m]);
    }
    for (int m = 0; m < 4; ++m) {
      gx_[m].coefficients(block.data(), cx[4 + m]);
      gy_[m].coefficients(block.data(), cy[4 + m]);
    }
    static constexpr std::array<double, 8> kEqual = {0.125, 0.125, 0.125, 0.125,
                                                     0.125, 0.125, 0.125, 0.125};
    std::array<double, 8> bx{}, by{};
    if (!opt.linear) {
      for (int m = 0; m < 8; ++m) {
        bx[m] = gx_[0].smoothness(cx[m]);
        by[m] = gx_[0].smoothness(cy[m]);
      }
    }
    for (int p = 0; p < 8; ++p) {
      std::array<double, 8> vx, vy;
      for (int m = 0; m < 8; ++m) {
        vx[m] = dot6(cx[m], mono_[p]);
        vy[m] = dot6(cy[m], mono_[p]);
      }
      out.xi[p] = weno_combine<8>(kEqual, bx, vx, opt) / dx;
      out.eta[p] = weno_combine<8>(kEqual, by, vy, opt) / dy;
    }
    return out;
  }

 private:
  static double dot6(const std::array<double, 6>& c, const std::array<double, 6>& m) {
    double v = 0.0;
    for (int k = 0; k < 6; ++k) v += c[k] * m[k];
    return v;
  }

  // Cubic monomial order (see detail::monomials_2d):
  //   1 | X Y | X^2 XY Y^2 | X^3 X^2Y XY^2 Y^3
  static void derivative_x(const std::array<double, 10>& c, std::array<double, 6>& d) {
    d = {c[1], 2 * c[3], c[4], 3 * c[6], 2 * c[7], c[8]};
  }
  static void derivative_y(const std::array<double, 10>& c, std::array<double, 6>& d) {
    d = {c[2], c[4], 2 * c[5], c[7], 2 * c[8], 3 * c[9]};
  }

  static std::array<int, 2> centre(int cell) { return {(cell - 1) % 3 - 1, (cell - 1) / 3 - 1}; }

  struct Tok {
    char kind;  // 'q', 'x', 'y'
    int cell;
  };

  static detail::Functional2D functional(Tok t) {
    using detail::Datum;
    const auto [ox, oy] = centre(t.cell);
    const Datum d = t.kind == 'q' ? Datum::Avg : (t.kind == 'x' ? Datum::GradX : Datum::GradY);
    return {d, ox, oy};
  }

  static int data_index(Tok t) {
    return t.kind == 'q' ? q_index(t.cell) : (t.kind == 'x' ? x_index(t.cell) : y_index(t.cell));
  }

  template <std::size_t N, std::size_t NC>
  static void build(detail::Stencil<N, NC>& st, const std::array<Tok, N>& toks, int degree,
                    const Eigen::MatrixXd& gram, Eigen::MatrixXd* coef_out = nullptr) {
    std::array<detail::Functional2D, N> fs;
    std::array<int, N> idx;
    for (std::size_t k = 0; k < N; ++k) {
      fs[k] = functional(toks[k]);
      idx[k] = data_index(toks[k]);
    }
    const Eigen::MatrixXd c = detail::fit_2d(fs, degree);
    detail::load_stencil(st, idx, c, gram);
    if (coef_out) *coef_out = c;
  }

  /// Quadratic fit of gradient averages over six cells: a polynomial for the gradient itself.
  static void build_gradient_fit(GradStencil& st, const std::array<int, 6>& cells, char kind,
                                 const Eigen::MatrixXd& gram) {
    std::array<detail::Functional2D, 6> fs;
    std::array<int, 6> idx;
    for (int k = 0; k < 6; ++k) {
      const auto [ox, oy] = centre(cells[k]);
      fs[k] = {detail::Datum::Avg, ox, oy};
      idx[k] = kind == 'x' ? x_index(cells[k]) : y_index(cells[k]);
    }
    detail::load_stencil(st, idx, detail::fit_2d(fs, 2), gram);
  }

  Hweno4() {
    const Eigen::MatrixXd g2 = detail::smoothness_gram_2d(2);
    const Eigen::MatrixXd g3 = Eigen::MatrixXd::Zero(10, 10);
    const std::array<std::array<Tok, 6>, 8> qsets = {{
        {Tok{'q', 1}, {'q', 2}, {'q', 4}, {'q', 5}, {'x', 4}, {'y', 2}},
        {Tok{'q', 2}, {'q', 3}, {'q', 5}, {'q', 6}, {'x', 6}, {'y', 2}},
        {Tok{'q', 4}, {'q', 5}, {'q', 7}, {'q', 8}, {'x', 4}, {'y', 8}},
        {Tok{'q', 5}, {'q', 6}, {'q', 8}, {'q', 9}, {'x', 6}, {'y', 8}},
        {Tok{'q', 1}, {'q', 2}, {'q', 3}, {'q', 4}, {'q', 5}, {'q', 7}},
        {Tok{'q', 1}, {'q', 2}, {'q', 3}, {'q', 5}, {'q', 6}, {'q', 9}},
        {Tok{'q', 1}, {'q', 4}, {'q', 5}, {'q', 7}, {'q', 8}, {'q', 9}},
        {Tok{'q', 3}, {'q', 5}, {'q', 6}, {'q', 7}, {'q', 8}, {'q', 9}},
    }};
    // Cubic stencils for the gradients: the 2x2 corner blocks with the gradient
    // averages of the corner cell, its horizontal neighbour and its vertical
    // neighbour plus the centre cell.
    const std::array<std::array<Tok, 10>, 4> csets = {{
        {Tok{'q', 1}, {'q', 2}, {'q', 4}, {'q', 5}, {'x', 1}, {'x', 4}, {'x', 5}, {'y', 1}, {'y', 2}, {'y', 5}},
        {Tok{'q', 2}, {'q', 3}, {'q', 5}, {'q', 6}, {'x', 3}, {'x', 6}, {'x', 5}, {'y', 3}, {'y', 2}, {'y', 5}},
        {Tok{'q', 4}, {'q', 5}, {'q', 7}, {'q', 8}, {'x', 7}, {'x', 4}, {'x', 5}, {'y', 7}, {'y', 8}, {'y', 5}},
        {Tok{'q', 5}, {'q', 6}, {'q', 8}, {'q', 9}, {'x', 9}, {'x', 6}, {'x', 5}, {'y', 9}, {'y', 8}, {'y', 5}},
    }};
    const std::array<std::array<int, 6>, 4> gsets = {{
        {1, 2, 3, 4, 5, 7}, {1, 2, 3, 5, 6, 9}, {1, 4, 5, 7, 8, 9}, {3, 5, 6, 7, 8, 9}}};

    std::array<Eigen::MatrixXd, 8> qcoef;
    for (int m = 0; m < 8; ++m) build(qst_[m], qsets[m], 2, g2, &qcoef[m]);
    for (int m = 0; m < 4; ++m) build(cubic_[m], csets[m], 3, g3);
    for (int m = 0; m < 4; ++m) {
      build_gradient_fit(gx_[m], gsets[m], 'x', g2);
      build_gradient_fit(gy_[m], gsets[m], 'y', g2);
    }

    const auto quad = detail::monomials_2d(2);
    const auto pts = edge_gauss_points();
    for (int p = 0; p < 8; ++p) {
      const auto [px, py] = pts[p];
      for (int k = 0; k < 6; ++k) mono_[p][k] = std::pow(px, quad[k][0]) * std::pow(py, quad[k][1]);
      // Minimum-norm weights: sum to one and reproduce every cubic monomial.
      Eigen::MatrixXd rows(5, 8);
      Eigen::VectorXd rhs(5);
      rows.row(0).setOnes();
      rhs(0) = 1.0;
      const std::array<std::array<int, 2>, 4> cubics = {{{3, 0}, {2, 1}, {1, 2}, {0, 3}}};
      for (int r = 0; r < 4; ++r) {
        const auto mono = cubics[r];
        for (int m = 0; m < 8; ++m) {
          double v = 0.0;
          for (int k = 0; k < 6; ++k) {
            double coefficient = 0.0;
            for (int d = 0; d < 6; ++d)
              coefficient += qcoef[m](k, d) * functional_value(functional(qsets[m][d]), mono);
            v += coefficient * mono_[p][k];
          }
          rows(r + 1, m) = v;
        }
        rhs(r + 1) = std::pow(px, mono[0]) * std::pow(py, mono[1]);
      }
      const Eigen::VectorXd g = rows.transpose() * (rows * rows.transpose()).ldlt().solve(rhs);
      if ((rows * g - rhs).cwiseAbs().maxCoeff() > 1e-12)
        throw ConstructionError("hweno4: cubic exactness constraints are inconsistent");
      for (int m = 0; m < 8; ++m) gamma_[p][m] = g(m);
    }
  }

  std::array<QStencil, 8> qst_{};
  std::array<CubicStencil, 4> cubic_{};
  std::array<GradStencil, 4> gx_{};
  std::array<GradStencil, 4> gy_{};
  std::array<std::array<double, 6>, 8> mono_{};
  std::array<std::array<double, 8>, 8> gamma_{};
};

/// Gather the scaled 27-entry block around cell (i, j) of a field accessor.
template <class Field>
std::array<double, 27> gather_block(const Field& f, int i, int j, double dx, double dy) {
  std::array<double, 27> b;
  for (int cell = 1; cell <= 9; ++cell) {
    const int ii = i + (cell - 1) % 3 - 1;
    const int jj = j + (cell - 1) / 3 - 1;
    b[Hweno4::q_index(cell)] = f.q(ii, jj);
    b[Hweno4::x_index(cell)] = dx * f.xi(ii, jj);
    b[Hweno4::y_index(cell)] = dy * f.eta(ii, jj);
  }
  return b;
}

template <class Field>
EdgePointValues2D hweno4_edge_values(const Field& f, int i, int j, const WeightOptions& opt = {}) {
  const double dx = f.grid().dx, dy = f.grid().dy;
  return Hweno4::instance().reconstruct(gather_block(f, i, j, dx, dy), dx, dy, opt);
}

// ---------------------------------------------------------------------------
// 2D WENO5, dimension by dimension

/// Edge Gauss-point values of q for cell (i, j), in edge_gauss_points() order.
/// The normal reconstruction gives edge-averaged values of each row (column)
/// of the 5x5 window; a tangential reconstruction takes them to the Gauss points.
template <class Field>
std::array<double, 8> weno5_edge_values_2d(const Field& f, int i, int j, const WeightOptions& opt = {}) {
  const Weno5& faces = Weno5::faces();
  const Weno5& tang = Weno5::gauss2();
  std::array<double, 5> right, left, top, bottom;
  for (int k = -2; k <= 2; ++k) {
    double row[5], col[5], lr[2], tb[2];
    for (int m = -2; m <= 2; ++m) {
      row[m + 2] = f.q(i + m, j + k);
      col[m + 2] = f.q(i + k, j + m);
    }
    faces.reconstruct(row, lr, opt);
    faces.reconstruct(col, tb, opt);
    right[k + 2] = lr[0];
    left[k + 2] = lr[1];
    top[k + 2] = tb[0];
    bottom[k + 2] = tb[1];
  }
  std::array<double, 8> out;
  tang.reconstruct(right.data(), out.data() + 0, opt);
  tang.reconstruct(left.data(), out.data() + 2, opt);
  tang.reconstruct(top.data(), out.data() + 4, opt);
  tang.reconstruct(bottom.data(), out.data() + 6, opt);
  return out;
}

}  // namespace hweno
