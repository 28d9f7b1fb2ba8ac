#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "hweno/grid.hpp"
#include "hweno/quadrature.hpp"
#include "hweno/reconstruction.hpp"
#include "support.hpp"

using namespace hweno;
using hweno::test::Rng;
using hweno::test::fitted_order;

namespace {

constexpr double kPi = std::numbers::pi;
using Fn = std::function<double(double)>;

double cell_average(const Fn& q, double xc, double dx) {
  const GaussRule& r = gauss_legendre(8);
  double s = 0.0;
  for (std::size_t k = 0; k < r.size(); ++k) s += r.weights[k] * q(xc + r.nodes[k] * dx);
  return s;
}

/// Averages and gradient averages of cells j-2..j+2 around x_j = xc.
struct Window {
  std::array<double, 5> q, xi;
};

Window sample(const Fn& q, double xc, double dx) {
  Window w;
  for (int k = -2; k <= 2; ++k) {
    const double c = xc + k * dx;
    w.q[k + 2] = cell_average(q, c, dx);
    w.xi[k + 2] = (q(c + 0.5 * dx) - q(c - 0.5 * dx)) / dx;
  }
  return w;
}

CellFaceValues hweno5(const Window& w, double dx, bool linear) {
  return Hweno5::instance().reconstruct(w.q.data() + 1, w.xi.data() + 1, dx, {1e-6, linear});
}

std::array<double, 2> weno5(const Window& w, bool linear) {
  std::array<double, 2> out;
  Weno5::faces().reconstruct(w.q.data(), out.data(), {1e-6, linear});
  return out;
}

Fn polynomial(const std::vector<double>& c) {
  return [c](double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  };
}

Fn polynomial_derivative(const std::vector<double>& c) {
  return [c](double x) {
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + k * c[k];
    return v;
  };
}

}  // namespace

TEST(Limiters, Minmod) {
  EXPECT_EQ(minmod2(1.0, -2.0), 0.0);
  EXPECT_EQ(minmod2(1.0, 2.0), 1.0);
  EXPECT_EQ(minmod2(-1.0, -2.0), -1.0);
  EXPECT_EQ(minmod2(0.0, 2.0), 0.0);
  const std::vector<double> pos = {3.0, 1.5, 2.0}, neg = {-3.0, -1.5}, mixed = {1.0, -1.0}, zero = {0.0, 1.0};
  EXPECT_EQ(interval_minmod(pos), 1.5);
  EXPECT_EQ(interval_minmod(neg), -1.5);
  EXPECT_EQ(interval_minmod(mixed), 0.0);
  EXPECT_EQ(interval_minmod(zero), 0.0);
  EXPECT_EQ(muscl_slope(0.0, 1.0, 3.0), 1.0);
  EXPECT_EQ(minmod4(1.0, 2.0, 3.0, 0.5), 0.5);
  EXPECT_EQ(minmod4(1.0, 2.0, -3.0, 0.5), 0.0);
}

TEST(Hweno5, LinearWeightsMatchSymbolicOracle) {
  // tests/oracles/derive_weights.py
  const Hweno5& h = Hweno5::instance();
  const std::array<double, 3> gv = {9.0 / 80, 29.0 / 80, 21.0 / 40};
  const std::array<double, 3> gd = {1.0 / 18, 1.0 / 9, 5.0 / 6};
  const std::array<double, 6> rv = {-23.0 / 120, 19.0 / 30, 67.0 / 120, -3.0 / 40, 0.0, -7.0 / 40};
  const std::array<double, 6> rd = {1.0 / 4, -2.0, 7.0 / 4, 1.0 / 12, -1.0 / 6, -5.0 / 12};
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(h.value_gamma()[m], gv[m], 1e-13);
    EXPECT_NEAR(h.derivative_gamma()[m], gd[m], 1e-13);
  }
  for (int k = 0; k < 6; ++k) {
    EXPECT_NEAR(h.big_value_row()[k], rv[k], 1e-13);
    EXPECT_NEAR(h.big_derivative_row()[k], rd[k], 1e-12);
  }
}

TEST(Weno5, LinearWeightsMatchClassicalValues) {
  const Weno5& w = Weno5::faces();
  const std::array<double, 3> right = {0.1, 0.6, 0.3}, left = {0.3, 0.6, 0.1};
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(w.gamma(0)[m], right[m], 1e-13);
    EXPECT_NEAR(w.gamma(1)[m], left[m], 1e-13);
  }
}

TEST(Hweno5, PolynomialExactness) {
  Rng rng(3);
  const double dx = 0.1, xc = 0.3;
  for (int degree = 0; degree <= 5; ++degree) {
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> c = rng.vector(degree + 1, -2.0, 2.0);
      const Fn p = polynomial(c), dp = polynomial_derivative(c);
      const Window w = sample(p, xc, dx);
      const CellFaceValues lin = hweno5(w, dx, true);
      if (degree <= 4) {
        EXPECT_NEAR(lin.q_right, p(xc + 0.5 * dx), 1e-11) << "degree " << degree;
        EXPECT_NEAR(lin.q_left, p(xc - 0.5 * dx), 1e-11) << "degree " << degree;
      }
      EXPECT_NEAR(lin.xi_right, dp(xc + 0.5 * dx), 1e-9) << "degree " << degree;
      EXPECT_NEAR(lin.xi_left, dp(xc - 0.5 * dx), 1e-9) << "degree " << degree;
      if (degree <= 2) {
        const CellFaceValues nl = hweno5(w, dx, false);
        EXPECT_NEAR(nl.q_right, p(xc + 0.5 * dx), 1e-11);
        EXPECT_NEAR(nl.q_left, p(xc - 0.5 * dx), 1e-11);
      }
      if (degree <= 3) {
        const CellFaceValues nl = hweno5(w, dx, false);
        EXPECT_NEAR(nl.xi_right, dp(xc + 0.5 * dx), 1e-9);
        EXPECT_NEAR(nl.xi_left, dp(xc - 0.5 * dx), 1e-9);
      }
    }
  }
}

TEST(Weno5, PolynomialExactness) {
  Rng rng(4);
  const double dx = 0.1, xc = -0.2;
  for (int degree = 0; degree <= 4; ++degree) {
    for (int trial = 0; trial < 10; ++trial) {
      const Fn p = polynomial(rng.vector(degree + 1, -2.0, 2.0));
      const Window w = sample(p, xc, dx);
      const auto lin = weno5(w, true);
      EXPECT_NEAR(lin[0], p(xc + 0.5 * dx), 1e-11);
      EXPECT_NEAR(lin[1], p(xc - 0.5 * dx), 1e-11);
      if (degree <= 2) {
        const auto nl = weno5(w, false);
        EXPECT_NEAR(nl[0], p(xc + 0.5 * dx), 1e-11);
        EXPECT_NEAR(nl[1], p(xc - 0.5 * dx), 1e-11);
      }
    }
  }
}

TEST(Reconstruction1D, ConstantsAndAffineEquivariance) {
  // The weights see beta + eps, so a scale factor c is matched by eps c^2.
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    Window w;
    for (int k = 0; k < 5; ++k) w.q[k] = rng.uniform(-1.0, 1.0), w.xi[k] = rng.uniform(-5.0, 5.0);
    const double a = trial % 3 == 0 ? -1.0 : rng.uniform(-3.0, 3.0), b = rng.uniform(-3.0, 3.0), dx = 0.05;
    Window s;
    for (int k = 0; k < 5; ++k) s.q[k] = a * w.q[k] + b, s.xi[k] = a * w.xi[k];
    const WeightOptions o0{1e-6, false}, o1{1e-6 * a * a, false};
    const CellFaceValues h0 = Hweno5::instance().reconstruct(w.q.data() + 1, w.xi.data() + 1, dx, o0);
    const CellFaceValues h1 = Hweno5::instance().reconstruct(s.q.data() + 1, s.xi.data() + 1, dx, o1);
    EXPECT_NEAR(h1.q_right, a * h0.q_right + b, 1e-12);
    EXPECT_NEAR(h1.q_left, a * h0.q_left + b, 1e-12);
    EXPECT_NEAR(h1.xi_right, a * h0.xi_right, 1e-12 * std::max(1.0, std::abs(h0.xi_right)));
    EXPECT_NEAR(h1.xi_left, a * h0.xi_left, 1e-12 * std::max(1.0, std::abs(h0.xi_left)));
    std::array<double, 2> w0, w1;
    Weno5::faces().reconstruct(w.q.data(), w0.data(), o0);
    Weno5::faces().reconstruct(s.q.data(), w1.data(), o1);
    EXPECT_NEAR(w1[0], a * w0[0] + b, 1e-12);
    EXPECT_NEAR(w1[1], a * w0[1] + b, 1e-12);
  }
  Window c;
  c.q.fill(2.5);
  c.xi.fill(0.0);
  EXPECT_DOUBLE_EQ(hweno5(c, 0.1, false).q_right, 2.5);
  EXPECT_DOUBLE_EQ(weno5(c, false)[1], 2.5);
}

TEST(Reconstruction1D, SmoothDataConvergenceOrder) {
  const Fn q = [](double x) { return std::sin(kPi * x); };
  const Fn dq = [](double x) { return kPi * std::cos(kPi * x); };
  std::vector<double> hs, eh, ed, ew;
  for (double dx = 0.05; dx > 0.003; dx /= 2) {
    double e1 = 0, e2 = 0, e3 = 0;
    // max over cell positions along one period
    for (int k = 0; k < 40; ++k) {
      const double xc = -1.0 + k / 20.0 + 0.013;
      const Window w = sample(q, xc, dx);
      const CellFaceValues v = hweno5(w, dx, false);
      e1 = std::max({e1, std::abs(v.q_right - q(xc + dx / 2)), std::abs(v.q_left - q(xc - dx / 2))});
      e2 = std::max({e2, std::abs(v.xi_right - dq(xc + dx / 2)), std::abs(v.xi_left - dq(xc - dx / 2))});
      const auto f = weno5(w, false);
      e3 = std::max({e3, std::abs(f[0] - q(xc + dx / 2)), std::abs(f[1] - q(xc - dx / 2))});
    }
    hs.push_back(dx), eh.push_back(e1), ed.push_back(e2), ew.push_back(e3);
  }
  ASSERT_GE(hs.size(), 4u);
  EXPECT_GE(fitted_order(hs, eh), 4.7);
  EXPECT_GE(fitted_order(hs, ed), 4.0);
  EXPECT_GE(fitted_order(hs, ew), 4.7);
}

TEST(Reconstruction1D, NonlinearWeightsAreConvex) {
  Rng rng(10);
  const auto& g = Hweno5::instance().value_gamma();
  for (int trial = 0; trial < 500; ++trial) {
    const std::array<double, 3> beta = {rng.uniform(0, 1) * std::pow(10.0, rng.integer(-12, 2)),
                                        rng.uniform(0, 1) * std::pow(10.0, rng.integer(-12, 2)),
                                        rng.uniform(0, 1) * std::pow(10.0, rng.integer(-12, 2))};
    const auto w = nonlinear_weights<3>(g, beta, 1e-6);
    double s = 0;
    for (double v : w) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
      s += v;
    }
    EXPECT_NEAR(s, 1.0, 1e-13);
  }
}

TEST(Reconstruction1D, EnoBehaviourAtStep) {
  // Step between cells j and j+1: the right face stays close to the left state.
  Window w;
  w.q = {1.0, 1.0, 1.0, 3.0, 3.0};
  w.xi = {0.0, 0.0, 0.0, 0.0, 0.0};
  const CellFaceValues h = hweno5(w, 0.1, false);
  EXPECT_NEAR(h.q_left, 1.0, 1e-6);
  EXPECT_LT(std::abs(weno5(w, false)[0] - 1.0), 0.05);
  EXPECT_LT(std::abs(weno5(w, false)[1] - 1.0), 1e-6);
}

TEST(MpLimiter, BoundsAndSmoothDataPassThrough) {
  Rng rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    std::array<double, 5> q;
    for (auto& v : q) v = rng.uniform(0.0, 1.0);
    const double vr = rng.uniform(-1.0, 2.0), vl = rng.uniform(-1.0, 2.0);
    const auto [r, l] = mp_limit(vr, vl, q);
    // The limited value never exceeds the four-times-slope upper bound of the window.
    const double lo = std::min(q[2], q[3]) - 4.0 * std::abs(q[2] - q[1]) - 1e-12;
    const double hi = std::max(q[2], q[3]) + 4.0 * std::abs(q[2] - q[1]) + 1e-12;
    EXPECT_GE(r, std::min(lo, vr)) << trial;
    EXPECT_LE(r, std::max(hi, vr)) << trial;
    EXPECT_TRUE(std::isfinite(l));
  }
  // Monotone data: any face value between neighbours is untouched.
  const std::array<double, 5> mono = {0.0, 1.0, 2.0, 3.0, 4.0};
  EXPECT_DOUBLE_EQ(mp_limit(2.5, 1.5, mono).first, 2.5);
  EXPECT_DOUBLE_EQ(mp_limit(2.5, 1.5, mono).second, 1.5);
  // Overshoot next to a step is clipped into [q_j, q_{j+1}].
  const std::array<double, 5> step = {1.0, 1.0, 1.0, 3.0, 3.0};
  EXPECT_DOUBLE_EQ(mp_limit(0.8, 1.0, step).first, 1.0);
}

namespace {

using Fn2 = std::function<double(double, double)>;

/// 5x5 grid centred on the origin with cell width h.
Field2D sample_2d(const Fn2& q, double h) {
  const Grid2D g = build_grid(-2.5 * h, 2.5 * h, 5, -2.5 * h, 2.5 * h, 5);
  Field2D f = init_field(g, q, 8);
  fill_ghosts(f, BoundarySpec::fixed(0, 0, 0, 0));
  return f;
}

}  // namespace

TEST(Hweno4, LinearDataExact) {
  const Fn2 q = [](double x, double y) { return 0.3 + x + 2.0 * y; };
  const Field2D f = sample_2d(q, 0.1);
  const auto pts = edge_gauss_points();
  for (bool linear : {true, false}) {
    const EdgePointValues2D v = hweno4_edge_values(f, 2, 2, {1e-6, linear});
    for (int p = 0; p < 8; ++p) {
      EXPECT_NEAR(v.q[p], q(0.1 * pts[p][0], 0.1 * pts[p][1]), 1e-12);
      EXPECT_NEAR(v.xi[p], 1.0, 1e-10);
      EXPECT_NEAR(v.eta[p], 2.0, 1e-10);
    }
  }
}

TEST(Hweno4, PolynomialExactnessWithLinearWeights) {
  Rng rng(14);
  const auto pts = edge_gauss_points();
  for (int trial = 0; trial < 10; ++trial) {
    const auto c = rng.vector(10, -1.0, 1.0);
    const Fn2 q = [&c](double x, double y) {
      return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
             c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
    };
    const Field2D f = sample_2d(q, 0.2);
    const EdgePointValues2D lin = hweno4_edge_values(f, 2, 2, {1e-6, true});
    for (int p = 0; p < 8; ++p) EXPECT_NEAR(lin.q[p], q(0.2 * pts[p][0], 0.2 * pts[p][1]), 1e-11);
    // quadratics are reproduced by every small stencil
    const Fn2 q2 = [&c](double x, double y) {
      return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y;
    };
    const EdgePointValues2D nl = hweno4_edge_values(sample_2d(q2, 0.2), 2, 2, {1e-6, false});
    for (int p = 0; p < 8; ++p) EXPECT_NEAR(nl.q[p], q2(0.2 * pts[p][0], 0.2 * pts[p][1]), 1e-11);
  }
}

TEST(Reconstruction2D, SmoothDataConvergenceOrder) {
  const Fn2 q = [](double x, double y) { return std::sin(0.5 * kPi * (x + y) + 0.4); };
  const Fn2 p = [](double x, double y) { return std::sin(kPi * x + 0.3) * std::cos(0.5 * kPi * y - 0.2); };
  const auto pts = edge_gauss_points();
  std::vector<double> hs, e4, e5;
  for (double h = 0.2; h > 0.01; h /= 2) {
    const EdgePointValues2D v = hweno4_edge_values(sample_2d(q, h), 2, 2);
    const auto w = weno5_edge_values_2d(sample_2d(p, h), 2, 2);
    double a = 0, b = 0;
    for (int k = 0; k < 8; ++k) {
      a = std::max(a, std::abs(v.q[k] - q(h * pts[k][0], h * pts[k][1])));
      b = std::max(b, std::abs(w[k] - p(h * pts[k][0], h * pts[k][1])));
    }
    hs.push_back(h), e4.push_back(a), e5.push_back(b);
  }
  ASSERT_GE(hs.size(), 4u);
  EXPECT_GE(fitted_order(hs, e4), 3.7);
  EXPECT_GE(fitted_order(hs, e5), 4.5);
}

TEST(Weno5TwoD, LinearFieldExact) {
  const Fn2 q = [](double x, double y) { return 1.0 - 3.0 * x + 0.5 * y; };
  const auto pts = edge_gauss_points();
  const auto w = weno5_edge_values_2d(sample_2d(q, 0.3), 2, 2);
  for (int k = 0; k < 8; ++k) EXPECT_NEAR(w[k], q(0.3 * pts[k][0], 0.3 * pts[k][1]), 1e-12);
}
