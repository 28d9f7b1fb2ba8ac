#pragma once

#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <string_view>
#include <vector>

#include "hweno/errors.hpp"
#include "hweno/flux.hpp"
#include "hweno/grid.hpp"

namespace hweno {

enum class ExactKind { Characteristics, ReferenceNumerical, None };

/// A registered benchmark: flux, data, domain, boundary and final time.
struct ProblemCase {
  std::string name;
  int dimension = 1;
  std::string flux_name;
  std::function<double(double)> q0;
  std::function<double(double, double)> q0_2d;
  BoundarySpec boundary;
  double ax = 0.0, bx = 1.0, ay = 0.0, by = 1.0;
  double t_end = 0.0;
  ExactKind exact = ExactKind::None;
  /// Interface-aligned discontinuities of the 1D initial data.
  std::vector<double> jumps;
  /// Range of the initial data; scalar solutions stay inside it.
  double qmin = 0.0, qmax = 0.0;
  /// Default CFL number for this case.
  double cfl = 0.5;
};

inline std::vector<ProblemCase> problem_registry() {
  constexpr double pi = std::numbers::pi;
  std::vector<ProblemCase> cases;

  ProblemCase c;
  c.name = "cubic-smooth";
  c.flux_name = "cubic";
  c.q0 = [](double x) { return std::sin(pi * x); };
  c.boundary = BoundarySpec::periodic();
  c.ax = -1.0, c.bx = 1.0;
  c.t_end = 0.2;
  c.exact = ExactKind::Characteristics;
  c.qmin = -1.0, c.qmax = 1.0;
  cases.push_back(c);

  c = {};
  c.name = "sine-riemann";
  c.flux_name = "sine";
  c.q0 = [](double x) { return x < 0.0 ? pi / 64.0 : 255.0 * pi / 64.0; };
  c.boundary = BoundarySpec::fixed(pi / 64.0, 255.0 * pi / 64.0);
  c.ax = -5.0, c.bx = 5.0;
  c.t_end = 4.0;
  c.exact = ExactKind::ReferenceNumerical;
  c.jumps = {0.0};
  c.qmin = pi / 64.0, c.qmax = 255.0 * pi / 64.0;
  cases.push_back(c);

  c = {};
  c.name = "piecewise-riemann";
  c.flux_name = "piecewise-trig";
  c.q0 = [](double x) { return x < 0.0 ? 1.0 : 3.0; };
  c.boundary = BoundarySpec::fixed(1.0, 3.0);
  c.ax = -4.0, c.bx = 6.0;
  c.t_end = 2.0;
  c.exact = ExactKind::ReferenceNumerical;
  c.jumps = {0.0};
  c.qmin = 1.0, c.qmax = 3.0;
  cases.push_back(c);

  c = {};
  c.name = "piecewise-periodic";
  c.flux_name = "piecewise-trig";
  c.q0 = [](double x) { return x < 0.0 ? 3.0 : 1.0; };
  c.boundary = BoundarySpec::periodic();
  c.ax = -1.0, c.bx = 1.0;
  c.t_end = 2.0;
  c.exact = ExactKind::ReferenceNumerical;
  c.jumps = {-1.0, 0.0, 1.0};
  c.qmin = 1.0, c.qmax = 3.0;
  c.cfl = 0.01;
  cases.push_back(c);

  c = {};
  c.name = "cubic-2d";
  c.dimension = 2;
  c.flux_name = "cubic-2d";
  c.q0_2d = [](double x, double y) { return std::sin(0.5 * pi * (x + y)); };
  c.boundary = BoundarySpec::periodic();
  c.ax = -2.0, c.bx = 2.0, c.ay = -2.0, c.by = 2.0;
  c.t_end = 0.2;
  c.exact = ExactKind::Characteristics;
  c.qmin = -1.0, c.qmax = 1.0;
  c.cfl = 0.4;
  cases.push_back(c);

  c = {};
  c.name = "kpp";
  c.dimension = 2;
  c.flux_name = "kpp";
  c.q0_2d = [](double x, double y) {
    return std::sqrt(x * x + y * y) <= 1.0 ? 14.0 * pi / 4.0 : pi / 4.0;
  };
  c.boundary = BoundarySpec::fixed(pi / 4.0, pi / 4.0, pi / 4.0, pi / 4.0);
  c.ax = -2.0, c.bx = 2.0, c.ay = -2.5, c.by = 1.5;
  c.t_end = 1.0;
  c.exact = ExactKind::ReferenceNumerical;
  c.qmin = pi / 4.0, c.qmax = 14.0 * pi / 4.0;
  c.cfl = 0.4;
  cases.push_back(c);

  return cases;
}

inline ProblemCase find_problem(std::string_view name) {
  for (auto& c : problem_registry())
    if (c.name == name) return c;
  throw LookupError("unknown case '" + std::string(name) + "'");
}

namespace detail {

/// Damped Newton for r(q) = 0 with r' supplied; stops at |r| <= tol.
template <class R, class DR>
double damped_newton(R&& r, DR&& dr, double q, const char* what) {
  constexpr double kTol = 1e-13;
  double res = r(q);
  for (int it = 0; it < 200; ++it) {
    if (std::abs(res) <= kTol) return q;
    const double d = dr(q);
    if (d == 0.0 || !std::isfinite(d)) break;
    double step = res / d;
    double lambda = 1.0;
    double trial = q - step, rt = r(trial);
    while (std::abs(rt) > std::abs(res) && lambda > 1e-6) {
      lambda *= 0.5;
      trial = q - lambda * step;
      rt = r(trial);
    }
    q = trial;
    res = rt;
  }
  if (std::abs(res) <= kTol) return q;
  throw ConvergenceError(std::string("exact_solution: Newton iteration failed for ") + what);
}

}  // namespace detail

/// Exact solution by characteristics for the smooth cases, before shock formation.
inline double exact_solution(const ProblemCase& c, double x, double t) {
  constexpr double pi = std::numbers::pi;
  if (c.name != "cubic-smooth")
    throw InvalidArgument("exact_solution: no characteristic solution for case " + c.name);
  if (t == 0.0) return c.q0(x);
  // q = sin(pi (x - q^2 t))
  auto r = [&](double q) { return q - std::sin(pi * (x - q * q * t)); };
  auto dr = [&](double q) { return 1.0 + 2.0 * pi * q * t * std::cos(pi * (x - q * q * t)); };
  return detail::damped_newton(r, dr, c.q0(x), "cubic-smooth");
}

inline double exact_solution(const ProblemCase& c, double x, double y, double t) {
  constexpr double pi = std::numbers::pi;
  if (c.name != "cubic-2d")
    throw InvalidArgument("exact_solution: no characteristic solution for case " + c.name);
  if (t == 0.0) return c.q0_2d(x, y);
  // q = sin(pi (x + y - 2 q^2 t) / 2)
  auto arg = [&](double q) { return 0.5 * pi * (x + y - 2.0 * q * q * t); };
  auto r = [&](double q) { return q - std::sin(arg(q)); };
  auto dr = [&](double q) { return 1.0 + 2.0 * pi * q * t * std::cos(arg(q)); };
  return detail::damped_newton(r, dr, c.q0_2d(x, y), "cubic-2d");
}

}  // namespace hweno
