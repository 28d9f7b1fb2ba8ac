#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <numbers>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "hweno/errors.hpp"

namespace hweno {

enum class RegionKind { Linear, Convex, Concave };

/// Scalar flux f(q) with its derivative and an explicit partition of the
/// q-axis into maximal linear / strictly convex / strictly concave intervals.
///
/// Interval k is (breakpoints[k-1], breakpoints[k]]; a value sitting exactly on
/// a breakpoint belongs to the interval on its left.
class FluxModel {
 public:
  enum class Kind { Cubic, Sine, Cosine, PiecewiseTrig, Custom };

  using Fn = std::function<double(double)>;

  static FluxModel cubic() {
    return FluxModel(Kind::Cubic, "cubic", {0.0}, {RegionKind::Concave, RegionKind::Convex});
  }

  /// f = sin q; breakpoints at k*pi for |k| <= kTrigPeriods.
  static FluxModel sine() {
    std::vector<double> bp;
    std::vector<RegionKind> kinds;
    for (int k = -kTrigPeriods; k <= kTrigPeriods; ++k) bp.push_back(k * std::numbers::pi);
    // (k pi, (k+1) pi): f'' = -sin q < 0 for even k.
    kinds.push_back(RegionKind::Convex);  // (-inf, -K pi], K even
    for (int k = -kTrigPeriods; k <= kTrigPeriods; ++k)
      kinds.push_back((k % 2 == 0) ? RegionKind::Concave : RegionKind::Convex);
    return FluxModel(Kind::Sine, "sine", std::move(bp), std::move(kinds));
  }

  /// f = cos q; breakpoints at (k + 1/2) pi.
  static FluxModel cosine() {
    std::vector<double> bp;
    std::vector<RegionKind> kinds;
    for (int k = -kTrigPeriods; k <= kTrigPeriods; ++k) bp.push_back((k + 0.5) * std::numbers::pi);
    // ((k-1/2) pi, (k+1/2) pi): f'' = -cos q < 0 for even k.
    kinds.push_back(RegionKind::Concave);
    for (int k = -kTrigPeriods; k <= kTrigPeriods; ++k)
      kinds.push_back(((k + 1) % 2 == 0) ? RegionKind::Concave : RegionKind::Convex);
    return FluxModel(Kind::Cosine, "cosine", std::move(bp), std::move(kinds));
  }

  /// Piecewise flux built from two cosine bumps between the linear plateaus
  /// q < 1.6 and q >= 2.4. Each bump changes convexity at its quarter points.
  static FluxModel piecewise_trig() {
    return FluxModel(Kind::PiecewiseTrig, "piecewise-trig", {1.6, 1.7, 1.9, 2.0, 2.1, 2.3, 2.4},
                     {RegionKind::Linear, RegionKind::Convex, RegionKind::Concave, RegionKind::Convex,
                      RegionKind::Concave, RegionKind::Convex, RegionKind::Concave,
                      RegionKind::Linear});
  }

  /// User-supplied flux. Interval extrema and wave-speed bounds fall back to
  /// dense sampling.
  static FluxModel custom(std::string name, Fn f, Fn df, std::vector<double> breakpoints,
                          std::vector<RegionKind> kinds) {
    if (kinds.size() != breakpoints.size() + 1)
      throw InvalidArgument("FluxModel::custom: need one region kind per interval");
    FluxModel m(Kind::Custom, std::move(name), std::move(breakpoints), std::move(kinds));
    m.f_ = std::move(f);
    m.df_ = std::move(df);
    return m;
  }

  Kind kind() const noexcept { return kind_; }
  const std::string& name() const noexcept { return name_; }
  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<RegionKind>& region_kinds() const noexcept { return kinds_; }

  double f(double q) const {
    switch (kind_) {
      case Kind::Cubic: return q * q * q / 3.0;
      case Kind::Sine: return std::sin(q);
      case Kind::Cosine: return std::cos(q);
      case Kind::PiecewiseTrig:
        if (q < 1.6) return 1.0;
        if (q < 2.0) return std::cos(kBump * (q - 1.8)) + 2.0;
        if (q < 2.4) return -std::cos(kBump * (q - 2.2));
        return 1.0;
      case Kind::Custom: return f_(q);
    }
    return 0.0;
  }

  double df(double q) const {
    switch (kind_) {
      case Kind::Cubic: return q * q;
      case Kind::Sine: return std::cos(q);
      case Kind::Cosine: return -std::sin(q);
      case Kind::PiecewiseTrig:
        if (q < 1.6) return 0.0;
        if (q < 2.0) return -kBump * std::sin(kBump * (q - 1.8));
        if (q < 2.4) return kBump * std::sin(kBump * (q - 2.2));
        return 0.0;
      case Kind::Custom: return df_(q);
    }
    return 0.0;
  }

  /// f and f' together; one sincos for the trigonometric models.
  void f_df(double q, double& fv, double& dv) const {
    double sn, cs;
    switch (kind_) {
      case Kind::Cubic: fv = q * q * q / 3.0, dv = q * q; return;
      case Kind::Sine: ::sincos(q, &sn, &cs), fv = sn, dv = cs; return;
      case Kind::Cosine: ::sincos(q, &sn, &cs), fv = cs, dv = -sn; return;
      case Kind::PiecewiseTrig:
        if (q < 1.6 || q >= 2.4) {
          fv = 1.0, dv = 0.0;
        } else if (q < 2.0) {
          ::sincos(kBump * (q - 1.8), &sn, &cs);
          fv = cs + 2.0, dv = -kBump * sn;
        } else {
          ::sincos(kBump * (q - 2.2), &sn, &cs);
          fv = -cs, dv = kBump * sn;
        }
        return;
      case Kind::Custom: fv = f_(q), dv = df_(q); return;
    }
  }

  std::size_t classify_region(double q) const noexcept {
    return static_cast<std::size_t>(
        std::lower_bound(breakpoints_.begin(), breakpoints_.end(), q) - breakpoints_.begin());
  }

  RegionKind region_kind(double q) const noexcept { return kinds_[classify_region(q)]; }

  /// min of f over [a, b] given fa = f(a), fb = f(b); requires a <= b.
  double min_over(double a, double b, double fa, double fb) const {
    double m = std::min(fa, fb);
    switch (kind_) {
      case Kind::Cubic: return m;  // non-decreasing
      case Kind::Sine: return has_odd(std::ceil(a / kPi - 0.5), std::floor(b / kPi - 0.5)) ? -1.0 : m;
      case Kind::Cosine: return has_odd(std::ceil(a / kPi), std::floor(b / kPi)) ? -1.0 : m;
      case Kind::PiecewiseTrig:
        for (auto [q, v] : kPiecewiseExtrema)
          if (q >= a && q <= b) m = std::min(m, v);
        return m;
      case Kind::Custom: return sampled_extreme(a, b, m, false);
    }
    return m;
  }

  /// max of f over [a, b] given fa = f(a), fb = f(b); requires a <= b.
  double max_over(double a, double b, double fa, double fb) const {
    double m = std::max(fa, fb);
    switch (kind_) {
      case Kind::Cubic: return m;
      case Kind::Sine: return has_even(std::ceil(a / kPi - 0.5), std::floor(b / kPi - 0.5)) ? 1.0 : m;
      case Kind::Cosine: return has_even(std::ceil(a / kPi), std::floor(b / kPi)) ? 1.0 : m;
      case Kind::PiecewiseTrig:
        for (auto [q, v] : kPiecewiseExtrema)
          if (q >= a && q <= b) m = std::max(m, v);
        return m;
      case Kind::Custom: return sampled_extreme(a, b, m, true);
    }
    return m;
  }

  double min_over(double a, double b) const { return min_over(a, b, f(a), f(b)); }
  double max_over(double a, double b) const { return max_over(a, b, f(a), f(b)); }

  /// max |f'| over [lo, hi]; closed form for builtins.
  double max_abs_df(double lo, double hi) const {
    if (lo > hi) std::swap(lo, hi);
    const double ends = std::max(std::abs(df(lo)), std::abs(df(hi)));
    switch (kind_) {
      case Kind::Cubic: return ends;
      case Kind::Sine: return (std::floor(hi / kPi) >= std::ceil(lo / kPi)) ? 1.0 : ends;
      case Kind::Cosine:
        return (std::floor(hi / kPi - 0.5) >= std::ceil(lo / kPi - 0.5)) ? 1.0 : ends;
      case Kind::PiecewiseTrig:
        for (double q : {1.7, 1.9, 2.1, 2.3})
          if (q >= lo && q <= hi) return kBump;
        return ends;
      case Kind::Custom: {
        double m = ends;
        for (int k = 0; k <= kSamples; ++k)
          m = std::max(m, std::abs(df(lo + (hi - lo) * k / kSamples)));
        return m;
      }
    }
    return ends;
  }

  static constexpr int kTrigPeriods = 32;
  static constexpr int kSamples = 10000;

 private:
  static constexpr double kPi = std::numbers::pi;
  static constexpr double kBump = 5.0 * std::numbers::pi;
  static constexpr std::pair<double, double> kPiecewiseExtrema[] = {
      {1.6, 1.0}, {1.8, 3.0}, {2.0, 1.0}, {2.2, -1.0}, {2.4, 1.0}};

  FluxModel(Kind kind, std::string name, std::vector<double> bp, std::vector<RegionKind> kinds)
      : kind_(kind), name_(std::move(name)), breakpoints_(std::move(bp)), kinds_(std::move(kinds)) {}

  static bool is_odd(double k) { return std::fmod(std::abs(k), 2.0) == 1.0; }
  // Whether the integer range [k0, k1] contains an odd (even) integer.
  static bool has_odd(double k0, double k1) { return k1 > k0 || (k1 == k0 && is_odd(k0)); }
  static bool has_even(double k0, double k1) { return k1 > k0 || (k1 == k0 && !is_odd(k0)); }

  double sampled_extreme(double a, double b, double m, bool want_max) const {
    auto take = [&](double v) { m = want_max ? std::max(m, v) : std::min(m, v); };
    for (int k = 1; k < kSamples; ++k) take(f(a + (b - a) * k / kSamples));
    for (double q : breakpoints_)
      if (q > a && q < b) take(f(q));
    return m;
  }

  Kind kind_;
  std::string name_;
  std::vector<double> breakpoints_;
  std::vector<RegionKind> kinds_;
  Fn f_;
  Fn df_;
};

/// Flux pair for q_t + f(q)_x + g(q)_y = 0.
struct Flux2D {
  FluxModel fx;
  FluxModel fy;
};

using BuiltinFlux = std::variant<FluxModel, Flux2D>;

/// Names: cubic, sine, cosine, piecewise-trig (1D) and kpp, cubic-2d (2D).
inline BuiltinFlux builtin_flux(std::string_view name) {
  if (name == "cubic") return FluxModel::cubic();
  if (name == "sine") return FluxModel::sine();
  if (name == "cosine") return FluxModel::cosine();
  if (name == "piecewise-trig") return FluxModel::piecewise_trig();
  if (name == "kpp") return Flux2D{FluxModel::sine(), FluxModel::cosine()};
  if (name == "cubic-2d") return Flux2D{FluxModel::cubic(), FluxModel::cubic()};
  throw LookupError("unknown flux '" + std::string(name) + "'");
}

inline FluxModel builtin_flux_1d(std::string_view name) {
  auto f = builtin_flux(name);
  if (auto* m = std::get_if<FluxModel>(&f)) return *m;
  throw LookupError("flux '" + std::string(name) + "' is two-dimensional");
}

inline Flux2D builtin_flux_2d(std::string_view name) {
  auto f = builtin_flux(name);
  if (auto* m = std::get_if<Flux2D>(&f)) return *m;
  throw LookupError("flux '" + std::string(name) + "' is one-dimensional");
}

inline std::size_t classify_region(const FluxModel& model, double q) { return model.classify_region(q); }

inline bool same_region(const FluxModel& model, std::span<const double> values) {
  if (values.empty()) return true;
  const std::size_t first = model.classify_region(values.front());
  for (double v : values.subspan(1))
    if (model.classify_region(v) != first) return false;
  return true;
}

inline bool same_region(const FluxModel& model, std::initializer_list<double> values) {
  return same_region(model, std::span<const double>(values.begin(), values.size()));
}

/// Global Lax-Friedrichs wave-speed bound over the invariant range [qmin, qmax].
inline double global_alpha(const FluxModel& model, double qmin, double qmax) {
  return model.max_abs_df(qmin, qmax);
}

}  // namespace hweno
