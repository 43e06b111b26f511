#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "openulam/piecewise_map.hpp"

namespace openulam {

// Branch derivatives of the Lorenz family blow up at the discontinuity;
// queries this close to it are rejected rather than returning inf.
inline constexpr double kLorenzSingularGuard = 1e-300;

// x -> beta*x (mod 1) on [0,1]; ceil(beta) branches, the last truncated.
inline PiecewiseMap beta_shift(double beta) {
    if (!(beta > 1.0)) throw ValidationError("beta_shift: requires beta > 1");
    PiecewiseMap map;
    map.domain = Interval(0.0, 1.0);
    map.meta.family = "beta_shift";
    map.meta.params = {{"beta", beta}};
    const int nb = static_cast<int>(std::ceil(beta));
    for (int j = 0; j < nb; ++j) {
        double lo = j / beta;
        double hi = std::min((j + 1) / beta, 1.0);
        double jd = j;
        map.branches.push_back(make_branch(
            Interval(lo, hi),
            [beta, jd](double x) { return beta * x - jd; },
            [beta](double) { return beta; },
            /*linear=*/true,
            [beta, jd](double y) { return (y + jd) / beta; }));
    }
    return map;
}

// Explicit breakpoints b_0 < ... < b_n and per-branch image endpoint
// pairs (f(b_i), f(b_{i+1})); every slope must exceed 1 in magnitude.
inline PiecewiseMap piecewise_linear(
    const std::vector<double>& breakpoints,
    const std::vector<std::pair<double, double>>& images) {
    if (breakpoints.size() < 2)
        throw ValidationError("piecewise_linear: need at least 2 breakpoints");
    if (images.size() + 1 != breakpoints.size())
        throw ValidationError("piecewise_linear: images must have one entry per branch");
    PiecewiseMap map;
    map.domain = Interval(breakpoints.front(), breakpoints.back());
    map.meta.family = "piecewise_linear";
    for (std::size_t i = 0; i + 1 < breakpoints.size(); ++i) {
        double lo = breakpoints[i], hi = breakpoints[i + 1];
        if (!(lo < hi))
            throw ValidationError("piecewise_linear: breakpoints not increasing");
        double y0 = images[i].first, y1 = images[i].second;
        double slope = (y1 - y0) / (hi - lo);
        if (!(std::abs(slope) > 1.0))
            throw ValidationError("piecewise_linear: |slope| must exceed 1");
        map.branches.push_back(make_branch(
            Interval(lo, hi),
            [slope, lo, y0](double x) { return y0 + slope * (x - lo); },
            [slope](double) { return slope; },
            /*linear=*/true,
            [slope, lo, y0](double y) { return lo + (y - y0) / slope; }));
    }
    return map;
}

// Lorenz-like family on [-1,1]: c*x^alpha - 1 for x > 0, mirrored for
// x < 0. Increasing on both branches; derivative singular at 0.
inline PiecewiseMap lorenz(double c, double alpha) {
    if (!(c > 0.0)) throw ValidationError("lorenz: requires c > 0");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw ValidationError("lorenz: requires 0 < alpha < 1");
    PiecewiseMap map;
    map.domain = Interval(-1.0, 1.0);
    map.meta.family = "lorenz";
    map.meta.params = {{"c", c}, {"alpha", alpha}};
    auto deriv = [c, alpha](double x) {
        if (std::abs(x) < kLorenzSingularGuard)
            throw DomainError("lorenz derivative: query at the singular point");
        return c * alpha * std::pow(std::abs(x), alpha - 1.0);
    };
    map.branches.push_back(make_branch(
        Interval(-1.0, 0.0),
        [c, alpha](double x) { return 1.0 - c * std::pow(-x, alpha); },
        deriv, /*linear=*/false,
        [c, alpha](double y) { return -std::pow((1.0 - y) / c, 1.0 / alpha); }));
    map.branches.push_back(make_branch(
        Interval(0.0, 1.0),
        [c, alpha](double x) { return c * std::pow(x, alpha) - 1.0; },
        deriv, /*linear=*/false,
        [c, alpha](double y) { return std::pow((y + 1.0) / c, 1.0 / alpha); }));
    return map;
}

// Four tent-like branches of slope ±2/delta on [0,delta] and
// [1-delta,1]. The stretch between them is not covered by any branch;
// it is only usable with a hole containing [delta, 1-delta].
inline PiecewiseMap large_hole_tent(double delta) {
    if (!(delta > 0.0 && delta < 0.5))
        throw ValidationError("large_hole_tent: requires 0 < delta < 1/2");
    const double s = 2.0 / delta;
    auto linear = [&](double lo, double hi, double y0, double y1) {
        double slope = (y1 - y0) / (hi - lo);
        return make_branch(
            Interval(lo, hi),
            [slope, lo, y0](double x) { return y0 + slope * (x - lo); },
            [slope](double) { return slope; },
            /*linear=*/true,
            [slope, lo, y0](double y) { return lo + (y - y0) / slope; });
    };
    PiecewiseMap map;
    map.domain = Interval(0.0, 1.0);
    map.meta.family = "large_hole_tent";
    map.meta.params = {{"delta", delta}, {"slope", s}};
    map.branches.push_back(linear(0.0, 0.5 * delta, 0.0, 1.0));
    map.branches.push_back(linear(0.5 * delta, delta, 1.0, 0.0));
    map.branches.push_back(linear(1.0 - delta, 1.0 - 0.5 * delta, 0.0, 1.0));
    map.branches.push_back(linear(1.0 - 0.5 * delta, 1.0, 1.0, 0.0));
    return map;
}

inline IntervalSet large_hole_tent_hole(double delta) {
    return IntervalSet{Interval(delta, 1.0 - delta)};
}

// 2.08x on [0,1/2), 2-2x on [1/2,1]. The first branch exits [0,1];
// the implicit hole is the sliver (1/2.08, 1/2) that maps above 1.
inline PiecewiseMap bahsoun() {
    PiecewiseMap map;
    map.domain = Interval(0.0, 1.0);
    map.meta.family = "bahsoun";
    map.branches.push_back(make_branch(
        Interval(0.0, 0.5),
        [](double x) { return 2.08 * x; },
        [](double) { return 2.08; },
        /*linear=*/true,
        [](double y) { return y / 2.08; }));
    map.branches.push_back(make_branch(
        Interval(0.5, 1.0),
        [](double x) { return 2.0 - 2.0 * x; },
        [](double) { return -2.0; },
        /*linear=*/true,
        [](double y) { return (2.0 - y) / 2.0; }));
    return map;
}

inline IntervalSet bahsoun_hole() {
    return IntervalSet{Interval(1.0 / 2.08, 0.5)};
}

// Boundary of the one-step survivor interval for c > 2: points beyond
// ±(2/c)^(1/alpha) leave [-1,1] in one step.
inline double lorenz_escape_point(double c, double alpha) {
    if (!(c > 2.0))
        throw NotApplicableError("lorenz_escape_point: closed for c <= 2");
    return std::pow(2.0 / c, 1.0 / alpha);
}

// Hole implicitly defined by the family: empty for c <= 2, the two
// outer stubs ±[x*, 1] for c > 2.
inline IntervalSet lorenz_hole(double c, double alpha) {
    if (c <= 2.0) return IntervalSet::empty_set();
    double xstar = lorenz_escape_point(c, alpha);
    return IntervalSet{Interval(-1.0, -xstar), Interval(xstar, 1.0)};
}

struct LorenzFixedPoint {
    double y;                // inner fixed point of c*x^alpha - 1 = x in (0,1]
    double derivative_abs;   // |T'(y)|
};

// Smallest positive solution of c*x^alpha - 1 = x, located by scanning
// for a sign change and bisecting to 1e-12. For c >= 2 the bracket
// [grid point, 1] always closes because c*1 - 1 - 1 = c - 2 >= 0.
inline LorenzFixedPoint lorenz_inner_fixed_point(double c, double alpha) {
    if (!(c > 0.0 && alpha > 0.0 && alpha < 1.0))
        throw ValidationError("lorenz_inner_fixed_point: bad parameters");
    auto f = [c, alpha](double x) { return c * std::pow(x, alpha) - 1.0 - x; };
    const int grid = 4096;
    double lo = std::numeric_limits<double>::quiet_NaN();
    double hi = std::numeric_limits<double>::quiet_NaN();
    double prev_x = 1.0 / grid;
    double prev_f = f(prev_x);
    for (int i = 2; i <= grid; ++i) {
        double x = static_cast<double>(i) / grid;
        double fx = f(x);
        if (prev_f < 0.0 && fx >= 0.0) {
            lo = prev_x;
            hi = x;
            break;
        }
        prev_x = x;
        prev_f = fx;
    }
    if (std::isnan(lo))
        throw NotApplicableError(
            "lorenz_inner_fixed_point: no sign change; no repellor in (0,1)");
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < 0.0) lo = mid; else hi = mid;
    }
    double y = 0.5 * (lo + hi);
    // f(1) == 0 exactly when c == 2: the fixed point sits on the boundary.
    if (f(1.0) == 0.0 && y > 1.0 - 1e-9) y = 1.0;
    return {y, c * alpha * std::pow(y, alpha - 1.0)};
}

}  // namespace openulam
