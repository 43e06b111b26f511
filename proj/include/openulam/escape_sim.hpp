#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "openulam/open_system.hpp"
#include "openulam/spectral.hpp"

namespace openulam {

// Survivor counts of a Monte Carlo orbit ensemble: counts[j] points
// lasted at least j steps without entering the hole.
struct SurvivalCurve {
    std::vector<std::uint64_t> counts;
    std::uint64_t initial_points = 0;
    std::uint64_t seed = 0;
};

namespace detail {

// One uniform draw per orbit, from a per-point stream derived from
// (seed, index) so results do not depend on scheduling.
inline double point_uniform(std::uint64_t seed, std::uint64_t index) {
    std::uint64_t state = seed ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    (void)splitmix64(state);
    return uniform01(state);
}

inline double sample_from_set(const IntervalSet& set, double u) {
    double target = u * set.measure();
    for (const auto& c : set.components()) {
        if (target <= c.length()) return c.lo + target;
        target -= c.length();
    }
    return set.components().back().hi;
}

}  // namespace detail

// N i.i.d. uniform starting points on X_0, each iterated until it
// lands in the hole (closed endpoints count as escaped) or n_max steps
// elapse. Identical seeds give identical curves.
inline SurvivalCurve simulate(const OpenSystem& sys, std::uint64_t n_points,
                              std::size_t n_max, std::uint64_t seed) {
    if (n_points == 0) throw ValidationError("simulate: need N >= 1");
    const IntervalSet x0 = sys.survivor_domain();
    const Interval domain = sys.map.domain;
    SurvivalCurve curve;
    curve.initial_points = n_points;
    curve.seed = seed;
    curve.counts.assign(n_max + 1, 0);
    for (std::uint64_t p = 0; p < n_points; ++p) {
        double x = detail::sample_from_set(x0, detail::point_uniform(seed, p));
        if (sys.hole.contains(x)) continue;  // sampled a hole endpoint
        curve.counts[0] += 1;
        for (std::size_t j = 1; j <= n_max; ++j) {
            x = domain.clamp(evaluate(sys.map, x));
            if (sys.hole.contains(x)) break;
            curve.counts[j] += 1;
        }
    }
    return curve;
}

struct EscapeRateFit {
    double rho_hat = 0.0;
    double ci95 = 0.0;  // half-width of the 95% interval on rho_hat
    std::size_t window_lo = 0;
    std::size_t window_hi = 0;
};

// Least-squares slope of log counts over [j_lo, j_hi]; rho_hat is the
// exponentiated slope, its confidence half-width comes from the OLS
// residual variance via the delta method.
inline EscapeRateFit escape_rate_fit(const SurvivalCurve& curve,
                                     std::size_t j_lo, std::size_t j_hi) {
    if (j_hi >= curve.counts.size() || j_lo > j_hi)
        throw StatisticsError("escape_rate_fit: bad window");
    if (curve.counts[j_hi] < 100)
        throw StatisticsError("escape_rate_fit: fewer than 100 survivors at window end");
    const std::size_t n = j_hi - j_lo + 1;
    if (n < 3) throw StatisticsError("escape_rate_fit: window too short");
    double sx = 0.0, sy = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        sx += static_cast<double>(j);
        sy += std::log(static_cast<double>(curve.counts[j]));
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        double dx = static_cast<double>(j) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(static_cast<double>(curve.counts[j])) - my);
    }
    const double slope = sxy / sxx;
    const double intercept = my - slope * mx;
    double ss_res = 0.0;
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
        double r = std::log(static_cast<double>(curve.counts[j])) -
                   (intercept + slope * static_cast<double>(j));
        ss_res += r * r;
    }
    const double se_slope = std::sqrt(ss_res / (n - 2) / sxx);
    EscapeRateFit fit;
    fit.rho_hat = std::exp(slope);
    fit.ci95 = 1.96 * se_slope * fit.rho_hat;
    fit.window_lo = j_lo;
    fit.window_hi = j_hi;
    return fit;
}

// Default window: start where half the ensemble is gone (skipping the
// pre-equilibration transient), stop while at least 100 points remain.
inline std::pair<std::size_t, std::size_t> default_fit_window(
    const SurvivalCurve& curve) {
    std::size_t j_lo = 0;
    const double half = 0.5 * static_cast<double>(curve.initial_points);
    while (j_lo + 1 < curve.counts.size() &&
           static_cast<double>(curve.counts[j_lo]) > half)
        ++j_lo;
    if (static_cast<double>(curve.counts[j_lo]) > half) j_lo = 0;
    std::size_t j_hi = curve.counts.size() - 1;
    while (j_hi > 0 && curve.counts[j_hi] < 100) --j_hi;
    return {std::min(j_lo, j_hi), j_hi};
}

inline EscapeRateFit escape_rate_fit(const SurvivalCurve& curve) {
    auto [j_lo, j_hi] = default_fit_window(curve);
    return escape_rate_fit(curve, j_lo, j_hi);
}

// Histogram of survivor positions at time n, as a unit-L1 step density.
inline StepDensity empirical_accim(const OpenSystem& sys,
                                   std::uint64_t n_points, std::size_t n,
                                   const Partition& part, std::uint64_t seed) {
    const IntervalSet x0 = sys.survivor_domain();
    const Interval domain = sys.map.domain;
    std::vector<std::uint64_t> bins(part.size(), 0);
    std::uint64_t survivors = 0;
    for (std::uint64_t p = 0; p < n_points; ++p) {
        double x = detail::sample_from_set(x0, detail::point_uniform(seed, p));
        bool alive = !sys.hole.contains(x);
        for (std::size_t j = 1; alive && j <= n; ++j) {
            x = domain.clamp(evaluate(sys.map, x));
            alive = !sys.hole.contains(x);
        }
        if (!alive) continue;
        bins[part.locate(x)] += 1;
        ++survivors;
    }
    if (survivors == 0)
        throw StatisticsError("empirical_accim: no survivors at time n");
    StepDensity h{part, std::vector<double>(part.size(), 0.0)};
    for (std::size_t j = 0; j < bins.size(); ++j)
        h.values[j] = static_cast<double>(bins[j]) /
                      (static_cast<double>(survivors) * part.cell_measure(j));
    return h;
}

}  // namespace openulam
