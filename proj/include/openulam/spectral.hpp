#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <vector>

#include "openulam/partition.hpp"
#include "openulam/ulam_matrix.hpp"

namespace openulam {

struct SpectralOptions {
    double tol = 1e-12;
    std::size_t max_iter = 1000000;
    std::uint64_t seed = 0;  // 0: all-ones start; else reproducible jitter
};

// Leading eigendata of a non-negative matrix. `left` is scaled so the
// induced step density has unit L1 norm, `right` so the induced
// measure has total mass 1 (falling back to unit l1 norm if the
// natural scaling degenerates).
struct SpectralSolution {
    double rho = 0.0;
    double rho_left = 0.0;
    double rho_right = 0.0;
    std::vector<double> left;
    std::vector<double> right;
    double gap = 0.0;  // |second eigenvalue| / rho, from residual decay
    std::size_t iterations = 0;
    double left_residual = 0.0;
    double right_residual = 0.0;
    bool multiplicity_suspected = false;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline double uniform01(std::uint64_t& state) {
    return static_cast<double>(splitmix64(state) >> 11) * 0x1.0p-53;
}

struct PowerSideResult {
    double rho = 0.0;
    std::vector<double> vec;
    double residual = 0.0;
    std::size_t iterations = 0;
    std::vector<double> ratio_history;
    bool converged = false;
};

template <typename Apply>
PowerSideResult power_iterate(std::size_t dim, Apply&& apply,
                              const SpectralOptions& opts) {
    PowerSideResult r;
    std::vector<double> x(dim, 1.0 / static_cast<double>(dim));
    if (opts.seed != 0) {
        std::uint64_t state = opts.seed;
        double total = 0.0;
        for (auto& v : x) {
            v = 0.5 + uniform01(state);
            total += v;
        }
        for (auto& v : x) v /= total;
    }
    std::vector<double> y(dim, 0.0);
    double prev_res = -1.0;
    for (std::size_t it = 1; it <= opts.max_iter; ++it) {
        apply(x, y);
        double rho = 0.0;
        for (double v : y) rho += v;
        double res = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            res += std::abs(y[i] - rho * x[i]);
        r.rho = rho;
        r.residual = res;
        r.iterations = it;
        if (prev_res > 0.0 && res > 0.0) {
            r.ratio_history.push_back(res / prev_res);
            if (r.ratio_history.size() > 8)
                r.ratio_history.erase(r.ratio_history.begin());
        }
        prev_res = res;
        if (rho <= 0.0) {  // everything escaped; x is in the kernel
            r.vec = y;
            r.rho = 0.0;
            r.converged = true;
            return r;
        }
        for (std::size_t i = 0; i < dim; ++i) x[i] = y[i] / rho;
        if (res <= opts.tol) {
            r.vec = std::move(x);
            r.converged = true;
            return r;
        }
    }
    r.vec = std::move(x);
    return r;
}

inline double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

}  // namespace detail

// Power iteration from a strictly positive start vector, run
// independently for the row and column actions. The two eigenvalue
// estimates must agree within 10*tol; disagreement is flagged (small
// matrices may genuinely carry multiple leading classes) but does not
// fail the solve.
inline SpectralSolution leading_triple(const TransitionMatrix& P,
                                       const Partition& part,
                                       const SpectralOptions& opts = {}) {
    if (P.dim != part.size())
        throw ValidationError("leading_triple: matrix/partition size mismatch");
    auto left = detail::power_iterate(
        P.dim,
        [&P](const std::vector<double>& x, std::vector<double>& y) {
            P.apply_left(x, y);
        },
        opts);
    auto right = detail::power_iterate(
        P.dim,
        [&P](const std::vector<double>& x, std::vector<double>& y) {
            P.apply_right(x, y);
        },
        opts);
    if (!left.converged || !right.converged)
        throw ConvergenceError("leading_triple: max_iter exceeded",
                               left.residual, right.residual);

    SpectralSolution sol;
    sol.rho_left = left.rho;
    sol.rho_right = right.rho;
    sol.rho = 0.5 * (left.rho + right.rho);
    sol.left = std::move(left.vec);
    sol.right = std::move(right.vec);
    sol.iterations = std::max(left.iterations, right.iterations);
    sol.left_residual = left.residual;
    sol.right_residual = right.residual;
    sol.multiplicity_suspected =
        std::abs(left.rho - right.rho) > 10.0 * opts.tol;
    sol.gap = detail::median(left.iterations >= right.iterations
                                 ? left.ratio_history
                                 : right.ratio_history);
    sol.gap = std::min(1.0, std::max(0.0, sol.gap));

    for (auto& v : sol.left) v = std::max(v, 0.0);
    for (auto& v : sol.right) v = std::max(v, 0.0);
    double left_mass = 0.0, right_mass = 0.0;
    for (std::size_t j = 0; j < P.dim; ++j) {
        left_mass += sol.left[j] * part.cell_measure(j);
        right_mass += sol.right[j] * part.cell_measure(j);
    }
    if (left_mass > 0.0)
        for (auto& v : sol.left) v /= left_mass;
    if (right_mass > 0.0)
        for (auto& v : sol.right) v /= right_mass;
    return sol;
}

// Step function h = sum_j values_j * chi_j with unit L1 norm.
struct StepDensity {
    Partition partition;
    std::vector<double> values;

    double l1_norm() const {
        double s = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j)
            s += std::abs(values[j]) * partition.cell_measure(j);
        return s;
    }
};

// Measure with constant density weight_j on cell j, total mass 1.
// cdf(x) is piecewise linear and non-decreasing.
struct CellMeasure {
    Partition partition;
    std::vector<double> weights;
    std::vector<double> cumulative;  // mass of cells 0..j-1

    double cdf(double x) const {
        const auto& b = partition.boundaries();
        if (x <= b.front()) return 0.0;
        if (x >= b.back()) return cumulative.back();
        std::size_t j = partition.locate(x);
        return cumulative[j] + weights[j] * (x - b[j]);
    }

    double mass(const Interval& e) const {
        double total = 0.0;
        for (std::size_t j = 0; j < weights.size(); ++j) {
            if (weights[j] == 0.0) continue;
            Interval cell = partition.cell(j);
            double lo = std::max(cell.lo, e.lo);
            double hi = std::min(cell.hi, e.hi);
            if (lo < hi) total += weights[j] * (hi - lo);
        }
        return total;
    }
};

namespace detail {

inline CellMeasure make_cell_measure(const Partition& part,
                                     std::vector<double> weights) {
    CellMeasure m{part, std::move(weights), {}};
    m.cumulative.assign(m.weights.size() + 1, 0.0);
    for (std::size_t j = 0; j < m.weights.size(); ++j)
        m.cumulative[j + 1] =
            m.cumulative[j] + m.weights[j] * part.cell_measure(j);
    return m;
}

}  // namespace detail

inline StepDensity density_from_left(const SpectralSolution& sol,
                                     const Partition& part) {
    StepDensity h{part, sol.left};
    double norm = h.l1_norm();
    if (norm <= 0.0)
        throw DegenerateSolutionError("density_from_left: left vector is zero");
    for (auto& v : h.values) v /= norm;
    return h;
}

inline CellMeasure measure_from_right(const SpectralSolution& sol,
                                      const Partition& part) {
    double total = 0.0;
    for (std::size_t j = 0; j < sol.right.size(); ++j)
        total += sol.right[j] * part.cell_measure(j);
    if (total <= 0.0)
        throw DegenerateSolutionError("measure_from_right: right vector is zero");
    std::vector<double> w = sol.right;
    for (auto& v : w) v /= total;
    return detail::make_cell_measure(part, std::move(w));
}

// Discrete survivor-set invariant measure: cell weights proportional
// to left_j * right_j, normalized to total mass 1.
inline CellMeasure survivor_measure(const SpectralSolution& sol,
                                    const Partition& part) {
    std::vector<double> w(sol.left.size());
    double total = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) {
        w[j] = sol.left[j] * sol.right[j];
        total += w[j] * part.cell_measure(j);
    }
    if (total <= 0.0)
        throw DegenerateSolutionError(
            "survivor_measure: eigenvector product vanishes everywhere");
    for (auto& v : w) v /= total;
    return detail::make_cell_measure(part, std::move(w));
}

// Max relative defect of mu(L phi) = rho * mu(phi) over random
// non-negative step functions phi, evaluated through the matrix action.
inline double verify_quasi_conformal(const TransitionMatrix& P,
                                     const Partition& part,
                                     const SpectralSolution& sol,
                                     std::size_t trials, std::uint64_t seed) {
    std::uint64_t state = seed ^ 0xA5A5A5A55A5A5A5AULL;
    std::vector<double> phi(P.dim), lphi;
    double worst = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        for (auto& v : phi) v = detail::uniform01(state);
        P.apply_left(phi, lphi);
        double mu_phi = 0.0, mu_lphi = 0.0;
        for (std::size_t j = 0; j < P.dim; ++j) {
            double mj = part.cell_measure(j);
            mu_phi += phi[j] * sol.right[j] * mj;
            mu_lphi += lphi[j] * sol.right[j] * mj;
        }
        double defect = std::abs(mu_lphi - sol.rho * mu_phi) /
                        std::max(mu_phi, 1e-300);
        worst = std::max(worst, defect);
    }
    return worst;
}

// L1 distance between step densities on possibly different partitions
// of the same interval.
inline double l1_distance(const StepDensity& a, const StepDensity& b) {
    const auto& ba = a.partition.boundaries();
    const auto& bb = b.partition.boundaries();
    double total = 0.0;
    std::size_t ia = 0, ib = 0;
    double x = std::min(ba.front(), bb.front());
    const double end = std::max(ba.back(), bb.back());
    while (x < end) {
        while (ia + 1 < ba.size() && ba[ia + 1] <= x) ++ia;
        while (ib + 1 < bb.size() && bb[ib + 1] <= x) ++ib;
        double next = end;
        if (ia + 1 < ba.size()) next = std::min(next, ba[ia + 1]);
        if (ib + 1 < bb.size()) next = std::min(next, bb[ib + 1]);
        if (next <= x) break;
        double va = (ia < a.values.size() && ba[ia] <= x) ? a.values[ia] : 0.0;
        double vb = (ib < b.values.size() && bb[ib] <= x) ? b.values[ib] : 0.0;
        total += std::abs(va - vb) * (next - x);
        x = next;
    }
    return total;
}

// sup over x of |cdf_a(x) - cdf_b(x)|; both are piecewise linear, so
// the sup is attained on the union of their breakpoints.
inline double sup_cdf_distance(const CellMeasure& a, const CellMeasure& b) {
    double worst = 0.0;
    for (double x : a.partition.boundaries())
        worst = std::max(worst, std::abs(a.cdf(x) - b.cdf(x)));
    for (double x : b.partition.boundaries())
        worst = std::max(worst, std::abs(a.cdf(x) - b.cdf(x)));
    return worst;
}

}  // namespace openulam
