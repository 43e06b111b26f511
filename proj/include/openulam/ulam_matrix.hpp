#pragma once

#include <algorithm>
#include <cstdint>
#include <ostream>
#include <tuple>
#include <vector>

#include "openulam/open_system.hpp"
#include "openulam/partition.hpp"

namespace openulam {

// Entries smaller than this are accumulation noise and are dropped.
inline constexpr double kEntryDropTol = 1e-16;
// Cell boundaries and hole/branch/preimage endpoints closer than this
// are the same point; snapping them makes Markov configurations exact.
inline constexpr double kBoundarySnapTol = 1e-12;

// Sparse non-negative row-substochastic matrix in CSR form.
// entry(i,j) = m(I_i ∩ X_0 ∩ T^{-1} I_j) / m(I_j).
struct TransitionMatrix {
    enum class RowKind { open, closed };

    std::size_t dim = 0;
    RowKind row_kind = RowKind::open;
    std::vector<std::size_t> row_ptr;  // dim + 1
    std::vector<std::size_t> col;
    std::vector<double> val;

    std::size_t nnz() const { return val.size(); }

    // y = P x (column action).
    void apply_right(const std::vector<double>& x,
                     std::vector<double>& y) const {
        y.assign(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            double acc = 0.0;
            for (std::size_t t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
                acc += val[t] * x[col[t]];
            y[i] = acc;
        }
    }

    // y = x^T P (row action); sequential accumulation in row-major
    // order, bitwise reproducible.
    void apply_left(const std::vector<double>& x,
                    std::vector<double>& y) const {
        y.assign(dim, 0.0);
        for (std::size_t i = 0; i < dim; ++i) {
            double xi = x[i];
            if (xi == 0.0) continue;
            for (std::size_t t = row_ptr[i]; t < row_ptr[i + 1]; ++t)
                y[col[t]] += xi * val[t];
        }
    }
};

inline std::vector<double> row_sums(const TransitionMatrix& P) {
    std::vector<double> sums(P.dim, 0.0);
    for (std::size_t i = 0; i < P.dim; ++i)
        for (std::size_t t = P.row_ptr[i]; t < P.row_ptr[i + 1]; ++t)
            sums[i] += P.val[t];
    return sums;
}

namespace detail {

inline double snap_to_boundary(const Partition& part, double x) {
    const auto& b = part.boundaries();
    auto it = std::lower_bound(b.begin(), b.end(), x);
    if (it != b.end() && *it - x <= kBoundarySnapTol) return *it;
    if (it != b.begin() && x - *std::prev(it) <= kBoundarySnapTol)
        return *std::prev(it);
    return x;
}

inline TransitionMatrix assemble(const PiecewiseMap& map,
                                 const IntervalSet& x0,
                                 const Partition& part,
                                 TransitionMatrix::RowKind kind) {
    if (!part.covers(map.domain))
        throw ValidationError("ulam: partition does not cover the map domain");
    const std::size_t k = part.size();
    const auto& bnd = part.boundaries();

    std::vector<Interval> survivors;
    survivors.reserve(x0.size());
    for (const auto& c : x0.components())
        survivors.emplace_back(snap_to_boundary(part, c.lo),
                               snap_to_boundary(part, c.hi));
    IntervalSet snapped_x0(std::move(survivors));
    const auto& x0c = snapped_x0.components();

    std::vector<std::tuple<std::size_t, std::size_t, double>> triplets;
    std::vector<double> targets, preimages;
    for (const auto& branch : map.branches) {
        double rlo = std::max(branch.range.lo, bnd.front());
        double rhi = std::min(branch.range.hi, bnd.back());
        if (rhi - rlo <= 0.0) continue;
        std::size_t j_first = part.locate(rlo);
        std::size_t j_last = part.locate(rhi);

        // Target boundary values covered by the branch image, and their
        // preimages under this branch. Consecutive cells share these.
        targets.clear();
        targets.push_back(rlo);
        for (std::size_t j = j_first + 1; j <= j_last; ++j)
            targets.push_back(bnd[j]);
        targets.push_back(rhi);
        preimages.resize(targets.size());
        for (std::size_t t = 0; t < targets.size(); ++t)
            preimages[t] =
                snap_to_boundary(part, branch_inverse(branch, targets[t]));

        for (std::size_t t = 0; t + 1 < targets.size(); ++t) {
            if (targets[t + 1] - targets[t] <= 0.0) continue;
            std::size_t j = part.locate(0.5 * (targets[t] + targets[t + 1]));
            double u = preimages[t];
            double v = preimages[t + 1];
            if (u > v) std::swap(u, v);
            if (v - u <= 0.0) continue;

            const double inv_mj = 1.0 / part.cell_measure(j);
            auto first = std::lower_bound(
                x0c.begin(), x0c.end(), u,
                [](const Interval& c, double value) { return c.hi < value; });
            for (auto it = first; it != x0c.end() && it->lo < v; ++it) {
                double plo = std::max(it->lo, u);
                double phi = std::min(it->hi, v);
                if (phi - plo <= 0.0) continue;
                std::size_t i = part.locate(plo);
                while (i < k && bnd[i] < phi) {
                    double mass =
                        std::min(phi, bnd[i + 1]) - std::max(plo, bnd[i]);
                    if (mass > 0.0)
                        triplets.emplace_back(i, j, mass * inv_mj);
                    ++i;
                }
            }
        }
    }

    std::sort(triplets.begin(), triplets.end());
    TransitionMatrix P;
    P.dim = k;
    P.row_kind = kind;
    P.row_ptr.assign(k + 1, 0);
    std::size_t t = 0;
    for (std::size_t i = 0; i < k; ++i) {
        P.row_ptr[i] = P.col.size();
        while (t < triplets.size() && std::get<0>(triplets[t]) == i) {
            std::size_t j = std::get<1>(triplets[t]);
            double v = 0.0;
            while (t < triplets.size() && std::get<0>(triplets[t]) == i &&
                   std::get<1>(triplets[t]) == j) {
                v += std::get<2>(triplets[t]);
                ++t;
            }
            if (v >= kEntryDropTol) {
                P.col.push_back(j);
                P.val.push_back(v);
            }
        }
    }
    P.row_ptr[k] = P.col.size();
    return P;
}

}  // namespace detail

inline TransitionMatrix build_open(const OpenSystem& sys,
                                   const Partition& part) {
    return detail::assemble(sys.map, sys.survivor_domain(), part,
                            TransitionMatrix::RowKind::open);
}

inline TransitionMatrix build_closed(const PiecewiseMap& map,
                                     const Partition& part) {
    return detail::assemble(map, IntervalSet{map.domain}, part,
                            TransitionMatrix::RowKind::closed);
}

}  // namespace openulam
