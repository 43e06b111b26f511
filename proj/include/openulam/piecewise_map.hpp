#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "openulam/errors.hpp"
#include "openulam/interval_set.hpp"

namespace openulam {

// One monotone piece of the map. `forward` must be monotone on `domain`
// with a C1 extension to its closure; `range` holds the image, computed
// from the endpoint values (it may exceed the map domain for maps whose
// branches leave the interval, e.g. Lorenz-like families).
struct Branch {
    Interval domain;
    std::function<double(double)> forward;
    std::function<double(double)> derivative;
    bool increasing = true;
    Interval range;
    bool linear = false;
    // Closed-form inverse when the family provides one; the generic
    // bisection/Newton path is used otherwise.
    std::function<double(double)> inverse;

    bool has_inverse() const { return static_cast<bool>(inverse); }
};

inline Branch make_branch(Interval domain, std::function<double(double)> f,
                          std::function<double(double)> df, bool linear = false,
                          std::function<double(double)> inv = nullptr) {
    Branch b;
    b.domain = domain;
    b.forward = std::move(f);
    b.derivative = std::move(df);
    b.linear = linear;
    b.inverse = std::move(inv);
    double ylo = b.forward(domain.lo);
    double yhi = b.forward(domain.hi);
    b.increasing = ylo <= yhi;
    b.range = b.increasing ? Interval(ylo, yhi) : Interval(yhi, ylo);
    return b;
}

struct MapMetadata {
    std::string family = "custom";
    std::map<std::string, double> params;
    bool expanding = true;
};

// Piecewise C1 interval map. Branch domains are interior-disjoint and
// sorted; their union may be a strict subset of `domain` when the
// uncovered part is meant to sit inside a hole (orbits never visit it).
struct PiecewiseMap {
    std::vector<Branch> branches;
    Interval domain;
    MapMetadata meta;

    bool all_linear() const {
        for (const auto& b : branches)
            if (!b.linear) return false;
        return true;
    }
};

// T(x). At a shared branch endpoint the left branch wins.
inline double evaluate(const PiecewiseMap& map, double x) {
    if (!map.domain.contains(x))
        throw DomainError("evaluate: x outside map domain");
    auto it = std::lower_bound(
        map.branches.begin(), map.branches.end(), x,
        [](const Branch& b, double v) { return b.domain.hi < v; });
    if (it == map.branches.end() || !it->domain.contains(x))
        throw DomainError("evaluate: x falls in a gap between branches");
    return it->forward(x);
}

namespace detail {

inline double relative_tol(double tol, double y) {
    return tol * std::max(1.0, std::abs(y));
}

}  // namespace detail

// Preimage of y under one monotone branch. Bisection brackets to width
// 1e-13, then a few Newton steps polish toward machine precision.
inline double branch_inverse(const Branch& branch, double y,
                             double tol = 1e-12) {
    const double slack = detail::relative_tol(1e-9, y);
    if (y < branch.range.lo - slack || y > branch.range.hi + slack)
        throw RangeError("branch_inverse: y outside branch range");
    y = branch.range.clamp(y);

    if (branch.has_inverse())
        return branch.domain.clamp(branch.inverse(y));

    double lo = branch.domain.lo;
    double hi = branch.domain.hi;
    const double sign = branch.increasing ? 1.0 : -1.0;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (sign * (branch.forward(mid) - y) < 0.0) lo = mid; else hi = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int step = 0; step < 5; ++step) {
        double fx = branch.forward(x) - y;
        if (std::abs(fx) <= detail::relative_tol(tol, y)) break;
        double dfx = branch.derivative(x);
        if (!std::isfinite(dfx) || dfx == 0.0) break;
        double next = branch.domain.clamp(x - fx / dfx);
        if (next == x) break;
        x = next;
    }
    if (std::abs(branch.forward(x) - y) > detail::relative_tol(tol, y))
        throw NumericalError("branch_inverse: root finding stalled");
    return x;
}

// Inf/sup of |derivative| over a subinterval of the branch, by dense
// sampling plus endpoints. Families in scope have monotone derivative
// per branch, so sampling is reliable; singular sample points
// (rejected or non-finite) are skipped.
struct DerivativeBounds {
    double inf_abs;
    double sup_abs;  // may be +inf at a derivative singularity
};

inline DerivativeBounds derivative_bounds(const Branch& branch,
                                          const Interval& sub,
                                          std::size_t samples = 10000) {
    DerivativeBounds out{std::numeric_limits<double>::infinity(), 0.0};
    const double len = sub.length();
    for (std::size_t i = 0; i <= samples; ++i) {
        double x = sub.lo + len * static_cast<double>(i) / samples;
        double d;
        try {
            d = std::abs(branch.derivative(x));
        } catch (const DomainError&) {
            continue;
        }
        if (std::isnan(d)) continue;
        out.inf_abs = std::min(out.inf_abs, d);
        out.sup_abs = std::max(out.sup_abs, d);
    }
    if (!std::isfinite(out.inf_abs))
        throw NumericalError("derivative_bounds: no valid samples");
    return out;
}

inline DerivativeBounds derivative_bounds(const Branch& branch,
                                          std::size_t samples = 10000) {
    return derivative_bounds(branch, branch.domain, samples);
}

// 1 / min over branches of inf |T'|; < 1 for uniformly expanding maps.
inline double inverse_derivative_sup(const PiecewiseMap& map) {
    double inf_abs = std::numeric_limits<double>::infinity();
    for (const auto& b : map.branches)
        inf_abs = std::min(inf_abs, derivative_bounds(b).inf_abs);
    return 1.0 / inf_abs;
}

// Restriction of one branch to a subinterval of its domain.
inline Branch restrict_branch(const Branch& b, const Interval& sub) {
    Branch out = b;
    out.domain = sub;
    double ylo = b.forward(sub.lo);
    double yhi = b.forward(sub.hi);
    out.range = b.increasing ? Interval(ylo, yhi) : Interval(yhi, ylo);
    return out;
}

// Restriction of the whole map to a subinterval (branches clipped,
// empty clips dropped). Used for survivor-interval systems.
inline PiecewiseMap restrict_domain(const PiecewiseMap& map,
                                    const Interval& sub) {
    PiecewiseMap out;
    out.domain = sub;
    out.meta = map.meta;
    for (const auto& b : map.branches) {
        double lo = std::max(b.domain.lo, sub.lo);
        double hi = std::min(b.domain.hi, sub.hi);
        if (hi - lo <= kMergeTol) continue;
        out.branches.push_back(restrict_branch(b, Interval(lo, hi)));
    }
    if (out.branches.empty())
        throw ValidationError("restrict_domain: no branch overlaps the subinterval");
    return out;
}

namespace detail {

// Branches of outer ∘ inner. Each inner branch is cut at the preimages
// of the outer branch endpoints; derivative composes by the chain rule.
inline std::vector<Branch> compose_branches(const PiecewiseMap& outer,
                                            const PiecewiseMap& inner,
                                            std::size_t cap) {
    std::vector<Branch> out;
    for (const auto& bi : inner.branches) {
        for (const auto& bo : outer.branches) {
            double ylo = std::max(bi.range.lo, bo.domain.lo);
            double yhi = std::min(bi.range.hi, bo.domain.hi);
            if (yhi - ylo <= kMergeTol) continue;
            double u = branch_inverse(bi, ylo);
            double v = branch_inverse(bi, yhi);
            if (u > v) std::swap(u, v);
            if (v - u <= kMergeTol) continue;

            Branch piece;
            piece.domain = Interval(u, v);
            auto f_in = bi.forward;
            auto f_out = bo.forward;
            auto d_in = bi.derivative;
            auto d_out = bo.derivative;
            auto dom_out = bo.domain;
            piece.forward = [f_in, f_out, dom_out](double x) {
                return f_out(dom_out.clamp(f_in(x)));
            };
            piece.derivative = [f_in, d_in, d_out, dom_out](double x) {
                return d_out(dom_out.clamp(f_in(x))) * d_in(x);
            };
            piece.increasing = (bi.increasing == bo.increasing);
            piece.linear = bi.linear && bo.linear;
            if (bi.has_inverse() && bo.has_inverse()) {
                auto inv_in = bi.inverse;
                auto inv_out = bo.inverse;
                piece.inverse = [inv_in, inv_out](double y) {
                    return inv_in(inv_out(y));
                };
            }
            double elo = piece.forward(u);
            double ehi = piece.forward(v);
            piece.range = piece.increasing ? Interval(elo, ehi)
                                           : Interval(ehi, elo);
            out.push_back(std::move(piece));
            if (out.size() > cap)
                throw ResourceError("power: branch count cap exceeded");
        }
    }
    std::sort(out.begin(), out.end(), [](const Branch& a, const Branch& b) {
        return a.domain.lo < b.domain.lo;
    });
    return out;
}

}  // namespace detail

// Explicit piecewise representation of T^n.
inline PiecewiseMap power(const PiecewiseMap& map, std::size_t n,
                          std::size_t branch_cap = 100000) {
    if (n < 1) throw ValidationError("power: n must be >= 1");
    PiecewiseMap result = map;
    for (std::size_t step = 1; step < n; ++step) {
        PiecewiseMap next;
        next.domain = map.domain;
        next.branches = detail::compose_branches(map, result, branch_cap);
        next.meta.family = "power";
        next.meta.params = {{"n", static_cast<double>(step + 1)}};
        next.meta.expanding = map.meta.expanding;
        result = std::move(next);
    }
    return result;
}

}  // namespace openulam
