#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "openulam/interval_set.hpp"
#include "openulam/map_families.hpp"
#include "openulam/piecewise_map.hpp"

namespace openulam {

// Absolute slop when deciding whether a branch image covers the domain
// or stays inside it; images either cover fully or miss by a hole-sized
// amount, so this only needs to absorb root-finding error.
inline constexpr double kCoverTol = 1e-9;

// A map together with a hole. Orbits entering the hole terminate.
struct OpenSystem {
    PiecewiseMap map;
    IntervalSet hole;

    OpenSystem(PiecewiseMap m, IntervalSet h)
        : map(std::move(m)), hole(std::move(h)) {
        validate();
    }

    IntervalSet survivor_domain() const {  // X_0
        return complement(hole, map.domain);
    }

    bool closed() const { return hole.empty(); }

  private:
    void validate() const {
        for (const auto& c : hole.components())
            if (c.lo < map.domain.lo - kMergeTol ||
                c.hi > map.domain.hi + kMergeTol)
                throw ValidationError("OpenSystem: hole not contained in map domain");
        IntervalSet x0 = complement(hole, map.domain);
        if (x0.empty() || x0.measure() <= 0.0)
            throw ValidationError("OpenSystem: nothing survives the hole");
        // Branch gaps model regions the dynamics never visits; they must
        // lie inside the hole, and the surviving part must map into the
        // domain.
        std::vector<Interval> covered;
        covered.reserve(map.branches.size());
        for (const auto& b : map.branches) covered.push_back(b.domain);
        IntervalSet uncovered =
            complement(IntervalSet(std::move(covered)), map.domain);
        if (!subset_within(uncovered, hole, map.domain, kMergeTol))
            throw ValidationError(
                "OpenSystem: branch gap not covered by the hole");
        for (const auto& b : map.branches) {
            for (const auto& piece :
                 intersect(x0, b.domain).components()) {
                if (piece.length() <= kMergeTol) continue;
                double ylo = b.forward(piece.lo);
                double yhi = b.forward(piece.hi);
                if (std::min(ylo, yhi) < map.domain.lo - kCoverTol ||
                    std::max(ylo, yhi) > map.domain.hi + kCoverTol)
                    throw ValidationError(
                        "OpenSystem: surviving points map outside the domain; "
                        "enlarge the hole to cover the escaping region");
            }
        }
    }
};

// Convenience constructors for the families with implicit holes.
inline OpenSystem lorenz_system(double c, double alpha) {
    return OpenSystem(lorenz(c, alpha), lorenz_hole(c, alpha));
}

inline OpenSystem bahsoun_system() {
    return OpenSystem(bahsoun(), bahsoun_hole());
}

inline OpenSystem large_hole_tent_system(double delta) {
    return OpenSystem(large_hole_tent(delta), large_hole_tent_hole(delta));
}

// Lorenz dynamics restricted to the interval between the inner fixed
// points ±y; the hole becomes the middle stub around the discontinuity
// that maps out of [-y, y] in one step.
inline OpenSystem lorenz_survivor_system(double c, double alpha) {
    auto fp = lorenz_inner_fixed_point(c, alpha);
    const double y = fp.y;
    double w = std::pow((1.0 - y) / c, 1.0 / alpha);
    PiecewiseMap restricted = restrict_domain(lorenz(c, alpha), Interval(-y, y));
    IntervalSet hole =
        (w > kMergeTol) ? IntervalSet{Interval(-w, w)} : IntervalSet::empty_set();
    return OpenSystem(std::move(restricted), std::move(hole));
}

// Preimage of a set under the map, computed branchwise from two
// inverse calls per (branch, component) pair.
inline IntervalSet preimage(const PiecewiseMap& map, const IntervalSet& target,
                            std::size_t component_cap = 1000000) {
    std::vector<Interval> pieces;
    for (const auto& b : map.branches) {
        for (const auto& c : target.components()) {
            double ylo = std::max(c.lo, b.range.lo);
            double yhi = std::min(c.hi, b.range.hi);
            if (yhi - ylo <= 0.0) continue;
            double u = branch_inverse(b, ylo);
            double v = branch_inverse(b, yhi);
            if (u > v) std::swap(u, v);
            if (v - u <= 0.0) continue;
            pieces.emplace_back(u, v);
            if (pieces.size() > component_cap)
                throw ResourceError("preimage: component cap exceeded");
        }
    }
    return IntervalSet(std::move(pieces));
}

// X_n: points whose first n+1 iterates avoid the hole.
inline IntervalSet survivor_set(const OpenSystem& sys, std::size_t n,
                                std::size_t component_cap = 1000000) {
    IntervalSet x0 = sys.survivor_domain();
    IntervalSet xn = x0;
    for (std::size_t j = 1; j <= n; ++j) {
        xn = intersect(x0, preimage(sys.map, xn, component_cap));
        if (xn.size() > component_cap)
            throw ResourceError("survivor_set: component cap exceeded");
    }
    return xn;
}

// Same map, hole enlarged to everything that escapes within m steps.
inline OpenSystem enlarge_hole(const OpenSystem& sys, std::size_t m,
                               std::size_t component_cap = 1000000) {
    IntervalSet xm = survivor_set(sys, m, component_cap);
    return OpenSystem(sys.map, complement(xm, sys.map.domain));
}

}  // namespace openulam
