#pragma once

#include <algorithm>
#include <cmath>
#include <vector>

#include "openulam/errors.hpp"

namespace openulam {

// Gaps below this width are numerical noise from branch-inverse root
// finding and are merged away during canonicalization.
inline constexpr double kMergeTol = 1e-14;

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    Interval() = default;
    Interval(double lo_, double hi_) : lo(lo_), hi(hi_) {
        if (!(lo <= hi)) throw ValidationError("Interval: lo > hi");
    }

    double length() const { return hi - lo; }
    bool contains(double x) const { return lo <= x && x <= hi; }
    double midpoint() const { return 0.5 * (lo + hi); }
    double clamp(double x) const { return std::min(hi, std::max(lo, x)); }
};

inline bool overlaps(const Interval& a, const Interval& b) {
    return a.lo <= b.hi && b.lo <= a.hi;
}

// Finite union of closed intervals, kept sorted, disjoint and free of
// zero-length components. Values are immutable after construction.
class IntervalSet {
  public:
    IntervalSet() = default;

    explicit IntervalSet(std::vector<Interval> intervals) {
        components_ = canonicalize(std::move(intervals));
    }

    IntervalSet(std::initializer_list<Interval> intervals)
        : IntervalSet(std::vector<Interval>(intervals)) {}

    static IntervalSet empty_set() { return IntervalSet(); }

    const std::vector<Interval>& components() const { return components_; }
    bool empty() const { return components_.empty(); }
    std::size_t size() const { return components_.size(); }

    double measure() const {
        double total = 0.0;
        for (const auto& c : components_) total += c.length();
        return total;
    }

    bool contains(double x) const {
        auto it = std::upper_bound(
            components_.begin(), components_.end(), x,
            [](double v, const Interval& c) { return v < c.lo; });
        if (it == components_.begin()) return false;
        return std::prev(it)->hi >= x;
    }

    // Smallest interval containing the set; invalid to call on an empty set.
    Interval hull() const {
        if (empty()) throw DomainError("IntervalSet::hull: empty set");
        return Interval(components_.front().lo, components_.back().hi);
    }

  private:
    std::vector<Interval> components_;

    static std::vector<Interval> canonicalize(std::vector<Interval> v) {
        std::erase_if(v, [](const Interval& c) { return c.length() <= 0.0; });
        std::sort(v.begin(), v.end(), [](const Interval& a, const Interval& b) {
            return a.lo < b.lo || (a.lo == b.lo && a.hi < b.hi);
        });
        std::vector<Interval> out;
        out.reserve(v.size());
        for (const auto& c : v) {
            if (!out.empty() && c.lo <= out.back().hi + kMergeTol) {
                out.back().hi = std::max(out.back().hi, c.hi);
            } else {
                out.push_back(c);
            }
        }
        return out;
    }
};

inline IntervalSet intersect(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> out;
    std::size_t i = 0, j = 0;
    const auto& ac = a.components();
    const auto& bc = b.components();
    while (i < ac.size() && j < bc.size()) {
        double lo = std::max(ac[i].lo, bc[j].lo);
        double hi = std::min(ac[i].hi, bc[j].hi);
        if (lo < hi) out.emplace_back(lo, hi);
        if (ac[i].hi < bc[j].hi) ++i; else ++j;
    }
    return IntervalSet(std::move(out));
}

inline IntervalSet intersect(const IntervalSet& a, const Interval& b) {
    return intersect(a, IntervalSet{b});
}

inline IntervalSet unite(const IntervalSet& a, const IntervalSet& b) {
    std::vector<Interval> v;
    v.reserve(a.size() + b.size());
    v.insert(v.end(), a.components().begin(), a.components().end());
    v.insert(v.end(), b.components().begin(), b.components().end());
    return IntervalSet(std::move(v));
}

// Closure of `within` minus `a`; shared endpoints belong to both sides,
// which is irrelevant for every measure computed downstream.
inline IntervalSet complement(const IntervalSet& a, const Interval& within) {
    std::vector<Interval> out;
    double cursor = within.lo;
    for (const auto& c : a.components()) {
        if (c.hi < within.lo || c.lo > within.hi) continue;
        double lo = std::max(c.lo, within.lo);
        if (lo > cursor) out.emplace_back(cursor, lo);
        cursor = std::max(cursor, std::min(c.hi, within.hi));
    }
    if (cursor < within.hi) out.emplace_back(cursor, within.hi);
    return IntervalSet(std::move(out));
}

inline double measure(const IntervalSet& a) { return a.measure(); }

// Length of x ∩ a without materializing the intersection.
inline double measure_within(const Interval& x, const IntervalSet& a) {
    double total = 0.0;
    for (const auto& c : a.components()) {
        if (c.lo > x.hi) break;
        double lo = std::max(c.lo, x.lo);
        double hi = std::min(c.hi, x.hi);
        if (lo < hi) total += hi - lo;
    }
    return total;
}

// a ⊆ b up to endpoint wiggle: the part of a outside b has measure ≤ tol.
inline bool subset_within(const IntervalSet& a, const IntervalSet& b,
                          const Interval& within, double tol) {
    return measure(intersect(a, complement(b, within))) <= tol;
}

}  // namespace openulam
