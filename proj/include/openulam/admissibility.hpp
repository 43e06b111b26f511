#pragma once

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "openulam/open_system.hpp"

namespace openulam {

enum class BranchClass { full, partial, in_hole };

inline const char* to_string(BranchClass c) {
    switch (c) {
        case BranchClass::full: return "full";
        case BranchClass::partial: return "partial";
        case BranchClass::in_hole: return "in_hole";
    }
    return "?";
}

struct ClassifiedPiece {
    std::size_t branch_index;
    Branch piece;  // branch restricted to this piece
    BranchClass cls;
};

struct BranchClassification {
    std::vector<ClassifiedPiece> pieces;  // sorted by domain
    std::size_t full_count = 0;
    std::size_t partial_count = 0;
    std::size_t hole_count = 0;
    // Longest run of partial pieces; in-hole pieces and branch gaps do
    // not interrupt a run, full pieces do.
    std::size_t max_contiguous_partial = 0;
};

// Splits every branch at the hole endpoints and classifies the pieces:
// in-hole, full (image covers the whole domain), or partial. Working
// on the hole-refined partition is what makes powers of maps with
// enlarged holes come out full-branched when they are.
inline BranchClassification classify_branches(const OpenSystem& sys) {
    const Interval domain = sys.map.domain;
    const IntervalSet x0 = sys.survivor_domain();
    BranchClassification out;
    for (std::size_t bi = 0; bi < sys.map.branches.size(); ++bi) {
        const Branch& b = sys.map.branches[bi];
        auto push = [&](const Interval& piece, BranchClass cls) {
            if (piece.length() <= kMergeTol) return;
            out.pieces.push_back({bi, restrict_branch(b, piece), cls});
        };
        for (const auto& piece : intersect(sys.hole, b.domain).components())
            push(piece, BranchClass::in_hole);
        for (const auto& piece : intersect(x0, b.domain).components()) {
            double ylo = b.forward(piece.lo);
            double yhi = b.forward(piece.hi);
            bool full = std::min(ylo, yhi) <= domain.lo + kCoverTol &&
                        std::max(ylo, yhi) >= domain.hi - kCoverTol;
            push(piece, full ? BranchClass::full : BranchClass::partial);
        }
    }
    std::sort(out.pieces.begin(), out.pieces.end(),
              [](const ClassifiedPiece& a, const ClassifiedPiece& b) {
                  return a.piece.domain.lo < b.piece.domain.lo;
              });
    std::size_t run = 0;
    for (const auto& p : out.pieces) {
        switch (p.cls) {
            case BranchClass::full:
                ++out.full_count;
                run = 0;
                break;
            case BranchClass::partial:
                ++out.partial_count;
                ++run;
                out.max_contiguous_partial =
                    std::max(out.max_contiguous_partial, run);
                break;
            case BranchClass::in_hole:
                ++out.hole_count;
                break;
        }
    }
    return out;
}

namespace detail {

// Sum over full pieces of 1/|T'| at the preimage of x. Preimages where
// the derivative is singular contribute nothing.
inline double full_branch_transfer_sum(
    const std::vector<ClassifiedPiece>& pieces, double x) {
    double s = 0.0;
    for (const auto& p : pieces) {
        if (p.cls != BranchClass::full) continue;
        double y = branch_inverse(p.piece, x);
        double d;
        try {
            d = std::abs(p.piece.derivative(y));
        } catch (const DomainError&) {
            continue;
        }
        if (!std::isfinite(d) || d == 0.0) continue;
        s += 1.0 / d;
    }
    return s;
}

}  // namespace detail

// Certified lower bound for the escape rate: the full branches supply a
// preimage for every point, so inf over x of their transfer-sum bounds
// the leading eigenvalue from below. Minimized on a grid; a modulus
// estimate from consecutive grid values is subtracted so the bound
// stays on the safe side of grid error. Exact (margin zero) for
// piecewise-linear maps.
inline double rho_lower_bound(const OpenSystem& sys,
                              std::size_t grid_n = 10000) {
    BranchClassification cls = classify_branches(sys);
    if (cls.full_count == 0)
        throw NotApplicableError("rho_lower_bound: no full branches");
    const Interval domain = sys.map.domain;
    double min_s = std::numeric_limits<double>::infinity();
    double max_step = 0.0;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i <= grid_n; ++i) {
        double x = domain.lo +
                   domain.length() * static_cast<double>(i) / grid_n;
        double s = detail::full_branch_transfer_sum(cls.pieces, x);
        min_s = std::min(min_s, s);
        if (i > 0) max_step = std::max(max_step, std::abs(s - prev));
        prev = s;
    }
    // Branch-image endpoints are the only kinks of the summand.
    for (const auto& p : cls.pieces) {
        for (double x : {p.piece.range.lo, p.piece.range.hi}) {
            if (x < domain.lo || x > domain.hi) continue;
            min_s = std::min(
                min_s, detail::full_branch_transfer_sum(cls.pieces, x));
        }
    }
    return min_s - max_step;
}

// sup of 1/|T'| over the surviving pieces (full and partial).
inline double inverse_derivative_sup_on_survivors(
    const BranchClassification& cls) {
    double inf_abs = std::numeric_limits<double>::infinity();
    for (const auto& p : cls.pieces) {
        if (p.cls == BranchClass::in_hole) continue;
        inf_abs = std::min(inf_abs, derivative_bounds(p.piece).inf_abs);
    }
    return 1.0 / inf_abs;
}

// Upper bound for the constant that must stay below the escape rate.
// Full-branched systems: (2+eps) * sup over full branches of 1/|T'|.
// Piecewise-linear systems with partial branches: theta * (3+eps+c_u).
// Not computable otherwise (+inf).
inline double alpha_upper_bound(const OpenSystem& sys, double epsilon) {
    if (!(epsilon > 0.0))
        throw ValidationError("alpha_upper_bound: epsilon must be positive");
    BranchClassification cls = classify_branches(sys);
    if (cls.partial_count == 0) {
        double sup_inv = 0.0;
        for (const auto& p : cls.pieces) {
            if (p.cls != BranchClass::full) continue;
            sup_inv = std::max(sup_inv,
                               1.0 / derivative_bounds(p.piece).inf_abs);
        }
        return (2.0 + epsilon) * sup_inv;
    }
    if (sys.map.all_linear()) {
        double theta = inverse_derivative_sup_on_survivors(cls);
        return theta *
               (3.0 + epsilon + static_cast<double>(cls.max_contiguous_partial));
    }
    return std::numeric_limits<double>::infinity();
}

enum class AdmissibilityVerdict {
    ulam_admissible_certified,
    admissible_via_criterion,
    unknown,
};

inline const char* to_string(AdmissibilityVerdict v) {
    switch (v) {
        case AdmissibilityVerdict::ulam_admissible_certified:
            return "ulam_admissible_certified";
        case AdmissibilityVerdict::admissible_via_criterion:
            return "admissible_via_criterion";
        case AdmissibilityVerdict::unknown:
            return "unknown";
    }
    return "?";
}

struct AdmissibilityReport {
    BranchClassification classes;
    std::size_t c_u = 0;
    double theta = std::numeric_limits<double>::quiet_NaN();
    double rho_lower = std::numeric_limits<double>::quiet_NaN();
    double alpha_upper = std::numeric_limits<double>::quiet_NaN();
    double epsilon = 0.0;
    AdmissibilityVerdict verdict = AdmissibilityVerdict::unknown;
    std::string criterion_used = "none";
};

// Runs the computable sufficient conditions. The verdict is only ever
// "certified" or "unknown"; an unsatisfied certificate never claims
// inadmissibility. The Lorenz survivor-interval check (expansion at
// the boundary fixed point beats the transfer-sum infimum) applies
// when the family is lorenz restricted to the inner interval.
inline AdmissibilityReport admissibility_report(const OpenSystem& sys,
                                                double epsilon) {
    if (!(epsilon > 0.0))
        throw ValidationError("admissibility_report: epsilon must be positive");
    AdmissibilityReport r;
    r.classes = classify_branches(sys);
    r.c_u = r.classes.max_contiguous_partial;
    r.epsilon = epsilon;
    r.theta = inverse_derivative_sup_on_survivors(r.classes);
    if (r.classes.full_count == 0) return r;
    r.rho_lower = rho_lower_bound(sys);
    r.alpha_upper = alpha_upper_bound(sys, epsilon);

    if (r.rho_lower > r.alpha_upper) {
        r.verdict = AdmissibilityVerdict::ulam_admissible_certified;
        r.criterion_used = (r.classes.partial_count == 0)
                               ? "full_branched"
                               : "many_full_branches";
        return r;
    }
    const bool lorenz_survivor =
        sys.map.meta.family == "lorenz" &&
        (sys.map.domain.hi < 1.0 || sys.map.domain.lo > -1.0);
    if (lorenz_survivor && r.classes.partial_count == 0 &&
        r.theta < r.rho_lower) {
        r.verdict = AdmissibilityVerdict::admissible_via_criterion;
        r.criterion_used = "lorenz_survivor_interval";
    }
    return r;
}

}  // namespace openulam
