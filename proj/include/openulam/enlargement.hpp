#pragma once

#include <cmath>
#include <cstddef>

#include "openulam/open_system.hpp"
#include "openulam/spectral.hpp"
#include "openulam/ulam_matrix.hpp"

namespace openulam {

// Consistency check for hole enlargement: the enlarged system must
// keep the escape rate, and pushing its density forward m steps under
// the closed matrix must land on the base density (both compared after
// normalization).
struct EnlargementReport {
    std::size_t m = 0;
    double rho_base = 0.0;
    double rho_enlarged = 0.0;
    double rho_diff = 0.0;
    double pushforward_l1 = 0.0;
    SpectralSolution base;
    SpectralSolution enlarged;
};

inline EnlargementReport enlargement_consistency(const OpenSystem& sys,
                                                 const Partition& part,
                                                 std::size_t m,
                                                 const SpectralOptions& opts) {
    OpenSystem enlarged = enlarge_hole(sys, m);

    TransitionMatrix p_base = build_open(sys, part);
    TransitionMatrix p_enl = build_open(enlarged, part);
    TransitionMatrix p_closed = build_closed(sys.map, part);

    EnlargementReport r;
    r.m = m;
    r.base = leading_triple(p_base, part, opts);
    r.enlarged = leading_triple(p_enl, part, opts);
    r.rho_base = r.base.rho;
    r.rho_enlarged = r.enlarged.rho;
    r.rho_diff = std::abs(r.rho_base - r.rho_enlarged);

    std::vector<double> pushed = r.enlarged.left;
    std::vector<double> next;
    for (std::size_t step = 0; step < m; ++step) {
        p_closed.apply_left(pushed, next);
        pushed.swap(next);
    }
    StepDensity pushed_density{part, std::move(pushed)};
    double norm = pushed_density.l1_norm();
    if (norm <= 0.0)
        throw DegenerateSolutionError(
            "enlargement_consistency: pushforward vanished");
    for (auto& v : pushed_density.values) v /= norm;
    StepDensity base_density = density_from_left(r.base, part);
    r.pushforward_l1 = l1_distance(pushed_density, base_density);
    return r;
}

}  // namespace openulam
