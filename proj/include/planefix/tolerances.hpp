#pragma once

#include <stdexcept>
#include <string>

namespace planefix {

struct Tolerances {
    double eps_sep = 0.01;     ///< separation margin for disjointness predicates
    double h_sample = 0.001;   ///< curve sampling step
    double tol_fix = 1e-10;    ///< fixed-point box diameter
    double tube_factor = 4.0;  ///< endpoint tubes are tube_factor * eps_sep wide
    double grid_pitch = 0.02;  ///< resolution of complement decompositions and region grids
    unsigned seed_jitter = 0;  ///< 0 keeps the default subdivision jitter

    double viol_tol() const { return eps_sep * 1e-6; }
    double tube() const { return tube_factor * eps_sep; }

    /// Throws std::invalid_argument unless all values are positive and
    /// eps_sep > 2 * h_sample * lipschitz.
    void validate(double lipschitz = 0.0) const;
};

}  // namespace planefix
