#pragma once

#include "autogyro/tether.hpp"

#include <limits>

namespace autogyro::oracle {

struct ChainResult {
    tether::Vec2 tension_at_top;  // force on the craft
    double tension = 0.0;
    bool converged = false;
    int iterations = 0;
};

// Static equilibrium of n uniform rigid (or elastic) links pinned end to end,
// found by shooting from the anchor. Independent of the analytic catenary.
ChainResult catenary_oracle(tether::Vec2 anchor, tether::Vec2 attach, double l_t,
                            double lin_density, int n_segments, double g = 9.81,
                            double axial_stiffness = std::numeric_limits<double>::infinity());

}  // namespace autogyro::oracle
