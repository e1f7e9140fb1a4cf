#pragma once

#include "autogyro/config.hpp"

namespace autogyro::tether {

struct Vec2 {
    double x = 0.0;
    double z = 0.0;
};

enum class Regime { SlackCatenary, TautElastic };

struct TetherSolution {
    Vec2 tension_at_top;      // force on the craft
    Vec2 tension_at_anchor;   // force on the anchor
    double tension_magnitude = 0.0;
    Regime regime = Regime::SlackCatenary;
    double horizontal_component = 0.0;
    double sag = 0.0;
    int iterations = 0;
};

// Elastic catenary between anchor and attach. Unstretched length l_t, weight
// per length rho_t*g, axial stiffness EA. The inextensible catenary is the
// limit EA -> infinity; a weightless line reduces to k*(chord - l_t)/l_t.
TetherSolution solve_tether(const PhysicalParams& p, Vec2 anchor, Vec2 attach);

// Same solve with explicit line properties. EA may be +infinity.
TetherSolution solve_catenary(double l_t, double weight_per_length, double EA,
                              Vec2 anchor, Vec2 attach);

// Closed-form end offset of the line given the force the craft applies to it
// (horizontal H > 0 downwind, vertical V_top upward).
Vec2 catenary_endpoint(double l_t, double weight_per_length, double EA, double H, double V_top);

// Straight-line elastic formula with the half-weight correction.
double straight_elastic_tension(const PhysicalParams& p, double chord, double dz);

}  // namespace autogyro::tether
