#pragma once

#include "autogyro/config.hpp"
#include "autogyro/reduced_plant.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace autogyro::trim {

struct TrimPoint {
    double V_w = 0.0;
    double beta = 0.0;
    double Omega = 0.0;
    double mu = 0.0;
    double z_e = 0.0;
    double x_e = 0.0;
    double tension = 0.0;
    double v_i = 0.0;
    double resid_force = 0.0;
    double resid_torque = 0.0;
    bool feasible = false;
    std::string note;  // reason when infeasible
};

// Torque balance by bisection on [1, 60] rad/s, then the tether end point that
// closes the force balance.
TrimPoint solve_trim(const PhysicalParams& p, double V_w, double beta);

// Reduced-tier state sitting on the trim point.
plant::ReducedState trim_state(const TrimPoint& tp);

struct Vertex {
    double V_w = 0.0;
    double beta_star = 0.0;
    double z_max = 0.0;
    int discrete_max = -1;       // index into the feasible points of this wind
    int interior_maxima = 0;
    double r2_local = 0.0;       // quadratic fit quality within +-2 deg of beta_star
    bool valid = false;
};

struct SweepResult {
    std::vector<TrimPoint> points;  // ordered by (V_w, beta), infeasible included
    std::vector<Vertex> vertices;   // one per wind speed
};

SweepResult sweep(const PhysicalParams& p, const std::vector<double>& winds,
                  const std::vector<double>& betas);

// Least-squares z = c2 beta^2 + c1 beta + c0 over the points with |beta - center| <= half_width.
struct QuadFit {
    double c2 = 0.0, c1 = 0.0, c0 = 0.0;
    double r2 = 0.0;
    int n = 0;
};
QuadFit fit_quadratic(const std::vector<double>& beta, const std::vector<double>& z);

std::vector<double> beta_grid(double lo_deg, double step_deg, double hi_deg);

void write_csv(std::ostream& os, const std::vector<TrimPoint>& pts);

}  // namespace autogyro::trim
