#pragma once

#include "autogyro/aero.hpp"
#include "autogyro/config.hpp"
#include "autogyro/tether.hpp"

#include <Eigen/Core>

#include <array>

namespace autogyro::plant {

constexpr double kOmegaFloor = 0.1;

// [x_c, z_c, beta, xdot, zdot, betadot, Omega1, Omega2]
using ReducedState = Eigen::Matrix<double, 8, 1>;
enum ReducedIndex { X = 0, Z, BETA, XD, ZD, BETAD, OMEGA1, OMEGA2 };

struct RotorSample {
    aero::RotorLoads loads;
    double v_axial = 0.0;
    double v_inplane = 0.0;
    double force_x = 0.0;
    double force_z = 0.0;
};

struct ReducedEval {
    ReducedState derivative;
    std::array<RotorSample, 2> rotor;
    tether::TetherSolution tether;
    double tether_force_x = 0.0;
    double tether_force_z = 0.0;
};

// Planar frame with two azimuth-averaged rotors. Rotor 1 sits at
// C - (l/2) x_b, rotor 2 at C + (l/2) x_b, so I_beta betaddot = (l/2)(T1 - T2).
class ReducedPlant {
public:
    explicit ReducedPlant(const PhysicalParams& p, int n_psi = aero::kDefaultAzimuths);

    ReducedEval evaluate(const ReducedState& s, double wind, double u1, double u2, double t = 0.0) const;
    ReducedState derivative(const ReducedState& s, double wind, double u1, double u2, double t = 0.0) const
    {
        return evaluate(s, wind, u1, u2, t).derivative;
    }
    // One RK4 step with wind and torques held over the step.
    ReducedState step(const ReducedState& s, double t, double dt, double wind, double u1, double u2) const;

    // Induced-velocity warm start carried between evaluations.
    void reset_inflow_cache() const { have_cache_ = false; }

    const PhysicalParams& params() const { return p_; }
    const aero::RotorModel& rotor() const { return rotor_; }
    const Inertias& inertias() const { return in_; }

private:
    PhysicalParams p_;
    aero::RotorModel rotor_;
    Inertias in_;
    mutable std::array<double, 2> vi_cache_{0.0, 0.0};
    mutable bool have_cache_ = false;
};

ReducedState reduced_dynamics(const ReducedState& s, double wind, double u1, double u2,
                              const PhysicalParams& p);

}  // namespace autogyro::plant
