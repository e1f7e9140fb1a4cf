#pragma once

#include "autogyro/config.hpp"
#include "autogyro/simd/kernels.hpp"

#include <vector>

namespace autogyro::aero {

constexpr int kBlades = 4;
constexpr int kRadialElements = 10;
constexpr int kDefaultAzimuths = 36;
constexpr int kMaxInflowIterations = 50;

struct RotorInflowState {
    double v_i = 0.0;
    double mu = 0.0;
    double lambda = 0.0;
    bool converged = false;
    int iterations = 0;
};

struct RotorLoads {
    double thrust = 0.0;
    double h_force = 0.0;
    double torque_aero = 0.0;
    RotorInflowState inflow;
};

double tip_speed_ratio(double V_w, double beta, double Omega, double R);

// Element centres of the radial discretisation between r_h and R.
std::vector<double> radial_stations(const PhysicalParams& p);

// Precomputed element grid for one rotor; cheap to evaluate repeatedly.
class RotorModel {
public:
    explicit RotorModel(const PhysicalParams& p, int n_psi = kDefaultAzimuths);

    // Loads at a prescribed uniform induced velocity.
    RotorLoads loads_at(double V_axial, double V_inplane, double Omega, double v_i) const;

    RotorInflowState solve_inflow(double V_axial, double V_inplane, double Omega,
                                  double thrust_guess) const;

    // Full BEM evaluation. v_i_guess seeds the fixed-point iteration when given.
    RotorLoads loads(double V_axial, double V_inplane, double Omega,
                     const double* v_i_guess = nullptr) const;

    // Momentum-theory induced velocity for a given thrust (one fixed-point map application).
    double momentum_inflow(double thrust, double V_axial, double V_inplane, double v_i) const;

    int azimuths() const { return n_psi_; }
    const PhysicalParams& params() const { return p_; }

private:
    RotorInflowState iterate(double V_axial, double V_inplane, double Omega, double v0) const;

    PhysicalParams p_;
    int n_psi_;
    double disc_area_;
    std::vector<double> radius_, sin_psi_, q_;
};

RotorInflowState solve_inflow(const PhysicalParams& p, double V_axial, double V_inplane,
                              double Omega, double thrust_guess);
RotorLoads rotor_loads(const PhysicalParams& p, double V_axial, double V_inplane, double Omega);

}  // namespace autogyro::aero
