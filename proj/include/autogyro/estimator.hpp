#pragma once

#include "autogyro/config.hpp"

#include <vector>

namespace autogyro::estimation {

struct EstimatorGains {
    double k1, k2, k3;
    double e_amax, e_bmax;
    double k() const { return k1 + k2 + k3; }
};

EstimatorGains gains_from(const GainSet& g);

struct EstimatorState {
    double a_hat = 0.0;   // m/rad^2
    double b_hat = 0.0;   // m/rad
    double c_hat = 0.0;   // m
    double e_zh = 0.0;    // m
    double beta_zmax = 0.0;
    bool vertex_valid = false;
};

struct Measurement {
    double beta = 0.0;
    double beta_dot = 0.0;
    double z_c = 0.0;
    double t = 0.0;
};

// z_hat = -a beta^2 + b beta + c
double zhat(const EstimatorState& s, double beta);

// Altitude of the estimated vertex, z_hat(b/(2a)).
double vertex_altitude(const EstimatorState& s);

double signum_deadband(double x);

struct StepResult {
    EstimatorState state;
    bool skipped = false;  // |beta| < beta_min
};

// One explicit-Euler step of the adaptation laws.
StepResult adapt_step(const EstimatorState& s, const Measurement& m, double dt,
                      const EstimatorGains& g, double beta_min);

struct Algorithm1Result {
    EstimatorState state;
    int inner_iterations = 0;
    bool converged = false;
    bool skipped = false;
    bool vertex_held = false;  // a_hat below a_min, previous vertex kept
};

double inner_step(const EstimatorGains& g);  // min(0.5/k, 0.01)

Algorithm1Result algorithm1_update(const EstimatorState& s, const Measurement& m,
                                   const EstimatorGains& g, const EstimatorOptions& opt);

// a_hat = a_init, b_hat = 2 a_init beta_r, c_hat = z_first: the initial vertex
// sits on the initial reference.
EstimatorState initial_estimates(double z_first, double beta_r, const EstimatorOptions& opt);

// d/dt(e^2/2) along the continuous error dynamics for a true quadratic (a, b, c)
// with estimation errors e_a = a - a_hat, e_b = b - b_hat.
double lyapunov_rate(double e_zh, double e_a, double e_b, double beta, double beta_dot,
                     const EstimatorGains& g);

struct HarnessResult {
    std::vector<double> e_zh;  // after each outer step
    EstimatorState final_state;
    int steps_to_tolerance = -1;  // first outer step with |e_zh| < 1e-3
};

// Synthetic plant z = -a beta^2 + b beta + c with a slowly varying beta.
HarnessResult run_synthetic_harness(double a, double b, double c, int outer_steps,
                                    const EstimatorGains& g, const EstimatorOptions& opt,
                                    double dt = 0.1);

}  // namespace autogyro::estimation
