#pragma once

#include "autogyro/config.hpp"
#include "autogyro/estimator.hpp"

namespace autogyro::control {

struct ControlCommand {
    double u1 = 0.0;
    double u2 = 0.0;
    double beta_r = 0.0;
    double integ = 0.0;
    bool saturated = false;
};

// Differential braking. beta >= beta_r brakes rotor 1, otherwise rotor 2.
// integ accumulates (beta_r - beta) dt and is frozen while the active channel
// sits beyond u_min.
ControlCommand pi_braking(double beta, double beta_r, double integ, const GainSet& g,
                          double u_min, double dt);

struct PidState {
    double integ_ez = 0.0;
    double prev_ez = 0.0;
    double deriv_f = 0.0;
    bool primed = false;
};

// Legacy two-loop law: beta_r from a PID on the altitude error, inner loop
// proportional only. The derivative is a filtered backward difference. The
// integrator is seeded on the first call so that beta_r starts at beta.
ControlCommand pid_two_loop(double z_c, double z_d, double beta, PidState& st, const GainSet& g,
                            double u_min, double dt, double tau);

// Reference pitch: beta_r_initial before t_switch, afterwards the clamped
// estimator vertex approached at a bounded rate.
class ReferenceSource {
public:
    ReferenceSource(double beta_r_initial, double t_switch, double rate_limit, double lo, double hi);

    // est may be null before the switch or when no update ran this step.
    double update(double t, double dt, const estimation::Algorithm1Result* est);

    double current() const { return beta_r_; }
    double target() const { return target_; }
    bool holding() const { return holding_; }

private:
    double t_switch_, rate_, lo_, hi_;
    double beta_r_, target_;
    bool holding_ = false;
};

}  // namespace autogyro::control
