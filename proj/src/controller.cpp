#include "autogyro/controller.hpp"

#include <algorithm>
#include <cmath>

namespace autogyro::control {

namespace {

// Shared branch structure of the braking laws.
ControlCommand branch(double beta, double beta_r, double raw, double u_min)
{
    ControlCommand c;
    c.beta_r = beta_r;
    if (beta >= beta_r) {
        c.u1 = std::clamp(raw, u_min, 0.0);
        c.saturated = raw < u_min;
    } else {
        c.u2 = std::clamp(-raw, u_min, 0.0);
        c.saturated = -raw < u_min;
    }
    return c;
}

}  // namespace

ControlCommand pi_braking(double beta, double beta_r, double integ, const GainSet& g, double u_min, double dt)
{
    const double err = beta_r - beta;
    const double raw = g.K_p2 * err + g.K_i2 * integ;
    ControlCommand c = branch(beta, beta_r, raw, u_min);
    c.integ = c.saturated ? integ : integ + err * dt;
    return c;
}

ControlCommand pid_two_loop(double z_c, double z_d, double beta, PidState& st, const GainSet& g,
                            double u_min, double dt, double tau)
{
    const double ez = z_d - z_c;
    if (!st.primed) {
        st.prev_ez = ez;
        st.primed = true;
        // bumpless start: the first reference equals the current pitch
        if (g.K_i != 0.0) st.integ_ez = (beta - g.K_p * ez) / g.K_i;
    }
    const double raw_d = (ez - st.prev_ez) / dt;
    st.deriv_f += dt / (tau + dt) * (raw_d - st.deriv_f);
    st.prev_ez = ez;
    st.integ_ez += ez * dt;
    const double beta_r = g.K_p * ez + g.K_i * st.integ_ez + g.K_d * st.deriv_f;
    ControlCommand c = branch(beta, beta_r, g.K_p2 * (beta_r - beta), u_min);
    c.integ = st.integ_ez;
    return c;
}

ReferenceSource::ReferenceSource(double beta_r_initial, double t_switch, double rate_limit, double lo, double hi)
    : t_switch_(t_switch), rate_(rate_limit), lo_(lo), hi_(hi), beta_r_(beta_r_initial), target_(beta_r_initial)
{
}

double ReferenceSource::update(double t, double dt, const estimation::Algorithm1Result* est)
{
    if (t < t_switch_) return beta_r_;
    if (est) {
        holding_ = est->skipped || est->vertex_held || !est->state.vertex_valid
                || !std::isfinite(est->state.beta_zmax);
        if (!holding_) target_ = std::clamp(est->state.beta_zmax, lo_, hi_);
    }
    const double step = rate_ * dt;
    beta_r_ += std::clamp(target_ - beta_r_, -step, step);
    return beta_r_;
}

}  // namespace autogyro::control
