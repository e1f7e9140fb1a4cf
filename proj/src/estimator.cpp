#include "autogyro/estimator.hpp"

#include <algorithm>
#include <cmath>

namespace autogyro::estimation {

EstimatorGains gains_from(const GainSet& g) { return {g.k1, g.k2, g.k3, g.e_amax, g.e_bmax}; }

double zhat(const EstimatorState& s, double beta)
{
    return -s.a_hat * beta * beta + s.b_hat * beta + s.c_hat;
}

double vertex_altitude(const EstimatorState& s)
{
    return s.c_hat + s.b_hat * s.b_hat / (4.0 * s.a_hat);
}

double signum_deadband(double x)
{
    if (std::abs(x) < 1e-9) return 0.0;
    return x > 0.0 ? 1.0 : -1.0;
}

StepResult adapt_step(const EstimatorState& s, const Measurement& m, double dt,
                      const EstimatorGains& g, double beta_min)
{
    StepResult r{s, false};
    const double beta = m.beta;
    if (std::abs(beta) < beta_min) {
        r.skipped = true;
        return r;
    }
    const double e = m.z_c - zhat(s, beta);
    const double sg = signum_deadband(e);
    const double bd = std::abs(m.beta_dot);
    const double a_dot = -(g.k1 * e + sg * 2.0 * std::abs(g.e_amax) * std::abs(beta) * bd) / (beta * beta);
    const double b_dot = (g.k2 * e + sg * std::abs(g.e_bmax) * bd) / beta;
    const double c_dot = g.k3 * e;
    r.state.e_zh = e;
    r.state.a_hat += dt * a_dot;
    r.state.b_hat += dt * b_dot;
    r.state.c_hat += dt * c_dot;
    return r;
}

double inner_step(const EstimatorGains& g) { return std::min(0.5 / g.k(), 0.01); }

Algorithm1Result algorithm1_update(const EstimatorState& s, const Measurement& m,
                                   const EstimatorGains& g, const EstimatorOptions& opt)
{
    Algorithm1Result r;
    r.state = s;
    if (std::abs(m.beta) < opt.beta_min) {
        r.skipped = true;
        return r;
    }
    const double dtau = inner_step(g);
    double e = m.z_c - zhat(r.state, m.beta);
    const bool robust = (g.e_amax != 0.0 || g.e_bmax != 0.0) && m.beta_dot != 0.0;
    if (!robust && std::abs(e) >= opt.tolerance) {
        // Frozen beta and no robustness terms: every inner step scales e by
        // r = 1 - k dtau, so n steps sum to a geometric series.
        const double ratio = 1.0 - g.k() * dtau;
        int n = opt.max_inner;
        if (ratio > 0.0 && ratio < 1.0) {
            const double need = std::floor(std::log(opt.tolerance / std::abs(e)) / std::log(ratio)) + 1.0;
            n = static_cast<int>(std::clamp(need, 1.0, static_cast<double>(opt.max_inner)));
        }
        const double sum = e * (1.0 - std::pow(ratio, n)) / (1.0 - ratio);
        const double beta = m.beta;
        r.state.a_hat -= dtau * g.k1 * sum / (beta * beta);
        r.state.b_hat += dtau * g.k2 * sum / beta;
        r.state.c_hat += dtau * g.k3 * sum;
        r.inner_iterations = n;
        e = m.z_c - zhat(r.state, m.beta);
    }
    while (std::abs(e) >= opt.tolerance && r.inner_iterations < opt.max_inner) {
        r.state = adapt_step(r.state, m, dtau, g, opt.beta_min).state;
        e = m.z_c - zhat(r.state, m.beta);
        ++r.inner_iterations;
    }
    r.converged = std::abs(e) < opt.tolerance;
    r.state.e_zh = e;
    if (r.state.a_hat >= opt.a_min) {
        r.state.beta_zmax = r.state.b_hat / (2.0 * r.state.a_hat);
        r.state.vertex_valid = true;
    } else {
        r.state.beta_zmax = s.beta_zmax;
        r.state.vertex_valid = false;
        r.vertex_held = true;
    }
    return r;
}

EstimatorState initial_estimates(double z_first, double beta_r, const EstimatorOptions& opt)
{
    EstimatorState s;
    s.a_hat = opt.a_init;
    s.b_hat = 2.0 * opt.a_init * beta_r;
    s.c_hat = z_first;
    s.beta_zmax = beta_r;
    s.vertex_valid = opt.a_init >= opt.a_min;
    s.e_zh = z_first - zhat(s, beta_r);
    return s;
}

double lyapunov_rate(double e, double e_a, double e_b, double beta, double beta_dot, const EstimatorGains& g)
{
    const double robust = 2.0 * std::abs(g.e_amax) * std::abs(beta) * std::abs(beta_dot)
                        + std::abs(g.e_bmax) * std::abs(beta_dot);
    const double e_dot = (-2.0 * e_a * beta + e_b) * beta_dot - g.k() * e - signum_deadband(e) * robust;
    return e * e_dot;
}

HarnessResult run_synthetic_harness(double a, double b, double c, int outer_steps,
                                    const EstimatorGains& g, const EstimatorOptions& opt, double dt)
{
    HarnessResult h;
    // beta drifts slowly around the true vertex region
    auto beta_at = [](double t) { return 0.15 + 0.02 * std::sin(0.01 * t); };
    auto beta_dot_at = [](double t) { return 0.02 * 0.01 * std::cos(0.01 * t); };
    auto z_at = [&](double beta) { return -a * beta * beta + b * beta + c; };

    EstimatorState s = initial_estimates(z_at(beta_at(0.0)), beta_at(0.0), opt);
    for (int n = 1; n <= outer_steps; ++n) {
        const double t = n * dt;
        const Measurement m{beta_at(t), beta_dot_at(t), z_at(beta_at(t)), t};
        s = algorithm1_update(s, m, g, opt).state;
        h.e_zh.push_back(s.e_zh);
        if (h.steps_to_tolerance < 0 && std::abs(s.e_zh) < 1e-3) h.steps_to_tolerance = n;
    }
    h.final_state = s;
    return h;
}

}  // namespace autogyro::estimation
