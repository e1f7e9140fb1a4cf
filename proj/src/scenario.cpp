#include "autogyro/scenario.hpp"

#include "autogyro/controller.hpp"
#include "autogyro/errors.hpp"
#include "autogyro/estimator.hpp"
#include "autogyro/flapping_plant.hpp"
#include "autogyro/reduced_plant.hpp"
#include "autogyro/trim.hpp"
#include "autogyro/wind.hpp"

#include <chrono>
#include <cmath>
#include <map>
#include <memory>

namespace autogyro::sim {

bool record_ok(const TelemetryRecord& r, double u_min)
{
    const bool bounds = r.u1 >= u_min && r.u1 <= 0.0 && r.u2 >= u_min && r.u2 <= 0.0;
    return bounds && r.u1 * r.u2 == 0.0 && r.Omega1 > 0.0 && r.Omega2 > 0.0;
}

namespace {

// Common view of the two plant tiers for the control loop.
struct PlantAdapter {
    virtual ~PlantAdapter() = default;
    virtual double x() const = 0;
    virtual double z() const = 0;
    virtual double beta() const = 0;
    virtual double beta_dot() const = 0;
    virtual double omega(int i) const = 0;
    virtual void step(double t, double dt, double wind, double u1, double u2) = 0;
    // thrusts and tether tension at the current state
    virtual void loads(double wind, double u1, double u2, double t, double& T1, double& T2, double& tension) const = 0;
};

struct ReducedAdapter final : PlantAdapter {
    plant::ReducedPlant plant;
    plant::ReducedState s;
    ReducedAdapter(const PhysicalParams& p, const plant::ReducedState& s0) : plant(p), s(s0) {}
    double x() const override { return s[plant::X]; }
    double z() const override { return s[plant::Z]; }
    double beta() const override { return s[plant::BETA]; }
    double beta_dot() const override { return s[plant::BETAD]; }
    double omega(int i) const override { return s[plant::OMEGA1 + i]; }
    void step(double t, double dt, double wind, double u1, double u2) override
    {
        s = plant.step(s, t, dt, wind, u1, u2);
    }
    void loads(double wind, double u1, double u2, double t, double& T1, double& T2, double& tension) const override
    {
        const auto ev = plant.evaluate(s, wind, u1, u2, t);
        T1 = ev.rotor[0].loads.thrust;
        T2 = ev.rotor[1].loads.thrust;
        tension = ev.tether.tension_magnitude;
    }
};

struct FlappingAdapter final : PlantAdapter {
    plant::FlappingPlant plant;
    plant::FullState s;
    FlappingAdapter(const PhysicalParams& p, const plant::FullState& s0) : plant(p), s(s0) {}
    double x() const override { return s.q[plant::QX]; }
    double z() const override { return s.q[plant::QZ]; }
    double beta() const override { return s.q[plant::QBETA]; }
    double beta_dot() const override { return s.qd[plant::QBETA]; }
    double omega(int i) const override { return s.qd[i == 0 ? plant::QPSI1 : plant::QPSI2]; }
    void step(double t, double dt, double wind, double u1, double u2) override
    {
        s = plant.step(s, t, dt, wind, u1, u2);
        for (int i = 0; i < 2; ++i) {
            if (omega(i) < plant::kOmegaFloor) throw SimulationFault("rotor stall-out", t + dt);
        }
        if (!(z() > 0.0)) throw SimulationFault("frame reached the ground", t + dt);
    }
    void loads(double wind, double u1, double u2, double t, double& T1, double& T2, double& tension) const override
    {
        const auto ev = plant.evaluate(s, wind, u1, u2, t);
        T1 = ev.rotor_thrust[0];
        T2 = ev.rotor_thrust[1];
        tension = ev.tether_tension;
    }
};

}  // namespace

RunSummary run_scenario(const Config& cfg, const RunOptions& opt)
{
    const auto wall0 = std::chrono::steady_clock::now();
    const auto& sc = cfg.scenario;
    const auto& p = cfg.physical;
    RunSummary sum;

    WindProfile wind(sc.wind);

    // reference maxima from the trim sweep, one per distinct segment speed
    std::map<double, trim::Vertex> vertex_by_speed;
    const auto grid = trim::beta_grid(opt.sweep_lo_deg, opt.sweep_step_deg, opt.sweep_hi_deg);
    const auto segs = wind.segments();
    for (std::size_t i = 0; i < segs.size(); ++i) {
        const double V = segs[i].second;
        if (!vertex_by_speed.count(V)) vertex_by_speed[V] = trim::sweep(p, {V}, grid).vertices.front();
        SegmentSummary ss;
        ss.t_start = segs[i].first;
        ss.t_end = i + 1 < segs.size() ? segs[i + 1].first : sc.duration;
        ss.V_w = V;
        ss.z_max_trim = vertex_by_speed[V].z_max;
        ss.beta_star = vertex_by_speed[V].beta_star;
        if (ss.t_start < sc.duration) sum.segments.push_back(ss);
    }
    auto segment_at = [&](double t) -> SegmentSummary& {
        std::size_t k = 0;
        for (std::size_t i = 0; i < sum.segments.size(); ++i) {
            if (t >= sum.segments[i].t_start) k = i;
        }
        return sum.segments[k];
    };

    const double V0 = wind.at(0.0);
    const trim::TrimPoint tp = trim::solve_trim(p, V0, sc.beta_r_initial);
    if (!tp.feasible) throw ConfigError("no trim point at the initial wind and beta_r_initial: " + tp.note);

    std::unique_ptr<PlantAdapter> plant;
    if (sc.plant_tier == PlantTier::Reduced) {
        plant = std::make_unique<ReducedAdapter>(p, trim::trim_state(tp));
    } else {
        plant = std::make_unique<FlappingAdapter>(
            p, plant::full_from_reduced(tp.x_e, tp.z_e, tp.beta, 0.0, 0.0, 0.0, tp.Omega, tp.Omega));
    }

    const auto gains = estimation::gains_from(cfg.gains);
    estimation::EstimatorState est = estimation::initial_estimates(plant->z(), sc.beta_r_initial, sc.estimator);
    bool est_started = false;
    control::ReferenceSource ref(sc.beta_r_initial, sc.t_switch, sc.rate_limit, sc.estimator.beta_lo,
                                 sc.estimator.beta_hi);
    double integ = 0.0;
    control::PidState pid;

    std::unique_ptr<TelemetryWriter> out;
    if (opt.write_file && !sc.output_path.empty()) out = std::make_unique<TelemetryWriter>(sc.output_path);

    const long n_steps = static_cast<long>(std::llround(sc.duration / sc.dt));
    const long decim = sc.telemetry_interval > 0.0
                         ? std::max(1L, static_cast<long>(std::llround(sc.telemetry_interval / sc.dt)))
                         : 1L;

    double t = 0.0;
    double last_beta_r = ref.current();
    try {
        for (long n = 0; n <= n_steps; ++n) {
            t = n * sc.dt;
            const double V = wind.at(t);
            control::ControlCommand cmd;
            if (sc.mode == ControlMode::Adaptive) {
                const estimation::Algorithm1Result* upd = nullptr;
                estimation::Algorithm1Result res;
                if (t >= sc.t_switch) {
                    if (!est_started) {
                        est = estimation::initial_estimates(plant->z(), ref.current(), sc.estimator);
                        est_started = true;
                    }
                    const estimation::Measurement m{plant->beta(), plant->beta_dot(), plant->z(), t};
                    res = estimation::algorithm1_update(est, m, gains, sc.estimator);
                    est = res.state;
                    upd = &res;
                }
                const double beta_r = ref.update(t, sc.dt, upd);
                cmd = control::pi_braking(plant->beta(), beta_r, integ, cfg.gains, sc.u_min, sc.dt);
                integ = cmd.integ;
            } else {
                cmd = control::pid_two_loop(plant->z(), sc.z_d, plant->beta(), pid, cfg.gains, sc.u_min, sc.dt,
                                            sc.derivative_tau);
            }

            last_beta_r = cmd.beta_r;
            const bool cmd_ok = cmd.u1 >= sc.u_min && cmd.u1 <= sc.u_max && cmd.u2 >= sc.u_min
                             && cmd.u2 <= sc.u_max && cmd.u1 * cmd.u2 == 0.0;
            if (!cmd_ok) ++sum.violations;

            if (n % decim == 0) {
                TelemetryRecord r;
                r.t = t;
                r.x_c = plant->x();
                r.z_c = plant->z();
                r.beta = plant->beta();
                r.Omega1 = plant->omega(0);
                r.Omega2 = plant->omega(1);
                r.u1 = cmd.u1;
                r.u2 = cmd.u2;
                plant->loads(V, cmd.u1, cmd.u2, t, r.T1, r.T2, r.tether_tension);
                r.mu = aero::tip_speed_ratio(V, r.beta, 0.5 * (r.Omega1 + r.Omega2), p.R);
                r.beta_r = cmd.beta_r;
                r.a_hat = est.a_hat;
                r.b_hat = est.b_hat;
                r.c_hat = est.c_hat;
                r.e_zh = r.z_c - estimation::zhat(est, r.beta);
                r.V_w = V;
                if (!record_ok(r, sc.u_min)) ++sum.violations;
                if (out) out->write(r);
                if (opt.keep_records) sum.records.push_back(r);
                ++sum.rows;

                auto& seg = segment_at(t);
                if (est_started && est.a_hat > 0.0) {
                    const double ez = std::abs(seg.z_max_trim - estimation::vertex_altitude(est));
                    seg.e_zmax_end = ez;
                    sum.e_zmax.emplace_back(t, ez);
                }
                seg.z_end = r.z_c;
                seg.beta_end = r.beta;
                seg.beta_r_end = r.beta_r;
            }
            if (n == n_steps) break;
            plant->step(t, sc.dt, V, cmd.u1, cmd.u2);
            ++sum.steps;
        }
        sum.completed = true;
    } catch (const SimulationFault& f) {
        sum.fault = f.what();
    } catch (const NumericError& e) {
        sum.fault = e.what();
    }
    sum.t_end = t;
    sum.z_final = plant->z();
    sum.beta_final = plant->beta();
    sum.beta_r_final = last_beta_r;
    sum.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    return sum;
}

}  // namespace autogyro::sim
