// Acceptance checks: one PASS/FAIL line per criterion item.
#include "autogyro/chain_oracle.hpp"
#include "autogyro/config.hpp"
#include "autogyro/estimator.hpp"
#include "autogyro/flapping_plant.hpp"
#include "autogyro/reduced_plant.hpp"
#include "autogyro/rk4.hpp"
#include "autogyro/scenario.hpp"
#include "autogyro/tether.hpp"
#include "autogyro/trim.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>
#include <string>
#include <vector>

using namespace autogyro;

namespace {

int g_failed = 0;

void report(const std::string& id, bool ok, const std::string& detail)
{
    std::printf("[%s] %-5s %s\n", id.c_str(), ok ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failed;
}

std::string fmt(const char* f, auto... args)
{
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- trim

void trim_structure()
{
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalParams p;
    const std::vector<double> winds{8.0, 10.0, 12.0};
    const auto res = trim::sweep(p, winds, trim::beta_grid(3.0, 0.25, 20.0));
    const double wall = seconds_since(t0);

    bool mono = true, unimodal = true;
    std::string mono_note, uni_note;
    for (std::size_t w = 0; w < winds.size(); ++w) {
        const double V = winds[w];
        double prev = std::numeric_limits<double>::infinity();
        std::vector<double> z;
        for (const auto& tp : res.points) {
            if (tp.V_w != V || !tp.feasible) continue;
            if (!(tp.mu < prev)) mono = false;
            prev = tp.mu;
            z.push_back(tp.z_e);
        }
        int rises = 0;
        for (std::size_t i = 1; i + 1 < z.size(); ++i) {
            if ((z[i] - z[i - 1]) * (z[i + 1] - z[i]) < 0.0) ++rises;
        }
        const auto& v = res.vertices[w];
        const bool interior = v.discrete_max > 0 && v.discrete_max + 1 < static_cast<int>(z.size());
        if (!(v.interior_maxima == 1 && rises == 1 && interior)) unimodal = false;
        uni_note += fmt("V=%g: %d slope change(s), max at %.2f deg; ", V, rises, rad2deg(v.beta_star));
        mono_note += fmt("V=%g: %zu points; ", V, z.size());
    }
    report("1a", mono, "mu strictly decreasing in beta (" + mono_note + "sweep " + fmt("%.2f s)", wall));
    report("1b", unimodal, "z_e(beta) unimodal with interior maximum: " + uni_note);

    const double b8 = res.vertices[0].beta_star, b10 = res.vertices[1].beta_star, b12 = res.vertices[2].beta_star;
    report("1c", b8 > b10 && b10 > b12,
           fmt("vertex ordering beta*(8) = %.3f > beta*(10) = %.3f > beta*(12) = %.3f deg", rad2deg(b8),
               rad2deg(b10), rad2deg(b12)));

    const auto t13 = trim::solve_trim(p, 8.0, deg2rad(13.0));
    report("1d", t13.feasible && std::abs(t13.mu - 0.1) <= 0.05,
           fmt("mu(13 deg, 8 m/s) = %.4f, target 0.1 +- 0.05", t13.mu));

    bool r2_ok = true;
    std::string r2_note;
    for (const auto& v : res.vertices) {
        if (!(v.r2_local > 0.99)) r2_ok = false;
        r2_note += fmt("V=%g: %.4f; ", v.V_w, v.r2_local);
    }
    report("1e", r2_ok, "quadratic fit R^2 > 0.99 within +-2 deg of each vertex: " + r2_note);
    report("1t", wall < 120.0, fmt("trim suite runtime %.2f s < 120 s", wall));
}

// ---------------------------------------------------------------- estimator

void estimator_suite()
{
    using namespace estimation;
    const auto t0 = std::chrono::steady_clock::now();
    const EstimatorOptions opt;
    const auto g = gains_from(GainSet{});

    const auto h = run_synthetic_harness(40.0, 14.0, 850.0, 400, g, opt);
    double tail = 0.0;
    for (std::size_t i = 200; i < h.e_zh.size(); ++i) tail = std::max(tail, std::abs(h.e_zh[i]));
    report("2a", h.steps_to_tolerance > 0 && h.steps_to_tolerance <= 200 && tail < 1e-3,
           fmt("synthetic quadratic: |e_zh| < 1e-3 from outer step %d, max |e_zh| after step 200 = %.2e m",
               h.steps_to_tolerance, tail));

    const EstimatorState s{40, 12, 900};
    const Measurement m{0.15, 0.0, zhat(s, 0.15) + 2.0, 0.0};
    const double v0 = s.b_hat / (2 * s.a_hat);
    const auto pos = adapt_step(s, m, 0.01, {3e-4, 3e-3, 0.01, 0, 0}, opt.beta_min).state;
    const auto neg = adapt_step(s, m, 0.01, {-3e-4, -3e-3, 0.01, 0, 0}, opt.beta_min).state;
    const bool sign_ok = pos.a_hat < s.a_hat && pos.b_hat > s.b_hat && pos.b_hat / (2 * pos.a_hat) > v0
                      && neg.a_hat > s.a_hat && neg.b_hat < s.b_hat && neg.b_hat / (2 * neg.a_hat) < v0;
    report("2b", sign_ok,
           fmt("e_zh > 0: k1,k2 > 0 moves the vertex %.8f -> %.8f rad, k1,k2 < 0 moves it to %.8f rad", v0,
               pos.b_hat / (2 * pos.a_hat), neg.b_hat / (2 * neg.a_hat)));

    std::mt19937_64 gen(5);
    std::uniform_real_distribution<double> U(0.1, 100.0);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double a = U(gen), b = U(gen), k = U(gen);
        EstimatorState x{a, b, 0}, y{k * a, k * b, 0};
        const auto rx = algorithm1_update(x, {0.2, 0, zhat(x, 0.2), 0}, g, opt);
        const auto ry = algorithm1_update(y, {0.2, 0, zhat(y, 0.2), 0}, g, opt);
        worst = std::max(worst, std::abs(rx.state.beta_zmax - ry.state.beta_zmax) / std::abs(rx.state.beta_zmax));
    }
    report("2c", worst < 1e-12, fmt("vertex invariant under positive scaling of (a, b): worst rel. change %.1e", worst));

    bool lyap = true;
    int cases = 0;
    std::uniform_real_distribution<double> W(-1, 1);
    for (int i = 0; i < 2000; ++i) {
        const EstimatorGains gg{W(gen), W(gen), 2.5 + W(gen), 0, 0};
        const double dt = std::abs(W(gen)) * 1.99 / gg.k();
        EstimatorState x{40 + 10 * W(gen), 12 + W(gen), 900 + 20 * W(gen)};
        const Measurement mm{0.1 + 0.2 * std::abs(W(gen)), 0.0, 900 + 50 * W(gen), 0};
        const double e0 = mm.z_c - zhat(x, mm.beta);
        const auto x1 = adapt_step(x, mm, dt, gg, opt.beta_min).state;
        const double e1 = mm.z_c - zhat(x1, mm.beta);
        if (!(0.5 * e1 * e1 <= 0.5 * e0 * e0 * (1 + 1e-12))) lyap = false;
        ++cases;

        EstimatorGains gb = gains_from(GainSet{});
        const double ea = 5 * W(gen), eb = 3 * W(gen);
        gb.e_amax = std::abs(ea) * 1.5;
        gb.e_bmax = std::abs(eb) * 1.5;
        const double e = 10 * W(gen);
        if (!(lyapunov_rate(e, ea, eb, mm.beta, 0.05 * W(gen), gb) <= -gb.k() * e * e + 1e-12)) lyap = false;
    }
    const double wall = seconds_since(t0);
    report("2d", lyap,
           fmt("V = e^2/2 non-increasing per step for dt < 2/k (%d random cases) and dV/dt <= -k e^2 with exact bounds",
               cases));
    report("2t", wall < 10.0, fmt("estimator suite runtime %.2f s < 10 s", wall));
}

// ---------------------------------------------------------------- closed loop

long g_rows = 0, g_bad_rows = 0;

void tally_rows(const sim::RunSummary& s, double u_min)
{
    for (const auto& r : s.records) {
        ++g_rows;
        if (!sim::record_ok(r, u_min)) ++g_bad_rows;
    }
}

double segment_e_ratio(const sim::SegmentSummary& s) { return s.e_zmax_end / s.z_max_trim; }

void constant_wind()
{
    const Config cfg = load_config(std::string(AUTOGYRO_SCENARIO_DIR) + "/constant_wind.cfg");
    sim::RunOptions opt;
    opt.write_file = false;
    const auto s = sim::run_scenario(cfg, opt);
    tally_rows(s, cfg.scenario.u_min);
    const auto& seg = s.segments.front();
    report("3a", s.completed, fmt("constant 8 m/s run completed to t = %.0f s %s", s.t_end, s.fault.c_str()));
    const double dbeta = rad2deg(std::abs(s.beta_final - s.beta_r_final));
    report("3b", s.completed && dbeta < 0.05,
           fmt("final |beta - beta_r| = %.4f deg < 0.05 deg (beta = %.3f deg)", dbeta, rad2deg(s.beta_final)));
    const double dz = std::abs(s.z_final - seg.z_max_trim) / seg.z_max_trim;
    report("3c", s.completed && dz < 0.02,
           fmt("final altitude %.2f m vs trim maximum %.2f m: %.3f%% < 2%%", s.z_final, seg.z_max_trim, 100 * dz));

    // trend: the last 10 minutes stay below 2% and the final value is below the value at the switch
    double last = -1.0, first = -1.0, tail_max = 0.0;
    for (const auto& [t, e] : s.e_zmax) {
        if (first < 0.0) first = e;
        last = e;
        if (t >= cfg.scenario.duration - 600.0) tail_max = std::max(tail_max, e);
    }
    const double z_ref = seg.z_max_trim;
    report("3d", s.completed && last >= 0.0 && tail_max / z_ref < 0.02 && last <= first,
           fmt("e_zmax %.2f m at the switch -> %.3f m at the end; max over last 600 s %.3f m (%.3f%% of altitude)",
               first, last, tail_max, 100 * tail_max / z_ref));
    report("3t", s.wall_seconds < 300.0, fmt("wall time %.1f s < 300 s", s.wall_seconds));
}

void wind_steps()
{
    const Config neg = load_config(std::string(AUTOGYRO_SCENARIO_DIR) + "/wind_steps.cfg");
    const Config pos = load_config(std::string(AUTOGYRO_SCENARIO_DIR) + "/wind_steps_positive.cfg");
    sim::RunOptions opt;
    opt.write_file = false;
    const auto sn = sim::run_scenario(neg, opt);
    const auto sp = sim::run_scenario(pos, opt);
    tally_rows(sn, neg.scenario.u_min);
    tally_rows(sp, pos.scenario.u_min);

    bool ok = sn.completed && sn.segments.size() >= 3;
    std::string note;
    for (std::size_t i = 0; i < sn.segments.size(); ++i) {
        const double r = segment_e_ratio(sn.segments[i]);
        note += r >= 0.0 ? fmt("V=%g: %.3f%%; ", sn.segments[i].V_w, 100 * r)
                         : fmt("V=%g: not reached; ", sn.segments[i].V_w);
        if (!(r >= 0.0 && r < 0.02)) ok = false;
    }
    report("4a", ok, "k1,k2 < 0: e_zmax at each segment end below 2% of altitude: " + note + sn.fault);

    bool cmp = sp.completed && sn.completed && sp.segments.size() == sn.segments.size();
    std::string cnote = fmt("runs completed: k > 0 %s, k < 0 %s; ", sp.completed ? "yes" : "no",
                            sn.completed ? "yes" : "no");
    for (std::size_t i = 1; i < std::min(sn.segments.size(), sp.segments.size()); ++i) {
        const double en = sn.segments[i].e_zmax_end, ep = sp.segments[i].e_zmax_end;
        cnote += fmt("V=%g: %.2f m vs %.2f m; ", sn.segments[i].V_w, ep, en);
        if (!(en >= 0.0 && ep >= 2.0 * en)) cmp = false;
    }
    report("4b", cmp, "k1,k2 > 0 post-step e_zmax at least 2x the k1,k2 < 0 value: " + cnote + sp.fault);
    std::printf("       wind-step wall time %.1f s and %.1f s\n", sn.wall_seconds, sp.wall_seconds);
}

// ---------------------------------------------------------------- physics

void physics_oracles()
{
    const auto t0 = std::chrono::steady_clock::now();
    const PhysicalParams p;

    std::mt19937_64 gen(2024);
    std::uniform_real_distribution<double> ang(0.1, 1.4), frac(0.85, 0.995);
    double worst = 0.0;
    for (int i = 0; i < 5; ++i) {
        const double c = frac(gen) * p.l_t, a = ang(gen);
        const tether::Vec2 top{c * std::cos(a), c * std::sin(a)};
        const auto s = tether::solve_tether(p, {0, 0}, top);
        const auto o = oracle::catenary_oracle({0, 0}, top, p.l_t, p.tether_lin_density, 500, p.g,
                                               p.tether_axial_stiffness);
        const auto si = tether::solve_catenary(p.l_t, p.tether_lin_density * p.g,
                                               std::numeric_limits<double>::infinity(), {0, 0}, top);
        const auto oi = oracle::catenary_oracle({0, 0}, top, p.l_t, p.tether_lin_density, 500, p.g);
        if (!o.converged || !oi.converged) worst = 1.0;
        worst = std::max({worst, std::abs(s.tension_magnitude - o.tension) / o.tension,
                          std::abs(si.tension_magnitude - oi.tension) / oi.tension});
    }
    report("6a", worst < 0.005, fmt("catenary vs 500-segment chain on 5 slack geometries: worst %.2e%% < 0.5%%", 100 * worst));

    const plant::FlappingPlant fp(p);
    std::uniform_real_distribution<double> U(-1, 1);
    double asym = 0.0, min_eig = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 100; ++i) {
        plant::Vec13 q;
        for (int k = 0; k < plant::kDof; ++k) q[k] = 0.3 * U(gen);
        q[0] = 300 + 50 * U(gen);
        q[1] = 900 + 50 * U(gen);
        q[3] = 3 * U(gen);
        q[8] = 3 * U(gen);
        const plant::Mat13 A = fp.mass_matrix(q);
        asym = std::max(asym, (A - A.transpose()).norm() / A.norm());
        Eigen::SelfAdjointEigenSolver<plant::Mat13> es(A);
        min_eig = std::min(min_eig, es.eigenvalues().minCoeff());
    }
    report("6b", asym < 1e-9 && min_eig > 0.0,
           fmt("mass matrix on 100 random states: max asymmetry %.1e, min eigenvalue %.3e", asym, min_eig));

    plant::FlappingOptions fo;
    fo.aero = false;
    fo.tether = false;
    const plant::FlappingPlant ff(p, fo);
    auto st = plant::full_from_reduced(300, 900, 0.15, 0.5, -0.2, 0.02, 22.0, 21.0);
    for (int i : {4, 5, 6, 7, 9, 10, 11, 12}) st.q[i] = 0.02 * (i % 3);
    const double E0 = ff.kinetic_energy(st.q, st.qd) + ff.potential_energy(st.q);
    const double K0 = ff.kinetic_energy(st.q, st.qd);
    double drift = 0.0;
    const double dt = 5e-4;
    for (int n = 0; n < 20000; ++n) {
        st = ff.step(st, n * dt, dt, 0.0, 0.0, 0.0);
        if (n % 100 == 99)
            drift = std::max(drift, std::abs(ff.kinetic_energy(st.q, st.qd) + ff.potential_energy(st.q) - E0));
    }
    report("6c", drift / E0 < 1e-3,
           fmt("force-free flapping tier, 10 s: energy drift %.2e J = %.2e of total, %.2e of kinetic", drift,
               drift / E0, drift / K0));

    using V1 = Eigen::Matrix<double, 1, 1>;
    auto err = [](int n) {
        V1 y;
        y << 1.0;
        const double h = 1.0 / n;
        auto f = [](double, const V1& v) -> V1 { return -2.0 * v; };
        for (int i = 0; i < n; ++i) y = rk4_step(f, i * h, y, h);
        return std::abs(y[0] - std::exp(-2.0));
    };
    const double r1 = err(16) / err(32), r2 = err(32) / err(64);
    report("6d", std::abs(r1 - 16) < 1.0 && std::abs(r2 - 16) < 1.0,
           fmt("RK4 on y' = -2y: error ratios on halving dt %.2f, %.2f (expect 16)", r1, r2));

    const plant::ReducedPlant rp(p);
    double dmax = 0.0;
    for (double V : {8.0, 10.0, 12.0}) {
        for (double b : {6.0, 8.5, 11.0, 14.0}) {
            const auto tp = trim::solve_trim(p, V, deg2rad(b));
            if (!tp.feasible) {
                dmax = 1e9;
                continue;
            }
            auto s = trim::trim_state(tp);
            for (int n = 0; n < 10000; ++n) s = rp.step(s, n * 1e-3, 1e-3, V, 0.0, 0.0);
            dmax = std::max(dmax, rp.derivative(s, V, 0.0, 0.0).norm());
        }
    }
    report("6e", dmax < 1e-3, fmt("12 trim points after 10 s of zero-control integration: max |derivative| %.2e", dmax));
    const double wall = seconds_since(t0);
    report("6t", wall < 60.0, fmt("physics oracle runtime %.1f s < 60 s", wall));
}

}  // namespace

int main()
{
    trim_structure();
    estimator_suite();
    physics_oracles();
    constant_wind();
    wind_steps();
    report("5", g_rows > 0 && g_bad_rows == 0,
           fmt("%ld of %ld telemetry rows across runs satisfy -1 <= u1,u2 <= 0 and u1 u2 = 0", g_rows - g_bad_rows,
               g_rows));
    std::printf("%d check(s) failed\n", g_failed);
    return g_failed == 0 ? 0 : 1;
}
