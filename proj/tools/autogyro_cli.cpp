// Command-line front end: scenario runs, trim sweeps and self-checks.
#include "autogyro/chain_oracle.hpp"
#include "autogyro/config.hpp"
#include "autogyro/errors.hpp"
#include "autogyro/estimator.hpp"
#include "autogyro/scenario.hpp"
#include "autogyro/tether.hpp"
#include "autogyro/trim.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

using namespace autogyro;

namespace {

std::vector<double> parse_list(const std::string& s)
{
    std::vector<double> v;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
    if (v.empty()) throw ConfigError("empty list: " + s);
    return v;
}

std::vector<double> parse_range_deg(const std::string& s)
{
    double lo, step, hi;
    char c1, c2;
    std::istringstream in(s);
    if (!(in >> lo >> c1 >> step >> c2 >> hi) || c1 != ':' || c2 != ':')
        throw ConfigError("beta range must be lo:step:hi in degrees, got " + s);
    return trim::beta_grid(lo, step, hi);
}

int cmd_run(const std::string& path, const std::string& output)
{
    Config cfg = load_config(path);
    if (!output.empty()) cfg.scenario.output_path = output;
    sim::RunOptions opt;
    opt.keep_records = false;
    const auto sum = sim::run_scenario(cfg, opt);
    std::printf("completed: %s\n", sum.completed ? "yes" : "no");
    if (!sum.fault.empty()) std::printf("fault: %s\n", sum.fault.c_str());
    std::printf("t_end: %.9g s  steps: %ld  rows: %ld  wall: %.3g s\n", sum.t_end, sum.steps, sum.rows,
                sum.wall_seconds);
    std::printf("final: z_c = %.9g m  beta = %.6g deg  beta_r = %.6g deg\n", sum.z_final, rad2deg(sum.beta_final),
                rad2deg(sum.beta_r_final));
    for (const auto& s : sum.segments) {
        std::printf("segment [%g, %g) V_w = %g: trim z_max = %.9g m at %.4g deg, e_zmax(end) = %.6g m\n",
                    s.t_start, s.t_end, s.V_w, s.z_max_trim, rad2deg(s.beta_star), s.e_zmax_end);
    }
    std::printf("invariant violations: %ld\n", sum.violations);
    return (sum.completed && sum.violations == 0) ? 0 : 1;
}

int cmd_trim(const std::string& path, const std::string& winds, const std::string& betas, const std::string& output)
{
    const PhysicalParams p = path.empty() ? PhysicalParams{} : load_config(path).physical;
    const auto res = trim::sweep(p, parse_list(winds), parse_range_deg(betas));
    if (output.empty()) {
        trim::write_csv(std::cout, res.points);
    } else {
        std::ofstream f(output);
        if (!f) throw ConfigError("cannot open output: " + output);
        trim::write_csv(f, res.points);
    }
    for (const auto& v : res.vertices) {
        std::fprintf(stderr, "V_w = %g: vertex beta* = %.4g deg, z_max = %.6g m, interior maxima = %d, local R^2 = %.4f\n",
                     v.V_w, rad2deg(v.beta_star), v.z_max, v.interior_maxima, v.r2_local);
    }
    return 0;
}

int cmd_selftest()
{
    const GainSet g;
    const EstimatorOptions opt;
    const auto h = estimation::run_synthetic_harness(40.0, 14.0, 850.0, 200, estimation::gains_from(g), opt);
    const double e = h.final_state.e_zh;
    std::printf("synthetic quadratic (40, 14, 850): final e_zh = %.3e m after %zu steps (tolerance reached at step %d)\n",
                e, h.e_zh.size(), h.steps_to_tolerance);
    std::printf("estimates: a_hat = %.6g, b_hat = %.6g, c_hat = %.6g, beta_zmax = %.4g deg\n", h.final_state.a_hat,
                h.final_state.b_hat, h.final_state.c_hat, rad2deg(h.final_state.beta_zmax));
    return std::abs(e) < 1e-3 ? 0 : 1;
}

int cmd_catenary(int cases, int segments, unsigned seed)
{
    const PhysicalParams p;
    std::mt19937 gen(seed);
    std::uniform_real_distribution<double> elev(0.2, 1.3), frac(0.85, 0.995);
    int fails = 0;
    for (int i = 0; i < cases; ++i) {
        const double chord = frac(gen) * p.l_t;
        const double a = elev(gen);
        const tether::Vec2 top{chord * std::cos(a), chord * std::sin(a)};
        const double w = p.tether_lin_density * p.g;
        const auto rigid = tether::solve_catenary(p.l_t, w, INFINITY, {0, 0}, top);
        const auto rigid_o = oracle::catenary_oracle({0, 0}, top, p.l_t, p.tether_lin_density, segments, p.g);
        const auto el = tether::solve_tether(p, {0, 0}, top);
        const auto el_o = oracle::catenary_oracle({0, 0}, top, p.l_t, p.tether_lin_density, segments, p.g,
                                                  p.tether_axial_stiffness);
        const double d1 = std::abs(rigid.tension_magnitude - rigid_o.tension) / rigid_o.tension;
        const double d2 = std::abs(el.tension_magnitude - el_o.tension) / el_o.tension;
        const bool ok = d1 < 5e-3 && d2 < 5e-3 && rigid_o.converged && el_o.converged;
        if (!ok) ++fails;
        std::printf("case %d: attach (%.2f, %.2f) chord %.2f m | inextensible %.6g vs chain %.6g (%.2e) | "
                    "elastic %.6g vs chain %.6g (%.2e) %s\n",
                    i + 1, top.x, top.z, chord, rigid.tension_magnitude, rigid_o.tension, d1, el.tension_magnitude,
                    el_o.tension, d2, ok ? "ok" : "FAIL");
    }
    return fails == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Tethered dual-rotor autogyro simulator"};
    app.require_subcommand(1);

    std::string scenario, run_out;
    auto* run = app.add_subcommand("run", "Run a scenario file");
    run->add_option("scenario", scenario, "Scenario file")->required();
    run->add_option("-o,--output", run_out, "Telemetry CSV (overrides output_path)");

    std::string trim_cfg, winds = "8,10,12", betas = "3:0.25:20", trim_out;
    auto* tr = app.add_subcommand("trim", "Equilibrium sweep over wind speeds and pitch angles");
    tr->add_option("params", trim_cfg, "Optional config file for physical parameters");
    tr->add_option("--winds", winds, "Comma-separated wind speeds (m/s)");
    tr->add_option("--beta", betas, "Pitch grid lo:step:hi in degrees");
    tr->add_option("-o,--output", trim_out, "CSV path (default stdout)");

    auto* st = app.add_subcommand("estimator-selftest", "Synthetic-quadratic estimator check");

    int cases = 5, segments = 500;
    unsigned seed = 7;
    auto* cat = app.add_subcommand("catenary-check", "Compare the tether solver with a discrete chain");
    cat->add_option("--cases", cases, "Random slack geometries");
    cat->add_option("--segments", segments, "Chain segments");
    cat->add_option("--seed", seed, "Random seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*run) return cmd_run(scenario, run_out);
        if (*tr) return cmd_trim(trim_cfg, winds, betas, trim_out);
        if (*st) return cmd_selftest();
        if (*cat) return cmd_catenary(cases, segments, seed);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
