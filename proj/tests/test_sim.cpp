#include "autogyro/config.hpp"
#include "autogyro/errors.hpp"
#include "autogyro/scenario.hpp"
#include "autogyro/telemetry.hpp"
#include "autogyro/wind.hpp"

#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

using namespace autogyro;
using namespace autogyro::sim;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir()
{
    const fs::path d = fs::temp_directory_path() / "autogyro_test_sim";
    fs::create_directories(d);
    return d;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(AUTOGYRO_CLI) + " " + args + " > /dev/null 2>&1";
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream f(p);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Config short_run(double duration, double t_switch)
{
    Config c;
    c.scenario.duration = duration;
    c.scenario.t_switch = t_switch;
    c.scenario.wind.kind = WindKind::Constant;
    c.scenario.wind.constant = 8.0;
    c.scenario.output_path.clear();
    return c;
}

}  // namespace

TEST_CASE("wind: constant and steps")
{
    WindSpec s;
    s.kind = WindKind::Constant;
    s.constant = 9.0;
    CHECK(WindProfile(s).at(123.0) == 9.0);
    s.kind = WindKind::Steps;
    s.steps = {{0, 8}, {100, 10}, {200, 12}};
    const WindProfile w(s);
    CHECK(w.at(0.0) == 8.0);
    CHECK(w.at(99.999) == 8.0);
    CHECK(w.at(100.0) == 10.0);
    CHECK(w.at(1e4) == 12.0);
    CHECK(w.segments().size() == 3);
    CHECK_THROWS_AS(w.at(-1.0), DomainError);
}

TEST_CASE("wind: file interpolation and hold past the end")
{
    const fs::path f = scratch_dir() / "wind.csv";
    {
        std::ofstream o(f);
        o << "time_s,wind_mps\n0,8\n10,10\n20,9\n";
    }
    WindSpec s;
    s.kind = WindKind::File;
    s.file = f.string();
    const WindProfile w(s);
    CHECK(w.at(5.0) == doctest::Approx(9.0));
    CHECK(w.at(15.0) == doctest::Approx(9.5));
    CHECK(w.at(30.0) == 9.0);
    CHECK(w.warned_past_end());

    const fs::path bad = scratch_dir() / "bad.csv";
    {
        std::ofstream o(bad);
        o << "0,8\n5,9\n5,10\n";
    }
    CHECK_THROWS_AS(read_wind_file(bad.string()), ConfigError);
    CHECK_THROWS_AS(read_wind_file((scratch_dir() / "missing.csv").string()), ConfigError);
}

TEST_CASE("wind: gusts are reproducible from the seed and have the requested spread")
{
    WindSpec s;
    s.kind = WindKind::Gust;
    s.gust_mean = 8.0;
    s.gust_intensity = 0.1;
    s.gust_corr_time = 5.0;
    s.seed = 42;
    const WindProfile a(s), b(s);
    double sum = 0, sum2 = 0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double t = i * 0.1;
        const double v = a.at(t);
        CHECK(v == b.at(t));
        sum += v;
        sum2 += v * v;
    }
    const double mean = sum / n;
    const double sd = std::sqrt(sum2 / n - mean * mean);
    CHECK(mean == doctest::Approx(8.0).epsilon(0.02));
    CHECK(sd == doctest::Approx(0.8).epsilon(0.1));
    s.seed = 43;
    const WindProfile c(s);
    CHECK(c.at(50.0) != a.at(50.0));
}

TEST_CASE("telemetry format")
{
    CHECK(std::string(telemetry_header())
          == "t,x_c,z_c,beta,Omega1,Omega2,u1,u2,T1,T2,tether_tension,mu,beta_r,a_hat,b_hat,c_hat,e_zh,V_w");
    TelemetryRecord r;
    r.t = 1.0;
    r.z_c = 944.010703123;
    r.u1 = -0.25;
    const std::string row = format_record(r);
    CHECK(row.rfind("1,0,944.010703,", 0) == 0);
    CHECK(std::count(row.begin(), row.end(), ',') == 17);
}

TEST_CASE("row checks")
{
    TelemetryRecord r;
    r.Omega1 = r.Omega2 = 20.0;
    CHECK(record_ok(r, -1.0));
    r.u1 = -0.5;
    CHECK(record_ok(r, -1.0));
    r.u2 = -0.1;
    CHECK_FALSE(record_ok(r, -1.0));
    r.u2 = 0.0;
    r.u1 = -1.2;
    CHECK_FALSE(record_ok(r, -1.0));
    r.u1 = 0.1;
    CHECK_FALSE(record_ok(r, -1.0));
}

TEST_CASE("short adaptive run holds trim before the switch and keeps the invariants after")
{
    Config c = short_run(40.0, 20.0);
    c.scenario.estimator.a_init = 5000.0;
    const auto s = run_scenario(c, RunOptions{false, true});
    REQUIRE(s.completed);
    CHECK(s.violations == 0);
    CHECK(s.rows == 41);
    CHECK(s.records.front().z_c == doctest::Approx(s.records[19].z_c).epsilon(1e-6));
    CHECK(s.records[10].beta_r == doctest::Approx(deg2rad(8.5)));
    for (const auto& r : s.records) CHECK(record_ok(r, -1.0));
    CHECK(s.segments.size() == 1);
    CHECK(s.segments[0].z_max_trim > 940.0);
}

TEST_CASE("runs are bit-for-bit deterministic")
{
    Config c = short_run(15.0, 5.0);
    c.scenario.wind.kind = WindKind::Gust;
    c.scenario.wind.gust_mean = 8.0;
    c.scenario.wind.seed = 3;
    const auto a = run_scenario(c, RunOptions{false, true});
    const auto b = run_scenario(c, RunOptions{false, true});
    REQUIRE(a.records.size() == b.records.size());
    for (std::size_t i = 0; i < a.records.size(); ++i) CHECK(format_record(a.records[i]) == format_record(b.records[i]));
}

TEST_CASE("legacy mode starts at the current pitch and respects the torque limits")
{
    Config c = short_run(60.0, 1e9);
    c.scenario.mode = ControlMode::Legacy;
    c.scenario.z_d = 940.0;
    const auto s = run_scenario(c, RunOptions{false, true});
    REQUIRE(s.completed);
    CHECK(s.violations == 0);
    CHECK(std::abs(s.records.front().beta_r - deg2rad(8.5)) < 1e-3);
    CHECK(s.records[5].beta_r < deg2rad(8.5));
    CHECK(s.beta_r_final == s.records.back().beta_r);
}

TEST_CASE("flapping tier runs a short scenario")
{
    Config c = short_run(1.0, 100.0);
    c.scenario.plant_tier = PlantTier::Flapping;
    c.scenario.dt = 5e-4;
    c.scenario.telemetry_interval = 0.1;
    const auto s = run_scenario(c, RunOptions{false, true});
    REQUIRE(s.completed);
    CHECK(s.violations == 0);
    CHECK(std::abs(s.z_final - s.records.front().z_c) < 1.0);
}

TEST_CASE("telemetry file has a header and one row per sample")
{
    Config c = short_run(5.0, 100.0);
    c.scenario.output_path = (scratch_dir() / "tele.csv").string();
    const auto s = run_scenario(c, RunOptions{true, false});
    REQUIRE(s.completed);
    const std::string txt = slurp(c.scenario.output_path);
    CHECK(std::count(txt.begin(), txt.end(), '\n') == 7);
    CHECK(txt.rfind(telemetry_header(), 0) == 0);
}

TEST_CASE("command line exit codes")
{
    const fs::path d = scratch_dir();
    CHECK(run_cli("") == 2);
    CHECK(run_cli("no-such-command") == 2);
    CHECK(run_cli("run") == 2);
    CHECK(run_cli("run " + (d / "absent.cfg").string()) == 1);
    CHECK(run_cli("estimator-selftest") == 0);
    CHECK(run_cli("catenary-check --cases 2 --segments 200") == 0);

    const fs::path out = d / "trim.csv";
    CHECK(run_cli("trim --winds 8 --beta 8:1:10 -o " + out.string()) == 0);
    const std::string csv = slurp(out);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
    CHECK(run_cli("trim --winds 8 --beta 8-1-10") == 1);

    const fs::path cfg = d / "bad.cfg";
    {
        std::ofstream o(cfg);
        o << "duration = -5\n";
    }
    CHECK(run_cli("run " + cfg.string()) == 1);

    const fs::path good = d / "short.cfg";
    {
        std::ofstream o(good);
        o << "wind.constant = 8\nduration = 3\nt_switch = 1\n";
    }
    const fs::path tele = d / "short.csv";
    CHECK(run_cli("run " + good.string() + " -o " + tele.string()) == 0);
    CHECK(fs::exists(tele));
}

TEST_CASE("shipped scenario files parse")
{
    for (const auto& e : fs::directory_iterator(AUTOGYRO_SCENARIO_DIR)) {
        if (e.path().extension() != ".cfg") continue;
        CAPTURE(e.path().string());
        CHECK_NOTHROW(load_config(e.path().string()));
    }
}
