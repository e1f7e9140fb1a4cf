#include "autogyro/errors.hpp"
#include "autogyro/reduced_plant.hpp"
#include "autogyro/rk4.hpp"
#include "autogyro/trim.hpp"

#include <doctest.h>

#include <Eigen/Core>

#include <cmath>

using namespace autogyro;
using namespace autogyro::plant;

namespace {

trim::TrimPoint trim8()
{
    static const trim::TrimPoint tp = trim::solve_trim(PhysicalParams{}, 8.0, deg2rad(8.5));
    return tp;
}

}  // namespace

TEST_CASE("rk4 is fourth order on y' = lambda y")
{
    using V = Eigen::Matrix<double, 1, 1>;
    const double lambda = -1.3;
    auto f = [&](double, const V& y) -> V { return lambda * y; };
    auto err = [&](int n) {
        V y;
        y << 1.0;
        const double h = 2.0 / n;
        for (int i = 0; i < n; ++i) y = rk4_step(f, i * h, y, h);
        return std::abs(y[0] - std::exp(2.0 * lambda));
    };
    const double r1 = err(20) / err(40);
    const double r2 = err(40) / err(80);
    CHECK(r1 == doctest::Approx(16.0).epsilon(0.05));
    CHECK(r2 == doctest::Approx(16.0).epsilon(0.05));
}

TEST_CASE("rk4 leaves a zero-derivative state unchanged")
{
    using V = Eigen::Matrix<double, 3, 1>;
    V y(1.0, -2.0, 3.5);
    auto f = [](double, const V&) -> V { return V::Zero(); };
    CHECK(rk4_step(f, 0.0, y, 0.1) == y);
}

TEST_CASE("equal braking on a symmetric state gives no pitch acceleration")
{
    const ReducedPlant pl(PhysicalParams{});
    ReducedState s = trim::trim_state(trim8());
    for (double u : {0.0, -0.3, -1.0}) {
        const auto ev = pl.evaluate(s, 8.0, u, u);
        CHECK(std::abs(ev.derivative[BETAD]) < 1e-9);
        CHECK(ev.rotor[0].loads.thrust == doctest::Approx(ev.rotor[1].loads.thrust).epsilon(1e-12));
    }
}

TEST_CASE("braking enters the rotor-speed equation additively")
{
    const PhysicalParams p;
    // separate instances so both evaluations start the inflow solve from the same guess
    const ReducedPlant pa(p), pb(p);
    const ReducedState s = trim::trim_state(trim8());
    const auto a = pa.derivative(s, 8.0, 0.0, 0.0);
    const auto b = pb.derivative(s, 8.0, -0.5, 0.0);
    const double I_R = derived_inertias(p).I_R;
    CHECK(b[OMEGA1] - a[OMEGA1] == doctest::Approx(-0.5 / I_R).epsilon(1e-9));
    CHECK(b[OMEGA2] == a[OMEGA2]);
}

TEST_CASE("braking rotor 1 slows it and pitches the frame nose down")
{
    const ReducedPlant pl(PhysicalParams{});
    ReducedState s = trim::trim_state(trim8());
    const auto d0 = pl.derivative(s, 8.0, -1.0, 0.0);
    CHECK(d0[OMEGA1] < d0[OMEGA2]);
    const double beta0 = s[BETA];
    for (int i = 0; i < 2000; ++i) s = pl.step(s, i * 1e-3, 1e-3, 8.0, -1.0, 0.0);
    const auto ev = pl.evaluate(s, 8.0, -1.0, 0.0);
    CHECK(s[OMEGA1] < s[OMEGA2]);
    CHECK(ev.rotor[0].loads.thrust < ev.rotor[1].loads.thrust);
    CHECK(ev.derivative[BETAD] < 0.0);
    CHECK(s[BETA] < beta0);
}

TEST_CASE("without air and with a weightless slack tether the frame falls freely")
{
    PhysicalParams p;
    p.rho_air = 0.0;
    p.tether_lin_density = 0.0;
    const ReducedPlant pl(p);
    ReducedState s = ReducedState::Zero();
    s[X] = 200.0;
    s[Z] = 500.0;
    s[BETA] = 0.1;
    s[OMEGA1] = 20.0;
    s[OMEGA2] = 22.0;
    const auto d = pl.derivative(s, 8.0, 0.0, 0.0);
    CHECK(d[ZD] == doctest::Approx(-p.g).epsilon(1e-14));
    CHECK(d[XD] == 0.0);
    CHECK(d[BETAD] == 0.0);
    CHECK(d[OMEGA1] == 0.0);
    CHECK(d[OMEGA2] == 0.0);
}

TEST_CASE("trim state is a fixed point for 100 s without control")
{
    const ReducedPlant pl(PhysicalParams{});
    const ReducedState s0 = trim::trim_state(trim8());
    ReducedState s = s0;
    const double dt = 1e-3;
    double worst = 0.0;
    for (int i = 0; i < 100000; ++i) {
        s = pl.step(s, i * dt, dt, 8.0, 0.0, 0.0);
        if (i % 1000 == 999) {
            for (int k : {X, Z, BETA, OMEGA1, OMEGA2})
                worst = std::max(worst, std::abs(s[k] - s0[k]) / std::abs(s0[k]));
        }
    }
    CHECK(worst < 1e-3);
}

TEST_CASE("the trim derivative is small")
{
    const ReducedPlant pl(PhysicalParams{});
    const auto d = pl.derivative(trim::trim_state(trim8()), 8.0, 0.0, 0.0);
    CHECK(std::abs(d[XD]) < 1e-6);
    CHECK(std::abs(d[ZD]) < 1e-6);
    CHECK(std::abs(d[BETAD]) < 1e-9);
    CHECK(std::abs(d[OMEGA1]) < 1e-6);
}

TEST_CASE("stepping is deterministic")
{
    auto run = [] {
        const ReducedPlant pl(PhysicalParams{});
        ReducedState s = trim::trim_state(trim8());
        for (int i = 0; i < 3000; ++i) s = pl.step(s, i * 1e-3, 1e-3, 8.0 + 0.5 * std::sin(i * 1e-3), -0.2, 0.0);
        return s;
    };
    const ReducedState a = run();
    const ReducedState b = run();
    for (int i = 0; i < 8; ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("the free function matches the class")
{
    const PhysicalParams p;
    const ReducedPlant pl(p);
    ReducedState s = trim::trim_state(trim8());
    s[BETAD] = 0.01;
    s[ZD] = -0.3;
    const auto a = pl.derivative(s, 9.0, -0.4, 0.0);
    const auto b = reduced_dynamics(s, 9.0, -0.4, 0.0, p);
    CHECK((a - b).norm() < 1e-9 * a.norm());
}

TEST_CASE("rotor stall-out and ground contact are faults")
{
    const ReducedPlant pl(PhysicalParams{});
    ReducedState s = trim::trim_state(trim8());
    s[OMEGA1] = 0.05;
    CHECK_THROWS_AS(pl.step(s, 1.0, 1e-3, 8.0, 0.0, 0.0), SimulationFault);
    s = trim::trim_state(trim8());
    s[Z] = -1.0;
    CHECK_THROWS_AS(pl.step(s, 1.0, 1e-3, 8.0, 0.0, 0.0), SimulationFault);
    try {
        s[Z] = -1.0;
        pl.step(s, 12.5, 1e-3, 8.0, 0.0, 0.0);
    } catch (const SimulationFault& f) {
        CHECK(f.time() == 12.5);
    }
}

TEST_CASE("pitch rate damps through hub inflow")
{
    const ReducedPlant pl(PhysicalParams{});
    ReducedState s = trim::trim_state(trim8());
    s[BETAD] = 0.05;
    CHECK(pl.derivative(s, 8.0, 0.0, 0.0)[BETAD] < 0.0);
    s[BETAD] = -0.05;
    CHECK(pl.derivative(s, 8.0, 0.0, 0.0)[BETAD] > 0.0);
}
