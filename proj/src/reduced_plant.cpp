#include "autogyro/reduced_plant.hpp"

#include "autogyro/errors.hpp"
#include "autogyro/rk4.hpp"

#include <cmath>
#include <sstream>

namespace autogyro::plant {

ReducedPlant::ReducedPlant(const PhysicalParams& p, int n_psi)
    : p_(p), rotor_(p, n_psi), in_(derived_inertias(p))
{
}

ReducedEval ReducedPlant::evaluate(const ReducedState& s, double wind, double u1, double u2, double t) const
{
    for (int i = 0; i < 8; ++i) {
        if (!std::isfinite(s[i])) throw SimulationFault("non-finite plant state", t);
    }
    for (int i : {OMEGA1, OMEGA2}) {
        if (s[i] < kOmegaFloor) {
            std::ostringstream os;
            os << "rotor " << (i - OMEGA1 + 1) << " stall-out: Omega = " << s[i] << " rad/s at t = " << t;
            throw SimulationFault(os.str(), t);
        }
    }
    if (!(s[Z] > 0.0)) throw SimulationFault("frame reached the ground", t);

    const double cb = std::cos(s[BETA]);
    const double sb = std::sin(s[BETA]);
    const double xb[2] = {cb, -sb};
    const double nn[2] = {sb, cb};
    const double half = 0.5 * p_.l;
    const double u[2] = {u1, u2};

    ReducedEval ev;
    double fx = 0.0, fz = 0.0, my = 0.0;
    for (int i = 0; i < 2; ++i) {
        const double side = (i == 0) ? -1.0 : 1.0;  // offset = side * (l/2) x_b
        const double rx = side * half * xb[0];
        const double rz = side * half * xb[1];
        const double vhx = s[XD] + s[BETAD] * rz;
        const double vhz = s[ZD] - s[BETAD] * rx;
        const double ax = wind - vhx;
        const double az = -vhz;
        const double v_axial = ax * nn[0] + az * nn[1];
        const double v_plane = ax * xb[0] + az * xb[1];
        const double omega = s[OMEGA1 + i];

        const double* guess = have_cache_ ? &vi_cache_[i] : nullptr;
        auto& rs = ev.rotor[i];
        rs.loads = rotor_.loads(v_axial, std::abs(v_plane), omega, guess);
        rs.v_axial = v_axial;
        rs.v_inplane = std::abs(v_plane);
        vi_cache_[i] = rs.loads.inflow.v_i;

        const double hs = v_plane > 0.0 ? rs.loads.h_force : (v_plane < 0.0 ? -rs.loads.h_force : 0.0);
        rs.force_x = rs.loads.thrust * nn[0] + hs * xb[0];
        rs.force_z = rs.loads.thrust * nn[1] + hs * xb[1];
        fx += rs.force_x;
        fz += rs.force_z;
        my += rz * rs.force_x - rx * rs.force_z;
        ev.derivative[OMEGA1 + i] = (rs.loads.torque_aero + u[i]) / in_.I_R;
    }
    have_cache_ = true;

    ev.tether = tether::solve_tether(p_, {0.0, 0.0}, {s[X], s[Z]});
    ev.tether_force_x = ev.tether.tension_at_top.x;
    ev.tether_force_z = ev.tether.tension_at_top.z;
    if (p_.tether_damping > 0.0) {
        const double chord = std::hypot(s[X], s[Z]);
        const double ex = s[X] / chord, ez = s[Z] / chord;
        const double vr = s[XD] * ex + s[ZD] * ez;
        ev.tether_force_x -= p_.tether_damping * vr * ex;
        ev.tether_force_z -= p_.tether_damping * vr * ez;
    }
    fx += ev.tether_force_x;
    fz += ev.tether_force_z;

    ev.derivative[X] = s[XD];
    ev.derivative[Z] = s[ZD];
    ev.derivative[BETA] = s[BETAD];
    ev.derivative[XD] = fx / in_.M_tot;
    ev.derivative[ZD] = fz / in_.M_tot - p_.g;
    ev.derivative[BETAD] = my / in_.I_beta;
    for (int i = 0; i < 8; ++i) {
        if (!std::isfinite(ev.derivative[i])) throw SimulationFault("non-finite state derivative", t);
    }
    return ev;
}

ReducedState ReducedPlant::step(const ReducedState& s, double t, double dt, double wind, double u1, double u2) const
{
    auto f = [&](double tt, const ReducedState& y) { return derivative(y, wind, u1, u2, tt); };
    return rk4_step(f, t, s, dt);
}

ReducedState reduced_dynamics(const ReducedState& s, double wind, double u1, double u2, const PhysicalParams& p)
{
    return ReducedPlant(p).derivative(s, wind, u1, u2);
}

}  // namespace autogyro::plant
