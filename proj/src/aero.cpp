#include "autogyro/aero.hpp"

#include "autogyro/errors.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace autogyro::aero {

double tip_speed_ratio(double V_w, double beta, double Omega, double R)
{
    if (!(Omega > 0.0)) throw DomainError("tip_speed_ratio: Omega must be > 0, got " + std::to_string(Omega));
    return V_w * std::cos(beta) / (Omega * R);
}

std::vector<double> radial_stations(const PhysicalParams& p)
{
    std::vector<double> r(kRadialElements);
    const double dr = (p.R - p.r_h) / kRadialElements;
    for (int k = 0; k < kRadialElements; ++k) r[k] = p.r_h + (k + 0.5) * dr;
    return r;
}

RotorModel::RotorModel(const PhysicalParams& p, int n_psi)
    : p_(p), n_psi_(n_psi), disc_area_(std::numbers::pi * p.R * p.R)
{
    if (n_psi < 1) throw DomainError("RotorModel: azimuth count must be positive");
    const auto r = radial_stations(p);
    const double dr = (p.R - p.r_h) / kRadialElements;
    const double q = 0.5 * p.rho_air * p.chord * dr;
    const std::size_t n = static_cast<std::size_t>(n_psi) * kRadialElements;
    radius_.reserve(n);
    sin_psi_.reserve(n);
    q_.assign(n, q);
    for (int m = 0; m < n_psi; ++m) {
        const double s = std::sin(2.0 * std::numbers::pi * m / n_psi);
        for (int k = 0; k < kRadialElements; ++k) {
            radius_.push_back(r[k]);
            sin_psi_.push_back(s);
        }
    }
}

RotorLoads RotorModel::loads_at(double V_axial, double V_inplane, double Omega, double v_i) const
{
    const simd::RotorGridView grid{radius_.data(), sin_psi_.data(), q_.data(), radius_.size()};
    const simd::SectionParams sp{p_.theta0, p_.a0, p_.cd0};
    const auto s = simd::active_kernels().rotor_sums(grid, sp, Omega, V_inplane, V_axial - v_i);
    const double scale = static_cast<double>(kBlades) / n_psi_;
    RotorLoads out;
    out.thrust = s.thrust * scale;
    out.torque_aero = s.torque * scale;
    out.h_force = s.h_force * scale;
    out.inflow.v_i = v_i;
    out.inflow.mu = V_inplane / (Omega * p_.R);
    out.inflow.lambda = (V_axial - v_i) / (Omega * p_.R);
    return out;
}

double RotorModel::momentum_inflow(double thrust, double V_axial, double V_inplane, double v_i) const
{
    if (p_.rho_air == 0.0) return 0.0;
    const double du = V_axial - v_i;
    const double speed = std::max(std::sqrt(V_inplane * V_inplane + du * du), 1e-9);
    return thrust / (2.0 * p_.rho_air * disc_area_ * speed);
}

RotorInflowState RotorModel::iterate(double V_axial, double V_inplane, double Omega, double v0) const
{
    if (!(Omega > 0.0)) throw DomainError("solve_inflow: Omega must be > 0, got " + std::to_string(Omega));
    RotorInflowState st;
    double v = v0;
    for (int it = 1; it <= kMaxInflowIterations; ++it) {
        const double T = loads_at(V_axial, V_inplane, Omega, v).thrust;
        const double next = 0.5 * v + 0.5 * momentum_inflow(T, V_axial, V_inplane, v);
        if (!std::isfinite(next))
            throw NumericError("solve_inflow: non-finite induced velocity at iteration " + std::to_string(it));
        const double dv = std::abs(next - v);
        v = next;
        st.iterations = it;
        if (dv < 1e-8) {
            st.converged = true;
            break;
        }
    }
    st.v_i = v;
    st.mu = V_inplane / (Omega * p_.R);
    st.lambda = (V_axial - v) / (Omega * p_.R);
    return st;
}

RotorInflowState RotorModel::solve_inflow(double V_axial, double V_inplane, double Omega,
                                          double thrust_guess) const
{
    return iterate(V_axial, V_inplane, Omega, momentum_inflow(thrust_guess, V_axial, V_inplane, 0.0));
}

RotorLoads RotorModel::loads(double V_axial, double V_inplane, double Omega, const double* v_i_guess) const
{
    RotorInflowState st;
    if (v_i_guess) {
        st = iterate(V_axial, V_inplane, Omega, *v_i_guess);
    } else {
        // seed from the thrust with no induced velocity
        const double T0 = loads_at(V_axial, V_inplane, Omega, 0.0).thrust;
        st = solve_inflow(V_axial, V_inplane, Omega, T0);
    }
    RotorLoads out = loads_at(V_axial, V_inplane, Omega, st.v_i);
    out.inflow = st;
    return out;
}

RotorInflowState solve_inflow(const PhysicalParams& p, double V_axial, double V_inplane,
                              double Omega, double thrust_guess)
{
    return RotorModel(p).solve_inflow(V_axial, V_inplane, Omega, thrust_guess);
}

RotorLoads rotor_loads(const PhysicalParams& p, double V_axial, double V_inplane, double Omega)
{
    return RotorModel(p).loads(V_axial, V_inplane, Omega);
}

}  // namespace autogyro::aero
