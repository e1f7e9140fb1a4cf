#include "autogyro/tether.hpp"

#include "autogyro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace autogyro::tether {

namespace {

struct Residual {
    double fx, fz;
    double j11, j12, j21, j22;  // d(fx,fz)/d(H,Va)
};

// Endpoint of an elastic catenary parameterised by H and the anchor-end
// vertical force component Va, with Jacobian.
Residual endpoint(double L, double w, double inv_ea, double H, double Va)
{
    const double Vt = Va + w * L;
    const double Ta = std::hypot(H, Va);
    const double Tt = std::hypot(H, Vt);
    const double ash = std::asinh(Vt / H) - std::asinh(Va / H);
    Residual r{};
    r.fx = H / w * ash + H * L * inv_ea;
    r.fz = (Tt - Ta) / w + (Va * L + 0.5 * w * L * L) * inv_ea;
    r.j11 = ash / w - (Vt / Tt - Va / Ta) / w + L * inv_ea;
    r.j12 = H / w * (1.0 / Tt - 1.0 / Ta);
    r.j21 = (H / Tt - H / Ta) / w;
    r.j22 = (Vt / Tt - Va / Ta) / w + L * inv_ea;
    return r;
}

double sag_of(double L, double w, double inv_ea, double H, double Va, double dx, double dz)
{
    // lowest point relative to the chord is where the slope matches the chord slope
    const double s = std::clamp((H * dz / dx - Va) / w, 0.0, L);
    const double Vs = Va + w * s;
    const double x = H / w * (std::asinh(Vs / H) - std::asinh(Va / H)) + H * s * inv_ea;
    const double z = (std::hypot(H, Vs) - std::hypot(H, Va)) / w + (Va * s + 0.5 * w * s * s) * inv_ea;
    return std::max(0.0, dz / dx * x - z);
}

TetherSolution weightless(double L, double EA, double chord, double ux, double uz)
{
    TetherSolution sol;
    const double T = (chord > L && std::isfinite(EA)) ? EA * (chord - L) / L : 0.0;
    if (chord > L && !std::isfinite(EA))
        throw DomainError("solve_tether: inextensible weightless line cannot span a chord longer than its length");
    sol.tension_magnitude = T;
    sol.tension_at_top = {-T * ux, -T * uz};
    sol.tension_at_anchor = {T * ux, T * uz};
    sol.horizontal_component = T * std::abs(ux);
    return sol;
}

TetherSolution vertical(double L, double w, double EA, double dz)
{
    TetherSolution sol;
    const double inv_ea = std::isfinite(EA) ? 1.0 / EA : 0.0;
    // straight hanging line with bottom tension Va >= 0
    double Va = inv_ea > 0.0 ? (dz - L - 0.5 * w * L * L * inv_ea) / (L * inv_ea) : -1.0;
    double Vt;
    if (Va >= 0.0) {
        Vt = Va + w * L;
    } else {
        // line folds back to the anchor; the hanging part from the top carries it
        Vt = 0.5 * w * (L + dz);
        Va = 0.0;
    }
    sol.tension_magnitude = Vt;
    sol.tension_at_top = {0.0, -Vt};
    sol.tension_at_anchor = {0.0, Va};
    return sol;
}

}  // namespace

Vec2 catenary_endpoint(double L, double w, double EA, double H, double V_top)
{
    const double inv_ea = std::isfinite(EA) ? 1.0 / EA : 0.0;
    if (w == 0.0) {
        const double T = std::hypot(H, V_top);
        const double s = L * (1.0 + T * inv_ea) / T;
        return {H * s, V_top * s};
    }
    const Residual r = endpoint(L, w, inv_ea, H, V_top - w * L);
    return {r.fx, r.fz};
}

TetherSolution solve_catenary(double L, double w, double EA, Vec2 anchor, Vec2 attach)
{
    const double dx_signed = attach.x - anchor.x;
    const double dz = attach.z - anchor.z;
    const double chord = std::hypot(dx_signed, dz);
    if (!(chord > 0.0)) throw DomainError("solve_tether: attach point coincides with anchor");
    if (!(L > 0.0) || !(w >= 0.0) || !(EA > 0.0)) throw DomainError("solve_tether: invalid line properties");

    const double dir = dx_signed < 0.0 ? -1.0 : 1.0;
    const double dx = std::abs(dx_signed);
    const Regime regime = chord >= L ? Regime::TautElastic : Regime::SlackCatenary;

    TetherSolution sol;
    if (w == 0.0) {
        sol = weightless(L, EA, chord, dx_signed / chord, dz / chord);
        sol.regime = regime;
        return sol;
    }
    if (dx <= 1e-12 * chord) {
        sol = vertical(L, w, EA, dz);
        sol.regime = regime;
        return sol;
    }
    if (!std::isfinite(EA) && chord >= L)
        throw DomainError("solve_tether: inextensible line cannot span a chord >= its length");

    const double inv_ea = std::isfinite(EA) ? 1.0 / EA : 0.0;

    // Initial guess: parabolic sag for slack lines, elastic stretch when taut.
    const double ratio = (L * L - dz * dz) / (dx * dx);
    const double lam = ratio > 1.0 ? std::sqrt(3.0 * (ratio - 1.0)) : 0.2;
    double H = w * dx / (2.0 * std::max(lam, 1e-3));
    if (inv_ea > 0.0 && chord > L) H = std::max(H, (chord / L - 1.0) / inv_ea * dx / chord);
    double Va = H * dz / dx - 0.5 * w * L;

    const double tol = 1e-11 * std::max(chord, 1.0);
    int it = 0;
    Residual r = endpoint(L, w, inv_ea, H, Va);
    double fx = r.fx - dx, fz = r.fz - dz;
    double norm = std::hypot(fx, fz);
    for (; it < 200 && !(norm < tol); ++it) {
        const double det = r.j11 * r.j22 - r.j12 * r.j21;
        if (!std::isfinite(det) || det == 0.0) break;
        const double dH = -(r.j22 * fx - r.j12 * fz) / det;
        const double dV = -(-r.j21 * fx + r.j11 * fz) / det;
        double step = 1.0;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls) {
            double Hn = H + step * dH;
            if (Hn <= 0.0) Hn = 0.1 * H;
            const double Vn = Va + step * dV;
            const Residual rn = endpoint(L, w, inv_ea, Hn, Vn);
            const double fxn = rn.fx - dx, fzn = rn.fz - dz;
            const double nn = std::hypot(fxn, fzn);
            if (std::isfinite(nn) && nn < norm) {
                H = Hn;
                Va = Vn;
                r = rn;
                fx = fxn;
                fz = fzn;
                norm = nn;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    if (!(norm < 1e-9 * std::max(chord, 1.0))) {
        std::ostringstream os;
        os << "solve_tether: no convergence for dx=" << dx << " dz=" << dz << " (residual " << norm
           << " m, H=" << H << ")";
        throw NumericError(os.str());
    }

    const double Vt = Va + w * L;
    sol.regime = regime;
    sol.iterations = it;
    sol.horizontal_component = H;
    sol.tension_magnitude = std::hypot(H, Vt);
    sol.tension_at_top = {-dir * H, -Vt};
    sol.tension_at_anchor = {dir * H, Va};
    sol.sag = sag_of(L, w, inv_ea, H, Va, dx, dz);
    return sol;
}

TetherSolution solve_tether(const PhysicalParams& p, Vec2 anchor, Vec2 attach)
{
    if (!(attach.z > 0.0)) throw DomainError("solve_tether: attach point must be above ground");
    return solve_catenary(p.l_t, p.tether_lin_density * p.g, p.tether_axial_stiffness, anchor, attach);
}

double straight_elastic_tension(const PhysicalParams& p, double chord, double dz)
{
    const double w = p.tether_lin_density * p.g;
    return p.tether_axial_stiffness * (chord - p.l_t) / p.l_t + w * p.l_t * (dz / chord) / 2.0;
}

}  // namespace autogyro::tether
