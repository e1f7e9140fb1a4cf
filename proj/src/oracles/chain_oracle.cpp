#include "autogyro/chain_oracle.hpp"

#include "autogyro/errors.hpp"

#include <cmath>

namespace autogyro::oracle {

namespace {

// Walk the chain from the anchor. Each link is a uniform rod, so it lines up
// with the mean of its end forces: (H, Va + (k + 1/2) w).
tether::Vec2 shoot(double H, double Va, int n, double seg, double wseg, double inv_ea)
{
    double x = 0.0, z = 0.0;
    for (int k = 0; k < n; ++k) {
        const double V = Va + (k + 0.5) * wseg;
        const double T = std::hypot(H, V);
        const double len = seg * (1.0 + T * inv_ea);
        x += len * H / T;
        z += len * V / T;
    }
    return {x, z};
}

}  // namespace

ChainResult catenary_oracle(tether::Vec2 anchor, tether::Vec2 attach, double l_t,
                            double lin_density, int n_segments, double g, double axial_stiffness)
{
    if (n_segments < 100) throw DomainError("catenary_oracle: need at least 100 segments");
    ChainResult res;
    const double dx_signed = attach.x - anchor.x;
    const double dz = attach.z - anchor.z;
    const double dx = std::abs(dx_signed);
    const double chord = std::hypot(dx, dz);
    const double inv_ea = std::isfinite(axial_stiffness) ? 1.0 / axial_stiffness : 0.0;
    if (lin_density == 0.0 && (chord <= l_t || inv_ea == 0.0)) {
        res.converged = true;
        return res;
    }
    if (dx == 0.0) throw DomainError("catenary_oracle: vertical chord not supported");

    const int n = n_segments;
    const double seg = l_t / n;
    const double wseg = lin_density * g * seg;
    const double W = wseg * n;

    // Unknowns: log(H) and Va / W keep the Newton steps well scaled.
    double lh = std::log(std::max(W, 1.0));
    double va = 0.0;
    auto resid = [&](double lhv, double vav, double& rx, double& rz) {
        const double H = std::exp(lhv);
        const double Va = vav * std::max(W, H);
        const auto e = shoot(H, Va, n, seg, wseg, inv_ea);
        rx = e.x - dx;
        rz = e.z - dz;
    };
    double rx, rz;
    resid(lh, va, rx, rz);
    double norm = std::hypot(rx, rz);
    for (res.iterations = 0; res.iterations < 300 && norm > 1e-10 * chord; ++res.iterations) {
        const double h = 1e-7;
        double ax, az, bx, bz;
        resid(lh + h, va, ax, az);
        resid(lh, va + h, bx, bz);
        const double j11 = (ax - rx) / h, j21 = (az - rz) / h;
        const double j12 = (bx - rx) / h, j22 = (bz - rz) / h;
        const double det = j11 * j22 - j12 * j21;
        if (det == 0.0 || !std::isfinite(det)) break;
        double d1 = -(j22 * rx - j12 * rz) / det;
        double d2 = -(-j21 * rx + j11 * rz) / det;
        const double cap = 2.0;
        const double big = std::max(std::abs(d1), std::abs(d2));
        if (big > cap) {
            d1 *= cap / big;
            d2 *= cap / big;
        }
        double step = 1.0;
        bool ok = false;
        for (int ls = 0; ls < 50; ++ls) {
            double nx, nz;
            resid(lh + step * d1, va + step * d2, nx, nz);
            const double nn = std::hypot(nx, nz);
            if (std::isfinite(nn) && nn < norm) {
                lh += step * d1;
                va += step * d2;
                rx = nx;
                rz = nz;
                norm = nn;
                ok = true;
                break;
            }
            step *= 0.5;
        }
        if (!ok) break;
    }
    res.converged = norm <= 1e-8 * chord;
    const double H = std::exp(lh);
    const double Vt = va * std::max(W, H) + W;
    const double sgn = dx_signed < 0.0 ? -1.0 : 1.0;
    res.tension_at_top = {-sgn * H, -Vt};
    res.tension = std::hypot(H, Vt);
    return res;
}

}  // namespace autogyro::oracle
