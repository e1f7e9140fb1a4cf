#include "autogyro/trim.hpp"

#include "autogyro/errors.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdio>
#include <ostream>

namespace autogyro::trim {

namespace {

constexpr double kOmegaLo = 1.0;
constexpr double kOmegaHi = 60.0;
constexpr double kOmegaTol = 1e-6;
constexpr double kForceTol = 1e-3;

struct Balance {
    double fx, fz;
};

Balance residual(const plant::ReducedPlant& plant, const plant::ReducedState& s, double V_w)
{
    const auto ev = plant.evaluate(s, V_w, 0.0, 0.0);
    const double M = plant.inertias().M_tot;
    return {ev.derivative[plant::XD] * M, ev.derivative[plant::ZD] * M};
}

}  // namespace

TrimPoint solve_trim(const PhysicalParams& p, double V_w, double beta)
{
    TrimPoint tp;
    tp.V_w = V_w;
    tp.beta = beta;
    const aero::RotorModel rotor(p);
    const double Va = V_w * std::sin(beta);
    const double Vip = V_w * std::cos(beta);

    auto torque = [&](double om) { return rotor.loads(Va, Vip, om).torque_aero; };
    double lo = kOmegaLo, hi = kOmegaHi;
    double qlo = torque(lo), qhi = torque(hi);
    if (!(qlo > 0.0 && qhi < 0.0)) {
        tp.note = "no autorotation bracket in [1, 60] rad/s";
        return tp;
    }
    while (hi - lo > kOmegaTol) {
        const double mid = 0.5 * (lo + hi);
        const double qm = torque(mid);
        if (qm > 0.0) lo = mid;
        else hi = mid;
    }
    const double om = 0.5 * (lo + hi);
    const auto loads = rotor.loads(Va, Vip, om);
    tp.Omega = om;
    tp.mu = aero::tip_speed_ratio(V_w, beta, om, p.R);
    tp.v_i = loads.inflow.v_i;
    tp.resid_torque = std::abs(loads.torque_aero);

    // Force the rotors put on the frame; the line must carry the rest.
    const double sb = std::sin(beta), cb = std::cos(beta);
    const double M = derived_inertias(p).M_tot;
    const double Fx = 2.0 * (loads.thrust * sb + loads.h_force * cb);
    const double Fz = 2.0 * (loads.thrust * cb - loads.h_force * sb) - M * p.g;
    if (!(Fx > 0.0)) {
        tp.note = "rotor force has no downwind component";
        return tp;
    }
    const double w = p.tether_lin_density * p.g;
    const auto end = tether::catenary_endpoint(p.l_t, w, p.tether_axial_stiffness, Fx, Fz);
    if (!(end.z > 0.0)) {
        tp.note = "equilibrium below ground";
        return tp;
    }

    // Polish on the full plant residual.
    const plant::ReducedPlant plant(p);
    tp.x_e = end.x;
    tp.z_e = end.z;
    tp.feasible = true;
    auto state = [&] { return trim_state(tp); };
    try {
        Balance r = residual(plant, state(), V_w);
        for (int it = 0; it < 20 && std::hypot(r.fx, r.fz) >= 0.1 * kForceTol; ++it) {
            const double h = 1e-3;
            TrimPoint a = tp, b = tp;
            a.x_e += h;
            b.z_e += h;
            const Balance ra = residual(plant, trim_state(a), V_w);
            const Balance rb = residual(plant, trim_state(b), V_w);
            Eigen::Matrix2d J;
            J << (ra.fx - r.fx) / h, (rb.fx - r.fx) / h, (ra.fz - r.fz) / h, (rb.fz - r.fz) / h;
            const Eigen::Vector2d d = J.fullPivLu().solve(Eigen::Vector2d(-r.fx, -r.fz));
            tp.x_e += d[0];
            tp.z_e += d[1];
            r = residual(plant, state(), V_w);
        }
        tp.resid_force = std::hypot(r.fx, r.fz);
        const auto ev = plant.evaluate(state(), V_w, 0.0, 0.0);
        tp.tension = ev.tether.tension_magnitude;
    } catch (const std::exception& e) {
        tp.feasible = false;
        tp.note = e.what();
        return tp;
    }
    if (!(std::max(tp.resid_force, 0.0) < kForceTol)) {
        tp.feasible = false;
        tp.note = "position solve did not close the force balance";
    }
    return tp;
}

plant::ReducedState trim_state(const TrimPoint& tp)
{
    plant::ReducedState s = plant::ReducedState::Zero();
    s[plant::X] = tp.x_e;
    s[plant::Z] = tp.z_e;
    s[plant::BETA] = tp.beta;
    s[plant::OMEGA1] = tp.Omega;
    s[plant::OMEGA2] = tp.Omega;
    return s;
}

QuadFit fit_quadratic(const std::vector<double>& beta, const std::vector<double>& z)
{
    QuadFit f;
    f.n = static_cast<int>(beta.size());
    if (f.n < 3) return f;
    // centre the abscissa for conditioning
    double mean_b = 0.0;
    for (double b : beta) mean_b += b;
    mean_b /= f.n;
    Eigen::MatrixXd A(f.n, 3);
    Eigen::VectorXd y(f.n);
    for (int i = 0; i < f.n; ++i) {
        const double d = beta[i] - mean_b;
        A(i, 0) = d * d;
        A(i, 1) = d;
        A(i, 2) = 1.0;
        y[i] = z[i];
    }
    const Eigen::Vector3d c = A.colPivHouseholderQr().solve(y);
    f.c2 = c[0];
    f.c1 = c[1] - 2.0 * c[0] * mean_b;
    f.c0 = c[2] - c[1] * mean_b + c[0] * mean_b * mean_b;
    const double ym = y.mean();
    const double ss_tot = (y.array() - ym).square().sum();
    const double ss_res = (A * c - y).squaredNorm();
    f.r2 = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
    return f;
}

SweepResult sweep(const PhysicalParams& p, const std::vector<double>& winds, const std::vector<double>& betas)
{
    SweepResult out;
    for (double V : winds) {
        std::vector<TrimPoint> feas;
        for (double b : betas) {
            TrimPoint tp = solve_trim(p, V, b);
            out.points.push_back(tp);
            if (tp.feasible) feas.push_back(tp);
        }
        Vertex vx;
        vx.V_w = V;
        const int n = static_cast<int>(feas.size());
        if (n < 3) throw NumericError("sweep: fewer than 3 feasible points at V_w = " + std::to_string(V));
        int imax = 0;
        for (int i = 1; i < n; ++i) {
            if (feas[i].z_e > feas[imax].z_e) imax = i;
        }
        for (int i = 1; i + 1 < n; ++i) {
            if (feas[i].z_e > feas[i - 1].z_e && feas[i].z_e >= feas[i + 1].z_e) ++vx.interior_maxima;
        }
        vx.discrete_max = imax;
        const int lo = std::clamp(imax - 2, 0, std::max(0, n - 5));
        const int hi = std::min(n, lo + 5);
        std::vector<double> bb, zz;
        for (int i = lo; i < hi; ++i) {
            bb.push_back(feas[i].beta);
            zz.push_back(feas[i].z_e);
        }
        const QuadFit f5 = fit_quadratic(bb, zz);
        if (f5.n >= 3 && f5.c2 < 0.0) {
            vx.beta_star = -f5.c1 / (2.0 * f5.c2);
            vx.z_max = f5.c0 - f5.c1 * f5.c1 / (4.0 * f5.c2);
            vx.valid = true;
        } else {
            vx.beta_star = feas[imax].beta;
            vx.z_max = feas[imax].z_e;
        }
        bb.clear();
        zz.clear();
        for (const auto& tp : feas) {
            if (std::abs(tp.beta - vx.beta_star) <= deg2rad(2.0) + 1e-12) {
                bb.push_back(tp.beta);
                zz.push_back(tp.z_e);
            }
        }
        vx.r2_local = fit_quadratic(bb, zz).r2;
        out.vertices.push_back(vx);
    }
    return out;
}

std::vector<double> beta_grid(double lo_deg, double step_deg, double hi_deg)
{
    if (!(step_deg > 0.0) || hi_deg < lo_deg) throw DomainError("beta grid: need step > 0 and hi >= lo");
    std::vector<double> g;
    const int n = static_cast<int>(std::floor((hi_deg - lo_deg) / step_deg + 1e-9));
    for (int i = 0; i <= n; ++i) g.push_back(deg2rad(lo_deg + i * step_deg));
    return g;
}

void write_csv(std::ostream& os, const std::vector<TrimPoint>& pts)
{
    os << "V_w,beta_deg,Omega,mu,z_e,x_e,tension,resid_force,resid_torque\n";
    char buf[512];
    for (const auto& tp : pts) {
        if (!tp.feasible) continue;
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g\n", tp.V_w,
                      rad2deg(tp.beta), tp.Omega, tp.mu, tp.z_e, tp.x_e, tp.tension, tp.resid_force,
                      tp.resid_torque);
        os << buf;
    }
}

}  // namespace autogyro::trim
