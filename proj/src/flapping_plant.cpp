#include "autogyro/flapping_plant.hpp"

#include "autogyro/errors.hpp"
#include "autogyro/rk4.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <numbers>

namespace autogyro::plant {

namespace {

Mat3 ry(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << c, 0, s, 0, 1, 0, -s, 0, c;
    return m;
}

Mat3 rz(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << c, -s, 0, s, c, 0, 0, 0, 1;
    return m;
}

Mat3 dry(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << -s, 0, c, 0, 0, 0, -c, 0, -s;
    return m;
}

Mat3 drz(double a)
{
    const double c = std::cos(a), s = std::sin(a);
    Mat3 m;
    m << -s, -c, 0, c, -s, 0, 0, 0, 0;
    return m;
}

int rotor_of(int blade) { return blade <= 4 ? 1 : 2; }
int slot_of(int blade) { return blade <= 4 ? blade - 1 : blade - 5; }
double side_of(int rotor) { return rotor == 1 ? -1.0 : 1.0; }

constexpr double kOmegaFloorFlap = 0.1;  // below this the inflow solve is skipped

using Jac = Eigen::Matrix<double, 3, kDof>;
using State26 = Eigen::Matrix<double, 2 * kDof, 1>;

}  // namespace

int psi_index(int blade) { return rotor_of(blade) == 1 ? QPSI1 : QPSI2; }
int theta_index(int blade) { return rotor_of(blade) == 1 ? 3 + blade : 4 + blade; }

Mat3 blade_rotation(double beta, double psi_i, double theta_j, int blade)
{
    const double phi = psi_i + slot_of(blade) * std::numbers::pi / 2.0;
    return ry(-theta_j).transpose() * rz(phi).transpose() * ry(beta).transpose();
}

FlappingPlant::FlappingPlant(const PhysicalParams& p, FlappingOptions opt)
    : p_(p), opt_(opt), rotor_(p), blade_density_(p.m_b / (p.R - p.r_h))
{
    const double mid = 0.5 * (p.R + p.r_h);
    const double half = 0.5 * (p.R - p.r_h);
    const double a = half / std::sqrt(3.0);
    gauss_s_ = {mid - a, mid + a};
    gauss_w_ = {half, half};
}

Vec3 FlappingPlant::hub_center(const Vec13& q, int rotor) const
{
    const Vec3 xb = ry(q[QBETA]).col(0);
    return Vec3(q[QX], 0.0, q[QZ]) + side_of(rotor) * 0.5 * p_.l * xb;
}

Vec3 FlappingPlant::blade_point(const Vec13& q, int blade, double s) const
{
    const int rotor = rotor_of(blade);
    const double phi = q[psi_index(blade)] + slot_of(blade) * std::numbers::pi / 2.0;
    const double th = q[theta_index(blade)];
    const Vec3 rho(p_.r_h + (s - p_.r_h) * std::cos(th), 0.0, (s - p_.r_h) * std::sin(th));
    return hub_center(q, rotor) + ry(q[QBETA]) * rz(phi) * rho;
}

Jac FlappingPlant::blade_jacobian(const Vec13& q, int blade, double s) const
{
    const int rotor = rotor_of(blade);
    const double beta = q[QBETA];
    const double phi = q[psi_index(blade)] + slot_of(blade) * std::numbers::pi / 2.0;
    const double th = q[theta_index(blade)];
    const double e = s - p_.r_h;
    const Vec3 rho(p_.r_h + e * std::cos(th), 0.0, e * std::sin(th));
    const Vec3 drho(-e * std::sin(th), 0.0, e * std::cos(th));
    const Mat3 Rb = ry(beta);
    const Mat3 Rp = rz(phi);
    const Mat3 dRb = dry(beta);

    Jac J = Jac::Zero();
    J(0, QX) = 1.0;
    J(2, QZ) = 1.0;
    J.col(QBETA) = side_of(rotor) * 0.5 * p_.l * dRb.col(0) + dRb * Rp * rho;
    J.col(psi_index(blade)) = Rb * drz(phi) * rho;
    J.col(theta_index(blade)) = Rb * Rp * drho;
    return J;
}

Mat13 FlappingPlant::mass_matrix(const Vec13& q) const
{
    Mat13 A = Mat13::Zero();
    const double beta = q[QBETA];
    // frame rod about its centre
    A(QX, QX) += p_.m_f;
    A(QZ, QZ) += p_.m_f;
    A(QBETA, QBETA) += p_.m_f * p_.l * p_.l / 12.0;
    // hubs: point mass at the hub centre plus disc inertia
    const double I_ax = 0.5 * p_.m_h * p_.r_h * p_.r_h;
    const double I_d = 0.25 * p_.m_h * p_.r_h * p_.r_h;
    for (int rotor = 1; rotor <= 2; ++rotor) {
        Jac J = Jac::Zero();
        J(0, QX) = 1.0;
        J(2, QZ) = 1.0;
        J.col(QBETA) = side_of(rotor) * 0.5 * p_.l * dry(beta).col(0);
        A.noalias() += p_.m_h * J.transpose() * J;
        A(QBETA, QBETA) += I_d;
        const int ip = rotor == 1 ? QPSI1 : QPSI2;
        A(ip, ip) += I_ax;
    }
    // blades: uniform rods, two-point Gauss is exact for the quadratic integrand
    for (int b = 1; b <= 8; ++b) {
        for (int g = 0; g < 2; ++g) {
            const Jac J = blade_jacobian(q, b, gauss_s_[g]);
            A.noalias() += (gauss_w_[g] * blade_density_) * J.transpose() * J;
        }
    }
    return A;
}

Vec13 FlappingPlant::gravity_gradient(const Vec13& q) const
{
    Vec13 G = Vec13::Zero();
    if (!opt_.gravity) return G;
    G[QZ] += p_.m_f * p_.g;
    const double beta = q[QBETA];
    for (int rotor = 1; rotor <= 2; ++rotor) {
        G[QZ] += p_.m_h * p_.g;
        G[QBETA] += p_.m_h * p_.g * side_of(rotor) * 0.5 * p_.l * dry(beta)(2, 0);
    }
    for (int b = 1; b <= 8; ++b) {
        for (int g = 0; g < 2; ++g) {
            const Jac J = blade_jacobian(q, b, gauss_s_[g]);
            G.noalias() += (gauss_w_[g] * blade_density_ * p_.g) * J.row(2).transpose();
        }
    }
    return G;
}

Vec13 FlappingPlant::bias(const Vec13& q, const Vec13& qd) const
{
    // A does not depend on x or z.
    constexpr double h = 1e-5;
    Vec13 B = Vec13::Zero();
    for (int k = QBETA; k < kDof; ++k) {
        Vec13 qp = q, qm = q;
        qp[k] += h;
        qm[k] -= h;
        const Mat13 dA = (mass_matrix(qp) - mass_matrix(qm)) / (2.0 * h);
        B.noalias() += qd[k] * (dA * qd);
        B[k] -= 0.5 * qd.dot(dA * qd);
    }
    return B + gravity_gradient(q);
}

Vec13 FlappingPlant::generalized_forces(const Vec13& q, const Vec13& qd, double wind, double u1, double u2,
                                        FlappingEval* diag) const
{
    Vec13 Q = Vec13::Zero();
    Q[QPSI1] += u1;
    Q[QPSI2] += u2;

    if (opt_.tether) {
        const auto ts = tether::solve_tether(p_, {0.0, 0.0}, {q[QX], q[QZ]});
        double fx = ts.tension_at_top.x, fz = ts.tension_at_top.z;
        if (p_.tether_damping > 0.0) {
            const double chord = std::hypot(q[QX], q[QZ]);
            const double ex = q[QX] / chord, ez = q[QZ] / chord;
            const double vr = qd[QX] * ex + qd[QZ] * ez;
            fx -= p_.tether_damping * vr * ex;
            fz -= p_.tether_damping * vr * ez;
        }
        Q[QX] += fx;
        Q[QZ] += fz;
        if (diag) diag->tether_tension = ts.tension_magnitude;
    }
    if (!opt_.aero) return Q;

    const Mat3 Rb = ry(q[QBETA]);
    const Vec3 xb = Rb.col(0);
    const Vec3 nb = Rb.col(2);
    const auto radii = aero::radial_stations(p_);
    const double dr = (p_.R - p_.r_h) / aero::kRadialElements;
    const double qscale = 0.5 * p_.rho_air * p_.chord * dr;
    constexpr int N = aero::kRadialElements;

    for (int rotor = 1; rotor <= 2; ++rotor) {
        // uniform inflow from the rotor-level momentum balance at hub kinematics
        Jac JA = Jac::Zero();
        JA(0, QX) = 1.0;
        JA(2, QZ) = 1.0;
        JA.col(QBETA) = side_of(rotor) * 0.5 * p_.l * dry(q[QBETA]).col(0);
        const Vec3 vh = JA * qd;
        const Vec3 rel(wind - vh[0], -vh[1], -vh[2]);
        const double v_axial = rel.dot(nb);
        const double v_plane = std::abs(rel.dot(xb));
        const int ip = rotor == 1 ? QPSI1 : QPSI2;
        const double omega = qd[ip];
        double vi = 0.0;
        if (omega > kOmegaFloorFlap) {
            const double* guess = have_cache_ ? &vi_cache_[rotor - 1] : nullptr;
            vi = rotor_.loads(v_axial, v_plane, omega, guess).inflow.v_i;
        }
        vi_cache_[rotor - 1] = vi;
        const Vec3 air = Vec3(wind, 0.0, 0.0) - vi * nb;

        double thrust = 0.0;
        for (int b = (rotor == 1 ? 1 : 5); b <= (rotor == 1 ? 4 : 8); ++b) {
            const double phi = q[psi_index(b)] + slot_of(b) * std::numbers::pi / 2.0;
            const double th = q[theta_index(b)];
            const Mat3 Rbl = Rb * rz(phi) * ry(-th);
            const Vec3 e_chord = Rbl.col(1);
            const Vec3 e_norm = Rbl.col(2);
            double ut[N], up[N], qq[N], fn[N], ft[N];
            Jac Js[N];
            for (int k = 0; k < N; ++k) {
                Js[k] = blade_jacobian(q, b, radii[k]);
                const Vec3 w = air - Js[k] * qd;
                ut[k] = -w.dot(e_chord);
                up[k] = w.dot(e_norm);
                qq[k] = qscale;
            }
            simd::active_kernels().section_forces(ut, up, qq, N, {p_.theta0, p_.a0, p_.cd0}, fn, ft);
            for (int k = 0; k < N; ++k) {
                const Vec3 F = fn[k] * e_norm + ft[k] * e_chord;
                Q.noalias() += Js[k].transpose() * F;
                thrust += F.dot(nb);
            }
        }
        if (diag) {
            diag->rotor_thrust[rotor - 1] = thrust;
            diag->v_i[rotor - 1] = vi;
        }
    }
    have_cache_ = true;
    return Q;
}

FlappingEval FlappingPlant::evaluate(const FullState& s, double wind, double u1, double u2, double t) const
{
    if (!s.q.allFinite() || !s.qd.allFinite()) throw SimulationFault("non-finite flapping state", t);
    FlappingEval ev;
    const Mat13 A = mass_matrix(s.q);
    ev.bias = bias(s.q, s.qd);
    ev.forces = generalized_forces(s.q, s.qd, wind, u1, u2, &ev);
    const Vec13 rhs = ev.forces - ev.bias;
    if (opt_.lock_frame) {
        constexpr int nf = kDof - 3;
        const Eigen::Matrix<double, nf, nf> Af = A.bottomRightCorner<nf, nf>();
        Eigen::LLT<Eigen::Matrix<double, nf, nf>> llt(Af);
        if (llt.info() != Eigen::Success) throw SimulationFault("mass matrix not positive definite", t);
        ev.qdd.setZero();
        ev.qdd.tail<nf>() = llt.solve(rhs.tail<nf>());
    } else {
        Eigen::LLT<Mat13> llt(A);
        if (llt.info() != Eigen::Success) throw SimulationFault("mass matrix not positive definite", t);
        ev.qdd = llt.solve(rhs);
    }
    if (!ev.qdd.allFinite()) throw SimulationFault("non-finite generalized acceleration", t);
    return ev;
}

FullState FlappingPlant::step(const FullState& s, double t, double dt, double wind, double u1, double u2) const
{
    auto f = [&](double tt, const State26& y) {
        FullState fs;
        fs.q = y.head<kDof>();
        fs.qd = y.tail<kDof>();
        State26 d;
        d.head<kDof>() = fs.qd;
        d.tail<kDof>() = evaluate(fs, wind, u1, u2, tt).qdd;
        if (opt_.lock_frame) d.head<3>().setZero();
        return d;
    };
    State26 y;
    y << s.q, s.qd;
    const State26 yn = rk4_step(f, t, y, dt);
    FullState out;
    out.q = yn.head<kDof>();
    out.qd = yn.tail<kDof>();
    return out;
}

double FlappingPlant::kinetic_energy(const Vec13& q, const Vec13& qd) const
{
    return 0.5 * qd.dot(mass_matrix(q) * qd);
}

double FlappingPlant::potential_energy(const Vec13& q) const
{
    if (!opt_.gravity) return 0.0;
    double V = (p_.m_f + 2.0 * p_.m_h) * p_.g * q[QZ];
    for (int b = 1; b <= 8; ++b) {
        for (int g = 0; g < 2; ++g) V += gauss_w_[g] * blade_density_ * p_.g * blade_point(q, b, gauss_s_[g])[2];
    }
    return V;
}

FullState full_from_reduced(double x, double z, double beta, double xd, double zd, double betad,
                            double omega1, double omega2)
{
    FullState s;
    s.q[QX] = x;
    s.q[QZ] = z;
    s.q[QBETA] = beta;
    s.qd[QX] = xd;
    s.qd[QZ] = zd;
    s.qd[QBETA] = betad;
    s.qd[QPSI1] = omega1;
    s.qd[QPSI2] = omega2;
    return s;
}

}  // namespace autogyro::plant
