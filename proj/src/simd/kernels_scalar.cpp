#include "autogyro/simd/kernels.hpp"

#include <cmath>

namespace autogyro::simd {

namespace {

RotorSums rotor_sums_scalar(const RotorGridView& g, const SectionParams& sp,
                            double omega, double v_inplane, double u_p)
{
    RotorSums s{0.0, 0.0, 0.0};
    for (std::size_t k = 0; k < g.n; ++k) {
        const double ut = omega * g.radius[k] + v_inplane * g.sin_psi[k];
        const double u = std::sqrt(ut * ut + u_p * u_p);
        const double alpha = sp.theta0 + std::atan2(u_p, ut);
        const double qu = g.q[k] * u;
        const double fn = qu * (sp.a0 * alpha * ut - sp.cd0 * u_p);
        const double ft = qu * (sp.a0 * alpha * u_p - sp.cd0 * ut);
        s.thrust += fn;
        s.torque += g.radius[k] * ft;
        s.h_force -= ft * g.sin_psi[k];
    }
    return s;
}

void section_forces_scalar(const double* u_t, const double* u_p, const double* q,
                           std::size_t n, const SectionParams& sp, double* f_n, double* f_t)
{
    for (std::size_t k = 0; k < n; ++k) {
        const double u = std::sqrt(u_t[k] * u_t[k] + u_p[k] * u_p[k]);
        const double alpha = sp.theta0 + std::atan2(u_p[k], u_t[k]);
        const double qu = q[k] * u;
        f_n[k] = qu * (sp.a0 * alpha * u_t[k] - sp.cd0 * u_p[k]);
        f_t[k] = qu * (sp.a0 * alpha * u_p[k] - sp.cd0 * u_t[k]);
    }
}

}  // namespace

const KernelTable& scalar_kernels()
{
    static const KernelTable t{"scalar", rotor_sums_scalar, section_forces_scalar};
    return t;
}

}  // namespace autogyro::simd
