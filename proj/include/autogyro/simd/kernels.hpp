#pragma once

#include <cstddef>
#include <string_view>

namespace autogyro::simd {

struct SectionParams {
    double theta0;
    double a0;
    double cd0;
};

// Element layout for one rotor: n elements, each with radius r, sin(psi) and
// a force scale q = 0.5*rho*chord*dr.
struct RotorGridView {
    const double* radius;
    const double* sin_psi;
    const double* q;
    std::size_t n;
};

struct RotorSums {
    double thrust;   // sum of normal forces
    double torque;   // sum of r * tangential force
    double h_force;  // sum of -tangential force * sin(psi)
};

// Reduced tier: U_T = omega*r + v_inplane*sin(psi), U_P = u_p for every element.
using RotorSumsFn = RotorSums (*)(const RotorGridView& grid, const SectionParams& sp,
                                  double omega, double v_inplane, double u_p);

// Flapping tier: per-element velocities. f_n along the section normal,
// f_t along the direction of rotation.
using SectionForcesFn = void (*)(const double* u_t, const double* u_p, const double* q,
                                 std::size_t n, const SectionParams& sp,
                                 double* f_n, double* f_t);

struct KernelTable {
    std::string_view name;
    RotorSumsFn rotor_sums;
    SectionForcesFn section_forces;
};

enum class Isa { Scalar, Avx2 };

const KernelTable& scalar_kernels();
const KernelTable& avx2_kernels();  // only callable when avx2_available()

bool avx2_available();

// Picks AVX2 when the CPU supports it, unless AUTOGYRO_SIMD=scalar.
const KernelTable& active_kernels();
void force_isa(Isa isa);

}  // namespace autogyro::simd
