#pragma once

#include "autogyro/aero.hpp"
#include "autogyro/config.hpp"
#include "autogyro/tether.hpp"

#include <Eigen/Core>

#include <array>

namespace autogyro::plant {

// Generalised coordinates [x z beta psi1 th1 th2 th3 th4 psi2 th5 th6 th7 th8].
constexpr int kDof = 13;
using Vec13 = Eigen::Matrix<double, kDof, 1>;
using Mat13 = Eigen::Matrix<double, kDof, kDof>;
using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

enum FullIndex { QX = 0, QZ = 1, QBETA = 2, QPSI1 = 3, QPSI2 = 8 };

int psi_index(int blade);    // blade 1..8
int theta_index(int blade);  // blade 1..8

// Inertial -> blade-frame coordinate transform for blade j (1..8):
// R(-theta_j about y) * R(psi_i + n pi/2 about z) * R(beta about Y).
Mat3 blade_rotation(double beta, double psi_i, double theta_j, int blade);

struct FullState {
    Vec13 q = Vec13::Zero();
    Vec13 qd = Vec13::Zero();
};

struct FlappingOptions {
    bool aero = true;
    bool tether = true;
    bool gravity = true;
    bool lock_frame = false;  // hold x, z, beta fixed (rotor-only dynamics)
};

struct FlappingEval {
    Vec13 qdd;
    Vec13 bias;
    Vec13 forces;
    std::array<double, 2> rotor_thrust{0.0, 0.0};  // aero force along each disc normal
    std::array<double, 2> v_i{0.0, 0.0};
    double tether_tension = 0.0;
};

class FlappingPlant {
public:
    explicit FlappingPlant(const PhysicalParams& p, FlappingOptions opt = {});

    Mat13 mass_matrix(const Vec13& q) const;
    // Christoffel velocity terms plus the gravity gradient.
    Vec13 bias(const Vec13& q, const Vec13& qd) const;
    Vec13 gravity_gradient(const Vec13& q) const;
    Vec13 generalized_forces(const Vec13& q, const Vec13& qd, double wind, double u1, double u2,
                             FlappingEval* diag = nullptr) const;

    FlappingEval evaluate(const FullState& s, double wind, double u1, double u2, double t = 0.0) const;
    FullState step(const FullState& s, double t, double dt, double wind, double u1, double u2) const;

    double kinetic_energy(const Vec13& q, const Vec13& qd) const;
    double potential_energy(const Vec13& q) const;

    // Blade point at span s (from hub centre) and its 3x13 position Jacobian.
    Vec3 blade_point(const Vec13& q, int blade, double s) const;
    Eigen::Matrix<double, 3, kDof> blade_jacobian(const Vec13& q, int blade, double s) const;
    Vec3 hub_center(const Vec13& q, int rotor) const;  // rotor 1 or 2

    const PhysicalParams& params() const { return p_; }
    const FlappingOptions& options() const { return opt_; }

private:
    PhysicalParams p_;
    FlappingOptions opt_;
    aero::RotorModel rotor_;
    double blade_density_;
    std::array<double, 2> gauss_s_{}, gauss_w_{};
    mutable std::array<double, 2> vi_cache_{0.0, 0.0};
    mutable bool have_cache_ = false;
};

// Full state with every blade unflapped, matching a reduced-tier state.
FullState full_from_reduced(double x, double z, double beta, double xd, double zd, double betad,
                            double omega1, double omega2);

}  // namespace autogyro::plant
