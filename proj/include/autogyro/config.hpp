#pragma once

#include <cstdint>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

namespace autogyro {

constexpr double deg2rad(double d) { return d * std::numbers::pi / 180.0; }
constexpr double rad2deg(double r) { return r * 180.0 / std::numbers::pi; }

struct PhysicalParams {
    double m_f = 13.6056;
    double m_h = 1.0;
    double m_b = 2.5418;
    double l = 8.13;
    double r_h = 0.0762;
    double chord = 0.03048;
    double R = 3.048;
    double l_t = 1000.0;
    double rho_air = 1.225;
    double g = 9.81;
    double a0 = 5.73;
    double cd0 = 0.012;
    double theta0 = deg2rad(10.0);
    double tether_lin_density = 0.01;
    double tether_axial_stiffness = 2.0e5;
    double tether_damping = 0.0;  // N*s/m along the chord, off by default
};

struct GainSet {
    double K_p = 0.02;
    double K_i = 0.001;
    double K_d = 0.05;
    double K_p2 = 100.0;
    double K_i2 = 0.5;
    double k1 = -0.0003;
    double k2 = -0.003;
    double k3 = 0.01;
    double e_amax = 0.0;
    double e_bmax = 0.0;
};

enum class PlantTier { Reduced, Flapping };
enum class ControlMode { Adaptive, Legacy };
enum class WindKind { Constant, Steps, File, Gust };

struct WindSpec {
    WindKind kind = WindKind::Constant;
    double constant = 8.0;
    std::vector<std::pair<double, double>> steps{{0.0, 8.0}, {2400.0, 10.0}, {3600.0, 12.0}};
    std::string file;
    double gust_mean = 8.0;
    double gust_intensity = 0.1;      // standard deviation as a fraction of the mean
    double gust_corr_time = 20.0;     // s
    std::uint64_t seed = 1;
};

struct EstimatorOptions {
    double a_init = 40.0;         // m/rad^2
    double a_min = 1e-3;          // m/rad^2
    double beta_min = 0.01;       // rad
    int max_inner = 10000;
    double tolerance = 1e-5;      // m
    double beta_lo = deg2rad(3.0);
    double beta_hi = deg2rad(20.0);
};

struct ScenarioConfig {
    double duration = 3600.0;
    double dt = 1e-3;
    double t_switch = 1200.0;
    double beta_r_initial = deg2rad(8.5);
    WindSpec wind;
    double u_min = -1.0;
    double u_max = 0.0;
    std::string output_path = "telemetry.csv";
    PlantTier plant_tier = PlantTier::Reduced;
    ControlMode mode = ControlMode::Adaptive;
    double z_d = 900.0;                    // legacy mode altitude setpoint
    double telemetry_interval = 1.0;       // s; 0 writes every step
    double rate_limit = deg2rad(0.2);      // rad/s on beta_r after the switch
    double derivative_tau = 0.5;           // s, legacy D-term filter
    EstimatorOptions estimator;
};

struct Config {
    ScenarioConfig scenario;
    PhysicalParams physical;
    GainSet gains;
};

struct Inertias {
    double M_tot;
    double I_beta;
    double I_R;
};

Inertias derived_inertias(const PhysicalParams& p);

void validate(const PhysicalParams& p);
void validate(const GainSet& g);
void validate(const ScenarioConfig& s);

// Flat "key = value" text. Angles are in degrees; '#' starts a comment.
Config parse_config(const std::string& text);
Config load_config(const std::string& path);
std::string serialize_config(const Config& c);

}  // namespace autogyro
