#pragma once

#include "autogyro/config.hpp"
#include "autogyro/telemetry.hpp"

#include <functional>
#include <string>
#include <vector>

namespace autogyro::sim {

struct SegmentSummary {
    double t_start = 0.0;
    double t_end = 0.0;
    double V_w = 0.0;
    double z_max_trim = 0.0;   // trim-sweep vertex altitude for this wind
    double beta_star = 0.0;    // trim-sweep vertex pitch
    double e_zmax_end = -1.0;  // |z_max_trim - estimated vertex altitude| at the last row of the segment
    double z_end = 0.0;
    double beta_end = 0.0;
    double beta_r_end = 0.0;
};

struct RunSummary {
    bool completed = false;
    std::string fault;
    double t_end = 0.0;
    double z_final = 0.0;
    double beta_final = 0.0;
    double beta_r_final = 0.0;
    long steps = 0;
    long rows = 0;
    long violations = 0;
    double wall_seconds = 0.0;
    std::vector<SegmentSummary> segments;
    std::vector<TelemetryRecord> records;                // kept when requested
    std::vector<std::pair<double, double>> e_zmax;       // (t, e_zmax) per row after the switch
};

struct RunOptions {
    bool write_file = true;
    bool keep_records = true;
    // trim-sweep grid used for the per-segment reference maxima
    double sweep_lo_deg = 3.0;
    double sweep_step_deg = 0.25;
    double sweep_hi_deg = 20.0;
};

RunSummary run_scenario(const Config& cfg, const RunOptions& opt = {});

// Row-level checks: u within [u_min, 0], u1*u2 = 0, Omega > 0.
bool record_ok(const TelemetryRecord& r, double u_min);

}  // namespace autogyro::sim
