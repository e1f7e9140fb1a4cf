#pragma once

#include <cstdio>
#include <string>

namespace autogyro::sim {

// Angles in radians, SI otherwise.
struct TelemetryRecord {
    double t = 0.0;
    double x_c = 0.0;
    double z_c = 0.0;
    double beta = 0.0;
    double Omega1 = 0.0;
    double Omega2 = 0.0;
    double u1 = 0.0;
    double u2 = 0.0;
    double T1 = 0.0;
    double T2 = 0.0;
    double tether_tension = 0.0;
    double mu = 0.0;
    double beta_r = 0.0;
    double a_hat = 0.0;
    double b_hat = 0.0;
    double c_hat = 0.0;
    double e_zh = 0.0;
    double V_w = 0.0;
};

const char* telemetry_header();
std::string format_record(const TelemetryRecord& r);

// Appends one flushed CSV row per record so an interrupted run leaves a valid prefix.
class TelemetryWriter {
public:
    TelemetryWriter() = default;
    explicit TelemetryWriter(const std::string& path);
    ~TelemetryWriter();
    TelemetryWriter(const TelemetryWriter&) = delete;
    TelemetryWriter& operator=(const TelemetryWriter&) = delete;

    void write(const TelemetryRecord& r);
    bool is_open() const { return f_ != nullptr; }

private:
    std::FILE* f_ = nullptr;
};

}  // namespace autogyro::sim
