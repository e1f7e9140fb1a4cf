#include "autogyro/telemetry.hpp"

#include "autogyro/errors.hpp"

namespace autogyro::sim {

const char* telemetry_header()
{
    return "t,x_c,z_c,beta,Omega1,Omega2,u1,u2,T1,T2,tether_tension,mu,beta_r,a_hat,b_hat,c_hat,e_zh,V_w";
}

std::string format_record(const TelemetryRecord& r)
{
    char buf[1024];
    std::snprintf(buf, sizeof buf,
                  "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%.9g",
                  r.t, r.x_c, r.z_c, r.beta, r.Omega1, r.Omega2, r.u1, r.u2, r.T1, r.T2, r.tether_tension,
                  r.mu, r.beta_r, r.a_hat, r.b_hat, r.c_hat, r.e_zh, r.V_w);
    return buf;
}

TelemetryWriter::TelemetryWriter(const std::string& path)
{
    f_ = std::fopen(path.c_str(), "w");
    if (!f_) throw ConfigError("cannot open telemetry output: " + path);
    std::fprintf(f_, "%s\n", telemetry_header());
    std::fflush(f_);
}

TelemetryWriter::~TelemetryWriter()
{
    if (f_) std::fclose(f_);
}

void TelemetryWriter::write(const TelemetryRecord& r)
{
    if (!f_) return;
    std::fprintf(f_, "%s\n", format_record(r).c_str());
    std::fflush(f_);
}

}  // namespace autogyro::sim
