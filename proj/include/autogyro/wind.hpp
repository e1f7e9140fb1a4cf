#pragma once

#include "autogyro/config.hpp"

#include <random>
#include <string>
#include <vector>

namespace autogyro::sim {

class WindProfile {
public:
    explicit WindProfile(const WindSpec& spec);

    double at(double t) const;

    // Piecewise segments for reporting: (start time, nominal speed).
    std::vector<std::pair<double, double>> segments() const;
    bool warned_past_end() const { return warned_; }

private:
    double gust_at(double t) const;

    WindSpec spec_;
    std::vector<double> ft_, fv_;  // file series
    // gust samples on a uniform grid, extended lazily
    mutable std::vector<double> gust_;
    mutable std::mt19937_64 gen_;
    mutable std::normal_distribution<double> n01_;
    mutable bool warned_ = false;
};

std::vector<std::pair<double, double>> read_wind_file(const std::string& path);

}  // namespace autogyro::sim
