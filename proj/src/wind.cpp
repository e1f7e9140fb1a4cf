#include "autogyro/wind.hpp"

#include "autogyro/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace autogyro::sim {

namespace {

constexpr double kGustStep = 0.1;  // s

}  // namespace

std::vector<std::pair<double, double>> read_wind_file(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open wind file: " + path);
    std::vector<std::pair<double, double>> rows;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream ss(line);
        double t, v;
        if (!(ss >> t >> v)) {
            if (lineno == 1) continue;  // header
            throw ConfigError("wind file " + path + ": bad row " + std::to_string(lineno));
        }
        if (!rows.empty() && !(t > rows.back().first))
            throw ConfigError("wind file " + path + ": times must be strictly increasing (row " +
                              std::to_string(lineno) + ")");
        if (!(v > 0.0)) throw ConfigError("wind file " + path + ": wind speed must be > 0");
        rows.emplace_back(t, v);
    }
    if (rows.empty()) throw ConfigError("wind file " + path + " has no data");
    return rows;
}

WindProfile::WindProfile(const WindSpec& spec) : spec_(spec)
{
    if (spec_.kind == WindKind::File) {
        for (const auto& [t, v] : read_wind_file(spec_.file)) {
            ft_.push_back(t);
            fv_.push_back(v);
        }
    }
}

double WindProfile::gust_at(double t) const
{
    const double sigma = spec_.gust_intensity * spec_.gust_mean;
    const double phi = std::exp(-kGustStep / spec_.gust_corr_time);
    const double kick = sigma * std::sqrt(1.0 - phi * phi);
    const auto need = static_cast<std::size_t>(std::floor(t / kGustStep)) + 2;
    // samples are produced strictly in index order, so the series depends only on the seed
    if (gust_.empty()) {
        gen_.seed(spec_.seed);
        gust_.push_back(sigma * n01_(gen_));
    }
    while (gust_.size() < need) gust_.push_back(phi * gust_.back() + kick * n01_(gen_));
    const double x = t / kGustStep;
    const auto i = static_cast<std::size_t>(std::floor(x));
    const double f = x - static_cast<double>(i);
    const double g = (1.0 - f) * gust_[i] + f * gust_[i + 1];
    return std::max(0.1, spec_.gust_mean + g);
}

double WindProfile::at(double t) const
{
    if (t < 0.0) throw DomainError("wind_at: t must be >= 0");
    switch (spec_.kind) {
    case WindKind::Constant:
        return spec_.constant;
    case WindKind::Steps: {
        double v = spec_.steps.front().second;
        for (const auto& [ts, vs] : spec_.steps) {
            if (t >= ts) v = vs;
        }
        return v;
    }
    case WindKind::File: {
        if (t <= ft_.front()) return fv_.front();
        if (t >= ft_.back()) {
            if (t > ft_.back() && !warned_) {
                std::cerr << "warning: wind file ends at t = " << ft_.back() << " s, holding last value\n";
                warned_ = true;
            }
            return fv_.back();
        }
        const auto it = std::upper_bound(ft_.begin(), ft_.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - ft_.begin());
        const double f = (t - ft_[j - 1]) / (ft_[j] - ft_[j - 1]);
        return fv_[j - 1] + f * (fv_[j] - fv_[j - 1]);
    }
    case WindKind::Gust:
        return gust_at(t);
    }
    return spec_.constant;
}

std::vector<std::pair<double, double>> WindProfile::segments() const
{
    switch (spec_.kind) {
    case WindKind::Constant:
        return {{0.0, spec_.constant}};
    case WindKind::Steps:
        return spec_.steps;
    case WindKind::Gust:
        return {{0.0, spec_.gust_mean}};
    case WindKind::File: {
        double sum = 0.0;
        for (std::size_t i = 1; i < ft_.size(); ++i) sum += 0.5 * (fv_[i] + fv_[i - 1]) * (ft_[i] - ft_[i - 1]);
        const double span = ft_.back() - ft_.front();
        return {{0.0, span > 0.0 ? sum / span : fv_.front()}};
    }
    }
    return {};
}

}  // namespace autogyro::sim
