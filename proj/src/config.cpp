#include "autogyro/config.hpp"

#include "autogyro/errors.hpp"

#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

namespace autogyro {

Inertias derived_inertias(const PhysicalParams& p)
{
    Inertias in{};
    in.M_tot = p.m_f + 2.0 * p.m_h + 8.0 * p.m_b;
    const double R3 = p.R * p.R * p.R;
    const double rh3 = p.r_h * p.r_h * p.r_h;
    in.I_R = 4.0 * p.m_b * (R3 - rh3) / (3.0 * (p.R - p.r_h)) + 0.5 * p.m_h * p.r_h * p.r_h;
    const double half = 0.5 * p.l;
    in.I_beta = 2.0 * (p.m_h + 4.0 * p.m_b) * half * half + p.m_f * p.l * p.l / 12.0;
    return in;
}

namespace {

void require(bool ok, const std::string& field, const std::string& bound)
{
    if (!ok) throw ConfigError(field + " violates " + bound);
}

std::string trim_ws(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v)
{
    try {
        std::size_t pos = 0;
        const double d = std::stod(v, &pos);
        if (pos != v.size() || !std::isfinite(d)) throw std::invalid_argument(v);
        return d;
    } catch (const std::exception&) {
        throw ConfigError("cannot parse value '" + v + "' for key " + key);
    }
}

std::string fmt17(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Angles cross the text boundary in extended precision: not every radian
// double is reachable as double(degrees) * pi / 180.
constexpr long double kPiL = 3.141592653589793238462643383279502884L;

std::string fmt_deg(double rad)
{
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.21Lg", static_cast<long double>(rad) * 180.0L / kPiL);
    return buf;
}

double parse_deg(const std::string& key, const std::string& v)
{
    parse_double(key, v);  // same syntax checks
    return static_cast<double>(std::strtold(v.c_str(), nullptr) * kPiL / 180.0L);
}

struct Field {
    std::string key;
    std::function<void(Config&, const std::string&)> set;
    std::function<std::string(const Config&)> get;
};

template <class Ref>
Field num(std::string key, Ref ref)
{
    return {key,
            [ref, key](Config& c, const std::string& v) { ref(c) = parse_double(key, v); },
            [ref](const Config& c) { return fmt17(ref(const_cast<Config&>(c))); }};
}

template <class Ref>
Field angle(std::string key, Ref ref)
{
    return {key,
            [ref, key](Config& c, const std::string& v) { ref(c) = parse_deg(key, v); },
            [ref](const Config& c) { return fmt_deg(ref(const_cast<Config&>(c))); }};
}

std::vector<std::pair<double, double>> parse_steps(const std::string& v)
{
    std::vector<std::pair<double, double>> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim_ws(item);
        const auto colon = item.find(':');
        if (colon == std::string::npos)
            throw ConfigError("wind.steps entry '" + item + "' is not time:speed");
        out.emplace_back(parse_double("wind.steps", trim_ws(item.substr(0, colon))),
                         parse_double("wind.steps", trim_ws(item.substr(colon + 1))));
    }
    return out;
}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
#define P(name) num(#name, [](Config& c) -> double& { return c.physical.name; })
        f.push_back(P(m_f));
        f.push_back(P(m_h));
        f.push_back(P(m_b));
        f.push_back(P(l));
        f.push_back(P(r_h));
        f.push_back(P(chord));
        f.push_back(P(R));
        f.push_back(P(l_t));
        f.push_back(P(rho_air));
        f.push_back(P(g));
        f.push_back(P(a0));
        f.push_back(P(cd0));
        f.push_back(angle("theta0", [](Config& c) -> double& { return c.physical.theta0; }));
        f.push_back(P(tether_lin_density));
        f.push_back(P(tether_axial_stiffness));
        f.push_back(P(tether_damping));
#undef P
#define G(name) num(#name, [](Config& c) -> double& { return c.gains.name; })
        f.push_back(G(K_p));
        f.push_back(G(K_i));
        f.push_back(G(K_d));
        f.push_back(G(K_p2));
        f.push_back(G(K_i2));
        f.push_back(G(k1));
        f.push_back(G(k2));
        f.push_back(G(k3));
        f.push_back(G(e_amax));
        f.push_back(G(e_bmax));
#undef G
#define S(name) num(#name, [](Config& c) -> double& { return c.scenario.name; })
        f.push_back(S(duration));
        f.push_back(S(dt));
        f.push_back(S(t_switch));
        f.push_back(angle("beta_r_initial", [](Config& c) -> double& { return c.scenario.beta_r_initial; }));
        f.push_back(S(u_min));
        f.push_back(S(u_max));
        f.push_back(S(z_d));
        f.push_back(S(telemetry_interval));
        f.push_back(angle("rate_limit", [](Config& c) -> double& { return c.scenario.rate_limit; }));
        f.push_back(S(derivative_tau));
#undef S
        f.push_back({"output_path",
                     [](Config& c, const std::string& v) { c.scenario.output_path = v; },
                     [](const Config& c) { return c.scenario.output_path; }});
        f.push_back({"plant_tier",
                     [](Config& c, const std::string& v) {
                         if (v == "reduced") c.scenario.plant_tier = PlantTier::Reduced;
                         else if (v == "flapping") c.scenario.plant_tier = PlantTier::Flapping;
                         else throw ConfigError("plant_tier must be reduced or flapping, got " + v);
                     },
                     [](const Config& c) {
                         return std::string(c.scenario.plant_tier == PlantTier::Reduced ? "reduced" : "flapping");
                     }});
        f.push_back({"mode",
                     [](Config& c, const std::string& v) {
                         if (v == "adaptive") c.scenario.mode = ControlMode::Adaptive;
                         else if (v == "legacy") c.scenario.mode = ControlMode::Legacy;
                         else throw ConfigError("mode must be adaptive or legacy, got " + v);
                     },
                     [](const Config& c) {
                         return std::string(c.scenario.mode == ControlMode::Adaptive ? "adaptive" : "legacy");
                     }});
#define E(key, name) num(key, [](Config& c) -> double& { return c.scenario.estimator.name; })
        f.push_back(E("estimator.a_init", a_init));
        f.push_back(E("estimator.a_min", a_min));
        f.push_back(E("estimator.tolerance", tolerance));
#undef E
        f.push_back(angle("estimator.beta_min", [](Config& c) -> double& { return c.scenario.estimator.beta_min; }));
        f.push_back(angle("estimator.vertex_lo", [](Config& c) -> double& { return c.scenario.estimator.beta_lo; }));
        f.push_back(angle("estimator.vertex_hi", [](Config& c) -> double& { return c.scenario.estimator.beta_hi; }));
        f.push_back({"estimator.max_inner",
                     [](Config& c, const std::string& v) {
                         const double d = parse_double("estimator.max_inner", v);
                         if (d < 0 || d != std::floor(d)) throw ConfigError("estimator.max_inner must be a non-negative integer");
                         c.scenario.estimator.max_inner = static_cast<int>(d);
                     },
                     [](const Config& c) { return std::to_string(c.scenario.estimator.max_inner); }});
        f.push_back({"wind.constant",
                     [](Config& c, const std::string& v) {
                         c.scenario.wind.constant = parse_double("wind.constant", v);
                         c.scenario.wind.kind = WindKind::Constant;
                     },
                     [](const Config& c) { return fmt17(c.scenario.wind.constant); }});
        f.push_back({"wind.steps",
                     [](Config& c, const std::string& v) {
                         c.scenario.wind.steps = parse_steps(v);
                         c.scenario.wind.kind = WindKind::Steps;
                     },
                     [](const Config& c) {
                         std::string s;
                         for (const auto& [t, w] : c.scenario.wind.steps) {
                             if (!s.empty()) s += ", ";
                             s += fmt17(t) + ":" + fmt17(w);
                         }
                         return s;
                     }});
        f.push_back({"wind.file",
                     [](Config& c, const std::string& v) {
                         c.scenario.wind.file = v;
                         c.scenario.wind.kind = WindKind::File;
                     },
                     [](const Config& c) { return c.scenario.wind.file; }});
#define W(key, name) \
    Field{key, \
          [](Config& c, const std::string& v) { \
              c.scenario.wind.name = parse_double(key, v); \
              c.scenario.wind.kind = WindKind::Gust; \
          }, \
          [](const Config& c) { return fmt17(c.scenario.wind.name); }}
        f.push_back(W("wind.gust.mean", gust_mean));
        f.push_back(W("wind.gust.intensity", gust_intensity));
        f.push_back(W("wind.gust.corr_time", gust_corr_time));
#undef W
        f.push_back({"wind.gust.seed",
                     [](Config& c, const std::string& v) {
                         try {
                             std::size_t pos = 0;
                             c.scenario.wind.seed = std::stoull(v, &pos);
                             if (pos != v.size()) throw std::invalid_argument(v);
                         } catch (const std::exception&) {
                             throw ConfigError("cannot parse value '" + v + "' for key wind.gust.seed");
                         }
                     },
                     [](const Config& c) { return std::to_string(c.scenario.wind.seed); }});
        // Must stay last so serialized files restore the profile kind.
        f.push_back({"wind.kind",
                     [](Config& c, const std::string& v) {
                         auto& k = c.scenario.wind.kind;
                         if (v == "constant") k = WindKind::Constant;
                         else if (v == "steps") k = WindKind::Steps;
                         else if (v == "file") k = WindKind::File;
                         else if (v == "gust") k = WindKind::Gust;
                         else throw ConfigError("wind.kind must be constant, steps, file or gust, got " + v);
                     },
                     [](const Config& c) {
                         switch (c.scenario.wind.kind) {
                         case WindKind::Constant: return std::string("constant");
                         case WindKind::Steps: return std::string("steps");
                         case WindKind::File: return std::string("file");
                         case WindKind::Gust: return std::string("gust");
                         }
                         return std::string("constant");
                     }});
        return f;
    }();
    return table;
}

}  // namespace

void validate(const PhysicalParams& p)
{
    const std::pair<const char*, double> positive[] = {
        {"m_f", p.m_f}, {"m_h", p.m_h}, {"m_b", p.m_b}, {"l", p.l}, {"r_h", p.r_h},
        {"chord", p.chord}, {"R", p.R}, {"l_t", p.l_t}, {"g", p.g}, {"a0", p.a0},
        {"tether_lin_density", p.tether_lin_density},
        {"tether_axial_stiffness", p.tether_axial_stiffness}};
    for (const auto& [name, v] : positive) require(v > 0.0, name, "> 0");
    require(p.r_h < p.R, "r_h", "< R");
    require(p.chord < p.R, "chord", "< R");
    require(p.rho_air > 0.5 && p.rho_air < 1.5, "rho_air", "in (0.5, 1.5)");
    require(p.cd0 >= 0.0, "cd0", ">= 0");
    require(p.tether_damping >= 0.0, "tether_damping", ">= 0");
}

void validate(const GainSet& g)
{
    require(g.k3 > -(g.k1 + g.k2), "k3", "> -(k1 + k2)");
    require(g.K_p2 > 0.0, "K_p2", "> 0");
    require(g.K_i2 >= 0.0, "K_i2", ">= 0");
    require(g.e_amax >= 0.0, "e_amax", ">= 0");
    require(g.e_bmax >= 0.0, "e_bmax", ">= 0");
}

void validate(const ScenarioConfig& s)
{
    require(s.dt > 0.0, "dt", "> 0");
    require(s.duration > 0.0, "duration", "> 0");
    require(s.t_switch >= 0.0, "t_switch", ">= 0");
    require(s.u_min <= s.u_max, "u_min", "<= u_max");
    require(s.u_max <= 0.0, "u_max", "<= 0");
    require(s.telemetry_interval >= 0.0, "telemetry_interval", ">= 0");
    require(s.rate_limit > 0.0, "rate_limit", "> 0");
    require(s.derivative_tau >= 0.0, "derivative_tau", ">= 0");
    require(s.z_d > 0.0, "z_d", "> 0");
    const auto& e = s.estimator;
    require(e.a_min > 0.0, "estimator.a_min", "> 0");
    require(e.beta_min > 0.0, "estimator.beta_min", "> 0");
    require(e.tolerance > 0.0, "estimator.tolerance", "> 0");
    require(e.beta_lo < e.beta_hi, "estimator.vertex_lo", "< estimator.vertex_hi");
    const auto& w = s.wind;
    switch (w.kind) {
    case WindKind::Constant:
        require(w.constant > 0.0, "wind.constant", "> 0");
        break;
    case WindKind::Steps:
        require(!w.steps.empty(), "wind.steps", "non-empty");
        for (std::size_t i = 0; i < w.steps.size(); ++i) {
            require(w.steps[i].second > 0.0, "wind.steps", "speeds > 0");
            if (i > 0) require(w.steps[i].first > w.steps[i - 1].first, "wind.steps", "strictly increasing times");
        }
        break;
    case WindKind::File:
        require(!w.file.empty(), "wind.file", "non-empty path");
        break;
    case WindKind::Gust:
        require(w.gust_mean > 0.0, "wind.gust.mean", "> 0");
        require(w.gust_intensity >= 0.0, "wind.gust.intensity", ">= 0");
        require(w.gust_corr_time > 0.0, "wind.gust.corr_time", "> 0");
        break;
    }
}

Config parse_config(const std::string& text)
{
    Config c;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim_ws(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim_ws(line.substr(0, eq));
        const std::string value = trim_ws(line.substr(eq + 1));
        bool found = false;
        for (const auto& f : fields()) {
            if (f.key == key) {
                f.set(c, value);
                found = true;
                break;
            }
        }
        if (!found) throw ConfigError("line " + std::to_string(lineno) + ": unknown key " + key);
    }
    validate(c.physical);
    validate(c.gains);
    validate(c.scenario);
    return c;
}

Config load_config(const std::string& path)
{
    std::ifstream f(path);
    if (!f) throw ConfigError("cannot open config file: " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str());
}

std::string serialize_config(const Config& c)
{
    std::string out;
    for (const auto& f : fields()) out += f.key + " = " + f.get(c) + "\n";
    return out;
}

}  // namespace autogyro
