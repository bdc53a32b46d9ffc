#include "cbf/config.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>
#include <sstream>

#include "cbf/csv.hpp"

namespace cbf {

namespace {

constexpr std::array kBaseKeys = {
    "robot_radius", "obs_radius", "obs_x", "obs_y", "init_x", "init_y",   "init_vx",
    "init_vy",      "y_ref",      "vx_ref", "vy_ref", "p_vx",  "p_vy",  "p_y",
    "u_min",        "u_max",      "dt",    "duration", "approach",
};

constexpr std::array kApproachKeys = {"lambda1", "lambda2", "gamma", "bound_gamma_r1"};

constexpr std::array kSweepKeys = {"lambda1_min", "lambda1_max", "lambda1_step",
                                   "lambda2_min", "lambda2_max", "lambda2_step"};

std::string trim(const std::string& s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos)
        return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

template <std::size_t N>
bool contains(const std::array<const char*, N>& keys, const std::string& key)
{
    return std::any_of(keys.begin(), keys.end(), [&](const char* k) { return key == k; });
}

void reject_unknown(const KeyValues& kv, bool allow_sweep_keys)
{
    for (const auto& [key, value] : kv) {
        if (contains(kBaseKeys, key) || contains(kApproachKeys, key))
            continue;
        if (allow_sweep_keys && contains(kSweepKeys, key))
            continue;
        throw ConfigError(key, "unknown config key '" + key + "'");
    }
}

const std::string& need(const KeyValues& kv, const std::string& key)
{
    const auto it = kv.find(key);
    if (it == kv.end())
        throw ConfigError(key, "missing required config key '" + key + "'");
    return it->second;
}

double number(const KeyValues& kv, const std::string& key)
{
    const auto& text = need(kv, key);
    try {
        return parse_double(text);
    } catch (const std::invalid_argument&) {
        throw ConfigError(key, "config key '" + key + "' is not a number: '" + text + "'");
    }
}

double number_or(const KeyValues& kv, const std::string& key, double fallback)
{
    return kv.count(key) ? number(kv, key) : fallback;
}

ApproachKind approach_kind(const KeyValues& kv)
{
    const auto& text = need(kv, "approach");
    if (text == "hocbf")
        return ApproachKind::hocbf;
    if (text == "ttcbf")
        return ApproachKind::ttcbf;
    throw ConfigError("approach", "config key 'approach' must be hocbf or ttcbf, got '" + text + "'");
}

SimConfig base_config(const KeyValues& kv)
{
    SimConfig c;
    c.obstacle.r_robot = number(kv, "robot_radius");
    c.obstacle.r_obs = number(kv, "obs_radius");
    c.obstacle.x_obs = number(kv, "obs_x");
    c.obstacle.y_obs = number(kv, "obs_y");
    c.initial = {number(kv, "init_x"), number(kv, "init_y"), number(kv, "init_vx"),
                 number(kv, "init_vy")};
    c.refs = {number(kv, "vx_ref"), number(kv, "vy_ref"), number(kv, "y_ref")};
    c.penalties = {number(kv, "p_vx"), number(kv, "p_vy"), number(kv, "p_y")};
    c.u_min = number(kv, "u_min");
    c.u_max = number(kv, "u_max");
    c.dt = number(kv, "dt");
    c.duration = number(kv, "duration");
    return c;
}

void validate_or_rethrow(const SimConfig& c)
{
    try {
        c.validate();
    } catch (const std::invalid_argument& e) {
        // messages start with the key name
        const std::string what = e.what();
        throw ConfigError(what.substr(0, what.find(' ')), what);
    }
}

}  // namespace

KeyValues parse_key_values(std::istream& in)
{
    KeyValues kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line.erase(hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("", "line " + std::to_string(line_no) + ": expected 'key = value'");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError("", "line " + std::to_string(line_no) + ": empty key");
        if (!kv.emplace(key, value).second)
            throw ConfigError(key, "duplicate config key '" + key + "'");
    }
    return kv;
}

SimConfig sim_config_from_keys(const KeyValues& kv)
{
    reject_unknown(kv, false);
    SimConfig c = base_config(kv);
    if (approach_kind(kv) == ApproachKind::hocbf)
        c.approach = HocbfApproach{number(kv, "lambda1"), number(kv, "lambda2")};
    else
        c.approach = TtcbfApproach{number(kv, "lambda1"), number_or(kv, "gamma", 0.0),
                                   number_or(kv, "bound_gamma_r1", 0.0)};
    validate_or_rethrow(c);
    return c;
}

SweepSpec sweep_spec_from_keys(const KeyValues& kv)
{
    reject_unknown(kv, true);
    const ApproachKind kind = approach_kind(kv);
    SweepSpec spec = kind == ApproachKind::hocbf ? SweepSpec::hocbf_default()
                                                 : SweepSpec::ttcbf_default();
    spec.base = base_config(kv);
    if (kind == ApproachKind::hocbf)
        spec.base.approach = HocbfApproach{};
    else
        spec.base.approach = TtcbfApproach{0.5, number_or(kv, "gamma", 0.0),
                                           number_or(kv, "bound_gamma_r1", 0.0)};
    validate_or_rethrow(spec.base);

    spec.lambda1 = {number_or(kv, "lambda1_min", spec.lambda1.min),
                    number_or(kv, "lambda1_max", spec.lambda1.max),
                    number_or(kv, "lambda1_step", spec.lambda1.step)};
    spec.lambda2 = {number_or(kv, "lambda2_min", spec.lambda2.min),
                    number_or(kv, "lambda2_max", spec.lambda2.max),
                    number_or(kv, "lambda2_step", spec.lambda2.step)};

    auto check_range = [](const GridRange& r, const std::string& name) {
        try {
            (void)r.values();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(name + "_step", name + ": " + e.what());
        }
    };
    check_range(spec.lambda1, "lambda1");
    if (kind == ApproachKind::hocbf) {
        check_range(spec.lambda2, "lambda2");
        if (!(spec.lambda1.min > 0.0) || !(spec.lambda2.min > 0.0))
            throw ConfigError("lambda1_min", "hocbf sweep lambdas must be positive");
    } else if (!(spec.lambda1.min > 0.0) || spec.lambda1.values().back() > 1.0) {
        throw ConfigError("lambda1_min", "ttcbf sweep lambda1 must stay inside (0, 1]");
    }
    return spec;
}

namespace {

KeyValues read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("", "cannot open config file '" + path + "'");
    return parse_key_values(in);
}

}  // namespace

SimConfig load_sim_config(const std::string& path)
{
    return sim_config_from_keys(read_file(path));
}

SweepSpec load_sweep_spec(const std::string& path)
{
    return sweep_spec_from_keys(read_file(path));
}

std::string to_config_text(const SimConfig& c)
{
    std::ostringstream out;
    auto put = [&](const char* key, double v) { out << key << " = " << format_double(v) << '\n'; };
    put("robot_radius", c.obstacle.r_robot);
    put("obs_radius", c.obstacle.r_obs);
    put("obs_x", c.obstacle.x_obs);
    put("obs_y", c.obstacle.y_obs);
    put("init_x", c.initial.x);
    put("init_y", c.initial.y);
    put("init_vx", c.initial.vx);
    put("init_vy", c.initial.vy);
    put("y_ref", c.refs.y_ref);
    put("vx_ref", c.refs.vx_ref);
    put("vy_ref", c.refs.vy_ref);
    put("p_vx", c.penalties.p_vx);
    put("p_vy", c.penalties.p_vy);
    put("p_y", c.penalties.p_y);
    put("u_min", c.u_min);
    put("u_max", c.u_max);
    put("dt", c.dt);
    put("duration", c.duration);
    out << "approach = " << approach_name(c.approach) << '\n';
    if (const auto* h = std::get_if<HocbfApproach>(&c.approach)) {
        put("lambda1", h->lambda1);
        put("lambda2", h->lambda2);
    } else {
        const auto& t = std::get<TtcbfApproach>(c.approach);
        put("lambda1", t.lambda1);
        put("gamma", t.gamma);
        put("bound_gamma_r1", t.bound_gamma_r1);
    }
    return out.str();
}

}  // namespace cbf
