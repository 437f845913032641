#include "holouav/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace holouav {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) {
    throw std::runtime_error("config: " + what);
}

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& section) {
    for (const auto& [key, value] : j.items()) {
        bool known = false;
        for (const char* a : allowed)
            if (key == a)
                known = true;
        if (!known)
            fail("unknown key \"" + key + "\" in " + section);
    }
}

template <typename T>
T get(const json& j, const char* key, T fallback) {
    if (!j.contains(key))
        return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        fail(std::string("bad value for \"") + key + "\"");
    }
}

Vec3<double> get_vec3(const json& j, const char* key, const Vec3<double>& fallback) {
    if (!j.contains(key))
        return fallback;
    const json& v = j.at(key);
    if (!v.is_array() || v.size() != 3 || !v[0].is_number() || !v[1].is_number() ||
        !v[2].is_number())
        fail(std::string("\"") + key + "\" must be an array of three numbers");
    return Vec3<double>(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

void parse_user_area(const json& j, Scenario& sc) {
    require_keys(j, {"x_min", "x_max", "y_min", "y_max"}, "scenario.user_area");
    sc.user_x_min = get(j, "x_min", sc.user_x_min);
    sc.user_x_max = get(j, "x_max", sc.user_x_max);
    sc.user_y_min = get(j, "y_min", sc.user_y_min);
    sc.user_y_max = get(j, "y_max", sc.user_y_max);
}

void parse_surface(const json& j, SurfaceConfig<double>& cfg) {
    require_keys(j,
                 {"elements_x", "elements_y", "num_feeds", "spacing_x", "spacing_y",
                  "free_space_wavenumber", "surface_wavenumber"},
                 "scenario.surface");
    cfg.elements_x = get<Index>(j, "elements_x", cfg.elements_x);
    cfg.elements_y = get<Index>(j, "elements_y", cfg.elements_y);
    cfg.num_feeds = get<Index>(j, "num_feeds", cfg.num_feeds);
    cfg.spacing_x = get(j, "spacing_x", cfg.spacing_x);
    cfg.spacing_y = get(j, "spacing_y", cfg.spacing_y);
    cfg.free_space_wavenumber = get(j, "free_space_wavenumber", cfg.free_space_wavenumber);
    cfg.surface_wavenumber = get(j, "surface_wavenumber", cfg.surface_wavenumber);
}

void parse_region(const json& j, Region& region) {
    require_keys(
        j, {"type", "x_min", "x_max", "y_min", "y_max", "center", "radius", "z_min", "z_max"},
        "scenario.region");
    const std::string type = get<std::string>(j, "type", "rectangle");
    if (type == "rectangle") {
        region = Region::rectangle(get(j, "x_min", 0.0), get(j, "x_max", 100.0),
                                   get(j, "y_min", 0.0), get(j, "y_max", 100.0),
                                   get(j, "z_min", 10.0), get(j, "z_max", 50.0));
    } else if (type == "circle") {
        if (!j.contains("radius"))
            fail("circular region needs a \"radius\"");
        Vec2<double> center(50.0, 50.0);
        if (j.contains("center")) {
            const json& c = j.at("center");
            if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
                fail("\"center\" must be an array of two numbers");
            center = Vec2<double>(c[0].get<double>(), c[1].get<double>());
        }
        region = Region::circle(center, get(j, "radius", 0.0), get(j, "z_min", 10.0),
                                get(j, "z_max", 50.0));
    } else {
        fail("region type must be \"rectangle\" or \"circle\"");
    }
}

void parse_scenario(const json& j, Scenario& sc) {
    require_keys(j,
                 {"num_users", "user_area", "surface", "q0", "region", "p_max", "snr_db", "beta0",
                  "master_seed"},
                 "scenario");
    sc.num_users = get<Index>(j, "num_users", sc.num_users);
    if (j.contains("user_area"))
        parse_user_area(j.at("user_area"), sc);
    if (j.contains("surface"))
        parse_surface(j.at("surface"), sc.surface);
    sc.q0 = get_vec3(j, "q0", sc.q0);
    if (j.contains("region"))
        parse_region(j.at("region"), sc.region);
    sc.p_max = get(j, "p_max", sc.p_max);
    sc.snr_db = get(j, "snr_db", sc.snr_db);
    sc.beta0 = get(j, "beta0", sc.beta0);
    sc.master_seed = get<std::uint64_t>(j, "master_seed", sc.master_seed);
}

void parse_sweep(const json& j, SweepSpec& spec) {
    require_keys(j, {"snr_db", "rhs", "users", "realizations", "mode", "trace"}, "sweep");
    if (j.contains("snr_db"))
        spec.snr_db_list = get<std::vector<double>>(j, "snr_db", {});
    if (j.contains("rhs")) {
        const auto names = get<std::vector<std::string>>(j, "rhs", {});
        spec.size_list.clear();
        for (const std::string& n : names)
            spec.size_list.push_back(parse_surface_size(n));
    }
    if (j.contains("users"))
        spec.d_list = get<std::vector<Index>>(j, "users", {});
    spec.realizations = get(j, "realizations", spec.realizations);
    if (j.contains("mode"))
        spec.mode = parse_mode(get<std::string>(j, "mode", "both"));
    spec.emit_trajectories = get(j, "trace", spec.emit_trajectories);
}

} // namespace

std::pair<Index, Index> parse_surface_size(const std::string& text) {
    const auto sep = text.find('x');
    std::size_t ax = 0, ay = 0;
    long x = 0, y = 0;
    try {
        if (sep == std::string::npos || sep == 0 || sep + 1 >= text.size())
            throw std::invalid_argument(text);
        x = std::stol(text.substr(0, sep), &ax);
        y = std::stol(text.substr(sep + 1), &ay);
    } catch (const std::exception&) {
        throw std::invalid_argument("surface size must look like \"8x8\": " + text);
    }
    if (ax != sep || ay != text.size() - sep - 1 || x < 1 || y < 1)
        throw std::invalid_argument("surface size must look like \"8x8\": " + text);
    return {static_cast<Index>(x), static_cast<Index>(y)};
}

SweepMode parse_mode(const std::string& text) {
    if (text == "proposed")
        return SweepMode::Proposed;
    if (text == "benchmark")
        return SweepMode::Benchmark;
    if (text == "both")
        return SweepMode::Both;
    throw std::invalid_argument("mode must be proposed, benchmark or both: " + text);
}

FileConfig parse_config(const std::string& text) {
    json j;
    try {
        j = json::parse(text, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        fail(e.what());
    }
    if (!j.is_object())
        fail("top level must be an object");
    require_keys(j, {"scenario", "sweep"}, "top level");
    FileConfig cfg;
    if (j.contains("scenario"))
        parse_scenario(j.at("scenario"), cfg.scenario);
    if (j.contains("sweep"))
        parse_sweep(j.at("sweep"), cfg.sweep);
    return cfg;
}

FileConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        fail("cannot read " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace holouav
