#include "tetherplan/scenario.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tetherplan/errors.hpp"
#include "tetherplan/map_io.hpp"

namespace tetherplan {

namespace {

Point3 parse_point(const nlohmann::json& j, const std::string& field, const std::string& name) {
    if (!j.is_array() || j.size() != 3)
        throw ParseError(name + ": field '" + field + "' must be an array [x, y, z]");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

} // namespace

ScenarioSpec parse_scenario(const std::string& text, const std::string& name,
                            const std::filesystem::path& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(name + ": top-level value must be an object");

    ScenarioSpec s;
    if (!j.contains("map") || !j["map"].is_string())
        throw ParseError(name + ": missing string field 'map'");
    s.map_ref = j["map"].get<std::string>();
    s.map_path = base_dir / s.map_ref;

    if (!j.contains("planner") || !j["planner"].is_string())
        throw ParseError(name + ": missing string field 'planner'");
    s.planner = j["planner"].get<std::string>();
    if (s.planner != "raycast" && s.planner != "contact")
        throw ValidationError(name + ": planner must be 'raycast' or 'contact', got '" +
                              s.planner + "'");

    for (const char* field : {"reel", "start", "goal"})
        if (!j.contains(field))
            throw ParseError(name + ": missing field '" + std::string(field) + "'");
    s.reel = parse_point(j["reel"], "reel", name);
    s.start = parse_point(j["start"], "start", name);
    s.goal = parse_point(j["goal"], "goal", name);
    if (j.contains("mid")) {
        if (!j["mid"].is_array())
            throw ParseError(name + ": field 'mid' must be an array of points");
        int idx = 0;
        for (const auto& m : j["mid"])
            s.mid_points.push_back(parse_point(m, "mid[" + std::to_string(idx++) + "]", name));
    }

    if (j.contains("inflate")) {
        s.inflate = j["inflate"].get<double>();
        if (s.inflate < 0.0) throw ValidationError(name + ": inflate must be non-negative");
    }
    if (j.contains("resolution")) {
        const double r = j["resolution"].get<double>();
        if (!(r > 0.0)) throw ValidationError(name + ": resolution must be positive");
        s.resolution_override = r;
    }
    if (j.contains("prm")) {
        const auto& p = j["prm"];
        if (p.contains("samples")) s.prm.n_samples = p["samples"].get<int>();
        if (p.contains("k")) s.prm.k_neighbors = p["k"].get<int>();
        if (p.contains("seed")) s.prm.seed = p["seed"].get<uint64_t>();
    }
    if (j.contains("noise")) {
        const auto& nj = j["noise"];
        if (nj.contains("sigma_cp")) s.noise.sigma_cp = nj["sigma_cp"].get<double>();
        if (nj.contains("sigma_drift")) s.noise.sigma_drift = nj["sigma_drift"].get<double>();
        if (nj.contains("sigma_loc")) s.noise.sigma_loc = nj["sigma_loc"].get<double>();
        if (nj.contains("seed")) s.noise.seed = nj["seed"].get<uint64_t>();
        if (s.noise.sigma_cp < 0.0 || s.noise.sigma_drift < 0.0 || s.noise.sigma_loc < 0.0)
            throw ValidationError(name + ": noise sigmas must be non-negative");
    }
    if (j.contains("r_acc")) {
        s.r_acc = j["r_acc"].get<double>();
        if (!(s.r_acc > 0.0)) throw ValidationError(name + ": r_acc must be positive");
    }
    if (j.contains("speed")) {
        s.speed = j["speed"].get<double>();
        if (!(s.speed > 0.0)) throw ValidationError(name + ": speed must be positive");
    }
    if (j.contains("rate")) {
        s.rate = j["rate"].get<double>();
        if (!(s.rate > 0.0)) throw ValidationError(name + ": rate must be positive");
    }
    return s;
}

ScenarioSpec load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open scenario file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str(), path.string(), path.parent_path());
}

VoxelMap load_scenario_map(const ScenarioSpec& scenario) {
    VoxelMap map = load_map(scenario.map_path);
    if (scenario.resolution_override) {
        VoxelMap rescaled(*scenario.resolution_override, map.dims(), map.origin());
        for (const auto& c : map.occupied_cells()) rescaled.set_occupied(c);
        map = rescaled;
    }
    validate_scenario(scenario, map);
    return map;
}

void validate_scenario(const ScenarioSpec& scenario, const VoxelMap& map) {
    auto check = [&](const Point3& p, const std::string& what) {
        if (!p.finite() || !map.in_bounds(p))
            throw ValidationError("scenario: " + what + " lies outside the map bounds");
    };
    check(scenario.reel, "reel");
    check(scenario.start, "start");
    check(scenario.goal, "goal");
    for (std::size_t i = 0; i < scenario.mid_points.size(); ++i)
        check(scenario.mid_points[i], "mid[" + std::to_string(i) + "]");
}

} // namespace tetherplan
