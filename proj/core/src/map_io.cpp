#include "tetherplan/map_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "tetherplan/errors.hpp"

namespace tetherplan {

namespace {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open map file: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double require_number(const nlohmann::json& j, const char* field, const std::string& name) {
    if (!j.contains(field)) throw ParseError(name + ": missing field '" + field + "'");
    if (!j[field].is_number()) throw ParseError(name + ": field '" + field + "' must be a number");
    return j[field].get<double>();
}

} // namespace

VoxelMap parse_map_json(const std::string& text, const std::string& name) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(name + ": " + e.what());
    }
    if (!j.is_object()) throw ParseError(name + ": top-level value must be an object");

    const double resolution = require_number(j, "resolution", name);
    if (!(resolution > 0.0)) throw ValidationError(name + ": resolution must be positive");

    if (!j.contains("dims") || !j["dims"].is_array() || j["dims"].size() != 3)
        throw ParseError(name + ": field 'dims' must be an array [nx, ny, nz]");
    GridDims dims{j["dims"][0].get<int>(), j["dims"][1].get<int>(), j["dims"][2].get<int>()};
    if (dims.nx < 1 || dims.ny < 1 || dims.nz < 1)
        throw ValidationError(name + ": dims must be at least 1 in every axis");

    Point3 origin{0, 0, 0};
    if (j.contains("origin")) {
        if (!j["origin"].is_array() || j["origin"].size() != 3)
            throw ParseError(name + ": field 'origin' must be an array [x, y, z]");
        origin = {j["origin"][0].get<double>(), j["origin"][1].get<double>(),
                  j["origin"][2].get<double>()};
    }

    VoxelMap map(resolution, dims, origin);
    if (j.contains("occupied")) {
        if (!j["occupied"].is_array())
            throw ParseError(name + ": field 'occupied' must be an array of [i, j, k] triples");
        std::size_t idx = 0;
        for (const auto& cell : j["occupied"]) {
            if (!cell.is_array() || cell.size() != 3)
                throw ParseError(name + ": occupied[" + std::to_string(idx) +
                                 "] must be an [i, j, k] triple");
            const CellIndex c{cell[0].get<int>(), cell[1].get<int>(), cell[2].get<int>()};
            if (!map.in_bounds(c))
                throw ValidationError(name + ": occupied[" + std::to_string(idx) +
                                      "] = [" + std::to_string(c.i) + ", " + std::to_string(c.j) +
                                      ", " + std::to_string(c.k) + "] lies outside dims");
            map.set_occupied(c);
            ++idx;
        }
    }
    return map;
}

VoxelMap parse_map_ascii(const std::string& text, const std::string& name) {
    std::istringstream in(text);
    std::string line;
    int line_no = 0;

    double resolution = 1.0;
    Point3 origin{0, 0, 0};

    // Layers collected bottom-first; each layer is a list of row strings
    // (row index k, column index i).
    std::vector<std::vector<std::string>> layers;
    std::vector<std::string> current;
    bool in_grid = false;

    auto flush_layer = [&] {
        if (!current.empty()) {
            layers.push_back(current);
            current.clear();
        }
    };

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string::npos) {
            flush_layer();
            continue;
        }
        const char c = line[first];
        if (!in_grid && (c != '#' && c != '.')) {
            std::istringstream ls(line);
            std::string key;
            ls >> key;
            if (key == "resolution") {
                if (!(ls >> resolution) || !(resolution > 0.0))
                    throw ValidationError(name + ":" + std::to_string(line_no) +
                                          ": resolution must be a positive number");
            } else if (key == "origin") {
                if (!(ls >> origin.x >> origin.y >> origin.z))
                    throw ParseError(name + ":" + std::to_string(line_no) +
                                     ": origin needs three numbers");
            } else {
                throw ParseError(name + ":" + std::to_string(line_no) + ": unknown header '" +
                                 key + "'");
            }
            continue;
        }
        in_grid = true;
        for (char ch : line) {
            if (ch != '#' && ch != '.')
                throw ParseError(name + ":" + std::to_string(line_no) +
                                 ": grid rows may contain only '#' and '.'");
        }
        current.push_back(line);
    }
    flush_layer();

    if (layers.empty()) throw ParseError(name + ": no grid layers found");
    const int ny = static_cast<int>(layers.size());
    const int nz = static_cast<int>(layers[0].size());
    const int nx = static_cast<int>(layers[0][0].size());
    for (int j = 0; j < ny; ++j) {
        if (static_cast<int>(layers[j].size()) != nz)
            throw ParseError(name + ": layer " + std::to_string(j) + " has " +
                             std::to_string(layers[j].size()) + " rows, expected " +
                             std::to_string(nz));
        for (int k = 0; k < nz; ++k)
            if (static_cast<int>(layers[j][k].size()) != nx)
                throw ParseError(name + ": layer " + std::to_string(j) + " row " +
                                 std::to_string(k) + " has " +
                                 std::to_string(layers[j][k].size()) + " columns, expected " +
                                 std::to_string(nx));
    }

    VoxelMap map(resolution, {nx, ny, nz}, origin);
    for (int j = 0; j < ny; ++j)
        for (int k = 0; k < nz; ++k)
            for (int i = 0; i < nx; ++i)
                if (layers[j][k][i] == '#') map.set_occupied({i, j, k});
    return map;
}

VoxelMap load_map(const std::filesystem::path& path) {
    const std::string text = read_file(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first == std::string::npos) throw ParseError(path.string() + ": file is empty");
    if (text[first] == '{') return parse_map_json(text, path.string());
    return parse_map_ascii(text, path.string());
}

std::string map_to_json(const VoxelMap& map) {
    nlohmann::ordered_json j;
    j["resolution"] = map.resolution();
    j["dims"] = {map.dims().nx, map.dims().ny, map.dims().nz};
    j["origin"] = {map.origin().x, map.origin().y, map.origin().z};
    auto occ = nlohmann::ordered_json::array();
    for (const auto& c : map.occupied_cells()) occ.push_back({c.i, c.j, c.k});
    j["occupied"] = std::move(occ);
    return j.dump(2) + "\n";
}

void save_map_json(const VoxelMap& map, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write map file: " + path.string());
    out << map_to_json(map);
}

} // namespace tetherplan
