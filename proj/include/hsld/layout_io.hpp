#pragma once

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "errors.hpp"
#include "geometry.hpp"

namespace hsld {

// On-disk layout formats:
//   JSON: {"grid": {"L": 0.1, "N": 200}, "placements": [{"id", "cx", "cy"}...]}
//   CSV:  header `id,cx,cy`, one placement per row (grid defaults to 0.1/200).

inline std::string layout_to_json(const Layout& layout) {
    nlohmann::ordered_json j;
    j["grid"]["L"] = layout.grid.side_length_m;
    j["grid"]["N"] = layout.grid.cells_per_side;
    j["placements"] = nlohmann::ordered_json::array();
    for (const auto& p : layout.placements) {
        nlohmann::ordered_json e;
        e["id"] = p.component_id;
        e["cx"] = p.cx;
        e["cy"] = p.cy;
        j["placements"].push_back(std::move(e));
    }
    return j.dump(2) + "\n";
}

inline Layout layout_from_json(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("layout json: ") + e.what());
    }
    Layout layout;
    try {
        layout.grid = GridSystem::square(j.at("grid").at("L").get<double>(),
                                         j.at("grid").at("N").get<int>());
        for (const auto& e : j.at("placements"))
            layout.placements.push_back(
                {e.at("id").get<int>(), e.at("cx").get<int>(), e.at("cy").get<int>()});
    } catch (const nlohmann::json::exception& e) {
        throw IoError(std::string("layout json: ") + e.what());
    }
    return layout;
}

inline std::string layout_to_csv(const Layout& layout) {
    std::ostringstream out;
    out << "id,cx,cy\n";
    for (const auto& p : layout.placements)
        out << p.component_id << ',' << p.cx << ',' << p.cy << '\n';
    return out.str();
}

inline Layout layout_from_csv(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line) || line != "id,cx,cy")
        throw IoError("layout csv: expected header `id,cx,cy`");
    Layout layout;  // CSV carries no grid; default applies
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        Placement p;
        char c1 = 0, c2 = 0;
        std::istringstream row(line);
        if (!(row >> p.component_id >> c1 >> p.cx >> c2 >> p.cy) || c1 != ',' || c2 != ',')
            throw IoError("layout csv: bad row `" + line + "`");
        layout.placements.push_back(p);
    }
    return layout;
}

inline std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << text;
    if (!out) throw IoError("write failed for " + path.string());
}

// Dispatches on extension: .json or .csv.
inline void save_layout(const Layout& layout, const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".json")
        write_text_file(path, layout_to_json(layout));
    else if (ext == ".csv")
        write_text_file(path, layout_to_csv(layout));
    else
        throw IoError("layout files use .json or .csv, got " + path.string());
}

inline Layout load_layout(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".json") return layout_from_json(read_text_file(path));
    if (ext == ".csv") return layout_from_csv(read_text_file(path));
    throw IoError("layout files use .json or .csv, got " + path.string());
}

}
