#include "parsol/sceneio.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "parsol/error.hpp"
#include "parsol/version.hpp"

namespace parsol::sceneio {

using nlohmann::json;

static json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("invalid JSON in '") + path + "': " + e.what());
    }
}

std::vector<FootprintSpec> load_footprints(const std::string& path) {
    const json doc = read_json(path);
    if (!doc.is_array()) throw ParseError("footprint file must be a JSON array");
    std::vector<FootprintSpec> specs;
    specs.reserve(doc.size());
    try {
        for (const auto& item : doc) {
            FootprintSpec spec;
            spec.footprint.name = item.at("name").get<std::string>();
            if (item.contains("levels")) spec.footprint.levels = item.at("levels").get<int>();
            if (item.contains("height"))
                spec.explicit_height = item.at("height").get<double>();
            for (const auto& v : item.at("vertices")) {
                if (!v.is_array() || v.size() != 2)
                    throw ParseError("vertex of '" + spec.footprint.name +
                                     "' must be an [x, y] pair");
                spec.footprint.vertices.push_back(
                    Vec2{v[0].get<double>(), v[1].get<double>()});
            }
            if (item.contains("facade_labels"))
                for (const auto& [label, edge] : item.at("facade_labels").items())
                    spec.facade_labels[label] = edge.get<int>();
            specs.push_back(std::move(spec));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad footprint entry: ") + e.what());
    }
    if (specs.empty()) throw InputError("footprint file '" + path + "' is empty");
    return specs;
}

std::map<std::string, StairstepEntry> load_stairsteps(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open stairstep file '" + path + "'");
    std::map<std::string, StairstepEntry> entries;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#' || line == "\r") continue;
        std::stringstream ss(line);
        std::string name, field;
        if (!std::getline(ss, name, ',')) throw ParseError("missing building name", line_no);
        if (name == "name") continue; // header row
        StairstepEntry entry;
        if (!std::getline(ss, field, ','))
            throw ParseError("missing step height for '" + name + "'", line_no);
        try {
            entry.step_height = std::stod(field);
            while (std::getline(ss, field, ',')) entry.counts.push_back(std::stoi(field));
        } catch (const std::exception&) {
            throw ParseError("bad stairstep number for '" + name + "'", line_no);
        }
        if (entry.counts.empty())
            throw ParseError("no flight counts for '" + name + "'", line_no);
        entries[name] = std::move(entry);
    }
    return entries;
}

city::CityScene build_scene(const std::vector<FootprintSpec>& specs,
                            const std::map<std::string, StairstepEntry>& stairsteps,
                            double level1_h, double floor_h, double ground_albedo) {
    if (ground_albedo < 0.0 || ground_albedo > 1.0)
        throw InputError("ground albedo must be within [0,1]");
    city::CityScene scene;
    scene.ground_albedo = ground_albedo;
    for (const auto& spec : specs) {
        const auto& name = spec.footprint.name;
        double height = 0.0;
        if (auto it = stairsteps.find(name); it != stairsteps.end()) {
            height = city::estimate_height_from_stairsteps(it->second.counts,
                                                           it->second.step_height);
        } else if (spec.explicit_height) {
            if (*spec.explicit_height <= 0.0)
                throw InputError("building '" + name + "' has non-positive height");
            height = *spec.explicit_height;
        } else if (spec.footprint.levels > 0) {
            height = city::estimate_height_from_levels(spec.footprint.levels, level1_h, floor_h);
        } else {
            throw InputError("building '" + name + "' has neither levels nor height");
        }
        auto prism = city::extrude(spec.footprint, height);
        prism.facade_labels = spec.facade_labels;
        for (const auto& [label, edge] : prism.facade_labels)
            if (edge < 0 || edge >= static_cast<int>(prism.footprint.vertices.size()))
                throw InputError("facade label '" + label + "' of '" + name +
                                 "' points at edge " + std::to_string(edge) +
                                 ", which does not exist");
        scene.buildings.push_back(std::move(prism));
    }
    return scene;
}

void save_scene(const std::string& path, const city::CityScene& scene) {
    json doc;
    doc["format"] = "parsol-scene";
    doc["version"] = kVersion;
    doc["ground_albedo"] = scene.ground_albedo;
    doc["has_ground"] = scene.has_ground;
    json buildings = json::array();
    for (const auto& b : scene.buildings) {
        json jb;
        jb["name"] = b.name;
        jb["height"] = b.height;
        if (b.footprint.levels > 0) jb["levels"] = b.footprint.levels;
        json verts = json::array();
        for (const auto& v : b.footprint.vertices) verts.push_back({v.x, v.y});
        jb["vertices"] = verts;
        if (!b.facade_labels.empty()) {
            json labels;
            for (const auto& [label, edge] : b.facade_labels) labels[label] = edge;
            jb["facade_labels"] = labels;
        }
        json tris = json::array();
        for (const auto& t : b.triangles)
            tris.push_back({{t.a.x, t.a.y, t.a.z}, {t.b.x, t.b.y, t.b.z}, {t.c.x, t.c.y, t.c.z}});
        jb["triangles"] = tris;
        buildings.push_back(std::move(jb));
    }
    doc["buildings"] = std::move(buildings);

    std::ofstream out(path);
    if (!out) throw InputError("cannot write scene file '" + path + "'");
    out << doc.dump(1) << "\n";
}

city::CityScene load_scene(const std::string& path) {
    const json doc = read_json(path);
    try {
        if (doc.value("format", "") != "parsol-scene")
            throw ParseError("'" + path + "' is not a scene file");
        city::CityScene scene;
        scene.ground_albedo = doc.value("ground_albedo", 0.0);
        scene.has_ground = doc.value("has_ground", true);
        for (const auto& jb : doc.at("buildings")) {
            city::Footprint fp;
            fp.name = jb.at("name").get<std::string>();
            fp.levels = jb.value("levels", 0);
            for (const auto& v : jb.at("vertices"))
                fp.vertices.push_back(Vec2{v[0].get<double>(), v[1].get<double>()});
            // Triangles are regenerated; the stored list serves external tools.
            auto prism = city::extrude(fp, jb.at("height").get<double>());
            if (jb.contains("facade_labels"))
                for (const auto& [label, edge] : jb.at("facade_labels").items())
                    prism.facade_labels[label] = edge.get<int>();
            scene.buildings.push_back(std::move(prism));
        }
        return scene;
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad scene file: ") + e.what());
    }
}

FacadeRef resolve_facade(const city::CityScene& scene, const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon != std::string::npos) {
        FacadeRef ref;
        ref.building = spec.substr(0, colon);
        const std::string edge = spec.substr(colon + 1);
        const auto& prism = scene.building(ref.building); // throws if unknown
        if (auto it = prism.facade_labels.find(edge); it != prism.facade_labels.end()) {
            ref.edge_index = it->second;
            ref.label = edge;
            return ref;
        }
        try {
            ref.edge_index = std::stoi(edge);
        } catch (const std::exception&) {
            throw InputError("facade '" + spec + "': '" + edge +
                             "' is neither a label nor an edge index");
        }
        const int n_edges = static_cast<int>(prism.footprint.vertices.size());
        if (ref.edge_index < 0 || ref.edge_index >= n_edges)
            throw InputError("facade '" + spec + "': edge index out of range, building has " +
                             std::to_string(n_edges) + " edges");
        ref.label = spec;
        return ref;
    }

    // Bare label: search every building, demand uniqueness.
    FacadeRef ref;
    int matches = 0;
    for (const auto& b : scene.buildings) {
        if (auto it = b.facade_labels.find(spec); it != b.facade_labels.end()) {
            ref.building = b.name;
            ref.edge_index = it->second;
            ref.label = spec;
            ++matches;
        }
    }
    if (matches == 0) throw InputError("no facade labeled '" + spec + "' in scene");
    if (matches > 1)
        throw InputError("facade label '" + spec + "' is ambiguous; qualify as building:label");
    return ref;
}

} // namespace parsol::sceneio
