#include <authlabel/cloud_json.hpp>

#include <nlohmann/json.hpp>

#include <fstream>
#include <sstream>

namespace authlabel {

using nlohmann::json;

std::string cloud_to_json(const PointCloud& cloud) {
    json j;
    j["kind"] = to_string(cloud.kind);
    auto& points = j["points"] = json::array();
    for (const Point3& p : cloud.points) points.push_back({p.x, p.y, p.z});
    auto& radii = j["radii"] = json::array();
    for (const ErrorRadii& r : cloud.radii) radii.push_back({r.sx, r.sy, r.sz});
    return j.dump(2);
}

PointCloud cloud_from_json(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("invalid cloud JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind") || !j.contains("points") || !j.contains("radii"))
        throw std::invalid_argument("cloud JSON needs kind, points and radii fields");

    PointCloud cloud;
    cloud.kind = label_kind_from_string(j["kind"].get<std::string>());
    for (const auto& p : j["points"]) {
        if (!p.is_array() || p.size() != 3)
            throw std::invalid_argument("each point must be an [x, y, z] triple");
        cloud.points.push_back(
            {p[0].get<std::int64_t>(), p[1].get<std::int64_t>(), p[2].get<std::int64_t>()});
    }
    for (const auto& r : j["radii"]) {
        if (!r.is_array() || r.size() != 3)
            throw std::invalid_argument("each radii entry must be an [sx, sy, sz] triple");
        cloud.radii.push_back({r[0].get<int>(), r[1].get<int>(), r[2].get<int>()});
    }
    if (cloud.points.size() != cloud.radii.size())
        throw std::invalid_argument("points and radii arrays differ in length");
    return cloud;
}

PointCloud load_cloud(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open cloud file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return cloud_from_json(buf.str());
}

void save_cloud(const PointCloud& cloud, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write cloud file: " + path);
    out << cloud_to_json(cloud) << '\n';
}

}  // namespace authlabel
