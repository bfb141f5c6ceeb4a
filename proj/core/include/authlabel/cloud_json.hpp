#pragma once

#include <authlabel/types.hpp>

#include <iosfwd>
#include <string>

namespace authlabel {

/// Interchange JSON for point clouds, used by every CLI subcommand:
/// {"kind": "beads"|"rods", "points": [[x,y,z],...], "radii": [[sx,sy,sz],...]}
/// with integer nm values.
std::string cloud_to_json(const PointCloud& cloud);
PointCloud cloud_from_json(const std::string& json_text);

PointCloud load_cloud(const std::string& path);
void save_cloud(const PointCloud& cloud, const std::string& path);

}  // namespace authlabel
