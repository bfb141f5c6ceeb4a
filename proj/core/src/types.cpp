#include <authlabel/types.hpp>

#include <cmath>

namespace authlabel {

std::string to_string(LabelKind kind) {
    return kind == LabelKind::Beads ? "beads" : "rods";
}

LabelKind label_kind_from_string(const std::string& name) {
    if (name == "beads") return LabelKind::Beads;
    if (name == "rods") return LabelKind::Rods;
    throw std::invalid_argument("unknown label kind: " + name);
}

void PointCloud::validate() const {
    if (points.size() != radii.size())
        throw std::invalid_argument("point cloud has " + std::to_string(points.size()) +
                                    " points but " + std::to_string(radii.size()) +
                                    " radii entries");
    if (points.size() < 3)
        throw std::invalid_argument("point cloud needs at least 3 points, has " +
                                    std::to_string(points.size()));
}

bool RigidTransform::is_valid(double tol) const {
    if (!(scale > 0.0)) return false;
    const Eigen::Matrix3d gram = rotation.transpose() * rotation;
    if ((gram - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() > tol) return false;
    return std::abs(rotation.determinant() - 1.0) <= tol;
}

PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t) {
    PointCloud out;
    out.kind = cloud.kind;
    out.radii = cloud.radii;
    out.points.reserve(cloud.points.size());
    for (const Point3& p : cloud.points) out.points.push_back(t.apply(p));
    return out;
}

}  // namespace authlabel
