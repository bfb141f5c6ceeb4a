#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace authlabel {

/// Label bounding box in nanometers. Points of a generated reference lie in
/// [0, kBoxX) x [0, kBoxY) x [0, kBoxZ).
inline constexpr std::int64_t kBoxX = 1'000'000;
inline constexpr std::int64_t kBoxY = 1'000'000;
inline constexpr std::int64_t kBoxZ = 100'000;

/// Per-axis error radius bounds (one standard deviation, nm). Two decimal
/// digits per coordinate; zero is disallowed so every error box is
/// nondegenerate.
inline constexpr int kRadiusMin = 1;
inline constexpr int kRadiusMax = 99;

/// A 3D point position in integer nanometers.
struct Point3 {
    std::int64_t x = 0;
    std::int64_t y = 0;
    std::int64_t z = 0;

    friend bool operator==(const Point3&, const Point3&) = default;
};

/// Per-axis measurement error radii in integer nanometers.
struct ErrorRadii {
    int sx = kRadiusMin;
    int sy = kRadiusMin;
    int sz = kRadiusMin;

    friend bool operator==(const ErrorRadii&, const ErrorRadii&) = default;
};

/// Physical label variant. Rod labels contribute two endpoint points per rod,
/// so a generated rod reference always has an even point count.
enum class LabelKind { Beads, Rods };

std::string to_string(LabelKind kind);
LabelKind label_kind_from_string(const std::string& name);

inline bool in_label_box(const Point3& p) {
    return p.x >= 0 && p.x < kBoxX && p.y >= 0 && p.y < kBoxY && p.z >= 0 &&
           p.z < kBoxZ;
}

inline bool radii_in_range(const ErrorRadii& r) {
    return r.sx >= kRadiusMin && r.sx <= kRadiusMax && r.sy >= kRadiusMin &&
           r.sy <= kRadiusMax && r.sz >= kRadiusMin && r.sz <= kRadiusMax;
}

/// An ordered point set with per-point error radii. Represents either a
/// stored reference or a scanned measurement of a label.
struct PointCloud {
    LabelKind kind = LabelKind::Beads;
    std::vector<Point3> points;
    std::vector<ErrorRadii> radii;

    std::size_t size() const { return points.size(); }

    /// Throws std::invalid_argument unless |points| == |radii| and
    /// |points| >= 3.
    void validate() const;

    friend bool operator==(const PointCloud&, const PointCloud&) = default;
};

inline Eigen::Vector3d to_vec(const Point3& p) {
    return {static_cast<double>(p.x), static_cast<double>(p.y),
            static_cast<double>(p.z)};
}

inline Point3 round_to_point(const Eigen::Vector3d& v) {
    return {static_cast<std::int64_t>(std::llround(v.x())),
            static_cast<std::int64_t>(std::llround(v.y())),
            static_cast<std::int64_t>(std::llround(v.z()))};
}

/// Rigid (similarity) alignment: p -> scale * rotation * p + translation,
/// with translation in nanometers.
struct RigidTransform {
    double scale = 1.0;
    Eigen::Matrix3d rotation = Eigen::Matrix3d::Identity();
    Eigen::Vector3d translation = Eigen::Vector3d::Zero();

    Eigen::Vector3d apply(const Eigen::Vector3d& p) const {
        return scale * (rotation * p) + translation;
    }

    Point3 apply(const Point3& p) const { return round_to_point(apply(to_vec(p))); }

    RigidTransform inverse() const {
        RigidTransform inv;
        inv.scale = 1.0 / scale;
        inv.rotation = rotation.transpose();
        inv.translation = -(inv.scale * (inv.rotation * translation));
        return inv;
    }

    /// True when rotation is orthonormal with determinant +1 and scale > 0.
    bool is_valid(double tol = 1e-9) const;

    static RigidTransform identity() { return {}; }
};

/// Applies a transform to every point of a cloud, rounding back to integer
/// nanometers. Radii and kind carry over unchanged.
PointCloud apply_transform(const PointCloud& cloud, const RigidTransform& t);

}  // namespace authlabel
