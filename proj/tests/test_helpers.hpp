#pragma once

#include <authlabel/label_model.hpp>
#include <authlabel/verification.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace authlabel::test {

inline bool mutually_in_box(const PointCloud& ref, std::size_t i, const PointCloud& meas,
                            std::size_t j) {
    const ErrorBox ref_box{ref.points[i], ref.radii[i]};
    const ErrorBox meas_box{meas.points[j], meas.radii[j]};
    return ref_box.contains(meas.points[j]) && meas_box.contains(ref.points[i]);
}

/// Independent oracle: the maximum number of mutually-in-box pairs over all
/// injective partial assignments, by exhaustive recursion. Only feasible for
/// tiny clouds; the pipeline under test never feeds it.
inline int exhaustive_box_matching(const PointCloud& ref, const PointCloud& meas) {
    const std::size_t n = ref.points.size();
    const std::size_t m = meas.points.size();
    std::vector<std::vector<char>> compatible(n, std::vector<char>(m, 0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < m; ++j)
            compatible[i][j] = mutually_in_box(ref, i, meas, j) ? 1 : 0;

    std::vector<char> used(m, 0);
    // NOLINTNEXTLINE(misc-no-recursion)
    auto best_from = [&](auto&& self, std::size_t i) -> int {
        if (i == n) return 0;
        int best = self(self, i + 1);  // leave reference point i unmatched
        for (std::size_t j = 0; j < m; ++j) {
            if (used[j] || !compatible[i][j]) continue;
            used[j] = 1;
            best = std::max(best, 1 + self(self, i + 1));
            used[j] = 0;
        }
        return best;
    };
    return best_from(best_from, 0);
}

inline double rotation_angle_between(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b) {
    const double c = std::clamp(((a.transpose() * b).trace() - 1.0) / 2.0, -1.0, 1.0);
    return std::acos(c);
}

inline Eigen::Matrix3d rotation_xyz(double ax, double ay, double az) {
    return (Eigen::AngleAxisd(az, Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(ay, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(ax, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

/// Small hand-rolled cloud with uniformly random points and radii, for sizes
/// below the generator's minimum.
inline PointCloud random_tiny_cloud(int n, std::mt19937_64& rng, LabelKind kind = LabelKind::Beads) {
    std::uniform_int_distribution<std::int64_t> dx(0, kBoxX - 1);
    std::uniform_int_distribution<std::int64_t> dy(0, kBoxY - 1);
    std::uniform_int_distribution<std::int64_t> dz(0, kBoxZ - 1);
    std::uniform_int_distribution<int> dr(kRadiusMin, kRadiusMax);
    PointCloud cloud;
    cloud.kind = kind;
    for (int i = 0; i < n; ++i) {
        cloud.points.push_back({dx(rng), dy(rng), dz(rng)});
        cloud.radii.push_back({dr(rng), dr(rng), dr(rng)});
    }
    return cloud;
}

}  // namespace authlabel::test
