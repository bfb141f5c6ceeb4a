#include <authlabel/label_model.hpp>
#include <authlabel/rng.hpp>

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace authlabel {

namespace {

struct RadiiModel {
    double mean[3];
    double stddev[3];
};

// Axis-wise Gaussian fits of the measured per-point error radii, nm.
RadiiModel radii_model(LabelKind kind) {
    if (kind == LabelKind::Beads) return {{6.0, 5.0, 5.0}, {10.0, 8.0, 8.0}};
    return {{22.0, 19.0, 43.0}, {11.0, 10.0, 21.0}};
}

ErrorRadii draw_radii(LabelKind kind, std::mt19937_64& rng) {
    const RadiiModel model = radii_model(kind);
    ErrorRadii out;
    int* dst[3] = {&out.sx, &out.sy, &out.sz};
    for (int axis = 0; axis < 3; ++axis) {
        std::normal_distribution<double> dist(model.mean[axis], model.stddev[axis]);
        long v = std::lround(dist(rng));
        *dst[axis] = static_cast<int>(std::clamp<long>(v, kRadiusMin, kRadiusMax));
    }
    return out;
}

Point3 draw_box_point(std::mt19937_64& rng) {
    std::uniform_int_distribution<std::int64_t> dx(0, kBoxX - 1);
    std::uniform_int_distribution<std::int64_t> dy(0, kBoxY - 1);
    std::uniform_int_distribution<std::int64_t> dz(0, kBoxZ - 1);
    return {dx(rng), dy(rng), dz(rng)};
}

Eigen::Vector3d draw_unit_direction(std::mt19937_64& rng) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::Vector3d v;
    do {
        v = {dist(rng), dist(rng), dist(rng)};
    } while (v.norm() < 1e-9);
    return v.normalized();
}

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

Eigen::Matrix3d euler_rotation(double ax, double ay, double az) {
    return (Eigen::AngleAxisd(az, Eigen::Vector3d::UnitZ()) *
            Eigen::AngleAxisd(ay, Eigen::Vector3d::UnitY()) *
            Eigen::AngleAxisd(ax, Eigen::Vector3d::UnitX()))
        .toRotationMatrix();
}

}  // namespace

void MeasurementSpec::validate() const {
    if (lost_fraction < 0.0 || lost_fraction > 0.2)
        throw std::invalid_argument("lost_fraction must be in [0, 0.2]");
    if (artifact_fraction < 0.0 || artifact_fraction > 0.2)
        throw std::invalid_argument("artifact_fraction must be in [0, 0.2]");
    if (rotation_deg_max < 0.0 || rotation_deg_max > 180.0)
        throw std::invalid_argument("rotation_deg_max must be in [0, 180]");
    if (forgery_grade_nm < 0.0)
        throw std::invalid_argument("forgery_grade_nm must be >= 0");
    if (translation_max_nm < 0)
        throw std::invalid_argument("translation_max_nm must be >= 0");
}

PointCloud generate_reference(LabelKind kind, int n_points, std::uint64_t seed,
                              const GeneratorOptions& options) {
    if (n_points < 6 || n_points > 1000)
        throw std::invalid_argument("reference point count must be in [6, 1000], got " +
                                    std::to_string(n_points));
    if (kind == LabelKind::Rods && n_points % 2 != 0)
        throw std::invalid_argument("rod references need an even point count, got " +
                                    std::to_string(n_points));
    if (!(options.rod_length_min_nm > 0.0) ||
        options.rod_length_max_nm < options.rod_length_min_nm)
        throw std::invalid_argument("invalid rod length range");

    SeedSequence seq(seed);
    auto point_rng = seq.child("points").engine();
    auto radii_rng = seq.child("radii").engine();

    PointCloud cloud;
    cloud.kind = kind;
    cloud.points.reserve(n_points);
    cloud.radii.reserve(n_points);

    if (kind == LabelKind::Beads) {
        for (int i = 0; i < n_points; ++i) cloud.points.push_back(draw_box_point(point_rng));
    } else {
        std::uniform_real_distribution<double> length(options.rod_length_min_nm,
                                                      options.rod_length_max_nm);
        for (int rod = 0; rod < n_points / 2; ++rod) {
            const Point3 first = draw_box_point(point_rng);
            Point3 second;
            do {
                const Eigen::Vector3d offset = draw_unit_direction(point_rng) * length(point_rng);
                second = round_to_point(to_vec(first) + offset);
            } while (!in_label_box(second));
            cloud.points.push_back(first);
            cloud.points.push_back(second);
        }
    }
    for (int i = 0; i < n_points; ++i) cloud.radii.push_back(draw_radii(kind, radii_rng));
    return cloud;
}

SynthesizedMeasurement synthesize_measurement(const PointCloud& reference,
                                              const MeasurementSpec& spec,
                                              const GeneratorOptions& /*options*/) {
    reference.validate();
    spec.validate();

    const int n = static_cast<int>(reference.size());
    SeedSequence seq(spec.seed);

    // 1. Remove lost points (individually, also for rod endpoints).
    const int n_lost = round_half_up(spec.lost_fraction * n);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    {
        auto rng = seq.child("lost").engine();
        std::shuffle(order.begin(), order.end(), rng);
    }
    std::vector<int> survivors(order.begin() + n_lost, order.end());
    std::sort(survivors.begin(), survivors.end());

    std::vector<Eigen::Vector3d> positions;
    PointCloud cloud;
    cloud.kind = reference.kind;
    positions.reserve(survivors.size());
    for (int idx : survivors) {
        positions.push_back(to_vec(reference.points[idx]));
        cloud.radii.push_back(reference.radii[idx]);
    }

    // 2. Measurement noise with each point's own radii as stddev.
    if (spec.noise_enabled) {
        auto rng = seq.child("noise").engine();
        std::normal_distribution<double> unit(0.0, 1.0);
        for (std::size_t i = 0; i < positions.size(); ++i) {
            const ErrorRadii& r = cloud.radii[i];
            positions[i].x() += unit(rng) * r.sx;
            positions[i].y() += unit(rng) * r.sy;
            positions[i].z() += unit(rng) * r.sz;
        }
    }

    // 3. Forgery imprecision, independent of the measurement noise.
    if (spec.forgery_grade_nm > 0.0) {
        auto rng = seq.child("forgery").engine();
        std::normal_distribution<double> dist(0.0, spec.forgery_grade_nm);
        for (auto& p : positions) p += Eigen::Vector3d(dist(rng), dist(rng), dist(rng));
    }

    // 4. Artifact points, indistinguishable from genuine ones.
    const int n_art = round_half_up(spec.artifact_fraction * n);
    {
        auto rng = seq.child("artifacts").engine();
        for (int i = 0; i < n_art; ++i) {
            positions.push_back(to_vec(draw_box_point(rng)));
            cloud.radii.push_back(draw_radii(reference.kind, rng));
        }
    }

    // 5. Rigid motion of the whole scan.
    RigidTransform applied;
    {
        auto rng = seq.child("pose").engine();
        const double bound = spec.rotation_deg_max * M_PI / 180.0;
        std::uniform_real_distribution<double> angle(-bound, bound);
        const double ax = angle(rng), ay = angle(rng), az = angle(rng);
        applied.rotation = spec.rotation_deg_max > 0.0 ? euler_rotation(ax, ay, az)
                                                       : Eigen::Matrix3d::Identity();
        std::uniform_int_distribution<std::int64_t> shift(-spec.translation_max_nm,
                                                          spec.translation_max_nm);
        applied.translation =
            Eigen::Vector3d(static_cast<double>(shift(rng)), static_cast<double>(shift(rng)),
                            static_cast<double>(shift(rng)));
    }

    cloud.points.reserve(positions.size());
    for (const auto& p : positions) cloud.points.push_back(round_to_point(applied.apply(p)));
    return {std::move(cloud), applied};
}

}  // namespace authlabel
