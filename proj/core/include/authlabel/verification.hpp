#pragma once

#include <authlabel/cpd.hpp>
#include <authlabel/types.hpp>

#include <chrono>
#include <cstddef>
#include <cstdlib>
#include <vector>

namespace authlabel {

/// Axis-aligned acceptance box of a point: half extents of three times the
/// per-axis error radius around the point position.
struct ErrorBox {
    Point3 center;
    ErrorRadii radii;

    bool contains(const Point3& q) const {
        return std::llabs(q.x - center.x) <= 3 * static_cast<std::int64_t>(radii.sx) &&
               std::llabs(q.y - center.y) <= 3 * static_cast<std::int64_t>(radii.sy) &&
               std::llabs(q.z - center.z) <= 3 * static_cast<std::int64_t>(radii.sz);
    }
};

struct VerifyConfig {
    /// Size pre-check bound: ||X| - |Y|| / |X| above this is an immediate
    /// mismatch, which blocks padding a forged label with extra spheres.
    double max_size_deviation = 0.25;
    /// Minimum fraction of matched reference points to call the clouds equal
    /// (strictly greater wins).
    double match_threshold = 0.5;
    int divisions_per_axis = 3;
    CpdConfig cpd;
    /// Concurrent registrations; 0 picks the hardware thread count. The
    /// verdict is identical for every setting.
    int max_parallel = 0;

    void validate() const;
};

struct Verdict {
    bool equal = false;
    double best_fraction = 0.0;
    /// One fraction per rotation subcube, in subcube index order. Empty when
    /// the size pre-check rejected before any registration ran.
    std::vector<double> per_subcube_fractions;
    /// Index of the winning subcube (lowest index on ties); npos when the
    /// size pre-check rejected.
    std::size_t best_subcube_index = npos;
    std::chrono::duration<double, std::milli> elapsed{0};

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);
};

/// Fraction of reference points with a counted correspondence partner.
///
/// For each reference point the most probable measurement partner is taken
/// from the posterior; candidate pairs are then filtered to a unique
/// assignment (greedy in descending posterior, ties by ascending reference
/// index) so no measurement point is counted twice, and a kept pair counts
/// iff each point lies inside the other's error box. The measurement must
/// already be transformed into the reference frame.
double match_fraction(const PointCloud& reference,
                      const PointCloud& aligned_measurement,
                      const Eigen::MatrixXd& posterior);

/// Full equality decision: size pre-check, one registration per rotation
/// subcube, error-box counting, maximum reduction, thresholded verdict.
Verdict verify_label(const PointCloud& reference, const PointCloud& measurement,
                     const VerifyConfig& config = {});

}  // namespace authlabel
