#pragma once

#include <authlabel/types.hpp>

#include <Eigen/Core>

#include <functional>
#include <vector>

namespace authlabel {

enum class ScaleMode {
    /// Estimate the scale in the M-step, clamped to [scale_min, scale_max].
    Estimate,
    /// Keep the scale fixed at exactly 1.
    Fixed,
};

struct CpdConfig {
    /// Weight of the uniform outlier component; 0.2 matches the practical
    /// upper bound on the artifact fraction.
    double outlier_weight = 0.2;
    int max_iterations = 150;
    /// Relative change of the negative log-likelihood below which EM stops.
    double tolerance = 1e-6;
    ScaleMode scale_mode = ScaleMode::Estimate;
    double scale_min = 0.8;
    double scale_max = 1.25;
    /// Optional per-iteration hook, called after every M-step with the
    /// denormalized transform of that iteration. Intended for diagnostics.
    std::function<void(int iteration, const RigidTransform&)> iteration_observer;

    void validate() const;
};

struct RegistrationResult {
    /// Maps measurement coordinates into reference coordinates.
    RigidTransform transform;
    /// posterior(i, j) is the correspondence probability of measurement
    /// point j for reference point i; each row plus its outlier mass sums
    /// to 1.
    Eigen::MatrixXd posterior;
    /// Residual probability that reference point i stems from the uniform
    /// outlier component.
    Eigen::VectorXd outlier_mass;
    int iterations_used = 0;
    /// Negative log-likelihood at the returned parameters.
    double final_objective = 0.0;
    /// Negative log-likelihood per EM iteration (first entry is the value at
    /// the initialization). Non-increasing up to numerical slack.
    std::vector<double> objective_trace;
    /// Shared isotropic variance at termination, in nm^2.
    double final_sigma2 = 0.0;
};

/// Rigid coherent point drift. Treats the measurement as an isotropic
/// Gaussian mixture plus a uniform outlier component and alternates posterior
/// computation with the closed-form weighted Procrustes update of rotation,
/// scale, translation and the shared variance. Coordinates are normalized
/// internally; the interface is in nm.
///
/// `initial_rotation` seeds the EM; pass the subcube centers from
/// rotation_subcube_centers() to search rotation space.
///
/// Throws std::invalid_argument for clouds with fewer than 3 points or an
/// invalid initial rotation, and DegenerateGeometryError when a cloud has no
/// spatial spread.
RegistrationResult register_clouds(const PointCloud& reference,
                                   const PointCloud& measurement,
                                   const Eigen::Matrix3d& initial_rotation,
                                   const CpdConfig& config = {});

/// One E-step: the correspondence posterior of `reference` over the points
/// of `aligned_measurement` under a shared isotropic variance sigma2 (nm^2)
/// and outlier weight w. Rows sum to 1 together with the outlier mass.
Eigen::MatrixXd correspondence_posterior(const PointCloud& reference,
                                         const PointCloud& aligned_measurement,
                                         double sigma2, double outlier_weight);

/// Centers of the divisions^3 equal subcubes of the angle-axis cube
/// [-pi, pi]^3, as rotation matrices in row-major axis order. divisions = 1
/// yields exactly the identity; divisions = 3 yields the recommended 27
/// rotations including the identity.
std::vector<Eigen::Matrix3d> rotation_subcube_centers(int divisions_per_axis);

struct DegenerateGeometryError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace authlabel
