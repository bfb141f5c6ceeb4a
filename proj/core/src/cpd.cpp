#include <authlabel/cpd.hpp>

#include <Eigen/Dense>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>

namespace authlabel {

namespace {

constexpr double kSigma2Floor = 1e-12;

Eigen::MatrixXd cloud_matrix(const PointCloud& cloud) {
    Eigen::MatrixXd m(cloud.size(), 3);
    for (std::size_t i = 0; i < cloud.size(); ++i) m.row(i) = to_vec(cloud.points[i]);
    return m;
}

struct EStep {
    Eigen::MatrixXd posterior;   // N x M, rows sum to 1 - outlier
    Eigen::VectorXd outlier;     // N
    Eigen::VectorXd row_mass;    // N
    Eigen::VectorXd col_mass;    // M
    double objective = 0.0;      // negative log-likelihood
};

// Posterior of the reference points over the moved mixture plus the uniform
// outlier component, and the exact negative log-likelihood at the same
// parameters.
EStep e_step(const Eigen::MatrixXd& x, const Eigen::MatrixXd& y_moved, double sigma2,
             double w) {
    const auto n = x.rows();
    const auto m = y_moved.rows();

    const Eigen::VectorXd xsq = x.rowwise().squaredNorm();
    const Eigen::VectorXd ysq = y_moved.rowwise().squaredNorm();
    Eigen::MatrixXd d2 = -2.0 * (x * y_moved.transpose());
    d2.colwise() += xsq;
    d2.rowwise() += ysq.transpose();

    EStep out;
    out.posterior = (d2 * (-1.0 / (2.0 * sigma2))).array().exp();

    // Uniform component density 1/N folded into the shared constant.
    const double c = w > 0.0
                         ? std::pow(2.0 * M_PI * sigma2, 1.5) * (w / (1.0 - w)) *
                               (static_cast<double>(m) / static_cast<double>(n))
                         : 0.0;

    Eigen::VectorXd denom = out.posterior.rowwise().sum().array() + c;
    denom = denom.cwiseMax(std::numeric_limits<double>::min());
    out.posterior.array().colwise() /= denom.array();
    out.outlier = c / denom.array();

    out.objective = -denom.array().log().sum() +
                    static_cast<double>(n) *
                        (1.5 * std::log(2.0 * M_PI * sigma2) +
                         std::log(static_cast<double>(m) / (1.0 - w)));

    out.row_mass = out.posterior.rowwise().sum();
    out.col_mass = out.posterior.colwise().sum();
    return out;
}

}  // namespace

void CpdConfig::validate() const {
    if (outlier_weight < 0.0 || outlier_weight >= 1.0)
        throw std::invalid_argument("outlier_weight must be in [0, 1)");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (!(scale_min > 0.0) || scale_max < scale_min)
        throw std::invalid_argument("invalid scale clamp range");
}

RegistrationResult register_clouds(const PointCloud& reference,
                                   const PointCloud& measurement,
                                   const Eigen::Matrix3d& initial_rotation,
                                   const CpdConfig& config) {
    reference.validate();
    measurement.validate();
    config.validate();
    {
        RigidTransform probe;
        probe.rotation = initial_rotation;
        if (!probe.is_valid(1e-6))
            throw std::invalid_argument("initial rotation is not a proper rotation matrix");
    }

    const auto n = static_cast<Eigen::Index>(reference.size());
    const auto m = static_cast<Eigen::Index>(measurement.size());
    Eigen::MatrixXd x = cloud_matrix(reference);
    Eigen::MatrixXd y = cloud_matrix(measurement);

    // Normalize to centroid frame and a shared unit spread; nm magnitudes
    // would otherwise push the Gaussian kernel into underflow.
    const Eigen::RowVector3d mu_x = x.colwise().mean();
    const Eigen::RowVector3d mu_y = y.colwise().mean();
    x.rowwise() -= mu_x;
    y.rowwise() -= mu_y;
    if (!(x.squaredNorm() > 1e-12) || !(y.squaredNorm() > 1e-12))
        throw DegenerateGeometryError("all points of a cloud coincide; registration is undefined");
    const double spread = std::sqrt((x.squaredNorm() + y.squaredNorm()) /
                                    static_cast<double>(n + m));
    x /= spread;
    y /= spread;

    Eigen::Matrix3d rot = initial_rotation;
    double scale = 1.0;
    Eigen::Vector3d trans = Eigen::Vector3d::Zero();
    // Pooled-distance initialization; centering removes the cross term, so
    // the value is independent of the initial rotation.
    double sigma2 = (static_cast<double>(m) * x.squaredNorm() +
                     static_cast<double>(n) * y.squaredNorm()) /
                    (3.0 * static_cast<double>(n) * static_cast<double>(m));
    sigma2 = std::max(sigma2, kSigma2Floor);

    const double w = config.outlier_weight;
    RegistrationResult result;
    result.objective_trace.reserve(config.max_iterations + 1);

    auto moved = [&]() -> Eigen::MatrixXd {
        Eigen::MatrixXd ym = scale * (y * rot.transpose());
        ym.rowwise() += trans.transpose();
        return ym;
    };
    auto denormalized = [&]() {
        RigidTransform t;
        t.scale = scale;
        t.rotation = rot;
        t.translation = spread * trans + mu_x.transpose() - scale * (rot * mu_y.transpose());
        return t;
    };

    EStep step = e_step(x, moved(), sigma2, w);
    result.objective_trace.push_back(step.objective);
    bool converged = false;

    for (int iter = 0; iter < config.max_iterations; ++iter) {
        // M-step: closed-form weighted Procrustes update.
        const double np = step.row_mass.sum();
        const Eigen::Vector3d mean_x = x.transpose() * step.row_mass / np;
        const Eigen::Vector3d mean_y = y.transpose() * step.col_mass / np;
        const Eigen::MatrixXd xc = x.rowwise() - mean_x.transpose();
        const Eigen::MatrixXd yc = y.rowwise() - mean_y.transpose();

        const Eigen::Matrix3d a = xc.transpose() * (step.posterior * yc);
        Eigen::JacobiSVD<Eigen::Matrix3d> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Eigen::Vector3d det_fix = Eigen::Vector3d::Ones();
        det_fix(2) = (svd.matrixU() * svd.matrixV().transpose()).determinant();
        rot = svd.matrixU() * det_fix.asDiagonal() * svd.matrixV().transpose();

        const double trace_ar = (a.array() * rot.array()).sum();
        const double x_sq = (step.row_mass.array() * xc.rowwise().squaredNorm().array()).sum();
        const double y_sq = (step.col_mass.array() * yc.rowwise().squaredNorm().array()).sum();
        if (config.scale_mode == ScaleMode::Estimate && y_sq > 0.0) {
            scale = std::clamp(trace_ar / y_sq, config.scale_min, config.scale_max);
        } else {
            scale = 1.0;
        }
        trans = mean_x - scale * (rot * mean_y);
        // General quadratic form; stays exact when the scale clamp binds.
        sigma2 = (x_sq - 2.0 * scale * trace_ar + scale * scale * y_sq) / (3.0 * np);
        sigma2 = std::max(sigma2, kSigma2Floor);

        ++result.iterations_used;
        if (config.iteration_observer) config.iteration_observer(result.iterations_used, denormalized());

        step = e_step(x, moved(), sigma2, w);
        result.objective_trace.push_back(step.objective);

        const double prev = result.objective_trace[result.objective_trace.size() - 2];
        if (std::abs(step.objective - prev) <= config.tolerance * std::max(1.0, std::abs(prev))) {
            converged = true;
            break;
        }
    }
    (void)converged;

    result.transform = denormalized();
    result.posterior = std::move(step.posterior);
    result.outlier_mass = std::move(step.outlier);
    result.final_objective = result.objective_trace.back();
    result.final_sigma2 = sigma2 * spread * spread;
    return result;
}

Eigen::MatrixXd correspondence_posterior(const PointCloud& reference,
                                         const PointCloud& aligned_measurement,
                                         double sigma2, double outlier_weight) {
    if (reference.points.empty() || aligned_measurement.points.empty())
        throw std::invalid_argument("correspondence_posterior needs non-empty clouds");
    if (!(sigma2 > 0.0)) throw std::invalid_argument("sigma2 must be > 0");
    if (outlier_weight < 0.0 || outlier_weight >= 1.0)
        throw std::invalid_argument("outlier_weight must be in [0, 1)");
    return e_step(cloud_matrix(reference), cloud_matrix(aligned_measurement), sigma2,
                  outlier_weight)
        .posterior;
}

std::vector<Eigen::Matrix3d> rotation_subcube_centers(int divisions_per_axis) {
    if (divisions_per_axis < 1)
        throw std::invalid_argument("divisions_per_axis must be >= 1");
    const int d = divisions_per_axis;
    const double step = 2.0 * M_PI / d;
    std::vector<Eigen::Matrix3d> centers;
    centers.reserve(static_cast<std::size_t>(d) * d * d);
    for (int ix = 0; ix < d; ++ix) {
        for (int iy = 0; iy < d; ++iy) {
            for (int iz = 0; iz < d; ++iz) {
                const Eigen::Vector3d v(-M_PI + step * (ix + 0.5), -M_PI + step * (iy + 0.5),
                                        -M_PI + step * (iz + 0.5));
                const double angle = v.norm();
                if (angle < 1e-12) {
                    centers.push_back(Eigen::Matrix3d::Identity());
                } else {
                    centers.push_back(
                        Eigen::AngleAxisd(angle, v / angle).toRotationMatrix());
                }
            }
        }
    }
    return centers;
}

}  // namespace authlabel
