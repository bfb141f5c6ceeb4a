#include <authlabel/verification.hpp>

#include <algorithm>
#include <atomic>
#include <mutex>
#include <thread>

namespace authlabel {

void VerifyConfig::validate() const {
    if (!(max_size_deviation > 0.0) || max_size_deviation >= 1.0)
        throw std::invalid_argument("max_size_deviation must be in (0, 1)");
    if (!(match_threshold > 0.0) || match_threshold >= 1.0)
        throw std::invalid_argument("match_threshold must be in (0, 1)");
    if (divisions_per_axis < 1)
        throw std::invalid_argument("divisions_per_axis must be >= 1");
    if (max_parallel < 0) throw std::invalid_argument("max_parallel must be >= 0");
    cpd.validate();
}

double match_fraction(const PointCloud& reference, const PointCloud& aligned_measurement,
                      const Eigen::MatrixXd& posterior) {
    const auto n = static_cast<Eigen::Index>(reference.points.size());
    const auto m = static_cast<Eigen::Index>(aligned_measurement.points.size());
    if (reference.points.size() != reference.radii.size() ||
        aligned_measurement.points.size() != aligned_measurement.radii.size())
        throw std::invalid_argument("cloud points/radii size mismatch");
    if (posterior.rows() != n || posterior.cols() != m)
        throw std::invalid_argument("posterior shape does not match |X| x |Y|");
    if (n == 0 || m == 0) throw std::invalid_argument("empty cloud");

    // Most probable partner per reference point (lowest index on ties).
    struct Candidate {
        Eigen::Index ref;
        Eigen::Index meas;
        double prob;
    };
    std::vector<Candidate> candidates(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        Eigen::Index j = 0;
        posterior.row(i).maxCoeff(&j);
        candidates[i] = {i, j, posterior(i, j)};
    }

    // Unique assignment: a measurement point may be counted once. Greedy in
    // descending posterior, ties by ascending reference index.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate& a, const Candidate& b) {
        if (a.prob != b.prob) return a.prob > b.prob;
        return a.ref < b.ref;
    });
    std::vector<char> measurement_used(m, 0);

    Eigen::Index counted = 0;
    for (const Candidate& c : candidates) {
        if (measurement_used[c.meas]) continue;
        measurement_used[c.meas] = 1;
        const ErrorBox ref_box{reference.points[c.ref], reference.radii[c.ref]};
        const ErrorBox meas_box{aligned_measurement.points[c.meas],
                                aligned_measurement.radii[c.meas]};
        if (ref_box.contains(aligned_measurement.points[c.meas]) &&
            meas_box.contains(reference.points[c.ref]))
            ++counted;
    }
    return static_cast<double>(counted) / static_cast<double>(n);
}

Verdict verify_label(const PointCloud& reference, const PointCloud& measurement,
                     const VerifyConfig& config) {
    const auto start = std::chrono::steady_clock::now();
    reference.validate();
    measurement.validate();
    config.validate();
    if (reference.kind != measurement.kind)
        throw std::invalid_argument("reference and measurement label kinds differ");

    Verdict verdict;
    const double n_ref = static_cast<double>(reference.size());
    const double deviation =
        std::abs(static_cast<double>(reference.size()) -
                 static_cast<double>(measurement.size())) /
        n_ref;
    if (deviation > config.max_size_deviation) {
        verdict.elapsed = std::chrono::steady_clock::now() - start;
        return verdict;  // size pre-check: unequal without any registration
    }

    const std::vector<Eigen::Matrix3d> rotations =
        rotation_subcube_centers(config.divisions_per_axis);
    std::vector<double> fractions(rotations.size(), 0.0);

    auto run_subcube = [&](std::size_t k) {
        const RegistrationResult reg =
            register_clouds(reference, measurement, rotations[k], config.cpd);
        const PointCloud aligned = apply_transform(measurement, reg.transform);
        fractions[k] = match_fraction(reference, aligned, reg.posterior);
    };

    unsigned workers = config.max_parallel > 0
                           ? static_cast<unsigned>(config.max_parallel)
                           : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min<unsigned>(workers, rotations.size());
    if (workers <= 1) {
        for (std::size_t k = 0; k < rotations.size(); ++k) run_subcube(k);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        std::exception_ptr failure;
        std::mutex failure_mutex;
        for (unsigned t = 0; t < workers; ++t) {
            pool.emplace_back([&] {
                for (std::size_t k = next.fetch_add(1); k < rotations.size();
                     k = next.fetch_add(1)) {
                    try {
                        run_subcube(k);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                    }
                }
            });
        }
        for (auto& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    // Deterministic fold in subcube order; ties keep the lowest index.
    verdict.per_subcube_fractions = std::move(fractions);
    verdict.best_subcube_index = 0;
    for (std::size_t k = 1; k < verdict.per_subcube_fractions.size(); ++k)
        if (verdict.per_subcube_fractions[k] >
            verdict.per_subcube_fractions[verdict.best_subcube_index])
            verdict.best_subcube_index = k;
    verdict.best_fraction = verdict.per_subcube_fractions[verdict.best_subcube_index];
    verdict.equal = verdict.best_fraction > config.match_threshold;
    verdict.elapsed = std::chrono::steady_clock::now() - start;
    return verdict;
}

}  // namespace authlabel
