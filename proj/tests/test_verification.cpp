#include <doctest.h>

#include <authlabel/label_model.hpp>
#include <authlabel/rng.hpp>
#include <authlabel/verification.hpp>

#include "test_helpers.hpp"

#include <set>

using namespace authlabel;

TEST_CASE("error box membership follows the three-sigma bounds") {
    const PointCloud ref{LabelKind::Beads, {{0, 0, 0}}, {{10, 8, 8}}};

    PointCloud near{LabelKind::Beads, {{29, 0, 0}}, {{10, 8, 8}}};
    PointCloud edge{LabelKind::Beads, {{30, 0, 0}}, {{10, 8, 8}}};
    PointCloud far{LabelKind::Beads, {{31, 0, 0}}, {{10, 8, 8}}};

    Eigen::MatrixXd p(1, 1);
    p(0, 0) = 1.0;
    CHECK(match_fraction(ref, near, p) == 1.0);
    CHECK(match_fraction(ref, edge, p) == 1.0);  // closed interval
    CHECK(match_fraction(ref, far, p) == 0.0);
}

TEST_CASE("identical clouds under identity alignment match fully") {
    const PointCloud ref = generate_reference(LabelKind::Beads, 30, 5);
    const RegistrationResult res = register_clouds(ref, ref, Eigen::Matrix3d::Identity());
    const PointCloud aligned = apply_transform(ref, res.transform);
    CHECK(match_fraction(ref, aligned, res.posterior) == 1.0);
}

TEST_CASE("a double-claimed measurement point is counted once") {
    // Both rod endpoints see the same most-likely partner; the unique
    // assignment keeps only the higher-posterior pair.
    PointCloud ref{LabelKind::Rods,
                   {{0, 0, 0}, {60, 0, 0}},
                   {{30, 30, 30}, {30, 30, 30}}};
    PointCloud aligned{LabelKind::Rods,
                       {{30, 0, 0}, {500, 0, 0}},
                       {{30, 30, 30}, {30, 30, 30}}};
    Eigen::MatrixXd p(2, 2);
    p << 0.9, 0.1,
         0.8, 0.2;
    CHECK(match_fraction(ref, aligned, p) == 0.5);
}

TEST_CASE("counted pairs are injective in the measurement") {
    // All pairs mutually in box, so the fraction equals the number of
    // distinct argmax partners.
    std::mt19937_64 rng(99);
    std::uniform_int_distribution<std::int64_t> span(0, 50);
    std::uniform_real_distribution<double> prob(0.01, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 6;
        const int m = 4;
        PointCloud ref{LabelKind::Beads, {}, {}};
        PointCloud meas{LabelKind::Beads, {}, {}};
        for (int i = 0; i < n; ++i) {
            ref.points.push_back({span(rng), span(rng), span(rng)});
            ref.radii.push_back({99, 99, 99});
        }
        for (int j = 0; j < m; ++j) {
            meas.points.push_back({span(rng), span(rng), span(rng)});
            meas.radii.push_back({99, 99, 99});
        }
        Eigen::MatrixXd p(n, m);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < m; ++j) p(i, j) = prob(rng);

        std::set<Eigen::Index> distinct;
        for (int i = 0; i < n; ++i) {
            Eigen::Index j = 0;
            p.row(i).maxCoeff(&j);
            distinct.insert(j);
        }
        const double fraction = match_fraction(ref, meas, p);
        CHECK(std::llround(fraction * n) == static_cast<long long>(distinct.size()));
    }
}

TEST_CASE("posterior shape mismatch is rejected") {
    const PointCloud ref = generate_reference(LabelKind::Beads, 30, 5);
    Eigen::MatrixXd p(3, 3);
    p.setConstant(0.1);
    CHECK_THROWS_AS(match_fraction(ref, ref, p), std::invalid_argument);
}

TEST_CASE("size pre-check rejects without any registration") {
    const PointCloud ref = generate_reference(LabelKind::Beads, 50, 5);
    const PointCloud big = generate_reference(LabelKind::Beads, 80, 6);
    VerifyConfig config;
    const Verdict verdict = verify_label(ref, big, config);
    CHECK_FALSE(verdict.equal);
    CHECK(verdict.best_fraction == 0.0);
    CHECK(verdict.per_subcube_fractions.empty());
    CHECK(verdict.best_subcube_index == Verdict::npos);
}

TEST_CASE("kind mismatch is an error") {
    const PointCloud beads = generate_reference(LabelKind::Beads, 30, 5);
    const PointCloud rods = generate_reference(LabelKind::Rods, 30, 5);
    CHECK_THROWS_AS(verify_label(beads, rods, VerifyConfig{}), std::invalid_argument);
}

TEST_CASE("verdicts are identical for any parallelism degree") {
    const PointCloud ref = generate_reference(LabelKind::Rods, 30, 12);
    MeasurementSpec spec;
    spec.noise_enabled = true;
    spec.lost_fraction = 0.15;
    spec.artifact_fraction = 0.15;
    spec.seed = 4;
    const PointCloud meas = synthesize_measurement(ref, spec).cloud;

    Verdict reference_verdict;
    bool first = true;
    for (int parallel : {1, 4, 27}) {
        VerifyConfig config;
        config.max_parallel = parallel;
        const Verdict v = verify_label(ref, meas, config);
        REQUIRE(v.per_subcube_fractions.size() == 27);
        if (first) {
            reference_verdict = v;
            first = false;
            CHECK(v.best_fraction ==
                  *std::max_element(v.per_subcube_fractions.begin(),
                                    v.per_subcube_fractions.end()));
            // the winner is at least as good as the identity-seeded subcube
            CHECK(v.best_fraction >= v.per_subcube_fractions[13]);
        } else {
            CHECK(v.equal == reference_verdict.equal);
            CHECK(v.best_fraction == reference_verdict.best_fraction);
            CHECK(v.best_subcube_index == reference_verdict.best_subcube_index);
            CHECK(v.per_subcube_fractions == reference_verdict.per_subcube_fractions);
        }
    }
}

TEST_CASE("match fraction equals the exhaustive oracle on aligned tiny clouds") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> angle(-20.0 * M_PI / 180.0, 20.0 * M_PI / 180.0);
    std::uniform_int_distribution<std::int64_t> shift(-100000, 100000);
    std::uniform_int_distribution<int> cloud_size(3, 6);

    int exact_matches = 0;
    for (int instance = 0; instance < 200; ++instance) {
        const int n = cloud_size(rng);
        const PointCloud ref = test::random_tiny_cloud(n, rng);

        RigidTransform fwd;
        fwd.rotation = test::rotation_xyz(angle(rng), angle(rng), angle(rng));
        fwd.translation = Eigen::Vector3d(static_cast<double>(shift(rng)),
                                          static_cast<double>(shift(rng)),
                                          static_cast<double>(shift(rng)));
        PointCloud meas = apply_transform(ref, fwd);
        if (instance % 2 == 0) {
            // a couple of artifacts must not change the optimum
            meas.points.push_back({shift(rng) + 500000, shift(rng) + 500000, 50000});
            meas.radii.push_back({9, 9, 9});
        }

        const PointCloud aligned = apply_transform(meas, fwd.inverse());
        const Eigen::MatrixXd posterior =
            correspondence_posterior(ref, aligned, 2500.0, 0.2);
        const double fraction = match_fraction(ref, aligned, posterior);
        const int oracle = test::exhaustive_box_matching(ref, aligned);
        CHECK(std::llround(fraction * n) == oracle);
        exact_matches += std::llround(fraction * n) == oracle ? 1 : 0;
    }
    CHECK(exact_matches == 200);
}

TEST_CASE("pipeline fraction never exceeds the oracle under noise") {
    std::mt19937_64 rng(555);
    std::uniform_real_distribution<double> angle(-0.3, 0.3);
    std::normal_distribution<double> noise(0.0, 40.0);
    for (int instance = 0; instance < 100; ++instance) {
        const PointCloud ref = test::random_tiny_cloud(5, rng);
        RigidTransform fwd;
        fwd.rotation = test::rotation_xyz(angle(rng), angle(rng), angle(rng));
        fwd.translation = Eigen::Vector3d(1000.0, -2000.0, 300.0);
        PointCloud meas = apply_transform(ref, fwd);
        for (Point3& p : meas.points) {
            p.x += static_cast<std::int64_t>(std::llround(noise(rng)));
            p.y += static_cast<std::int64_t>(std::llround(noise(rng)));
            p.z += static_cast<std::int64_t>(std::llround(noise(rng)));
        }
        const PointCloud aligned = apply_transform(meas, fwd.inverse());
        const Eigen::MatrixXd posterior =
            correspondence_posterior(ref, aligned, 2500.0, 0.2);
        const double fraction = match_fraction(ref, aligned, posterior);
        const int oracle = test::exhaustive_box_matching(ref, aligned);
        CHECK(std::llround(fraction * ref.size()) <= oracle);
    }
}
