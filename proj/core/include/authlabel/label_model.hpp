#pragma once

#include <authlabel/types.hpp>

#include <cstdint>

namespace authlabel {

/// Tunables of the synthetic reference generator that are not fixed by the
/// physical label model.
struct GeneratorOptions {
    /// Rod length range in nm; endpoint pairs of one rod are drawn this far
    /// apart so they sit mutually closer than typical inter-rod distances.
    double rod_length_min_nm = 40.0;
    double rod_length_max_nm = 80.0;
};

/// Controls for synthesizing a measurement from a reference.
struct MeasurementSpec {
    /// Rotation bound per axis in degrees; 20 covers the realistic scenario
    /// of a roughly aligned handheld camera.
    double rotation_deg_max = 20.0;
    /// Fraction of reference points missing from the measurement (<= 0.2 in
    /// practice).
    double lost_fraction = 0.0;
    /// Fraction of spurious measurement points with no reference counterpart
    /// (<= 0.2 in practice).
    double artifact_fraction = 0.0;
    /// When set, each surviving coordinate is perturbed by a Gaussian draw
    /// with that point's per-axis radius as standard deviation.
    bool noise_enabled = false;
    /// Extra per-axis Gaussian perturbation in nm modeling a counterfeiter's
    /// placement inaccuracy; 0 means none.
    double forgery_grade_nm = 0.0;
    std::uint64_t seed = 0;
    /// Translation bound per axis in nm (integer-valued draw).
    std::int64_t translation_max_nm = 100'000;

    void validate() const;
};

struct SynthesizedMeasurement {
    PointCloud cloud;
    /// The ground-truth transform applied last in the pipeline; it maps
    /// reference coordinates into measurement coordinates.
    RigidTransform applied;
};

/// Generates a uniformly random reference cloud inside the label box with
/// per-point radii drawn from the kind-specific distributions, rounded and
/// clamped to [1, 99]. Rod clouds are built as endpoint pairs.
///
/// Preconditions: n_points in [6, 1000]; even for rods.
PointCloud generate_reference(LabelKind kind, int n_points, std::uint64_t seed,
                              const GeneratorOptions& options = {});

/// Derives a measurement cloud from a reference. Pipeline order: remove lost
/// points, perturb survivors (noise, then forgery grade), append artifact
/// points, then rotate and translate everything. Deterministic given
/// (reference, spec) including the seed.
///
/// The point count is exactly |ref| - round(lost*N) + round(artifact*N).
SynthesizedMeasurement synthesize_measurement(const PointCloud& reference,
                                              const MeasurementSpec& spec,
                                              const GeneratorOptions& options = {});

}  // namespace authlabel
