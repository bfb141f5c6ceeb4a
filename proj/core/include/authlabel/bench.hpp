#pragma once

#include <authlabel/label_model.hpp>
#include <authlabel/verification.hpp>

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace authlabel {

/// Evaluation scenarios of the synthetic study, ordered from lab conditions
/// towards the expected practical case.
enum class Scenario {
    /// Rotation and translation only.
    Lab,
    /// Plus lost points and artifacts, each 10..20% per trial.
    ArtLost,
    /// Plus per-point measurement noise.
    Noisy,
    /// Measurement taken from a different label of the same size.
    WrongLabel,
    /// Noisy plus an extra per-point perturbation of forgery_grade_nm.
    Forgery,
};

std::string to_string(Scenario s);
Scenario scenario_from_string(const std::string& name);

/// The point-count grids of the synthetic study; rods use even counts only.
std::vector<int> paper_size_grid(LabelKind kind);

/// Default forgery grade sweeps (nm).
std::vector<double> paper_forgery_grades(LabelKind kind);

struct ExperimentPlan {
    LabelKind kind = LabelKind::Beads;
    std::vector<int> sizes;
    int references_per_size = 10;
    int measurements_per_reference = 10;
    Scenario scenario = Scenario::Lab;
    double forgery_grade_nm = 0.0;
    std::uint64_t seed = 0;
    VerifyConfig verify;
    /// Concurrent trials; 0 picks the hardware thread count. Reports are
    /// identical for every setting.
    int workers = 0;

    /// Pins sizes to the paper grid of `kind`.
    void use_paper_grid() { sizes = paper_size_grid(kind); }

    int trial_count() const {
        return static_cast<int>(sizes.size()) * references_per_size *
               measurements_per_reference;
    }
};

struct TrialRecord {
    int size = 0;
    int reference_index = 0;
    int measurement_index = 0;
    double fraction = 0.0;
    bool equal = false;
    double elapsed_ms = 0.0;
};

struct SizeStats {
    int size = 0;
    int trials = 0;
    double median = 0.0;
    double mean = 0.0;
    double share_below_half = 0.0;
};

struct ReferenceStats {
    int size = 0;
    int reference_index = 0;
    int trials = 0;
    double median = 0.0;
    double share_below_half = 0.0;
};

struct ExperimentReport {
    ExperimentPlan plan;
    std::vector<TrialRecord> trials;  // canonical (size, ref, meas) order
    double median = 0.0;
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    /// Counts of trial fractions per 10% bin; 1.0 falls into the last bin.
    /// Bins always sum to the trial count.
    std::array<int, 10> histogram{};
    double share_exact_one = 0.0;
    double share_below_half = 0.0;
    double share_at_least_0_7 = 0.0;
    /// Share of trials the verdict accepted at the configured threshold.
    double share_accepted = 0.0;
    std::vector<SizeStats> per_size;
    /// Per-reference distributions, so reference-dependent quality spread is
    /// observable.
    std::vector<ReferenceStats> per_reference;
};

/// Runs sizes x references x measurements verification trials of the plan's
/// scenario and aggregates the match fractions. Deterministic given the
/// plan seed, for any worker count.
ExperimentReport run_experiment(const ExperimentPlan& plan);

struct TimingRow {
    int size = 0;
    int repetitions = 0;
    double median_ms = 0.0;
    double p95_ms = 0.0;
};

/// Median and p95 wall clock of verify_label() per cloud size on this host,
/// over noisy-scenario bead inputs. repetitions == 0 yields an empty table.
std::vector<TimingRow> run_timing(const std::vector<int>& sizes, int repetitions,
                                  std::uint64_t seed = 0,
                                  const VerifyConfig& config = {});

std::string trials_to_csv(const ExperimentReport& report);
std::string report_to_json(const ExperimentReport& report);
std::string timing_to_csv(const std::vector<TimingRow>& rows);

}  // namespace authlabel
