#include <authlabel/bench.hpp>
#include <authlabel/rng.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

namespace authlabel {

namespace {

double median_of_sorted(const std::vector<double>& sorted) {
    const std::size_t n = sorted.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return sorted[n / 2];
    return 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    return median_of_sorted(values);
}

MeasurementSpec scenario_spec(Scenario scenario, double forgery_grade_nm,
                              std::uint64_t seed) {
    MeasurementSpec spec;
    spec.seed = seed;
    spec.rotation_deg_max = 20.0;
    switch (scenario) {
        case Scenario::Lab:
            break;
        case Scenario::ArtLost:
        case Scenario::Noisy:
        case Scenario::WrongLabel:
        case Scenario::Forgery: {
            // Lost and artifact shares move in the practical 10..20% band.
            auto rng = SeedSequence(seed).child("fractions").engine();
            std::uniform_real_distribution<double> band(0.10, 0.20);
            spec.lost_fraction = band(rng);
            spec.artifact_fraction = band(rng);
            spec.noise_enabled = scenario != Scenario::ArtLost;
            if (scenario == Scenario::Forgery) spec.forgery_grade_nm = forgery_grade_nm;
            break;
        }
    }
    return spec;
}

void run_trials(const ExperimentPlan& plan, std::vector<TrialRecord>& records) {
    const int n_sizes = static_cast<int>(plan.sizes.size());
    const int per_size = plan.references_per_size * plan.measurements_per_reference;
    const int total = n_sizes * per_size;
    records.resize(total);

    VerifyConfig verify = plan.verify;
    verify.max_parallel = 1;  // parallelism lives at the trial level here

    const SeedSequence base = SeedSequence(plan.seed).child(to_string(plan.kind));

    auto run_one = [&](int flat) {
        const int size = plan.sizes[flat / per_size];
        const int ref_index = (flat % per_size) / plan.measurements_per_reference;
        const int meas_index = flat % plan.measurements_per_reference;

        const SeedSequence size_seq = base.child(static_cast<std::uint64_t>(size));
        const PointCloud reference = generate_reference(
            plan.kind, size,
            size_seq.child("ref").child(static_cast<std::uint64_t>(ref_index)).value());

        const std::uint64_t trial_seed = size_seq.child("meas")
                                             .child(static_cast<std::uint64_t>(ref_index))
                                             .child(static_cast<std::uint64_t>(meas_index))
                                             .value();
        const MeasurementSpec spec =
            scenario_spec(plan.scenario, plan.forgery_grade_nm, trial_seed);

        PointCloud measurement;
        if (plan.scenario == Scenario::WrongLabel) {
            const PointCloud other = generate_reference(
                plan.kind, size,
                size_seq.child("other")
                    .child(static_cast<std::uint64_t>(ref_index))
                    .child(static_cast<std::uint64_t>(meas_index))
                    .value());
            measurement = synthesize_measurement(other, spec).cloud;
        } else {
            measurement = synthesize_measurement(reference, spec).cloud;
        }

        const Verdict verdict = verify_label(reference, measurement, verify);
        records[flat] = {size,          ref_index,
                         meas_index,    verdict.best_fraction,
                         verdict.equal, verdict.elapsed.count()};
    };

    unsigned workers = plan.workers > 0 ? static_cast<unsigned>(plan.workers)
                                        : std::max(1u, std::thread::hardware_concurrency());
    workers = std::min(workers, static_cast<unsigned>(std::max(total, 1)));
    if (workers <= 1 || total <= 1) {
        for (int i = 0; i < total; ++i) run_one(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < workers; ++t) {
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < total; i = next.fetch_add(1)) {
                try {
                    run_one(i);
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

}  // namespace

std::string to_string(Scenario s) {
    switch (s) {
        case Scenario::Lab: return "lab";
        case Scenario::ArtLost: return "artlost";
        case Scenario::Noisy: return "noisy";
        case Scenario::WrongLabel: return "wrong-label";
        case Scenario::Forgery: return "forgery";
    }
    return "?";
}

Scenario scenario_from_string(const std::string& name) {
    if (name == "lab") return Scenario::Lab;
    if (name == "artlost") return Scenario::ArtLost;
    if (name == "noisy") return Scenario::Noisy;
    if (name == "wrong-label" || name == "wrong") return Scenario::WrongLabel;
    if (name == "forgery") return Scenario::Forgery;
    throw std::invalid_argument("unknown scenario: " + name);
}

std::vector<int> paper_size_grid(LabelKind kind) {
    if (kind == LabelKind::Beads) return {25, 30, 35, 40, 45, 50, 60, 75, 100};
    return {24, 30, 34, 40, 44, 50, 60, 74, 100};
}

std::vector<double> paper_forgery_grades(LabelKind kind) {
    if (kind == LabelKind::Beads) return {0, 1, 5, 15, 25, 50};
    return {0, 1, 5, 25, 50};
}

ExperimentReport run_experiment(const ExperimentPlan& plan) {
    if (plan.references_per_size < 0 || plan.measurements_per_reference < 0)
        throw std::invalid_argument("negative trial counts");
    for (int size : plan.sizes)
        if (plan.kind == LabelKind::Rods && size % 2 != 0)
            throw std::invalid_argument("rod grids need even sizes");
    plan.verify.validate();

    ExperimentReport report;
    report.plan = plan;
    run_trials(plan, report.trials);

    const auto n = report.trials.size();
    if (n == 0) return report;

    std::vector<double> fractions;
    fractions.reserve(n);
    int accepted = 0, exact_one = 0, below_half = 0, at_least_07 = 0;
    for (const TrialRecord& t : report.trials) {
        fractions.push_back(t.fraction);
        accepted += t.equal ? 1 : 0;
        exact_one += t.fraction == 1.0 ? 1 : 0;
        below_half += t.fraction < 0.5 ? 1 : 0;
        at_least_07 += t.fraction >= 0.7 ? 1 : 0;
        const int bin = std::min(static_cast<int>(t.fraction * 10.0), 9);
        ++report.histogram[bin];
    }
    std::sort(fractions.begin(), fractions.end());
    report.median = median_of_sorted(fractions);
    report.mean =
        std::accumulate(fractions.begin(), fractions.end(), 0.0) / static_cast<double>(n);
    report.min = fractions.front();
    report.max = fractions.back();
    report.share_accepted = static_cast<double>(accepted) / static_cast<double>(n);
    report.share_exact_one = static_cast<double>(exact_one) / static_cast<double>(n);
    report.share_below_half = static_cast<double>(below_half) / static_cast<double>(n);
    report.share_at_least_0_7 = static_cast<double>(at_least_07) / static_cast<double>(n);

    std::map<int, std::vector<double>> by_size;
    std::map<std::pair<int, int>, std::vector<double>> by_reference;
    for (const TrialRecord& t : report.trials) {
        by_size[t.size].push_back(t.fraction);
        by_reference[{t.size, t.reference_index}].push_back(t.fraction);
    }
    for (auto& [size, values] : by_size) {
        SizeStats s;
        s.size = size;
        s.trials = static_cast<int>(values.size());
        s.mean = std::accumulate(values.begin(), values.end(), 0.0) /
                 static_cast<double>(values.size());
        s.share_below_half =
            static_cast<double>(std::count_if(values.begin(), values.end(),
                                              [](double f) { return f < 0.5; })) /
            static_cast<double>(values.size());
        s.median = median_of(std::move(values));
        report.per_size.push_back(s);
    }
    for (auto& [key, values] : by_reference) {
        ReferenceStats r;
        r.size = key.first;
        r.reference_index = key.second;
        r.trials = static_cast<int>(values.size());
        r.share_below_half =
            static_cast<double>(std::count_if(values.begin(), values.end(),
                                              [](double f) { return f < 0.5; })) /
            static_cast<double>(values.size());
        r.median = median_of(std::move(values));
        report.per_reference.push_back(r);
    }
    return report;
}

std::vector<TimingRow> run_timing(const std::vector<int>& sizes, int repetitions,
                                  std::uint64_t seed, const VerifyConfig& config) {
    std::vector<TimingRow> rows;
    if (repetitions <= 0) return rows;
    const SeedSequence base = SeedSequence(seed).child("timing");
    for (int size : sizes) {
        const SeedSequence size_seq = base.child(static_cast<std::uint64_t>(size));
        const PointCloud reference =
            generate_reference(LabelKind::Beads, size, size_seq.child("ref").value());
        std::vector<double> times;
        times.reserve(repetitions);
        for (int rep = 0; rep < repetitions; ++rep) {
            const MeasurementSpec spec = scenario_spec(
                Scenario::Noisy, 0.0,
                size_seq.child("meas").child(static_cast<std::uint64_t>(rep)).value());
            const PointCloud measurement = synthesize_measurement(reference, spec).cloud;
            const Verdict verdict = verify_label(reference, measurement, config);
            times.push_back(verdict.elapsed.count());
        }
        std::sort(times.begin(), times.end());
        TimingRow row;
        row.size = size;
        row.repetitions = repetitions;
        row.median_ms = median_of_sorted(times);
        row.p95_ms = times[std::min(times.size() - 1,
                                    static_cast<std::size_t>(
                                        std::ceil(0.95 * static_cast<double>(times.size())) - 1))];
        rows.push_back(row);
    }
    return rows;
}

std::string trials_to_csv(const ExperimentReport& report) {
    std::ostringstream out;
    out << "kind,scenario,forgery_grade_nm,size,reference_index,measurement_index,"
           "fraction,equal,elapsed_ms\n";
    for (const TrialRecord& t : report.trials) {
        out << to_string(report.plan.kind) << ',' << to_string(report.plan.scenario) << ','
            << report.plan.forgery_grade_nm << ',' << t.size << ',' << t.reference_index
            << ',' << t.measurement_index << ',' << t.fraction << ',' << (t.equal ? 1 : 0)
            << ',' << t.elapsed_ms << '\n';
    }
    return out.str();
}

std::string report_to_json(const ExperimentReport& report) {
    nlohmann::json j;
    j["kind"] = to_string(report.plan.kind);
    j["scenario"] = to_string(report.plan.scenario);
    j["forgery_grade_nm"] = report.plan.forgery_grade_nm;
    j["seed"] = report.plan.seed;
    j["sizes"] = report.plan.sizes;
    j["references_per_size"] = report.plan.references_per_size;
    j["measurements_per_reference"] = report.plan.measurements_per_reference;
    j["match_threshold"] = report.plan.verify.match_threshold;
    j["divisions_per_axis"] = report.plan.verify.divisions_per_axis;
    j["trials"] = report.trials.size();
    j["median"] = report.median;
    j["mean"] = report.mean;
    j["min"] = report.min;
    j["max"] = report.max;
    j["histogram"] = report.histogram;
    j["share_accepted"] = report.share_accepted;
    j["share_exact_one"] = report.share_exact_one;
    j["share_below_half"] = report.share_below_half;
    j["share_at_least_0_7"] = report.share_at_least_0_7;
    for (const SizeStats& s : report.per_size)
        j["per_size"].push_back({{"size", s.size},
                                 {"trials", s.trials},
                                 {"median", s.median},
                                 {"mean", s.mean},
                                 {"share_below_half", s.share_below_half}});
    for (const ReferenceStats& r : report.per_reference)
        j["per_reference"].push_back({{"size", r.size},
                                      {"reference_index", r.reference_index},
                                      {"trials", r.trials},
                                      {"median", r.median},
                                      {"share_below_half", r.share_below_half}});
    return j.dump(2);
}

std::string timing_to_csv(const std::vector<TimingRow>& rows) {
    std::ostringstream out;
    out << "size,repetitions,median_ms,p95_ms\n";
    for (const TimingRow& r : rows)
        out << r.size << ',' << r.repetitions << ',' << r.median_ms << ',' << r.p95_ms << '\n';
    return out.str();
}

}  // namespace authlabel
