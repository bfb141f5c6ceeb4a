#include <benchmark/benchmark.h>

#include <authlabel/label_model.hpp>
#include <authlabel/payload.hpp>
#include <authlabel/verification.hpp>

using namespace authlabel;

namespace {

PointCloud noisy_measurement(const PointCloud& ref, std::uint64_t seed) {
    MeasurementSpec spec;
    spec.noise_enabled = true;
    spec.lost_fraction = 0.15;
    spec.artifact_fraction = 0.15;
    spec.seed = seed;
    return synthesize_measurement(ref, spec).cloud;
}

}  // namespace

static void BM_register_single(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const PointCloud ref = generate_reference(LabelKind::Beads, size, 1);
    const PointCloud meas = noisy_measurement(ref, 2);
    for (auto _ : state) {
        benchmark::DoNotOptimize(register_clouds(ref, meas, Eigen::Matrix3d::Identity()));
    }
}
BENCHMARK(BM_register_single)->Arg(25)->Arg(50)->Arg(100);

static void BM_verify_full(benchmark::State& state) {
    const int size = static_cast<int>(state.range(0));
    const PointCloud ref = generate_reference(LabelKind::Beads, size, 1);
    const PointCloud meas = noisy_measurement(ref, 2);
    VerifyConfig config;
    config.max_parallel = 1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(verify_label(ref, meas, config));
    }
}
BENCHMARK(BM_verify_full)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_match_fraction(benchmark::State& state) {
    const PointCloud ref = generate_reference(LabelKind::Beads, 100, 1);
    const PointCloud meas = noisy_measurement(ref, 2);
    const RegistrationResult reg = register_clouds(ref, meas, Eigen::Matrix3d::Identity());
    const PointCloud aligned = apply_transform(meas, reg.transform);
    for (auto _ : state) {
        benchmark::DoNotOptimize(match_fraction(ref, aligned, reg.posterior));
    }
}
BENCHMARK(BM_match_fraction);

static void BM_payload_roundtrip(benchmark::State& state) {
    const PointCloud ref = generate_reference(LabelKind::Beads, 100, 1);
    for (auto _ : state) {
        benchmark::DoNotOptimize(decode_payload_a(encode_payload_a(ref)));
    }
}
BENCHMARK(BM_payload_roundtrip);

BENCHMARK_MAIN();
