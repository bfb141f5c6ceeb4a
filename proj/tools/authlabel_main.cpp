// authlabel: generate, measure, verify, encode and sign unclonable label
// point clouds from the command line. See README.md for the file formats.

#include <authlabel/bench.hpp>
#include <authlabel/cloud_json.hpp>
#include <authlabel/payload.hpp>
#include <authlabel/rng.hpp>
#include <authlabel/signing.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace authlabel;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::vector<std::uint8_t> read_bytes(const std::string& path) {
    const std::string s = read_file(path);
    return {s.begin(), s.end()};
}

void write_file(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << data;
}

void write_bytes(const std::string& path, const std::vector<std::uint8_t>& data) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
}

// Info files may carry a trailing newline from an editor; the signed text
// must not.
std::string read_info_text(const std::string& path) {
    std::string text = read_file(path);
    while (!text.empty() && (text.back() == '\n' || text.back() == '\r')) text.pop_back();
    return text;
}

std::string verdict_json(const Verdict& verdict, const VerifyConfig& config) {
    nlohmann::json j;
    j["equal"] = verdict.equal;
    j["best_fraction"] = verdict.best_fraction;
    j["per_subcube_fractions"] = verdict.per_subcube_fractions;
    if (verdict.best_subcube_index == Verdict::npos) {
        j["best_subcube_index"] = nullptr;
        j["size_precheck_rejected"] = true;
    } else {
        j["best_subcube_index"] = verdict.best_subcube_index;
        j["size_precheck_rejected"] = false;
    }
    j["elapsed_ms"] = verdict.elapsed.count();
    j["config"]["match_threshold"] = config.match_threshold;
    j["config"]["max_size_deviation"] = config.max_size_deviation;
    j["config"]["divisions_per_axis"] = config.divisions_per_axis;
    j["config"]["outlier_weight"] = config.cpd.outlier_weight;
    j["config"]["max_parallel"] = config.max_parallel;
    return j.dump(2);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"unclonable label toolkit: point cloud generation, "
                 "registration-based verification, QR payloads and signatures"};
    app.require_subcommand(1);

    // generate
    auto* generate = app.add_subcommand("generate", "generate a synthetic reference cloud");
    std::string gen_kind = "beads", gen_out;
    int gen_points = 50;
    std::uint64_t gen_seed = 0;
    generate->add_option("--kind", gen_kind, "beads or rods")
        ->check(CLI::IsMember({"beads", "rods"}));
    generate->add_option("--points", gen_points, "point count (6..1000, even for rods)");
    generate->add_option("--seed", gen_seed, "generator seed");
    generate->add_option("--out", gen_out, "output cloud JSON")->required();

    // measure
    auto* measure = app.add_subcommand("measure", "synthesize a measurement of a reference");
    std::string meas_ref, meas_out, meas_transform_out;
    MeasurementSpec meas_spec;
    measure->add_option("--reference", meas_ref, "reference cloud JSON")->required();
    measure->add_option("--rotation-max", meas_spec.rotation_deg_max,
                        "rotation bound per axis, degrees");
    measure->add_option("--lost", meas_spec.lost_fraction, "lost point fraction (0..0.2)");
    measure->add_option("--artifacts", meas_spec.artifact_fraction,
                        "artifact fraction (0..0.2)");
    measure->add_flag("--noise", meas_spec.noise_enabled, "apply per-point measurement noise");
    measure->add_option("--forgery", meas_spec.forgery_grade_nm,
                        "forgery grade in nm (0 = none)");
    measure->add_option("--seed", meas_spec.seed, "measurement seed");
    measure->add_option("--out", meas_out, "output cloud JSON")->required();
    measure->add_option("--transform-out", meas_transform_out,
                        "optional JSON file for the applied ground-truth transform");

    // verify
    auto* verify = app.add_subcommand("verify", "compare a measurement against a reference");
    std::string ver_ref, ver_meas, ver_out;
    VerifyConfig ver_config;
    verify->add_option("--reference", ver_ref, "reference cloud JSON")->required();
    verify->add_option("--measurement", ver_meas, "measurement cloud JSON")->required();
    verify->add_option("--threshold", ver_config.match_threshold,
                       "minimum matched fraction for equality");
    verify->add_option("--divisions", ver_config.divisions_per_axis,
                       "rotation subcube divisions per axis");
    verify->add_option("--max-size-deviation", ver_config.max_size_deviation,
                       "size pre-check bound");
    verify->add_option("--parallel", ver_config.max_parallel,
                       "concurrent registrations (0 = hardware)");
    verify->add_option("--out", ver_out, "verdict JSON output");

    // encode
    auto* encode = app.add_subcommand(
        "encode", "build both QR payloads (points + signed product info) for a cloud");
    std::string enc_cloud, enc_info, enc_key, enc_out_a, enc_out_b;
    encode->add_option("--cloud", enc_cloud, "reference cloud JSON")->required();
    encode->add_option("--info", enc_info, "product info text file (Latin-1 content)")
        ->required();
    encode->add_option("--key", enc_key, "private key PEM")->required();
    encode->add_option("--out-a", enc_out_a, "payload A output (ASCII digits)")->required();
    encode->add_option("--out-b", enc_out_b, "payload B output (raw bytes)")->required();

    // decode
    auto* decode = app.add_subcommand("decode", "parse payload files back into their parts");
    std::string dec_in_a, dec_in_b, dec_out_cloud, dec_out_info, dec_out_sig;
    decode->add_option("--in-a", dec_in_a, "payload A file (ASCII digits)");
    decode->add_option("--in-b", dec_in_b, "payload B file (raw bytes)");
    decode->add_option("--out-cloud", dec_out_cloud, "cloud JSON output (payload A)");
    decode->add_option("--out-info", dec_out_info, "product info text output (payload B)");
    decode->add_option("--out-sig", dec_out_sig, "signature blob output (payload B)");

    // keygen
    auto* keygen = app.add_subcommand("keygen", "generate a secp256r1 keypair");
    std::string key_out, key_pub;
    std::optional<std::uint64_t> key_seed;
    keygen->add_option("--out", key_out, "private key PEM output")->required();
    keygen->add_option("--pub", key_pub, "public key PEM output")->required();
    keygen->add_option("--seed", key_seed, "derive the key deterministically from a seed");

    // sign
    auto* sign = app.add_subcommand("sign", "sign payload A digits plus product info");
    std::string sign_a, sign_cloud, sign_info, sign_key, sign_out;
    sign->add_option("--payload-a", sign_a, "payload A file (ASCII digits)");
    sign->add_option("--cloud", sign_cloud, "cloud JSON (encoded to payload A first)");
    sign->add_option("--info", sign_info, "product info text file")->required();
    sign->add_option("--key", sign_key, "private key PEM")->required();
    sign->add_option("--out", sign_out, "signature blob output")->required();

    // verify-sig
    auto* verify_sig = app.add_subcommand("verify-sig", "check a detached signature");
    std::string vs_a, vs_info, vs_sig, vs_pub;
    verify_sig->add_option("--payload-a", vs_a, "payload A file (ASCII digits)")->required();
    verify_sig->add_option("--info", vs_info, "product info text file")->required();
    verify_sig->add_option("--sig", vs_sig, "signature blob")->required();
    verify_sig->add_option("--pub", vs_pub, "public key PEM")->required();

    // bench
    auto* bench = app.add_subcommand("bench", "run a synthetic evaluation scenario");
    std::string bench_kind = "beads", bench_scenario = "noisy", bench_csv, bench_json;
    std::vector<int> bench_sizes;
    std::vector<double> bench_grades;
    int bench_refs = 10, bench_meas = 10, bench_workers = 0;
    std::uint64_t bench_seed = 0;
    bool bench_paper_grid = false;
    double bench_threshold = 0.5;
    bench->add_option("--kind", bench_kind, "beads or rods")
        ->check(CLI::IsMember({"beads", "rods"}));
    bench->add_option("--scenario", bench_scenario,
                      "lab, artlost, noisy, wrong-label or forgery")
        ->check(CLI::IsMember({"lab", "artlost", "noisy", "wrong-label", "wrong", "forgery"}));
    bench->add_flag("--paper-grid", bench_paper_grid,
                    "pin sizes and trial counts to the study grid");
    bench->add_option("--sizes", bench_sizes, "cloud sizes")->delimiter(',');
    bench->add_option("--refs", bench_refs, "references per size");
    bench->add_option("--meas", bench_meas, "measurements per reference");
    bench->add_option("--grades", bench_grades, "forgery grades in nm")->delimiter(',');
    bench->add_option("--seed", bench_seed, "experiment seed");
    bench->add_option("--threshold", bench_threshold, "acceptance threshold");
    bench->add_option("--parallel", bench_workers, "worker threads (0 = hardware)");
    bench->add_option("--out", bench_csv, "per-trial CSV output");
    bench->add_option("--out-json", bench_json, "summary JSON output");

    // timing
    auto* timing = app.add_subcommand("timing", "measure verification wall clock per size");
    std::vector<int> timing_sizes{25, 30, 35, 40, 45, 50, 60, 75, 100};
    int timing_reps = 5, timing_workers = 0;
    std::uint64_t timing_seed = 0;
    std::string timing_out;
    timing->add_option("--sizes", timing_sizes, "cloud sizes")->delimiter(',');
    timing->add_option("--repetitions", timing_reps, "verifications per size");
    timing->add_option("--seed", timing_seed, "input seed");
    timing->add_option("--parallel", timing_workers, "concurrent registrations (0 = hardware)");
    timing->add_option("--out", timing_out, "CSV output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*generate) {
            const PointCloud cloud =
                generate_reference(label_kind_from_string(gen_kind), gen_points, gen_seed);
            save_cloud(cloud, gen_out);
            std::cout << "wrote " << cloud.size() << "-point " << gen_kind << " reference to "
                      << gen_out << "\n";
        } else if (*measure) {
            const PointCloud ref = load_cloud(meas_ref);
            const SynthesizedMeasurement result = synthesize_measurement(ref, meas_spec);
            save_cloud(result.cloud, meas_out);
            if (!meas_transform_out.empty()) {
                nlohmann::json j;
                j["scale"] = result.applied.scale;
                for (int r = 0; r < 3; ++r)
                    for (int c = 0; c < 3; ++c)
                        j["rotation"][r][c] = result.applied.rotation(r, c);
                j["translation"] = {result.applied.translation.x(),
                                    result.applied.translation.y(),
                                    result.applied.translation.z()};
                write_file(meas_transform_out, j.dump(2) + "\n");
            }
            std::cout << "wrote " << result.cloud.size() << "-point measurement to " << meas_out
                      << "\n";
        } else if (*verify) {
            const PointCloud ref = load_cloud(ver_ref);
            const PointCloud meas = load_cloud(ver_meas);
            const Verdict verdict = verify_label(ref, meas, ver_config);
            const std::string json = verdict_json(verdict, ver_config);
            if (!ver_out.empty()) write_file(ver_out, json + "\n");
            std::cout << json << "\n";
            return verdict.equal ? 0 : 1;
        } else if (*encode) {
            const PointCloud cloud = load_cloud(enc_cloud);
            const std::string info = read_info_text(enc_info);
            const PayloadA a = encode_payload_a(cloud);
            const auto signature = sign_payload(a, info, read_file(enc_key));
            const PayloadB b = encode_payload_b(info, signature);
            write_file(enc_out_a, a.digits);
            write_bytes(enc_out_b, b.bytes);
            std::cout << "payload A: " << a.digits.size() << " digits (print >= "
                      << recommended_print_side_cm(a) << " cm); payload B: " << b.bytes.size()
                      << " bytes (print >= " << recommended_print_side_cm(b) << " cm)\n";
        } else if (*decode) {
            if (dec_in_a.empty() && dec_in_b.empty())
                throw std::runtime_error("decode needs --in-a and/or --in-b");
            if (!dec_in_a.empty()) {
                const PointCloud cloud = decode_payload_a(PayloadA{read_file(dec_in_a)});
                if (dec_out_cloud.empty())
                    std::cout << cloud_to_json(cloud) << "\n";
                else
                    save_cloud(cloud, dec_out_cloud);
            }
            if (!dec_in_b.empty()) {
                const DecodedPayloadB decoded = decode_payload_b(PayloadB{read_bytes(dec_in_b)});
                if (dec_out_info.empty())
                    std::cout << decoded.product_info << "\n";
                else
                    write_file(dec_out_info, decoded.product_info);
                if (!dec_out_sig.empty()) write_bytes(dec_out_sig, decoded.signature);
            }
        } else if (*keygen) {
            const KeyPair keys = generate_keypair(key_seed);
            write_file(key_out, keys.private_key_pem);
            write_file(key_pub, keys.public_key_pem);
            std::cout << "wrote " << key_out << " and " << key_pub << "\n";
        } else if (*sign) {
            if (sign_a.empty() == sign_cloud.empty())
                throw std::runtime_error("sign needs exactly one of --payload-a or --cloud");
            const PayloadA a = sign_a.empty() ? encode_payload_a(load_cloud(sign_cloud))
                                              : PayloadA{read_file(sign_a)};
            const auto signature =
                sign_payload(a, read_info_text(sign_info), read_file(sign_key));
            write_bytes(sign_out, signature);
            std::cout << "wrote " << signature.size() << "-byte signature to " << sign_out
                      << "\n";
        } else if (*verify_sig) {
            const bool ok =
                verify_signature(PayloadA{read_file(vs_a)}, read_info_text(vs_info),
                                 read_bytes(vs_sig), read_file(vs_pub));
            std::cout << (ok ? "signature valid" : "signature INVALID") << "\n";
            return ok ? 0 : 1;
        } else if (*bench) {
            ExperimentPlan plan;
            plan.kind = label_kind_from_string(bench_kind);
            plan.scenario = scenario_from_string(bench_scenario);
            plan.seed = bench_seed;
            plan.workers = bench_workers;
            plan.references_per_size = bench_refs;
            plan.measurements_per_reference = bench_meas;
            plan.verify.match_threshold = bench_threshold;
            if (bench_paper_grid) {
                plan.use_paper_grid();
                plan.references_per_size = 10;
                plan.measurements_per_reference = 10;
            } else if (!bench_sizes.empty()) {
                plan.sizes = bench_sizes;
            } else {
                plan.use_paper_grid();
            }

            std::vector<double> grades{plan.forgery_grade_nm};
            if (plan.scenario == Scenario::Forgery)
                grades = bench_grades.empty() ? paper_forgery_grades(plan.kind) : bench_grades;

            nlohmann::json summaries = nlohmann::json::array();
            std::string csv;
            for (double grade : grades) {
                plan.forgery_grade_nm = grade;
                const ExperimentReport report = run_experiment(plan);
                const std::string chunk = trials_to_csv(report);
                csv += csv.empty() ? chunk : chunk.substr(chunk.find('\n') + 1);
                summaries.push_back(nlohmann::json::parse(report_to_json(report)));
                std::cout << to_string(plan.scenario)
                          << (plan.scenario == Scenario::Forgery
                                  ? " g=" + std::to_string(grade)
                                  : std::string())
                          << ": trials=" << report.trials.size() << " median=" << report.median
                          << " mean=" << report.mean << " share(==1.0)=" << report.share_exact_one
                          << " share(<0.5)=" << report.share_below_half << "\n";
            }
            if (!bench_csv.empty()) write_file(bench_csv, csv);
            if (!bench_json.empty())
                write_file(bench_json,
                           (summaries.size() == 1 ? summaries[0] : summaries).dump(2) + "\n");
        } else if (*timing) {
            VerifyConfig config;
            config.max_parallel = timing_workers;
            const auto rows = run_timing(timing_sizes, timing_reps, timing_seed, config);
            const std::string csv = timing_to_csv(rows);
            if (!timing_out.empty()) write_file(timing_out, csv);
            std::cout << csv;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
