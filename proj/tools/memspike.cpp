// Command-line front door: characterize | encode-detect | bench | power | synth.
// Configuration comes from an INI manifest (--config, or MEMSPIKE_CONFIG);
// flags override file values. All randomness derives from one master seed and
// identical invocations produce byte-identical artifacts. Partially written
// outputs are removed when a run fails.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "memspike/config.hpp"
#include "memspike/errors.hpp"
#include "memspike/recording.hpp"
#include "memspike/reports.hpp"
#include "memspike/util.hpp"

namespace {

using namespace memspike;

// Seed streams per subsystem so runs stay reproducible even when stages are
// added or reordered.
enum SeedStream : std::uint64_t { kDeviceStream = 1, kSynthStream = 2 };

class ArtifactSink {
public:
    explicit ArtifactSink(std::string dir) : dir_(std::move(dir)) {
        std::filesystem::create_directories(dir_);
    }

    std::string write(const std::string& name, const std::string& content) {
        const std::string path = (std::filesystem::path(dir_) / name).string();
        std::ofstream out(path, std::ios::binary);
        if (!out) throw Error("cannot write '" + path + "'");
        out << content;
        out.flush();
        if (!out) throw Error("write failed for '" + path + "'");
        written_.push_back(path);
        return path;
    }

    void discard_all() {
        for (const auto& p : written_) {
            std::error_code ec;
            std::filesystem::remove(p, ec);
        }
        written_.clear();
    }

    const std::vector<std::string>& written() const { return written_; }

private:
    std::string dir_;
    std::vector<std::string> written_;
};

bool want_csv(const RunConfig& run) { return run.format != "json"; }
bool want_json(const RunConfig& run) { return run.format != "csv"; }

Device make_device(const RunConfig& run, std::uint64_t stream) {
    DeviceParams p = run.device;
    p.seed = derive_seed(run.master_seed, stream);
    return Device(p);
}

Recording input_recording(const RunConfig& run, const std::string& input_path, bool use_synth) {
    if (use_synth) {
        SynthSpec spec = run.synth;
        spec.seed = derive_seed(run.master_seed, kSynthStream);
        return generate_recording(spec);
    }
    const std::string ext = std::filesystem::path(input_path).extension().string();
    Recording rec = (ext == ".f32" || ext == ".bin") ? load_recording_binary(input_path)
                                                     : load_recording(input_path);
    if (!within_frontend_range(rec))
        std::cerr << "warning: raw samples exceed the +-0.5 V front-end range\n";
    return rec;
}

int cmd_characterize(const RunConfig& run, ArtifactSink& sink) {
    Device dev = make_device(run, kDeviceStream);
    const VolatilityReport report = volatility_sweep(dev, run.sweep);

    if (want_csv(run)) sink.write("volatility.csv", volatility_csv(report));
    if (want_json(run)) sink.write("volatility.json", volatility_json(report));

    if (report.extracted_v_th)
        std::printf("threshold %.3g V, safe band [%.3g, %.3g] V, %zu records\n",
                    *report.extracted_v_th, report.safe_band->first,
                    report.safe_band->second, report.records.size());
    else
        std::printf("threshold not found within the swept range (%zu records)\n",
                    report.records.size());
    return 0;
}

int cmd_encode_detect(const RunConfig& run, ArtifactSink& sink,
                      const std::string& input_path, bool use_synth) {
    const Recording raw = input_recording(run, input_path, use_synth);
    const Recording pre = preprocess(raw, run.encoder.gain, run.encoder.offset);

    Device dev = make_device(run, kDeviceStream);
    const MeasurementLog log = drive_and_measure(dev, pre, run.encoder);
    const auto [bins, noise] = bin_changes(log, pre);

    const BandMode mode =
        dev.params().regime == Regime::Volatile ? BandMode::Volatile : BandMode::NonVolatile;
    const NoiseBand band = noise_band(noise, mode);
    const double v_th = run.v_th_override.value_or(dev.params().v_th_neg);
    const DetectionResult det = detect(bins, band, v_th);

    std::optional<ConfusionCounts> confusion;
    if (run.reference) {
        const std::vector<std::size_t> ref = reference_detect(raw, *run.reference);
        confusion = benchmark(det.spike, indices_to_bins(ref, bins));
    }

    if (want_csv(run)) {
        sink.write("bins.csv", bins_csv(bins, noise));
        sink.write("detect.csv", detect_csv(bins, det));
    }
    if (want_json(run))
        sink.write("report.json",
                   detection_report_json(band, det, confusion, log.measurements.size(),
                                         bins.size(), noise.size(),
                                         compression_ratio(log, raw)));

    std::printf("%zu measurements, %zu bins, %zu noise pairs, %zu spikes\n",
                log.measurements.size(), bins.size(), noise.size(), det.spike_count);
    if (confusion)
        std::printf("vs reference: TP=%zu FP=%zu TN=%zu FN=%zu  TPR=%.2f%% FPR=%.2f%%\n",
                    confusion->tp, confusion->fp, confusion->tn, confusion->fn,
                    confusion->tpr, confusion->fpr);
    return 0;
}

int cmd_bench(const RunConfig& run, ArtifactSink& sink, const std::string& input_path,
              bool use_synth) {
    if (run.bench.gains.empty()) throw ConfigError("bench: gain list is empty");
    if (!run.reference) throw ConfigError("bench: a reference detector is required");

    const Recording raw = input_recording(run, input_path, use_synth);
    const DeviceParams base = run.device;
    const auto factory = [&base](std::uint64_t seed) {
        DeviceParams p = base;
        p.seed = seed;
        return Device(p);
    };
    const std::vector<RocPoint> points =
        roc_sweep(raw, factory, run.bench.gains, run.bench.v_off, run.bench.repeats,
                  run.master_seed, run.encoder, *run.reference);

    if (want_csv(run)) sink.write("roc.csv", roc_csv(points));
    if (want_json(run)) sink.write("roc.json", roc_json(points));

    for (const auto& p : points)
        std::printf("gain %.3g: mean TPR %.2f%%, mean FPR %.2f%% over %zu runs\n", p.gain,
                    p.mean_tpr, p.mean_fpr, p.runs.size());
    return 0;
}

int cmd_power(const RunConfig& run, ArtifactSink& sink) {
    const PowerReport report = batch_report(run.power);
    std::fputs(power_table(run.power, report, run.power_preset_name).c_str(), stdout);
    if (want_json(run))
        sink.write("power.json", power_json(run.power, report, run.power_preset_name));
    return 0;
}

int cmd_synth(const RunConfig& run, ArtifactSink& sink, const std::string& name, bool binary) {
    SynthSpec spec = run.synth;
    spec.seed = derive_seed(run.master_seed, kSynthStream);
    const Recording rec = generate_recording(spec);

    const std::string path = (std::filesystem::path(run.out_dir) / name).string();
    try {
        if (binary) save_recording_binary(rec, path);
        else save_recording(rec, path);
    } catch (...) {
        std::error_code ec;
        std::filesystem::remove(path, ec);
        std::filesystem::remove(path + ".meta", ec);
        throw;
    }
    std::printf("wrote %s: %zu samples at %g Hz, %zu ground-truth spikes\n", path.c_str(),
                rec.samples.size(), rec.fs, rec.ground_truth->size());
    (void)sink;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memspike - volatile memristor spike-encoding simulator"};
    app.require_subcommand(1);

    std::string config_path;
    app.add_option("--config", config_path, "configuration file (INI)")
        ->envname("MEMSPIKE_CONFIG");
    std::optional<std::uint64_t> seed;
    app.add_option("--seed", seed, "master seed (overrides config)");
    std::optional<std::string> out_dir;
    app.add_option("--out", out_dir, "output directory (overrides config)");
    std::optional<std::string> format;
    app.add_option("--format", format, "artifact format")
        ->check(CLI::IsMember({"csv", "json", "both"}));

    auto* characterize = app.add_subcommand("characterize", "run the volatility sweep");

    auto* encode = app.add_subcommand("encode-detect", "drive a recording and detect spikes");
    std::string input_path;
    bool use_synth = false;
    auto* synth_flag = encode->add_flag("--synth", use_synth, "generate the input recording");
    encode->add_option("--input", input_path, "recording file")->excludes(synth_flag);

    auto* bench = app.add_subcommand("bench", "gain sweep with averaged TPR/FPR");
    std::string bench_input;
    bool bench_synth = true;
    bench->add_option("--input", bench_input, "recording file (default: synthetic)");

    auto* power = app.add_subcommand("power", "energy / average power estimate");
    std::string power_preset_flag;
    power->add_option("preset", power_preset_flag, "note1 | note2 | note2-100ns");

    auto* synth = app.add_subcommand("synth", "generate a synthetic recording");
    std::string synth_name = "recording.txt";
    bool synth_binary = false;
    synth->add_option("--output", synth_name, "file name inside the output directory");
    synth->add_flag("--binary", synth_binary, "write float32 + sidecar instead of text");

    // global flags may also trail the subcommand
    for (CLI::App* sub : {characterize, encode, bench, power, synth}) sub->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        RunConfig run;
        if (!config_path.empty()) run.apply(IniFile::parse_file(config_path));
        if (seed) run.master_seed = *seed;
        if (out_dir) run.out_dir = *out_dir;
        if (format) run.format = *format;
        if (!power_preset_flag.empty()) {
            run.power = power_preset(power_preset_flag);
            run.power_preset_name = power_preset_flag;
        }
        if (!bench_input.empty()) bench_synth = false;

        ArtifactSink sink(run.out_dir);
        try {
            if (characterize->parsed()) return cmd_characterize(run, sink);
            if (encode->parsed()) {
                if (input_path.empty() && !use_synth)
                    throw ConfigError("encode-detect: pass --input PATH or --synth");
                return cmd_encode_detect(run, sink, input_path, use_synth);
            }
            if (bench->parsed()) return cmd_bench(run, sink, bench_input, bench_synth);
            if (power->parsed()) return cmd_power(run, sink);
            if (synth->parsed()) return cmd_synth(run, sink, synth_name, synth_binary);
        } catch (...) {
            sink.discard_all();
            throw;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "parse error";
        if (e.line > 0) std::cerr << " (line " << e.line << ")";
        std::cerr << ": " << e.what() << "\n";
        return 1;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
