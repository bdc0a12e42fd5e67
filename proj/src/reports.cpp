#include "memspike/reports.hpp"

#include <algorithm>
#include <cstdio>
#include <vector>

#include <json.hpp>

namespace memspike {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

const char* quadrant_name(Quadrant q) {
    switch (q) {
        case Quadrant::TP: return "TP";
        case Quadrant::FP: return "FP";
        case Quadrant::FN: return "FN";
        case Quadrant::TN: return "TN";
    }
    return "?";
}

ordered_json confusion_json(const ConfusionCounts& c) {
    return ordered_json{{"tp", c.tp}, {"fp", c.fp}, {"tn", c.tn}, {"fn", c.fn},
                        {"tpr_percent", c.tpr}, {"fpr_percent", c.fpr}};
}

}  // namespace

std::string volatility_csv(const VolatilityReport& report) {
    std::string out = "v_w_volt,delta_volatile,delta_nonvolatile\n";
    for (const auto& r : report.records)
        out += format_double(r.v_w) + "," + format_double(r.delta_volatile) + "," +
               format_double(r.delta_nonvolatile) + "\n";
    return out;
}

std::string volatility_json(const VolatilityReport& report) {
    ordered_json j;
    j["records"] = ordered_json::array();
    for (const auto& r : report.records) {
        j["records"].push_back(ordered_json{
            {"v_w_volt", r.v_w},
            {"r_i_ohm", r.r_i},
            {"r_ii_ohm", r.r_ii},
            {"r_iii_ohm", r.r_iii},
            {"r_iv_ohm", r.r_iv},
            {"delta_volatile", r.delta_volatile},
            {"delta_nonvolatile", r.delta_nonvolatile},
            {"settle_time_s", r.settle_time},
            {"retention_passed", r.retention_passed},
        });
    }
    j["noise_floor"] = report.noise_floor;
    j["threshold_found"] = report.extracted_v_th.has_value();
    if (report.extracted_v_th) j["extracted_v_th_volt"] = *report.extracted_v_th;
    else j["extracted_v_th_volt"] = nullptr;
    if (report.safe_band)
        j["safe_band_volt"] = ordered_json::array({report.safe_band->first, report.safe_band->second});
    else
        j["safe_band_volt"] = nullptr;
    return j.dump(2) + "\n";
}

std::string bins_csv(std::span<const BinRecord> bins, std::span<const BinRecord> noise) {
    std::vector<BinRecord> all(bins.begin(), bins.end());
    all.insert(all.end(), noise.begin(), noise.end());
    std::stable_sort(all.begin(), all.end(), [](const BinRecord& a, const BinRecord& b) {
        return a.end != b.end ? a.end < b.end : a.begin < b.begin;
    });

    std::string out =
        "start_index,end_index,r_before_ohm,r_after_ohm,delta_rel,v_peak_volt,is_noise_pair\n";
    for (const auto& b : all)
        out += std::to_string(b.begin) + "," + std::to_string(b.end) + "," +
               format_double(b.r_before) + "," + format_double(b.r_after) + "," +
               format_double(b.delta_rel) + "," + format_double(b.v_peak) + "," +
               (b.is_noise_pair ? "1" : "0") + "\n";
    return out;
}

std::string detect_csv(std::span<const BinRecord> bins, const DetectionResult& det) {
    std::string out = "delta_rel,v_peak_volt,significant,quadrant\n";
    for (std::size_t i = 0; i < bins.size(); ++i)
        out += format_double(bins[i].delta_rel) + "," + format_double(bins[i].v_peak) + "," +
               (det.spike[i] ? "1" : "0") + "," + quadrant_name(det.quadrant[i]) + "\n";
    return out;
}

std::string detection_report_json(const NoiseBand& band, const DetectionResult& det,
                                  const std::optional<ConfusionCounts>& confusion,
                                  std::size_t n_measurements, std::size_t n_bins,
                                  std::size_t n_noise, double compression) {
    ordered_json j;
    j["band"] = ordered_json{
        {"mode", band.mode == BandMode::Volatile ? "volatile" : "nonvolatile"},
        {"center", band.center},
        {"threshold_neg", band.threshold_neg},
        {"threshold_pos", band.threshold_pos ? ordered_json(*band.threshold_pos) : ordered_json(nullptr)},
        {"n_used", band.n_used},
    };
    j["spike_count"] = det.spike_count;
    j["measurements"] = n_measurements;
    j["bins"] = n_bins;
    j["noise_pairs"] = n_noise;
    j["compression_ratio"] = compression;
    j["confusion"] = confusion ? confusion_json(*confusion) : ordered_json(nullptr);
    return j.dump(2) + "\n";
}

std::string roc_csv(std::span<const RocPoint> points) {
    std::string out = "gain,repeat,tpr_percent,fpr_percent\n";
    for (const auto& p : points) {
        for (const auto& run : p.runs)
            out += format_double(p.gain) + "," + std::to_string(run.repeat) + "," +
                   format_double(run.counts.tpr) + "," + format_double(run.counts.fpr) + "\n";
        out += format_double(p.gain) + ",avg," + format_double(p.mean_tpr) + "," +
               format_double(p.mean_fpr) + "\n";
    }
    return out;
}

std::string roc_json(std::span<const RocPoint> points) {
    ordered_json j = ordered_json::array();
    for (const auto& p : points) {
        ordered_json runs = ordered_json::array();
        for (const auto& run : p.runs) {
            ordered_json r = confusion_json(run.counts);
            r["repeat"] = run.repeat;
            runs.push_back(r);
        }
        j.push_back(ordered_json{{"gain", p.gain},
                                 {"mean_tpr_percent", p.mean_tpr},
                                 {"mean_fpr_percent", p.mean_fpr},
                                 {"runs", runs}});
    }
    return j.dump(2) + "\n";
}

std::string power_json(const PowerConfig& cfg, const PowerReport& rep,
                       const std::string& preset_name) {
    ordered_json j;
    j["preset"] = preset_name;
    j["config"] = ordered_json{
        {"r_device_ohm", cfg.r_device},
        {"r_series_ohm", cfg.r_series},
        {"v_read_volt", cfg.v_read},
        {"v_write_volt", cfg.v_write},
        {"t_read_s", cfg.t_read},
        {"t_write_s", cfg.t_write},
        {"reads_per_batch", cfg.reads_per_batch},
        {"samples_per_batch", cfg.samples_per_batch},
        {"fs_hz", cfg.fs},
        {"resets_per_recording", cfg.resets_per_recording},
        {"v_reset_volt", cfg.v_reset},
        {"t_reset_s", cfg.t_reset},
        {"batches_per_recording", cfg.batches_per_recording},
        {"include_series_on_write", cfg.include_series_on_write},
    };
    j["report"] = ordered_json{
        {"e_read_single_j", rep.e_read_single},
        {"e_write_single_j", rep.e_write_single},
        {"e_reset_single_j", rep.e_reset_single},
        {"e_read_batch_j", rep.e_read_total},
        {"e_write_batch_j", rep.e_write_total},
        {"e_reset_recording_j", rep.e_reset_total},
        {"e_reset_batch_amortized_j", rep.e_reset_per_batch},
        {"e_read_device_share_j", rep.e_read_device_share},
        {"batch_duration_s", rep.batch_duration},
        {"p_avg_w", rep.p_avg},
    };
    return j.dump(2) + "\n";
}

std::string power_table(const PowerConfig& cfg, const PowerReport& rep,
                        const std::string& preset_name) {
    char buf[1600];
    std::snprintf(
        buf, sizeof buf,
        "power estimate (%s)\n"
        "  read  : %.4g V over %.4g + %.4g ohm, %.4g s  -> %.6g J/pulse, %.6g J/batch (%d reads)\n"
        "          device-only share %.6g J/batch\n"
        "  write : %.4g V over %.4g ohm, %.4g s          -> %.6g J/pulse, %.6g J/batch (%d samples)\n"
        "  reset : %d per recording at %.4g V, %.4g s    -> %.6g J each, %.6g J amortized/batch\n"
        "  batch : %.6g s @ %.4g Hz\n"
        "  p_avg : %.6g W\n",
        preset_name.c_str(), cfg.v_read, cfg.r_device, cfg.r_series, cfg.t_read,
        rep.e_read_single, rep.e_read_total, cfg.reads_per_batch, rep.e_read_device_share,
        cfg.v_write, cfg.include_series_on_write ? cfg.r_device + cfg.r_series : cfg.r_device,
        cfg.t_write, rep.e_write_single, rep.e_write_total, cfg.samples_per_batch,
        cfg.resets_per_recording, cfg.v_reset, cfg.t_reset, rep.e_reset_single,
        rep.e_reset_per_batch, rep.batch_duration, cfg.fs, rep.p_avg);
    return buf;
}

}  // namespace memspike
