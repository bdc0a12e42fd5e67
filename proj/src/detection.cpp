#include "memspike/detection.hpp"

#include <cmath>
#include <string>

#include "memspike/errors.hpp"
#include "memspike/stats.hpp"
#include "memspike/util.hpp"

namespace memspike {

NoiseBand noise_band(std::span<const BinRecord> noise, BandMode mode) {
    NoiseBand band;
    band.mode = mode;

    std::vector<double> xs;
    xs.reserve(noise.size());
    if (mode == BandMode::Volatile) {
        // Positive noise changes are the self-reset direction; discard them.
        for (const auto& n : noise)
            if (n.delta_rel <= 0.0) xs.push_back(std::abs(n.delta_rel));
        if (xs.size() < 2)
            throw InsufficientNoiseError(
                "noise band: fewer than 2 negative-polarity noise measurements; "
                "use a longer recording");
        band.threshold_neg = mean(xs) + 2.0 * sample_std(xs);
        band.center = 0.0;
    } else {
        for (const auto& n : noise) xs.push_back(n.delta_rel);
        if (xs.size() < 2)
            throw InsufficientNoiseError("noise band: fewer than 2 noise measurements");
        const double sigma = sample_std(xs);
        band.center = mean(xs);
        band.threshold_neg = 3.0 * sigma;
        band.threshold_pos = 3.0 * sigma;
    }
    band.n_used = xs.size();
    return band;
}

DetectionResult detect(std::span<const BinRecord> bins, const NoiseBand& band, double v_th) {
    DetectionResult res;
    res.spike.reserve(bins.size());
    res.quadrant.reserve(bins.size());
    for (const auto& bin : bins) {
        bool significant = false;
        if (band.mode == BandMode::Volatile) {
            significant = bin.delta_rel < -band.threshold_neg;
        } else {
            significant = bin.delta_rel < band.center - band.threshold_neg ||
                          bin.delta_rel > band.center + band.threshold_pos.value_or(
                                                            band.threshold_neg);
        }
        const bool stimulated = bin.v_peak < v_th;  // supra-threshold stimulus present
        res.spike.push_back(significant);
        if (significant)
            res.quadrant.push_back(stimulated ? Quadrant::TP : Quadrant::FP);
        else
            res.quadrant.push_back(stimulated ? Quadrant::FN : Quadrant::TN);
        if (significant) ++res.spike_count;
    }
    return res;
}

ConfusionCounts benchmark(const std::vector<bool>& ours, const std::vector<bool>& reference) {
    if (ours.size() != reference.size())
        throw InvalidInput("benchmark: spike vectors differ in length");
    ConfusionCounts c;
    for (std::size_t i = 0; i < ours.size(); ++i) {
        if (ours[i] && reference[i]) ++c.tp;
        else if (!ours[i] && !reference[i]) ++c.tn;
        else if (ours[i]) ++c.fp;
        else ++c.fn;
    }
    c.tpr = (c.tp + c.fn) > 0 ? 100.0 * static_cast<double>(c.tp) /
                                    static_cast<double>(c.tp + c.fn)
                              : 0.0;
    c.fpr = (c.fp + c.tn) > 0 ? 100.0 * static_cast<double>(c.fp) /
                                    static_cast<double>(c.fp + c.tn)
                              : 0.0;
    return c;
}

std::vector<RocPoint> roc_sweep(const Recording& rec,
                                const std::function<Device(std::uint64_t)>& make_device,
                                std::span<const double> gains, double v_off, int repeats,
                                std::uint64_t master_seed, const EncoderConfig& enc_cfg,
                                const ReferenceConfig& ref_cfg) {
    if (repeats < 1) throw InvalidInput("roc_sweep: repeats must be >= 1");
    if (gains.empty()) throw InvalidInput("roc_sweep: gain list is empty");

    const std::vector<std::size_t> ref_indices = reference_detect(rec, ref_cfg);

    std::vector<RocPoint> points;
    points.reserve(gains.size());
    for (std::size_t g = 0; g < gains.size(); ++g) {
        RocPoint point;
        point.gain = gains[g];
        double tpr_sum = 0.0, fpr_sum = 0.0;
        for (int r = 0; r < repeats; ++r) {
            try {
                Device dev = make_device(derive_seed(master_seed, g, static_cast<std::uint64_t>(r)));
                EncoderConfig cfg = enc_cfg;
                cfg.gain = gains[g];
                cfg.offset = v_off;
                const Recording pre = preprocess(rec, cfg.gain, cfg.offset);
                const MeasurementLog log = drive_and_measure(dev, pre, cfg);
                auto [bins, noise] = bin_changes(log, pre);
                const NoiseBand band = noise_band(noise, BandMode::Volatile);
                const DetectionResult det = detect(bins, band, dev.params().v_th_neg);
                const std::vector<bool> ref_bins = indices_to_bins(ref_indices, bins);
                RocRun run;
                run.repeat = r;
                run.counts = benchmark(det.spike, ref_bins);
                tpr_sum += run.counts.tpr;
                fpr_sum += run.counts.fpr;
                point.runs.push_back(run);
            } catch (const Error& e) {
                throw Error("roc_sweep: gain " + std::to_string(gains[g]) + " repeat " +
                            std::to_string(r) + ": " + e.what());
            }
        }
        point.mean_tpr = tpr_sum / static_cast<double>(repeats);
        point.mean_fpr = fpr_sum / static_cast<double>(repeats);
        points.push_back(std::move(point));
    }
    return points;
}

}  // namespace memspike
