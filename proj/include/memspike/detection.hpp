#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "memspike/device.hpp"
#include "memspike/encoder.hpp"
#include "memspike/recording.hpp"
#include "memspike/synth.hpp"

namespace memspike {

enum class BandMode { Volatile, NonVolatile };

/*
 * Significance band on per-bin resistive changes, estimated from the noise
 * pairs. Volatile mode uses only the non-positive noise changes (the
 * positive ones are the cell's own reset transitions and are discarded),
 * takes absolute values and sets the bound at mu + 2*sigma; a bin is a spike
 * when delta_rel < -threshold_neg. Non-volatile mode keeps the signed
 * distribution and flags anything outside center +- 3*sigma.
 */
struct NoiseBand {
    BandMode mode = BandMode::Volatile;
    double center = 0.0;         // non-volatile band midpoint (mu); 0 in volatile mode
    double threshold_neg = 0.0;  // >= 0
    std::optional<double> threshold_pos;  // non-volatile mode only
    std::size_t n_used = 0;      // noise measurements entering the estimate
};

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
    double tpr = 0.0;  // percent, 100 * tp / (tp + fn)
    double fpr = 0.0;  // percent, 100 * fp / (fp + tn)
};

/// Quadrant labels from the noise band and the threshold voltage alone
/// (pre-benchmark naming; confusion counts come from benchmark()).
enum class Quadrant { TP, FP, FN, TN };

struct DetectionResult {
    std::vector<bool> spike;        // per data bin
    std::vector<Quadrant> quadrant; // per data bin, vs v_th
    std::size_t spike_count = 0;    // one spike per significant bin
};

NoiseBand noise_band(std::span<const BinRecord> noise, BandMode mode);

/// Classifies bins against the band; quadrants additionally compare each
/// bin's peak stimulus with v_th (v_th < 0: "below v_th" = stronger stimulus).
DetectionResult detect(std::span<const BinRecord> bins, const NoiseBand& band, double v_th);

/// Per-bin agreement with a reference detector (reference taken as truth):
/// TP both flag, TN neither, FP only ours, FN only the reference.
ConfusionCounts benchmark(const std::vector<bool>& ours, const std::vector<bool>& reference);

struct RocRun {
    int repeat = 0;
    ConfusionCounts counts;
};

struct RocPoint {
    double gain = 0.0;
    double mean_tpr = 0.0;  // percent
    double mean_fpr = 0.0;  // percent
    std::vector<RocRun> runs;
};

/*
 * Gain sweep: for every gain the full pipeline (preprocess, drive, bin,
 * band, detect, benchmark) runs `repeats` times on fresh devices seeded from
 * the master seed, and TPR/FPR are averaged per gain. The reference
 * detector runs once on the raw recording.
 */
std::vector<RocPoint> roc_sweep(const Recording& rec,
                                const std::function<Device(std::uint64_t)>& make_device,
                                std::span<const double> gains, double v_off, int repeats,
                                std::uint64_t master_seed, const EncoderConfig& enc_cfg,
                                const ReferenceConfig& ref_cfg);

}  // namespace memspike
