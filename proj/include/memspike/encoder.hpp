#pragma once

#include <cstddef>
#include <vector>

#include "memspike/device.hpp"
#include "memspike/recording.hpp"

namespace memspike {

/*
 * Batch biasing schedule. A recording is fed to the cell in batches of
 * batch_size samples; the resistive state is read five times per batch: at
 * the batch start, after every read_stride samples, and at the batch end.
 * The (batch end, next batch start) read pair has no samples in between and
 * estimates the measurement noise. One extra baseline read precedes the
 * first batch, so a 63k-sample recording yields 1 + 5 * 63 = 316 reads for
 * a compression rate near 200.
 */
struct EncoderConfig {
    double gain = 1.0;    // G
    double offset = 0.0;  // v_off, volts
    std::size_t batch_size = 1000;
    std::size_t read_stride = 300;
    double v_read = 0.2;              // volts
    double read_pulse_width = 1.0e-6; // s the stream pauses per read

    void validate() const;
};

enum class MeasurementKind { Baseline, BatchStart, IntraBatch, BatchEnd };

struct Measurement {
    std::size_t sample_index;  // samples consumed before this read
    double resistance;         // ohms
    MeasurementKind kind;
};

struct MeasurementLog {
    std::vector<Measurement> measurements;
};

/// One bin: the stretch of samples between two consecutive scheduled reads,
/// or a zero-length noise pair across a batch boundary.
struct BinRecord {
    std::size_t begin = 0;  // span [begin, end) in sample indices
    std::size_t end = 0;
    double r_before = 0.0;  // ohms, read at bin start (the R0 of delta_rel)
    double r_after = 0.0;   // ohms
    double delta_rel = 0.0; // (r_after - r_before) / r_before
    double v_peak = 0.0;    // signed largest-magnitude pre-processed sample; 0 for noise pairs
    bool is_noise_pair = false;
};

/// Gain/offset pre-processing stage: v' = G * v + v_off. Sampling rate and
/// ground truth are preserved.
Recording preprocess(const Recording& rec, double gain, double offset);

/*
 * Runs the biasing schedule: one baseline read, then per batch a start read,
 * the samples at dt = 1/fs with intra-batch reads at multiples of
 * read_stride, and an end read. Reads consume no samples; each advances the
 * cell clock by read_pulse_width so relaxation during reads stays modelled.
 * A trailing partial batch keeps whatever scheduled reads it reaches.
 */
MeasurementLog drive_and_measure(Device& dev, const Recording& preprocessed,
                                 const EncoderConfig& cfg);

/// Turns consecutive measurement pairs into bins (with interceding samples)
/// and noise pairs (batch boundaries, no samples). Returned separately as
/// (bins, noise); bin spans partition the recording.
std::pair<std::vector<BinRecord>, std::vector<BinRecord>> bin_changes(
    const MeasurementLog& log, const Recording& preprocessed);

/// Samples per resistive-state measurement; ~200 for the canonical schedule.
double compression_ratio(const MeasurementLog& log, const Recording& rec);

}  // namespace memspike
