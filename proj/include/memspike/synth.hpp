#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "memspike/encoder.hpp"
#include "memspike/recording.hpp"

namespace memspike {

/// Canonical biphasic extracellular waveform: ~2 ms, sharp negative trough
/// scaled to peak_volts, smaller positive overshoot.
std::vector<double> default_spike_template(double fs = 12200.0, double peak_volts = -0.35);

/*
 * Synthetic extracellular-style recording with known ground truth.
 * Spike times are homogeneous Poisson, thinned by the refractory period;
 * each spike adds the template scaled by (1 + u), u ~ U(-jitter, +jitter),
 * on top of white Gaussian noise, hard-clipped at +-clip.
 */
struct SynthSpec {
    std::size_t n_samples = 63000;
    double fs = 12200.0;             // Hz
    double spike_rate = 5.0;         // Hz
    std::vector<double> template_waveform = default_spike_template();
    double amplitude_jitter = 0.1;   // relative
    double noise_sigma = 0.04;       // volts
    double refractory = 0.003;       // s, >= template duration
    std::uint64_t seed = 1;
    double clip = 0.5;               // volts

    void validate() const;
};

/// Ground-truth indices mark the template trough sample of each spike.
Recording generate_recording(const SynthSpec& spec);

/// Renders spikes at explicit trough indices (no Poisson draw); noise, jitter
/// and clipping as in generate_recording. Used for controlled experiments.
Recording render_recording(const SynthSpec& spec, std::span<const std::size_t> peak_indices);

enum class ReferenceMethod { MatchedFilter, AmplitudeThreshold, GroundTruth };

/*
 * Stand-in for the template-matching benchmark detector. matched_filter
 * scores normalized cross-correlation peaks against `threshold` (0..1);
 * amplitude_threshold fires on negative-going crossings of `threshold`
 * volts; ground_truth returns the recording's own annotation.
 */
struct ReferenceConfig {
    ReferenceMethod method = ReferenceMethod::GroundTruth;
    double threshold = 0.6;
    std::vector<double> template_waveform;  // required for matched_filter
    double min_separation = 0.002;          // s suppressed after a detection

    void validate() const;
};

std::vector<std::size_t> reference_detect(const Recording& rec, const ReferenceConfig& cfg);

/// Maps spike sample indices onto bins: a bin is true when at least one index
/// lands in its span. Noise-pair bins are always false. Throws on indices
/// beyond the last span.
std::vector<bool> indices_to_bins(std::span<const std::size_t> indices,
                                  std::span<const BinRecord> bins);

}  // namespace memspike
