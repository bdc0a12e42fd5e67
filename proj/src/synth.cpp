#include "memspike/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "memspike/errors.hpp"

namespace memspike {

std::vector<double> default_spike_template(double fs, double peak_volts) {
    const auto n = static_cast<std::size_t>(std::lround(0.002 * fs));
    std::vector<double> w(std::max<std::size_t>(n, 8), 0.0);
    const double trough = static_cast<double>(w.size()) / 3.0;
    const double hump = 2.0 * trough;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double x = static_cast<double>(i);
        w[i] = -std::exp(-0.5 * std::pow((x - trough) / (0.10 * w.size()), 2)) +
               0.34 * std::exp(-0.5 * std::pow((x - hump) / (0.18 * w.size()), 2));
    }
    const double trough_val = *std::min_element(w.begin(), w.end());
    for (double& v : w) v *= std::abs(peak_volts) / std::abs(trough_val);
    if (peak_volts > 0.0)
        for (double& v : w) v = -v;
    return w;
}

void SynthSpec::validate() const {
    if (n_samples == 0) throw InvalidInput("synth: n_samples must be > 0");
    if (!(fs > 0.0)) throw InvalidInput("synth: fs must be > 0");
    if (!(spike_rate >= 0.0)) throw InvalidInput("synth: spike_rate must be >= 0");
    if (template_waveform.empty()) throw InvalidInput("synth: template is empty");
    if (!(noise_sigma >= 0.0)) throw InvalidInput("synth: noise_sigma must be >= 0");
    if (!(amplitude_jitter >= 0.0 && amplitude_jitter < 1.0))
        throw InvalidInput("synth: amplitude_jitter must be in [0, 1)");
    if (!(clip > 0.0)) throw InvalidInput("synth: clip must be > 0");

    double peak = 0.0;
    for (double v : template_waveform) peak = std::max(peak, std::abs(v));
    if (peak + 3.0 * noise_sigma > clip)
        throw InvalidInput("synth: template peak + 3*noise_sigma exceeds the clip range");
    if (refractory * fs < static_cast<double>(template_waveform.size()))
        throw InvalidInput("synth: refractory shorter than the template");
}

namespace {

std::size_t trough_offset(const std::vector<double>& w) {
    return static_cast<std::size_t>(
        std::distance(w.begin(), std::min_element(w.begin(), w.end())));
}

Recording render(const SynthSpec& spec, const std::vector<std::size_t>& starts,
                 std::mt19937_64& rng) {
    const auto& w = spec.template_waveform;
    const std::size_t peak_off = trough_offset(w);

    std::vector<double> scales(starts.size(), 1.0);
    if (spec.amplitude_jitter > 0.0) {
        std::uniform_real_distribution<double> jitter(-spec.amplitude_jitter,
                                                      spec.amplitude_jitter);
        for (double& s : scales) s = 1.0 + jitter(rng);
    }

    Recording rec;
    rec.fs = spec.fs;
    rec.samples.assign(spec.n_samples, 0.0);
    if (spec.noise_sigma > 0.0) {
        std::normal_distribution<double> noise(0.0, spec.noise_sigma);
        for (double& v : rec.samples) v = noise(rng);
    }
    std::vector<std::size_t> gt;
    gt.reserve(starts.size());
    for (std::size_t s = 0; s < starts.size(); ++s) {
        for (std::size_t i = 0; i < w.size(); ++i)
            rec.samples[starts[s] + i] += scales[s] * w[i];
        gt.push_back(starts[s] + peak_off);
    }
    for (double& v : rec.samples) v = std::clamp(v, -spec.clip, spec.clip);
    rec.ground_truth = std::move(gt);
    return rec;
}

}  // namespace

Recording generate_recording(const SynthSpec& spec) {
    spec.validate();
    std::mt19937_64 rng(spec.seed);

    const auto& w = spec.template_waveform;
    const double duration = static_cast<double>(spec.n_samples) / spec.fs;
    const auto refr_samples = static_cast<std::size_t>(std::ceil(spec.refractory * spec.fs));

    std::vector<std::size_t> starts;
    if (spec.spike_rate > 0.0) {
        std::exponential_distribution<double> gap(spec.spike_rate);
        double t = gap(rng);
        double last_kept = -1.0;
        while (t < duration) {
            if (last_kept < 0.0 || t - last_kept >= spec.refractory) {
                const auto idx = static_cast<std::size_t>(std::llround(t * spec.fs));
                const bool fits = idx + w.size() <= spec.n_samples;
                const bool spaced =
                    starts.empty() || idx - starts.back() >= refr_samples;
                if (fits && spaced) {
                    starts.push_back(idx);
                    last_kept = t;
                }
            }
            t += gap(rng);
        }
    }
    return render(spec, starts, rng);
}

Recording render_recording(const SynthSpec& spec, std::span<const std::size_t> peak_indices) {
    spec.validate();
    const std::size_t peak_off = trough_offset(spec.template_waveform);
    std::vector<std::size_t> starts;
    starts.reserve(peak_indices.size());
    for (std::size_t peak : peak_indices) {
        if (peak < peak_off ||
            peak - peak_off + spec.template_waveform.size() > spec.n_samples)
            throw InvalidInput("render_recording: spike does not fit in the recording");
        starts.push_back(peak - peak_off);
    }
    std::mt19937_64 rng(spec.seed);
    return render(spec, starts, rng);
}

void ReferenceConfig::validate() const {
    if (!std::isfinite(threshold)) throw InvalidInput("reference: threshold must be finite");
    if (!(min_separation >= 0.0)) throw InvalidInput("reference: min_separation must be >= 0");
    if (method == ReferenceMethod::MatchedFilter && template_waveform.empty())
        throw InvalidInput("reference: matched_filter requires a template");
}

namespace {

std::vector<std::size_t> amplitude_threshold_detect(const Recording& rec,
                                                    const ReferenceConfig& cfg) {
    const auto suppress = static_cast<std::size_t>(std::ceil(cfg.min_separation * rec.fs));
    std::vector<std::size_t> out;
    std::size_t next_allowed = 0;
    for (std::size_t i = 0; i < rec.samples.size(); ++i) {
        const bool crossing =
            rec.samples[i] < cfg.threshold && (i == 0 || rec.samples[i - 1] >= cfg.threshold);
        if (crossing && i >= next_allowed) {
            out.push_back(i);
            next_allowed = i + std::max<std::size_t>(suppress, 1);
        }
    }
    return out;
}

std::vector<std::size_t> matched_filter_detect(const Recording& rec,
                                               const ReferenceConfig& cfg) {
    const auto& w = cfg.template_waveform;
    const std::size_t m = w.size();
    if (rec.samples.size() < m) return {};

    const double w_norm = std::sqrt(std::inner_product(w.begin(), w.end(), w.begin(), 0.0));
    const std::size_t n_off = rec.samples.size() - m + 1;
    std::vector<double> ncc(n_off, 0.0);
    for (std::size_t i = 0; i < n_off; ++i) {
        double dot = 0.0, xx = 0.0;
        for (std::size_t j = 0; j < m; ++j) {
            const double x = rec.samples[i + j];
            dot += x * w[j];
            xx += x * x;
        }
        const double denom = std::sqrt(xx) * w_norm;
        ncc[i] = denom > 0.0 ? dot / denom : 0.0;
    }

    const std::size_t peak_off = static_cast<std::size_t>(
        std::distance(w.begin(), std::min_element(w.begin(), w.end())));
    const auto suppress = static_cast<std::size_t>(std::ceil(cfg.min_separation * rec.fs));
    std::vector<std::size_t> out;
    std::size_t next_allowed = 0;
    for (std::size_t i = 0; i < n_off; ++i) {
        const bool local_max = (i == 0 || ncc[i] >= ncc[i - 1]) &&
                               (i + 1 == n_off || ncc[i] > ncc[i + 1]);
        if (ncc[i] > cfg.threshold && local_max && i >= next_allowed) {
            out.push_back(i + peak_off);
            next_allowed = i + std::max<std::size_t>(suppress, 1);
        }
    }
    return out;
}

}  // namespace

std::vector<std::size_t> reference_detect(const Recording& rec, const ReferenceConfig& cfg) {
    cfg.validate();
    rec.validate();
    switch (cfg.method) {
        case ReferenceMethod::GroundTruth:
            if (!rec.ground_truth)
                throw InvalidInput("reference: recording carries no ground truth");
            return *rec.ground_truth;
        case ReferenceMethod::AmplitudeThreshold:
            return amplitude_threshold_detect(rec, cfg);
        case ReferenceMethod::MatchedFilter:
            return matched_filter_detect(rec, cfg);
    }
    throw InvalidInput("reference: unknown method");
}

std::vector<bool> indices_to_bins(std::span<const std::size_t> indices,
                                  std::span<const BinRecord> bins) {
    std::size_t max_end = 0;
    for (const auto& b : bins) max_end = std::max(max_end, b.end);
    for (std::size_t idx : indices)
        if (idx >= max_end)
            throw InvalidInput("indices_to_bins: index " + std::to_string(idx) +
                               " beyond the binned range");

    std::vector<bool> out(bins.size(), false);
    for (std::size_t b = 0; b < bins.size(); ++b) {
        if (bins[b].is_noise_pair) continue;
        for (std::size_t idx : indices)
            if (idx >= bins[b].begin && idx < bins[b].end) {
                out[b] = true;
                break;
            }
    }
    return out;
}

}  // namespace memspike
