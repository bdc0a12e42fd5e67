#include "memspike/encoder.hpp"

#include <cmath>

#include "memspike/errors.hpp"

namespace memspike {

void EncoderConfig::validate() const {
    if (!(batch_size > read_stride && read_stride > 0))
        throw InvalidInput("encoder: need batch_size > read_stride > 0");
    if (!std::isfinite(gain) || gain == 0.0)
        throw InvalidInput("encoder: gain must be finite and nonzero");
    if (!std::isfinite(offset)) throw InvalidInput("encoder: offset must be finite");
    if (!(read_pulse_width >= 0.0))
        throw InvalidInput("encoder: read_pulse_width must be >= 0");
}

Recording preprocess(const Recording& rec, double gain, double offset) {
    if (!std::isfinite(gain) || gain == 0.0)
        throw InvalidInput("preprocess: gain must be finite and nonzero");
    rec.validate();
    Recording out = rec;
    for (double& v : out.samples) v = gain * v + offset;
    return out;
}

MeasurementLog drive_and_measure(Device& dev, const Recording& preprocessed,
                                 const EncoderConfig& cfg) {
    cfg.validate();
    preprocessed.validate();

    const double dt = 1.0 / preprocessed.fs;
    MeasurementLog log;

    const auto take = [&](std::size_t index, MeasurementKind kind) {
        const double r = dev.read(cfg.v_read);
        dev.relax(cfg.read_pulse_width);
        log.measurements.push_back({index, r, kind});
    };

    take(0, MeasurementKind::Baseline);

    const std::size_t n = preprocessed.samples.size();
    std::size_t consumed = 0;
    while (consumed < n) {
        const std::size_t batch_n = std::min(cfg.batch_size, n - consumed);
        take(consumed, MeasurementKind::BatchStart);
        for (std::size_t off = 1; off <= batch_n; ++off) {
            dev.apply_sample(preprocessed.samples[consumed + off - 1], dt);
            if (off % cfg.read_stride == 0 && off < batch_n)
                take(consumed + off, MeasurementKind::IntraBatch);
        }
        consumed += batch_n;
        take(consumed, MeasurementKind::BatchEnd);
    }
    return log;
}

std::pair<std::vector<BinRecord>, std::vector<BinRecord>> bin_changes(
    const MeasurementLog& log, const Recording& preprocessed) {
    const auto& ms = log.measurements;
    if (ms.size() < 2) throw InvalidInput("bin_changes: log has fewer than 2 measurements");
    if (ms.back().sample_index != preprocessed.samples.size())
        throw InvalidInput("bin_changes: measurement log does not match the recording length");

    std::vector<BinRecord> bins;
    std::vector<BinRecord> noise;
    for (std::size_t i = 1; i < ms.size(); ++i) {
        const Measurement& a = ms[i - 1];
        const Measurement& b = ms[i];
        if (b.sample_index < a.sample_index || b.sample_index > preprocessed.samples.size())
            throw InvalidInput("bin_changes: measurement indices out of order");

        BinRecord rec;
        rec.begin = a.sample_index;
        rec.end = b.sample_index;
        rec.r_before = a.resistance;
        rec.r_after = b.resistance;
        rec.delta_rel = (b.resistance - a.resistance) / a.resistance;

        if (a.kind == MeasurementKind::BatchEnd && b.kind == MeasurementKind::BatchStart) {
            rec.is_noise_pair = true;  // no samples intercede
            noise.push_back(rec);
            continue;
        }
        if (b.sample_index == a.sample_index)
            continue;  // baseline -> first batch start: alignment only, no bin

        double peak = 0.0;
        for (std::size_t s = rec.begin; s < rec.end; ++s) {
            const double v = preprocessed.samples[s];
            if (std::abs(v) > std::abs(peak)) peak = v;
        }
        rec.v_peak = peak;
        bins.push_back(rec);
    }
    return {std::move(bins), std::move(noise)};
}

double compression_ratio(const MeasurementLog& log, const Recording& rec) {
    if (log.measurements.empty()) throw InvalidInput("compression_ratio: empty log");
    return static_cast<double>(rec.samples.size()) /
           static_cast<double>(log.measurements.size());
}

}  // namespace memspike
