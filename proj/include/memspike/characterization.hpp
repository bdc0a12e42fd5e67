#pragma once

#include <cmath>
#include <concepts>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "memspike/errors.hpp"
#include "memspike/stats.hpp"

namespace memspike {

/// Anything that behaves like a single memristive cell for characterization
/// purposes. Device satisfies this; tests substitute stubs (e.g. a slowly
/// drifting cell) through the same interface.
template <typename D>
concept CellDevice = requires(D& d, double v, double dt) {
    { d.read(v) } -> std::convertible_to<double>;
    d.apply_sample(v, dt);
    d.relax(dt);
};

/*
 * Configuration of the volatility characterization run: a progressive pulse
 * sweep on one polarity, with the post-pulse decay monitored by a two-mean
 * t-test over read batches and the reached equilibrium confirmed by a
 * retention test over a fixed window.
 */
struct SweepConfig {
    double v_start = -0.2;   // first write amplitude, V
    double v_stop = -4.0;    // last write amplitude, V (same polarity)
    double v_step = 0.2;     // amplitude increment magnitude, V
    double t_w = 1.0e-6;     // write pulse width, s
    double v_read = 0.2;     // read voltage, V (must be non-perturbing)

    int n_per_test_batch = 30;  // reads per t-test batch
    int k = 10;                 // values per t-test mean (first k vs last k)
    double t_threshold = 1.0;   // |t| below this means settled

    double monitor_read_period = 0.05;  // s between reads while monitoring decay
    double retention_window = 60.0;     // s
    double retention_read_period = 1.0; // s between retention reads
    // Pure-noise |t| stays below ~1 only two times out of three, so the
    // retention pass/fail bound is wider than the settling bound.
    double retention_t_threshold = 3.0;

    // Relative measurement resolution: batches whose spread falls below this
    // read as flat. Keeps the t-test terminating on noiseless cells, where
    // the decay never strictly vanishes.
    double resolution = 1.0e-3;

    long max_batches = 10000;  // settling cap; beyond it -> NonSettlingError

    void validate() const;
};

/// One step of the sweep. Points I..IV follow the four scheduled reads:
/// before the pulse, right after it, at t-test termination, and at the end
/// of the retention window.
struct VolatilityRecord {
    double v_w = 0.0;      // write amplitude, V
    double r_i = 0.0;      // ohms, before pulse
    double r_ii = 0.0;     // ohms, after pulse
    double r_iii = 0.0;    // ohms, t-test termination
    double r_iv = 0.0;     // ohms, retention end
    double delta_volatile = 0.0;     // (r_iv - r_ii) / r_ii
    double delta_nonvolatile = 0.0;  // (r_iv - r_i) / r_i
    double settle_time = 0.0;        // s spent in the t-test stage
    bool retention_passed = true;
};

struct VolatilityReport {
    std::vector<VolatilityRecord> records;  // ordered by |v_w| increasing
    std::optional<double> extracted_v_th;   // empty = not found
    std::optional<std::pair<double, double>> safe_band;  // [v_th, last conforming v_w]
    double noise_floor = 0.0;               // significance bound used
};

/*
 * Two-mean t statistic t = (mu1 - mu2) / sqrt(s1^2/k1 + s2^2/k2) with sample
 * means and standard deviations.
 *
 * When both spreads fall below eps_rel relative to the read magnitude the
 * statistic degenerates; the lists then compare as flat-equal (0) or
 * flat-different (+-inf, signed like mu1 - mu2). eps_rel = 1e-12 covers the
 * exactly-constant case; monitoring passes its measurement resolution here.
 */
double t_statistic(std::span<const double> first_k, std::span<const double> last_k,
                   double eps_rel = 1.0e-12);

struct RelaxationResult {
    std::vector<std::pair<double, double>> trace;  // (s since monitor start, ohms)
    double r_equilibrium = 0.0;  // mean of the final batch; measured, never assumed
    double settle_time = 0.0;    // s
};

struct RetentionResult {
    bool passed = false;
    double residual_drift = 0.0;  // relative change across the window
    double r_end = 0.0;           // mean of the last k reads
};

/*
 * Reads the cell in batches of n_per_test_batch (one read every
 * monitor_read_period) and evaluates the t statistic of the first k vs the
 * last k values of each batch. Terminates once |t| < t_threshold, i.e. the
 * batch no longer shows a decaying trend. No assumption is made about what
 * the equilibrium resistance should be: it is the measured final-batch mean.
 *
 * Throws NonSettlingError (with the partial trace) once max_batches is hit.
 */
template <CellDevice D>
RelaxationResult monitor_relaxation(D& dev, const SweepConfig& cfg) {
    cfg.validate();
    RelaxationResult res;
    std::vector<double> batch(static_cast<std::size_t>(cfg.n_per_test_batch));
    double elapsed = 0.0;
    for (long b = 0; b < cfg.max_batches; ++b) {
        for (int i = 0; i < cfg.n_per_test_batch; ++i) {
            batch[static_cast<std::size_t>(i)] = dev.read(cfg.v_read);
            res.trace.emplace_back(elapsed, batch[static_cast<std::size_t>(i)]);
            dev.relax(cfg.monitor_read_period);
            elapsed += cfg.monitor_read_period;
        }
        const std::size_t k = static_cast<std::size_t>(cfg.k);
        const double t = t_statistic(std::span(batch).first(k),
                                     std::span(batch).last(k), cfg.resolution);
        if (std::abs(t) < cfg.t_threshold) {
            res.r_equilibrium = mean(batch);
            res.settle_time = elapsed;
            return res;
        }
    }
    throw NonSettlingError("relaxation did not settle within " +
                               std::to_string(cfg.max_batches) + " batches",
                           std::move(res.trace));
}

/*
 * Confirms the equilibrium over retention_window seconds of periodic reads.
 * Passed when |t| of the first k vs the last k reads stays below
 * retention_t_threshold. residual_drift is the relative change of the k-read
 * means across the window.
 */
template <CellDevice D>
RetentionResult retention_test(D& dev, const SweepConfig& cfg) {
    cfg.validate();
    const std::size_t k = static_cast<std::size_t>(cfg.k);
    std::size_t n = static_cast<std::size_t>(std::floor(cfg.retention_window / cfg.retention_read_period)) + 1;
    if (n < 2 * k) n = 2 * k;

    std::vector<double> reads(n);
    for (std::size_t i = 0; i < n; ++i) {
        reads[i] = dev.read(cfg.v_read);
        dev.relax(cfg.retention_read_period);
    }
    const auto first = std::span(reads).first(k);
    const auto last = std::span(reads).last(k);
    const double t = t_statistic(first, last, cfg.resolution);

    RetentionResult res;
    res.passed = std::abs(t) < cfg.retention_t_threshold;
    res.r_end = mean(last);
    const double r_begin = mean(first);
    res.residual_drift = r_begin != 0.0 ? (res.r_end - r_begin) / r_begin : 0.0;
    return res;
}

/// Significance bound used when no explicit noise floor is given: mu + 2*sigma
/// of the |delta| values of the sub-|1 V| records (background fluctuation
/// level), falling back to the two least invasive records when the sweep
/// starts above 1 V. Never returns less than 1e-12.
double default_noise_floor(std::span<const VolatilityRecord> records);

/*
 * Threshold extraction: the smallest |v_w| whose volatile change exceeds the
 * noise floor while the non-volatile change stays below it, with every larger
 * amplitude conforming as well, up to the first record whose non-volatile
 * change breaks the floor (the cell stops self-resetting there). That first
 * conforming amplitude is the threshold voltage; the conforming stretch is
 * the safe operating band.
 *
 * Requires >= 3 records and noise_floor > 0. Leaves extracted_v_th empty when
 * no conforming record exists.
 */
void extract_threshold(VolatilityReport& report);
std::optional<double> extract_threshold(std::span<const VolatilityRecord> records,
                                        double noise_floor,
                                        std::optional<std::pair<double, double>>* safe_band = nullptr);

/*
 * Full characterization: for each amplitude from |v_start| to |v_stop| in
 * steps of v_step (one polarity), record point I, apply the pulse, record
 * point II, monitor the decay (point III) and run the retention test
 * (point IV). Points I and IV are k-read averages; point II is a single
 * immediate read so the metastable transition is not smeared out.
 *
 * Emits floor((|v_stop|-|v_start|)/v_step)+1 records in order of increasing
 * |v_w|, then extracts the threshold voltage and safe operating band.
 */
template <CellDevice D>
VolatilityReport volatility_sweep(D& dev, const SweepConfig& cfg) {
    cfg.validate();
    const double sign = cfg.v_start < 0.0 ? -1.0 : 1.0;
    const double a0 = std::abs(cfg.v_start);
    const double a1 = std::abs(cfg.v_stop);
    const auto n_steps =
        static_cast<std::size_t>(std::floor((a1 - a0) / cfg.v_step + 1e-9)) + 1;

    const std::size_t k = static_cast<std::size_t>(cfg.k);
    const auto averaged_read = [&] {
        double acc = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            acc += dev.read(cfg.v_read);
            dev.relax(cfg.monitor_read_period);
        }
        return acc / static_cast<double>(k);
    };

    VolatilityReport report;
    report.records.reserve(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) {
        VolatilityRecord rec;
        rec.v_w = sign * (a0 + static_cast<double>(i) * cfg.v_step);
        rec.r_i = averaged_read();
        dev.apply_sample(rec.v_w, cfg.t_w);
        rec.r_ii = dev.read(cfg.v_read);
        try {
            const RelaxationResult relax = monitor_relaxation(dev, cfg);
            rec.r_iii = relax.r_equilibrium;
            rec.settle_time = relax.settle_time;
        } catch (NonSettlingError& e) {
            throw NonSettlingError(std::string(e.what()) + " at v_w = " +
                                       std::to_string(rec.v_w) + " V",
                                   std::move(e.partial_trace), rec.v_w);
        }
        const RetentionResult ret = retention_test(dev, cfg);
        rec.r_iv = ret.r_end;
        rec.retention_passed = ret.passed;
        rec.delta_volatile = (rec.r_iv - rec.r_ii) / rec.r_ii;
        rec.delta_nonvolatile = (rec.r_iv - rec.r_i) / rec.r_i;
        report.records.push_back(rec);
    }

    report.noise_floor = default_noise_floor(report.records);
    extract_threshold(report);
    return report;
}

}  // namespace memspike
