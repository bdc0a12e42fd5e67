#pragma once

#include <string_view>

namespace memspike {

/*
 * Energy accounting for the batch biasing schedule. Reads dissipate across
 * device + series resistance; writes across the device alone unless
 * include_series_on_write is set (physically the series resistor dissipates
 * on writes too; the shipped presets leave it out). Reset pulses,
 * when any, are amortized over the recording's batches.
 */
struct PowerConfig {
    double r_device = 1.0e6;   // ohm
    double r_series = 1.0e5;   // ohm
    double v_read = 0.2;       // V
    double v_write = 3.0;      // V
    double t_read = 1.0e-6;    // s
    double t_write = 1.0e-6;   // s
    int reads_per_batch = 5;
    int samples_per_batch = 1000;
    double fs = 12200.0;       // Hz
    int resets_per_recording = 0;
    double t_reset = 0.0;      // s
    double v_reset = 0.0;      // V
    int batches_per_recording = 63;
    bool include_series_on_write = false;

    void validate() const;
};

struct PowerReport {
    double e_read_single = 0.0;   // J per read pulse
    double e_write_single = 0.0;  // J per sample pulse
    double e_reset_single = 0.0;  // J per reset pulse
    double e_read_total = 0.0;    // J per batch
    double e_write_total = 0.0;   // J per batch
    double e_reset_total = 0.0;   // J per recording
    double e_reset_per_batch = 0.0;  // amortized J per batch
    double e_read_device_share = 0.0;  // J per batch dissipated in the device alone
    double batch_duration = 0.0;  // s
    double p_avg = 0.0;           // W, (reads + writes + amortized resets) / batch duration
};

/// Joule dissipation of one rectangular pulse: v^2 * t / r.
double pulse_energy(double v, double r, double t);

PowerReport batch_report(const PowerConfig& cfg);

// Reference configurations: "note1" (non-volatile, manual resets), "note2"
// (volatile, 1 us pulses), "note2-100ns" (voltage-time trade-off).
PowerConfig power_preset(std::string_view name);

}  // namespace memspike
