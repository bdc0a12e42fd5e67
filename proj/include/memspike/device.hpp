#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace memspike {

enum class Regime { Volatile, NonVolatile };

/*
 * Behavioral parameters of one TiOx-like memristive cell.
 *
 * The model is a thresholded power-law integrator:
 *
 *   volatile:      dR = -G * (|v| - |v_th_neg|)^p * dt   for v < v_th_neg
 *                  dR = +G * (v - v_th_pos)^p * dt       for v > v_th_pos
 *                  followed by exponential relaxation of R towards r_eq
 *                  with time constant tau, and hard clamping to [r_min, r_max].
 *
 *   non-volatile:  same write law, no relaxation; instead the update is
 *                  scaled by a linear distance-to-bound window so the state
 *                  saturates softly near r_min / r_max.
 *
 * Sub-threshold inputs leave the resistance untouched; reads are modelled as
 * non-perturbing with multiplicative Gaussian noise drawn from the cell's own
 * seeded generator.
 */
struct DeviceParams {
    double r_eq = 1.0e6;            // equilibrium resistance, ohm
    double r_min = 3.0e5;           // lower state bound, ohm
    double r_max = 3.0e6;           // upper state bound, ohm
    double v_th_neg = -1.5;         // negative write threshold, V (< 0)
    double v_th_pos = 1.5;          // positive write threshold, V (> 0)
    double write_gain = 5.0e8;      // ohm / (V^p * s)
    double write_exp = 1.0;         // p
    double tau = 1.0;               // relaxation time constant, s (inf disables)
    double r_series = 1.0e5;        // series/compliance resistance, ohm
    double read_noise_sigma = 0.002;  // relative read noise (fraction of R)
    Regime regime = Regime::Volatile;
    std::uint64_t seed = 1;

    /// Throws InvalidInput when 0 < r_min <= r_eq <= r_max, the threshold
    /// signs, tau > 0, write_gain >= 0 or read_noise_sigma >= 0 are violated.
    void validate() const;
};

struct DeviceState {
    double r = 0.0;  // current resistance, ohm; r_min <= r <= r_max always
    double t = 0.0;  // simulation clock, s
};

class Device {
public:
    explicit Device(DeviceParams params);

    /// Drives the cell with one voltage sample held for dt seconds:
    /// thresholded write, clamp, then (volatile regime) relaxation.
    /// Deterministic; writes carry no noise.
    void apply_sample(double v, double dt);

    /// Non-perturbing resistance read at v_read. Returns r * (1 + eps) with
    /// eps ~ N(0, read_noise_sigma); the state is unchanged and the clock
    /// does not advance (callers model read duration via relax()).
    /// Throws if |v_read| reaches either write threshold.
    double read(double v_read);

    /// Lets the cell relax freely for dt seconds (no stimulus).
    /// Volatile regime: r -> r_eq + (r - r_eq) * exp(-dt / tau).
    /// Non-volatile regime: resistance unchanged. Clock advances either way.
    void relax(double dt);

    /// Forces the resistive state (clamped to bounds). Stands in for the
    /// electroforming / displacement step when setting up experiments.
    void set_resistance(double r);

    const DeviceParams& params() const { return params_; }
    const DeviceState& state() const { return state_; }

private:
    double decay_factor(double dt) const;

    DeviceParams params_;
    DeviceState state_;
    std::mt19937_64 rng_;
};

// Parameter presets covering the reported operating windows. Starting
// points for experiments, not ground truth.
DeviceParams volatile_preset();         // 300 kOhm - 3 MOhm window
DeviceParams volatile_narrow_preset();  // 700 kOhm - 1.4 MOhm window
DeviceParams nonvolatile_preset();      // 2 kOhm - 15 kOhm window

/// Looks up a preset by name ("volatile", "volatile-narrow", "nonvolatile").
/// Throws ConfigError for unknown names.
DeviceParams preset_by_name(std::string_view name);

}  // namespace memspike
