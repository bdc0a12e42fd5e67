#include "memspike/device.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "memspike/errors.hpp"

namespace memspike {

void DeviceParams::validate() const {
    if (!(r_min > 0.0 && r_min <= r_eq && r_eq <= r_max))
        throw InvalidInput("device: need 0 < r_min <= r_eq <= r_max");
    if (!(v_th_neg < 0.0 && v_th_pos > 0.0))
        throw InvalidInput("device: need v_th_neg < 0 < v_th_pos");
    if (!(tau > 0.0))
        throw InvalidInput("device: need tau > 0");
    if (!(write_gain >= 0.0) || !(write_exp > 0.0))
        throw InvalidInput("device: need write_gain >= 0 and write_exp > 0");
    if (!(read_noise_sigma >= 0.0))
        throw InvalidInput("device: need read_noise_sigma >= 0");
    if (!(r_series >= 0.0))
        throw InvalidInput("device: need r_series >= 0");
}

Device::Device(DeviceParams params) : params_(params), rng_(params.seed) {
    params_.validate();
    state_.r = params_.r_eq;
    state_.t = 0.0;
}

double Device::decay_factor(double dt) const {
    if (!std::isfinite(params_.tau)) return 1.0;  // tau = inf: relaxation off
    return std::exp(-dt / params_.tau);
}

void Device::apply_sample(double v, double dt) {
    if (!std::isfinite(v) || !std::isfinite(dt) || !(dt > 0.0))
        throw InvalidInput("apply_sample: v must be finite and dt > 0");

    double r = state_.r;
    double drive = 0.0;
    if (v < params_.v_th_neg)
        drive = -params_.write_gain *
                std::pow(std::abs(v) - std::abs(params_.v_th_neg), params_.write_exp) * dt;
    else if (v > params_.v_th_pos)
        drive = params_.write_gain * std::pow(v - params_.v_th_pos, params_.write_exp) * dt;

    if (params_.regime == Regime::NonVolatile && drive != 0.0) {
        // Soft saturation: update shrinks linearly with distance to the bound
        // it is heading for.
        const double span = params_.r_max - params_.r_min;
        drive *= (drive < 0.0 ? r - params_.r_min : params_.r_max - r) / span;
    }

    r = std::clamp(r + drive, params_.r_min, params_.r_max);
    if (params_.regime == Regime::Volatile) {
        const double decay = decay_factor(dt);
        if (decay < 1.0) r = params_.r_eq + (r - params_.r_eq) * decay;
    }

    state_.r = std::clamp(r, params_.r_min, params_.r_max);
    state_.t += dt;
}

double Device::read(double v_read) {
    const double v_safe = std::min(std::abs(params_.v_th_neg), params_.v_th_pos);
    if (!std::isfinite(v_read) || std::abs(v_read) >= v_safe)
        throw InvalidInput("read: |v_read| = " + std::to_string(std::abs(v_read)) +
                           " V would perturb the state (limit " + std::to_string(v_safe) + " V)");
    double r = state_.r;
    if (params_.read_noise_sigma > 0.0) {
        std::normal_distribution<double> eps(0.0, params_.read_noise_sigma);
        r *= 1.0 + eps(rng_);
    }
    return r;
}

void Device::relax(double dt) {
    if (!std::isfinite(dt) || dt < 0.0)
        throw InvalidInput("relax: dt must be finite and >= 0");
    if (params_.regime == Regime::Volatile) {
        const double decay = decay_factor(dt);
        if (decay < 1.0) state_.r = params_.r_eq + (state_.r - params_.r_eq) * decay;
    }
    state_.t += dt;
}

void Device::set_resistance(double r) {
    if (!std::isfinite(r)) throw InvalidInput("set_resistance: r must be finite");
    state_.r = std::clamp(r, params_.r_min, params_.r_max);
}

DeviceParams volatile_preset() {
    return DeviceParams{};
}

DeviceParams volatile_narrow_preset() {
    DeviceParams p;
    p.r_eq = 1.0e6;
    p.r_min = 7.0e5;
    p.r_max = 1.4e6;
    p.v_th_neg = -1.8;
    p.v_th_pos = 1.8;
    p.write_gain = 2.0e8;
    return p;
}

DeviceParams nonvolatile_preset() {
    DeviceParams p;
    p.r_eq = 1.0e4;
    p.r_min = 2.0e3;
    p.r_max = 1.5e4;
    p.v_th_neg = -0.8;
    p.v_th_pos = 0.8;
    p.write_gain = 3.0e7;
    p.tau = 1.0;  // unused in this regime
    p.r_series = 1.0e3;
    p.regime = Regime::NonVolatile;
    return p;
}

DeviceParams preset_by_name(std::string_view name) {
    if (name == "volatile") return volatile_preset();
    if (name == "volatile-narrow") return volatile_narrow_preset();
    if (name == "nonvolatile") return nonvolatile_preset();
    throw ConfigError("unknown device preset '" + std::string(name) +
                      "' (expected volatile | volatile-narrow | nonvolatile)");
}

}  // namespace memspike
