#include "memspike/power.hpp"

#include <cmath>
#include <string>

#include "memspike/errors.hpp"

namespace memspike {

void PowerConfig::validate() const {
    if (!(r_device > 0.0) || !(r_series >= 0.0))
        throw InvalidInput("power: need r_device > 0 and r_series >= 0");
    if (!(t_read > 0.0) || !(t_write > 0.0))
        throw InvalidInput("power: pulse widths must be > 0");
    if (!(fs > 0.0)) throw InvalidInput("power: fs must be > 0");
    if (reads_per_batch < 0 || samples_per_batch <= 0)
        throw InvalidInput("power: bad batch composition");
    if (resets_per_recording < 0 || batches_per_recording <= 0)
        throw InvalidInput("power: bad reset/batch counts");
    if (resets_per_recording > 0 && !(t_reset > 0.0))
        throw InvalidInput("power: resets need t_reset > 0");
}

double pulse_energy(double v, double r, double t) {
    if (!(r > 0.0)) throw InvalidInput("pulse_energy: r must be > 0");
    if (!(t >= 0.0)) throw InvalidInput("pulse_energy: t must be >= 0");
    return v * v * t / r;
}

PowerReport batch_report(const PowerConfig& cfg) {
    cfg.validate();
    PowerReport rep;

    const double r_read = cfg.r_device + cfg.r_series;
    const double r_write = cfg.include_series_on_write ? r_read : cfg.r_device;

    rep.e_read_single = pulse_energy(cfg.v_read, r_read, cfg.t_read);
    rep.e_write_single = pulse_energy(cfg.v_write, r_write, cfg.t_write);
    rep.e_read_total = cfg.reads_per_batch * rep.e_read_single;
    rep.e_write_total = cfg.samples_per_batch * rep.e_write_single;
    // Of the read energy, the device's own share scales with its fraction of
    // the series loop resistance.
    rep.e_read_device_share = rep.e_read_total * cfg.r_device / r_read;

    if (cfg.resets_per_recording > 0) {
        rep.e_reset_single = pulse_energy(cfg.v_reset, r_write, cfg.t_reset);
        rep.e_reset_total = cfg.resets_per_recording * rep.e_reset_single;
        rep.e_reset_per_batch = rep.e_reset_total / cfg.batches_per_recording;
    }

    rep.batch_duration = cfg.samples_per_batch / cfg.fs;
    rep.p_avg = (rep.e_read_total + rep.e_write_total + rep.e_reset_per_batch) /
                rep.batch_duration;
    return rep;
}

PowerConfig power_preset(std::string_view name) {
    PowerConfig cfg;
    if (name == "note2") return cfg;
    if (name == "note2-100ns") {
        cfg.t_write = 1.0e-7;
        return cfg;
    }
    if (name == "note1") {
        cfg.r_device = 1.0e4;
        cfg.r_series = 1.0e3;
        cfg.v_read = 0.5;
        cfg.v_write = 5.0;
        cfg.t_read = 1.0e-4;
        cfg.t_write = 1.0e-4;
        cfg.resets_per_recording = 11;
        cfg.t_reset = 1.0e-4;
        cfg.v_reset = 5.0;
        return cfg;
    }
    throw ConfigError("unknown power preset '" + std::string(name) +
                      "' (expected note1 | note2 | note2-100ns)");
}

}  // namespace memspike
