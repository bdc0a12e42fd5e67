#include "memspike/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "memspike/errors.hpp"

namespace memspike {

namespace {

std::string strip(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
}

double to_double(const std::string& where, const std::string& value) {
    char* end = nullptr;
    const double x = std::strtod(value.c_str(), &end);
    if (end == value.c_str() || !strip(end).empty() || !std::isfinite(x))
        throw ConfigError(where + ": expected a number, got '" + value + "'");
    return x;
}

long long to_int(const std::string& where, const std::string& value) {
    char* end = nullptr;
    const long long x = std::strtoll(value.c_str(), &end, 10);
    if (end == value.c_str() || !strip(end).empty())
        throw ConfigError(where + ": expected an integer, got '" + value + "'");
    return x;
}

bool to_bool(const std::string& where, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(where + ": expected true/false, got '" + value + "'");
}

}  // namespace

IniFile IniFile::parse(std::istream& in, const std::string& origin) {
    IniFile ini;
    std::string line, section;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find_first_of("#;");
        if (hash != std::string::npos) line.erase(hash);
        line = strip(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw ConfigError(origin + ":" + std::to_string(line_no) +
                                  ": malformed section header");
            section = strip(line.substr(1, line.size() - 2));
            ini.sections_[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(origin + ":" + std::to_string(line_no) +
                              ": expected key = value");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty())
            throw ConfigError(origin + ":" + std::to_string(line_no) + ": empty key");
        ini.sections_[section][key] = value;
    }
    return ini;
}

IniFile IniFile::parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse(in, path);
}

std::optional<std::string> IniFile::get(const std::string& section,
                                        const std::string& key) const {
    const auto s = sections_.find(section);
    if (s == sections_.end()) return std::nullopt;
    const auto k = s->second.find(key);
    if (k == s->second.end()) return std::nullopt;
    return k->second;
}

std::vector<double> parse_double_list(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = strip(tok);
        if (tok.empty()) continue;
        out.push_back(to_double("gain list", tok));
    }
    return out;
}

void RunConfig::apply(const IniFile& ini) {
    // Preset and method selections come first so explicit keys can override
    // their fields regardless of key order.
    if (auto v = ini.get("device", "preset")) device = preset_by_name(*v);
    if (auto v = ini.get("power", "preset")) {
        power_preset_name = *v;
        power = power_preset(*v);
    }
    if (auto v = ini.get("reference", "method")) {
        if (*v == "none") reference.reset();
        else {
            if (!reference) reference = ReferenceConfig{};
            if (*v == "ground_truth") reference->method = ReferenceMethod::GroundTruth;
            else if (*v == "matched_filter") reference->method = ReferenceMethod::MatchedFilter;
            else if (*v == "amplitude_threshold") reference->method = ReferenceMethod::AmplitudeThreshold;
            else throw ConfigError("[reference] method: expected "
                                   "matched_filter|amplitude_threshold|ground_truth|none");
        }
    }

    for (const auto& [section, kv] : ini.sections()) {
        for (const auto& [key, value] : kv) {
            const std::string where = "[" + section + "] " + key;
            bool known = true;
            if (section == "device") {
                if (key == "preset") {}  // handled above
                else if (key == "r_eq") device.r_eq = to_double(where, value);
                else if (key == "r_min") device.r_min = to_double(where, value);
                else if (key == "r_max") device.r_max = to_double(where, value);
                else if (key == "v_th_neg") device.v_th_neg = to_double(where, value);
                else if (key == "v_th_pos") device.v_th_pos = to_double(where, value);
                else if (key == "write_gain") device.write_gain = to_double(where, value);
                else if (key == "write_exp") device.write_exp = to_double(where, value);
                else if (key == "tau") device.tau = to_double(where, value);
                else if (key == "r_series") device.r_series = to_double(where, value);
                else if (key == "read_noise_sigma") device.read_noise_sigma = to_double(where, value);
                else if (key == "regime") {
                    if (value == "volatile") device.regime = Regime::Volatile;
                    else if (value == "nonvolatile") device.regime = Regime::NonVolatile;
                    else throw ConfigError(where + ": expected volatile|nonvolatile");
                } else known = false;
            } else if (section == "sweep") {
                if (key == "v_start") sweep.v_start = to_double(where, value);
                else if (key == "v_stop") sweep.v_stop = to_double(where, value);
                else if (key == "v_step") sweep.v_step = to_double(where, value);
                else if (key == "t_w") sweep.t_w = to_double(where, value);
                else if (key == "v_read") sweep.v_read = to_double(where, value);
                else if (key == "n_per_test_batch") sweep.n_per_test_batch = static_cast<int>(to_int(where, value));
                else if (key == "k") sweep.k = static_cast<int>(to_int(where, value));
                else if (key == "t_threshold") sweep.t_threshold = to_double(where, value);
                else if (key == "retention_t_threshold") sweep.retention_t_threshold = to_double(where, value);
                else if (key == "retention_window") sweep.retention_window = to_double(where, value);
                else if (key == "retention_read_period") sweep.retention_read_period = to_double(where, value);
                else if (key == "monitor_read_period") sweep.monitor_read_period = to_double(where, value);
                else if (key == "resolution") sweep.resolution = to_double(where, value);
                else if (key == "max_batches") sweep.max_batches = to_int(where, value);
                else known = false;
            } else if (section == "encoder") {
                if (key == "gain") encoder.gain = to_double(where, value);
                else if (key == "offset") encoder.offset = to_double(where, value);
                else if (key == "batch_size") encoder.batch_size = static_cast<std::size_t>(to_int(where, value));
                else if (key == "read_stride") encoder.read_stride = static_cast<std::size_t>(to_int(where, value));
                else if (key == "v_read") encoder.v_read = to_double(where, value);
                else if (key == "read_pulse_width") encoder.read_pulse_width = to_double(where, value);
                else known = false;
            } else if (section == "synth") {
                if (key == "n_samples") synth.n_samples = static_cast<std::size_t>(to_int(where, value));
                else if (key == "fs") synth.fs = to_double(where, value);
                else if (key == "spike_rate") synth.spike_rate = to_double(where, value);
                else if (key == "template_peak")
                    synth.template_waveform = default_spike_template(synth.fs, to_double(where, value));
                else if (key == "amplitude_jitter") synth.amplitude_jitter = to_double(where, value);
                else if (key == "noise_sigma") synth.noise_sigma = to_double(where, value);
                else if (key == "refractory") synth.refractory = to_double(where, value);
                else if (key == "clip") synth.clip = to_double(where, value);
                else known = false;
            } else if (section == "reference") {
                if (key == "method") {}  // handled above
                else if (key == "threshold") {
                    if (reference) reference->threshold = to_double(where, value);
                } else if (key == "min_separation") {
                    if (reference) reference->min_separation = to_double(where, value);
                } else known = false;
            } else if (section == "power") {
                if (key == "preset") {}  // handled above
                else if (key == "r_device") power.r_device = to_double(where, value);
                else if (key == "r_series") power.r_series = to_double(where, value);
                else if (key == "v_read") power.v_read = to_double(where, value);
                else if (key == "v_write") power.v_write = to_double(where, value);
                else if (key == "t_read") power.t_read = to_double(where, value);
                else if (key == "t_write") power.t_write = to_double(where, value);
                else if (key == "reads_per_batch") power.reads_per_batch = static_cast<int>(to_int(where, value));
                else if (key == "samples_per_batch") power.samples_per_batch = static_cast<int>(to_int(where, value));
                else if (key == "fs") power.fs = to_double(where, value);
                else if (key == "resets_per_recording") power.resets_per_recording = static_cast<int>(to_int(where, value));
                else if (key == "t_reset") power.t_reset = to_double(where, value);
                else if (key == "v_reset") power.v_reset = to_double(where, value);
                else if (key == "batches_per_recording") power.batches_per_recording = static_cast<int>(to_int(where, value));
                else if (key == "include_series_on_write") power.include_series_on_write = to_bool(where, value);
                else known = false;
            } else if (section == "bench") {
                if (key == "gains") bench.gains = parse_double_list(value);
                else if (key == "repeats") bench.repeats = static_cast<int>(to_int(where, value));
                else if (key == "v_off") bench.v_off = to_double(where, value);
                else known = false;
            } else if (section == "detection") {
                if (key == "v_th") v_th_override = to_double(where, value);
                else known = false;
            } else if (section == "run") {
                if (key == "master_seed") master_seed = static_cast<std::uint64_t>(to_int(where, value));
                else if (key == "out_dir") out_dir = value;
                else if (key == "format") {
                    if (value != "csv" && value != "json" && value != "both")
                        throw ConfigError(where + ": expected csv|json|both");
                    format = value;
                } else known = false;
            } else {
                throw ConfigError("unknown config section [" + section + "]");
            }
            if (!known) throw ConfigError("unknown config key " + where);
        }
    }

    // Matched-filter references share the synthesis template unless the
    // manifest supplies recordings with a different shape.
    if (reference && reference->method == ReferenceMethod::MatchedFilter &&
        reference->template_waveform.empty())
        reference->template_waveform = synth.template_waveform;
}

RunConfig RunConfig::from_file(const std::string& path) {
    RunConfig cfg;
    cfg.apply(IniFile::parse_file(path));
    return cfg;
}

}  // namespace memspike
