#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "memspike/characterization.hpp"
#include "memspike/detection.hpp"
#include "memspike/device.hpp"
#include "memspike/encoder.hpp"
#include "memspike/power.hpp"
#include "memspike/synth.hpp"

namespace memspike {

/// Minimal INI-style reader: [section] headers, key = value lines, '#' / ';'
/// comments. Unknown keys are rejected when a RunConfig is built from it, so
/// typos in experiment manifests fail loudly.
class IniFile {
public:
    static IniFile parse_file(const std::string& path);
    static IniFile parse(std::istream& in, const std::string& origin);

    std::optional<std::string> get(const std::string& section, const std::string& key) const;
    const std::map<std::string, std::map<std::string, std::string>>& sections() const {
        return sections_;
    }

private:
    std::map<std::string, std::map<std::string, std::string>> sections_;
};

struct BenchConfig {
    std::vector<double> gains{2.2, 2.4, 2.6};
    int repeats = 5;
    double v_off = -0.6;
};

/*
 * One experiment manifest: every module's knobs plus the master seed all
 * randomness derives from. Values come from built-in defaults, then the
 * config file, then command-line flags, in that order.
 */
struct RunConfig {
    DeviceParams device = volatile_preset();
    SweepConfig sweep;
    EncoderConfig encoder{.gain = 6.0, .offset = 0.0};
    SynthSpec synth;
    std::optional<ReferenceConfig> reference = ReferenceConfig{};  // empty: no benchmark
    PowerConfig power;
    std::string power_preset_name = "note2";
    BenchConfig bench;
    std::optional<double> v_th_override;  // quadrant labelling; default device.v_th_neg

    std::uint64_t master_seed = 42;
    std::string out_dir = "out";
    std::string format = "both";  // csv | json | both

    void apply(const IniFile& ini);  // throws ConfigError on unknown keys/values
    static RunConfig from_file(const std::string& path);
};

std::vector<double> parse_double_list(const std::string& csv);

}  // namespace memspike
