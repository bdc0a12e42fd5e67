#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace memspike {

/// A sampled front-end voltage trace. Raw recordings arrive in +-0.5 V at
/// 12.2 kHz; ground_truth, when present, holds the sample indices of known
/// spike peaks (synthetic recordings only).
struct Recording {
    std::vector<double> samples;  // volts
    double fs = 12200.0;          // hertz
    std::optional<std::vector<std::size_t>> ground_truth;

    void validate() const;  // throws InvalidInput on empty samples / bad fs
};

/// True when every sample lies within +-limit volts (the front-end range).
bool within_frontend_range(const Recording& rec, double limit = 0.5);

// Text format: comment header ("# fs_hz=<int>", optional
// "# ground_truth=i,j,..."), then one decimal voltage per line.
Recording load_recording(const std::string& path);
void save_recording(const Recording& rec, const std::string& path);

// Binary format: little-endian float32 samples plus a sidecar text file
// (path + ".meta") carrying the same header keys.
Recording load_recording_binary(const std::string& path);
void save_recording_binary(const Recording& rec, const std::string& path);

}  // namespace memspike
