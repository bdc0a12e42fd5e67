#pragma once

#include <optional>
#include <span>
#include <string>

#include "memspike/characterization.hpp"
#include "memspike/detection.hpp"
#include "memspike/encoder.hpp"
#include "memspike/power.hpp"

namespace memspike {

// Flat-file report writers. All output is deterministic: fixed column order,
// fixed float formatting, no timestamps, so identical runs produce identical
// bytes.

std::string format_double(double x);  // %.12g

std::string volatility_csv(const VolatilityReport& report);
std::string volatility_json(const VolatilityReport& report);

/// Chronological bins + noise pairs with the encoder columns.
std::string bins_csv(std::span<const BinRecord> bins, std::span<const BinRecord> noise);

/// Per data bin: delta, peak stimulus, significance and quadrant label.
std::string detect_csv(std::span<const BinRecord> bins, const DetectionResult& det);

std::string detection_report_json(const NoiseBand& band, const DetectionResult& det,
                                  const std::optional<ConfusionCounts>& confusion,
                                  std::size_t n_measurements, std::size_t n_bins,
                                  std::size_t n_noise, double compression);

/// Per-repeat rows followed by one "avg" row per gain.
std::string roc_csv(std::span<const RocPoint> points);
std::string roc_json(std::span<const RocPoint> points);

std::string power_json(const PowerConfig& cfg, const PowerReport& report,
                       const std::string& preset_name);
std::string power_table(const PowerConfig& cfg, const PowerReport& report,
                        const std::string& preset_name);

}  // namespace memspike
