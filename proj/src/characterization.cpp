#include "memspike/characterization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace memspike {

void SweepConfig::validate() const {
    const bool same_sign = (v_start < 0.0) == (v_stop < 0.0) && v_start != 0.0 && v_stop != 0.0;
    if (!same_sign) throw InvalidInput("sweep: v_start and v_stop must share one polarity");
    if (!(v_step > 0.0)) throw InvalidInput("sweep: v_step must be > 0");
    if (!(std::abs(v_stop) >= std::abs(v_start)))
        throw InvalidInput("sweep: |v_stop| must be >= |v_start|");
    if (!(t_w > 0.0)) throw InvalidInput("sweep: t_w must be > 0");
    if (k < 2) throw InvalidInput("sweep: k must be >= 2");
    if (2 * k > n_per_test_batch) throw InvalidInput("sweep: need 2*k <= n_per_test_batch");
    if (!(t_threshold > 0.0) || !(retention_t_threshold > 0.0))
        throw InvalidInput("sweep: t thresholds must be > 0");
    if (!(monitor_read_period > 0.0) || !(retention_read_period > 0.0))
        throw InvalidInput("sweep: read periods must be > 0");
    if (!(retention_window >= 0.0)) throw InvalidInput("sweep: retention_window must be >= 0");
    if (!(resolution >= 0.0)) throw InvalidInput("sweep: resolution must be >= 0");
    if (max_batches < 1) throw InvalidInput("sweep: max_batches must be >= 1");
}

double t_statistic(std::span<const double> first_k, std::span<const double> last_k,
                   double eps_rel) {
    if (first_k.size() < 2 || last_k.size() < 2)
        throw InvalidInput("t_statistic: both lists need at least 2 values");

    const double mu1 = mean(first_k);
    const double mu2 = mean(last_k);
    const double s1 = sample_std(first_k);
    const double s2 = sample_std(last_k);

    const double scale = std::max({std::abs(mu1), std::abs(mu2),
                                   std::numeric_limits<double>::min()});
    const double eps = eps_rel * scale;
    if (s1 <= eps && s2 <= eps) {
        // Degenerate: both batches flat at the available resolution.
        if (std::abs(mu1 - mu2) <= eps) return 0.0;
        return std::copysign(std::numeric_limits<double>::infinity(), mu1 - mu2);
    }
    const double k1 = static_cast<double>(first_k.size());
    const double k2 = static_cast<double>(last_k.size());
    return (mu1 - mu2) / std::sqrt(s1 * s1 / k1 + s2 * s2 / k2);
}

double default_noise_floor(std::span<const VolatilityRecord> records) {
    std::vector<double> pool;
    for (const auto& r : records) {
        if (std::abs(r.v_w) < 1.0) {
            pool.push_back(std::abs(r.delta_volatile));
            pool.push_back(std::abs(r.delta_nonvolatile));
        }
    }
    if (pool.size() < 2) {
        pool.clear();
        for (std::size_t i = 0; i < records.size() && i < 2; ++i) {
            pool.push_back(std::abs(records[i].delta_volatile));
            pool.push_back(std::abs(records[i].delta_nonvolatile));
        }
    }
    if (pool.size() < 2) return 1.0e-12;
    const double floor = mean(pool) + 2.0 * sample_std(pool);
    return std::max(floor, 1.0e-12);
}

std::optional<double> extract_threshold(std::span<const VolatilityRecord> records,
                                        double noise_floor,
                                        std::optional<std::pair<double, double>>* safe_band) {
    if (records.size() < 3) throw InvalidInput("extract_threshold: need at least 3 records");
    if (!(noise_floor > 0.0)) throw InvalidInput("extract_threshold: noise_floor must be > 0");
    if (safe_band) safe_band->reset();

    const auto conforming = [&](const VolatilityRecord& r) {
        return std::abs(r.delta_volatile) > noise_floor &&
               std::abs(r.delta_nonvolatile) < noise_floor;
    };

    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!conforming(records[i])) continue;
        // Band extends until the non-volatile change breaks the floor.
        std::size_t j = i;
        while (j < records.size() && std::abs(records[j].delta_nonvolatile) < noise_floor) ++j;
        bool all_volatile = true;
        for (std::size_t m = i; m < j; ++m)
            if (std::abs(records[m].delta_volatile) <= noise_floor) { all_volatile = false; break; }
        if (!all_volatile || j == i) continue;
        if (safe_band) *safe_band = std::make_pair(records[i].v_w, records[j - 1].v_w);
        return records[i].v_w;
    }
    return std::nullopt;
}

void extract_threshold(VolatilityReport& report) {
    report.extracted_v_th =
        extract_threshold(report.records, report.noise_floor, &report.safe_band);
}

}  // namespace memspike
