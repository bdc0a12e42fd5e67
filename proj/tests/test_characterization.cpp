#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "memspike/characterization.hpp"
#include "memspike/device.hpp"
#include "memspike/errors.hpp"

using namespace memspike;

namespace {

// Cell whose resistance ramps at a constant rate regardless of stimulus.
struct DriftCell {
    double r = 1.0e6;
    double rate = 0.0;  // ohm per second
    double read(double) { return r; }
    void relax(double dt) { r += rate * dt; }
    void apply_sample(double, double dt) { relax(dt); }
};

DeviceParams quiet_volatile() {
    DeviceParams p = volatile_preset();
    p.read_noise_sigma = 0.0;
    return p;
}

}  // namespace

TEST_CASE("t statistic matches hand-evaluated references") {
    struct Case {
        std::vector<double> a, b;
        double expected;
    };
    // Expected values computed independently from the two-mean formula with
    // sample standard deviations.
    const Case cases[] = {
        {{9, 9, 10, 11, 11}, {7, 7, 8, 9, 9}, 3.1622776601683791},
        {{1, 2, 3, 4, 5, 6}, {4, 5, 6, 7, 8, 9}, -2.7774602993176543},
        {{1.0e6, 1.0001e6, 0.9999e6}, {9.8e5, 9.81e5, 9.79e5}, 34.469099377285566},
        {{-3.2, -1.1, 0.4, 2.2, 5.0}, {0.5, 0.6, 0.7, 0.8, 0.9}, -0.028508951879989228},
        {{2, 4, 6, 8}, {1, 2, 3, 4, 5, 6, 7, 8, 9, 10}, -0.31108550841912758},
    };
    for (const auto& c : cases)
        CHECK(t_statistic(c.a, c.b) == doctest::Approx(c.expected).epsilon(1e-12));
}

TEST_CASE("t statistic degenerate guards") {
    const std::vector<double> same{10, 10, 10};
    const std::vector<double> other{11, 11, 11};
    CHECK(t_statistic(same, same) == 0.0);
    CHECK(std::isinf(t_statistic(same, other)));
    CHECK(t_statistic(same, other) < 0.0);  // sign follows mu1 - mu2
    CHECK(t_statistic(other, same) > 0.0);

    const std::vector<double> identical{3.5, 4.5, 5.5, 6.5};
    CHECK(t_statistic(identical, identical) == 0.0);

    CHECK_THROWS_AS(t_statistic(std::vector<double>{1.0}, same), InvalidInput);
}

TEST_CASE("t statistic is antisymmetric and shift invariant") {
    std::mt19937_64 rng(123);
    std::uniform_real_distribution<double> value(-50.0, 50.0);
    std::uniform_int_distribution<int> len(2, 12);
    for (int i = 0; i < 1000; ++i) {
        std::vector<double> a(len(rng)), b(len(rng));
        for (double& x : a) x = value(rng);
        for (double& x : b) x = value(rng);
        const double t = t_statistic(a, b);
        CHECK(t_statistic(b, a) == -t);

        const double shift = value(rng);
        std::vector<double> a2 = a, b2 = b;
        for (double& x : a2) x += shift;
        for (double& x : b2) x += shift;
        CHECK(t_statistic(a2, b2) == doctest::Approx(t).epsilon(1e-7));
    }
}

TEST_CASE("monitor terminates in one batch at equilibrium") {
    Device dev(quiet_volatile());
    SweepConfig cfg;
    const RelaxationResult res = monitor_relaxation(dev, cfg);
    CHECK(res.trace.size() == static_cast<std::size_t>(cfg.n_per_test_batch));
    CHECK(res.r_equilibrium == dev.params().r_eq);
}

TEST_CASE("monitor tracks a noiseless decay to equilibrium") {
    DeviceParams p = quiet_volatile();
    p.tau = 1.0;
    Device dev(p);
    dev.set_resistance(0.7 * p.r_eq);
    SweepConfig cfg;
    const RelaxationResult res = monitor_relaxation(dev, cfg);
    CHECK(res.settle_time >= 3.0 * p.tau);
    CHECK(res.settle_time <= 8.0 * p.tau);
    CHECK(res.r_equilibrium == doctest::Approx(p.r_eq).epsilon(0.02));
    // equilibrium is measured from the trace, not taken from the parameters
    CHECK(res.r_equilibrium != p.r_eq);
}

TEST_CASE("monitor sees a displaced non-volatile cell as already settled") {
    DeviceParams p = nonvolatile_preset();
    p.read_noise_sigma = 0.0;
    Device dev(p);
    dev.set_resistance(5.0e3);
    SweepConfig cfg;
    const RelaxationResult res = monitor_relaxation(dev, cfg);
    CHECK(res.trace.size() == static_cast<std::size_t>(cfg.n_per_test_batch));
    CHECK(res.r_equilibrium == 5.0e3);
}

TEST_CASE("monitor raises a non-settling error on endless drift") {
    // drift fast enough to stand clear of the measurement resolution floor
    DriftCell cell{1.0e6, 5.0e4};
    SweepConfig cfg;
    cfg.max_batches = 3;
    CHECK_THROWS_AS(monitor_relaxation(cell, cfg), NonSettlingError);
    try {
        DriftCell again{1.0e6, 5.0e4};
        monitor_relaxation(again, cfg);
    } catch (const NonSettlingError& e) {
        CHECK(e.partial_trace.size() ==
              static_cast<std::size_t>(cfg.max_batches * cfg.n_per_test_batch));
    }
}

TEST_CASE("drift below the resolution floor reads as settled per batch") {
    // 500 ohm/s against a 0.1% resolution on ~1 MOhm: invisible within one
    // batch; the retention stage is what catches it over its longer window.
    DriftCell cell{1.0e6, 500.0};
    SweepConfig cfg;
    CHECK_NOTHROW(monitor_relaxation(cell, cfg));
    DriftCell fresh{1.0e6, 500.0};
    CHECK_FALSE(retention_test(fresh, cfg).passed);
}

TEST_CASE("retention passes a settled cell and fails a drifting one") {
    SweepConfig cfg;

    Device settled(quiet_volatile());
    const RetentionResult ok = retention_test(settled, cfg);
    CHECK(ok.passed);
    CHECK(ok.residual_drift == 0.0);
    CHECK(ok.r_end == settled.params().r_eq);

    DriftCell drifting{1.0e6, 0.01 * 1.0e6 / 60.0};  // 1% per minute
    const RetentionResult bad = retention_test(drifting, cfg);
    CHECK_FALSE(bad.passed);
    CHECK(bad.residual_drift > 0.005);
}

TEST_CASE("retention is robust to read noise across seeds") {
    SweepConfig cfg;
    int passed = 0;
    for (int seed = 0; seed < 100; ++seed) {
        DeviceParams p = volatile_preset();
        p.read_noise_sigma = 0.005;
        p.seed = 1000 + static_cast<std::uint64_t>(seed);
        Device dev(p);
        if (retention_test(dev, cfg).passed) ++passed;
    }
    CHECK(passed >= 95);
}

TEST_CASE("sweep emits one record per step, ordered by |v_w|") {
    Device dev(quiet_volatile());
    SweepConfig cfg;  // -0.2 .. -4.0 in 0.2 steps
    const VolatilityReport report = volatility_sweep(dev, cfg);
    CHECK(report.records.size() == 20);
    for (std::size_t i = 1; i < report.records.size(); ++i)
        CHECK(std::abs(report.records[i].v_w) > std::abs(report.records[i - 1].v_w));
    CHECK(report.records.front().v_w == doctest::Approx(-0.2));
    CHECK(report.records.back().v_w == doctest::Approx(-4.0));
}

TEST_CASE("sub-threshold sweep shows only background-level changes") {
    SweepConfig cfg;
    cfg.v_start = -0.2;
    cfg.v_stop = -1.2;

    SUBCASE("noiseless: exactly zero and no threshold found") {
        Device dev(quiet_volatile());  // v_th_neg = -1.5
        const VolatilityReport report = volatility_sweep(dev, cfg);
        for (const auto& r : report.records) {
            CHECK(r.delta_volatile == 0.0);
            CHECK(r.delta_nonvolatile == 0.0);
        }
        CHECK_FALSE(report.extracted_v_th.has_value());
    }
    SUBCASE("noisy: within 3 sigma of zero") {
        DeviceParams p = volatile_preset();
        p.read_noise_sigma = 0.005;
        p.seed = 21;
        Device dev(p);
        const VolatilityReport report = volatility_sweep(dev, cfg);
        for (const auto& r : report.records) {
            CHECK(std::abs(r.delta_volatile) < 3.0 * p.read_noise_sigma);
            CHECK(std::abs(r.delta_nonvolatile) < 3.0 * p.read_noise_sigma);
        }
    }
}

TEST_CASE("sweep recovers the configured threshold") {
    // Pulse width and gain sized so one 0.2 V overdrive step moves the state
    // well clear of the noise floor.
    DeviceParams p = volatile_preset();
    p.v_th_neg = -1.8;
    p.write_gain = 4.0e9;
    p.read_noise_sigma = 0.005;
    p.seed = 5;
    Device dev(p);
    SweepConfig cfg;
    cfg.t_w = 1.0e-4;
    const VolatilityReport report = volatility_sweep(dev, cfg);
    REQUIRE(report.extracted_v_th.has_value());
    CHECK(std::abs(*report.extracted_v_th - p.v_th_neg) <= cfg.v_step + 1e-9);

    // Fig 1d pattern: volatile change grows with amplitude beyond threshold,
    // residual change stays at background level across the safe band.
    const auto& recs = report.records;
    double dv_mid = 0.0, dv_end = 0.0;
    for (const auto& r : recs) {
        if (std::abs(r.v_w + 2.4) < 1e-9) dv_mid = std::abs(r.delta_volatile);
        if (std::abs(r.v_w + 4.0) < 1e-9) dv_end = std::abs(r.delta_volatile);
    }
    CHECK(dv_mid > report.noise_floor);
    CHECK(dv_end > dv_mid);
}

TEST_CASE("extract_threshold hand-constructed records") {
    std::vector<VolatilityRecord> recs(5);
    const double vs[] = {-1.0, -1.5, -2.0, -2.5, -3.0};
    const double dv[] = {0.0, 0.0, 0.1, 0.2, 0.3};
    for (int i = 0; i < 5; ++i) {
        recs[i].v_w = vs[i];
        recs[i].delta_volatile = dv[i];
        recs[i].delta_nonvolatile = 0.0;
    }
    std::optional<std::pair<double, double>> band;
    const auto v_th = extract_threshold(recs, 0.05, &band);
    REQUIRE(v_th.has_value());
    CHECK(*v_th == -2.0);
    REQUIRE(band.has_value());
    CHECK(band->first == -2.0);
    CHECK(band->second == -3.0);

    SUBCASE("all-zero deltas give not-found") {
        for (auto& r : recs) r.delta_volatile = 0.0;
        CHECK_FALSE(extract_threshold(recs, 0.05).has_value());
    }
    SUBCASE("a non-volatile violation truncates the band") {
        recs[4].delta_nonvolatile = 0.2;
        std::optional<std::pair<double, double>> b2;
        const auto v2 = extract_threshold(recs, 0.05, &b2);
        REQUIRE(v2.has_value());
        CHECK(*v2 == -2.0);
        CHECK(b2->second == -2.5);
    }
    SUBCASE("preconditions") {
        CHECK_THROWS_AS(extract_threshold(std::span(recs).first(2), 0.05), InvalidInput);
        CHECK_THROWS_AS(extract_threshold(recs, 0.0), InvalidInput);
    }
}

TEST_CASE("sweep config validation") {
    SweepConfig cfg;
    cfg.v_start = -0.2;
    cfg.v_stop = 4.0;  // polarity flip
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = SweepConfig{};
    cfg.k = 1;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
    cfg = SweepConfig{};
    cfg.k = 20;  // 2k > n
    cfg.n_per_test_batch = 30;
    CHECK_THROWS_AS(cfg.validate(), InvalidInput);
}

TEST_CASE("sweep tags non-settling errors with the offending amplitude") {
    DriftCell cell{1.0e6, 5.0e4};
    SweepConfig cfg;
    cfg.max_batches = 2;
    try {
        volatility_sweep(cell, cfg);
        FAIL("expected NonSettlingError");
    } catch (const NonSettlingError& e) {
        CHECK(e.v_w == doctest::Approx(-0.2));
        CHECK_FALSE(e.partial_trace.empty());
    }
}
