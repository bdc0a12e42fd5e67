#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "memspike/detection.hpp"
#include "memspike/errors.hpp"
#include "memspike/util.hpp"

using namespace memspike;

namespace {

BinRecord noise_rec(double delta) {
    BinRecord b;
    b.delta_rel = delta;
    b.is_noise_pair = true;
    return b;
}

BinRecord data_bin(double delta, double v_peak) {
    BinRecord b;
    b.delta_rel = delta;
    b.v_peak = v_peak;
    return b;
}

}  // namespace

TEST_CASE("volatile noise band discards positive changes and uses mu + 2 sigma") {
    const std::vector<BinRecord> noise = {noise_rec(-0.01), noise_rec(-0.02), noise_rec(-0.03),
                                          noise_rec(0.05), noise_rec(0.04)};
    const NoiseBand band = noise_band(noise, BandMode::Volatile);
    CHECK(band.threshold_neg == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(band.n_used == 3);
    CHECK_FALSE(band.threshold_pos.has_value());
}

TEST_CASE("all-zero noise gives a zero band; any negative bin is significant") {
    const std::vector<BinRecord> noise = {noise_rec(0.0), noise_rec(0.0), noise_rec(0.0)};
    const NoiseBand band = noise_band(noise, BandMode::Volatile);
    CHECK(band.threshold_neg == 0.0);

    const std::vector<BinRecord> bins = {data_bin(-1e-9, 0.0), data_bin(0.0, 0.0)};
    const DetectionResult det = detect(bins, band, -1.5);
    CHECK(det.spike == std::vector<bool>{true, false});
}

TEST_CASE("too few negative noise measurements is a typed error") {
    const std::vector<BinRecord> noise = {noise_rec(0.05), noise_rec(0.04), noise_rec(-0.01)};
    CHECK_THROWS_AS(noise_band(noise, BandMode::Volatile), InsufficientNoiseError);
}

TEST_CASE("non-volatile band keeps the signed distribution at mu +- 3 sigma") {
    std::vector<BinRecord> noise;
    for (double d : {0.01, 0.02, 0.03, 0.04, 0.05}) noise.push_back(noise_rec(d));
    const NoiseBand band = noise_band(noise, BandMode::NonVolatile);
    CHECK(band.center == doctest::Approx(0.03));
    const double sigma = std::sqrt(1.0e-3 / 4.0);
    CHECK(band.threshold_neg == doctest::Approx(3.0 * sigma));
    CHECK(band.threshold_pos.value() == doctest::Approx(3.0 * sigma));

    const std::vector<BinRecord> bins = {data_bin(0.03, 0.0), data_bin(0.2, 0.0),
                                         data_bin(-0.2, 0.0)};
    const DetectionResult det = detect(bins, band, -1.5);
    CHECK(det.spike == std::vector<bool>{false, true, true});
}

TEST_CASE("volatile detection rule and quadrants") {
    NoiseBand band;
    band.mode = BandMode::Volatile;
    band.threshold_neg = 0.05;

    const std::vector<BinRecord> bins = {data_bin(-0.2, -2.0), data_bin(-0.01, -2.0),
                                         data_bin(0.3, -0.5)};
    const DetectionResult det = detect(bins, band, -1.5);
    CHECK(det.spike == std::vector<bool>{true, false, false});
    CHECK(det.spike_count == 1);
    CHECK(det.quadrant[0] == Quadrant::TP);  // significant, supra-threshold stimulus
    CHECK(det.quadrant[1] == Quadrant::FN);  // quiet, supra-threshold stimulus
    CHECK(det.quadrant[2] == Quadrant::TN);  // quiet, weak stimulus

    SUBCASE("positive changes are never spikes in volatile mode") {
        std::vector<BinRecord> pos;
        for (double d : {0.1, 0.5, 2.0, 1e-6}) pos.push_back(data_bin(d, -3.0));
        const DetectionResult res = detect(pos, band, -1.5);
        for (bool s : res.spike) CHECK_FALSE(s);
    }
    SUBCASE("all deltas inside the band: zero spikes") {
        std::vector<BinRecord> quiet;
        for (double d : {-0.04, -0.01, 0.02}) quiet.push_back(data_bin(d, -2.0));
        CHECK(detect(quiet, band, -1.5).spike_count == 0);
    }
}

TEST_CASE("spike count convention: one spike per significant bin") {
    NoiseBand band;
    band.mode = BandMode::Volatile;
    band.threshold_neg = 0.05;
    std::vector<BinRecord> bins;
    for (int i = 0; i < 300; ++i) bins.push_back(data_bin(i % 4 == 0 ? -0.2 : 0.0, -2.0));
    CHECK(detect(bins, band, -1.5).spike_count == 75);
}

TEST_CASE("scaling deltas and band together leaves decisions unchanged") {
    std::mt19937_64 rng(40);
    std::normal_distribution<double> d(0.0, 0.02);
    std::vector<BinRecord> noise, bins;
    for (int i = 0; i < 40; ++i) noise.push_back(noise_rec(d(rng)));
    for (int i = 0; i < 200; ++i) bins.push_back(data_bin(d(rng) * 3.0, -2.0));

    const NoiseBand band = noise_band(noise, BandMode::Volatile);
    const std::vector<bool> base = detect(bins, band, -1.5).spike;

    const double c = 7.25;
    std::vector<BinRecord> noise2 = noise, bins2 = bins;
    for (auto& n : noise2) n.delta_rel *= c;
    for (auto& b : bins2) b.delta_rel *= c;
    const NoiseBand band2 = noise_band(noise2, BandMode::Volatile);
    CHECK(detect(bins2, band2, -1.5).spike == base);
}

TEST_CASE("benchmark reproduces the reference confusion rows") {
    struct Row {
        std::size_t tp, fp, tn, fn;
        double tpr, fpr;
    };
    const Row rows[] = {
        {58, 9, 166, 20, 74.35, 5.14},
        {13, 0, 233, 7, 65.0, 0.0},
        {69, 23, 152, 9, 88.46, 13.14},
    };
    for (const auto& row : rows) {
        std::vector<bool> ours, ref;
        const auto push = [&](std::size_t n, bool o, bool r) {
            for (std::size_t i = 0; i < n; ++i) {
                ours.push_back(o);
                ref.push_back(r);
            }
        };
        push(row.tp, true, true);
        push(row.fp, true, false);
        push(row.tn, false, false);
        push(row.fn, false, true);
        const ConfusionCounts c = benchmark(ours, ref);
        CHECK(c.tp == row.tp);
        CHECK(c.fp == row.fp);
        CHECK(c.tn == row.tn);
        CHECK(c.fn == row.fn);
        CHECK(std::abs(c.tpr - row.tpr) <= 0.01);
        CHECK(std::abs(c.fpr - row.fpr) <= 0.01);
        CHECK(c.tp + c.fp + c.tn + c.fn == ours.size());
    }
}

TEST_CASE("benchmark of identical vectors") {
    const std::vector<bool> v = {true, false, true, false, false};
    const ConfusionCounts c = benchmark(v, v);
    CHECK(c.fpr == 0.0);
    CHECK(c.tpr == 100.0);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
}

TEST_CASE("benchmark rates are permutation invariant") {
    std::mt19937_64 rng(9);
    std::bernoulli_distribution coin(0.3);
    std::vector<bool> ours(100), ref(100);
    for (std::size_t i = 0; i < 100; ++i) {
        ours[i] = coin(rng);
        ref[i] = coin(rng);
    }
    const ConfusionCounts base = benchmark(ours, ref);
    std::vector<std::size_t> perm(100);
    for (std::size_t i = 0; i < 100; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<bool> ours2(100), ref2(100);
    for (std::size_t i = 0; i < 100; ++i) {
        ours2[i] = ours[perm[i]];
        ref2[i] = ref[perm[i]];
    }
    const ConfusionCounts shuffled = benchmark(ours2, ref2);
    CHECK(shuffled.tpr == base.tpr);
    CHECK(shuffled.fpr == base.fpr);
}

TEST_CASE("benchmark rejects mismatched lengths") {
    CHECK_THROWS_AS(benchmark(std::vector<bool>{true}, std::vector<bool>{true, false}),
                    InvalidInput);
}

TEST_CASE("noise pairs skew positive once spiking displaces the state") {
    // Self-reset transitions go up in resistance, so after spiking activity
    // the boundary pairs drift positive; a noiseless cell shows the skew
    // without any negative counterpart.
    SynthSpec spec;
    spec.noise_sigma = 0.0;
    spec.amplitude_jitter = 0.0;
    spec.n_samples = 6000;
    std::vector<std::size_t> peaks;
    for (std::size_t p = 2500; p < 6000; p += 700) peaks.push_back(p);  // quiet lead-in
    const Recording raw = render_recording(spec, peaks);

    DeviceParams params = volatile_preset();
    params.read_noise_sigma = 0.0;
    Device dev(params);
    const Recording pre = preprocess(raw, 6.0, 0.0);
    const MeasurementLog log = drive_and_measure(dev, pre, EncoderConfig{});
    const auto [bins, noise] = bin_changes(log, pre);

    REQUIRE(noise.size() == 5);
    std::size_t positive = 0;
    for (const auto& n : noise) {
        CHECK(n.delta_rel >= 0.0);
        if (n.delta_rel > 0.0) ++positive;
    }
    CHECK(positive >= 3);          // every boundary after the first spike
    CHECK(noise[0].delta_rel == 0.0);  // still at equilibrium before it
}

TEST_CASE("roc_sweep with one gain and one repeat equals a direct run") {
    SynthSpec spec;
    spec.n_samples = 12000;
    spec.seed = 515;
    const Recording raw = generate_recording(spec);

    const DeviceParams base = volatile_preset();
    const auto factory = [&base](std::uint64_t seed) {
        DeviceParams p = base;
        p.seed = seed;
        return Device(p);
    };
    ReferenceConfig ref;  // ground truth
    const std::uint64_t master = 77;
    const std::vector<double> gains = {6.0};
    const auto points = roc_sweep(raw, factory, gains, 0.0, 1, master, EncoderConfig{}, ref);
    REQUIRE(points.size() == 1);
    REQUIRE(points[0].runs.size() == 1);

    Device dev = factory(derive_seed(master, 0, 0));
    const Recording pre = preprocess(raw, 6.0, 0.0);
    const MeasurementLog log = drive_and_measure(dev, pre, EncoderConfig{});
    const auto [bins, noise] = bin_changes(log, pre);
    const NoiseBand band = noise_band(noise, BandMode::Volatile);
    const DetectionResult det = detect(bins, band, dev.params().v_th_neg);
    const ConfusionCounts direct =
        benchmark(det.spike, indices_to_bins(*raw.ground_truth, bins));

    CHECK(points[0].mean_tpr == direct.tpr);
    CHECK(points[0].mean_fpr == direct.fpr);
    CHECK(points[0].runs[0].counts.tp == direct.tp);
}

TEST_CASE("roc_sweep mean TPR is non-decreasing on an easy recording") {
    SynthSpec spec;
    spec.n_samples = 24000;
    spec.noise_sigma = 0.03;
    spec.seed = 2;
    const Recording raw = generate_recording(spec);
    const DeviceParams base = volatile_preset();
    const auto factory = [&base](std::uint64_t seed) {
        DeviceParams p = base;
        p.seed = seed;
        return Device(p);
    };
    const std::vector<double> gains = {3.0, 4.8, 6.5};
    const auto points =
        roc_sweep(raw, factory, gains, 0.0, 10, 909, EncoderConfig{}, ReferenceConfig{});
    REQUIRE(points.size() == 3);
    CHECK(points[0].mean_tpr <= points[1].mean_tpr);
    CHECK(points[1].mean_tpr <= points[2].mean_tpr);
}

TEST_CASE("roc_sweep validates and tags failures") {
    SynthSpec spec;
    spec.n_samples = 3000;
    const Recording raw = generate_recording(spec);
    const auto factory = [](std::uint64_t seed) {
        DeviceParams p = volatile_preset();
        p.seed = seed;
        return Device(p);
    };
    CHECK_THROWS_AS(roc_sweep(raw, factory, std::vector<double>{}, 0.0, 1, 1,
                              EncoderConfig{}, ReferenceConfig{}),
                    InvalidInput);
    CHECK_THROWS_AS(roc_sweep(raw, factory, std::vector<double>{2.0}, 0.0, 0, 1,
                              EncoderConfig{}, ReferenceConfig{}),
                    InvalidInput);

    Recording no_gt = raw;
    no_gt.ground_truth.reset();
    try {
        roc_sweep(no_gt, factory, std::vector<double>{2.0}, 0.0, 1, 1, EncoderConfig{},
                  ReferenceConfig{});
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(std::string(e.what()).find("ground truth") != std::string::npos);
    }
}
