#include <doctest.h>

#include <sstream>

#include "memspike/config.hpp"
#include "memspike/errors.hpp"

using namespace memspike;

TEST_CASE("ini parsing: sections, comments, trimming") {
    std::istringstream in(
        "# experiment manifest\n"
        "[device]\n"
        "preset = volatile   ; inline comment\n"
        "tau = 2.5\n"
        "\n"
        "[run]\n"
        "master_seed = 7\n");
    const IniFile ini = IniFile::parse(in, "test");
    CHECK(ini.get("device", "preset") == std::string("volatile"));
    CHECK(ini.get("device", "tau") == std::string("2.5"));
    CHECK(ini.get("run", "master_seed") == std::string("7"));
    CHECK_FALSE(ini.get("run", "missing").has_value());
}

TEST_CASE("malformed ini lines are config errors") {
    std::istringstream bad1("[device\npreset = volatile\n");
    CHECK_THROWS_AS(IniFile::parse(bad1, "test"), ConfigError);
    std::istringstream bad2("[device]\njust a line\n");
    CHECK_THROWS_AS(IniFile::parse(bad2, "test"), ConfigError);
}

TEST_CASE("run config applies presets then field overrides") {
    std::istringstream in(
        "[device]\n"
        "preset = volatile-narrow\n"
        "tau = 0.5\n"
        "[power]\n"
        "preset = note1\n"
        "v_write = 4.0\n"
        "[encoder]\n"
        "gain = 3.2\n"
        "offset = 0\n"
        "[bench]\n"
        "gains = 2.2, 2.4, 2.6\n"
        "repeats = 2\n"
        "[run]\n"
        "master_seed = 99\n"
        "format = json\n");
    RunConfig cfg;
    cfg.apply(IniFile::parse(in, "test"));
    CHECK(cfg.device.r_min == 7.0e5);   // from the preset
    CHECK(cfg.device.tau == 0.5);       // overridden
    CHECK(cfg.power.r_device == 1.0e4); // note1
    CHECK(cfg.power.v_write == 4.0);    // overridden
    CHECK(cfg.encoder.gain == 3.2);
    CHECK(cfg.bench.gains == std::vector<double>{2.2, 2.4, 2.6});
    CHECK(cfg.bench.repeats == 2);
    CHECK(cfg.master_seed == 99);
    CHECK(cfg.format == "json");
}

TEST_CASE("unknown keys, sections and values fail loudly") {
    RunConfig cfg;
    std::istringstream bad_key("[device]\nresistance = 5\n");
    CHECK_THROWS_AS(cfg.apply(IniFile::parse(bad_key, "t")), ConfigError);
    std::istringstream bad_section("[dev]\nr_eq = 5\n");
    CHECK_THROWS_AS(cfg.apply(IniFile::parse(bad_section, "t")), ConfigError);
    std::istringstream bad_value("[device]\ntau = fast\n");
    CHECK_THROWS_AS(cfg.apply(IniFile::parse(bad_value, "t")), ConfigError);
    std::istringstream bad_preset("[device]\npreset = nope\n");
    CHECK_THROWS_AS(cfg.apply(IniFile::parse(bad_preset, "t")), ConfigError);
}

TEST_CASE("reference method none disables benchmarking") {
    RunConfig cfg;
    CHECK(cfg.reference.has_value());
    std::istringstream in("[reference]\nmethod = none\n");
    cfg.apply(IniFile::parse(in, "t"));
    CHECK_FALSE(cfg.reference.has_value());
}

TEST_CASE("matched-filter reference inherits the synthesis template") {
    RunConfig cfg;
    std::istringstream in("[reference]\nmethod = matched_filter\nthreshold = 0.7\n");
    cfg.apply(IniFile::parse(in, "t"));
    REQUIRE(cfg.reference.has_value());
    CHECK(cfg.reference->template_waveform == cfg.synth.template_waveform);
}

TEST_CASE("gain list parsing") {
    CHECK(parse_double_list("1, 2.5,3") == std::vector<double>{1.0, 2.5, 3.0});
    CHECK(parse_double_list("").empty());
    CHECK_THROWS_AS(parse_double_list("1,zz"), ConfigError);
}

TEST_CASE("method = none wins regardless of key order") {
    RunConfig cfg;
    std::istringstream in("[reference]\nthreshold = 0.9\nmethod = none\n");
    cfg.apply(IniFile::parse(in, "t"));
    CHECK_FALSE(cfg.reference.has_value());
}
