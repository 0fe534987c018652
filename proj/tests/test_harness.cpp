#include <cmath>
#include <filesystem>

#include "csifuzz/harness.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace csifuzz;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("csifuzz_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

}  // namespace

TEST_CASE("trace JSON round trip is exact") {
    CsiTraceFile t = make_trace("unit");
    Rng rng(3);
    for (std::uint64_t f = 0; f < 5; ++f) {
        CsiTraceRecord r;
        r.frame = f;
        r.reg = register_for(random_taps(f).quantized());
        for (int k = 0; k < 52; ++k) r.csi.push_back(rng.complex_gaussian(1.0) * 1e-3 * double(k + 1));
        t.records.push_back(r);
    }
    const std::string text = trace_to_json(t);
    CHECK(trace_from_json(text) == t);
    CHECK(trace_to_json(trace_from_json(text)) == text);

    const fs::path dir = scratch("trace");
    write_trace(t, dir / "nested" / "t.json");
    CHECK(read_trace(dir / "nested" / "t.json") == t);
    fs::remove_all(dir);
}

TEST_CASE("trace validation") {
    CsiTraceFile t = make_trace("unit");
    CHECK(t.subcarriers.size() == 52);
    t.records.push_back({0, {}, ComplexVec(51)});
    CHECK_THROWS_AS(t.validate(), ConfigError);
    CHECK_THROWS_AS(trace_from_json(trace_to_json(t)), ConfigError);
    CHECK_THROWS_AS(trace_from_json("{\"version\": 2}"), ConfigError);
    CHECK_THROWS_AS(trace_from_json("not json"), ConfigError);
    CHECK_THROWS_AS(read_trace("/nonexistent/dir/trace.json"), IoError);
}

TEST_CASE("parity CSV round trip") {
    std::vector<ParityRow> rows{{2.0, 0.125, 0.3, 1e-3, 2.5e-3, 1000},
                                {2.5, 1.0 / 3.0, 0.0, 0.1 + 0.2, 0.0, 1000}};
    const std::string csv = parity_to_csv(rows);
    CHECK(csv.rfind("snr_db,frames,per_off,per_on,ber_off,ber_on\n", 0) == 0);
    const auto back = parity_from_csv(csv);
    REQUIRE(back.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(back[i].snr_db == rows[i].snr_db);
        CHECK(back[i].per_off == rows[i].per_off);
        CHECK(back[i].per_on == rows[i].per_on);
        CHECK(back[i].ber_off == rows[i].ber_off);
        CHECK(back[i].ber_on == rows[i].ber_on);
        CHECK(back[i].frames == rows[i].frames);
    }
    CHECK(parity_to_csv(back) == csv);
    CHECK_THROWS_AS(parity_from_csv("a,b\n"), ConfigError);
    CHECK_THROWS_AS(parity_from_csv("snr_db,frames,per_off,per_on,ber_off,ber_on\n1,2,3\n"),
                    ConfigError);
}

TEST_CASE("config parsing") {
    const ExperimentConfig c = parse_config(R"({
        "modulation": "qam16", "coding": "uncoded",
        "channel": {"cir": [[1, 0], [0.2, -0.1]], "noise_variance": 0.01, "drift": 0.005},
        "taps": {"c1": [0, -0.25], "c2": [0.1, 0]},
        "snr_db": [1, 2], "frames": 12, "seed": 99, "out_dir": "x/y",
        "alphabet": {"pilot_period": 4, "d_min": 0.05,
                     "patterns": [{"c1": [0.3, 0], "c2": [0, 0]}, {"c1": [-0.3, 0], "c2": [0, 0]}]}
    })", "parity");
    CHECK(c.phy.modulation == Modulation::QAM16);
    CHECK(c.phy.coding == Coding::Uncoded);
    CHECK(c.channel.cir == ComplexVec{1.0, {0.2, -0.1}});
    CHECK(c.channel.noise_variance == 0.01);
    CHECK(c.channel.drift == 0.005);
    CHECK(c.taps == FuzzerTaps({0.0, -0.25}, 0.1));
    CHECK(c.snr_db == std::vector<double>{1, 2});
    CHECK(c.frames == 12);
    CHECK(c.seed == 99);
    CHECK(c.out_dir == fs::path("x/y"));
    CHECK(c.alphabet.size() == 2);
    CHECK(c.alphabet.pilot_period == 4);

    const ExperimentConfig d = parse_config("{}", "parity");
    CHECK(d.channel.cir == ComplexVec{1.0, 0.4});
    CHECK(d.taps == FuzzerTaps({0.0, 0.35}, 0.1));
    CHECK(d.frames >= 1000);
}

TEST_CASE("config errors") {
    const char* bad[] = {
        R"({"frames": 0})",
        R"({"bogus": 1})",
        R"({"modulation": "qam64"})",
        R"({"coding": "turbo"})",
        R"({"taps": {"c1": [0.3, 0.3], "c2": [0, 0]}})",
        R"({"taps": {"c1": [0.7, 0], "c2": [0, 0]}})",
        R"({"channel": {"cir": [[1,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0],[0,0]]}})",
        R"({"channel": {"noise_variance": -1}})",
        R"({"frames": "many"})",
        R"({"tap_range": [0.3, 0.1]})",
        R"({"fade_subcarrier": 0})",
        R"({"alphabet": {"patterns": [{"c1": [0.3, 0], "c2": [0, 0]}]}})",
        R"([1, 2])",
        R"({"frames": )",
    };
    for (const char* text : bad) {
        INFO(text);
        CHECK_THROWS_AS(parse_config(text, "parity"), ConfigError);
    }
    CHECK_THROWS_AS(load_config("/nonexistent/cfg.json", "parity"), IoError);
}

TEST_CASE("alphabet JSON round trip") {
    const CirAlphabet a = CirAlphabet::default_alphabet();
    const CirAlphabet b = parse_alphabet(alphabet_to_json(a));
    CHECK(b.patterns == a.patterns);
    CHECK(b.pilot_period == a.pilot_period);
    CHECK(b.d_min == a.d_min);
}

TEST_CASE("hex helpers") {
    const std::vector<std::uint8_t> b{0x00, 0x7f, 0xff};
    CHECK(to_hex(b) == "007fff");
    CHECK(from_hex("0x007FFF") == b);
    CHECK_THROWS_AS(from_hex("abc"), std::invalid_argument);
    CHECK_THROWS_AS(from_hex("zz"), std::invalid_argument);
}

TEST_CASE("CSI demo") {
    ExperimentConfig cfg = ExperimentConfig::defaults_for("csi-demo");
    cfg.out_dir = scratch("demo");
    const CsiDemoResult r = run_csi_demo(cfg);
    CHECK(r.off.records.size() == cfg.frames);
    CHECK(r.max_recovery_error < 1e-9);
    CHECK(r.distortion > 0.1);
    for (const auto& rec : r.on.records) CHECK(rec.reg.word == 0xaccd0ccdu);
    for (const auto& rec : r.off.records) CHECK(rec.reg.word == 0u);
    CHECK(read_trace(cfg.out_dir / "csi_on.json") == r.on);
    CHECK(read_trace(cfg.out_dir / "csi_off.json") == r.off);
    CHECK(read_trace(cfg.out_dir / "csi_recovered.json") == r.recovered);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("scan") {
    ExperimentConfig cfg = ExperimentConfig::defaults_for("scan");
    cfg.out_dir = scratch("scan");
    const ScanResult r = run_scan(cfg);
    CHECK(r.frames_with_errors == 0);
    REQUIRE(r.schedule.size() == cfg.frames);
    REQUIRE(r.consecutive_distortion.size() == cfg.frames - 1);
    for (std::size_t i = 0; i + 1 < cfg.frames; ++i)
        if (!(r.schedule[i] == r.schedule[i + 1])) CHECK(r.consecutive_distortion[i] > 0.0);
    for (std::size_t i = 0; i < cfg.frames; ++i)
        CHECK(taps_from_register(r.trace.records[i].reg) == r.schedule[i]);

    const std::string first = read_text(cfg.out_dir / "scan_schedule.json");
    run_scan(cfg);
    CHECK(read_text(cfg.out_dir / "scan_schedule.json") == first);
    cfg.seed += 1;
    CHECK_FALSE(run_scan(cfg).schedule == r.schedule);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("parity rows without noise") {
    ExperimentConfig cfg = ExperimentConfig::defaults_for("parity");
    cfg.out_dir = scratch("parity");
    cfg.snr_db = {300.0};
    cfg.frames = 50;
    const auto rows = run_parity(cfg);
    REQUIRE(rows.size() == 1);
    CHECK(rows[0].per_off == 0.0);
    CHECK(rows[0].per_on == 0.0);
    CHECK(parity_from_csv(read_text(cfg.out_dir / "parity.csv")).size() == 1);
    fs::remove_all(cfg.out_dir);
}

TEST_CASE("covert schedule JSON round trip and simulated link") {
    const ExperimentConfig cfg = ExperimentConfig::defaults_for("covert");
    const std::vector<std::uint8_t> msg{0xde, 0xad, 0xbe, 0xef};
    const auto sched = covert_encode(msg, cfg.alphabet);
    const auto back = schedule_from_json(schedule_to_json(sched));
    REQUIRE(back.size() == sched.size());
    for (std::size_t i = 0; i < sched.size(); ++i) {
        CHECK(back[i].taps == sched[i].taps);
        CHECK(back[i].pilot == sched[i].pilot);
        if (!sched[i].pilot) CHECK(back[i].symbol == sched[i].symbol);
    }
    const CsiTraceFile noiseless = simulate_covert_link(sched, cfg, std::nullopt);
    CHECK(covert_decode(noiseless.csi_vectors(), cfg.alphabet, cfg.phy).bytes == msg);
    const CsiTraceFile noisy = simulate_covert_link(sched, cfg, 20.0);
    CHECK(trace_to_json(noisy) == trace_to_json(simulate_covert_link(sched, cfg, 20.0)));
    CHECK(covert_decode(noisy.csi_vectors(), cfg.alphabet, cfg.phy).bytes == msg);
}

TEST_CASE("covert SER golden at 10 dB") {
    // Seeded reference run: default covert config, seed 1, 10^4 symbols.
    const ExperimentConfig cfg = ExperimentConfig::defaults_for("covert");
    const CovertSerResult r = measure_covert_ser(cfg, 10.0, 10000);
    CHECK(r.symbols == 10000);
    CHECK(r.errors == 12);
}
