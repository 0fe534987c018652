#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "csifuzz/harness.hpp"
#include "json.hpp"

namespace csifuzz {

using nlohmann::json;

namespace {

json complex_to_json(Complex c) { return json::array({c.real(), c.imag()}); }

Complex complex_from_json(const json& j) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw ConfigError("expected a [re, im] pair, got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

json complex_vec_to_json(std::span<const Complex> v) {
    json arr = json::array();
    for (const auto& c : v) arr.push_back(complex_to_json(c));
    return arr;
}

ComplexVec complex_vec_from_json(const json& j) {
    if (!j.is_array()) throw ConfigError("expected an array of [re, im] pairs");
    ComplexVec out;
    out.reserve(j.size());
    for (const auto& e : j) out.push_back(complex_from_json(e));
    return out;
}

json taps_to_json(const FuzzerTaps& t) {
    return {{"c1", complex_to_json(t.c1())}, {"c2", complex_to_json(t.c2())}};
}

FuzzerTaps taps_from_json(const json& j) {
    if (!j.is_object() || !j.contains("c1") || !j.contains("c2"))
        throw ConfigError("taps need \"c1\" and \"c2\" entries");
    try {
        return {complex_from_json(j.at("c1")), complex_from_json(j.at("c2"))};
    } catch (const std::logic_error& e) {
        throw ConfigError(std::string("invalid taps: ") + e.what());
    }
}

json parse_json(const std::string& text, const char* what) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string(what) + ": " + e.what());
    }
}

template <typename T>
T get_as(const json& j, const char* key) {
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config key \"") + key + "\": " + e.what());
    }
}

CirAlphabet alphabet_from(const json& j) {
    if (!j.is_object() || !j.contains("patterns")) throw ConfigError("alphabet needs \"patterns\"");
    CirAlphabet a;
    a.patterns.clear();
    for (const auto& p : j.at("patterns")) a.patterns.push_back(taps_from_json(p));
    if (j.contains("pilot_period")) a.pilot_period = get_as<std::size_t>(j, "pilot_period");
    if (j.contains("d_min")) a.d_min = get_as<double>(j, "d_min");
    a.validate();
    return a;
}

json alphabet_json(const CirAlphabet& a) {
    json patterns = json::array();
    for (const auto& p : a.patterns) patterns.push_back(taps_to_json(p));
    return {{"pilot_period", a.pilot_period}, {"d_min", a.d_min}, {"patterns", patterns}};
}

}  // namespace

// ---------------------------------------------------------------------------

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::error_code ec;
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path(), ec);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << text;
    if (!out) throw IoError("write failed: " + path.string());
}

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string to_hex(std::span<const std::uint8_t> bytes) {
    static const char* digits = "0123456789abcdef";
    std::string s;
    for (auto b : bytes) {
        s.push_back(digits[b >> 4]);
        s.push_back(digits[b & 15]);
    }
    return s;
}

std::vector<std::uint8_t> from_hex(const std::string& text) {
    std::string t = text;
    if (t.rfind("0x", 0) == 0 || t.rfind("0X", 0) == 0) t = t.substr(2);
    if (t.size() % 2 != 0) throw std::invalid_argument("hex string has odd length");
    std::vector<std::uint8_t> out;
    for (std::size_t i = 0; i < t.size(); i += 2) {
        unsigned v = 0;
        const auto res = std::from_chars(t.data() + i, t.data() + i + 2, v, 16);
        if (res.ec != std::errc{} || res.ptr != t.data() + i + 2)
            throw std::invalid_argument("invalid hex string: " + text);
        out.push_back(static_cast<std::uint8_t>(v));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Experiment configuration

ExperimentConfig parse_config(const std::string& json_text, const std::string& experiment) {
    const json j = parse_json(json_text, "config");
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ExperimentConfig cfg = ExperimentConfig::defaults_for(experiment);

    static const char* known[] = {"experiment", "modulation", "coding", "channel", "taps",
                                  "snr_db", "frames", "payload_bytes", "seed", "out_dir",
                                  "fade_subcarrier", "tap_grid", "screen_frames", "tap_range",
                                  "alphabet"};
    for (const auto& [key, _] : j.items())
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ConfigError("unknown config key \"" + key + "\"");

    if (j.contains("experiment")) cfg.experiment = get_as<std::string>(j, "experiment");
    if (j.contains("modulation")) {
        try {
            cfg.phy.modulation = modulation_from_string(get_as<std::string>(j, "modulation"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
    }
    if (j.contains("coding")) {
        const auto c = get_as<std::string>(j, "coding");
        if (c == "conv12") cfg.phy.coding = Coding::Conv12;
        else if (c == "uncoded") cfg.phy.coding = Coding::Uncoded;
        else throw ConfigError("unknown coding \"" + c + "\"");
    }
    if (j.contains("channel")) {
        const json& c = j.at("channel");
        if (!c.is_object()) throw ConfigError("\"channel\" must be an object");
        if (c.contains("cir")) cfg.channel.cir = complex_vec_from_json(c.at("cir"));
        if (c.contains("noise_variance")) cfg.channel.noise_variance = get_as<double>(c, "noise_variance");
        if (c.contains("drift")) cfg.channel.drift = get_as<double>(c, "drift");
    }
    if (j.contains("taps")) cfg.taps = taps_from_json(j.at("taps"));
    if (j.contains("snr_db")) cfg.snr_db = get_as<std::vector<double>>(j, "snr_db");
    if (j.contains("frames")) cfg.frames = get_as<std::size_t>(j, "frames");
    if (j.contains("payload_bytes")) cfg.payload_bytes = get_as<std::size_t>(j, "payload_bytes");
    if (j.contains("seed")) cfg.seed = get_as<std::uint64_t>(j, "seed");
    if (j.contains("out_dir")) cfg.out_dir = get_as<std::string>(j, "out_dir");
    if (j.contains("fade_subcarrier")) cfg.fade_subcarrier = get_as<int>(j, "fade_subcarrier");
    if (j.contains("tap_grid")) cfg.tap_grid = get_as<std::vector<double>>(j, "tap_grid");
    if (j.contains("screen_frames")) cfg.screen_frames = get_as<std::size_t>(j, "screen_frames");
    if (j.contains("tap_range")) {
        const auto r = get_as<std::vector<double>>(j, "tap_range");
        if (r.size() != 2) throw ConfigError("\"tap_range\" must be [lo, hi]");
        cfg.tap_range = {r[0], r[1]};
    }
    if (j.contains("alphabet")) cfg.alphabet = alphabet_from(j.at("alphabet"));
    cfg.validate();
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, const std::string& experiment) {
    return parse_config(read_text(path), experiment);
}

CirAlphabet parse_alphabet(const std::string& json_text) {
    return alphabet_from(parse_json(json_text, "alphabet"));
}

CirAlphabet load_alphabet(const std::filesystem::path& path) { return parse_alphabet(read_text(path)); }

std::string alphabet_to_json(const CirAlphabet& alphabet) { return alphabet_json(alphabet).dump(2) + "\n"; }

// ---------------------------------------------------------------------------
// CSI traces

CsiTraceFile make_trace(const std::string& experiment) {
    CsiTraceFile t;
    t.experiment = experiment;
    const auto& used = PhyConfig::used_subcarriers();
    t.subcarriers.assign(used.begin(), used.end());
    return t;
}

void CsiTraceFile::validate() const {
    if (version != kVersion) throw ConfigError("unsupported CSI trace version " + std::to_string(version));
    for (const auto& r : records)
        if (r.csi.size() != subcarriers.size())
            throw ConfigError("CSI trace record " + std::to_string(r.frame) +
                              " does not match the subcarrier count");
}

std::vector<CsiVector> CsiTraceFile::csi_vectors() const {
    std::vector<CsiVector> out;
    out.reserve(records.size());
    for (const auto& r : records) out.push_back({r.csi, r.frame});
    return out;
}

std::string trace_to_json(const CsiTraceFile& trace) {
    trace.validate();
    json records = json::array();
    for (const auto& r : trace.records)
        records.push_back({{"frame", r.frame}, {"register", r.reg.hex()}, {"csi", complex_vec_to_json(r.csi)}});
    const json j = {{"version", trace.version},
                    {"fft_size", trace.fft_size},
                    {"subcarriers", trace.subcarriers},
                    {"experiment", trace.experiment},
                    {"records", records}};
    return j.dump() + "\n";
}

CsiTraceFile trace_from_json(const std::string& text) {
    const json j = parse_json(text, "CSI trace");
    CsiTraceFile t;
    t.version = get_as<int>(j, "version");
    t.fft_size = get_as<std::size_t>(j, "fft_size");
    t.subcarriers = get_as<std::vector<int>>(j, "subcarriers");
    t.experiment = get_as<std::string>(j, "experiment");
    if (!j.contains("records") || !j.at("records").is_array()) throw ConfigError("CSI trace needs records");
    for (const auto& r : j.at("records")) {
        CsiTraceRecord rec;
        rec.frame = get_as<std::uint64_t>(r, "frame");
        try {
            rec.reg = FuzzerRegister::parse_hex(get_as<std::string>(r, "register"));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(e.what());
        }
        rec.csi = complex_vec_from_json(r.at("csi"));
        t.records.push_back(std::move(rec));
    }
    t.validate();
    return t;
}

void write_trace(const CsiTraceFile& trace, const std::filesystem::path& path) {
    write_text(path, trace_to_json(trace));
}

CsiTraceFile read_trace(const std::filesystem::path& path) { return trace_from_json(read_text(path)); }

std::string frame_to_json(const OfdmFrame& frame) {
    const json j = {{"modulation", to_string(frame.modulation)},
                    {"data_symbols", frame.data_symbols},
                    {"seed", frame.seed},
                    {"payload_bits", frame.payload_bits},
                    {"samples", complex_vec_to_json(frame.samples)}};
    return j.dump() + "\n";
}

// ---------------------------------------------------------------------------
// Covert schedules

std::string schedule_to_json(const std::vector<ScheduledFrame>& schedule) {
    json frames = json::array();
    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const auto& f = schedule[i];
        json e = {{"frame", i}, {"pilot", f.pilot}, {"register", register_for(f.taps).hex()}};
        e.update(taps_to_json(f.taps));
        if (!f.pilot) e["symbol"] = f.symbol;
        frames.push_back(std::move(e));
    }
    return json{{"frames", frames}}.dump(2) + "\n";
}

std::vector<ScheduledFrame> schedule_from_json(const std::string& text) {
    const json j = parse_json(text, "schedule");
    std::vector<ScheduledFrame> out;
    if (!j.contains("frames")) throw ConfigError("schedule needs \"frames\"");
    for (const auto& e : j.at("frames")) {
        ScheduledFrame f;
        f.pilot = get_as<bool>(e, "pilot");
        f.taps = f.pilot ? FuzzerTaps::identity() : taps_from_json(e);
        if (!f.pilot) f.symbol = get_as<std::size_t>(e, "symbol");
        out.push_back(f);
    }
    return out;
}

}  // namespace csifuzz
