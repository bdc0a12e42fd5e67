#include "memspike/recording.hpp"

#include <bit>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "memspike/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "binary recording format assumes a little-endian host");

namespace memspike {

void Recording::validate() const {
    if (samples.empty()) throw InvalidInput("recording: no samples");
    if (!(fs > 0.0)) throw InvalidInput("recording: sampling rate must be > 0");
    if (ground_truth) {
        for (std::size_t idx : *ground_truth)
            if (idx >= samples.size())
                throw InvalidInput("recording: ground-truth index out of range");
    }
}

bool within_frontend_range(const Recording& rec, double limit) {
    for (double v : rec.samples)
        if (std::abs(v) > limit) return false;
    return true;
}

namespace {

// Parses "# key=value" header lines shared by the text format and the binary
// sidecar. Returns false once a non-comment line is reached.
struct Header {
    std::optional<double> fs;
    std::optional<std::vector<std::size_t>> ground_truth;
};

bool parse_header_line(const std::string& line, Header& hdr, int line_no) {
    if (line.empty() || line[0] != '#') return false;
    std::string body = line.substr(1);
    const auto eq = body.find('=');
    if (eq == std::string::npos) return true;  // free-form comment
    std::string key = body.substr(0, eq);
    std::string value = body.substr(eq + 1);
    // trim
    const auto strip = [](std::string& s) {
        while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.erase(s.begin());
        while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.pop_back();
    };
    strip(key);
    strip(value);
    if (key == "fs_hz") {
        char* end = nullptr;
        double fs = std::strtod(value.c_str(), &end);
        if (end == value.c_str() || *end != '\0' || !(fs > 0.0))
            throw ParseError("bad fs_hz value '" + value + "'", line_no);
        hdr.fs = fs;
    } else if (key == "ground_truth") {
        std::vector<std::size_t> idx;
        std::stringstream ss(value);
        std::string tok;
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            char* end = nullptr;
            const unsigned long long u = std::strtoull(tok.c_str(), &end, 10);
            if (end == tok.c_str() || *end != '\0')
                throw ParseError("bad ground_truth index '" + tok + "'", line_no);
            idx.push_back(static_cast<std::size_t>(u));
        }
        hdr.ground_truth = std::move(idx);
    }
    // unknown "# key=value" lines are ignored
    return true;
}

std::string header_text(const Recording& rec) {
    std::string out = "# fs_hz=" + std::to_string(static_cast<long long>(std::llround(rec.fs))) + "\n";
    if (rec.ground_truth) {
        out += "# ground_truth=";
        for (std::size_t i = 0; i < rec.ground_truth->size(); ++i) {
            if (i) out += ',';
            out += std::to_string((*rec.ground_truth)[i]);
        }
        out += '\n';
    }
    return out;
}

Header read_header_stream(std::istream& in, int& line_no, std::string& pending) {
    Header hdr;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!parse_header_line(line, hdr, line_no)) {
            pending = line;
            break;
        }
    }
    return hdr;
}

}  // namespace

Recording load_recording(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open recording file '" + path + "'", 0);

    int line_no = 0;
    std::string pending;
    Header hdr = read_header_stream(in, line_no, pending);
    if (!hdr.fs) throw ParseError("recording header is missing key 'fs_hz'", line_no);

    Recording rec;
    rec.fs = *hdr.fs;
    rec.ground_truth = hdr.ground_truth;

    auto consume = [&](const std::string& line, int no) {
        if (line.empty()) return;
        char* end = nullptr;
        const double v = std::strtod(line.c_str(), &end);
        while (end && (*end == ' ' || *end == '\t' || *end == '\r')) ++end;
        if (end == line.c_str() || *end != '\0')
            throw ParseError("unparseable sample '" + line + "'", no);
        if (!std::isfinite(v)) throw ParseError("non-finite sample '" + line + "'", no);
        rec.samples.push_back(v);
    };

    if (!pending.empty()) consume(pending, line_no);
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        consume(line, line_no);
    }
    rec.validate();
    return rec;
}

void save_recording(const Recording& rec, const std::string& path) {
    rec.validate();
    std::ofstream out(path);
    if (!out) throw Error("cannot write recording file '" + path + "'");
    out << header_text(rec);
    char buf[40];
    for (double v : rec.samples) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out << buf;
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

Recording load_recording_binary(const std::string& path) {
    std::ifstream meta(path + ".meta");
    if (!meta) throw ParseError("cannot open sidecar file '" + path + ".meta'", 0);
    int line_no = 0;
    std::string pending;
    Header hdr = read_header_stream(meta, line_no, pending);
    if (!hdr.fs) throw ParseError("sidecar is missing key 'fs_hz'", line_no);

    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open recording file '" + path + "'", 0);
    in.seekg(0, std::ios::end);
    const auto bytes = static_cast<std::size_t>(in.tellg());
    in.seekg(0);
    if (bytes % sizeof(float) != 0)
        throw ParseError("binary recording size is not a multiple of 4 bytes", 0);

    std::vector<float> raw(bytes / sizeof(float));
    in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(bytes));
    if (!in) throw ParseError("short read on '" + path + "'", 0);

    Recording rec;
    rec.fs = *hdr.fs;
    rec.ground_truth = hdr.ground_truth;
    rec.samples.reserve(raw.size());
    for (float v : raw) {
        if (!std::isfinite(v)) throw ParseError("non-finite sample in binary recording", 0);
        rec.samples.push_back(static_cast<double>(v));
    }
    rec.validate();
    return rec;
}

void save_recording_binary(const Recording& rec, const std::string& path) {
    rec.validate();
    std::ofstream meta(path + ".meta");
    if (!meta) throw Error("cannot write sidecar file '" + path + ".meta'");
    meta << header_text(rec);

    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write recording file '" + path + "'");
    for (double v : rec.samples) {
        const float f = static_cast<float>(v);
        out.write(reinterpret_cast<const char*>(&f), sizeof f);
    }
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace memspike
