#pragma once

// CSV emission (RFC-4180 style, '#' comment header) and run manifests.
// Output is fully deterministic: fixed numeric formatting, no timestamps,
// and a manifest hash in every header so identical runs produce identical
// bytes.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "cmt/errors.hpp"

namespace cmt {

struct RunManifest {
    std::string command;
    std::string config_path;
    std::string overrides;  // canonical "key=value key=value" string
    std::string output_path;
    unsigned seed = 0;

    std::string to_string() const {
        return "command=" + command + " config=" + config_path +
               (overrides.empty() ? "" : " " + overrides) + " out=" + output_path +
               " seed=" + std::to_string(seed);
    }
};

/// FNV-1a 64-bit, hex-encoded; stable fingerprint for manifest lines.
inline std::string fnv1a_hex(const std::string& text) {
    std::uint64_t hash = 1469598103934665603ull;
    for (const unsigned char c : text) {
        hash ^= c;
        hash *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

inline std::string format_number(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", value);
    return buf;
}

class CsvWriter {
public:
    CsvWriter(const std::string& path, const RunManifest& manifest) : out_(path) {
        if (!out_) throw config_error("cannot open output file: " + path);
        const std::string line = manifest.to_string();
        out_ << "# manifest: " << line << "\n";
        out_ << "# manifest_hash: " << fnv1a_hex(line) << "\n";
    }

    void comment(const std::string& text) { out_ << "# " << text << "\n"; }

    void header(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i)
            out_ << (i ? "," : "") << columns[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << format_number(values[i]);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

struct PsdSample {
    double freq_hz = 0.0;
    double psd_w_per_hz = 0.0;
};

/// Measured-PSD trace: strict two-column format "freq_hz,psd_w_per_hz".
inline std::vector<PsdSample> read_psd_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw config_error("cannot open PSD file: " + path);
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    std::vector<PsdSample> samples;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        if (!header_seen) {
            if (line != "freq_hz,psd_w_per_hz")
                throw config_error(path + ":" + std::to_string(line_no) +
                                   ": expected header 'freq_hz,psd_w_per_hz'");
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw config_error(path + ":" + std::to_string(line_no) + ": expected two columns");
        try {
            PsdSample sample;
            sample.freq_hz = std::stod(line.substr(0, comma));
            sample.psd_w_per_hz = std::stod(line.substr(comma + 1));
            samples.push_back(sample);
        } catch (const std::exception&) {
            throw config_error(path + ":" + std::to_string(line_no) + ": malformed number");
        }
    }
    if (!header_seen) throw config_error(path + ": missing header line");
    return samples;
}

}  // namespace cmt
