#pragma once

// Raw-dump file format: little-endian header (magic, version, pulse_count,
// samples_per_pulse, sample_rate) followed by interleaved 32-bit float I/Q
// for every pulse in order.

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xpdrsim/fft.hpp"

namespace xpdrsim {

inline constexpr std::array<char, 8> kDumpMagic = {'X', 'P', 'D', 'R', 'R', 'A', 'W', '1'};
inline constexpr std::uint32_t kDumpVersion = 1;

struct DumpHeader {
    std::uint32_t version = kDumpVersion;
    std::uint32_t pulse_count = 0;
    std::uint32_t samples_per_pulse = 0;
    double sample_rate_hz = 0.0;
};

inline void write_dump(const std::string& path, const DumpHeader& hdr,
                       const std::vector<std::vector<cplx>>& pulses) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write dump file: " + path);
    out.write(kDumpMagic.data(), kDumpMagic.size());
    out.write(reinterpret_cast<const char*>(&hdr.version), sizeof(hdr.version));
    out.write(reinterpret_cast<const char*>(&hdr.pulse_count), sizeof(hdr.pulse_count));
    out.write(reinterpret_cast<const char*>(&hdr.samples_per_pulse),
              sizeof(hdr.samples_per_pulse));
    out.write(reinterpret_cast<const char*>(&hdr.sample_rate_hz), sizeof(hdr.sample_rate_hz));
    std::vector<float> row;
    for (const auto& p : pulses) {
        if (p.size() != hdr.samples_per_pulse)
            throw std::runtime_error("inconsistent samples_per_pulse in dump write");
        row.resize(2 * p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            row[2 * i] = static_cast<float>(p[i].real());
            row[2 * i + 1] = static_cast<float>(p[i].imag());
        }
        out.write(reinterpret_cast<const char*>(row.data()),
                  static_cast<std::streamsize>(row.size() * sizeof(float)));
    }
    if (!out) throw std::runtime_error("short write to dump file: " + path);
}

inline std::vector<std::vector<cplx>> read_dump(const std::string& path, DumpHeader& hdr) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dump file: " + path);
    std::array<char, 8> magic{};
    in.read(magic.data(), magic.size());
    if (!in || magic != kDumpMagic)
        throw std::runtime_error("not a raw dump file: " + path);
    in.read(reinterpret_cast<char*>(&hdr.version), sizeof(hdr.version));
    if (hdr.version != kDumpVersion)
        throw std::runtime_error("unsupported dump format version in " + path);
    in.read(reinterpret_cast<char*>(&hdr.pulse_count), sizeof(hdr.pulse_count));
    in.read(reinterpret_cast<char*>(&hdr.samples_per_pulse), sizeof(hdr.samples_per_pulse));
    in.read(reinterpret_cast<char*>(&hdr.sample_rate_hz), sizeof(hdr.sample_rate_hz));
    if (!in) throw std::runtime_error("truncated dump header in " + path);

    std::vector<std::vector<cplx>> pulses(hdr.pulse_count);
    std::vector<float> row(2 * static_cast<std::size_t>(hdr.samples_per_pulse));
    for (auto& p : pulses) {
        in.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size() * sizeof(float)));
        if (!in) throw std::runtime_error("truncated dump payload in " + path);
        p.resize(hdr.samples_per_pulse);
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] = cplx(row[2 * i], row[2 * i + 1]);
    }
    return pulses;
}

}  // namespace xpdrsim
