#pragma once

// Error metrics and exportable views: moving standard deviation (with
// per-window linear detrend), per-pulse spectrogram matrices, and run
// summaries written as CSV / PGM.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "xpdrsim/constants.hpp"
#include "xpdrsim/estim.hpp"
#include "xpdrsim/fft.hpp"
#include "xpdrsim/synth.hpp"

namespace xpdrsim {

// Sample standard deviation over each trailing length-`window` span of the
// series, after removing a least-squares line per window so that real
// trajectory motion does not inflate the metric. result[i] covers
// [i-window+1, i]; positions whose window touches an invalid pulse are NaN.
inline std::vector<double> moving_std(std::span<const double> series,
                                      std::span<const std::uint8_t> valid, std::size_t window) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> out(series.size(), nan);
    if (window < 2 || series.size() < window) return out;

    const double w = static_cast<double>(window);
    // fixed abscissa 0..window-1; only the moments of y change per window
    const double sx = 0.5 * w * (w - 1.0);
    const double sxx = (w - 1.0) * w * (2.0 * w - 1.0) / 6.0;
    const double det = w * sxx - sx * sx;

    for (std::size_t i = window - 1; i < series.size(); ++i) {
        const std::size_t lo = i + 1 - window;
        bool ok = true;
        for (std::size_t j = lo; j <= i; ++j)
            if (!valid.empty() && !valid[j]) {
                ok = false;
                break;
            }
        if (!ok) continue;
        double sy = 0.0, sxy = 0.0;
        for (std::size_t j = lo; j <= i; ++j) {
            const double y = series[j];
            sy += y;
            sxy += static_cast<double>(j - lo) * y;
        }
        const double b = (w * sxy - sx * sy) / det;   // slope
        const double a = (sy - b * sx) / w;           // intercept
        double ss = 0.0;
        for (std::size_t j = lo; j <= i; ++j) {
            const double r = series[j] - (a + b * static_cast<double>(j - lo));
            ss += r * r;
        }
        out[i] = std::sqrt(ss / (w - 1.0));
    }
    return out;
}

inline std::vector<double> moving_std(std::span<const double> series, std::size_t window) {
    return moving_std(series, {}, window);
}

// ---------------------------------------------------------------------------
// Spectrogram

struct Spectrogram {
    double freq_lo_hz = 0.0;
    double freq_step_hz = 0.0;
    std::size_t cols = 0;
    // row-major pulse x frequency, dB power per sample (noise floor maps to
    // the per-sample noise variance)
    std::vector<double> db;

    double at(std::size_t pulse, std::size_t col) const { return db[pulse * cols + col]; }
    std::size_t rows() const { return cols == 0 ? 0 : db.size() / cols; }
};

// Per-pulse Hann-windowed FFT power, normalized by the window energy so that
// a white noise floor reads as its per-sample variance, clipped to
// [band_lo, band_hi].
inline Spectrogram spectrogram(std::span<const PulseRecord> pulses, std::size_t fft_size,
                               double sample_rate_hz, double band_lo_hz, double band_hi_hz) {
    Spectrogram sg;
    if (pulses.empty()) return sg;
    const std::size_t n = std::min(pulses[0].samples.size(), fft_size);
    const auto w = hann_window(n);
    const double w2 = std::inner_product(w.begin(), w.end(), w.begin(), 0.0);
    const double df = sample_rate_hz / static_cast<double>(fft_size);

    const std::size_t k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(band_lo_hz / df)));
    const std::size_t k_hi = std::min(fft_size - 1, static_cast<std::size_t>(
                                                        std::floor(band_hi_hz / df)));
    if (k_hi < k_lo) return sg;
    sg.freq_lo_hz = static_cast<double>(k_lo) * df;
    sg.freq_step_hz = df;
    sg.cols = k_hi - k_lo + 1;
    sg.db.reserve(pulses.size() * sg.cols);

    std::vector<cplx> buf;
    for (const auto& p : pulses) {
        buf.assign(fft_size, cplx(0.0, 0.0));
        const std::size_t m = std::min(n, p.samples.size());
        for (std::size_t i = 0; i < m; ++i) buf[i] = p.samples[i] * w[i];
        fft_inplace(buf);
        for (std::size_t k = k_lo; k <= k_hi; ++k)
            sg.db.push_back(lin_to_db(std::norm(buf[k]) / w2 + 1e-300));
    }
    return sg;
}

// ---------------------------------------------------------------------------
// Summary statistics

struct GapStats {
    int gap_count = 0;          // runs of invalid pulses
    std::size_t longest_gap = 0;
    std::size_t invalid_total = 0;
};

inline GapStats gap_stats(std::span<const std::uint8_t> valid) {
    GapStats g;
    std::size_t run = 0;
    for (bool v : valid) {
        if (!v) {
            ++g.invalid_total;
            if (++run == 1) ++g.gap_count;
            g.longest_gap = std::max(g.longest_gap, run);
        } else {
            run = 0;
        }
    }
    return g;
}

inline double percentile(std::vector<double> vals, double p) {
    std::erase_if(vals, [](double v) { return !std::isfinite(v); });
    if (vals.empty()) return std::numeric_limits<double>::quiet_NaN();
    std::sort(vals.begin(), vals.end());
    const double idx = p / 100.0 * static_cast<double>(vals.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(std::floor(idx));
    const std::size_t hi = std::min(vals.size() - 1, lo + 1);
    const double frac = idx - static_cast<double>(lo);
    return vals[lo] * (1.0 - frac) + vals[hi] * frac;
}

struct ErrorReport {
    std::vector<double> mstd_abs_m;  // moving std of r_abs, NaN where undefined
    std::vector<double> mstd_rel_m;
    double abs_p50 = 0.0, abs_p90 = 0.0;
    double rel_p50 = 0.0, rel_p90 = 0.0;
    GapStats gaps;
};

inline ErrorReport make_error_report(const RangeTrack& track, std::size_t window = 100) {
    ErrorReport rep;
    rep.mstd_abs_m = moving_std(track.r_abs_m, track.valid, window);
    rep.mstd_rel_m = moving_std(track.r_rel_m, track.valid, window);
    rep.abs_p50 = percentile(rep.mstd_abs_m, 50.0);
    rep.abs_p90 = percentile(rep.mstd_abs_m, 90.0);
    rep.rel_p50 = percentile(rep.mstd_rel_m, 50.0);
    rep.rel_p90 = percentile(rep.mstd_rel_m, 90.0);
    rep.gaps = gap_stats(track.valid);
    return rep;
}

// ---------------------------------------------------------------------------
// File exports

inline void write_track_csv(const RangeTrack& t, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(12);
    out << "pulse_index,time_s,truth_m,r_abs_m,r_rel_m,valid,snr1_db,snr2_db\n";
    for (std::size_t i = 0; i < t.pulse_index.size(); ++i) {
        out << t.pulse_index[i] << ',' << t.time_s[i] << ',' << t.truth_m[i] << ','
            << t.r_abs_m[i] << ',' << t.r_rel_m[i] << ',' << (t.valid[i] ? 1 : 0) << ','
            << t.snr1_db[i] << ',' << t.snr2_db[i] << '\n';
    }
}

inline void write_mstd_csv(const ErrorReport& rep, std::span<const double> time_s,
                           const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(12);
    out << "pulse_index,time_s,mstd_abs_m,mstd_rel_m\n";
    for (std::size_t i = 0; i < rep.mstd_abs_m.size(); ++i) {
        out << i << ',' << (i < time_s.size() ? time_s[i] : 0.0) << ',' << rep.mstd_abs_m[i]
            << ',' << rep.mstd_rel_m[i] << '\n';
    }
}

inline void write_summary_csv(const ErrorReport& rep, const std::string& label,
                              const std::string& path, bool append = false) {
    std::ofstream out(path, append ? std::ios::app : std::ios::out);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(9);
    if (!append)
        out << "track,mstd_abs_p50_m,mstd_abs_p90_m,mstd_rel_p50_m,mstd_rel_p90_m,"
               "gap_count,longest_gap,invalid_total\n";
    out << label << ',' << rep.abs_p50 << ',' << rep.abs_p90 << ',' << rep.rel_p50 << ','
        << rep.rel_p90 << ',' << rep.gaps.gap_count << ',' << rep.gaps.longest_gap << ','
        << rep.gaps.invalid_total << '\n';
}

inline void write_spectrogram_csv(const Spectrogram& sg, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.precision(6);
    out << "# rows: pulses, cols: frequency bins; freq_lo_hz=" << sg.freq_lo_hz
        << " freq_step_hz=" << sg.freq_step_hz << "\n";
    for (std::size_t r = 0; r < sg.rows(); ++r) {
        for (std::size_t c = 0; c < sg.cols; ++c) {
            if (c) out << ',';
            out << sg.at(r, c);
        }
        out << '\n';
    }
}

// 8-bit grayscale PGM spanning [floor_db, peak_db] of the matrix.
inline void write_spectrogram_pgm(const Spectrogram& sg, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : sg.db) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    if (!(hi > lo)) hi = lo + 1.0;
    out << "P5\n" << sg.cols << ' ' << sg.rows() << "\n255\n";
    for (double v : sg.db) {
        const double u = (v - lo) / (hi - lo);
        out.put(static_cast<char>(static_cast<unsigned char>(std::lround(u * 255.0))));
    }
}

}  // namespace xpdrsim
