#pragma once

// Processing chain: windowed FFT + two-tone peak extraction, absolute range
// from the tone frequencies, phase-based relative range with residual video
// phase (RVP) compensation and unwrapping, and the single-tone variant for
// passive point targets.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <complex>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "xpdrsim/constants.hpp"
#include "xpdrsim/fft.hpp"
#include "xpdrsim/scenario.hpp"
#include "xpdrsim/synth.hpp"

namespace xpdrsim {

inline double wrap_pi(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y <= -kPi) y += kTwoPi;
    return y;
}

struct ToneObservation {
    int pulse_index = 0;
    bool valid = false;
    double f1_hz = 0.0, f2_hz = 0.0;       // interpolated peak frequencies
    double phi1_rad = 0.0, phi2_rad = 0.0; // start phases at the nominal gate start
    double snr1_db = -std::numeric_limits<double>::infinity();
    double snr2_db = -std::numeric_limits<double>::infinity();
};

struct DetectOptions {
    double search_halfwidth_hz = 5e6;  // beat budget above each shift
    double snr_threshold_db = 10.0;
    double crop_guard_s = 4e-6;        // covers round-trip delay within the crop
};

namespace detail {

struct CoarsePeak {
    bool found = false;
    double freq_hz = 0.0;
    double snr_db = -std::numeric_limits<double>::infinity();
};

// Highest peak in [f_lo, f_hi] of a power spectrum with bin spacing df.
// On exact magnitude ties the lowest-frequency bin wins. Frequency refined
// by 3-point quadratic interpolation of log magnitude; SNR taken against
// the median in-band power (exponential-noise median correction 1/ln 2).
inline CoarsePeak coarse_peak(std::span<const double> power, double df, double f_lo,
                              double f_hi, double snr_threshold_db) {
    CoarsePeak out;
    const std::size_t k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(f_lo / df)));
    const std::size_t k_hi =
        std::min(power.size() - 1, static_cast<std::size_t>(std::floor(f_hi / df)));
    if (k_lo >= power.size() || k_hi <= k_lo) return out;

    std::size_t k_peak = k_lo;
    for (std::size_t k = k_lo; k <= k_hi; ++k)
        if (power[k] > power[k_peak]) k_peak = k;

    // noise floor: median of in-band bins at least 4 bins away from the peak
    std::vector<double> floor_bins;
    floor_bins.reserve(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const std::size_t dist = k > k_peak ? k - k_peak : k_peak - k;
        if (dist > 4) floor_bins.push_back(power[k]);
    }
    double noise = 0.0;
    if (!floor_bins.empty()) {
        std::nth_element(floor_bins.begin(), floor_bins.begin() + floor_bins.size() / 2,
                         floor_bins.end());
        noise = floor_bins[floor_bins.size() / 2] / std::log(2.0);
    }
    out.snr_db = noise > 0.0 ? lin_to_db(power[k_peak] / noise)
                             : std::numeric_limits<double>::infinity();
    if (out.snr_db < snr_threshold_db) return out;

    double offset = 0.0;
    if (k_peak > 0 && k_peak + 1 < power.size()) {
        const double eps = 1e-300;
        offset = parabolic_offset(std::log(power[k_peak - 1] + eps),
                                  std::log(power[k_peak] + eps),
                                  std::log(power[k_peak + 1] + eps));
    }
    out.found = true;
    out.freq_hz = (static_cast<double>(k_peak) + offset) * df;
    return out;
}

// Same SNR / interpolation treatment as coarse_peak, but with the peak bin
// chosen externally (used by the joint two-tone pair search).
inline CoarsePeak pinned_peak(std::span<const double> power, double df, double f_lo,
                              double f_hi, std::size_t k_peak, double snr_threshold_db) {
    CoarsePeak out;
    const std::size_t k_lo = static_cast<std::size_t>(std::max(0.0, std::ceil(f_lo / df)));
    const std::size_t k_hi =
        std::min(power.size() - 1, static_cast<std::size_t>(std::floor(f_hi / df)));
    if (k_lo >= power.size() || k_hi <= k_lo) return out;

    std::vector<double> floor_bins;
    floor_bins.reserve(k_hi - k_lo + 1);
    for (std::size_t k = k_lo; k <= k_hi; ++k) {
        const std::size_t dist = k > k_peak ? k - k_peak : k_peak - k;
        if (dist > 4) floor_bins.push_back(power[k]);
    }
    double noise = 0.0;
    if (!floor_bins.empty()) {
        std::nth_element(floor_bins.begin(), floor_bins.begin() + floor_bins.size() / 2,
                         floor_bins.end());
        noise = floor_bins[floor_bins.size() / 2] / std::log(2.0);
    }
    out.snr_db = noise > 0.0 ? lin_to_db(power[k_peak] / noise)
                             : std::numeric_limits<double>::infinity();
    if (out.snr_db < snr_threshold_db) return out;

    double offset = 0.0;
    if (k_peak > 0 && k_peak + 1 < power.size()) {
        const double eps = 1e-300;
        offset = parabolic_offset(std::log(power[k_peak - 1] + eps),
                                  std::log(power[k_peak] + eps),
                                  std::log(power[k_peak + 1] + eps));
    }
    out.found = true;
    out.freq_hz = (static_cast<double>(k_peak) + offset) * df;
    return out;
}

struct RefinedTone {
    double freq_hz = 0.0;
    cplx coherent;  // windowed DTFT at freq_hz, phase referenced to segment start
};

// Iterative parabolic maximization of the windowed DTFT magnitude. On a
// clean tone this converges to sub-millihertz accuracy, which the phase
// measurements downstream rely on.
inline RefinedTone refine_tone(std::span<const cplx> x, std::span<const double> w,
                               double sample_rate_hz, double f_init, double df_init,
                               double f_lo, double f_hi) {
    double f = std::clamp(f_init, f_lo, f_hi);
    double df = df_init;
    double mc = std::norm(dtft_at(x, w, f, sample_rate_hz));
    for (int it = 0; it < 80 && df > 1e-7; ++it) {
        const double ml = std::norm(dtft_at(x, w, f - df, sample_rate_hz));
        const double mr = std::norm(dtft_at(x, w, f + df, sample_rate_hz));
        if (ml > mc && ml >= mr) {
            f -= df;
            mc = ml;
            continue;
        }
        if (mr > mc) {
            f += df;
            mc = mr;
            continue;
        }
        const double o = parabolic_offset(ml, mc, mr);
        const double f_new = std::clamp(f + o * df, f_lo, f_hi);
        const double m_new = std::norm(dtft_at(x, w, f_new, sample_rate_hz));
        if (m_new >= mc) {
            f = f_new;
            mc = m_new;
        }
        df *= 0.35;
    }
    RefinedTone out;
    out.freq_hz = f;
    out.coherent = dtft_at(x, w, f, sample_rate_hz);
    return out;
}

// Least-squares complex amplitude of exp(i*2*pi*f*n/fs) over the segment.
inline cplx ls_amplitude(std::span<const cplx> x, double freq_hz, double sample_rate_hz) {
    const double dphi = -kTwoPi * freq_hz / sample_rate_hz;
    const cplx step(std::cos(dphi), std::sin(dphi));
    cplx rot(1.0, 0.0), acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += x[i] * rot;
        rot *= step;
        if ((i & 0x3ff) == 0x3ff) rot /= std::abs(rot);
    }
    return acc / static_cast<double>(x.size());
}

// Phase-slope frequency polish. Magnitude maximization flattens into the
// floating-point floor a few mHz from a peak (the spectrum is locally
// quadratic, so |X|^2 changes only ~1e-15 relative there), while the phase
// difference between the two half-segments stays linear in the frequency
// error. Assumes the error is already well inside one bin.
inline double polish_freq(std::span<const cplx> x, double f_hz, double sample_rate_hz,
                          double f_lo, double f_hi) {
    const std::size_t h = x.size() / 2;
    if (h < 4) return f_hz;
    const double span_s = static_cast<double>(h) / sample_rate_hz;
    for (int it = 0; it < 3; ++it) {
        const cplx a_head = ls_amplitude(x.first(h), f_hz, sample_rate_hz);
        const cplx a_tail = ls_amplitude(x.subspan(h, h), f_hz, sample_rate_hz);
        const double dphi = std::arg(a_tail * std::conj(a_head) *
                                     std::polar(1.0, -kTwoPi * f_hz * span_s));
        f_hz = std::clamp(f_hz + dphi / (kTwoPi * span_s), f_lo, f_hi);
    }
    return f_hz;
}

// Joint least-squares complex amplitudes of two exponentials at f1 and f2.
// Exact for a noiseless two-tone segment, unlike per-tone projections, which
// carry mutual leakage of order 1/(N * df / fs).
inline std::pair<cplx, cplx> joint_ls_amplitudes(std::span<const cplx> x, double f1_hz,
                                                 double f2_hz, double sample_rate_hz) {
    const cplx p1 = ls_amplitude(x, f1_hz, sample_rate_hz);
    const cplx p2 = ls_amplitude(x, f2_hz, sample_rate_hz);
    // normalized cross-Gram <b1,b2>/N of the two basis exponentials
    const double dphi = kTwoPi * (f2_hz - f1_hz) / sample_rate_hz;
    const cplx step(std::cos(dphi), std::sin(dphi));
    cplx rot(1.0, 0.0), g(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        g += rot;
        rot *= step;
        if ((i & 0x3ff) == 0x3ff) rot /= std::abs(rot);
    }
    g /= static_cast<double>(x.size());
    const double det = 1.0 - std::norm(g);
    if (det < 1e-12) return {p1, p2};
    return {(p1 - g * p2) / det, (p2 - std::conj(g) * p1) / det};
}

inline void subtract_tone(std::vector<cplx>& x, cplx amp, double freq_hz,
                          double sample_rate_hz) {
    const double dphi = kTwoPi * freq_hz / sample_rate_hz;
    const cplx step(std::cos(dphi), std::sin(dphi));
    cplx rot(1.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] -= amp * rot;
        rot *= step;
        if ((i & 0x3ff) == 0x3ff) rot /= std::abs(rot);
    }
}

inline std::vector<double> power_spectrum(std::span<const cplx> x, std::span<const double> w,
                                          std::size_t nfft) {
    std::vector<cplx> buf(nfft, cplx(0.0, 0.0));
    for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i] * w[i];
    fft_inplace(buf);
    std::vector<double> p(nfft);
    for (std::size_t i = 0; i < nfft; ++i) p[i] = std::norm(buf[i]);
    return p;
}

}  // namespace detail

// Two-tone extraction on one pulse: crop to the transponder gate, locate the
// peak in each expected band, refine, and measure each tone's start phase
// with the other tone subtracted (the gate is short, so mutual spectral
// leakage would otherwise bias the phases). Phases are back-rotated to the
// nominal gate start, matching the synthesis reference.
inline ToneObservation detect_tones(std::span<const cplx> samples, const RadarParams& radar,
                                    const TransponderParams& xpdr, int pulse_index = 0,
                                    const DetectOptions& opts = {}) {
    ToneObservation obs;
    obs.pulse_index = pulse_index;
    const double fs = radar.sample_rate_hz;
    const TransponderGate gate = transponder_gate(radar, xpdr);
    const std::size_t n_total = samples.size();
    const std::size_t n0 =
        std::min(n_total - 1, static_cast<std::size_t>(std::ceil(gate.start_s * fs)));
    const std::size_t n_gate = static_cast<std::size_t>(std::floor(gate.duration_s * fs));
    const std::size_t crop_len =
        std::min(n_total - n0,
                 n_gate + static_cast<std::size_t>(std::floor(opts.crop_guard_s * fs)));
    if (crop_len < 8 || n_gate < 8) return obs;

    const double s1 = xpdr.shift1_hz, s2 = xpdr.shift2_hz;
    const double sep = std::abs(s2 - s1);

    // coarse stage on the guarded crop
    const std::size_t nfft = next_pow2(2 * crop_len);
    const auto w_crop = hann_window(crop_len);
    const auto power =
        detail::power_spectrum(samples.subspan(n0, crop_len), w_crop, nfft);
    const double df = fs / static_cast<double>(nfft);

    auto band_of = [&](double s) {
        return std::pair<double, double>{s - 0.1 * sep, s + opts.search_halfwidth_hz};
    };
    const auto [lo1, hi1] = band_of(s1);
    const auto [lo2, hi2] = band_of(s2);
    // The tones sit exactly (s2 - s1) apart -- far tighter than a coarse bin
    // -- so search for the bin pair with the highest summed power instead of
    // taking two independent band maxima, which would both latch onto the
    // same tone whenever the beat pushes one tone into the other's band.
    const std::size_t dsep = static_cast<std::size_t>(std::llround(sep / df));
    const std::size_t k1_lo =
        static_cast<std::size_t>(std::max(0.0, std::ceil(lo1 / df)));
    std::size_t k1_hi = static_cast<std::size_t>(std::floor(hi1 / df));
    if (k1_hi + dsep >= power.size()) k1_hi = power.size() - 1 - dsep;
    if (k1_lo >= k1_hi) return obs;
    std::size_t k_best = k1_lo;
    for (std::size_t k = k1_lo; k <= k1_hi; ++k)
        if (power[k] + power[k + dsep] > power[k_best] + power[k_best + dsep]) k_best = k;
    const auto c1 = detail::pinned_peak(power, df, lo1, hi1, k_best, opts.snr_threshold_db);
    const auto c2 =
        detail::pinned_peak(power, df, lo2, hi2, k_best + dsep, opts.snr_threshold_db);
    obs.snr1_db = c1.snr_db;
    obs.snr2_db = c2.snr_db;
    if (!c1.found || !c2.found) return obs;

    // place the gate window at the estimated round-trip delay
    const double beat_est =
        std::max(0.0, 0.5 * ((c1.freq_hz - s1) + (c2.freq_hz - s2)));
    const double tau = beat_est / radar.chirp_slope_hz_per_s();
    // ceil, matching the first sample that can actually contain the echo
    std::size_t g0 = static_cast<std::size_t>(
        std::ceil((gate.start_s + tau) * fs));
    g0 = std::clamp<std::size_t>(g0, n0, n_total - n_gate);
    std::vector<cplx> xg(samples.begin() + static_cast<std::ptrdiff_t>(g0),
                         samples.begin() + static_cast<std::ptrdiff_t>(g0 + n_gate));
    const auto w = hann_window(n_gate);
    const double bin = fs / static_cast<double>(n_gate);

    auto r1 = detail::refine_tone(xg, w, fs, c1.freq_hz, 0.25 * bin, lo1, hi1);
    auto r2 = detail::refine_tone(xg, w, fs, c2.freq_hz, 0.25 * bin, lo2, hi2);

    // mutual cancellation: subtract the joint-LS model of the other tone
    // before re-refining each frequency, then read the start phases from a
    // final joint solve. The downstream weighted phase combination amplifies
    // per-tone phase errors by 1/(1-k), so leakage-level bias is not enough.
    cplx a1, a2;
    std::vector<cplx> x1, x2;
    for (int round = 0; round < 2; ++round) {
        std::tie(a1, a2) = detail::joint_ls_amplitudes(xg, r1.freq_hz, r2.freq_hz, fs);
        x1 = xg;
        detail::subtract_tone(x1, a2, r2.freq_hz, fs);
        r1 = detail::refine_tone(x1, w, fs, r1.freq_hz, 0.05 * bin, lo1, hi1);
        x2 = xg;
        detail::subtract_tone(x2, a1, r1.freq_hz, fs);
        r2 = detail::refine_tone(x2, w, fs, r2.freq_hz, 0.05 * bin, lo2, hi2);
    }
    // phase-slope polish on freshly cleaned segments, past the precision
    // floor of the magnitude search
    for (int round = 0; round < 2; ++round) {
        std::tie(a1, a2) = detail::joint_ls_amplitudes(xg, r1.freq_hz, r2.freq_hz, fs);
        x1 = xg;
        detail::subtract_tone(x1, a2, r2.freq_hz, fs);
        r1.freq_hz = detail::polish_freq(x1, r1.freq_hz, fs, lo1, hi1);
        x2 = xg;
        detail::subtract_tone(x2, a1, r1.freq_hz, fs);
        r2.freq_hz = detail::polish_freq(x2, r2.freq_hz, fs, lo2, hi2);
    }
    std::tie(a1, a2) = detail::joint_ls_amplitudes(xg, r1.freq_hz, r2.freq_hz, fs);

    const double t_rot = static_cast<double>(g0) / fs - gate.start_s;
    obs.f1_hz = r1.freq_hz;
    obs.f2_hz = r2.freq_hz;
    obs.phi1_rad = wrap_pi(std::arg(a1) - kTwoPi * r1.freq_hz * t_rot);
    obs.phi2_rad = wrap_pi(std::arg(a2) - kTwoPi * r2.freq_hz * t_rot);
    obs.valid = std::abs((obs.f2_hz - obs.f1_hz) - (s2 - s1)) <= 0.2 * sep;
    return obs;
}

// Scheme 1: absolute range from the two tone frequencies,
//   R_abs = (c*T/(4*B)) * ((f1 - s1) + (f2 - s2)),
// minus the hardware-delay bias c*tau/2.
inline double estimate_absolute(const ToneObservation& obs, const TransponderParams& xpdr,
                                const RadarParams& radar) {
    const double beat =
        0.5 * ((obs.f1_hz - xpdr.shift1_hz) + (obs.f2_hz - xpdr.shift2_hz));
    const double bias =
        0.5 * kSpeedOfLight * (radar.rx_hardware_delay_s + xpdr.hardware_delay_s);
    return beat * kSpeedOfLight / (2.0 * radar.chirp_slope_hz_per_s()) - bias;
}

// Additive range effect of the RVP term inside the relative scheme:
//   c/(4*pi*f_Rx) * (pi*B/T) * (2*R/c)^2.
inline double rvp_correction_m(double r_abs_m, const RadarParams& radar, double f_rx_hz) {
    const double two_r_over_c = 2.0 * r_abs_m / kSpeedOfLight;
    const double rvp_rad = kPi * radar.chirp_slope_hz_per_s() * two_r_over_c * two_r_over_c;
    return kSpeedOfLight / (4.0 * kPi * f_rx_hz) * rvp_rad;
}

// Absolute range used as the RVP reference: the common clock-drift pull on
// both tones scales with s_k, so it is estimated from the tone separation
// and removed before inverting. Keeps the RVP correction independent of the
// clock state. No hardware-delay subtraction (the synthesized RVP carries
// the delay bias too).
inline double rvp_reference_range_m(const ToneObservation& obs, const TransponderParams& xpdr,
                                    const RadarParams& radar) {
    const double ratio = (obs.f2_hz - obs.f1_hz) / (xpdr.shift2_hz - xpdr.shift1_hz);
    const double beat = 0.5 * ((obs.f1_hz - xpdr.shift1_hz * ratio) +
                               (obs.f2_hz - xpdr.shift2_hz * ratio));
    return std::max(0.0, beat * kSpeedOfLight / (2.0 * radar.chirp_slope_hz_per_s()));
}

struct RelativeOptions {
    bool apply_rvp = true;
    double warn_jump_fraction = 0.4;  // of the ambiguity
};

struct RelativeTrack {
    std::vector<double> r_rel_m;       // NaN where invalid
    std::vector<std::uint8_t> valid;
    double ambiguity_m = 0.0;          // c / (2*f_Rx)
    int ambiguity_warnings = 0;
    bool anchored = false;
};

namespace detail {

// Shared unwrap: phase -> range via `scale`, then inter-pulse jumps reduced
// modulo the ambiguity. Anchors the mean to `anchor_to` when given.
inline RelativeTrack unwrap_relative(std::span<const double> phase_plus_rvp_rad,
                                     std::span<const std::uint8_t> valid, double scale_m_per_rad,
                                     double ambiguity_m, double warn_fraction,
                                     std::span<const double> anchor_to) {
    RelativeTrack track;
    const std::size_t n = phase_plus_rvp_rad.size();
    track.r_rel_m.assign(n, std::numeric_limits<double>::quiet_NaN());
    track.valid.assign(valid.begin(), valid.end());
    track.ambiguity_m = ambiguity_m;

    bool have_prev = false;
    double prev_raw = 0.0, prev_out = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!valid[i]) continue;
        const double raw = scale_m_per_rad * phase_plus_rvp_rad[i];
        if (!have_prev) {
            track.r_rel_m[i] = raw;
        } else {
            const double d = raw - prev_raw;
            const double wraps = std::round(d / ambiguity_m);
            const double step = d - wraps * ambiguity_m;
            if (std::abs(step) > warn_fraction * ambiguity_m) ++track.ambiguity_warnings;
            track.r_rel_m[i] = prev_out + step;
        }
        prev_raw = raw;
        prev_out = track.r_rel_m[i];
        have_prev = true;
    }

    if (!anchor_to.empty()) {
        double sum_ref = 0.0, sum_rel = 0.0;
        std::size_t count = 0;
        for (std::size_t i = 0; i < n && i < anchor_to.size(); ++i) {
            if (!valid[i] || !std::isfinite(anchor_to[i])) continue;
            sum_ref += anchor_to[i];
            sum_rel += track.r_rel_m[i];
            ++count;
        }
        if (count > 0) {
            const double shift = (sum_ref - sum_rel) / static_cast<double>(count);
            for (std::size_t i = 0; i < n; ++i)
                if (valid[i]) track.r_rel_m[i] += shift;
            track.anchored = true;
        }
    }
    return track;
}

}  // namespace detail

// Scheme 2: relative range from the weighted two-tone phase difference
//   Phi = (phi1 - k*phi2) / (1 - k), k = s1/s2,
// with the RVP term restored from the per-pulse absolute range, mapped to
// range via c/(4*pi*f_Rx) and unwrapped over the pulse sequence. Pass the
// absolute track in `anchor_to_abs_m` to anchor the mean (the track is
// otherwise intrinsically relative).
inline RelativeTrack estimate_relative(std::span<const ToneObservation> obs,
                                       const TransponderParams& xpdr, const RadarParams& radar,
                                       const RelativeOptions& opts = {},
                                       std::span<const double> anchor_to_abs_m = {}) {
    const double k = xpdr.shift1_hz / xpdr.shift2_hz;
    const double f_rx = xpdr.rx_center_hz();
    const double scale = kSpeedOfLight / (4.0 * kPi * f_rx);
    const double ambiguity = kSpeedOfLight / (2.0 * f_rx);
    const double slope = radar.chirp_slope_hz_per_s();

    std::vector<double> v(obs.size(), 0.0);
    std::vector<std::uint8_t> valid(obs.size(), false);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs[i].valid) continue;
        valid[i] = true;
        double phi = wrap_pi((obs[i].phi1_rad - k * obs[i].phi2_rad) / (1.0 - k));
        if (opts.apply_rvp) {
            const double r_ref = rvp_reference_range_m(obs[i], xpdr, radar);
            const double trc = 2.0 * r_ref / kSpeedOfLight;
            phi += kPi * slope * trc * trc;
        }
        v[i] = phi;
    }
    return detail::unwrap_relative(v, valid, scale, ambiguity, opts.warn_jump_fraction,
                                   anchor_to_abs_m);
}

// ---------------------------------------------------------------------------
// Passive point target (corner reflector): single tone over the full pulse.

struct PointObservation {
    int pulse_index = 0;
    bool valid = false;
    double f_hz = 0.0;
    double phi_rad = 0.0;  // start phase at the pulse start
    double snr_db = -std::numeric_limits<double>::infinity();
};

inline PointObservation detect_point_tone(std::span<const cplx> samples,
                                          const RadarParams& radar, double band_lo_hz,
                                          double band_hi_hz, double snr_threshold_db = 10.0) {
    PointObservation obs;
    const double fs = radar.sample_rate_hz;
    const std::size_t n = samples.size();
    if (n < 8) return obs;
    const std::size_t nfft = next_pow2(n);
    const auto w = hann_window(n);
    const auto power = detail::power_spectrum(samples, w, nfft);
    const double df = fs / static_cast<double>(nfft);
    const auto c = detail::coarse_peak(power, df, band_lo_hz, band_hi_hz, snr_threshold_db);
    obs.snr_db = c.snr_db;
    if (!c.found) return obs;
    const double bin = fs / static_cast<double>(n);
    const auto r = detail::refine_tone(samples, w, fs, c.freq_hz, 0.25 * bin, band_lo_hz,
                                       band_hi_hz);
    obs.f_hz = r.freq_hz;
    obs.phi_rad = wrap_pi(std::arg(r.coherent));
    obs.valid = true;
    return obs;
}

// Single-tone absolute range: R = f * c*T / (2*B), minus the radar's own
// hardware-delay bias.
inline double estimate_point_absolute(const PointObservation& obs, const RadarParams& radar) {
    return obs.f_hz * kSpeedOfLight / (2.0 * radar.chirp_slope_hz_per_s()) -
           0.5 * kSpeedOfLight * radar.rx_hardware_delay_s;
}

// Relative track from the single-tone phase 4*pi*R*f_c/c with RVP restored;
// ambiguity c/(2*f_c).
inline RelativeTrack estimate_point_relative(std::span<const PointObservation> obs,
                                             const RadarParams& radar,
                                             const RelativeOptions& opts = {},
                                             std::span<const double> anchor_to_abs_m = {}) {
    const double scale = kSpeedOfLight / (4.0 * kPi * radar.carrier_hz);
    const double ambiguity = kSpeedOfLight / (2.0 * radar.carrier_hz);
    const double slope = radar.chirp_slope_hz_per_s();

    std::vector<double> v(obs.size(), 0.0);
    std::vector<std::uint8_t> valid(obs.size(), false);
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!obs[i].valid) continue;
        valid[i] = true;
        double phi = obs[i].phi_rad;
        if (opts.apply_rvp) {
            const double r_ref =
                obs[i].f_hz * kSpeedOfLight / (2.0 * slope);
            const double trc = 2.0 * r_ref / kSpeedOfLight;
            phi += kPi * slope * trc * trc;
        }
        v[i] = phi;
    }
    return detail::unwrap_relative(v, valid, scale, ambiguity, opts.warn_jump_fraction,
                                   anchor_to_abs_m);
}

// ---------------------------------------------------------------------------
// Per-pulse range track (CSV columns per the documented schema).

struct RangeTrack {
    std::vector<int> pulse_index;
    std::vector<double> time_s;
    std::vector<double> truth_m;
    std::vector<double> r_abs_m;
    std::vector<double> r_rel_m;
    std::vector<std::uint8_t> valid;
    std::vector<double> snr1_db;
    std::vector<double> snr2_db;
    double ambiguity_m = 0.0;
};

}  // namespace xpdrsim
