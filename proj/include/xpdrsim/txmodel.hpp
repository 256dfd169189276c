#pragma once

// Behavioral transponder model: active-target RCS from the link budget,
// the parametric IF-filter magnitude (see if_filter_gain_db in scenario.hpp),
// and the shared-clock phase-noise process.

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "xpdrsim/constants.hpp"
#include "xpdrsim/rng.hpp"
#include "xpdrsim/scenario.hpp"

namespace xpdrsim {

// Active-target RCS: sigma = lambda^2 * G_ant^2 * G_amp / (4*pi).
inline double transponder_rcs_dbsm(double antenna_gain_dbi, double chain_gain_db,
                                   double wavelength_m) {
    const double base_dbsm = lin_to_db(wavelength_m * wavelength_m / (4.0 * kPi));
    return base_dbsm + 2.0 * antenna_gain_dbi + chain_gain_db;
}

inline double transponder_rcs_dbsm(const AntennaPattern& antenna, double chain_gain_db,
                                   double wavelength_m) {
    return transponder_rcs_dbsm(antenna.peak_gain_dbi, chain_gain_db, wavelength_m);
}

// Clock phase noise sampled at pulse starts, with an optional linear
// intra-pulse drift slope. The same realization feeds both tones (single
// shared clock); tone k carries (s_k / f_XO) * phi_n.
struct PhaseNoiseTrack {
    std::vector<double> phase_rad;     // phi_n at each pulse start
    std::vector<double> slope_rad_s;   // intra-pulse drift (zeros unless enabled)
};

inline PhaseNoiseTrack gen_phase_noise(const PhaseNoiseSpec& spec,
                                       std::span<const double> pulse_times_s,
                                       std::uint64_t master_seed) {
    const std::size_t n = pulse_times_s.size();
    for (std::size_t i = 1; i < n; ++i)
        if (!(pulse_times_s[i] > pulse_times_s[i - 1]))
            throw std::invalid_argument("pulse times must be strictly increasing");

    PhaseNoiseTrack track;
    track.phase_rad.assign(n, 0.0);
    track.slope_rad_s.assign(n, 0.0);
    if (n == 0 || spec.kind == PhaseNoiseKind::Off || spec.strength_rad2_per_s == 0.0)
        return track;

    auto eng = make_engine(master_seed, 0, spec.seed_label);
    std::normal_distribution<double> gauss(0.0, 1.0);

    if (spec.kind == PhaseNoiseKind::RandomWalk) {
        // phi_n(t_{k+1}) = phi_n(t_k) + N(0, strength * dt); phi_n(0) = 0.
        for (std::size_t i = 1; i < n; ++i) {
            const double dt = pulse_times_s[i] - pulse_times_s[i - 1];
            track.phase_rad[i] =
                track.phase_rad[i - 1] + gauss(eng) * std::sqrt(spec.strength_rad2_per_s * dt);
        }
        if (spec.intra_pulse_drift) {
            // local drift consistent with the inter-pulse increments
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double dt = pulse_times_s[i + 1] - pulse_times_s[i];
                track.slope_rad_s[i] = (track.phase_rad[i + 1] - track.phase_rad[i]) / dt;
            }
            if (n >= 2) track.slope_rad_s[n - 1] = track.slope_rad_s[n - 2];
        }
    } else {  // one-over-f approximation: sum of first-order (OU) processes
        // with log-spaced corner rates; variance matched to strength * 1s.
        constexpr int kStages = 4;
        const double rates[kStages] = {0.3, 3.0, 30.0, 300.0};  // 1/s
        double state[kStages] = {0.0, 0.0, 0.0, 0.0};
        const double sigma2 = spec.strength_rad2_per_s / kStages;
        double prev_t = pulse_times_s[0];
        for (std::size_t i = 1; i < n; ++i) {
            const double dt = pulse_times_s[i] - prev_t;
            prev_t = pulse_times_s[i];
            double sum = 0.0;
            for (int j = 0; j < kStages; ++j) {
                const double a = std::exp(-rates[j] * dt);
                const double q = sigma2 * (1.0 - a * a);
                state[j] = a * state[j] + gauss(eng) * std::sqrt(q);
                sum += state[j];
            }
            track.phase_rad[i] = sum;
        }
        if (spec.intra_pulse_drift) {
            for (std::size_t i = 0; i + 1 < n; ++i) {
                const double dt = pulse_times_s[i + 1] - pulse_times_s[i];
                track.slope_rad_s[i] = (track.phase_rad[i + 1] - track.phase_rad[i]) / dt;
            }
            if (n >= 2) track.slope_rad_s[n - 1] = track.slope_rad_s[n - 2];
        }
    }
    return track;
}

}  // namespace xpdrsim
