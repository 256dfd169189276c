// Acceptance gate: one pass/fail line per criterion, nonzero exit if any
// criterion fails. Runs on the bundled scenarios plus programmatic variants.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "xpdrsim/estim.hpp"
#include "xpdrsim/pipeline.hpp"
#include "xpdrsim/report.hpp"
#include "xpdrsim/scenario.hpp"
#include "xpdrsim/synth.hpp"

using namespace xpdrsim;

namespace {

const std::string kScenarioDir = XPDRSIM_SCENARIO_DIR;
int g_failures = 0;

void report(int idx, const char* name, bool pass, const std::string& detail) {
    std::printf("criterion %d [%s] %s — %s\n", idx, pass ? "PASS" : "FAIL", name,
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Scenario noiseless_linear(std::int64_t pulses) {
    Scenario s = load_scenario(kScenarioDir + "/linear_pass.scenario");
    s.thermal_noise = false;
    s.clutter.scatterer_count = 0;
    s.corner_targets.clear();
    s.transponder.phase_noise = {};
    s.transponder.hardware_delay_s = 0.0;
    s.radar.rx_hardware_delay_s = 0.0;
    s.pulse_count = pulses;
    return s;
}

double mean_of(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    return m / static_cast<double>(v.size());
}

double p50_mstd(const std::vector<double>& series,
                const std::vector<std::uint8_t>& valid, std::size_t window) {
    return percentile(moving_std(series, valid, window), 50.0);
}

// ---------------------------------------------------------------------------

void criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    Scenario s = noiseless_linear(2000);
    const SimResult sim = simulate_run(s, 4);
    const EstimationResult est = run_estimation(sim, s, 4);
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    const RangeTrack& t = est.transponder;
    double abs_err = 0.0, rel_err = 0.0;
    bool all_valid = true;
    const double m_rel = mean_of(t.r_rel_m), m_truth = mean_of(t.truth_m);
    for (std::size_t i = 0; i < t.truth_m.size(); ++i) {
        all_valid = all_valid && t.valid[i];
        abs_err = std::max(abs_err, std::abs(t.r_abs_m[i] - t.truth_m[i]));
        rel_err = std::max(rel_err,
                           std::abs((t.r_rel_m[i] - m_rel) - (t.truth_m[i] - m_truth)));
    }
    const bool pass = all_valid && abs_err <= 0.5 && rel_err <= 1e-4 && secs < 60.0;
    report(1, "noiseless round-trip identity", pass,
           fmt("max |R_abs-truth| %.3g m (<=0.5), max scheme-2 variation error %.3g m "
               "(<=1e-4), %.1f s for 2000 pulses (<60)",
               abs_err, rel_err, secs));
}

void criterion2() {
    const std::int64_t n = 400;
    Scenario clean = noiseless_linear(n);
    Scenario noisy = clean;
    noisy.transponder.phase_noise.kind = PhaseNoiseKind::RandomWalk;
    noisy.transponder.phase_noise.strength_rad2_per_s = 1.0e5;
    noisy.transponder.phase_noise.intra_pulse_drift = true;

    EstimationOptions opts;
    opts.anchor_to_absolute = false;  // compare the intrinsic relative tracks

    const SimResult sim_c = simulate_run(clean, 4);
    const SimResult sim_n = simulate_run(noisy, 4);
    const EstimationResult est_c = run_estimation(sim_c, clean, 4, opts);
    const EstimationResult est_n = run_estimation(sim_n, noisy, 4, opts);

    double excursion = 0.0;
    for (double p : sim_n.phase_noise.phase_rad) excursion = std::max(excursion, std::abs(p));

    const auto& rc = est_c.transponder.r_rel_m;
    const auto& rn = est_n.transponder.r_rel_m;
    const double mc = mean_of(rc), mn = mean_of(rn);
    double rel_diff = 0.0;
    bool all_valid = true;
    for (std::size_t i = 0; i < rc.size(); ++i) {
        all_valid = all_valid && est_c.transponder.valid[i] && est_n.transponder.valid[i];
        rel_diff = std::max(rel_diff, std::abs((rn[i] - mn) - (rc[i] - mc)));
    }

    const double mstd_c = p50_mstd(est_c.transponder.r_abs_m, est_c.transponder.valid, 100);
    const double mstd_n = p50_mstd(est_n.transponder.r_abs_m, est_n.transponder.valid, 100);
    const double ratio = mstd_c > 0.0 ? mstd_n / mstd_c
                                      : std::numeric_limits<double>::infinity();

    const bool pass = all_valid && excursion >= 100.0 && rel_diff <= 1e-9 && ratio >= 10.0;
    report(2, "phase-noise cancellation", pass,
           fmt("phi_n excursion %.0f rad (>=100), scheme-2 per-pulse diff %.3g m (<=1e-9), "
               "scheme-1 moving-std degradation %.3gx (>=10)",
               excursion, rel_diff, ratio));
}

void criterion3() {
    // fixed range, transponder echo only
    Scenario s = noiseless_linear(1);
    std::vector<ToneObservation> obs;
    for (int i = 0; i < 4; ++i) {
        std::vector<cplx> acc(s.radar.samples_per_pulse(), cplx(0.0, 0.0));
        synth_transponder_echo(acc, s.radar, s.transponder, 280.0, 180.0,
                               s.transponder_boresight_deg, 0.0, 0.0);
        obs.push_back(detect_tones(acc, s.radar, s.transponder, i));
    }
    RelativeOptions on, off;
    off.apply_rvp = false;
    const RelativeTrack a = estimate_relative(obs, s.transponder, s.radar, on);
    const RelativeTrack b = estimate_relative(obs, s.transponder, s.radar, off);
    const double shift_mm = (a.r_rel_m[0] - b.r_rel_m[0]) * 1e3;
    const bool pass = obs[0].valid && std::abs(shift_mm - 29.7) <= 1.0;
    report(3, "RVP compensation magnitude", pass,
           fmt("disabling the RVP term shifts R_rel by %.2f mm at 280 m (29.7 +- 1)",
               shift_mm));
}

void criterion4() {
    Scenario s = load_scenario(kScenarioDir + "/linear_pass.scenario");
    s.pulse_count = 1200;
    s.clutter.scatterer_count = 0;      // isolate the thermal-SNR calibration
    s.corner_targets.resize(1);
    const SimResult sim = simulate_run(s, 4);
    const EstimationResult est = run_estimation(sim, s, 4);

    const double x1 = p50_mstd(est.transponder.r_abs_m, est.transponder.valid, 100);
    const double x2 = p50_mstd(est.transponder.r_rel_m, est.transponder.valid, 100);
    const double c1 = p50_mstd(est.corners[0].r_abs_m, est.corners[0].valid, 100);
    const double ratio = x1 / x2;

    const bool pass = x1 >= 0.1 && x1 <= 0.4 && x2 <= 5e-3 && ratio >= 40.0 && c1 < x1;
    report(4, "precision ordering", pass,
           fmt("transponder scheme-1 %.0f mm (~200), scheme-2 %.2f mm (<=5), "
               "ratio %.0fx (>=40), corner scheme-1 %.1f mm < transponder",
               x1 * 1e3, x2 * 1e3, ratio, c1 * 1e3));
}

void criterion5() {
    Scenario s = load_scenario(kScenarioDir + "/circular_orbit.scenario");
    const SimResult sim = simulate_run(s, 4);
    const EstimationResult est = run_estimation(sim, s, 4);

    bool xpdr_all_valid = true;
    for (auto v : est.transponder.valid) xpdr_all_valid = xpdr_all_valid && v;

    // corner gaps must cover the inter-face null azimuths
    const auto& cv = est.corners[0].valid;
    const GapStats gaps = gap_stats(cv);
    const std::vector<double> nulls{10.0, 100.0, 190.0, 280.0};
    int nulls_in_gaps = 0;
    for (double null : nulls) {
        bool covered = false;
        for (std::size_t i = 0; i < cv.size(); ++i) {
            if (cv[i]) continue;
            const double az = sim.geometry[i].look_azimuth_deg[1];
            if (std::abs(wrap_deg(az - null)) < 2.0) covered = true;
        }
        if (covered) ++nulls_in_gaps;
    }

    // transponder SNR flat over azimuth: 36 bins of mean per-pulse SNR
    constexpr int kBins = 36;
    double sum[kBins] = {}, cnt[kBins] = {};
    for (std::size_t i = 0; i < est.transponder.snr1_db.size(); ++i) {
        const double az = sim.geometry[i].look_azimuth_deg[0];
        int b = static_cast<int>(std::floor((az + 180.0) / 10.0));
        b = std::min(std::max(b, 0), kBins - 1);
        sum[b] += est.transponder.snr1_db[i];
        cnt[b] += 1.0;
    }
    double lo = 1e9, hi = -1e9;
    for (int b = 0; b < kBins; ++b) {
        if (cnt[b] == 0.0) continue;
        const double m = sum[b] / cnt[b];
        lo = std::min(lo, m);
        hi = std::max(hi, m);
    }
    const double snr_spread = hi - lo;

    const bool pass = xpdr_all_valid && gaps.gap_count >= 2 && nulls_in_gaps == 4 &&
                      snr_spread <= 1.0;
    report(5, "omnidirectionality", pass,
           fmt("transponder %s over 360 deg, corner gaps %d (>=2) covering %d/4 nulls, "
               "SNR spread %.2f dB (<=1)",
               xpdr_all_valid ? "100%% valid" : "NOT gap-free", gaps.gap_count,
               nulls_in_gaps, snr_spread));
}

void criterion6() {
    const Scenario s = load_scenario(kScenarioDir + "/linear_pass.scenario");

    const PlanReport ok = validate_plan(s.radar, s.transponder, 400.0);

    TransponderParams wide = s.transponder;
    wide.rx_slice_high_hz = wide.rx_slice_low_hz + 25e6;
    const PlanReport wide_rep = validate_plan(s.radar, wide, 400.0);
    bool a_named = false;
    for (const auto& c : wide_rep.checks)
        if (c.name == "slice-width-below-shift" && !c.passed) a_named = true;

    const PlanReport far_rep = validate_plan(s.radar, s.transponder, 1500.0);
    bool b_named = false;
    for (const auto& c : far_rep.checks)
        if (c.name == "tones-within-if-band" && !c.passed) b_named = true;

    const bool pass = ok.all_passed() && a_named && b_named;
    report(6, "plan validator", pass,
           fmt("reference plan %s; 25 MHz slice %s check (a); 1500 m range %s check (b)",
               ok.all_passed() ? "passes" : "FAILS",
               a_named ? "fails" : "does not fail", b_named ? "fails" : "does not fail"));
}

void criterion7() {
    // The printed closed form uses the prefactor c*T/(2*B); applied to tones
    // synthesized from the phase model it returns twice the true range. The
    // implemented inversion uses c*T/(4*B). This test pins both facts.
    Scenario s = noiseless_linear(1);
    std::vector<cplx> acc(s.radar.samples_per_pulse(), cplx(0.0, 0.0));
    synth_transponder_echo(acc, s.radar, s.transponder, 280.0, 180.0,
                           s.transponder_boresight_deg, 0.0, 0.0);
    const ToneObservation obs = detect_tones(acc, s.radar, s.transponder);

    const double sum_beats = (obs.f1_hz - s.transponder.shift1_hz) +
                             (obs.f2_hz - s.transponder.shift2_hz);
    const double slope = s.radar.chirp_slope_hz_per_s();
    const double r_printed = kSpeedOfLight / (2.0 * slope) * sum_beats;  // c*T/(2B)
    const double r_impl = estimate_absolute(obs, s.transponder, s.radar);
    const double printed_ratio = r_printed / 280.0;
    const double impl_ratio = r_impl / 280.0;

    const bool pass = obs.valid && std::abs(printed_ratio - 2.0) <= 1e-6 &&
                      std::abs(impl_ratio - 1.0) <= 1e-6;
    report(7, "closed-form prefactor regression", pass,
           fmt("printed cT/(2B) prefactor yields %.9fx true range (2.0 +- 1e-6); "
               "implemented cT/(4B) yields %.9fx",
               printed_ratio, impl_ratio));
}

void criterion8() {
    Scenario s = noiseless_linear(1);
    const TransponderParams& x = s.transponder;
    const double f_rx = x.rx_center_hz();
    const double amb = kSpeedOfLight / (2.0 * f_rx);
    const double slope = s.radar.chirp_slope_hz_per_s();

    // exact phase-level observations per the two-tone phase model
    auto obs_of = [&](double r) {
        ToneObservation o;
        o.valid = true;
        const double trc = 2.0 * r / kSpeedOfLight;
        const double rvp = kPi * slope * trc * trc;
        o.f1_hz = x.shift1_hz + slope * trc;
        o.f2_hz = x.shift2_hz + slope * trc;
        o.phi1_rad = wrap_pi(kTwoPi * (2.0 * f_rx + x.shift1_hz) * r / kSpeedOfLight - rvp);
        o.phi2_rad = wrap_pi(kTwoPi * (2.0 * f_rx + x.shift2_hz) * r / kSpeedOfLight - rvp);
        return o;
    };

    std::mt19937_64 rng(2026);
    std::uniform_real_distribution<double> r0(150.0, 450.0);
    std::uniform_real_distribution<double> step(-0.39 * amb, 0.39 * amb);

    int ok_tracks = 0;
    double worst = 0.0;
    const int kTracks = 100, kPulses = 300;
    for (int trial = 0; trial < kTracks; ++trial) {
        std::vector<double> truth(kPulses);
        truth[0] = r0(rng);
        for (int i = 1; i < kPulses; ++i) truth[i] = truth[i - 1] + step(rng);
        std::vector<ToneObservation> obs;
        for (double r : truth) obs.push_back(obs_of(r));
        const RelativeTrack t = estimate_relative(obs, x, s.radar);
        const double c0 = truth[0] - t.r_rel_m[0];
        double err = 0.0;
        for (int i = 0; i < kPulses; ++i)
            err = std::max(err, std::abs(t.r_rel_m[i] + c0 - truth[i]));
        worst = std::max(worst, err);
        if (t.ambiguity_warnings == 0 && err <= 1e-9) ++ok_tracks;
    }

    // adversarial: one step beyond 0.4 * ambiguity must raise the warning
    std::vector<ToneObservation> bad{obs_of(280.0), obs_of(280.0 + 0.45 * amb)};
    const RelativeTrack tb = estimate_relative(bad, x, s.radar);

    const bool pass = ok_tracks == kTracks && tb.ambiguity_warnings >= 1;
    report(8, "unwrap property suite", pass,
           fmt("%d/100 random smooth trajectories reconstructed exactly "
               "(worst error %.2g m); adversarial step warnings: %d (>=1)",
               ok_tracks, worst, tb.ambiguity_warnings));
}

}  // namespace

int main() {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    if (g_failures > 0) {
        std::printf("%d criterion(s) failed\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
