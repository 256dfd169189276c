#pragma once

// Configuration types for the simulator: radar waveform, transponder
// frequency plan, targets, trajectory and clutter, plus scenario file I/O
// and the frequency-plan validator.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "xpdrsim/constants.hpp"
#include "xpdrsim/minitoml.hpp"

namespace xpdrsim {

struct ValidationError : std::runtime_error {
    std::string field;
    ValidationError(std::string field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(std::move(field_path)) {}
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;
    friend bool operator==(const Vec3&, const Vec3&) = default;
};

inline double distance(const Vec3& a, const Vec3& b) {
    const double dx = a.x - b.x, dy = a.y - b.y, dz = a.z - b.z;
    return std::sqrt(dx * dx + dy * dy + dz * dz);
}

// ---------------------------------------------------------------------------
// Radar

struct RadarParams {
    double carrier_hz = 9.75e9;
    double chirp_bandwidth_hz = 500e6;
    double pulse_width_s = 450e-6;
    double prf_hz = 1000.0;
    double if_low_hz = 0.0;
    double if_high_hz = 30e6;
    double sample_rate_hz = 62.5e6;  // complex baseband
    double tx_power_dbm = 4.0;
    double antenna_gain_dbi = 20.0;
    double noise_figure_db = 5.0;
    double rx_hardware_delay_s = 0.0;

    double chirp_slope_hz_per_s() const { return chirp_bandwidth_hz / pulse_width_s; }
    double wavelength_m() const { return kSpeedOfLight / carrier_hz; }
    double sweep_start_hz() const { return carrier_hz - 0.5 * chirp_bandwidth_hz; }
    std::size_t samples_per_pulse() const {
        return static_cast<std::size_t>(std::floor(pulse_width_s * sample_rate_hz));
    }
    // beat frequency of a monostatic target at range R
    double beat_hz(double range_m) const {
        return chirp_slope_hz_per_s() * 2.0 * range_m / kSpeedOfLight;
    }
};

inline void validate(const RadarParams& r) {
    if (!(r.carrier_hz > 0.0)) throw ValidationError("radar.carrier_hz", "must be > 0");
    if (!(r.chirp_bandwidth_hz > 0.0) || !std::isfinite(r.chirp_bandwidth_hz))
        throw ValidationError("radar.chirp_bandwidth_hz", "chirp slope B/T must be finite and positive");
    if (!(r.pulse_width_s > 0.0) || !std::isfinite(r.pulse_width_s))
        throw ValidationError("radar.pulse_width_s", "chirp slope B/T must be finite and positive");
    if (!(r.prf_hz > 0.0)) throw ValidationError("radar.prf_hz", "must be > 0");
    if (r.if_low_hz < 0.0 || !(r.if_high_hz > r.if_low_hz))
        throw ValidationError("radar.if_band", "requires high > low >= 0");
    if (r.sample_rate_hz < r.if_high_hz)
        throw ValidationError("radar.sample_rate_hz",
                              "complex baseband rate must cover the IF band high edge");
}

// ---------------------------------------------------------------------------
// Transponder

enum class PhaseNoiseKind { Off, RandomWalk, OneOverF };

struct PhaseNoiseSpec {
    PhaseNoiseKind kind = PhaseNoiseKind::Off;
    double strength_rad2_per_s = 0.0;  // random-walk diffusion
    std::string seed_label = "phase_noise";
    // When set, each pulse also carries a linear intra-pulse phase drift,
    // which shifts the retransmitted tone frequencies.
    bool intra_pulse_drift = false;
};

inline void validate(const PhaseNoiseSpec& p) {
    if (p.strength_rad2_per_s < 0.0)
        throw ValidationError("transponder.phase_noise.strength_rad2_per_s", "must be >= 0");
}

struct IfFilterSpec {
    double center_hz = 480e6;
    double bandwidth_hz = 10e6;
    int rolloff_order = 6;
    int cascade_count = 2;
    double ultimate_rejection_db = 40.0;  // per filter
};

// Parametric bandpass magnitude response, relative to the passband (<= 0 dB
// everywhere). Flat in-band; beyond half-bandwidth it rolls off at
// 20*order dB/decade of offset ratio, saturating at the ultimate rejection.
// Cascaded filters add their dB attenuations.
inline double if_filter_gain_db(const IfFilterSpec& f, double offset_hz) {
    const double half_bw = 0.5 * f.bandwidth_hz;
    const double off = std::abs(offset_hz);
    if (off <= half_bw || half_bw <= 0.0) return 0.0;
    const double atten_one =
        std::min(f.ultimate_rejection_db,
                 20.0 * static_cast<double>(f.rolloff_order) * std::log10(off / half_bw));
    return -atten_one * static_cast<double>(f.cascade_count);
}

inline void validate(const IfFilterSpec& f) {
    if (!(f.bandwidth_hz > 0.0))
        throw ValidationError("transponder.if_filter.bandwidth_hz", "must be > 0");
    if (f.rolloff_order < 1)
        throw ValidationError("transponder.if_filter.rolloff_order", "must be >= 1");
    if (f.cascade_count < 1)
        throw ValidationError("transponder.if_filter.cascade_count", "must be >= 1");
    if (f.ultimate_rejection_db < 0.0)
        throw ValidationError("transponder.if_filter.ultimate_rejection_db", "must be >= 0");
}

enum class AntennaKind { Horn, Dipole, Isotropic };

struct AntennaPattern {
    AntennaKind kind = AntennaKind::Isotropic;
    double peak_gain_dbi = 0.0;
    double hpbw_deg = 55.0;  // horn only
};

inline void validate(const AntennaPattern& a) {
    if (a.kind == AntennaKind::Horn && !(a.hpbw_deg > 0.0))
        throw ValidationError("transponder.antenna.hpbw_deg", "horn requires hpbw_deg > 0");
}

struct TransponderParams {
    double rx_slice_low_hz = 9.615e9;
    double rx_slice_high_hz = 9.625e9;
    double shift1_hz = 20e6;  // post-dechirp tone offset s1
    double shift2_hz = 25e6;  // post-dechirp tone offset s2
    IfFilterSpec if_filter;
    double chain_gain_db = 50.0;
    double xo_freq_hz = 100e6;
    PhaseNoiseSpec phase_noise;
    AntennaPattern antenna;
    double hardware_delay_s = 0.0;

    double slice_width_hz() const { return rx_slice_high_hz - rx_slice_low_hz; }
    double rx_center_hz() const { return 0.5 * (rx_slice_low_hz + rx_slice_high_hz); }
    double min_shift_hz() const { return std::min(std::abs(shift1_hz), std::abs(shift2_hz)); }
};

inline void validate(const TransponderParams& t) {
    if (!(t.rx_slice_high_hz >= t.rx_slice_low_hz))
        throw ValidationError("transponder.rx_slice", "requires high >= low");
    if (t.shift1_hz == t.shift2_hz)
        throw ValidationError("transponder.shifts",
                              "two distinct tones required: shift1_hz must differ from shift2_hz");
    if (!(t.slice_width_hz() < t.min_shift_hz()))
        throw ValidationError("transponder.rx_slice",
                              "receive slice width must be narrower than the smaller frequency shift");
    if (!(t.xo_freq_hz > 0.0))
        throw ValidationError("transponder.xo_freq_hz", "must be > 0");
    validate(t.if_filter);
    validate(t.phase_noise);
    validate(t.antenna);
}

// ---------------------------------------------------------------------------
// Targets, trajectory, clutter

enum class CornerAssembly { Single, QuadBackToBack };

struct CornerTarget {
    Vec3 position;
    double edge_length_m = 0.85;
    CornerAssembly assembly = CornerAssembly::Single;
    std::vector<double> boresight_azimuths_deg = {0.0};
    double usable_halfwidth_deg = 40.0;
    // NaN means: compute from the trihedral formula 4*pi*a^4 / (3*lambda^2).
    double peak_rcs_dbsm = std::numeric_limits<double>::quiet_NaN();
};

inline void validate(const CornerTarget& c, const std::string& path) {
    if (!(c.edge_length_m > 0.0)) throw ValidationError(path + ".edge_length_m", "must be > 0");
    if (!(c.usable_halfwidth_deg > 0.0))
        throw ValidationError(path + ".usable_halfwidth_deg", "must be > 0");
    const std::size_t expected = c.assembly == CornerAssembly::QuadBackToBack ? 4u : 1u;
    if (c.boresight_azimuths_deg.size() != expected)
        throw ValidationError(path + ".boresight_azimuths_deg",
                              "quad assembly has 4 faces, single has 1");
}

enum class TrajectoryKind { Linear, Circular };

struct TrajectorySpec {
    TrajectoryKind kind = TrajectoryKind::Linear;
    // linear
    double path_length_m = 260.0;
    double ground_standoff_m = 280.0;
    double speed_mps = 130.0;
    // circular
    double radius_m = 200.0;
    double angular_rate_rad_s = kPi;
    // shared
    double altitude_m = 100.0;
};

inline void validate(const TrajectorySpec& t) {
    if (!(t.altitude_m > 0.0)) throw ValidationError("trajectory.altitude_m", "must be > 0");
    if (t.kind == TrajectoryKind::Linear) {
        if (!(t.path_length_m > 0.0))
            throw ValidationError("trajectory.path_length_m", "must be > 0");
        if (!(t.speed_mps > 0.0)) throw ValidationError("trajectory.speed_mps", "must be > 0");
    } else {
        if (!(t.radius_m > 0.0)) throw ValidationError("trajectory.radius_m", "must be > 0");
        if (t.angular_rate_rad_s == 0.0)
            throw ValidationError("trajectory.angular_rate_rad_s", "must be nonzero");
    }
}

struct ClutterSpec {
    int scatterer_count = 0;
    double range_extent_m = 600.0;
    double mean_rcs_dbsm = 0.0;  // exponential RCS distribution mean
    std::string seed_label = "clutter";
};

inline void validate(const ClutterSpec& c) {
    if (c.scatterer_count < 0) throw ValidationError("clutter.scatterer_count", "must be >= 0");
    if (c.scatterer_count > 0 && !(c.range_extent_m > 0.0))
        throw ValidationError("clutter.range_extent_m", "must be > 0");
}

// ---------------------------------------------------------------------------
// Scenario

struct Scenario {
    RadarParams radar;
    TransponderParams transponder;
    Vec3 transponder_position{0.0, 280.0, 0.0};
    double transponder_boresight_deg = 180.0;  // antenna pointing, ground azimuth
    std::vector<CornerTarget> corner_targets;
    ClutterSpec clutter;
    TrajectorySpec trajectory;
    std::int64_t pulse_count = 2000;
    std::uint64_t master_seed = 1;
    bool thermal_noise = true;
};

inline void validate(const Scenario& s) {
    validate(s.radar);
    validate(s.transponder);
    validate(s.trajectory);
    validate(s.clutter);
    if (s.pulse_count < 1) throw ValidationError("pulse_count", "must be >= 1");
    for (std::size_t i = 0; i < s.corner_targets.size(); ++i)
        validate(s.corner_targets[i], "corner[" + std::to_string(i) + "]");
    // all target positions distinct
    std::vector<Vec3> pos;
    pos.push_back(s.transponder_position);
    for (const auto& c : s.corner_targets) pos.push_back(c.position);
    for (std::size_t i = 0; i < pos.size(); ++i)
        for (std::size_t j = i + 1; j < pos.size(); ++j)
            if (pos[i] == pos[j])
                throw ValidationError("targets", "all target positions must be distinct");
    // clutter must stay below the transponder shift band in IF frequency
    if (s.clutter.scatterer_count > 0) {
        const double max_clutter_beat = s.radar.beat_hz(s.clutter.range_extent_m * 2.0);
        if (max_clutter_beat >= s.transponder.min_shift_hz())
            throw ValidationError("clutter.range_extent_m",
                                  "clutter beat frequencies must stay below the transponder shift band");
    }
}

// ---------------------------------------------------------------------------
// Frequency-plan validator

struct PlanCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct PlanReport {
    std::vector<PlanCheck> checks;
    bool all_passed() const {
        return std::all_of(checks.begin(), checks.end(),
                           [](const PlanCheck& c) { return c.passed; });
    }
};

// Static feasibility checks on the frequency plan:
//  (a) receive slice width below the smaller shift (leakage separability),
//  (b) both tones inside the radar IF band for all ranges up to max_range_m,
//  (c) IF-filter rejection at one shift-offset exceeds the chain gain plus a
//      stability margin.
inline PlanReport validate_plan(const RadarParams& radar, const TransponderParams& xpdr,
                                double max_range_m, double stability_margin_db = 10.0) {
    PlanReport report;
    std::ostringstream d;

    const double width = xpdr.slice_width_hz();
    const double min_shift = xpdr.min_shift_hz();
    d << "slice width " << width * 1e-6 << " MHz vs min shift " << min_shift * 1e-6 << " MHz";
    report.checks.push_back({"slice-width-below-shift", width < min_shift, d.str()});

    const double beat = radar.beat_hz(max_range_m);
    const double max_shift = std::max(std::abs(xpdr.shift1_hz), std::abs(xpdr.shift2_hz));
    const double top = max_shift + beat;
    const bool in_band = top <= radar.if_high_hz &&
                         std::min(std::abs(xpdr.shift1_hz), std::abs(xpdr.shift2_hz)) >=
                             radar.if_low_hz;
    d.str("");
    d << "highest tone " << top * 1e-6 << " MHz at " << max_range_m
      << " m vs IF band top " << radar.if_high_hz * 1e-6 << " MHz";
    report.checks.push_back({"tones-within-if-band", in_band, d.str()});

    const double rejection = -if_filter_gain_db(xpdr.if_filter, min_shift);
    const double required = xpdr.chain_gain_db + stability_margin_db;
    d.str("");
    d << "rejection " << rejection << " dB at " << min_shift * 1e-6
      << " MHz offset vs required " << required << " dB";
    report.checks.push_back({"filter-rejection-vs-gain", rejection >= required, d.str()});

    return report;
}

// ---------------------------------------------------------------------------
// Scenario file I/O (TOML-syntax; Hz / m / s / dB units throughout)

namespace detail {

inline Vec3 vec3_of(const toml::Table& t, const std::string& key) {
    auto v = t.numbers(key);
    if (v.size() != 3) throw ParseError(key + ": expected 3 elements");
    return Vec3{v[0], v[1], v[2]};
}

}  // namespace detail

inline Scenario scenario_from_toml(const toml::Document& doc) {
    Scenario s;
    const toml::Table& root = doc.tables.count("") ? doc.tables.at("") : toml::Table{};
    s.pulse_count = root.integer_or("pulse_count", s.pulse_count);
    s.master_seed = static_cast<std::uint64_t>(root.integer_or(
        "master_seed", static_cast<std::int64_t>(s.master_seed)));
    s.thermal_noise = root.boolean_or("thermal_noise", s.thermal_noise);

    const toml::Table& r = doc.table("radar");
    s.radar.carrier_hz = r.number("carrier_hz");
    s.radar.chirp_bandwidth_hz = r.number("chirp_bandwidth_hz");
    s.radar.pulse_width_s = r.number("pulse_width_s");
    s.radar.prf_hz = r.number_or("prf_hz", s.radar.prf_hz);
    s.radar.if_low_hz = r.number_or("if_low_hz", s.radar.if_low_hz);
    s.radar.if_high_hz = r.number("if_high_hz");
    s.radar.sample_rate_hz = r.number_or("sample_rate_hz", s.radar.sample_rate_hz);
    s.radar.tx_power_dbm = r.number_or("tx_power_dbm", s.radar.tx_power_dbm);
    s.radar.antenna_gain_dbi = r.number_or("antenna_gain_dbi", s.radar.antenna_gain_dbi);
    s.radar.noise_figure_db = r.number_or("noise_figure_db", s.radar.noise_figure_db);
    s.radar.rx_hardware_delay_s = r.number_or("rx_hardware_delay_s", 0.0);

    const toml::Table& t = doc.table("transponder");
    s.transponder.rx_slice_low_hz = t.number("rx_slice_low_hz");
    s.transponder.rx_slice_high_hz = t.number("rx_slice_high_hz");
    s.transponder.shift1_hz = t.number("shift1_hz");
    s.transponder.shift2_hz = t.number("shift2_hz");
    s.transponder.chain_gain_db = t.number_or("chain_gain_db", s.transponder.chain_gain_db);
    s.transponder.xo_freq_hz = t.number_or("xo_freq_hz", s.transponder.xo_freq_hz);
    s.transponder.hardware_delay_s = t.number_or("hardware_delay_s", 0.0);
    if (t.has("position_m")) s.transponder_position = detail::vec3_of(t, "position_m");
    s.transponder_boresight_deg = t.number_or("boresight_az_deg", s.transponder_boresight_deg);

    if (doc.has_table("transponder.if_filter")) {
        const toml::Table& f = doc.table("transponder.if_filter");
        s.transponder.if_filter.center_hz = f.number_or("center_hz", 480e6);
        s.transponder.if_filter.bandwidth_hz = f.number_or("bandwidth_hz", 10e6);
        s.transponder.if_filter.rolloff_order = static_cast<int>(f.integer_or("rolloff_order", 6));
        s.transponder.if_filter.cascade_count = static_cast<int>(f.integer_or("cascade_count", 2));
        s.transponder.if_filter.ultimate_rejection_db =
            f.number_or("ultimate_rejection_db", 40.0);
    }

    if (doc.has_table("transponder.phase_noise")) {
        const toml::Table& p = doc.table("transponder.phase_noise");
        const std::string kind = p.str_or("kind", "off");
        if (kind == "off")
            s.transponder.phase_noise.kind = PhaseNoiseKind::Off;
        else if (kind == "random-walk")
            s.transponder.phase_noise.kind = PhaseNoiseKind::RandomWalk;
        else if (kind == "one-over-f")
            s.transponder.phase_noise.kind = PhaseNoiseKind::OneOverF;
        else
            throw ParseError("transponder.phase_noise.kind: unknown kind '" + kind + "'");
        s.transponder.phase_noise.strength_rad2_per_s = p.number_or("strength_rad2_per_s", 0.0);
        s.transponder.phase_noise.seed_label = p.str_or("seed_label", "phase_noise");
        s.transponder.phase_noise.intra_pulse_drift = p.boolean_or("intra_pulse_drift", false);
    }

    if (doc.has_table("transponder.antenna")) {
        const toml::Table& a = doc.table("transponder.antenna");
        const std::string kind = a.str_or("kind", "isotropic");
        if (kind == "horn")
            s.transponder.antenna.kind = AntennaKind::Horn;
        else if (kind == "dipole")
            s.transponder.antenna.kind = AntennaKind::Dipole;
        else if (kind == "isotropic")
            s.transponder.antenna.kind = AntennaKind::Isotropic;
        else
            throw ParseError("transponder.antenna.kind: unknown kind '" + kind + "'");
        s.transponder.antenna.peak_gain_dbi = a.number_or("peak_gain_dbi", 0.0);
        s.transponder.antenna.hpbw_deg = a.number_or("hpbw_deg", 55.0);
    }

    const toml::Table& traj = doc.table("trajectory");
    const std::string tk = traj.str("kind");
    if (tk == "linear")
        s.trajectory.kind = TrajectoryKind::Linear;
    else if (tk == "circular")
        s.trajectory.kind = TrajectoryKind::Circular;
    else
        throw ParseError("trajectory.kind: unknown kind '" + tk + "'");
    s.trajectory.altitude_m = traj.number("altitude_m");
    s.trajectory.path_length_m = traj.number_or("path_length_m", s.trajectory.path_length_m);
    s.trajectory.ground_standoff_m =
        traj.number_or("ground_standoff_m", s.trajectory.ground_standoff_m);
    s.trajectory.speed_mps = traj.number_or("speed_mps", s.trajectory.speed_mps);
    s.trajectory.radius_m = traj.number_or("radius_m", s.trajectory.radius_m);
    s.trajectory.angular_rate_rad_s =
        traj.number_or("angular_rate_rad_s", s.trajectory.angular_rate_rad_s);

    if (doc.has_table("clutter")) {
        const toml::Table& c = doc.table("clutter");
        s.clutter.scatterer_count = static_cast<int>(c.integer_or("scatterer_count", 0));
        s.clutter.range_extent_m = c.number_or("range_extent_m", s.clutter.range_extent_m);
        s.clutter.mean_rcs_dbsm = c.number_or("mean_rcs_dbsm", s.clutter.mean_rcs_dbsm);
        s.clutter.seed_label = c.str_or("seed_label", "clutter");
    }

    for (const toml::Table& c : doc.array("corner")) {
        CornerTarget ct;
        ct.position = detail::vec3_of(c, "position_m");
        ct.edge_length_m = c.number_or("edge_length_m", 0.85);
        const std::string asm_kind = c.str_or("assembly", "single");
        if (asm_kind == "single")
            ct.assembly = CornerAssembly::Single;
        else if (asm_kind == "quad-back-to-back")
            ct.assembly = CornerAssembly::QuadBackToBack;
        else
            throw ParseError("corner.assembly: unknown kind '" + asm_kind + "'");
        if (c.has("boresight_azimuths_deg"))
            ct.boresight_azimuths_deg = c.numbers("boresight_azimuths_deg");
        ct.usable_halfwidth_deg = c.number_or("usable_halfwidth_deg", 40.0);
        if (c.has("peak_rcs_dbsm")) ct.peak_rcs_dbsm = c.number("peak_rcs_dbsm");
        s.corner_targets.push_back(std::move(ct));
    }

    return s;
}

// Parses without running scenario validation (used by the plan validator,
// which reports constraint violations instead of rejecting the file).
inline Scenario parse_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    toml::Document doc;
    try {
        doc = toml::parse(in);
    } catch (const std::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return scenario_from_toml(doc);
}

inline Scenario load_scenario(const std::string& path) {
    Scenario s = parse_scenario_file(path);
    validate(s);
    return s;
}

inline toml::Document scenario_to_toml(const Scenario& s) {
    toml::Document doc;
    toml::Table& root = doc.tables[""];
    root.values["pulse_count"] = static_cast<std::int64_t>(s.pulse_count);
    root.values["master_seed"] = static_cast<std::int64_t>(s.master_seed);
    root.values["thermal_noise"] = s.thermal_noise;

    toml::Table& r = doc.tables["radar"];
    r.values["carrier_hz"] = s.radar.carrier_hz;
    r.values["chirp_bandwidth_hz"] = s.radar.chirp_bandwidth_hz;
    r.values["pulse_width_s"] = s.radar.pulse_width_s;
    r.values["prf_hz"] = s.radar.prf_hz;
    r.values["if_low_hz"] = s.radar.if_low_hz;
    r.values["if_high_hz"] = s.radar.if_high_hz;
    r.values["sample_rate_hz"] = s.radar.sample_rate_hz;
    r.values["tx_power_dbm"] = s.radar.tx_power_dbm;
    r.values["antenna_gain_dbi"] = s.radar.antenna_gain_dbi;
    r.values["noise_figure_db"] = s.radar.noise_figure_db;
    r.values["rx_hardware_delay_s"] = s.radar.rx_hardware_delay_s;

    toml::Table& t = doc.tables["transponder"];
    t.values["rx_slice_low_hz"] = s.transponder.rx_slice_low_hz;
    t.values["rx_slice_high_hz"] = s.transponder.rx_slice_high_hz;
    t.values["shift1_hz"] = s.transponder.shift1_hz;
    t.values["shift2_hz"] = s.transponder.shift2_hz;
    t.values["chain_gain_db"] = s.transponder.chain_gain_db;
    t.values["xo_freq_hz"] = s.transponder.xo_freq_hz;
    t.values["hardware_delay_s"] = s.transponder.hardware_delay_s;
    t.values["position_m"] = std::vector<double>{
        s.transponder_position.x, s.transponder_position.y, s.transponder_position.z};
    t.values["boresight_az_deg"] = s.transponder_boresight_deg;

    toml::Table& f = doc.tables["transponder.if_filter"];
    f.values["center_hz"] = s.transponder.if_filter.center_hz;
    f.values["bandwidth_hz"] = s.transponder.if_filter.bandwidth_hz;
    f.values["rolloff_order"] = static_cast<std::int64_t>(s.transponder.if_filter.rolloff_order);
    f.values["cascade_count"] = static_cast<std::int64_t>(s.transponder.if_filter.cascade_count);
    f.values["ultimate_rejection_db"] = s.transponder.if_filter.ultimate_rejection_db;

    toml::Table& p = doc.tables["transponder.phase_noise"];
    switch (s.transponder.phase_noise.kind) {
        case PhaseNoiseKind::Off: p.values["kind"] = std::string("off"); break;
        case PhaseNoiseKind::RandomWalk: p.values["kind"] = std::string("random-walk"); break;
        case PhaseNoiseKind::OneOverF: p.values["kind"] = std::string("one-over-f"); break;
    }
    p.values["strength_rad2_per_s"] = s.transponder.phase_noise.strength_rad2_per_s;
    p.values["seed_label"] = s.transponder.phase_noise.seed_label;
    p.values["intra_pulse_drift"] = s.transponder.phase_noise.intra_pulse_drift;

    toml::Table& a = doc.tables["transponder.antenna"];
    switch (s.transponder.antenna.kind) {
        case AntennaKind::Horn: a.values["kind"] = std::string("horn"); break;
        case AntennaKind::Dipole: a.values["kind"] = std::string("dipole"); break;
        case AntennaKind::Isotropic: a.values["kind"] = std::string("isotropic"); break;
    }
    a.values["peak_gain_dbi"] = s.transponder.antenna.peak_gain_dbi;
    a.values["hpbw_deg"] = s.transponder.antenna.hpbw_deg;

    toml::Table& traj = doc.tables["trajectory"];
    traj.values["kind"] = std::string(
        s.trajectory.kind == TrajectoryKind::Linear ? "linear" : "circular");
    traj.values["altitude_m"] = s.trajectory.altitude_m;
    traj.values["path_length_m"] = s.trajectory.path_length_m;
    traj.values["ground_standoff_m"] = s.trajectory.ground_standoff_m;
    traj.values["speed_mps"] = s.trajectory.speed_mps;
    traj.values["radius_m"] = s.trajectory.radius_m;
    traj.values["angular_rate_rad_s"] = s.trajectory.angular_rate_rad_s;

    toml::Table& c = doc.tables["clutter"];
    c.values["scatterer_count"] = static_cast<std::int64_t>(s.clutter.scatterer_count);
    c.values["range_extent_m"] = s.clutter.range_extent_m;
    c.values["mean_rcs_dbsm"] = s.clutter.mean_rcs_dbsm;
    c.values["seed_label"] = s.clutter.seed_label;

    for (const CornerTarget& ct : s.corner_targets) {
        toml::Table elem;
        elem.values["position_m"] =
            std::vector<double>{ct.position.x, ct.position.y, ct.position.z};
        elem.values["edge_length_m"] = ct.edge_length_m;
        elem.values["assembly"] = std::string(
            ct.assembly == CornerAssembly::Single ? "single" : "quad-back-to-back");
        elem.values["boresight_azimuths_deg"] = ct.boresight_azimuths_deg;
        elem.values["usable_halfwidth_deg"] = ct.usable_halfwidth_deg;
        if (!std::isnan(ct.peak_rcs_dbsm)) elem.values["peak_rcs_dbsm"] = ct.peak_rcs_dbsm;
        doc.table_arrays["corner"].push_back(std::move(elem));
    }
    return doc;
}

inline void save_scenario(const Scenario& s, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write scenario file: " + path);
    toml::write(out, scenario_to_toml(s));
}

}  // namespace xpdrsim
