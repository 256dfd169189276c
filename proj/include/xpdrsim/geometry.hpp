#pragma once

// Platform trajectories (stop-and-go: one fixed platform position per pulse)
// and angular responses of transponder antennas and corner-reflector
// assemblies.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "xpdrsim/constants.hpp"
#include "xpdrsim/scenario.hpp"

namespace xpdrsim {

// Ground azimuth in degrees, measured from +y toward +x, wrapped to
// (-180, 180].
inline double wrap_deg(double deg) {
    deg = std::fmod(deg, 360.0);
    if (deg <= -180.0) deg += 360.0;
    if (deg > 180.0) deg -= 360.0;
    return deg;
}

inline double ground_azimuth_deg(const Vec3& from, const Vec3& to) {
    return wrap_deg(std::atan2(to.x - from.x, to.y - from.y) * 180.0 / kPi);
}

struct PulseGeometry {
    int pulse_index = 0;
    double time_s = 0.0;
    Vec3 platform_position;
    std::vector<double> slant_range_m;      // per target
    std::vector<double> look_azimuth_deg;   // per target, as seen from the target
};

// One PulseGeometry per pulse. Targets are 3D positions; by convention
// targets[0] is the transponder, which also serves as the center of a
// circular trajectory. A linear trajectory is centered on the broadside
// point of targets[0]: it runs along x at y = target.y - ground_standoff.
inline std::vector<PulseGeometry> gen_trajectory(const TrajectorySpec& spec, double prf_hz,
                                                 std::int64_t pulse_count,
                                                 const std::vector<Vec3>& targets) {
    validate(spec);
    if (pulse_count < 1) throw std::invalid_argument("pulse_count must be >= 1");
    if (targets.empty()) throw std::invalid_argument("at least one target required");
    const Vec3& center = targets[0];

    if (spec.kind == TrajectoryKind::Linear) {
        const double span = spec.speed_mps * static_cast<double>(pulse_count - 1) / prf_hz;
        if (span > spec.path_length_m)
            throw std::runtime_error("trajectory overrun: pulses exceed path length");
    }

    std::vector<PulseGeometry> out;
    out.reserve(static_cast<std::size_t>(pulse_count));
    const double t_mid = 0.5 * static_cast<double>(pulse_count - 1) / prf_hz;
    for (std::int64_t i = 0; i < pulse_count; ++i) {
        PulseGeometry g;
        g.pulse_index = static_cast<int>(i);
        g.time_s = static_cast<double>(i) / prf_hz;
        if (spec.kind == TrajectoryKind::Linear) {
            g.platform_position = Vec3{center.x + spec.speed_mps * (g.time_s - t_mid),
                                       center.y - spec.ground_standoff_m, spec.altitude_m};
        } else {
            const double theta = spec.angular_rate_rad_s * g.time_s;
            g.platform_position = Vec3{center.x + spec.radius_m * std::sin(theta),
                                       center.y - spec.radius_m * std::cos(theta),
                                       spec.altitude_m};
        }
        g.slant_range_m.reserve(targets.size());
        g.look_azimuth_deg.reserve(targets.size());
        for (const Vec3& tgt : targets) {
            g.slant_range_m.push_back(distance(g.platform_position, tgt));
            g.look_azimuth_deg.push_back(ground_azimuth_deg(tgt, g.platform_position));
        }
        out.push_back(std::move(g));
    }
    return out;
}

// Azimuth gain of the transponder antenna. Horn: Gaussian mainlobe, -3 dB at
// +-hpbw/2 off boresight. Dipole and isotropic: constant in azimuth.
inline double antenna_gain_db(const AntennaPattern& pattern, double off_boresight_deg) {
    switch (pattern.kind) {
        case AntennaKind::Horn: {
            const double u = 2.0 * wrap_deg(off_boresight_deg) / pattern.hpbw_deg;
            return pattern.peak_gain_dbi - 3.0 * u * u;
        }
        case AntennaKind::Dipole:
        case AntennaKind::Isotropic:
        default:
            return pattern.peak_gain_dbi;
    }
}

// Peak RCS of a trihedral corner of edge length a: 4*pi*a^4 / (3*lambda^2).
inline double trihedral_peak_rcs_dbsm(double edge_length_m, double wavelength_m) {
    const double a4 = std::pow(edge_length_m, 4);
    return lin_to_db(4.0 * kPi * a4 / (3.0 * wavelength_m * wavelength_m));
}

inline double corner_peak_rcs_dbsm(const CornerTarget& c, double wavelength_m) {
    if (!std::isnan(c.peak_rcs_dbsm)) return c.peak_rcs_dbsm;
    return trihedral_peak_rcs_dbsm(c.edge_length_m, wavelength_m);
}

inline constexpr double kCornerFloorDb = -60.0;

// Relative angular response of a corner assembly in dB (0 dB at a face
// boresight). Per-face raised-cosine lobe of the configured usable
// halfwidth; outside all lobes the response sits at a deep floor.
inline double corner_response_db(const CornerTarget& c, double look_azimuth_deg,
                                 double /*wavelength_m*/) {
    double best = kCornerFloorDb;
    for (double bore : c.boresight_azimuths_deg) {
        const double d = std::abs(wrap_deg(look_azimuth_deg - bore));
        if (d >= c.usable_halfwidth_deg) continue;
        const double amp = std::cos(0.5 * kPi * d / c.usable_halfwidth_deg);
        const double db = 20.0 * std::log10(std::max(amp, 1e-9));
        best = std::max(best, std::max(db, kCornerFloorDb));
    }
    return best;
}

}  // namespace xpdrsim
