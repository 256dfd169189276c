// Command-line driver: scenario -> synthesis -> estimation -> reports.
//
// Exit codes: 0 success, 1 validation/check failure, 2 input error.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "xpdrsim/dump_io.hpp"
#include "xpdrsim/parallel.hpp"
#include "xpdrsim/pipeline.hpp"
#include "xpdrsim/report.hpp"
#include "xpdrsim/scenario.hpp"
#include "xpdrsim/synth.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr const char* kToolVersion = "0.1.0";

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string file_hash(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return fnv1a_hex(buf.str());
}

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> cols;  // column-major
};

CsvTable read_csv(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw std::runtime_error("cannot open " + p.string());
    CsvTable t;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + p.string());
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) t.header.push_back(cell);
    t.cols.resize(t.header.size());
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::stringstream ls(line);
        std::size_t c = 0;
        while (std::getline(ls, cell, ',') && c < t.cols.size())
            t.cols[c++].push_back(std::stod(cell));
    }
    return t;
}

// --- simulate -------------------------------------------------------------

struct CommonOpts {
    std::string scenario_path;
    std::string out_dir;
    std::int64_t seed = -1;
    std::int64_t pulses = -1;
    int threads = 0;  // 0: default_thread_count()
};

xpdrsim::Scenario load_effective_scenario(const CommonOpts& o) {
    xpdrsim::Scenario sc = xpdrsim::load_scenario(o.scenario_path);
    if (o.seed >= 0) sc.master_seed = static_cast<std::uint64_t>(o.seed);
    if (o.pulses > 0) sc.pulse_count = o.pulses;
    return sc;
}

void write_truth_csv(const xpdrsim::SimResult& sim, const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(12);
    const std::size_t n_targets =
        sim.geometry.empty() ? 0 : sim.geometry[0].slant_range_m.size();
    out << "pulse_index,time_s,pos_x_m,pos_y_m,pos_z_m";
    for (std::size_t t = 0; t < n_targets; ++t)
        out << ",truth_" << t << "_m,look_az_" << t << "_deg";
    out << '\n';
    for (const auto& g : sim.geometry) {
        out << g.pulse_index << ',' << g.time_s << ',' << g.platform_position.x << ','
            << g.platform_position.y << ',' << g.platform_position.z;
        for (std::size_t t = 0; t < n_targets; ++t)
            out << ',' << g.slant_range_m[t] << ',' << g.look_azimuth_deg[t];
        out << '\n';
    }
}

int cmd_simulate(const CommonOpts& o) {
    const xpdrsim::Scenario sc = load_effective_scenario(o);
    const int threads = o.threads > 0 ? o.threads : xpdrsim::default_thread_count();

    fs::create_directories(o.out_dir);
    const fs::path out(o.out_dir);

    const xpdrsim::SimResult sim = xpdrsim::simulate_run(sc, threads);

    xpdrsim::DumpHeader hdr;
    hdr.pulse_count = static_cast<std::uint32_t>(sim.pulses.size());
    hdr.samples_per_pulse = static_cast<std::uint32_t>(sc.radar.samples_per_pulse());
    hdr.sample_rate_hz = sc.radar.sample_rate_hz;
    std::vector<std::vector<xpdrsim::cplx>> raw;
    raw.reserve(sim.pulses.size());
    for (const auto& p : sim.pulses) raw.push_back(p.samples);
    xpdrsim::write_dump((out / "dump.bin").string(), hdr, raw);

    write_truth_csv(sim, out / "truth.csv");
    xpdrsim::save_scenario(sc, (out / "scenario.scenario").string());

    json manifest;
    manifest["tool_version"] = kToolVersion;
    manifest["scenario_source"] = o.scenario_path;
    manifest["scenario_hash"] = file_hash(o.scenario_path);
    manifest["master_seed"] = sc.master_seed;
    manifest["pulse_count"] = sc.pulse_count;
    manifest["outputs"] = {"dump.bin", "truth.csv", "scenario.scenario"};
    manifest["output_hashes"] = {{"dump.bin", file_hash(out / "dump.bin")},
                                 {"truth.csv", file_hash(out / "truth.csv")}};
    std::ofstream mf(out / "manifest.json");
    mf << manifest.dump(2) << '\n';

    std::cout << "simulated " << sim.pulses.size() << " pulses -> " << o.out_dir << '\n';
    return 0;
}

// --- estimate ---------------------------------------------------------------

int cmd_estimate(const std::string& run_dir, std::string out_dir, int threads_flag) {
    const fs::path run(run_dir);
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir);
    const fs::path out(out_dir);
    if (!fs::exists(run / "manifest.json") || !fs::exists(run / "dump.bin"))
        throw xpdrsim::ParseError("run directory missing manifest.json or dump.bin: " + run_dir);

    const xpdrsim::Scenario sc = xpdrsim::load_scenario((run / "scenario.scenario").string());
    const int threads = threads_flag > 0 ? threads_flag : xpdrsim::default_thread_count();

    xpdrsim::DumpHeader hdr;
    const auto raw = xpdrsim::read_dump((run / "dump.bin").string(), hdr);

    const CsvTable truth_csv = read_csv(run / "truth.csv");
    const std::vector<double>& times = truth_csv.cols.at(1);
    std::vector<std::vector<double>> truth;
    for (std::size_t c = 0; c < truth_csv.header.size(); ++c)
        if (truth_csv.header[c].rfind("truth_", 0) == 0) truth.push_back(truth_csv.cols[c]);
    if (truth.empty() || times.size() != raw.size())
        throw xpdrsim::ParseError("truth.csv does not match dump.bin pulse count");

    auto pulse = [&raw](std::size_t i) -> std::span<const xpdrsim::cplx> { return raw[i]; };
    const xpdrsim::EstimationResult est =
        xpdrsim::run_estimation(pulse, raw.size(), times, truth, sc, threads);

    xpdrsim::write_track_csv(est.transponder, (out / "track.csv").string());
    for (std::size_t i = 0; i < est.corners.size(); ++i)
        xpdrsim::write_track_csv(est.corners[i],
                                 (out / ("corner_" + std::to_string(i) + ".csv")).string());

    const xpdrsim::ErrorReport rep = xpdrsim::make_error_report(est.transponder);
    xpdrsim::write_mstd_csv(rep, est.transponder.time_s, (out / "mstd.csv").string());
    xpdrsim::write_summary_csv(rep, "transponder", (out / "report.csv").string());
    for (std::size_t i = 0; i < est.corners.size(); ++i)
        xpdrsim::write_summary_csv(xpdrsim::make_error_report(est.corners[i]),
                                   "corner_" + std::to_string(i),
                                   (out / "report.csv").string(), /*append=*/true);

    std::vector<xpdrsim::PulseRecord> recs(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        recs[i].pulse_index = static_cast<int>(i);
        recs[i].samples = raw[i];
    }
    const xpdrsim::Spectrogram sg =
        xpdrsim::spectrogram(recs, 16384, hdr.sample_rate_hz, sc.radar.if_low_hz,
                             sc.radar.if_high_hz);
    xpdrsim::write_spectrogram_csv(sg, (out / "spectrogram.csv").string());
    xpdrsim::write_spectrogram_pgm(sg, (out / "spectrogram.pgm").string());

    std::cout << "estimated " << raw.size() << " pulses -> " << out_dir << '\n';
    return 0;
}

// --- validate-plan ----------------------------------------------------------

int cmd_validate_plan(const std::string& scenario_path, double max_range_m,
                      double margin_db) {
    const xpdrsim::Scenario sc = xpdrsim::parse_scenario_file(scenario_path);
    const xpdrsim::PlanReport rep =
        xpdrsim::validate_plan(sc.radar, sc.transponder, max_range_m, margin_db);
    for (const auto& c : rep.checks)
        std::cout << (c.passed ? "PASS" : "FAIL") << ' ' << c.name << ": " << c.detail
                  << '\n';
    return rep.all_passed() ? 0 : 1;
}

// --- report -----------------------------------------------------------------

xpdrsim::RangeTrack track_from_csv(const fs::path& p) {
    const CsvTable t = read_csv(p);
    if (t.header.size() < 8) throw xpdrsim::ParseError("unexpected track CSV layout: " + p.string());
    xpdrsim::RangeTrack r;
    const std::size_t n = t.cols[0].size();
    r.pulse_index.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.pulse_index[i] = static_cast<int>(t.cols[0][i]);
    r.time_s = t.cols[1];
    r.truth_m = t.cols[2];
    r.r_abs_m = t.cols[3];
    r.r_rel_m = t.cols[4];
    r.valid.resize(n);
    for (std::size_t i = 0; i < n; ++i) r.valid[i] = t.cols[5][i] != 0.0;
    r.snr1_db = t.cols[6];
    r.snr2_db = t.cols[7];
    return r;
}

int cmd_report(const std::string& run_dir, std::string out_dir, std::size_t window) {
    const fs::path run(run_dir);
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    const xpdrsim::RangeTrack track = track_from_csv(run / "track.csv");
    const xpdrsim::ErrorReport rep = xpdrsim::make_error_report(track, window);
    xpdrsim::write_mstd_csv(rep, track.time_s, (out / "mstd.csv").string());
    xpdrsim::write_summary_csv(rep, "transponder", (out / "report.csv").string());
    for (int i = 0;; ++i) {
        const fs::path cp = run / ("corner_" + std::to_string(i) + ".csv");
        if (!fs::exists(cp)) break;
        xpdrsim::write_summary_csv(
            xpdrsim::make_error_report(track_from_csv(cp), window),
            "corner_" + std::to_string(i), (out / "report.csv").string(), /*append=*/true);
    }
    std::cout << "report -> " << (out / "report.csv").string() << '\n';
    return 0;
}

// --- spectrogram -----------------------------------------------------------

int cmd_spectrogram(const std::string& run_dir, std::string out_dir, std::size_t fft_size,
                    double band_lo, double band_hi) {
    const fs::path run(run_dir);
    if (out_dir.empty()) out_dir = run_dir;
    fs::create_directories(out_dir);
    const fs::path out(out_dir);

    xpdrsim::DumpHeader hdr;
    const auto raw = xpdrsim::read_dump((run / "dump.bin").string(), hdr);
    std::vector<xpdrsim::PulseRecord> recs(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        recs[i].pulse_index = static_cast<int>(i);
        recs[i].samples = raw[i];
    }
    if (band_hi <= band_lo) band_hi = 0.5 * hdr.sample_rate_hz;
    const xpdrsim::Spectrogram sg =
        xpdrsim::spectrogram(recs, fft_size, hdr.sample_rate_hz, band_lo, band_hi);
    xpdrsim::write_spectrogram_csv(sg, (out / "spectrogram.csv").string());
    xpdrsim::write_spectrogram_pgm(sg, (out / "spectrogram.pgm").string());
    std::cout << "spectrogram " << sg.rows() << " x " << sg.cols << " -> " << out_dir << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"FMCW radar / two-tone transponder range simulator"};
    app.require_subcommand(1);

    CommonOpts o;
    std::string run_dir;
    double max_range_m = 600.0;
    double margin_db = 10.0;
    std::size_t window = 100;
    std::size_t fft_size = 16384;
    double band_lo = 0.0, band_hi = 0.0;

    auto* sim = app.add_subcommand("simulate", "synthesize a pulse run from a scenario");
    sim->add_option("--scenario", o.scenario_path, "scenario file")->required();
    sim->add_option("--out,-o", o.out_dir, "output run directory")->required();
    sim->add_option("--seed", o.seed, "master seed override");
    sim->add_option("--pulses", o.pulses, "pulse count override");
    sim->add_option("--threads", o.threads, "worker threads (default: XPDRSIM_THREADS or hw)");

    auto* est = app.add_subcommand("estimate", "run range estimation on a simulated run");
    est->add_option("run_dir", run_dir, "run directory from `simulate`")->required();
    est->add_option("--out,-o", o.out_dir, "output directory (default: run dir)");
    est->add_option("--threads", o.threads, "worker threads");

    auto* vp = app.add_subcommand("validate-plan", "static frequency-plan feasibility checks");
    vp->add_option("--scenario", o.scenario_path, "scenario file")->required();
    vp->add_option("--max-range", max_range_m, "largest operating range checked, m");
    vp->add_option("--margin", margin_db, "stability margin, dB");

    auto* rep = app.add_subcommand("report", "recompute error metrics from track CSVs");
    rep->add_option("run_dir", run_dir, "directory containing track.csv")->required();
    rep->add_option("--out,-o", o.out_dir, "output directory (default: run dir)");
    rep->add_option("--window", window, "moving-std window, pulses");

    auto* sg = app.add_subcommand("spectrogram", "per-pulse FFT matrix from a raw dump");
    sg->add_option("run_dir", run_dir, "directory containing dump.bin")->required();
    sg->add_option("--out,-o", o.out_dir, "output directory (default: run dir)");
    sg->add_option("--fft", fft_size, "FFT size");
    sg->add_option("--band-lo", band_lo, "band low edge, Hz");
    sg->add_option("--band-hi", band_hi, "band high edge, Hz (default: fs/2)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (sim->parsed()) return cmd_simulate(o);
        if (est->parsed()) return cmd_estimate(run_dir, o.out_dir, o.threads);
        if (vp->parsed()) return cmd_validate_plan(o.scenario_path, max_range_m, margin_db);
        if (rep->parsed()) return cmd_report(run_dir, o.out_dir, window);
        if (sg->parsed()) return cmd_spectrogram(run_dir, o.out_dir, fft_size, band_lo, band_hi);
    } catch (const xpdrsim::ValidationError& e) {
        std::cerr << "error: invalid scenario: " << e.what() << '\n';
        return 2;
    } catch (const xpdrsim::ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
