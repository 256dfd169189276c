#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const std::string kTool = XPDRSIM_TOOL_PATH;
const std::string kScenarioDir = XPDRSIM_SCENARIO_DIR;

int run(const std::string& args) {
    const int rc = std::system((kTool + " " + args + " > cli_out.txt 2>&1").c_str());
    return WEXITSTATUS(rc);
}

std::string last_output() {
    std::ifstream in("cli_out.txt");
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::size_t line_count(const fs::path& p) {
    std::ifstream in(p);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) ++n;
    return n;
}

}  // namespace

TEST_CASE("simulate is deterministic under a fixed seed") {
    const std::string lin = kScenarioDir + "/linear_pass.scenario";
    REQUIRE(run("simulate --scenario " + lin + " --out cli_run_a --seed 7 --pulses 16") == 0);
    REQUIRE(run("simulate --scenario " + lin + " --out cli_run_b --seed 7 --pulses 16") == 0);
    CHECK(slurp("cli_run_a/dump.bin") == slurp("cli_run_b/dump.bin"));
    CHECK(slurp("cli_run_a/truth.csv") == slurp("cli_run_b/truth.csv"));

    SUBCASE("--pulses overrides the scenario pulse count") {
        CHECK(line_count("cli_run_a/truth.csv") == 17);  // header + 16 pulses
    }
    SUBCASE("a different seed changes the noise") {
        REQUIRE(run("simulate --scenario " + lin +
                    " --out cli_run_c --seed 8 --pulses 16") == 0);
        CHECK(slurp("cli_run_a/dump.bin") != slurp("cli_run_c/dump.bin"));
    }
}

TEST_CASE("invalid scenario exits 2 and names the invariant") {
    std::ofstream out("cli_bad.scenario");
    out << "[radar]\ncarrier_hz = 9.75e9\nchirp_bandwidth_hz = 500e6\n"
           "pulse_width_s = 450e-6\nif_high_hz = 30e6\n"
           "[transponder]\nrx_slice_low_hz = 9.615e9\nrx_slice_high_hz = 9.625e9\n"
           "shift1_hz = 20e6\nshift2_hz = 20e6\n"
           "[trajectory]\nkind = \"linear\"\naltitude_m = 100.0\n";
    out.close();
    CHECK(run("simulate --scenario cli_bad.scenario --out cli_run_bad") == 2);
    CHECK(last_output().find("transponder.shifts") != std::string::npos);
}

TEST_CASE("validate-plan exit codes and named checks") {
    const std::string lin = kScenarioDir + "/linear_pass.scenario";
    CHECK(run("validate-plan --scenario " + lin) == 0);
    CHECK(run("validate-plan --scenario " + lin + " --max-range 1500") == 1);
    CHECK(last_output().find("FAIL tones-within-if-band") != std::string::npos);

    // 25 MHz slice: plan check fails with exit 1 (not a parse error)
    std::ofstream out("cli_wide.scenario");
    out << "[radar]\ncarrier_hz = 9.75e9\nchirp_bandwidth_hz = 500e6\n"
           "pulse_width_s = 450e-6\nif_high_hz = 30e6\n"
           "[transponder]\nrx_slice_low_hz = 9.615e9\nrx_slice_high_hz = 9.64e9\n"
           "shift1_hz = 20e6\nshift2_hz = 25e6\n"
           "[trajectory]\nkind = \"linear\"\naltitude_m = 100.0\n";
    out.close();
    CHECK(run("validate-plan --scenario cli_wide.scenario") == 1);
    CHECK(last_output().find("FAIL slice-width-below-shift") != std::string::npos);

    CHECK(run("validate-plan --scenario no_such_file.scenario") == 2);
}

TEST_CASE("simulate -> estimate -> report pipeline completeness") {
    const std::string lin = kScenarioDir + "/linear_pass.scenario";
    REQUIRE(run("simulate --scenario " + lin + " --out cli_pipe --pulses 24 --threads 2") == 0);
    REQUIRE(run("estimate cli_pipe --threads 2") == 0);

    for (const char* f : {"track.csv", "corner_0.csv", "corner_1.csv", "mstd.csv",
                          "report.csv", "spectrogram.csv", "spectrogram.pgm"})
        CHECK(fs::exists(fs::path("cli_pipe") / f));

    // track columns populated with finite estimates on valid pulses
    std::ifstream in("cli_pipe/track.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "pulse_index,time_s,truth_m,r_abs_m,r_rel_m,valid,snr1_db,snr2_db");
    std::string line;
    int valid_rows = 0;
    while (std::getline(in, line)) {
        std::stringstream ls(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ls, cell, ',')) cells.push_back(cell);
        REQUIRE(cells.size() == 8);
        if (cells[5] == "1") {
            ++valid_rows;
            CHECK(std::isfinite(std::stod(cells[3])));
            CHECK(std::isfinite(std::stod(cells[4])));
        }
    }
    CHECK(valid_rows == 24);

    SUBCASE("report recomputes from the track CSV") {
        REQUIRE(run("report cli_pipe --out cli_pipe_rep --window 8") == 0);
        CHECK(fs::exists("cli_pipe_rep/report.csv"));
        CHECK(line_count("cli_pipe_rep/report.csv") == 4);  // header + 3 tracks
    }
    SUBCASE("spectrogram tool runs standalone") {
        REQUIRE(run("spectrogram cli_pipe --out cli_pipe_sg --fft 8192") == 0);
        CHECK(fs::exists("cli_pipe_sg/spectrogram.csv"));
        CHECK(fs::exists("cli_pipe_sg/spectrogram.pgm"));
    }
    SUBCASE("estimate on a missing run dir exits 2") {
        CHECK(run("estimate no_such_run_dir") == 2);
    }
}
