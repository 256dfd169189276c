#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>
#include <vector>

#include "xpdrsim/report.hpp"

using namespace xpdrsim;

namespace {

// independent oracle: sample std after least-squares line removal
double detrended_std(std::span<const double> x) {
    const std::size_t n = x.size();
    double tm = 0.0, xm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        tm += static_cast<double>(i);
        xm += x[i];
    }
    tm /= static_cast<double>(n);
    xm /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dt = static_cast<double>(i) - tm;
        sxx += dt * dt;
        sxy += dt * (x[i] - xm);
    }
    const double b = sxy / sxx;
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = x[i] - xm - b * (static_cast<double>(i) - tm);
        ssr += r * r;
    }
    return std::sqrt(ssr / static_cast<double>(n - 1));
}

}  // namespace

TEST_CASE("moving std basics") {
    SUBCASE("constant series gives zero") {
        std::vector<double> x(50, 3.7);
        const auto m = moving_std(x, 10);
        for (std::size_t i = 9; i < m.size(); ++i) CHECK(std::abs(m[i]) < 1e-12);
    }
    SUBCASE("positions before a full window are NaN") {
        std::vector<double> x(20, 1.0);
        const auto m = moving_std(x, 8);
        for (std::size_t i = 0; i < 7; ++i) CHECK(std::isnan(m[i]));
        CHECK_FALSE(std::isnan(m[7]));
    }
    SUBCASE("series shorter than the window is all NaN") {
        std::vector<double> x(5, 1.0);
        const auto m = moving_std(x, 10);
        REQUIRE(m.size() == 5);
        for (double v : m) CHECK(std::isnan(v));
    }
    SUBCASE("alternating +-a matches the closed-form detrended window std") {
        const double a = 0.25;
        std::vector<double> x(40);
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = (i % 2 == 0) ? a : -a;

        // odd window: the LS slope over an alternating window is zero and the
        // window mean is +-a/W, giving a sample std of a * sqrt((W+1)/W)
        const std::size_t w_odd = 9;
        const auto modd = moving_std(x, w_odd);
        const double expect_odd =
            a * std::sqrt(static_cast<double>(w_odd + 1) / static_cast<double>(w_odd));
        CHECK(modd.back() == doctest::Approx(expect_odd).epsilon(1e-12));

        // any window: equals the independent detrended-std oracle
        const std::size_t w = 10;
        const auto m = moving_std(x, w);
        const std::vector<double> tail(x.end() - w, x.end());
        CHECK(m.back() == doctest::Approx(detrended_std(tail)).epsilon(1e-12));
    }
    SUBCASE("translation invariance") {
        std::mt19937_64 rng(5);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> x(100), y(100);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = g(rng);
            y[i] = x[i] + 1234.5;
        }
        const auto mx = moving_std(x, 20), my = moving_std(y, 20);
        for (std::size_t i = 19; i < mx.size(); ++i)
            CHECK(mx[i] == doctest::Approx(my[i]).epsilon(1e-9));
    }
    SUBCASE("slope invariance from the in-window detrend") {
        std::mt19937_64 rng(6);
        std::normal_distribution<double> g(0.0, 1.0);
        std::vector<double> x(100), y(100);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] = g(rng);
            y[i] = x[i] + 0.75 * static_cast<double>(i);
        }
        const auto mx = moving_std(x, 20), my = moving_std(y, 20);
        for (std::size_t i = 19; i < mx.size(); ++i)
            CHECK(mx[i] == doctest::Approx(my[i]).epsilon(1e-10));
    }
    SUBCASE("windows touching invalid pulses are NaN") {
        std::vector<double> x(30, 1.0);
        std::vector<std::uint8_t> valid(30, 1);
        valid[15] = 0;
        const auto m = moving_std(x, valid, 5);
        for (std::size_t i = 15; i < 20; ++i) CHECK(std::isnan(m[i]));
        CHECK_FALSE(std::isnan(m[14]));
        CHECK_FALSE(std::isnan(m[20]));
    }
}

TEST_CASE("spectrogram") {
    const double fs = 62.5e6;
    const std::size_t n = 4096;

    SUBCASE("pure tone concentrates in one column") {
        PulseRecord p;
        p.samples.resize(n);
        const double f0 = 10e6;
        for (std::size_t i = 0; i < n; ++i) {
            const double ph = kTwoPi * f0 * static_cast<double>(i) / fs;
            p.samples[i] = cplx(std::cos(ph), std::sin(ph));
        }
        std::vector<PulseRecord> pulses(3, p);
        const Spectrogram sg = spectrogram(pulses, n, fs, 0.0, fs / 2.0);
        for (std::size_t r = 0; r < sg.rows(); ++r) {
            std::size_t k_max = 0;
            for (std::size_t c = 1; c < sg.cols; ++c)
                if (sg.at(r, c) > sg.at(r, k_max)) k_max = c;
            const double f_peak =
                sg.freq_lo_hz + static_cast<double>(k_max) * sg.freq_step_hz;
            CHECK(f_peak == doctest::Approx(f0).epsilon(1e-3));
        }
    }
    SUBCASE("Parseval: summed bin power equals windowed time-domain power") {
        std::mt19937_64 rng(9);
        std::normal_distribution<double> g(0.0, 1.0);
        PulseRecord p;
        p.samples.resize(n);
        for (auto& s : p.samples) s = cplx(g(rng), g(rng));
        std::vector<PulseRecord> pulses{p};

        const Spectrogram sg = spectrogram(pulses, n, fs, 0.0, fs);
        REQUIRE(sg.cols == n);

        const auto w = hann_window(n);
        double w2 = 0.0, pw = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w2 += w[i] * w[i];
            pw += std::norm(p.samples[i] * w[i]);
        }
        double sum_bins = 0.0;
        for (std::size_t c = 0; c < sg.cols; ++c) sum_bins += db_to_lin(sg.at(0, c));
        // bins carry |X_k|^2 / sum(w^2); DFT Parseval: sum|X_k|^2 = N sum|xw|^2
        const double lhs = sum_bins * w2 / static_cast<double>(n);
        CHECK(lhs == doctest::Approx(pw).epsilon(1e-9));
    }
    SUBCASE("white-noise floor reads the per-sample variance") {
        std::mt19937_64 rng(10);
        const double sigma2 = 4e-13;
        std::normal_distribution<double> g(0.0, std::sqrt(0.5 * sigma2));
        std::vector<PulseRecord> pulses(8);
        for (auto& p : pulses) {
            p.samples.resize(n);
            for (auto& s : p.samples) s = cplx(g(rng), g(rng));
        }
        const Spectrogram sg = spectrogram(pulses, n, fs, 0.0, fs / 2.0);
        double mean_lin = 0.0;
        for (double v : sg.db) mean_lin += db_to_lin(v);
        mean_lin /= static_cast<double>(sg.db.size());
        CHECK(std::abs(lin_to_db(mean_lin) - lin_to_db(sigma2)) < 1.0);
    }
}

TEST_CASE("gap statistics and percentiles") {
    std::vector<std::uint8_t> valid{1, 1, 0, 0, 1, 0, 1, 1, 0, 0, 0, 1};
    const GapStats g = gap_stats(valid);
    CHECK(g.gap_count == 3);
    CHECK(g.longest_gap == 3);
    CHECK(g.invalid_total == 6);

    std::vector<double> vals{1.0, 2.0, 3.0, 4.0,
                             std::numeric_limits<double>::quiet_NaN()};
    CHECK(percentile(vals, 50.0) == doctest::Approx(2.5));
    CHECK(percentile(vals, 100.0) == doctest::Approx(4.0));
}
