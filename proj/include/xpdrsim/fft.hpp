#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "xpdrsim/constants.hpp"

namespace xpdrsim {

using cplx = std::complex<double>;

inline std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

// In-place iterative radix-2 DIT FFT. data.size() must be a power of two.
inline void fft_inplace(std::vector<cplx>& data) {
    const std::size_t n = data.size();
    assert((n & (n - 1)) == 0);
    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(data[i], data[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = -kTwoPi / static_cast<double>(len);
        const cplx wl(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            cplx w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                cplx u = data[i + k];
                cplx v = data[i + k + len / 2] * w;
                data[i + k] = u + v;
                data[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

inline std::vector<double> hann_window(std::size_t n) {
    std::vector<double> w(n);
    if (n == 1) {
        w[0] = 1.0;
        return w;
    }
    for (std::size_t i = 0; i < n; ++i)
        w[i] = 0.5 - 0.5 * std::cos(kTwoPi * static_cast<double>(i) /
                                    static_cast<double>(n - 1));
    return w;
}

// Windowed DTFT of x at a single frequency (Hz). Phase is referenced to the
// first sample of x.
inline cplx dtft_at(std::span<const cplx> x, std::span<const double> w,
                    double freq_hz, double sample_rate_hz) {
    assert(x.size() == w.size());
    const double dphi = -kTwoPi * freq_hz / sample_rate_hz;
    const cplx step(std::cos(dphi), std::sin(dphi));
    cplx rot(1.0, 0.0);
    cplx acc(0.0, 0.0);
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += w[i] * x[i] * rot;
        rot *= step;
        // re-normalize occasionally to bound phasor drift
        if ((i & 0x3ff) == 0x3ff) rot /= std::abs(rot);
    }
    return acc;
}

// 3-point quadratic (parabolic) vertex offset from the center sample, given
// magnitudes (or log-magnitudes) m[-1], m[0], m[+1]. Result in (-1, 1) bins.
inline double parabolic_offset(double ml, double mc, double mr) {
    const double denom = ml - 2.0 * mc + mr;
    if (denom == 0.0) return 0.0;
    double d = 0.5 * (ml - mr) / denom;
    if (d > 1.0) d = 1.0;
    if (d < -1.0) d = -1.0;
    return d;
}

}  // namespace xpdrsim
