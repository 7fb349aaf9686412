#pragma once

// Seeded random test fields. Gaussians come from an explicit Box-Muller on
// mt19937_64 output, so sequences are identical across standard libraries.

#include <cmath>
#include <random>

#include "nsac/fft.hpp"
#include "nsac/spectral_ops.hpp"

namespace nsac {

namespace detail {

class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    double uniform() { // in [0,1)
        return static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    }
    double gaussian() {
        if (have_) {
            have_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * kPi * u2);
        have_ = true;
        return r * std::cos(2.0 * kPi * u2);
    }

private:
    std::mt19937_64 rng_;
    double spare_ = 0.0;
    bool have_ = false;
};

// True when midx is its own conjugate mirror (all entries 0 or Nyquist).
inline bool self_conjugate(const Grid& g, const int* midx) {
    for (int a = 0; a < g.dim(); ++a)
        if (midx[a] != 0 && midx[a] != g.size(a) / 2) return false;
    return true;
}

// Canonical representative of a +/-k pair: first nonzero signed index > 0.
inline bool canonical_half(const Grid& g, const int* midx) {
    for (int a = 0; a < g.dim(); ++a) {
        const int ms = g.signed_index(a, midx[a]);
        if (ms > 0) return true;
        if (ms < 0) return false;
    }
    return true;
}

} // namespace detail

// Zero-mean real field, band-limited to |m_i| <= N_i/4, with unit-variance
// complex Gaussian coefficients and enforced Hermitian symmetry.
inline RealField random_band_limited_field(const GridPtr& grid, std::uint64_t seed,
                                           double amplitude = 1.0) {
    const Grid& g = *grid;
    detail::GaussianSource src(seed);
    SpectralField f(grid);
    int midx[Grid::max_dim], mirror[Grid::max_dim];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.flat_to_multi(i, midx);
        bool inside = true, zero = true;
        for (int a = 0; a < g.dim(); ++a) {
            const int ms = g.signed_index(a, midx[a]);
            if (std::abs(ms) > g.size(a) / 4) inside = false;
            if (ms != 0) zero = false;
        }
        if (!inside || zero || !detail::canonical_half(g, midx)) continue;
        if (detail::self_conjugate(g, midx)) {
            f[i] = Complex(amplitude * src.gaussian(), 0.0);
        } else {
            f[i] = amplitude * Complex(src.gaussian(), src.gaussian()) / std::sqrt(2.0);
            for (int a = 0; a < g.dim(); ++a)
                mirror[a] = midx[a] == 0 ? 0 : g.size(a) - midx[a];
            f[g.multi_to_flat(mirror)] = std::conj(f[i]);
        }
    }
    return inverse(f);
}

// Power-law spectral profile |fhat(k)| = amplitude * |k|^{s_target - d/2}
// on 0 < |k| <= k_cut with random Hermitian-paired phases. Places the data
// at the Hdot^{-s_target} borderline, so the linear heat flow decays with
// the matching algebraic rate while the box can resolve it.
//
// k_cut is a physical wavenumber. With require_dealias_safe the cut must fit
// inside the 2/3-rule box (alias-free products); a linear-only run may relax
// that to the representable box.
inline RealField gen_powerlaw_field(const GridPtr& grid, double s_target, double k_cut,
                                    std::uint64_t seed, double amplitude,
                                    bool require_dealias_safe = true) {
    const Grid& g = *grid;
    if (!(s_target >= 0.0 && s_target < 1.5))
        throw InvalidRange("gen_powerlaw_field: s_target must lie in [0, 1.5)");
    if (!(amplitude > 0.0)) throw InvalidRange("gen_powerlaw_field: amplitude must be positive");
    if (require_dealias_safe && k_cut > g.dealias_wavenumber() + 1e-12)
        throw InvalidCut("gen_powerlaw_field: k_cut exceeds the dealias cutoff " +
                         std::to_string(g.dealias_wavenumber()));
    double nyq = 2.0 * kPi * (g.size(0) / 2) / g.length(0);
    for (int a = 1; a < g.dim(); ++a)
        nyq = std::min(nyq, 2.0 * kPi * (g.size(a) / 2) / g.length(a));
    if (k_cut >= nyq)
        throw InvalidCut("gen_powerlaw_field: k_cut reaches the Nyquist wavenumber " +
                         std::to_string(nyq));
    detail::GaussianSource src(seed);
    SpectralField f(grid);
    const double ex = s_target - 0.5 * static_cast<double>(g.dim());
    int midx[Grid::max_dim], mirror[Grid::max_dim];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.flat_to_multi(i, midx);
        // membership by the true wavevector; k_cut < nyq keeps Nyquist out
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.wavenumber(a, midx[a]);
            k2 += k * k;
        }
        if (k2 == 0.0 || std::sqrt(k2) > k_cut) continue;
        if (!detail::canonical_half(g, midx)) continue;
        const double mag = amplitude * std::pow(std::sqrt(k2), ex);
        const double phase = 2.0 * kPi * src.uniform();
        if (detail::self_conjugate(g, midx)) {
            f[i] = Complex(src.uniform() < 0.5 ? -mag : mag, 0.0);
        } else {
            f[i] = mag * Complex(std::cos(phase), std::sin(phase));
            for (int a = 0; a < g.dim(); ++a)
                mirror[a] = midx[a] == 0 ? 0 : g.size(a) - midx[a];
            f[g.multi_to_flat(mirror)] = std::conj(f[i]);
        }
    }
    return inverse(f);
}

} // namespace nsac
