#pragma once

// Fourier-multiplier operators: fractional powers |k|^s, exact spectral
// differentiation and 2/3-rule dealiasing. All multipliers are built from
// the grid's derivative wavenumber tables (Nyquist zeroed), so grad, div,
// laplacian and lambda powers share one |k| definition.

#include <cmath>

#include "nsac/fft.hpp"
#include "nsac/field.hpp"
#include "nsac/grid.hpp"

namespace nsac {

// lambda^s: multiply coefficient at k by |k|^s. The zero mode (and any mode
// the derivative tables make degenerate) is zeroed for s > 0, kept for
// s == 0, and must already vanish for s < 0.
inline SpectralField apply_lambda(const SpectralField& f, double s) {
    SpectralField out = f;
    if (s == 0.0) return out;
    const Grid& g = *f.grid;
    if (s > 0.0) {
        for (std::size_t i = 0; i < out.size(); ++i) {
            const double k2 = g.ksq(i);
            out[i] *= k2 > 0.0 ? std::pow(k2, 0.5 * s) : 0.0;
        }
        return out;
    }
    const double tol = 1e-14 * f.coeff_norm();
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double k2 = g.ksq(i);
        if (k2 > 0.0) {
            out[i] *= std::pow(k2, 0.5 * s);
        } else {
            if (std::abs(out[i]) > tol)
                throw ZeroModeUndefined("apply_lambda: negative power of |k| on a field with nonzero mean");
            out[i] = Complex(0.0, 0.0);
        }
    }
    return out;
}

inline SpectralField gradient_axis(const SpectralField& f, int axis) {
    const Grid& g = *f.grid;
    SpectralField out(f.grid);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.flat_to_multi(i, midx);
        const double k = g.wavenumber_deriv(axis, midx[axis]);
        out[i] = Complex(0.0, k) * f[i];
    }
    return out;
}

inline SpectralVectorField gradient(const SpectralField& f) {
    const int d = f.grid->dim();
    SpectralVectorField out;
    out.comp.reserve(d);
    for (int a = 0; a < d; ++a) out.comp.push_back(gradient_axis(f, a));
    return out;
}

inline SpectralField divergence(const SpectralVectorField& v) {
    const Grid& g = *v.grid();
    for (int a = 1; a < v.dim(); ++a) require_same_grid(g, *v[a].grid, "divergence");
    SpectralField out(v[0].grid);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < out.size(); ++i) {
        g.flat_to_multi(i, midx);
        Complex s(0.0, 0.0);
        for (int a = 0; a < v.dim(); ++a)
            s += Complex(0.0, g.wavenumber_deriv(a, midx[a])) * v[a][i];
        out[i] = s;
    }
    return out;
}

inline SpectralField laplacian(const SpectralField& f) {
    SpectralField out = f;
    const Grid& g = *f.grid;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -g.ksq(i);
    return out;
}

// Real-space convenience wrappers.
inline VectorField gradient(const RealField& f) { return inverse(gradient(forward(f))); }
inline RealField divergence(const VectorField& v) {
    for (int a = 1; a < v.dim(); ++a) require_same_grid(*v.grid(), *v[a].grid, "divergence");
    return inverse(divergence(forward(v)));
}
inline RealField laplacian(const RealField& f) { return inverse(laplacian(forward(f))); }

// 2/3-rule truncation: zero every coefficient with a signed index beyond
// floor(N_i/3) on some axis. Idempotent.
inline SpectralField dealias(const SpectralField& f) {
    const Grid& g = *f.grid;
    SpectralField out = f;
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < out.size(); ++i) {
        g.flat_to_multi(i, midx);
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.signed_index(a, midx[a])) > g.dealias_keep(a)) {
                out[i] = Complex(0.0, 0.0);
                break;
            }
        }
    }
    return out;
}

inline void dealias_in_place(SpectralField& f) {
    const Grid& g = *f.grid;
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.flat_to_multi(i, midx);
        for (int a = 0; a < g.dim(); ++a) {
            if (std::abs(g.signed_index(a, midx[a])) > g.dealias_keep(a)) {
                f[i] = Complex(0.0, 0.0);
                break;
            }
        }
    }
}

} // namespace nsac
