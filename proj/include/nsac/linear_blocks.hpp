#pragma once

// Per-Fourier-mode implicit solves for (sigma I - dt A(k)) x = b, where A
// is the constant-coefficient linear operator:
//   varrho_t = -i k . u
//   u_t      = -i c_p k varrho - mu |k|^2 u - (mu+lambda) k (k.u)
//   chi_t    = -|k|^2 chi
// (c_p = 1 in perturbation variables, a*gamma in conservative ones, where
// the same structure acts on (rho-1, m, rho chi)). The chi row decouples;
// the velocity block splits into transverse components with a scalar factor
// and a 2x2 acoustic-viscous solve on (varrho, longitudinal amplitude).

#include <vector>

#include "nsac/model.hpp"
#include "nsac/rhs.hpp"

namespace nsac {

struct LinearBlockTable {
    GridPtr grid;
    double sigma = 1.0;
    double dt = 0.0;
    double coupling = 1.0;
    // per-mode scalar factors
    std::vector<double> c_chi, c_perp;
    std::vector<double> inv11, inv12_im, inv21_im, inv22; // entries of M^{-1}
    std::vector<double> klen;
};

inline double pressure_coupling(Formulation f, const ModelParams& p) {
    return f == Formulation::Perturbation ? 1.0 : p.pressure_scale * p.gamma;
}

inline LinearBlockTable build_linear_blocks(const GridPtr& grid, const ModelParams& p,
                                            double dt, double sigma = 1.0,
                                            double coupling = 1.0) {
    if (!(dt > 0.0)) throw InvalidRange("build_linear_blocks: dt must be positive");
    LinearBlockTable t;
    t.grid = grid;
    t.sigma = sigma;
    t.dt = dt;
    t.coupling = coupling;
    const std::size_t n = grid->point_count();
    t.c_chi.resize(n);
    t.c_perp.resize(n);
    t.inv11.resize(n);
    t.inv12_im.resize(n);
    t.inv21_im.resize(n);
    t.inv22.resize(n);
    t.klen.resize(n);
    const double nu = 2.0 * p.mu + p.lambda;
    for (std::size_t i = 0; i < n; ++i) {
        const double k2 = grid->ksq(i);
        const double k = std::sqrt(k2);
        t.klen[i] = k;
        t.c_chi[i] = 1.0 / (sigma + dt * k2);
        t.c_perp[i] = 1.0 / (sigma + dt * p.mu * k2);
        const double det = sigma * (sigma + dt * nu * k2) + coupling * dt * dt * k2;
        t.inv11[i] = (sigma + dt * nu * k2) / det;
        t.inv12_im[i] = -dt * k / det;
        t.inv21_im[i] = -coupling * dt * k / det;
        t.inv22[i] = sigma / det;
    }
    return t;
}

// In-place solve of (sigma I - dt A) x = b on a spectral state.
inline void apply_inverse(const LinearBlockTable& t, SpectralState& x) {
    const Grid& g = *t.grid;
    const int d = g.dim();
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < x.rho.size(); ++i) {
        const double k = t.klen[i];
        if (k == 0.0) {
            const double inv = 1.0 / t.sigma;
            x.rho[i] *= inv;
            x.chi[i] *= inv;
            for (int a = 0; a < d; ++a) x.mom.comp[a][i] *= inv;
            continue;
        }
        g.flat_to_multi(i, midx);
        double khat[Grid::max_dim];
        Complex along(0.0, 0.0);
        for (int a = 0; a < d; ++a) {
            khat[a] = g.wavenumber_deriv(a, midx[a]) / k;
            along += khat[a] * x.mom[a][i];
        }
        const Complex rho_b = x.rho[i];
        const Complex rho_n = t.inv11[i] * rho_b + Complex(0.0, t.inv12_im[i]) * along;
        const Complex along_n = Complex(0.0, t.inv21_im[i]) * rho_b + t.inv22[i] * along;
        x.rho[i] = rho_n;
        for (int a = 0; a < d; ++a) {
            const Complex perp = x.mom[a][i] - khat[a] * along;
            x.mom.comp[a][i] = t.c_perp[i] * perp + khat[a] * along_n;
        }
        x.chi[i] *= t.c_chi[i];
    }
}

// Dense A(k) for one mode, rows/cols ordered (varrho, u_1..u_d, chi).
// Used by oracles and the stability audit.
inline std::vector<Complex> linear_matrix(const Grid& g, const ModelParams& p, double coupling,
                                          const int* midx) {
    const int d = g.dim();
    const int n = d + 2;
    std::vector<Complex> A(n * n, Complex(0.0, 0.0));
    double k[Grid::max_dim];
    double k2 = 0.0;
    for (int a = 0; a < d; ++a) {
        k[a] = g.wavenumber_deriv(a, midx[a]);
        k2 += k[a] * k[a];
    }
    for (int a = 0; a < d; ++a) {
        A[0 * n + (1 + a)] = Complex(0.0, -k[a]);                 // varrho_t = -i k.u
        A[(1 + a) * n + 0] = Complex(0.0, -coupling * k[a]);      // u_t ~ -i c_p k varrho
        for (int b = 0; b < d; ++b)
            A[(1 + a) * n + (1 + b)] -= (p.mu + p.lambda) * k[a] * k[b];
        A[(1 + a) * n + (1 + a)] -= p.mu * k2;
    }
    A[(n - 1) * n + (n - 1)] = Complex(-k2, 0.0);
    return A;
}

} // namespace nsac
