#pragma once

// Energy diagnostics: the physical free energy F with its dissipation rate,
// the graded Lyapunov functionals E_l^m with the u.grad(varrho) cross term,
// and the H^3-based smallness monitor.

#include "nsac/model.hpp"
#include "nsac/rhs.hpp"

namespace nsac {

// F = int [ rho |u|^2 / 2 + rho Phi(rho, chi) + ell |grad chi|^2 / 2 ] dx
inline double physical_energy(const State& s, const ModelParams& p) {
    const auto prim = to_primitive(s, p);
    const auto& g = s.grid();
    auto phi_density = free_energy_density(prim.rho, prim.chi, p);
    double sum = 0.0;
    for (std::size_t i = 0; i < prim.rho.size(); ++i) {
        double ke = 0.0;
        for (int a = 0; a < g->dim(); ++a) ke += prim.u[a][i] * prim.u[a][i];
        sum += 0.5 * prim.rho[i] * ke + prim.rho[i] * phi_density[i];
    }
    double grad2 = 0.0;
    {
        auto chat = forward(prim.chi);
        for (std::size_t i = 0; i < chat.size(); ++i)
            grad2 += g->ksq(i) * std::norm(chat[i]);
        grad2 *= g->box_volume();
    }
    return sum * g->cell_volume() + 0.5 * p.ell * grad2;
}

// dF/dt along exact trajectories:
//   -mu ||grad u||^2 - (mu+lambda) ||div u||^2 - ||omega||^2
inline double physical_dissipation_rate(const State& s, const ModelParams& p) {
    const auto prim = to_primitive(s, p);
    const auto& g = s.grid();
    auto uhat = forward(prim.u);
    double gradu2 = 0.0;
    for (int a = 0; a < g->dim(); ++a)
        for (std::size_t i = 0; i < uhat[a].size(); ++i)
            gradu2 += g->ksq(i) * std::norm(uhat[a][i]);
    gradu2 *= g->box_volume();
    const double divu2 = std::pow(l2_norm(divergence(uhat)), 2);
    const double omega2 = std::pow(lp_norm(chemical_potential(s, p), 2.0), 2);
    return -(p.mu * gradu2 + (p.mu + p.lambda) * divu2 + omega2);
}

// E_l^m = sum_{l<=k<=m} (||L^k varrho||^2 + ||L^k u||^2 + ||L^k chi||^2
//         + ||L^k grad chi||^2) + eta sum_{l<=k<=m-1} <L^k u, L^k grad varrho>.
// Positive definite for eta < 1 by Cauchy-Schwarz on the cross term.
inline double energy_functional(const SpectralState& sh, int l, int m, double eta) {
    if (sh.formulation != Formulation::Perturbation)
        throw ValidationError("energy_functional: perturbation form required");
    if (l < 0 || l > m) throw InvalidRange("energy_functional: need 0 <= l <= m");
    if (!(eta >= 0.0 && eta < 1.0)) throw InvalidRange("energy_functional: eta must lie in [0,1)");
    const auto& g = sh.grid();
    int midx[Grid::max_dim];
    double total = 0.0;
    for (std::size_t i = 0; i < sh.rho.size(); ++i) {
        const double k2 = g->ksq(i);
        double a2 = std::norm(sh.rho[i]) + std::norm(sh.chi[i]) * (1.0 + k2);
        double u2 = 0.0;
        for (int a = 0; a < g->dim(); ++a) u2 += std::norm(sh.mom[a][i]);
        a2 += u2;

        // Re sum_a conj(u_a) * i k_a * varrho
        g->flat_to_multi(i, midx);
        Complex cross(0.0, 0.0);
        for (int a = 0; a < g->dim(); ++a)
            cross += std::conj(sh.mom[a][i]) *
                     Complex(0.0, g->wavenumber_deriv(a, midx[a])) * sh.rho[i];

        double wsum = 0.0, wcross = 0.0, pw = 1.0;
        for (int k = 0; k <= m; ++k) {
            if (k >= l) wsum += pw;
            if (k >= l && k <= m - 1) wcross += pw;
            pw *= k2;
        }
        total += a2 * wsum + eta * cross.real() * wcross;
    }
    return total * g->box_volume();
}

inline double energy_functional(const State& s, int l, int m, double eta) {
    return energy_functional(forward(s), l, m, eta);
}

// sqrt(E_0^3) monitor: ||varrho||_H3 + ||u||_H3 + ||chi||_H3 + ||grad chi||_H3.
inline double smallness_monitor(const SpectralState& sh) {
    const auto& g = sh.grid();
    double r2 = 0.0, u2 = 0.0, c2 = 0.0, gc2 = 0.0;
    for (std::size_t i = 0; i < sh.rho.size(); ++i) {
        const double k2 = g->ksq(i);
        const double w = 1.0 + k2 * (1.0 + k2 * (1.0 + k2)); // sum_{k<=3} |k|^{2k}
        r2 += w * std::norm(sh.rho[i]);
        double uu = 0.0;
        for (int a = 0; a < g->dim(); ++a) uu += std::norm(sh.mom[a][i]);
        u2 += w * uu;
        const double cc = std::norm(sh.chi[i]);
        c2 += w * cc;
        gc2 += w * k2 * cc;
    }
    const double v = g->box_volume();
    return std::sqrt(r2 * v) + std::sqrt(u2 * v) + std::sqrt(c2 * v) + std::sqrt(gc2 * v);
}

// Conservative states are converted so the monitor always measures
// (rho - 1, u, chi).
inline double smallness_monitor(const State& s, const ModelParams& p) {
    return smallness_monitor(forward(s.formulation == Formulation::Perturbation
                                         ? s
                                         : to_perturbation(s, p)));
}

} // namespace nsac
