#pragma once

// Nonlinear right-hand sides for both formulations, assembled pseudo-
// spectrally. The constant-coefficient linear parts (-div u / -grad varrho
// + viscosity on u, lap on chi, and their conservative-variable analogues)
// live in the integrator's implicit operator; what is returned here is the
// remainder, with every physical-space product dealiased unless the caller
// disables that (the MMS forcing builder does, to sample continuum values).

#include "nsac/model.hpp"

namespace nsac {

struct SpectralState {
    Formulation formulation = Formulation::Perturbation;
    double time = 0.0;
    SpectralField rho;
    SpectralVectorField mom;
    SpectralField chi;

    SpectralState() = default;
    SpectralState(Formulation f, GridPtr g, double t = 0.0)
        : formulation(f), time(t), rho(g), mom(g, g->dim()), chi(g) {}

    const GridPtr& grid() const { return rho.grid; }

    bool finite() const {
        if (!rho.finite() || !chi.finite()) return false;
        for (const auto& c : mom.comp)
            if (!c.finite()) return false;
        return true;
    }
};

inline SpectralState forward(const State& s) {
    SpectralState out;
    out.formulation = s.formulation;
    out.time = s.time;
    out.rho = forward(s.rho);
    out.mom = forward(s.mom);
    out.chi = forward(s.chi);
    return out;
}

inline State inverse(const SpectralState& s) {
    State out;
    out.formulation = s.formulation;
    out.time = s.time;
    out.rho = inverse(s.rho);
    out.mom = inverse(s.mom);
    out.chi = inverse(s.chi);
    return out;
}

inline void dealias_in_place(SpectralState& s) {
    dealias_in_place(s.rho);
    dealias_in_place(s.chi);
    for (auto& c : s.mom.comp) dealias_in_place(c);
}

namespace detail {

inline void maybe_dealias(SpectralField& f, bool yes) {
    if (yes) dealias_in_place(f);
}

// grad chi (real) and the dealiased spectral divergence of the capillary
// stress, sharing one set of transforms.
inline void korteweg_pieces(const SpectralField& chi_hat, bool dealias_products,
                            VectorField& gradchi, SpectralVectorField& divk_hat) {
    const auto& g = chi_hat.grid;
    const int d = g->dim();
    gradchi = VectorField(g, d);
    for (int a = 0; a < d; ++a) gradchi.comp[a] = inverse(gradient_axis(chi_hat, a));
    divk_hat = SpectralVectorField(g, d);
    // symmetric stress: transform the 6 unique products once
    std::vector<SpectralField> t(d * d);
    for (int a = 0; a < d; ++a) {
        for (int b = a; b < d; ++b) {
            RealField k_ab(g);
            if (a == b) {
                for (std::size_t i = 0; i < k_ab.size(); ++i) {
                    double half = 0.0;
                    for (int c = 0; c < d; ++c) half += gradchi[c][i] * gradchi[c][i];
                    k_ab[i] = gradchi[a][i] * gradchi[a][i] - 0.5 * half;
                }
            } else {
                for (std::size_t i = 0; i < k_ab.size(); ++i)
                    k_ab[i] = gradchi[a][i] * gradchi[b][i];
            }
            auto kh = nsac::forward(k_ab);
            maybe_dealias(kh, dealias_products);
            t[a * d + b] = kh;
            if (a != b) t[b * d + a] = kh;
        }
    }
    for (int a = 0; a < d; ++a) {
        SpectralVectorField row;
        row.comp.assign(t.begin() + a * d, t.begin() + (a + 1) * d);
        divk_hat.comp[a] = divergence(row);
    }
}

} // namespace detail

// Perturbation-form nonlinear tendencies:
//   N_varrho = -div(varrho u)                         (divergence form)
//   N_u      = -u.grad u - h(varrho)(mu lap u + (mu+lambda) grad div u)
//              - g(varrho) grad varrho - ell*phi(varrho) * div K(chi)
//   N_chi    = -u.grad chi - (1 - ell*phi^2) lap chi - (phi/ell)(chi^3 - chi)
inline SpectralState perturbation_rhs_hat(const SpectralState& s, const ModelParams& p,
                                          bool dealias_products = true) {
    if (s.formulation != Formulation::Perturbation)
        throw ValidationError("perturbation_rhs: state is not in perturbation form");
    if (!s.finite()) throw NonFiniteData("perturbation_rhs: non-finite state");
    const auto& g = s.grid();
    const int d = g->dim();

    auto varrho = inverse(s.rho);
    auto u = inverse(s.mom);
    auto chi = inverse(s.chi);
    const double floor = p.vacuum_floor;
    for (double v : varrho.data)
        if (!(1.0 + v >= floor))
            throw VacuumViolation("perturbation_rhs: 1 + varrho under the vacuum floor");

    SpectralState out(Formulation::Perturbation, g, s.time);

    // mass: -div(varrho u), zero mode exactly zero by the divergence form
    {
        SpectralVectorField flux(g, d);
        for (int a = 0; a < d; ++a) {
            RealField ru(g);
            for (std::size_t i = 0; i < ru.size(); ++i) ru[i] = varrho[i] * u[a][i];
            flux.comp[a] = nsac::forward(ru);
            detail::maybe_dealias(flux.comp[a], dealias_products);
        }
        out.rho = divergence(flux);
        for (auto& c : out.rho.coeffs) c = -c;
    }

    VectorField gradchi;
    SpectralVectorField divk_hat;
    detail::korteweg_pieces(s.chi, dealias_products, gradchi, divk_hat);
    auto divk = inverse(divk_hat);

    // momentum
    {
        std::vector<RealField> gradrho(d), lap_u(d), graddiv_u(d);
        for (int a = 0; a < d; ++a) {
            gradrho[a] = inverse(gradient_axis(s.rho, a));
            lap_u[a] = inverse(laplacian(s.mom[a]));
        }
        auto div_u_hat = divergence(s.mom);
        for (int a = 0; a < d; ++a) graddiv_u[a] = inverse(gradient_axis(div_u_hat, a));

        std::vector<std::vector<RealField>> du(d); // du[a][b] = d_b u_a
        for (int a = 0; a < d; ++a) {
            du[a].resize(d);
            for (int b = 0; b < d; ++b) du[a][b] = inverse(gradient_axis(s.mom[a], b));
        }

        RealField hfield(g), gfield(g), phifield(g);
        for (std::size_t i = 0; i < hfield.size(); ++i) {
            const double r = varrho[i];
            hfield[i] = r / (r + 1.0);
            gfield[i] = coefficient_value(Coefficient::g, r, p);
            phifield[i] = 1.0 / (r + 1.0);
        }
        const double mu = p.mu, mul = p.mu + p.lambda, ell = p.ell;
        for (int a = 0; a < d; ++a) {
            RealField n(g);
            for (std::size_t i = 0; i < n.size(); ++i) {
                double adv = 0.0;
                for (int b = 0; b < d; ++b) adv += u[b][i] * du[a][b][i];
                n[i] = -adv - hfield[i] * (mu * lap_u[a][i] + mul * graddiv_u[a][i]) -
                       gfield[i] * gradrho[a][i] - ell * phifield[i] * divk[a][i];
            }
            out.mom.comp[a] = nsac::forward(n);
            detail::maybe_dealias(out.mom.comp[a], dealias_products);
        }
    }

    // phase
    {
        auto lap_chi = inverse(laplacian(s.chi));
        RealField n(g);
        for (std::size_t i = 0; i < n.size(); ++i) {
            const double r = varrho[i];
            const double phi = 1.0 / (r + 1.0);
            double adv = 0.0;
            for (int a = 0; a < d; ++a) adv += u[a][i] * gradchi[a][i];
            const double c = chi[i];
            n[i] = -adv - (1.0 - p.ell * phi * phi) * lap_chi[i] -
                   (phi / p.ell) * (c * c * c - c);
        }
        out.chi = nsac::forward(n);
        detail::maybe_dealias(out.chi, dealias_products);
    }
    return out;
}

// Conservative-form nonlinear tendencies, relative to the implicit operator
//   rho_t = -div m,  m_t = -a*gamma grad(rho-1) + mu lap m
//           + (mu+lambda) grad div m,  (rho chi)_t = lap(rho chi):
//   N_rho = 0                                         (mass is fully linear)
//   N_m   = -div(m (x) u) - grad[a(rho^gamma - gamma rho)]
//           + mu lap(u - m) + (mu+lambda) grad div(u - m) - ell div K(chi)
//   N_xi  = -div(xi u) + ell lap(chi)/rho - (chi^3 - chi)/ell - lap(xi)
// with u = m/rho, chi = xi/rho.
inline SpectralState conservative_rhs_hat(const SpectralState& s, const ModelParams& p,
                                          bool dealias_products = true) {
    if (s.formulation != Formulation::Conservative)
        throw ValidationError("conservative_rhs: state is not in conservative form");
    if (!s.finite()) throw NonFiniteData("conservative_rhs: non-finite state");
    const auto& g = s.grid();
    const int d = g->dim();

    auto rho = inverse(s.rho);
    auto m = inverse(s.mom);
    auto xi = inverse(s.chi);
    for (double v : rho.data)
        if (!(v >= p.vacuum_floor))
            throw VacuumViolation("conservative_rhs: density under the vacuum floor");

    VectorField u(g, d);
    RealField chi(g);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        for (int a = 0; a < d; ++a) u[a][i] = m[a][i] / rho[i];
        chi[i] = xi[i] / rho[i];
    }

    SpectralState out(Formulation::Conservative, g, s.time);
    // N_rho stays identically zero.

    auto chi_hat = nsac::forward(chi);
    detail::maybe_dealias(chi_hat, dealias_products);
    VectorField gradchi;
    SpectralVectorField divk_hat;
    detail::korteweg_pieces(chi_hat, dealias_products, gradchi, divk_hat);

    // momentum
    {
        // symmetric advective stress T_ab = m_a u_b
        std::vector<SpectralField> t(d * d);
        for (int a = 0; a < d; ++a)
            for (int b = a; b < d; ++b) {
                RealField prod(g);
                for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = m[a][i] * u[b][i];
                auto th = nsac::forward(prod);
                detail::maybe_dealias(th, dealias_products);
                t[a * d + b] = th;
                if (a != b) t[b * d + a] = th;
            }

        RealField pnl(g);
        const double a_p = p.pressure_scale;
        for (std::size_t i = 0; i < pnl.size(); ++i)
            pnl[i] = a_p * (std::pow(rho[i], p.gamma) - p.gamma * rho[i]);
        auto pnl_hat = nsac::forward(pnl);
        detail::maybe_dealias(pnl_hat, dealias_products);

        SpectralVectorField w_hat(g, d); // u - m, explicit viscous remainder
        for (int a = 0; a < d; ++a) {
            RealField w(g);
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[a][i] - m[a][i];
            w_hat.comp[a] = nsac::forward(w);
            detail::maybe_dealias(w_hat.comp[a], dealias_products);
        }
        auto divw_hat = divergence(w_hat);

        int midx[Grid::max_dim];
        for (int a = 0; a < d; ++a) {
            SpectralVectorField row;
            row.comp.assign(t.begin() + a * d, t.begin() + (a + 1) * d);
            auto divT = divergence(row);
            auto& dst = out.mom.comp[a];
            dst = SpectralField(g);
            for (std::size_t i = 0; i < dst.size(); ++i) {
                g->flat_to_multi(i, midx);
                const double ka = g->wavenumber_deriv(a, midx[a]);
                const double k2 = g->ksq(i);
                dst[i] = -divT[i] - Complex(0.0, ka) * pnl_hat[i] -
                         p.mu * k2 * w_hat[a][i] +
                         (p.mu + p.lambda) * Complex(0.0, ka) * divw_hat[i] -
                         p.ell * divk_hat[a][i];
            }
        }
    }

    // weighted order parameter
    {
        SpectralVectorField flux(g, d);
        for (int a = 0; a < d; ++a) {
            RealField xu(g);
            for (std::size_t i = 0; i < xu.size(); ++i) xu[i] = xi[i] * u[a][i];
            flux.comp[a] = nsac::forward(xu);
            detail::maybe_dealias(flux.comp[a], dealias_products);
        }
        auto divflux = divergence(flux);

        auto lap_chi = inverse(laplacian(chi_hat));
        RealField relax(g);
        for (std::size_t i = 0; i < relax.size(); ++i) {
            const double c = chi[i];
            relax[i] = p.ell * lap_chi[i] / rho[i] - (c * c * c - c) / p.ell;
        }
        auto relax_hat = nsac::forward(relax);
        detail::maybe_dealias(relax_hat, dealias_products);

        out.chi = SpectralField(g);
        for (std::size_t i = 0; i < out.chi.size(); ++i)
            out.chi[i] = -divflux[i] + relax_hat[i] + g->ksq(i) * s.chi[i];
    }
    return out;
}

inline SpectralState rhs_hat(const SpectralState& s, const ModelParams& p,
                             bool dealias_products = true) {
    return s.formulation == Formulation::Perturbation
               ? perturbation_rhs_hat(s, p, dealias_products)
               : conservative_rhs_hat(s, p, dealias_products);
}

// Real-space wrappers returning the nonlinear tendencies as fields.
inline State perturbation_rhs(const State& s, const ModelParams& p) {
    return inverse(perturbation_rhs_hat(forward(s), p));
}
inline State conservative_rhs(const State& s, const ModelParams& p) {
    return inverse(conservative_rhs_hat(forward(s), p));
}

// Full time derivative (linear part + nonlinear remainder), used by energy
// identity checks. Works on the dealiased spectral representation.
inline SpectralState full_rhs_hat(const SpectralState& s, const ModelParams& p,
                                  bool dealias_products = true) {
    auto n = rhs_hat(s, p, dealias_products);
    const auto& g = s.grid();
    const int d = g->dim();
    int midx[Grid::max_dim];
    auto divv = divergence(s.mom); // div u (perturbation) or div m (conservative)
    const double cp = s.formulation == Formulation::Perturbation
                          ? 1.0
                          : p.pressure_scale * p.gamma;
    for (std::size_t i = 0; i < n.rho.size(); ++i) n.rho[i] -= divv[i];
    for (int a = 0; a < d; ++a) {
        for (std::size_t i = 0; i < n.mom[a].size(); ++i) {
            g->flat_to_multi(i, midx);
            const double ka = g->wavenumber_deriv(a, midx[a]);
            const double k2 = g->ksq(i);
            n.mom.comp[a][i] += -cp * Complex(0.0, ka) * s.rho[i] - p.mu * k2 * s.mom[a][i] +
                                (p.mu + p.lambda) * Complex(0.0, ka) * divv[i];
        }
    }
    for (std::size_t i = 0; i < n.chi.size(); ++i) n.chi[i] -= g->ksq(i) * s.chi[i];
    return n;
}

} // namespace nsac
