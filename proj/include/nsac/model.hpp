#pragma once

// Compressible Navier-Stokes-Allen-Cahn closures and right-hand sides.
//
// Conservative unknowns: total density rho, momentum m = rho*u, and the
// weighted order parameter rho*chi. Perturbation unknowns: varrho = rho - 1,
// u, chi; the constant-coefficient linear part (acoustics + viscosity for
// (varrho,u), diffusion for chi) is *not* assembled here -- it belongs to
// the integrator's implicit operator. Everything returned by the rhs
// routines is the nonlinear remainder, with all products dealiased.
//
// Closures, with W(chi) = chi^4/4 - chi^2/2 and p(rho) = a rho^gamma:
//   h(r)      = r/(1+r)
//   g(r)      = p'(1+r)/(1+r) - 1 = a*gamma*(1+r)^{gamma-2} - 1
//   phi(r)    = 1/(1+r)
//   varphi(r) = r(r+2)/(1+r)^2 = 1 - phi(r)^2
//   omega     = -ell*lap(chi)/rho + (chi^3 - chi)/ell
// The interface parameter ell multiplies the capillary stress; the
// perturbation-side coefficients generalize to ell*phi on the Korteweg
// term, 1 - ell*phi^2 on the explicit diffusion and phi/ell on the well,
// which collapse to the h/g/phi/varphi table at ell = 1.

#include <cmath>
#include <string>

#include "nsac/norms.hpp"
#include "nsac/spectral_ops.hpp"

namespace nsac {

struct ModelParams {
    double mu = 1.0;            // shear viscosity, > 0
    double lambda = 0.0;        // second viscosity, 2*mu + 3*lambda >= 0
    double gamma = 2.0;         // adiabatic exponent, > 1
    double ell = 1.0;           // interface parameter, > 0
    double pressure_scale = 0.5; // a in p = a rho^gamma (0.5 = p'(1)=1 at gamma=2)
    double vacuum_floor = 0.25;
    double smallness_delta = 0.1;

    void validate() const {
        if (!(mu > 0.0)) throw ValidationError("mu > 0 violated");
        if (!(2.0 * mu + 3.0 * lambda >= 0.0)) throw ValidationError("2*mu + 3*lambda >= 0 violated");
        if (!(gamma > 1.0)) throw ValidationError("gamma > 1 violated");
        if (!(ell > 0.0)) throw ValidationError("ell > 0 violated");
        if (!(pressure_scale > 0.0)) throw ValidationError("pressure_scale > 0 violated");
        if (!(vacuum_floor > 0.0 && vacuum_floor < 1.0))
            throw ValidationError("vacuum_floor must lie in (0,1)");
        if (!(smallness_delta > 0.0)) throw ValidationError("smallness_delta > 0 violated");
    }
};

enum class Formulation { Perturbation, Conservative };

inline const char* to_string(Formulation f) {
    return f == Formulation::Perturbation ? "perturbation" : "conservative";
}

// One time slice of the unknowns. Field meaning depends on the formulation:
//   Perturbation: rho = varrho (density deviation), mom = u, chi = chi.
//   Conservative: rho = total density, mom = rho*u, chi = rho*chi.
struct State {
    Formulation formulation = Formulation::Perturbation;
    double time = 0.0;
    RealField rho;
    VectorField mom;
    RealField chi;

    State() = default;
    State(Formulation f, GridPtr g, double t = 0.0)
        : formulation(f), time(t), rho(g), mom(g, g->dim()), chi(g) {}

    const GridPtr& grid() const { return rho.grid; }
    bool finite() const { return rho.finite() && mom.finite() && chi.finite(); }
};

// (rho, u, chi) regardless of formulation; division by rho needs the floor.
struct PrimitiveState {
    RealField rho;
    VectorField u;
    RealField chi;
};

inline double min_density(const State& s) {
    return s.formulation == Formulation::Perturbation ? 1.0 + s.rho.min_value()
                                                      : s.rho.min_value();
}
inline double max_density(const State& s) {
    return s.formulation == Formulation::Perturbation ? 1.0 + s.rho.max_value()
                                                      : s.rho.max_value();
}

inline void require_vacuum_floor(const State& s, const ModelParams& p, const char* where) {
    const double lo = min_density(s);
    if (!(lo >= p.vacuum_floor))
        throw VacuumViolation(std::string(where) + ": min density " + std::to_string(lo) +
                              " under floor " + std::to_string(p.vacuum_floor));
}

inline PrimitiveState to_primitive(const State& s, const ModelParams& p) {
    require_vacuum_floor(s, p, "to_primitive");
    PrimitiveState out;
    const auto& g = s.grid();
    if (s.formulation == Formulation::Perturbation) {
        out.rho = RealField(g);
        for (std::size_t i = 0; i < out.rho.size(); ++i) out.rho[i] = 1.0 + s.rho[i];
        out.u = s.mom;
        out.chi = s.chi;
    } else {
        out.rho = s.rho;
        out.u = VectorField(g, g->dim());
        for (int a = 0; a < g->dim(); ++a)
            for (std::size_t i = 0; i < out.rho.size(); ++i)
                out.u[a][i] = s.mom[a][i] / s.rho[i];
        out.chi = RealField(g);
        for (std::size_t i = 0; i < out.chi.size(); ++i) out.chi[i] = s.chi[i] / s.rho[i];
    }
    return out;
}

inline State to_conservative(const State& s, const ModelParams& p) {
    if (s.formulation == Formulation::Conservative) return s;
    require_vacuum_floor(s, p, "to_conservative");
    State out(Formulation::Conservative, s.grid(), s.time);
    for (std::size_t i = 0; i < out.rho.size(); ++i) {
        const double rho = 1.0 + s.rho[i];
        out.rho[i] = rho;
        out.chi[i] = rho * s.chi[i];
        for (int a = 0; a < s.grid()->dim(); ++a) out.mom[a][i] = rho * s.mom[a][i];
    }
    return out;
}

inline State to_perturbation(const State& s, const ModelParams& p) {
    if (s.formulation == Formulation::Perturbation) return s;
    require_vacuum_floor(s, p, "to_perturbation");
    State out(Formulation::Perturbation, s.grid(), s.time);
    for (std::size_t i = 0; i < out.rho.size(); ++i) {
        out.rho[i] = s.rho[i] - 1.0;
        out.chi[i] = s.chi[i] / s.rho[i];
        for (int a = 0; a < s.grid()->dim(); ++a) out.mom[a][i] = s.mom[a][i] / s.rho[i];
    }
    return out;
}

// ---------------------------------------------------------------------------
// Coefficient functions of varrho.

enum class Coefficient { h, g, phi, varphi };

inline double coefficient_value(Coefficient which, double r, const ModelParams& p) {
    switch (which) {
        case Coefficient::h: return r / (r + 1.0);
        case Coefficient::g:
            return p.pressure_scale * p.gamma * std::pow(1.0 + r, p.gamma - 2.0) - 1.0;
        case Coefficient::phi: return 1.0 / (r + 1.0);
        case Coefficient::varphi: return r * (r + 2.0) / ((r + 1.0) * (r + 1.0));
    }
    return 0.0;
}

inline RealField coefficients(const RealField& varrho, Coefficient which, const ModelParams& p) {
    RealField out(varrho.grid);
    const double floor = p.vacuum_floor;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(1.0 + varrho[i] >= floor))
            throw VacuumViolation("coefficients: 1 + varrho under the vacuum floor");
        out[i] = coefficient_value(which, varrho[i], p);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Pressure and free energy.

inline RealField pressure(const RealField& rho, const ModelParams& p) {
    RealField out(rho.grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(rho[i] >= p.vacuum_floor)) throw VacuumViolation("pressure: density under floor");
        out[i] = p.pressure_scale * std::pow(rho[i], p.gamma);
    }
    return out;
}

inline double double_well(double chi) { return 0.25 * chi * chi * chi * chi - 0.5 * chi * chi; }

// Specific free energy Phi(rho, chi). The elastic part carries the pressure
// scale so p = rho^2 dPhi/drho holds for every a, not just a = 1.
inline RealField free_energy_density(const RealField& rho, const RealField& chi,
                                     const ModelParams& p) {
    require_same_grid(*rho.grid, *chi.grid, "free_energy_density");
    RealField out(rho.grid);
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (!(rho[i] >= p.vacuum_floor))
            throw VacuumViolation("free_energy_density: density under floor");
        out[i] = p.pressure_scale * std::pow(rho[i], p.gamma - 1.0) / (p.gamma - 1.0) +
                 double_well(chi[i]) / p.ell;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Capillary (Korteweg) stress divergence: div(grad chi x grad chi
// - |grad chi|^2/2 I). Equals lap(chi) grad(chi) for band-limited chi.

inline VectorField korteweg_div(const RealField& chi) {
    const auto& g = chi.grid;
    const int d = g->dim();
    auto chat = forward(chi);
    VectorField gradchi(g, d);
    for (int a = 0; a < d; ++a) gradchi.comp[a] = inverse(gradient_axis(chat, a));

    // K_ab products, then spectral divergence of the dealiased stress.
    SpectralVectorField div_hat(g, d);
    std::vector<SpectralField> row(d);
    for (int a = 0; a < d; ++a) {
        for (int b = 0; b < d; ++b) {
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
            row[b] = dealias(forward(k_ab));
        }
        SpectralVectorField r;
        r.comp = row;
        div_hat.comp[a] = divergence(r);
    }
    return inverse(div_hat);
}

// omega = -ell*lap(chi)/rho + (chi^3 - chi)/ell
inline RealField chemical_potential(const State& s, const ModelParams& p) {
    require_vacuum_floor(s, p, "chemical_potential");
    const auto prim = to_primitive(s, p);
    auto lap_chi = inverse(laplacian(forward(prim.chi)));
    RealField out(s.grid());
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double c = prim.chi[i];
        out[i] = -p.ell * lap_chi[i] / prim.rho[i] + (c * c * c - c) / p.ell;
    }
    return out;
}

} // namespace nsac
