#pragma once

// Method of manufactured solutions. A manufactured triple (varrho*, u*,
// chi*) is sampled on the grid together with its analytic time derivative;
// the forcing F(t) = d/dt x*(t) - RHS(x*(t)) then makes x* an exact solution
// of the forced system. The RHS here is evaluated *without* dealiasing so F
// equals the continuum forcing sampled on the grid whenever the manufactured
// fields are trigonometric polynomials resolved by the grid; the run itself
// still dealiases, which is exactly the spatial truncation under test.

#include <functional>
#include <string>

#include "nsac/rhs.hpp"
#include "nsac/stepper.hpp"

namespace nsac {

struct ManufacturedSolution {
    std::string name;
    GridPtr grid;
    // state and its time derivative at time t (perturbation form)
    std::function<State(double)> state_at;
    std::function<State(double)> rate_at;
};

inline ForcingSampler mms_forcing(const ManufacturedSolution& ms, const ModelParams& params) {
    if (!(1.0 + ms.state_at(0.0).rho.min_value() >= params.vacuum_floor))
        throw VacuumViolation("mms_forcing: manufactured data violates the vacuum floor");
    return [ms, params](double t) {
        auto xhat = forward(ms.state_at(t));
        auto rate = forward(ms.rate_at(t));
        auto rhs = full_rhs_hat(xhat, params, /*dealias_products=*/false);
        SpectralState f(Formulation::Perturbation, ms.grid, t);
        const std::size_t m = f.rho.size();
        for (std::size_t i = 0; i < m; ++i) {
            f.rho[i] = rate.rho[i] - rhs.rho[i];
            f.chi[i] = rate.chi[i] - rhs.chi[i];
        }
        for (int a = 0; a < f.mom.dim(); ++a)
            for (std::size_t i = 0; i < m; ++i)
                f.mom.comp[a][i] = rate.mom[a][i] - rhs.mom[a][i];
        return f;
    };
}

// chi* = e^{-t} sin(x1), varrho* = u* = 0. Exercises the double well and the
// capillary force; the linear heat part cancels in the chi forcing.
inline ManufacturedSolution mms_chi_decay(const GridPtr& g) {
    ManufacturedSolution ms;
    ms.name = "chi-decay";
    ms.grid = g;
    auto fill = [g](double t, double scale) {
        State s(Formulation::Perturbation, g, t);
        int midx[Grid::max_dim];
        for (std::size_t i = 0; i < s.chi.size(); ++i) {
            g->flat_to_multi(i, midx);
            s.chi[i] = scale * std::exp(-t) * std::sin(g->coord(0, midx[0]));
        }
        return s;
    };
    ms.state_at = [fill](double t) { return fill(t, 1.0); };
    ms.rate_at = [fill](double t) { return fill(t, -1.0); };
    return ms;
}

// Fully coupled trigonometric triple with decaying amplitude; chi sits near
// the stable well at +1. amp keeps the analytic coefficient functions'
// spectral tails below the resolved band.
inline ManufacturedSolution mms_coupled_trig(const GridPtr& g, double amp = 0.05) {
    ManufacturedSolution ms;
    ms.name = "coupled-trig";
    ms.grid = g;
    const int d = g->dim();
    auto fields = [g, d, amp](double t, bool rate) {
        State s(Formulation::Perturbation, g, t);
        const double e = std::exp(-t) * amp * (rate ? -1.0 : 1.0);
        const double c0 = rate ? 0.0 : 1.0;
        int midx[Grid::max_dim];
        for (std::size_t i = 0; i < s.chi.size(); ++i) {
            g->flat_to_multi(i, midx);
            const double x = g->coord(0, midx[0]);
            const double y = d >= 2 ? g->coord(1, midx[1]) : 0.0;
            const double z = d >= 3 ? g->coord(2, midx[2]) : 0.0;
            s.rho[i] = e * std::cos(x);
            s.chi[i] = c0 + e * std::cos(d >= 2 ? y : x);
            s.mom.comp[0][i] = e * std::sin(x) + (d >= 2 ? 0.5 * e * std::sin(y) : 0.0);
            if (d >= 2) s.mom.comp[1][i] = e * std::sin(y);
            if (d >= 3) s.mom.comp[2][i] = e * std::sin(z);
        }
        return s;
    };
    ms.state_at = [fields](double t) { return fields(t, false); };
    ms.rate_at = [fields](double t) { return fields(t, true); };
    return ms;
}

// Max-abs error of the forced numerical solution against the manufactured
// one at t_end.
inline double mms_run_error(const ManufacturedSolution& ms, const ModelParams& params,
                            Scheme scheme, double dt, double t_end) {
    StepperConfig cfg;
    cfg.scheme = scheme;
    cfg.dt = dt;
    cfg.t_end = t_end;
    cfg.cadence = 1 << 30;
    cfg.energy_ceiling = 1e9;
    auto fin = run_trajectory(ms.state_at(0.0), cfg, params, mms_forcing(ms, params), nullptr);
    auto exact = ms.state_at(t_end);
    double err = 0.0;
    for (std::size_t i = 0; i < fin.rho.size(); ++i) {
        err = std::max(err, std::abs(fin.rho[i] - exact.rho[i]));
        err = std::max(err, std::abs(fin.chi[i] - exact.chi[i]));
        for (int a = 0; a < fin.mom.dim(); ++a)
            err = std::max(err, std::abs(fin.mom[a][i] - exact.mom[a][i]));
    }
    return err;
}

// Least-squares slope of log(err) vs log(dt) over {4h, 2h, h}.
inline double mms_temporal_order(const ManufacturedSolution& ms, const ModelParams& params,
                                 Scheme scheme, double h, double t_end) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (double dt : {4 * h, 2 * h, h}) {
        const double e = mms_run_error(ms, params, scheme, dt, t_end);
        const double x = std::log(dt), y = std::log(e);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (3 * sxy - sx * sy) / (3 * sxx - sx * sx);
}

} // namespace nsac
