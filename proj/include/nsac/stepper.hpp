#pragma once

// IMEX time stepping: stiff linear operator solved exactly per Fourier mode,
// dealiased nonlinear terms treated explicitly.
//
//   IMEX-Euler: (I - dt A) x^{n+1} = x^n + dt N(x^n) + dt F(t^{n+1})
//   IMEX-BDF2:  (3/2 I - dt A) x^{n+1} = 2 x^n - 1/2 x^{n-1}
//               + dt (2 N(x^n) - N(x^{n-1})) + dt F(t^{n+1}),
// first step bootstrapped by two IMEX-Euler half steps.
//
// Restart contract: checkpoints hold real samples, so at every checkpoint
// sync the in-memory spectral state is replaced by forward(samples). A
// resumed run reconstructs exactly that object and the trajectories agree
// bit for bit from the checkpoint on.

#include <cmath>
#include <functional>

#include "nsac/energies.hpp"
#include "nsac/linear_blocks.hpp"

namespace nsac {

enum class Scheme { ImexEuler, ImexBdf2 };

inline const char* to_string(Scheme s) {
    return s == Scheme::ImexEuler ? "imex-euler" : "imex-bdf2";
}

struct StepperConfig {
    Scheme scheme = Scheme::ImexBdf2;
    double dt = 1e-2;
    double t_end = 1.0;
    double cfl_guard = 0.5;
    int cadence = 1;             // diagnostics every this many steps
    double energy_ceiling = 1.0; // sqrt(E_0^3) blow-up ceiling
    bool nonlinear = true;

    void validate() const {
        if (!(dt > 0.0)) throw ValidationError("dt > 0 violated");
        if (!(t_end >= 0.0)) throw ValidationError("t_end >= 0 violated");
        if (cadence < 1) throw ValidationError("cadence >= 1 violated");
        if (!(cfl_guard > 0.0)) throw ValidationError("cfl_guard > 0 violated");
        if (!(energy_ceiling > 0.0)) throw ValidationError("energy_ceiling > 0 violated");
    }
};

// External forcing sampled at a stage time; returns spectral tendencies.
using ForcingSampler = std::function<SpectralState(double)>;

class ImexIntegrator {
public:
    ImexIntegrator(const State& initial, const StepperConfig& cfg, const ModelParams& params,
                   ForcingSampler forcing = nullptr)
        : cfg_(cfg), params_(params), forcing_(std::move(forcing)) {
        cfg_.validate();
        params_.validate();
        if (!initial.finite()) throw NonFiniteData("integrator: non-finite initial state");
        x_ = nsac::forward(initial);
        // linear-only runs keep every representable mode (no products to alias)
        if (cfg_.nonlinear) dealias_in_place(x_);
        const double coup = pressure_coupling(initial.formulation, params_);
        full_ = build_linear_blocks(initial.grid(), params_, cfg_.dt,
                                    cfg_.scheme == Scheme::ImexBdf2 ? 1.5 : 1.0, coup);
        if (cfg_.scheme == Scheme::ImexBdf2)
            half_ = build_linear_blocks(initial.grid(), params_, 0.5 * cfg_.dt, 1.0, coup);
        base_step_ = static_cast<long>(std::llround(initial.time / cfg_.dt));
        aligned_ = static_cast<double>(base_step_) * cfg_.dt == initial.time;
        if (!aligned_) t0_ = initial.time;
    }

    double time() const { return time_at(steps_); }
    long step_index() const { return steps_; }
    long global_step() const { return base_step_ + steps_; }
    const SpectralState& state_hat() const { return x_; }
    State state() const {
        State s = nsac::inverse(x_);
        s.time = time();
        return s;
    }
    double smallness() const { return smallness_monitor(x_); }
    bool has_history() const { return have_history_; }
    State previous_state() const {
        State s = nsac::inverse(prev_);
        s.time = time_at(steps_ - 1);
        return s;
    }

    void step() {
        const double t_next = time_at(steps_ + 1);
        if (cfg_.scheme == Scheme::ImexEuler) {
            euler_step(full_, cfg_.dt, t_next);
        } else if (!have_history_) {
            prev_ = x_;
            n_prev_ = eval_rhs(prev_);
            euler_step(half_, 0.5 * cfg_.dt, time() + 0.5 * cfg_.dt);
            euler_step(half_, 0.5 * cfg_.dt, t_next);
            have_history_ = true;
        } else {
            bdf2_step(t_next);
        }
        ++steps_;
        x_.time = time();
        if (!x_.finite())
            throw NonFiniteData("integrator: solution lost finiteness at t = " +
                                std::to_string(time()));
    }

    // Project the state (and BDF2 history) through its real samples and
    // return them for persistence. Continuing after this call matches a run
    // resumed from the returned snapshots exactly.
    State checkpoint_sync(State* prev_out = nullptr) {
        State cur = state();
        x_ = nsac::forward(cur);
        if (cfg_.nonlinear) dealias_in_place(x_); // mirror a resuming run's constructor
        x_.time = cur.time;
        if (cfg_.scheme == Scheme::ImexBdf2 && have_history_) {
            State prev = previous_state();
            prev_ = nsac::forward(prev);
            if (cfg_.nonlinear) dealias_in_place(prev_);
            n_prev_ = eval_rhs(prev_);
            if (prev_out) *prev_out = prev;
        }
        return cur;
    }

    // Install BDF2 history from a persisted previous state.
    void restore_history(const State& prev) {
        if (cfg_.scheme != Scheme::ImexBdf2) return;
        prev_ = nsac::forward(prev);
        if (cfg_.nonlinear) dealias_in_place(prev_);
        n_prev_ = eval_rhs(prev_);
        have_history_ = true;
    }

private:
    double time_at(long n) const {
        return aligned_ ? static_cast<double>(base_step_ + n) * cfg_.dt
                        : t0_ + static_cast<double>(n) * cfg_.dt;
    }

    SpectralState eval_rhs(const SpectralState& s) const {
        if (!cfg_.nonlinear) return SpectralState(s.formulation, s.grid(), s.time);
        return rhs_hat(s, params_);
    }

    void check_cfl(const SpectralState& s) const {
        if (!cfg_.nonlinear) return;
        double umax = 0.0;
        if (s.formulation == Formulation::Perturbation) {
            for (const auto& c : s.mom.comp) umax = std::max(umax, inverse(c).max_abs());
        } else {
            umax = to_primitive(nsac::inverse(s), params_).u.max_abs();
        }
        const double courant = umax * cfg_.dt / s.grid()->min_spacing();
        if (courant > cfg_.cfl_guard)
            throw CflViolation("advective CFL " + std::to_string(courant) + " exceeds guard " +
                               std::to_string(cfg_.cfl_guard) + " at t = " + std::to_string(time()));
    }

    void euler_step(const LinearBlockTable& table, double dt, double t_stage) {
        check_cfl(x_);
        auto n = eval_rhs(x_);
        accumulate(x_, n, dt);
        if (forcing_) accumulate(x_, forcing_(t_stage), dt);
        apply_inverse(table, x_);
    }

    void bdf2_step(double t_next) {
        check_cfl(x_);
        auto n = eval_rhs(x_);
        SpectralState rhs = x_;
        const std::size_t m = rhs.rho.size();
        for (std::size_t i = 0; i < m; ++i) {
            rhs.rho[i] = 2.0 * x_.rho[i] - 0.5 * prev_.rho[i] +
                         cfg_.dt * (2.0 * n.rho[i] - n_prev_.rho[i]);
            rhs.chi[i] = 2.0 * x_.chi[i] - 0.5 * prev_.chi[i] +
                         cfg_.dt * (2.0 * n.chi[i] - n_prev_.chi[i]);
        }
        for (int a = 0; a < rhs.mom.dim(); ++a)
            for (std::size_t i = 0; i < m; ++i)
                rhs.mom.comp[a][i] = 2.0 * x_.mom[a][i] - 0.5 * prev_.mom[a][i] +
                                     cfg_.dt * (2.0 * n.mom[a][i] - n_prev_.mom[a][i]);
        if (forcing_) accumulate(rhs, forcing_(t_next), cfg_.dt);
        apply_inverse(full_, rhs);
        prev_ = std::move(x_);
        n_prev_ = std::move(n);
        x_ = std::move(rhs);
    }

    static void accumulate(SpectralState& x, const SpectralState& add, double w) {
        const std::size_t m = x.rho.size();
        for (std::size_t i = 0; i < m; ++i) {
            x.rho[i] += w * add.rho[i];
            x.chi[i] += w * add.chi[i];
        }
        for (int a = 0; a < x.mom.dim(); ++a)
            for (std::size_t i = 0; i < m; ++i) x.mom.comp[a][i] += w * add.mom[a][i];
    }

    StepperConfig cfg_;
    ModelParams params_;
    ForcingSampler forcing_;
    LinearBlockTable full_, half_;
    SpectralState x_, prev_, n_prev_;
    bool have_history_ = false;
    long steps_ = 0;
    long base_step_ = 0;
    bool aligned_ = true;
    double t0_ = 0.0;
};

// Advance from initial.time to t_end, recording at the global cadence and at
// the final step. Throws on physics failures; records delivered so far stay
// with the caller for post-mortem.
using RecordCallback = std::function<void(const ImexIntegrator&, long global_step)>;

inline State run_trajectory(ImexIntegrator& integ, double t_start, const StepperConfig& cfg,
                            const RecordCallback& on_record) {
    const double span = cfg.t_end - t_start;
    if (span < 0.0) throw ValidationError("t_end precedes the initial state's time");
    const long nsteps = static_cast<long>(std::llround(span / cfg.dt));
    if (std::abs(static_cast<double>(nsteps) * cfg.dt - span) > 1e-9 * std::max(1.0, span))
        throw ValidationError("t_end - t0 must be an integer multiple of dt");
    if (on_record) on_record(integ, integ.global_step());
    for (long n = 1; n <= nsteps; ++n) {
        integ.step();
        if (integ.global_step() % cfg.cadence == 0 || n == nsteps) {
            if (integ.smallness() > cfg.energy_ceiling)
                throw NonFiniteData("sqrt(E_0^3) exceeded the blow-up ceiling " +
                                    std::to_string(cfg.energy_ceiling));
            if (on_record) on_record(integ, integ.global_step());
        }
    }
    return integ.state();
}

inline State run_trajectory(const State& initial, const StepperConfig& cfg,
                            const ModelParams& params, ForcingSampler forcing,
                            const RecordCallback& on_record) {
    ImexIntegrator integ(initial, cfg, params, std::move(forcing));
    return run_trajectory(integ, initial.time, cfg, on_record);
}

} // namespace nsac
