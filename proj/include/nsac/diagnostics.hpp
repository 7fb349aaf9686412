#pragma once

// Norm bookkeeping for runs: declarative norm/energy specs evaluated against
// a state, and log-log decay fits over recorded time series.

#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nsac/energies.hpp"

namespace nsac {

enum class NormKind { L2, Lp, Hk, HomHs, GradL2 };
enum class FieldTarget { Rho, U, Chi, GradChi };

inline const char* to_string(FieldTarget t) {
    switch (t) {
        case FieldTarget::Rho: return "rho";
        case FieldTarget::U: return "u";
        case FieldTarget::Chi: return "chi";
        case FieldTarget::GradChi: return "grad_chi";
    }
    return "?";
}

struct NormSpec {
    NormKind kind = NormKind::L2;
    double param = 0.0; // p for Lp, k for Hk, s for HomHs, l for GradL2
    FieldTarget target = FieldTarget::Rho;

    void validate() const {
        switch (kind) {
            case NormKind::L2: break;
            case NormKind::Lp:
                if (!(param > 1.0)) throw ValidationError("Lp norm needs p in (1, inf]");
                break;
            case NormKind::Hk:
                if (param < 0.0 || param != std::floor(param))
                    throw ValidationError("Hk norm needs integer k >= 0");
                break;
            case NormKind::HomHs:
                if (!(param >= 0.0 && param < 1.5))
                    throw ValidationError("HomHs norm needs s in [0, 1.5)");
                break;
            case NormKind::GradL2:
                if (param < 0.0 || param != std::floor(param))
                    throw ValidationError("GradL2 norm needs integer l >= 0");
                break;
        }
    }

    std::string label() const {
        std::ostringstream os;
        switch (kind) {
            case NormKind::L2: os << "L2"; break;
            case NormKind::Lp:
                if (param == std::numeric_limits<double>::infinity())
                    os << "Linf";
                else
                    os << "L" << param;
                break;
            case NormKind::Hk: os << "H" << static_cast<int>(param); break;
            case NormKind::HomHs: os << "Hneg" << param; break;
            case NormKind::GradL2: os << "gradL2_" << static_cast<int>(param); break;
        }
        os << "_" << to_string(target);
        return os.str();
    }
};

struct EnergySpec {
    int l = 0, m = 3;
    double eta = 0.5;
    std::string label() const {
        std::ostringstream os;
        os << "E_" << l << "_" << m << "_eta" << eta;
        return os.str();
    }
};

struct DiagnosticsPlan {
    std::vector<NormSpec> norms;
    std::vector<EnergySpec> energies;
    bool physical_energy = false;

    void validate() const {
        for (const auto& n : norms) n.validate();
        for (const auto& e : energies) {
            if (e.l < 0 || e.l > e.m) throw ValidationError("energy spec needs 0 <= l <= m");
            if (!(e.eta >= 0.0 && e.eta < 1.0)) throw ValidationError("energy spec needs eta in [0,1)");
        }
    }

    std::vector<std::string> column_labels() const {
        std::vector<std::string> cols;
        for (const auto& n : norms) cols.push_back(n.label());
        for (const auto& e : energies) cols.push_back(e.label());
        if (physical_energy) cols.push_back("F_phys");
        cols.push_back("sqrtE03");
        return cols;
    }
};

struct DiagnosticsRecord {
    double t = 0.0;
    std::vector<std::pair<std::string, double>> values;
    double min_rho = 0.0, max_rho = 0.0;

    double value(const std::string& label) const {
        for (const auto& [k, v] : values)
            if (k == label) return v;
        throw InvalidRange("no diagnostics column named " + label);
    }
};

// Evaluate one norm against the perturbation-variable primitives.
inline double evaluate_norm(const NormSpec& spec, const RealField& varrho,
                            const VectorField& u, const RealField& chi,
                            const SpectralField& varrho_hat, const SpectralVectorField& u_hat,
                            const SpectralField& chi_hat) {
    spec.validate();
    const auto& g = varrho.grid;

    auto spectral_scalar = [&](const SpectralField& f) -> double {
        switch (spec.kind) {
            case NormKind::L2: return l2_norm(f);
            case NormKind::Hk: return sobolev_norm(f, static_cast<int>(spec.param));
            case NormKind::HomHs: {
                if (spec.param == 0.0) return l2_norm(f);
                // the torus Hdot^{-s} norm is defined on the fluctuation; the
                // zero mode of evolved fields carries only roundoff dust and
                // is dropped here rather than tripping the strict op guard
                SpectralField fluct = f;
                for (std::size_t i = 0; i < fluct.size(); ++i)
                    if (g->ksq(i) == 0.0) fluct[i] = Complex(0.0, 0.0);
                return neg_sobolev_norm(fluct, spec.param);
            }
            case NormKind::GradL2: return grad_l2_norm(f, spec.param);
            default: return 0.0;
        }
    };

    if (spec.kind == NormKind::Lp) {
        // pointwise Euclidean magnitude for vector targets
        RealField mag(g);
        switch (spec.target) {
            case FieldTarget::Rho: return lp_norm(varrho, spec.param);
            case FieldTarget::Chi: return lp_norm(chi, spec.param);
            case FieldTarget::U: {
                for (std::size_t i = 0; i < mag.size(); ++i) {
                    double s = 0.0;
                    for (int a = 0; a < g->dim(); ++a) s += u[a][i] * u[a][i];
                    mag[i] = std::sqrt(s);
                }
                return lp_norm(mag, spec.param);
            }
            case FieldTarget::GradChi: {
                auto gc = inverse(gradient(chi_hat));
                for (std::size_t i = 0; i < mag.size(); ++i) {
                    double s = 0.0;
                    for (int a = 0; a < g->dim(); ++a) s += gc[a][i] * gc[a][i];
                    mag[i] = std::sqrt(s);
                }
                return lp_norm(mag, spec.param);
            }
        }
    }

    switch (spec.target) {
        case FieldTarget::Rho: return spectral_scalar(varrho_hat);
        case FieldTarget::Chi: return spectral_scalar(chi_hat);
        case FieldTarget::U: {
            double s = 0.0;
            for (const auto& c : u_hat.comp) {
                const double n = spectral_scalar(c);
                s += n * n;
            }
            return std::sqrt(s);
        }
        case FieldTarget::GradChi: {
            auto gch = gradient(chi_hat);
            double s = 0.0;
            for (const auto& c : gch.comp) {
                const double n = spectral_scalar(c);
                s += n * n;
            }
            return std::sqrt(s);
        }
    }
    return 0.0;
}

// Evaluate the full plan; conservative states are converted so diagnostics
// always see (varrho, u, chi). Pure with respect to the state.
inline DiagnosticsRecord record(const State& s, const DiagnosticsPlan& plan,
                                const ModelParams& params) {
    plan.validate();
    if (!s.finite()) throw NonFiniteData("record: non-finite state");
    const State pert = s.formulation == Formulation::Perturbation ? s : to_perturbation(s, params);
    auto ph = forward(pert);

    DiagnosticsRecord rec;
    rec.t = s.time;
    rec.min_rho = 1.0 + pert.rho.min_value();
    rec.max_rho = 1.0 + pert.rho.max_value();
    for (const auto& n : plan.norms)
        rec.values.emplace_back(n.label(),
                                evaluate_norm(n, pert.rho, pert.mom, pert.chi, ph.rho, ph.mom, ph.chi));
    for (const auto& e : plan.energies)
        rec.values.emplace_back(e.label(), energy_functional(ph, e.l, e.m, e.eta));
    if (plan.physical_energy)
        rec.values.emplace_back("F_phys", physical_energy(s, params));
    rec.values.emplace_back("sqrtE03", smallness_monitor(ph));
    return rec;
}

// ---------------------------------------------------------------------------
// Decay fits: least-squares slope of log(value) against log(1+t).

struct DecayFit {
    std::string column;
    double t0 = 0.0, t1 = 0.0;
    int samples = 0;
    double exponent = 0.0;
    double stderr_exponent = 0.0;
    double r_squared = 1.0;
};

inline DecayFit fit_decay(const std::vector<std::pair<double, double>>& series, double t0,
                          double t1, const std::string& column = "") {
    std::vector<double> x, y;
    double prev_t = -std::numeric_limits<double>::infinity();
    for (const auto& [t, v] : series) {
        if (t < t0 || t > t1) continue;
        if (t <= prev_t) throw DegenerateSeries("fit_decay: t values must increase strictly");
        prev_t = t;
        if (!(v > 0.0)) throw DegenerateSeries("fit_decay: values must be positive in the window");
        x.push_back(std::log1p(t));
        y.push_back(std::log(v));
    }
    const int n = static_cast<int>(x.size());
    if (n < 10) throw DegenerateSeries("fit_decay: need at least 10 samples in the window, got " +
                                       std::to_string(n));
    double sx = 0, sy = 0;
    for (int i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0, syy = 0;
    for (int i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw DegenerateSeries("fit_decay: degenerate abscissa");
    DecayFit fit;
    fit.column = column;
    fit.t0 = t0;
    fit.t1 = t1;
    fit.samples = n;
    fit.exponent = sxy / sxx;
    double ssres = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = y[i] - my - fit.exponent * (x[i] - mx);
        ssres += r * r;
    }
    fit.stderr_exponent = n > 2 ? std::sqrt(ssres / (n - 2) / sxx) : 0.0;
    fit.r_squared = syy > 1e-30 ? 1.0 - ssres / syy : 1.0;
    return fit;
}

} // namespace nsac
