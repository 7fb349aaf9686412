#pragma once

// Measured-constant reports for the functional inequalities the energy
// method leans on. Nothing here asserts a bound: the implicit constants are
// not pinned down anywhere, so the lab samples seeded random fields, records
// max/mean lhs/rhs ratios and only insists that every ratio is finite.

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include <json.hpp>

#include "nsac/norms.hpp"
#include "nsac/random_fields.hpp"

namespace nsac {

enum class InequalityId { GagliardoNirenberg, KatoPonce, Commutator, HardyLittlewoodSobolev, Composition };

inline const char* to_string(InequalityId id) {
    switch (id) {
        case InequalityId::GagliardoNirenberg: return "GN";
        case InequalityId::KatoPonce: return "KatoPonce";
        case InequalityId::Commutator: return "Commutator";
        case InequalityId::HardyLittlewoodSobolev: return "HLS";
        case InequalityId::Composition: return "Composition";
    }
    return "?";
}

inline InequalityId inequality_from_string(const std::string& s) {
    if (s == "GN") return InequalityId::GagliardoNirenberg;
    if (s == "KatoPonce") return InequalityId::KatoPonce;
    if (s == "Commutator") return InequalityId::Commutator;
    if (s == "HLS") return InequalityId::HardyLittlewoodSobolev;
    if (s == "Composition") return InequalityId::Composition;
    throw InvalidRange("unknown inequality id: " + s);
}

struct InequalityReport {
    std::string id;
    int trials = 0;
    std::uint64_t seed = 0;
    double max_ratio = 0.0;
    double mean_ratio = 0.0;
    std::map<std::string, double> exponents;
    std::string note;
};

inline nlohmann::json to_json(const InequalityReport& r) {
    return nlohmann::json{{"id", r.id},
                          {"trials", r.trials},
                          {"seed", r.seed},
                          {"max_ratio", r.max_ratio},
                          {"mean_ratio", r.mean_ratio},
                          {"exponents", r.exponents},
                          {"note", r.note}};
}

namespace ineq {

constexpr double kInf = std::numeric_limits<double>::infinity();

inline double inv(double p) { return p == kInf ? 0.0 : 1.0 / p; }

struct GnExponents {
    double alpha = 1.0, m = 0.0, l = 2.0;
    double p = 2.0, q = 2.0, r = 2.0;
    double theta = 0.5;
};

inline void validate(const GnExponents& e, int dim) {
    const double d = dim;
    if (!(e.theta >= 0.0 && e.theta <= 1.0))
        throw InvalidExponents("GN: theta must lie in [0,1]");
    if (!(e.m >= 0.0 && e.alpha >= 0.0 && e.m <= e.l && e.alpha <= e.l))
        throw InvalidExponents("GN: need 0 <= m, alpha <= l");
    if (e.p == kInf && !(e.theta > 0.0 && e.theta < 1.0))
        throw InvalidExponents("GN: p = inf requires 0 < theta < 1");
    const double lhs = e.alpha / d - inv(e.p);
    const double rhs = (e.m / d - inv(e.q)) * (1.0 - e.theta) + (e.l / d - inv(e.r)) * e.theta;
    if (std::abs(lhs - rhs) > 1e-12)
        throw InvalidExponents("GN: scaling relation violated");
}

inline double gn_ratio(const SpectralField& fh, const GnExponents& e) {
    const double lhs = lp_norm(inverse(apply_lambda(fh, e.alpha)), e.p);
    const double a = lp_norm(inverse(apply_lambda(fh, e.m)), e.q);
    const double b = lp_norm(inverse(apply_lambda(fh, e.l)), e.r);
    const double rhs = std::pow(a, 1.0 - e.theta) * std::pow(b, e.theta);
    return lhs == 0.0 ? 0.0 : lhs / rhs;
}

struct KatoPonceExponents {
    double s = 1.5;
    double p = 2.0, p1 = kInf, p2 = 2.0, q1 = 2.0, q2 = kInf;
};

inline void validate(const KatoPonceExponents& e) {
    if (!(e.s > 0.0)) throw InvalidExponents("KatoPonce: s must be positive");
    if (!(e.p2 > 1.0 && e.p2 < kInf && e.q2 > 1.0))
        throw InvalidExponents("KatoPonce: p2 in (1,inf), q2 in (1,inf]");
    if (std::abs(inv(e.p) - inv(e.p1) - inv(e.p2)) > 1e-12 ||
        std::abs(inv(e.p) - inv(e.q1) - inv(e.q2)) > 1e-12)
        throw InvalidExponents("KatoPonce: need 1/p = 1/p1 + 1/p2 = 1/q1 + 1/q2");
}

inline double kato_ponce_ratio(const RealField& f, const RealField& g, const KatoPonceExponents& e) {
    require_same_grid(*f.grid, *g.grid, "kato_ponce_ratio");
    RealField fg(f.grid);
    for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = f[i] * g[i];
    const double lhs = lp_norm(inverse(apply_lambda(forward(fg), e.s)), e.p);
    const double rhs = lp_norm(f, e.p1) * lp_norm(inverse(apply_lambda(forward(g), e.s)), e.p2) +
                       lp_norm(inverse(apply_lambda(forward(f), e.s)), e.q1) * lp_norm(g, e.q2);
    return lhs == 0.0 ? 0.0 : lhs / rhs;
}

struct CommutatorExponents {
    int m = 2;
    double p = 2.0, p1 = kInf, p2 = 2.0, p3 = 2.0, p4 = kInf;
};

inline void validate(const CommutatorExponents& e) {
    if (e.m < 1) throw InvalidExponents("Commutator: m must be a positive integer");
    if (!(e.p > 1.0 && e.p < kInf && e.p2 > 1.0 && e.p2 < kInf && e.p3 > 1.0 && e.p3 < kInf))
        throw InvalidExponents("Commutator: p, p2, p3 must lie in (1, inf)");
    if (std::abs(inv(e.p) - inv(e.p1) - inv(e.p2)) > 1e-12 ||
        std::abs(inv(e.p) - inv(e.p3) - inv(e.p4)) > 1e-12)
        throw InvalidExponents("Commutator: need 1/p = 1/p1 + 1/p2 = 1/p3 + 1/p4");
}

inline double commutator_ratio(const RealField& f, const RealField& g, const CommutatorExponents& e) {
    require_same_grid(*f.grid, *g.grid, "commutator_ratio");
    RealField fg(f.grid);
    for (std::size_t i = 0; i < fg.size(); ++i) fg[i] = f[i] * g[i];
    auto lam_fg = inverse(apply_lambda(forward(fg), e.m));
    auto lam_g = inverse(apply_lambda(forward(g), e.m));
    RealField comm(f.grid);
    for (std::size_t i = 0; i < comm.size(); ++i) comm[i] = lam_fg[i] - f[i] * lam_g[i];
    const double lhs = lp_norm(comm, e.p);
    // roundoff floor: the two routes to lambda^m(fg) differ at machine level
    if (lhs <= 1e-11 * f.max_abs() * lp_norm(lam_g, e.p)) return 0.0;
    const double rhs =
        lp_norm(inverse(apply_lambda(forward(f), 1.0)), e.p1) *
            lp_norm(inverse(apply_lambda(forward(g), e.m - 1.0)), e.p2) +
        lp_norm(inverse(apply_lambda(forward(f), static_cast<double>(e.m))), e.p3) * lp_norm(g, e.p4);
    return lhs / rhs;
}

struct HlsExponents {
    double s = 0.75;
    double p = 0.0; // derived from s when 0
};

inline HlsExponents validate(HlsExponents e, int dim) {
    if (!(e.s > 0.0 && e.s < 1.5)) throw InvalidExponents("HLS: s must lie in (0, 3/2)");
    const double want = 1.0 / (0.5 + e.s / dim);
    if (e.p == 0.0) e.p = want;
    if (std::abs(1.0 / e.p - (0.5 + e.s / dim)) > 1e-12)
        throw InvalidExponents("HLS: need 1/p = 1/2 + s/d");
    if (!(e.p > 1.0 && e.p <= 2.0)) throw InvalidExponents("HLS: p must lie in (1, 2]");
    return e;
}

inline double hls_ratio(const RealField& f, const HlsExponents& e) {
    const double lhs = neg_sobolev_norm(f, e.s);
    const double rhs = lp_norm(f, e.p);
    return lhs == 0.0 ? 0.0 : lhs / rhs;
}

struct CompositionExponents {
    int m = 2;
    double p = 2.0;
    double linf_cap = 0.5;
};

inline void validate(const CompositionExponents& e) {
    if (e.m < 1) throw InvalidExponents("Composition: m must be a positive integer");
    if (!(e.p > 1.0)) throw InvalidExponents("Composition: p must exceed 1");
    if (!(e.linf_cap > 0.0 && e.linf_cap <= 1.0))
        throw InvalidExponents("Composition: L-inf cap must lie in (0, 1]");
}

// f(rho) = rho/(1+rho): smooth with bounded derivatives on |rho| <= 1/2.
inline double composition_ratio(const RealField& rho, const CompositionExponents& e) {
    RealField h(rho.grid);
    for (std::size_t i = 0; i < h.size(); ++i) h[i] = rho[i] / (rho[i] + 1.0);
    const double lhs = lp_norm(inverse(apply_lambda(forward(h), e.m)), e.p);
    const double rhs = lp_norm(inverse(apply_lambda(forward(rho), e.m)), e.p);
    return lhs == 0.0 ? 0.0 : lhs / rhs;
}

} // namespace ineq

struct InequalityLabConfig {
    ineq::GnExponents gn;
    ineq::KatoPonceExponents kato;
    ineq::CommutatorExponents comm;
    ineq::HlsExponents hls;
    ineq::CompositionExponents comp;
};

inline InequalityReport inequality_lab(InequalityId id, int trials, std::uint64_t seed,
                                       const GridPtr& grid, const InequalityLabConfig& cfg = {}) {
    if (trials < 1) throw InvalidRange("inequality_lab: trials must be >= 1");
    InequalityReport rep;
    rep.id = to_string(id);
    rep.trials = trials;
    rep.seed = seed;

    auto zero_mean = [](RealField f) {
        const double m = mean_value(f);
        for (double& v : f.data) v -= m;
        return f;
    };

    double sum = 0.0;
    for (int t = 0; t < trials; ++t) {
        const std::uint64_t s1 = seed + 2 * static_cast<std::uint64_t>(t);
        const std::uint64_t s2 = seed + 2 * static_cast<std::uint64_t>(t) + 1;
        double ratio = 0.0;
        switch (id) {
            case InequalityId::GagliardoNirenberg: {
                ineq::validate(cfg.gn, grid->dim());
                ratio = ineq::gn_ratio(forward(zero_mean(random_band_limited_field(grid, s1))), cfg.gn);
                rep.exponents = {{"alpha", cfg.gn.alpha}, {"m", cfg.gn.m},   {"l", cfg.gn.l},
                                 {"p", cfg.gn.p},         {"q", cfg.gn.q},   {"r", cfg.gn.r},
                                 {"theta", cfg.gn.theta}};
                break;
            }
            case InequalityId::KatoPonce: {
                ineq::validate(cfg.kato);
                ratio = ineq::kato_ponce_ratio(random_band_limited_field(grid, s1),
                                               random_band_limited_field(grid, s2), cfg.kato);
                rep.exponents = {{"s", cfg.kato.s}, {"p", cfg.kato.p},   {"p1", cfg.kato.p1},
                                 {"p2", cfg.kato.p2}, {"q1", cfg.kato.q1}, {"q2", cfg.kato.q2}};
                rep.note = "hypothesis line as printed lists a stray q_4 exponent; "
                           "the standard relation 1/p = 1/p1 + 1/p2 = 1/q1 + 1/q2 is used";
                break;
            }
            case InequalityId::Commutator: {
                ineq::validate(cfg.comm);
                ratio = ineq::commutator_ratio(random_band_limited_field(grid, s1),
                                               random_band_limited_field(grid, s2), cfg.comm);
                rep.exponents = {{"m", static_cast<double>(cfg.comm.m)},
                                 {"p", cfg.comm.p},   {"p1", cfg.comm.p1}, {"p2", cfg.comm.p2},
                                 {"p3", cfg.comm.p3}, {"p4", cfg.comm.p4}};
                break;
            }
            case InequalityId::HardyLittlewoodSobolev: {
                const auto e = ineq::validate(cfg.hls, grid->dim());
                ratio = ineq::hls_ratio(zero_mean(random_band_limited_field(grid, s1)), e);
                rep.exponents = {{"s", e.s}, {"p", e.p}};
                break;
            }
            case InequalityId::Composition: {
                ineq::validate(cfg.comp);
                auto rho = random_band_limited_field(grid, s1);
                const double cap = cfg.comp.linf_cap / std::max(rho.max_abs(), 1e-300);
                for (double& v : rho.data) v *= cap;
                ratio = ineq::composition_ratio(rho, cfg.comp);
                rep.exponents = {{"m", static_cast<double>(cfg.comp.m)},
                                 {"p", cfg.comp.p},
                                 {"linf_cap", cfg.comp.linf_cap}};
                break;
            }
        }
        if (!std::isfinite(ratio))
            throw NonFiniteData("inequality_lab: sampled ratio is not finite (trial " +
                                std::to_string(t) + ")");
        rep.max_ratio = std::max(rep.max_ratio, ratio);
        sum += ratio;
    }
    rep.mean_ratio = sum / trials;
    return rep;
}

} // namespace nsac
