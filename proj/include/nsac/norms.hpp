#pragma once

// Sobolev / negative-Sobolev / L^p norms. Spectral sums use the Parseval
// normalization ||f||^2 = (prod L_i) * sum |fhat|^2; L^p uses the rectangle
// rule, which is spectrally accurate for band-limited integrands.

#include <cmath>
#include <limits>

#include "nsac/fft.hpp"
#include "nsac/spectral_ops.hpp"

namespace nsac {

inline double l2_norm(const SpectralField& f) {
    double s = 0.0;
    for (const Complex& c : f.coeffs) s += std::norm(c);
    return std::sqrt(s * f.grid->box_volume());
}

// ||f||_{H^k} = (sum_{l=0..k} ||lambda^l f||_{L2}^2)^{1/2}
inline double sobolev_norm(const SpectralField& f, int k) {
    if (k < 0) throw InvalidRange("sobolev_norm: k must be >= 0");
    const Grid& g = *f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a2 = std::norm(f[i]);
        if (a2 == 0.0) continue;
        const double k2 = g.ksq(i);
        double w = 1.0, pw = 1.0;
        for (int l = 1; l <= k; ++l) {
            pw *= k2;
            w += pw;
        }
        s += a2 * w;
    }
    return std::sqrt(s * g.box_volume());
}

inline double sobolev_norm(const RealField& f, int k) {
    if (!f.finite()) throw NonFiniteData("sobolev_norm: non-finite samples");
    return sobolev_norm(forward(f), k);
}

// ||f||_{Hdot^{-s}} = ||lambda^{-s} f||_{L2}, s in (0, 3/2); requires zero mean.
inline double neg_sobolev_norm(const SpectralField& f, double s) {
    if (!(s > 0.0 && s < 1.5))
        throw InvalidRange("neg_sobolev_norm: s must lie in (0, 1.5)");
    return l2_norm(apply_lambda(f, -s));
}

inline double neg_sobolev_norm(const RealField& f, double s) {
    if (!f.finite()) throw NonFiniteData("neg_sobolev_norm: non-finite samples");
    return neg_sobolev_norm(forward(f), s);
}

// ||lambda^l f||_{L2}
inline double grad_l2_norm(const SpectralField& f, double l) {
    const Grid& g = *f.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a2 = std::norm(f[i]);
        if (a2 == 0.0) continue;
        const double k2 = g.ksq(i);
        s += k2 > 0.0 ? a2 * std::pow(k2, l) : (l == 0.0 ? a2 : 0.0);
    }
    return std::sqrt(s * g.box_volume());
}

inline double lp_norm(const RealField& f, double p) {
    if (!f.finite()) throw NonFiniteData("lp_norm: non-finite samples");
    if (p == std::numeric_limits<double>::infinity()) return f.max_abs();
    if (!(p > 1.0)) throw InvalidRange("lp_norm: p must lie in (1, inf]");
    double s = 0.0;
    for (double v : f.data) s += std::pow(std::abs(v), p);
    return std::pow(s * f.grid->cell_volume(), 1.0 / p);
}

struct InterpolationCheck {
    double lhs;   // ||lambda^l f||
    double rhs;   // ||lambda^{l+k} f||^{1-theta} ||lambda^{-s} f||^{theta}
    double ratio; // lhs / rhs, == 0 for the zero field
};

// ||lambda^l f|| <= ||lambda^{l+k} f||^{1-theta} ||f||_{Hdot^{-s}}^{theta},
// theta = k/(l+k+s). A Fourier-side Hoelder inequality with constant one,
// so the ratio bound is assertable on the grid.
inline InterpolationCheck interpolation_check(const SpectralField& f, int l, int k, double s) {
    if (l < 0 || k < 1 || s < 0.0)
        throw InvalidRange("interpolation_check: need l >= 0, k >= 1, s >= 0");
    const double theta = static_cast<double>(k) / (l + k + s);
    const double lhs = grad_l2_norm(f, static_cast<double>(l));
    if (lhs == 0.0) return {0.0, 0.0, 0.0};
    const double hi = grad_l2_norm(f, static_cast<double>(l + k));
    const double lo = s > 0.0 ? neg_sobolev_norm(f, s) : l2_norm(f);
    const double rhs = std::pow(hi, 1.0 - theta) * std::pow(lo, theta);
    return {lhs, rhs, lhs / rhs};
}

inline InterpolationCheck interpolation_check(const RealField& f, int l, int k, double s) {
    return interpolation_check(forward(f), l, k, s);
}

inline double mean_value(const RealField& f) {
    double s = 0.0;
    for (double v : f.data) s += v;
    return s / static_cast<double>(f.size());
}

} // namespace nsac
