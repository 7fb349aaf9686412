#pragma once

// Reference decay curve for the linear heat flow acting on power-law data
// |fhat(k)| ~ |k|^{s - d/2}, 0 < |k| <= K:
//
//   n(t)^2 = c int_{k_min}^{K} r^{2(l+s)-1} e^{-2 t r^2} dr,
//
// the shell form of ||lambda^l e^{t lap} f||_{L2}^2 in any dimension (the
// angular measure is absorbed into the arbitrary constant). As t grows the
// whole-space curve (k_min = 0) scales like t^{-(l+s)}, i.e. the norm decays
// with exponent -(l+s)/2. A positive k_min reproduces the infrared
// truncation of a periodic box; for l + s = 0 the whole-space integral
// diverges at r = 0 and a positive k_min is required.

#include <cmath>
#include <utility>
#include <vector>

#include "nsac/errors.hpp"

namespace nsac {

namespace detail {

template <typename F>
double adaptive_simpson(const F& f, double a, double b, double fa, double fm, double fb,
                        double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <typename F>
double integrate(const F& f, double a, double b, double tol) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 48);
}

} // namespace detail

struct HeatDecayOracle {
    double l = 0.0;    // derivative order of the tracked norm
    double s = 0.5;    // negative-Sobolev calibration of the data
    double k_cut = 1.0;
    double k_min = 0.0; // 0 = whole-space idealization

    HeatDecayOracle(double l_, double s_, double k_cut_, double k_min_ = 0.0)
        : l(l_), s(s_), k_cut(k_cut_), k_min(k_min_) {
        if (l < 0.0 || !(s >= 0.0 && s < 1.5))
            throw InvalidRange("heat oracle: need l >= 0 and s in [0, 1.5)");
        if (!(k_cut > k_min) || k_min < 0.0)
            throw InvalidRange("heat oracle: need 0 <= k_min < k_cut");
        if (k_min == 0.0 && l + s <= 0.0)
            throw InvalidRange("heat oracle: the whole-space integral diverges at l + s = 0; "
                               "pass the box's k_min");
    }

    double norm_squared(double t) const {
        const double q = 2.0 * (l + s) - 1.0;
        auto f = [&](double r) { return std::pow(r, q) * std::exp(-2.0 * t * r * r); };
        double total = 0.0;
        double a = k_min;
        if (k_min == 0.0) {
            // integrable singularity: series for int_0^d r^q e^{-2tr^2} dr
            const double d = std::min(k_cut, 0.5 / std::sqrt(1.0 + 2.0 * t));
            double term_coeff = 1.0, series = 0.0;
            for (int n = 0; n < 60; ++n) {
                const double term = term_coeff * std::pow(d, q + 2.0 * n + 1.0) / (q + 2.0 * n + 1.0);
                series += term;
                if (std::abs(term) < 1e-17 * std::abs(series)) break;
                term_coeff *= -2.0 * t / (n + 1.0);
            }
            total += series;
            a = d;
        }
        total += detail::integrate(f, a, k_cut, 1e-14 * std::max(1.0, std::pow(k_cut, q + 1.0)));
        return total;
    }

    double norm(double t) const { return std::sqrt(norm_squared(t)); }

    // slope of log(norm) vs log t in the whole-space late-time regime
    double asymptotic_norm_slope() const { return -0.5 * (l + s); }

    std::vector<std::pair<double, double>> curve(const std::vector<double>& times) const {
        std::vector<std::pair<double, double>> out;
        out.reserve(times.size());
        for (double t : times) out.emplace_back(t, norm(t));
        return out;
    }
};

} // namespace nsac

#include "nsac/grid.hpp"

namespace nsac {

// Infrared cutoff that makes the truncated integral track a mode sum: the
// radius of the ball with the measure of the lattice's missing zero cell.
inline double effective_kmin(const Grid& g) {
    double cell = 1.0;
    for (int a = 0; a < g.dim(); ++a) cell *= 2.0 * kPi / g.length(a);
    const double ball[3] = {2.0, kPi, 4.0 * kPi / 3.0};
    return std::pow(cell / ball[g.dim() - 1], 1.0 / g.dim());
}

// Exact analytic heat decay of the power-law profile on the grid's own mode
// set: n(t)^2 = sum_{0<|k|<=K} |k|^{2l} |k|^{2s-d} e^{-2t|k|^2}. Pure
// arithmetic over the wavenumber tables; independent of the solver path.
inline double lattice_heat_norm(const Grid& g, double l, double s, double k_cut, double t) {
    int midx[Grid::max_dim];
    double sum = 0.0;
    const double ex = l + s - 0.5 * g.dim();
    for (std::size_t i = 0; i < g.point_count(); ++i) {
        g.flat_to_multi(i, midx);
        double k2 = 0.0;
        for (int a = 0; a < g.dim(); ++a) {
            const double k = g.wavenumber(a, midx[a]);
            k2 += k * k;
        }
        if (k2 == 0.0 || std::sqrt(k2) > k_cut) continue;
        sum += std::pow(k2, ex) * std::exp(-2.0 * t * k2);
    }
    return std::sqrt(sum);
}

} // namespace nsac
