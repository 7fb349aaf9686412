#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

#include "nsac/grid.hpp"

namespace nsac {

using Complex = std::complex<double>;

// Scalar field sampled on the grid, row-major in axis order.
struct RealField {
    GridPtr grid;
    std::vector<double> data;

    RealField() = default;
    explicit RealField(GridPtr g, double fill = 0.0)
        : grid(std::move(g)), data(grid->point_count(), fill) {}

    std::size_t size() const { return data.size(); }
    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    bool finite() const {
        for (double v : data)
            if (!std::isfinite(v)) return false;
        return true;
    }
    double max_abs() const {
        double m = 0.0;
        for (double v : data) m = std::max(m, std::abs(v));
        return m;
    }
    double min_value() const {
        double m = data.empty() ? 0.0 : data[0];
        for (double v : data) m = std::min(m, v);
        return m;
    }
    double max_value() const {
        double m = data.empty() ? 0.0 : data[0];
        for (double v : data) m = std::max(m, v);
        return m;
    }
};

// Fourier coefficients of a RealField under the convention
//   f(x) = sum_k fhat(k) exp(i k.x),
// i.e. the forward transform carries the 1/N normalization. Parseval then
// reads ||f||_L2^2 = (prod L_i) * sum_k |fhat(k)|^2.
struct SpectralField {
    GridPtr grid;
    std::vector<Complex> coeffs;

    SpectralField() = default;
    explicit SpectralField(GridPtr g) : grid(std::move(g)), coeffs(grid->point_count()) {}

    std::size_t size() const { return coeffs.size(); }
    Complex& operator[](std::size_t i) { return coeffs[i]; }
    const Complex& operator[](std::size_t i) const { return coeffs[i]; }

    bool finite() const {
        for (const Complex& c : coeffs)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
        return true;
    }
    // Plain coefficient l2 norm (no volume factor); used for relative checks.
    double coeff_norm() const {
        double s = 0.0;
        for (const Complex& c : coeffs) s += std::norm(c);
        return std::sqrt(s);
    }
};

// d scalar components sharing one grid.
struct VectorField {
    std::vector<RealField> comp;

    VectorField() = default;
    VectorField(GridPtr g, int d) {
        comp.reserve(d);
        for (int i = 0; i < d; ++i) comp.emplace_back(g);
    }

    int dim() const { return static_cast<int>(comp.size()); }
    RealField& operator[](int i) { return comp[i]; }
    const RealField& operator[](int i) const { return comp[i]; }
    const GridPtr& grid() const { return comp.front().grid; }

    bool finite() const {
        return std::all_of(comp.begin(), comp.end(), [](const RealField& f) { return f.finite(); });
    }
    double max_abs() const {
        double m = 0.0;
        for (const auto& f : comp) m = std::max(m, f.max_abs());
        return m;
    }
};

struct SpectralVectorField {
    std::vector<SpectralField> comp;

    SpectralVectorField() = default;
    SpectralVectorField(GridPtr g, int d) {
        comp.reserve(d);
        for (int i = 0; i < d; ++i) comp.emplace_back(g);
    }
    int dim() const { return static_cast<int>(comp.size()); }
    SpectralField& operator[](int i) { return comp[i]; }
    const SpectralField& operator[](int i) const { return comp[i]; }
    const GridPtr& grid() const { return comp.front().grid; }
};

} // namespace nsac
