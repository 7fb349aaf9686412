#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <memory>
#include <vector>

#include "nsac/errors.hpp"

namespace nsac {

constexpr double kPi = 3.14159265358979323846;

// Periodic box discretization. Wavenumbers follow the usual signed DFT
// layout {0, 1, ..., N/2-1, -N/2, ..., -1} scaled by 2*pi/L. Two tables are
// kept per axis: the raw table and the derivative table, which zeroes the
// Nyquist entry so that odd-order derivatives stay representable. Every
// spectral operator (grad, div, laplacian, |k|^s multipliers) is built from
// the derivative table, which makes div(grad) == laplacian and
// lambda^2 == -laplacian identities exact, not approximate.
class Grid {
public:
    static constexpr int max_dim = 3;

    Grid(int dim, std::vector<int> sizes, std::vector<double> lengths)
        : dim_(dim), sizes_(std::move(sizes)), lengths_(std::move(lengths)) {
        validate();
        build_tables();
    }

    int dim() const { return dim_; }
    const std::vector<int>& sizes() const { return sizes_; }
    const std::vector<double>& lengths() const { return lengths_; }
    int size(int axis) const { return sizes_[axis]; }
    double length(int axis) const { return lengths_[axis]; }

    std::size_t point_count() const { return npoints_; }
    double box_volume() const { return volume_; }
    double cell_volume() const { return volume_ / static_cast<double>(npoints_); }
    double min_spacing() const {
        double h = lengths_[0] / sizes_[0];
        for (int a = 1; a < dim_; ++a) h = std::min(h, lengths_[a] / sizes_[a]);
        return h;
    }

    // Signed frequency index for array index m on the given axis.
    int signed_index(int axis, int m) const {
        return m < sizes_[axis] - sizes_[axis] / 2 ? m : m - sizes_[axis];
    }

    double wavenumber(int axis, int m) const { return k_full_[axis][m]; }
    double wavenumber_deriv(int axis, int m) const { return k_deriv_[axis][m]; }
    const std::vector<double>& wavenumber_table(int axis) const { return k_full_[axis]; }

    // |k|^2 of the derivative wavevector at a flat spectral index.
    double ksq(std::size_t flat) const { return ksq_[flat]; }
    const std::vector<double>& ksq_table() const { return ksq_; }

    // Largest |k| such that the closed ball |k| <= K lies inside the
    // dealias-retained index box. Products of fields supported in that ball
    // are alias-free after 2/3-rule truncation.
    double dealias_wavenumber() const {
        double kmax = 2.0 * kPi * static_cast<double>(dealias_keep(0)) / lengths_[0];
        for (int a = 1; a < dim_; ++a)
            kmax = std::min(kmax, 2.0 * kPi * static_cast<double>(dealias_keep(a)) / lengths_[a]);
        return kmax;
    }
    // Same, for the full non-Nyquist representable box.
    double representable_wavenumber() const {
        double kmax = 2.0 * kPi * (sizes_[0] / 2 - 1) / lengths_[0];
        for (int a = 1; a < dim_; ++a)
            kmax = std::min(kmax, 2.0 * kPi * (sizes_[a] / 2 - 1) / lengths_[a]);
        return kmax;
    }
    int dealias_keep(int axis) const { return sizes_[axis] / 3; }

    double kmin() const {
        double k = 2.0 * kPi / lengths_[0];
        for (int a = 1; a < dim_; ++a) k = std::min(k, 2.0 * kPi / lengths_[a]);
        return k;
    }

    void flat_to_multi(std::size_t flat, int* midx) const {
        for (int a = dim_ - 1; a >= 0; --a) {
            midx[a] = static_cast<int>(flat % sizes_[a]);
            flat /= sizes_[a];
        }
    }
    std::size_t multi_to_flat(const int* midx) const {
        std::size_t flat = 0;
        for (int a = 0; a < dim_; ++a) flat = flat * sizes_[a] + midx[a];
        return flat;
    }

    // Physical coordinate of sample j on the given axis.
    double coord(int axis, int j) const {
        return lengths_[axis] * static_cast<double>(j) / sizes_[axis];
    }

    bool same_as(const Grid& other) const {
        return dim_ == other.dim_ && sizes_ == other.sizes_ && lengths_ == other.lengths_;
    }

private:
    void validate() const {
        if (dim_ < 1 || dim_ > max_dim)
            throw InvalidGrid("dim must be in {1,2,3}, got " + std::to_string(dim_));
        if (static_cast<int>(sizes_.size()) != dim_ || static_cast<int>(lengths_.size()) != dim_)
            throw InvalidGrid("sizes/lengths must have one entry per axis");
        std::size_t n = 1;
        for (int a = 0; a < dim_; ++a) {
            if (sizes_[a] < 8 || sizes_[a] % 2 != 0)
                throw InvalidGrid("axis " + std::to_string(a) + ": size must be even and >= 8, got " +
                                  std::to_string(sizes_[a]));
            if (!(lengths_[a] > 0.0) || !std::isfinite(lengths_[a]))
                throw InvalidGrid("axis " + std::to_string(a) + ": length must be positive");
            if (n > (std::size_t(1) << 34) / static_cast<std::size_t>(sizes_[a]))
                throw InvalidGrid("total point count exceeds addressable field size");
            n *= static_cast<std::size_t>(sizes_[a]);
        }
    }

    void build_tables() {
        npoints_ = 1;
        volume_ = 1.0;
        for (int a = 0; a < dim_; ++a) {
            npoints_ *= static_cast<std::size_t>(sizes_[a]);
            volume_ *= lengths_[a];
        }
        for (int a = 0; a < dim_; ++a) {
            const int n = sizes_[a];
            k_full_[a].resize(n);
            k_deriv_[a].resize(n);
            for (int m = 0; m < n; ++m) {
                const int ms = signed_index(a, m);
                k_full_[a][m] = 2.0 * kPi * static_cast<double>(ms) / lengths_[a];
                k_deriv_[a][m] = (m == n / 2) ? 0.0 : k_full_[a][m];
            }
        }
        ksq_.resize(npoints_);
        int midx[max_dim] = {0, 0, 0};
        for (std::size_t f = 0; f < npoints_; ++f) {
            double s = 0.0;
            for (int a = 0; a < dim_; ++a) {
                const double k = k_deriv_[a][midx[a]];
                s += k * k;
            }
            ksq_[f] = s;
            for (int a = dim_ - 1; a >= 0; --a) {
                if (++midx[a] < sizes_[a]) break;
                midx[a] = 0;
            }
        }
    }

    int dim_;
    std::vector<int> sizes_;
    std::vector<double> lengths_;
    std::size_t npoints_ = 0;
    double volume_ = 0.0;
    std::array<std::vector<double>, max_dim> k_full_;
    std::array<std::vector<double>, max_dim> k_deriv_;
    std::vector<double> ksq_;
};

using GridPtr = std::shared_ptr<const Grid>;

inline GridPtr make_grid(int dim, std::vector<int> sizes, std::vector<double> lengths) {
    return std::make_shared<const Grid>(dim, std::move(sizes), std::move(lengths));
}

inline void require_same_grid(const Grid& a, const Grid& b, const char* where) {
    if (!a.same_as(b)) throw GridMismatch(std::string(where) + ": fields live on different grids");
}

} // namespace nsac
