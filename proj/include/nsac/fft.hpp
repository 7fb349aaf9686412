#pragma once

// Thin wrapper around FFTW3 complex-to-complex transforms.
// Plans are cached per grid shape behind a mutex; execution uses the
// new-array interface on caller-owned buffers, so concurrent transforms of
// distinct fields are safe. FFTW_FORWARD (e^{-ikx}) is the analysis
// direction; the 1/N normalization sits on the forward transform so the
// inverse reproduces samples exactly.

#include <fftw3.h>

#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nsac/field.hpp"
#include "nsac/grid.hpp"

namespace nsac {

namespace detail {

class FftPlans {
public:
    explicit FftPlans(const std::vector<int>& sizes) {
        std::vector<Complex> a(total(sizes)), b(total(sizes));
        const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
        fwd_ = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(),
                             reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_FORWARD, flags);
        bwd_ = fftw_plan_dft(static_cast<int>(sizes.size()), sizes.data(),
                             reinterpret_cast<fftw_complex*>(a.data()),
                             reinterpret_cast<fftw_complex*>(b.data()), FFTW_BACKWARD, flags);
    }
    ~FftPlans() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(bwd_);
    }
    FftPlans(const FftPlans&) = delete;
    FftPlans& operator=(const FftPlans&) = delete;

    void forward(Complex* in, Complex* out) const {
        fftw_execute_dft(fwd_, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }
    void backward(Complex* in, Complex* out) const {
        fftw_execute_dft(bwd_, reinterpret_cast<fftw_complex*>(in),
                         reinterpret_cast<fftw_complex*>(out));
    }

private:
    static std::size_t total(const std::vector<int>& sizes) {
        std::size_t n = 1;
        for (int s : sizes) n *= static_cast<std::size_t>(s);
        return n;
    }
    fftw_plan fwd_;
    fftw_plan bwd_;
};

inline const FftPlans& plans_for(const Grid& grid) {
    static std::mutex mtx;
    static std::map<std::vector<int>, std::unique_ptr<FftPlans>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(grid.sizes());
    if (it == cache.end())
        it = cache.emplace(grid.sizes(), std::make_unique<FftPlans>(grid.sizes())).first;
    return *it->second;
}

} // namespace detail

inline SpectralField forward(const RealField& f) {
    if (!f.finite()) throw NonFiniteData("forward transform: input has NaN/Inf samples");
    const Grid& g = *f.grid;
    std::vector<Complex> buf(g.point_count());
    for (std::size_t i = 0; i < buf.size(); ++i) buf[i] = Complex(f.data[i], 0.0);
    SpectralField out(f.grid);
    detail::plans_for(g).forward(buf.data(), out.coeffs.data());
    const double scale = 1.0 / static_cast<double>(g.point_count());
    for (Complex& c : out.coeffs) c *= scale;
    return out;
}

inline RealField inverse(const SpectralField& f) {
    if (!f.finite()) throw NonFiniteData("inverse transform: input has NaN/Inf coefficients");
    const Grid& g = *f.grid;
    std::vector<Complex> in(f.coeffs), buf(g.point_count());
    detail::plans_for(g).backward(in.data(), buf.data());
    RealField out(f.grid);
    for (std::size_t i = 0; i < buf.size(); ++i) out.data[i] = buf[i].real();
    return out;
}

inline SpectralVectorField forward(const VectorField& v) {
    SpectralVectorField out;
    out.comp.reserve(v.dim());
    for (int i = 0; i < v.dim(); ++i) out.comp.push_back(forward(v[i]));
    return out;
}

inline VectorField inverse(const SpectralVectorField& v) {
    VectorField out;
    out.comp.reserve(v.dim());
    for (int i = 0; i < v.dim(); ++i) out.comp.push_back(inverse(v[i]));
    return out;
}

// Max deviation from conjugate symmetry, relative to the coefficient norm.
// Real-valued fields keep this at roundoff level under every operator here.
inline double hermitian_defect(const SpectralField& f) {
    const Grid& g = *f.grid;
    int midx[Grid::max_dim], mirror[Grid::max_dim];
    double worst = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        g.flat_to_multi(i, midx);
        for (int a = 0; a < g.dim(); ++a)
            mirror[a] = midx[a] == 0 ? 0 : g.size(a) - midx[a];
        const Complex d = f[i] - std::conj(f[g.multi_to_flat(mirror)]);
        worst = std::max(worst, std::abs(d));
    }
    const double ref = f.coeff_norm();
    return ref > 0.0 ? worst / ref : worst;
}

} // namespace nsac
