#include <doctest.h>

#include <cmath>

#include "nsac/energies.hpp"
#include "nsac/random_fields.hpp"
#include "nsac/rhs.hpp"

using namespace nsac;

namespace {

GridPtr box3(int n = 16) { return make_grid(3, {n, n, n}, {2 * kPi, 2 * kPi, 2 * kPi}); }

RealField fn_of_x(const GridPtr& g, double (*fn)(double)) {
    RealField f(g);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < f.size(); ++i) {
        g->flat_to_multi(i, midx);
        f[i] = fn(g->coord(0, midx[0]));
    }
    return f;
}

// small random perturbation state, band-limited and vacuum-safe
State small_state(const GridPtr& g, std::uint64_t seed, double amp) {
    State s(Formulation::Perturbation, g);
    auto scaled = [&](std::uint64_t k) {
        auto f = random_band_limited_field(g, seed + k);
        const double c = amp / std::max(f.max_abs(), 1e-300);
        for (double& v : f.data) v *= c;
        return f;
    };
    s.rho = scaled(0);
    s.chi = scaled(1);
    for (int a = 0; a < g->dim(); ++a) s.mom.comp[a] = scaled(2 + a);
    return s;
}

double max_abs_diff(const RealField& a, const RealField& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("coefficient functions match their closed forms") {
    ModelParams p;
    p.pressure_scale = 0.5; // a*gamma = 1 at gamma = 2
    p.gamma = 2.0;
    CHECK(coefficient_value(Coefficient::h, 0.0, p) == 0.0);
    CHECK(coefficient_value(Coefficient::h, 1.0, p) == doctest::Approx(0.5));
    CHECK(coefficient_value(Coefficient::varphi, 1.0, p) == doctest::Approx(0.75));
    CHECK(coefficient_value(Coefficient::phi, 0.0, p) == doctest::Approx(1.0));
    // g vanishes identically when a*gamma = 1 and gamma = 2
    for (double r : {-0.4, -0.1, 0.0, 0.3, 0.9})
        CHECK(std::abs(coefficient_value(Coefficient::g, r, p)) < 1e-15);

    auto g = box3(8);
    RealField vac(g, -0.9); // 1 + varrho = 0.1 < 0.25
    CHECK_THROWS_AS(coefficients(vac, Coefficient::h, p), VacuumViolation);
}

TEST_CASE("pointwise identities h + phi = 1 and varphi = 1 - phi^2") {
    ModelParams p;
    auto g = box3(8);
    auto rho = random_band_limited_field(g, 21);
    const double c = 0.6 / rho.max_abs();
    for (double& v : rho.data) v *= c;
    auto h = coefficients(rho, Coefficient::h, p);
    auto phi = coefficients(rho, Coefficient::phi, p);
    auto vphi = coefficients(rho, Coefficient::varphi, p);
    for (std::size_t i = 0; i < rho.size(); ++i) {
        CHECK(std::abs(h[i] + phi[i] - 1.0) <= 1e-12);
        CHECK(std::abs(vphi[i] - (1.0 - phi[i] * phi[i])) <= 1e-12);
    }
}

TEST_CASE("pressure and free energy") {
    ModelParams p;
    p.pressure_scale = 1.0;
    p.gamma = 2.0;
    auto g = box3(8);
    RealField rho2(g, 2.0);
    auto pr = pressure(rho2, p);
    CHECK(pr[0] == doctest::Approx(4.0));

    RealField rho1(g, 1.0), chi1(g, 1.0), chi0(g);
    auto f1 = free_energy_density(rho1, chi1, p);
    CHECK(f1[0] == doctest::Approx(0.75)); // 1 - 1/4

    p.gamma = 1.4;
    auto f2 = free_energy_density(rho1, chi0, p);
    CHECK(f2[0] == doctest::Approx(2.5));
}

TEST_CASE("korteweg divergence equals lap(chi) grad(chi)") {
    auto g = box3(16);
    auto chi = fn_of_x(g, [](double x) { return std::sin(x); });
    auto kd = korteweg_div(chi);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < chi.size(); ++i) {
        g->flat_to_multi(i, midx);
        const double x = g->coord(0, midx[0]);
        CHECK(kd[0][i] == doctest::Approx(-0.5 * std::sin(2 * x)).epsilon(1e-10));
        CHECK(std::abs(kd[1][i]) < 1e-12);
        CHECK(std::abs(kd[2][i]) < 1e-12);
    }

    RealField c(g, 0.7);
    auto kc = korteweg_div(c);
    CHECK(kc.max_abs() < 1e-14);

    // random band-limited chi: independent evaluation of lap(chi) grad(chi)
    auto rnd = random_band_limited_field(g, 99); // N/4 support < N/3
    auto rhat = forward(rnd);
    auto kd2 = korteweg_div(rnd);
    auto lap_chi = inverse(laplacian(rhat));
    auto grad_chi = inverse(gradient(rhat));
    for (int a = 0; a < 3; ++a) {
        RealField prod(g);
        for (std::size_t i = 0; i < prod.size(); ++i) prod[i] = lap_chi[i] * grad_chi[a][i];
        auto ph = dealias(forward(prod));
        auto direct = inverse(ph);
        CHECK(max_abs_diff(kd2[a], direct) <= 1e-10 * std::max(1.0, direct.max_abs()));
    }
}

TEST_CASE("chemical potential") {
    ModelParams p;
    auto g = box3(16);
    State s(Formulation::Perturbation, g);
    s.chi = fn_of_x(g, [](double x) { return std::sin(x); });
    auto omega = chemical_potential(s, p);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < omega.size(); ++i) {
        g->flat_to_multi(i, midx);
        const double sx = std::sin(g->coord(0, midx[0]));
        CHECK(omega[i] == doctest::Approx(sx * sx * sx).epsilon(1e-10));
    }
    State pure(Formulation::Perturbation, g);
    for (double& v : pure.chi.data) v = 1.0;
    CHECK(chemical_potential(pure, p).max_abs() < 1e-12);
    State zero(Formulation::Perturbation, g);
    CHECK(chemical_potential(zero, p).max_abs() < 1e-12);
}

TEST_CASE("perturbation rhs: equilibria and the sin x example") {
    ModelParams p;
    auto g = box3(16);

    State zero(Formulation::Perturbation, g);
    auto nz = perturbation_rhs(zero, p);
    CHECK(nz.rho.max_abs() == 0.0);
    CHECK(nz.mom.max_abs() == 0.0);
    CHECK(nz.chi.max_abs() == 0.0);

    for (double well : {1.0, -1.0, 0.0}) {
        State eq(Formulation::Perturbation, g);
        for (double& v : eq.chi.data) v = well;
        auto n = perturbation_rhs(eq, p);
        CHECK(n.rho.max_abs() < 1e-13);
        CHECK(n.mom.max_abs() < 1e-13);
        CHECK(n.chi.max_abs() < 1e-13);
    }

    State s(Formulation::Perturbation, g);
    s.chi = fn_of_x(g, [](double x) { return std::sin(x); });
    auto n = perturbation_rhs(s, p);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < n.chi.size(); ++i) {
        g->flat_to_multi(i, midx);
        const double sx = std::sin(g->coord(0, midx[0]));
        const double x2 = 2 * g->coord(0, midx[0]);
        CHECK(n.chi[i] == doctest::Approx(-(sx * sx * sx - sx)).epsilon(1e-10));
        CHECK(n.mom[0][i] == doctest::Approx(0.5 * std::sin(x2)).epsilon(1e-10));
    }
    CHECK(n.rho.max_abs() < 1e-13);
}

TEST_CASE("chi tendency agrees with the conservative-derived route") {
    ModelParams p;
    auto g = box3(16);
    for (std::uint64_t seed : {5u, 6u}) {
        auto s = small_state(g, 300 + seed, 0.05);
        auto sh = forward(s);
        auto n = perturbation_rhs_hat(sh, p);

        // route B: lap(chi)/(1+varrho)^2 - u.grad chi - (chi^3-chi)/(1+varrho),
        // minus the linear part lap(chi)
        auto varrho = inverse(sh.rho);
        auto u = inverse(sh.mom);
        auto chi = inverse(sh.chi);
        auto lap_chi = inverse(laplacian(sh.chi));
        auto grad_chi = inverse(gradient(sh.chi));
        RealField routeB(g);
        for (std::size_t i = 0; i < routeB.size(); ++i) {
            const double r = varrho[i];
            double adv = 0.0;
            for (int a = 0; a < 3; ++a) adv += u[a][i] * grad_chi[a][i];
            const double c = chi[i];
            routeB[i] = lap_chi[i] / ((1 + r) * (1 + r)) - adv -
                        (c * c * c - c) / (1 + r) - lap_chi[i];
        }
        auto nb = inverse(dealias(forward(routeB)));
        auto na = inverse(n.chi);
        CHECK(max_abs_diff(na, nb) <= 1e-10 * std::max(1.0, nb.max_abs()));
    }
}

TEST_CASE("conservative rhs: equilibrium and the sin x example") {
    ModelParams p;
    p.pressure_scale = 1.0;
    auto g = box3(16);

    State eq(Formulation::Conservative, g);
    for (std::size_t i = 0; i < eq.rho.size(); ++i) {
        eq.rho[i] = 1.0;
        eq.chi[i] = 1.0; // rho*chi with chi = 1
    }
    auto feq = full_rhs_hat(forward(eq), p);
    CHECK(inverse(feq.rho).max_abs() < 1e-13);
    CHECK(inverse(feq.mom).max_abs() < 1e-13);
    CHECK(inverse(feq.chi).max_abs() < 1e-13);

    State s(Formulation::Conservative, g);
    for (std::size_t i = 0; i < s.rho.size(); ++i) s.rho[i] = 1.0;
    s.chi = fn_of_x(g, [](double x) { return std::sin(x); }); // rho == 1 so rho*chi == chi
    auto f = inverse(full_rhs_hat(forward(s), p));
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < f.chi.size(); ++i) {
        g->flat_to_multi(i, midx);
        const double x = g->coord(0, midx[0]);
        const double sx = std::sin(x);
        CHECK(f.mom[0][i] == doctest::Approx(0.5 * std::sin(2 * x)).epsilon(1e-10));
        CHECK(f.chi[i] == doctest::Approx(-sx * sx * sx).epsilon(1e-10));
    }
}

TEST_CASE("conservative momentum tendency matches a direct assembly") {
    // reference route: m_t = -div(m x u) - grad p + mu lap u
    //                  + (mu+lambda) grad div u - ell div K, u = m/rho
    ModelParams p;
    p.mu = 0.9;
    p.lambda = 0.4;
    p.gamma = 2.0;
    p.pressure_scale = 0.5;
    auto g = box3(16);
    auto sc_hat = forward(to_conservative(small_state(g, 1234, 0.08), p));
    dealias_in_place(sc_hat);
    auto fc = full_rhs_hat(sc_hat, p);
    auto cons = inverse(sc_hat);

    int midx[Grid::max_dim];
    VectorField u(g, 3);
    RealField chi(g), pr(g);
    for (std::size_t i = 0; i < cons.rho.size(); ++i) {
        for (int a = 0; a < 3; ++a) u[a][i] = cons.mom[a][i] / cons.rho[i];
        chi[i] = cons.chi[i] / cons.rho[i];
        pr[i] = p.pressure_scale * std::pow(cons.rho[i], p.gamma);
    }
    SpectralVectorField uhat(g, 3);
    for (int a = 0; a < 3; ++a) uhat.comp[a] = dealias(forward(u[a]));
    auto pr_hat = dealias(forward(pr));
    auto divu_hat = divergence(uhat);
    auto kd = korteweg_div(inverse(dealias(forward(chi))));

    for (int a = 0; a < 3; ++a) {
        SpectralVectorField row(g, 3);
        for (int b = 0; b < 3; ++b) {
            RealField t(g);
            for (std::size_t i = 0; i < t.size(); ++i) t[i] = cons.mom[a][i] * u[b][i];
            row.comp[b] = dealias(forward(t));
        }
        auto divT = divergence(row);
        auto kdhat = dealias(forward(kd[a]));
        SpectralField acc(g);
        for (std::size_t i = 0; i < acc.size(); ++i) {
            g->flat_to_multi(i, midx);
            const double ka = g->wavenumber_deriv(a, midx[a]);
            acc[i] = -divT[i] - Complex(0.0, ka) * pr_hat[i] - p.mu * g->ksq(i) * uhat[a][i] +
                     (p.mu + p.lambda) * Complex(0.0, ka) * divu_hat[i] - p.ell * kdhat[i];
        }
        auto expect = inverse(acc);
        auto got = inverse(fc.mom[a]);
        CHECK(max_abs_diff(got, expect) <= 1e-10 * std::max(1.0, expect.max_abs()));
    }
}

TEST_CASE("density tendency agrees across formulations") {
    ModelParams p;
    p.pressure_scale = 0.5;
    auto g = box3(16);
    auto sp = small_state(g, 42, 0.05);
    // match the solver contract: states are band-limited, so the pointwise
    // conversion products get truncated back into the 2/3 box
    auto sc_hat = forward(to_conservative(sp, p));
    dealias_in_place(sc_hat);

    auto fp = inverse(full_rhs_hat(forward(sp), p));
    auto fc = inverse(full_rhs_hat(sc_hat, p));
    CHECK(max_abs_diff(fp.rho, fc.rho) <= 1e-10 * std::max(1.0, fc.rho.max_abs()));
}

TEST_CASE("mass tendency keeps a zero mean") {
    ModelParams p;
    auto g = box3(16);
    auto s = small_state(g, 77, 0.2);
    auto n = perturbation_rhs_hat(forward(s), p);
    CHECK(std::abs(n.rho[0]) == 0.0); // zero mode of a spectral divergence

    auto nc = conservative_rhs_hat(forward(to_conservative(s, p)), p);
    CHECK(std::abs(nc.rho[0]) == 0.0);
}

TEST_CASE("physical energy values and dissipation identity") {
    ModelParams p;
    p.pressure_scale = 1.0;
    p.gamma = 2.0;
    auto g = box3(12);
    const double vol = g->box_volume();

    State s(Formulation::Perturbation, g);
    for (double& v : s.chi.data) v = 1.0;
    CHECK(physical_energy(s, p) == doctest::Approx(0.75 * vol).epsilon(1e-12));

    State s0(Formulation::Perturbation, g);
    p.gamma = 1.4;
    CHECK(physical_energy(s0, p) == doctest::Approx(vol / 0.4).epsilon(1e-12));

    // directional derivative of F along the exact rhs == dissipation rate
    p.gamma = 2.0;
    auto prim = small_state(g, 11, 0.04);
    for (std::size_t i = 0; i < prim.chi.size(); ++i) prim.chi[i] += 1.0; // near the stable well
    auto cons = to_conservative(prim, p);
    auto dot = inverse(full_rhs_hat(forward(cons), p));
    const double eps = 1e-6;
    State plus = cons, minus = cons;
    for (std::size_t i = 0; i < cons.rho.size(); ++i) {
        plus.rho[i] += eps * dot.rho[i];
        minus.rho[i] -= eps * dot.rho[i];
        plus.chi[i] += eps * dot.chi[i];
        minus.chi[i] -= eps * dot.chi[i];
        for (int a = 0; a < 3; ++a) {
            plus.mom[a][i] += eps * dot.mom[a][i];
            minus.mom[a][i] -= eps * dot.mom[a][i];
        }
    }
    const double fd = (physical_energy(plus, p) - physical_energy(minus, p)) / (2 * eps);
    const double rate = physical_dissipation_rate(cons, p);
    CHECK(rate < 0.0);
    CHECK(fd == doctest::Approx(rate).epsilon(2e-4));
}

TEST_CASE("energy functional: values, positivity, two evaluation routes") {
    ModelParams p;
    auto g = box3(16);

    State zero(Formulation::Perturbation, g);
    CHECK(energy_functional(zero, 0, 3, 0.5) == 0.0);

    State s(Formulation::Perturbation, g);
    s.rho = fn_of_x(g, [](double x) { return std::sin(x); });
    const double vol_factor = g->box_volume() / (2 * kPi); // cross-section volume
    CHECK(energy_functional(s, 0, 0, 0.0) ==
          doctest::Approx(kPi * vol_factor).epsilon(1e-12));

    // single-mode state evaluated spectrally vs direct quadrature
    State sm(Formulation::Perturbation, g);
    sm.rho = fn_of_x(g, [](double x) { return std::sin(x); });
    sm.mom.comp[0] = fn_of_x(g, [](double x) { return std::cos(x); });
    const double eta = 0.5;
    const double spectral = energy_functional(sm, 0, 1, eta);

    auto quad_l2sq = [&](const RealField& f) {
        double q = 0.0;
        for (double v : f.data) q += v * v;
        return q * g->cell_volume();
    };
    auto gr = gradient(sm.rho);
    auto gu = gradient(sm.mom[0]);
    double direct = quad_l2sq(sm.rho) + quad_l2sq(sm.mom[0]) + quad_l2sq(sm.mom[1]) +
                    quad_l2sq(sm.mom[2]);
    for (int a = 0; a < 3; ++a) direct += quad_l2sq(gr[a]) + quad_l2sq(gu[a]);
    double cross = 0.0;
    for (std::size_t i = 0; i < sm.rho.size(); ++i) cross += sm.mom[0][i] * gr[0][i];
    cross *= g->cell_volume();
    direct += eta * cross;
    CHECK(spectral == doctest::Approx(direct).epsilon(1e-11));

    // Cauchy-Schwarz lower bound on random states
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        auto r = small_state(g, 800 + seed, 0.3);
        const double e = energy_functional(r, 0, 2, 0.75);
        const double plain = energy_functional(r, 0, 2, 0.0);
        CHECK(e >= (1.0 - 0.75) / 2.0 * plain);
        CHECK(e >= 0.0);
    }

    CHECK_THROWS_AS(energy_functional(s, 2, 1, 0.5), InvalidRange);
    CHECK_THROWS_AS(energy_functional(s, 0, 1, 1.0), InvalidRange);
}
