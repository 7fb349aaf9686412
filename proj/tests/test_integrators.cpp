#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "nsac/random_fields.hpp"
#include "nsac/stepper.hpp"

using namespace nsac;

namespace {

using CMat = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CVec = Eigen::VectorXcd;

CMat dense_A(const Grid& g, const ModelParams& p, double coupling, const int* midx) {
    const int n = g.dim() + 2;
    auto flat = linear_matrix(g, p, coupling, midx);
    CMat A(n, n);
    for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) A(r, c) = flat[r * n + c];
    return A;
}

RealField scaled_random(const GridPtr& g, std::uint64_t seed, double maxabs) {
    auto f = random_band_limited_field(g, seed);
    const double c = maxabs / std::max(f.max_abs(), 1e-300);
    for (double& v : f.data) v *= c;
    return f;
}

State tiny_transverse(const GridPtr& g, double amp) {
    State s(Formulation::Perturbation, g);
    int midx[Grid::max_dim];
    for (std::size_t i = 0; i < s.rho.size(); ++i) {
        g->flat_to_multi(i, midx);
        s.mom.comp[1][i] = amp * std::sin(g->coord(0, midx[0]));
    }
    return s;
}

} // namespace

TEST_CASE("implicit factors: identity at k = 0, transverse scalar, acoustic block") {
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 0.0;
    auto g = make_grid(1, {16}, {2 * kPi});
    auto table = build_linear_blocks(g, p, 0.1, 1.0, 1.0);

    SpectralState x(Formulation::Perturbation, g);
    x.rho[0] = Complex(1.5, -0.5);
    x.chi[0] = Complex(0.25, 0.0);
    x.mom.comp[0][0] = Complex(-1.0, 2.0);
    apply_inverse(table, x);
    CHECK(x.rho[0] == Complex(1.5, -0.5)); // A(0) = 0 -> identity solve
    CHECK(x.chi[0] == Complex(0.25, 0.0));
    CHECK(x.mom[0][0] == Complex(-1.0, 2.0));

    // transverse factor 1/(1 + dt mu |k|^2) = 5/7 at |k| = 2, dt = 0.1
    auto g2 = make_grid(2, {16, 16}, {2 * kPi, 2 * kPi});
    auto t2 = build_linear_blocks(g2, p, 0.1, 1.0, 1.0);
    SpectralState y(Formulation::Perturbation, g2);
    int midx[2] = {2, 0}; // k = (2, 0); u_y is transverse
    const std::size_t idx = g2->multi_to_flat(midx);
    y.mom.comp[1][idx] = Complex(1.0, 0.0);
    apply_inverse(t2, y);
    CHECK(y.mom[1][idx].real() == doctest::Approx(5.0 / 7.0).epsilon(1e-14));

    // acoustic-viscous block at mu = 1, lambda = 0, |k| = 1: double eigenvalue -1
    int m1[1] = {1};
    // defective double eigenvalue -1: numerical eigenvalues carry sqrt(eps)
    auto A = dense_A(*g, p, 1.0, m1);
    Eigen::ComplexEigenSolver<CMat> es(A);
    for (int i = 0; i < 3; ++i)
        CHECK(std::abs(es.eigenvalues()(i) - Complex(-1.0, 0.0)) < 1e-6);
    for (double dt : {0.05, 0.5}) {
        // spectral radius of the implicit factor is 1/(1+dt)
        CMat M = CMat::Identity(3, 3) - dt * A;
        Eigen::ComplexEigenSolver<CMat> esf(M.inverse());
        double radius = 0.0;
        for (int i = 0; i < 3; ++i) radius = std::max(radius, std::abs(esf.eigenvalues()(i)));
        CHECK(radius == doctest::Approx(1.0 / (1.0 + dt)).epsilon(1e-6));
    }
}

TEST_CASE("per-mode solve matches a dense LU oracle") {
    ModelParams p;
    p.mu = 0.7;
    p.lambda = -0.3;
    auto g = make_grid(3, {8, 8, 8}, {2 * kPi, 3.0, 1.0});
    const double dt = 0.37, sigma = 1.5, coupling = 1.3;
    auto table = build_linear_blocks(g, p, dt, sigma, coupling);

    std::mt19937_64 rng(9);
    auto rnd = [&] { return Complex(static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5,
                                    static_cast<double>(rng() >> 11) * 0x1.0p-53 - 0.5); };
    SpectralState b(Formulation::Perturbation, g);
    for (std::size_t i = 0; i < b.rho.size(); ++i) {
        b.rho[i] = rnd();
        b.chi[i] = rnd();
        for (int a = 0; a < 3; ++a) b.mom.comp[a][i] = rnd();
    }
    SpectralState x = b;
    apply_inverse(table, x);

    int midx[3];
    double worst = 0.0;
    for (std::size_t i = 0; i < b.rho.size(); ++i) {
        g->flat_to_multi(i, midx);
        auto A = dense_A(*g, p, coupling, midx);
        CMat M = sigma * CMat::Identity(5, 5) - dt * A;
        CVec rhs(5), sol(5);
        rhs << b.rho[i], b.mom[0][i], b.mom[1][i], b.mom[2][i], b.chi[i];
        sol << x.rho[i], x.mom[0][i], x.mom[1][i], x.mom[2][i], x.chi[i];
        CVec expect = M.partialPivLu().solve(rhs);
        worst = std::max(worst, (sol - expect).cwiseAbs().maxCoeff());
    }
    CHECK(worst < 1e-12);
}

TEST_CASE("linear stability: eigenvalues in the left half plane, solve non-expansive") {
    ModelParams p;
    p.mu = 0.4;
    p.lambda = -0.2; // 2mu+3lambda = 0.2 >= 0
    auto g = make_grid(2, {16, 16}, {2 * kPi, 5.0});
    int midx[2];
    for (double coupling : {1.0, 2.0}) {
        for (std::size_t i = 0; i < g->point_count(); ++i) {
            g->flat_to_multi(i, midx);
            auto A = dense_A(*g, p, coupling, midx);
            Eigen::ComplexEigenSolver<CMat> es(A);
            for (int e = 0; e < 4; ++e) {
                CHECK(es.eigenvalues()(e).real() <= 1e-12);
                for (double dt : {0.1, 1.0, 10.0})
                    CHECK(std::abs(1.0 / (1.0 - dt * es.eigenvalues()(e))) <= 1.0 + 1e-12);
            }
        }
    }
}

TEST_CASE("with N == 0, one Euler step is exactly the rational solve") {
    ModelParams p;
    p.mu = 0.9;
    p.lambda = 0.1;
    auto g = make_grid(2, {16, 16}, {2 * kPi, 3.0});
    // single-mode data: one Hermitian pair in every unknown
    State s(Formulation::Perturbation, g);
    int midx[2] = {2, 3};
    auto put = [&](RealField& f, double re, double im) {
        SpectralField fh(g);
        const std::size_t i = g->multi_to_flat(midx);
        int mirror[2] = {g->size(0) - midx[0], g->size(1) - midx[1]};
        fh[i] = Complex(re, im);
        fh[g->multi_to_flat(mirror)] = std::conj(fh[i]);
        f = inverse(fh);
    };
    put(s.rho, 0.3, -0.2);
    put(s.chi, -0.1, 0.4);
    put(s.mom.comp[0], 0.7, 0.1);
    put(s.mom.comp[1], -0.5, 0.6);

    StepperConfig cfg;
    cfg.scheme = Scheme::ImexEuler;
    cfg.dt = 0.31;
    cfg.t_end = cfg.dt;
    cfg.nonlinear = false;
    cfg.energy_ceiling = 1e9;
    ImexIntegrator integ(s, cfg, p, nullptr);
    auto before = integ.state_hat();
    integ.step();
    const auto& after = integ.state_hat();

    auto A = dense_A(*g, p, 1.0, midx);
    CMat M = CMat::Identity(4, 4) - cfg.dt * A;
    const std::size_t i = g->multi_to_flat(midx);
    CVec b(4), got(4);
    b << before.rho[i], before.mom[0][i], before.mom[1][i], before.chi[i];
    got << after.rho[i], after.mom[0][i], after.mom[1][i], after.chi[i];
    CVec expect = M.partialPivLu().solve(b);
    CHECK((got - expect).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero state and equilibria are fixed points of the stepper") {
    ModelParams p;
    auto g = make_grid(2, {12, 12}, {2 * kPi, 2 * kPi});
    for (auto scheme : {Scheme::ImexEuler, Scheme::ImexBdf2}) {
        StepperConfig cfg;
        cfg.scheme = scheme;
        cfg.dt = 0.05;
        cfg.t_end = 10.0;
        cfg.cadence = 50;
        cfg.energy_ceiling = 1e6; // chi == 1 background carries O(|box|^1/2) norm
        State eq(Formulation::Perturbation, g);
        for (double& v : eq.chi.data) v = 1.0;
        auto fin = run_trajectory(eq, cfg, p, nullptr, nullptr);
        double dev = fin.rho.max_abs() + fin.mom.max_abs();
        for (std::size_t i = 0; i < fin.chi.size(); ++i)
            dev = std::max(dev, std::abs(fin.chi[i] - 1.0));
        CHECK(dev <= 1e-12);

        State zero(Formulation::Perturbation, g);
        auto fz = run_trajectory(zero, cfg, p, nullptr, nullptr);
        CHECK(fz.rho.max_abs() == 0.0);
        CHECK(fz.mom.max_abs() == 0.0);
        CHECK(fz.chi.max_abs() == 0.0);
    }
}

TEST_CASE("tiny transverse mode decays by the implicit Euler factor") {
    ModelParams p;
    p.mu = 1.0;
    p.lambda = 0.0;
    auto g = make_grid(2, {16, 16}, {2 * kPi, 2 * kPi});
    StepperConfig cfg;
    cfg.scheme = Scheme::ImexEuler;
    cfg.dt = 0.02;
    cfg.t_end = 1.0;
    const double amp = 1e-8;
    auto fin = run_trajectory(tiny_transverse(g, amp), cfg, p, nullptr, nullptr);
    const double factor = std::pow(1.0 / (1.0 + cfg.dt), 50.0); // |k| = 1, 50 steps
    const double got = fin.mom.max_abs() / amp;
    CHECK(got == doctest::Approx(factor).epsilon(1e-6));
    CHECK(got == doctest::Approx(std::exp(-1.0)).epsilon(2 * cfg.dt)); // heat limit, O(dt)
}

TEST_CASE("mean(varrho) is conserved bit-exactly") {
    ModelParams p;
    auto g = make_grid(3, {8, 8, 8}, {2 * kPi, 2 * kPi, 2 * kPi});
    State s(Formulation::Perturbation, g);
    s.rho = scaled_random(g, 5, 0.02);
    s.chi = scaled_random(g, 6, 0.02);
    for (int a = 0; a < 3; ++a) s.mom.comp[a] = scaled_random(g, 7 + a, 0.02);

    for (auto scheme : {Scheme::ImexEuler, Scheme::ImexBdf2}) {
        StepperConfig cfg;
        cfg.scheme = scheme;
        cfg.dt = 1e-3;
        cfg.t_end = 10.0; // 10^4 steps
        cfg.cadence = 1000;
        cfg.energy_ceiling = 1e6;
        ImexIntegrator integ(s, cfg, p, nullptr);
        run_trajectory(integ, 0.0, cfg, nullptr);
        CHECK(std::abs(integ.state_hat().rho[0]) <= 1e-13);
    }
}

TEST_CASE("runs are deterministic") {
    ModelParams p;
    auto g = make_grid(2, {16, 16}, {2 * kPi, 2 * kPi});
    State s(Formulation::Perturbation, g);
    s.rho = scaled_random(g, 11, 0.05);
    s.chi = scaled_random(g, 12, 0.05);
    for (int a = 0; a < 2; ++a) s.mom.comp[a] = scaled_random(g, 13 + a, 0.05);

    StepperConfig cfg;
    cfg.dt = 0.01;
    cfg.t_end = 0.5;
    cfg.energy_ceiling = 1e6;
    auto a = run_trajectory(s, cfg, p, nullptr, nullptr);
    auto b = run_trajectory(s, cfg, p, nullptr, nullptr);
    for (std::size_t i = 0; i < a.rho.size(); ++i) {
        CHECK(a.rho[i] == b.rho[i]);
        CHECK(a.chi[i] == b.chi[i]);
        CHECK(a.mom[0][i] == b.mom[0][i]);
    }
}

TEST_CASE("checkpoint sync makes continuation match a restart") {
    ModelParams p;
    auto g = make_grid(2, {12, 12}, {2 * kPi, 2 * kPi});
    State s(Formulation::Perturbation, g);
    s.rho = scaled_random(g, 21, 0.03);
    s.chi = scaled_random(g, 22, 0.03);
    for (int a = 0; a < 2; ++a) s.mom.comp[a] = scaled_random(g, 23 + a, 0.03);

    for (auto scheme : {Scheme::ImexEuler, Scheme::ImexBdf2}) {
        StepperConfig cfg;
        cfg.scheme = scheme;
        cfg.dt = 0.01;
        cfg.t_end = 0.2;

        // run A: integrate to t = 0.1, sync, continue to 0.2
        ImexIntegrator run_a(s, cfg, p, nullptr);
        for (int n = 0; n < 10; ++n) run_a.step();
        State prev;
        State snap = run_a.checkpoint_sync(&prev);
        for (int n = 0; n < 10; ++n) run_a.step();

        // run B: fresh integrator from the snapshot
        ImexIntegrator run_b(snap, cfg, p, nullptr);
        if (scheme == Scheme::ImexBdf2) run_b.restore_history(prev);
        for (int n = 0; n < 10; ++n) run_b.step();

        auto fa = run_a.state(), fb = run_b.state();
        CHECK(fa.time == fb.time);
        for (std::size_t i = 0; i < fa.rho.size(); ++i) {
            CHECK(fa.rho[i] == fb.rho[i]);
            CHECK(fa.chi[i] == fb.chi[i]);
            CHECK(fa.mom[0][i] == fb.mom[0][i]);
            CHECK(fa.mom[1][i] == fb.mom[1][i]);
        }
    }
}
