#include <doctest.h>

#include <cmath>

#include "nsac/inequality_lab.hpp"

using namespace nsac;

TEST_CASE("GN identity tuple gives ratio 1") {
    auto g = make_grid(3, {12, 12, 12}, {2 * kPi, 2 * kPi, 2 * kPi});
    InequalityLabConfig cfg;
    cfg.gn = {0.0, 0.0, 1.0, 2.0, 2.0, 2.0, 0.0}; // alpha=m=0, l=1, p=q=r=2, theta=0
    auto rep = inequality_lab(InequalityId::GagliardoNirenberg, 10, 11, g, cfg);
    CHECK(rep.max_ratio == doctest::Approx(1.0).epsilon(1e-11));
    CHECK(rep.mean_ratio == doctest::Approx(1.0).epsilon(1e-11));
}

TEST_CASE("GN rejects a broken scaling relation") {
    auto g = make_grid(3, {12, 12, 12}, {2 * kPi, 2 * kPi, 2 * kPi});
    InequalityLabConfig cfg;
    cfg.gn.theta = 0.25; // default alpha/m/l/p/q/r no longer satisfy the relation
    cfg.gn.alpha = 1.0;
    cfg.gn.l = 2.0;
    cfg.gn.p = 3.0;
    CHECK_THROWS_AS(inequality_lab(InequalityId::GagliardoNirenberg, 1, 0, g, cfg), InvalidExponents);
}

TEST_CASE("Kato-Ponce degenerate f == 1") {
    auto g = make_grid(2, {16, 16}, {2 * kPi, 2 * kPi});
    RealField ones(g, 1.0);
    auto gfield = random_band_limited_field(g, 5);
    ineq::KatoPonceExponents e;
    ineq::validate(e);
    const double r = ineq::kato_ponce_ratio(ones, gfield, e);
    CHECK(std::isfinite(r));
    CHECK(r > 0.0);
    CHECK(r <= 1.0 + 1e-12); // lhs = ||lambda^s g||, rhs >= ||1||_inf * ||lambda^s g||
}

TEST_CASE("commutator with constant f vanishes") {
    auto g = make_grid(2, {16, 16}, {2 * kPi, 2 * kPi});
    RealField c(g, 3.25);
    auto gfield = random_band_limited_field(g, 6);
    ineq::CommutatorExponents e;
    const double r = ineq::commutator_ratio(c, gfield, e);
    CHECK(r == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("HLS exponent validation and sampling") {
    auto g = make_grid(3, {12, 12, 12}, {2 * kPi, 2 * kPi, 2 * kPi});
    InequalityLabConfig cfg;
    cfg.hls.s = 0.75;
    auto rep = inequality_lab(InequalityId::HardyLittlewoodSobolev, 20, 3, g, cfg);
    CHECK(rep.max_ratio > 0.0);
    CHECK(std::isfinite(rep.max_ratio));
    CHECK(rep.exponents.at("p") == doctest::Approx(1.0 / (0.5 + 0.25)));

    cfg.hls.p = 1.9; // inconsistent with s = 0.75
    CHECK_THROWS_AS(inequality_lab(InequalityId::HardyLittlewoodSobolev, 1, 0, g, cfg),
                    InvalidExponents);
}

TEST_CASE("all five labs produce finite reports and JSON") {
    auto g = make_grid(3, {12, 12, 12}, {2 * kPi, 2 * kPi, 2 * kPi});
    for (auto id : {InequalityId::GagliardoNirenberg, InequalityId::KatoPonce,
                    InequalityId::Commutator, InequalityId::HardyLittlewoodSobolev,
                    InequalityId::Composition}) {
        auto rep = inequality_lab(id, 25, 100, g);
        CHECK(std::isfinite(rep.max_ratio));
        CHECK(rep.mean_ratio <= rep.max_ratio + 1e-15);
        auto j = to_json(rep);
        CHECK(j.at("trials").get<int>() == 25);
        CHECK(j.at("id").get<std::string>() == to_string(id));
        MESSAGE(to_string(id), " max ratio ", rep.max_ratio);
    }
}

TEST_CASE("same seed reproduces the report") {
    auto g = make_grid(2, {16, 16}, {1.0, 1.0});
    auto a = inequality_lab(InequalityId::Composition, 8, 77, g);
    auto b = inequality_lab(InequalityId::Composition, 8, 77, g);
    CHECK(a.max_ratio == b.max_ratio);
    CHECK(a.mean_ratio == b.mean_ratio);
}
