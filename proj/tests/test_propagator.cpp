#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sevo/propagator.hpp"
#include "support/ode_oracle.hpp"

using namespace sevo;
using sevo::testsupport::mode_ode_oracle;

namespace {

double rel_err(double got, double want, double scale) {
    return std::abs(got - want) / std::max(std::abs(want), scale);
}

}  // namespace

TEST_CASE("characteristic roots") {
    SUBCASE("degenerate mode") {
        const auto [lp, lm] = char_roots(0.0);
        CHECK(lp == std::complex<double>(0.0, 0.0));
        CHECK(lm == std::complex<double>(0.0, 0.0));
    }
    SUBCASE("unit symbol") {
        const auto [lp, lm] = char_roots(1.0);
        CHECK(lp.real() == doctest::Approx(-0.5).epsilon(1e-15));
        CHECK(lp.imag() == doctest::Approx(std::sqrt(3.0) / 2.0).epsilon(1e-15));
        CHECK(std::abs(lp) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(lm == std::conj(lp));
    }
    SUBCASE("vieta identities over random symbols") {
        std::mt19937_64 rng(17);
        std::uniform_real_distribution<double> umu(0.0, 100.0);
        for (int i = 0; i < 1000; ++i) {
            const double mu = umu(rng);
            const auto [lp, lm] = char_roots(mu);
            CHECK(std::abs((lp + lm) - std::complex<double>(-mu, 0.0)) <= 1e-12 * std::max(mu, 1.0));
            CHECK(std::abs(lp * lm - std::complex<double>(mu * mu, 0.0)) <=
                  1e-12 * std::max(mu * mu, 1.0));
        }
    }
}

TEST_CASE("entries at t = 0 are the identity") {
    for (double mu : {0.0, 1e-7, 0.5, 1.0, 4.0, 64.0}) {
        const auto e = propagator_entries(mu, 0.0);
        CHECK(e.g1 == 1.0);
        CHECK(e.g2 == 0.0);
        CHECK(e.dg1 == 0.0);
        CHECK(e.dg2 == 1.0);
        CHECK(e.w1 == 0.0);
        CHECK(e.m1 == 0.0);
    }
}

TEST_CASE("zero mode has the double-root structure") {
    const auto e = propagator_entries(0.0, 5.0);
    CHECK(e.g1 == 1.0);
    CHECK(e.g2 == 5.0);
    CHECK(e.dg1 == 0.0);
    CHECK(e.dg2 == 1.0);
    CHECK(e.w1 == doctest::Approx(12.5).epsilon(1e-15));
    CHECK(e.m1 == doctest::Approx(125.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("entries match the high-order integration oracle") {
    for (double mu : {0.0, 1e-7, 1e-4, 0.5, 1.0, 4.0, 64.0}) {
        for (double t : {0.1, 1.0, 10.0}) {
            const auto e = propagator_entries(mu, t);
            const double env = std::exp(-0.5 * mu * t);
            // g1, dg1 evolve (u0, v0) = (1, 0); g2, dg2 evolve (0, 1)
            const auto [g1, dg1] = mode_ode_oracle(mu, t, 1.0, 0.0);
            const auto [g2, dg2] = mode_ode_oracle(mu, t, 0.0, 1.0);
            CAPTURE(mu);
            CAPTURE(t);
            REQUIRE(rel_err(e.g1, g1, env) < 1e-10);
            REQUIRE(rel_err(e.g2, g2, env * std::max(t, 1.0)) < 1e-10);
            REQUIRE(rel_err(e.dg1, dg1, env * std::max(mu, 1.0)) < 1e-10);
            REQUIRE(rel_err(e.dg2, dg2, env) < 1e-10);
        }
    }
}

TEST_CASE("kernel moments match quadrature of the entries") {
    // w1 = int_0^t g2, m1 = int_0^t s*g2 via composite Simpson on the oracle
    for (double mu : {1e-4, 0.3, 2.0, 32.0}) {
        const double t = 1.75;
        const int segments = 4000;
        const double h = t / segments;
        double w1 = 0.0, m1 = 0.0;
        for (int i = 0; i <= segments; ++i) {
            const double s = i * h;
            const double g2 = propagator_entries(mu, s).g2;
            const double w = (i == 0 || i == segments) ? 1.0 : (i % 2 ? 4.0 : 2.0);
            w1 += w * g2;
            m1 += w * s * g2;
        }
        w1 *= h / 3.0;
        m1 *= h / 3.0;
        const auto e = propagator_entries(mu, t);
        CAPTURE(mu);
        CHECK(rel_err(e.w1, w1, 1e-12) < 1e-9);
        CHECK(rel_err(e.m1, m1, 1e-12) < 1e-9);
    }
}

TEST_CASE("table assembles per-mode symbols") {
    auto grid = make_grid({16}, std::numbers::pi);  // integer frequencies
    const PropagatorTable table(grid, 2.0, 0.1);
    CHECK(table.modes() == 16);
    CHECK(table.mu()[0] == 0.0);
    CHECK(table.mu()[3] == doctest::Approx(9.0).epsilon(1e-12));   // |xi|^2 at k=3
    CHECK(table.mu()[13] == doctest::Approx(9.0).epsilon(1e-12));  // k=-3
    CHECK(table.g1()[0] == 1.0);
    CHECK(table.g2()[0] == doctest::Approx(0.1).epsilon(1e-15));
    const auto lp = table.lambda_plus(3), lm = table.lambda_minus(3);
    CHECK(std::abs(lp + lm - std::complex<double>(-9.0, 0.0)) < 1e-11);
    CHECK(std::abs(lp * lm - std::complex<double>(81.0, 0.0)) < 1e-10);
}

TEST_CASE("linear propagation") {
    auto grid = make_grid({64}, std::numbers::pi);
    const PropagatorTable table(grid, 1.0, 0.25);

    SUBCASE("zero state stays zero") {
        StatePair s{Field(grid), Field(grid), 0.0};
        const auto s2 = linear_propagate(s, table);
        CHECK(lq_norm(s2.u, 2.0) == 0.0);
        CHECK(lq_norm(s2.v, 2.0) == 0.0);
        CHECK(s2.time == 0.25);
    }

    SUBCASE("single harmonic follows the mode envelope") {
        std::vector<double> vals(64);
        const int k = 3;
        for (int i = 0; i < 64; ++i) vals[i] = std::cos(k * grid->coordinate(0, i));
        StatePair s(Field::from_real(grid, std::move(vals)), Field(grid), 0.0);
        const double initial = lq_norm(s.u, 2.0);

        StatePair cur = s;
        for (int steps = 0; steps < 8; ++steps) cur = linear_propagate(cur, table);
        const double t = 8 * 0.25;
        const auto e = propagator_entries(static_cast<double>(k), t);
        CHECK(rel_err(lq_norm(cur.u, 2.0), std::abs(e.g1) * initial, 1e-12) < 1e-10);
    }

    SUBCASE("two half steps equal one full step") {
        Field u0(grid), v0(grid);
        {
            std::mt19937_64 rng(31);
            std::normal_distribution<double> dist;
            for (auto& x : u0.mutable_real()) x = dist(rng);
            for (auto& x : v0.mutable_real()) x = dist(rng);
        }
        StatePair s(u0, v0, 0.0);
        const PropagatorTable half(grid, 1.0, 0.125);
        const auto one = linear_propagate(s, table);
        const auto two = linear_propagate(linear_propagate(s, half), half);
        const auto& a = one.u.spectrum();
        const auto& b = two.u.spectrum();
        double scale = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) scale = std::max(scale, std::abs(a[i]));
        for (std::size_t i = 0; i < a.size(); ++i)
            REQUIRE(std::abs(a[i] - b[i]) <= 1e-12 * scale);
    }

    SUBCASE("grid mismatch rejected") {
        auto other = make_grid({32}, std::numbers::pi);
        StatePair s{Field(other), Field(other), 0.0};
        CHECK_THROWS_AS(linear_propagate(s, table), std::invalid_argument);
    }
}

TEST_CASE("single-mode evolution matches the oracle over long horizons") {
    auto grid = make_grid({32}, std::numbers::pi);
    const double dt = 0.05;
    const PropagatorTable table(grid, 1.0, dt);
    std::vector<double> vals(32);
    const int k = 2;
    for (int i = 0; i < 32; ++i) vals[i] = std::sin(k * grid->coordinate(0, i));
    StatePair s(Field::from_real(grid, vals), Field(grid), 0.0);
    const double initial = lq_norm(s.u, 2.0);

    StatePair cur = s;
    for (int step = 1; step <= 200; ++step) {
        cur = linear_propagate(cur, table);
        const double t = step * dt;
        const auto [uref, vref] = mode_ode_oracle(static_cast<double>(k), t, 1.0, 0.0);
        const double env = std::exp(-0.5 * k * t);
        REQUIRE(rel_err(lq_norm(cur.u, 2.0), std::abs(uref) * initial, env * initial) < 1e-8);
        REQUIRE(rel_err(lq_norm(cur.v, 2.0), std::abs(vref) * initial, env * initial * k) < 1e-8);
    }
}

TEST_CASE("mean velocity drives exact linear growth of the spatial mean") {
    auto grid = make_grid({32, 32}, 4.0);
    const double c = 0.37;
    Field v0(grid);
    for (auto& x : v0.mutable_real()) x = c;
    StatePair s(Field(grid), v0, 0.0);
    const PropagatorTable table(grid, 1.5, 0.5);
    StatePair cur = s;
    for (int step = 1; step <= 20; ++step) {
        cur = linear_propagate(cur, table);
        REQUIRE(std::abs(cur.u.mean() - c * (0.5 * step)) < 1e-10);
    }
}
