#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "sevo/theory.hpp"

using namespace sevo;

TEST_CASE("parameter box is validated with named errors") {
    CHECK_THROWS_WITH_AS(ModelParams(0.5, 1, 2, 1, 1), doctest::Contains("n must"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ModelParams(3, 0.5, 2, 1, 1), doctest::Contains("sigma"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ModelParams(3, 1, 1.0, 1, 1), doctest::Contains("q"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ModelParams(3, 1, 2, 2.0, 1), doctest::Contains("m1"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ModelParams(3, 1, 2, 1, 0.9), doctest::Contains("m2"),
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(ModelParams(3, 1, 2, 1, 1, 1.0), doctest::Contains("p"),
                         std::invalid_argument);
    CHECK(ModelParams(2.5, 1, 2, 1, 1).integer_dimension() == false);
}

TEST_CASE("regime classification") {
    SUBCASE("velocity-data regime in 3d") {
        const auto c = classify_regime(ModelParams(3, 1, 2, 1, 1));
        CHECK(c.regime == Regime::Regime1);
        CHECK_FALSE(c.boundary);
    }
    SUBCASE("position-data regime in 3d") {
        const auto c = classify_regime(ModelParams(3, 1, 2, 1.8, 1));
        CHECK(c.regime == Regime::Regime2);
        CHECK_FALSE(c.boundary);
    }
    SUBCASE("not covered names the failing inequality") {
        const auto c = classify_regime(ModelParams(2, 1, 2, 1.5, 1.4));
        CHECK(c.regime == Regime::NotCovered);
        CHECK(c.reason.find("m2*q*sigma/(q-m2)") != std::string::npos);
        CHECK(c.reason.find("4.66") != std::string::npos);
    }
    SUBCASE("lower threshold admitted exactly at equality, flagged") {
        const auto c = classify_regime(ModelParams(2, 1, 2, 1, 1));
        CHECK(c.regime == Regime::Regime1);
        CHECK(c.boundary);
    }
    SUBCASE("shared boundary reports Both") {
        const auto c = classify_regime(ModelParams(2.25, 1, 2, 1.8, 1));
        CHECK(c.regime == Regime::Both);
        CHECK(c.boundary);
        // same point reached through floating arithmetic
        const double n = 1.8 * 1.0 * 1.0 / (1.8 - 1.0);
        const auto c2 = classify_regime(ModelParams(n, 1, 2, 1.8, 1));
        CHECK(c2.regime == Regime::Both);
    }
}

TEST_CASE("critical exponents") {
    SUBCASE("regime 1 value at n=2") {
        const auto ce = critical_exponent(ModelParams(2, 1, 2, 1, 1), Regime::Regime1);
        CHECK(*ce.p1 == 3.0);
    }
    SUBCASE("reduces to the single-m expression when m1 == m2") {
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> um(1.0, 1.999), us(1.0, 3.0);
        for (int i = 0; i < 1000; ++i) {
            const double m = um(rng), sigma = us(rng);
            const double n = m * sigma + 0.5 + 3.0 * us(rng);
            CHECK(critical_p1(n, sigma, m) ==
                  doctest::Approx(1.0 + 2.0 * m * sigma / (n - m * sigma)).epsilon(1e-14));
        }
    }
    SUBCASE("both values coincide on the shared boundary") {
        const auto ce = critical_exponent(ModelParams(2.25, 1, 2, 1.8, 1), Regime::Both);
        CHECK(*ce.p1 == doctest::Approx(2.6).epsilon(1e-15));
        CHECK(*ce.p2 == doctest::Approx(2.6).epsilon(1e-15));
        CHECK(std::abs(*ce.p1 - *ce.p2) < 1e-12);
        CHECK(*ce.p1 == doctest::Approx(2.0 * 1.8 / 1.0 - 1.0).epsilon(1e-15));
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS(critical_exponent(ModelParams(3, 1, 2, 1, 1), Regime::NotCovered),
                        std::domain_error);
        CHECK_THROWS_AS(critical_p1(1.0, 1.0, 1.0), std::domain_error);  // n == m2*sigma
    }
}

TEST_CASE("coincidence identity over random tuples") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> us(1.0, 3.0), uq(1.0001, 4.0);
    for (int i = 0; i < 10000; ++i) {
        const double sigma = us(rng);
        const double q = uq(rng);
        std::uniform_real_distribution<double> um(1.0, q - 1e-6);
        double m1 = um(rng), m2 = um(rng);
        if (m1 == m2) continue;
        if (m1 < m2) std::swap(m1, m2);
        const double n = m1 * m2 * sigma / (m1 - m2);
        const double p1 = critical_p1(n, sigma, m2);
        const double p2 = critical_p2(n, sigma, m1, m2);
        REQUIRE(std::abs(p1 - p2) < 1e-12);
        REQUIRE(std::abs(p1 - (2.0 * m1 / m2 - 1.0)) < 1e-12);
    }
}

TEST_CASE("exponents decrease in the dimension") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> um(1.0, 1.9), us(1.0, 3.0), un(0.1, 5.0);
    for (int i = 0; i < 2000; ++i) {
        const double m2 = um(rng), sigma = us(rng);
        const double n1 = m2 * sigma + 0.1 + un(rng);
        const double n2 = n1 + 0.5 + un(rng);
        CHECK(critical_p1(n2, sigma, m2) < critical_p1(n1, sigma, m2));
        const double m1 = m2 + 0.05;
        CHECK(critical_p2(n2, sigma, m1, m2) < critical_p2(n1, sigma, m1, m2));
    }
}

TEST_CASE("interpolation bounds on p") {
    SUBCASE("finite branch") {
        const auto r = gn_p_bounds(ModelParams(3, 1, 2, 1, 1));
        CHECK(r.lower.value == 2.0);
        CHECK(r.lower.inclusive);
        CHECK(r.upper.finite);
        CHECK(r.upper.value == 3.0);
        CHECK(r.upper.inclusive);
        CHECK_FALSE(r.empty);
    }
    SUBCASE("unbounded branch at small n") {
        const auto r = gn_p_bounds(ModelParams(2, 1, 2, 1, 1));
        CHECK(r.lower.value == 2.0);
        CHECK_FALSE(r.upper.finite);
    }
    SUBCASE("empty beyond the cap") {
        const auto r = gn_p_bounds(ModelParams(5, 1, 2, 1, 1));
        CHECK(r.empty);
        CHECK(r.reason.find("q^2*sigma/(q-m2)") != std::string::npos);
    }
}

TEST_CASE("admissible p range") {
    SUBCASE("3d, equal m") {
        const auto r = admissible_p_range(ModelParams(3, 1, 2, 1, 1));
        CHECK(r.lower.value == 2.0);
        CHECK_FALSE(r.lower.inclusive);
        CHECK(r.upper.value == 3.0);
        CHECK(r.upper.inclusive);
        CHECK(r.str() == "(2, 3]");
        CHECK(r.contains(3.0));
        CHECK(r.contains(2.5));
        CHECK_FALSE(r.contains(2.0));
        CHECK_FALSE(r.contains(3.1));
    }
    SUBCASE("2d boundary case") {
        const auto r = admissible_p_range(ModelParams(2, 1, 2, 1, 1));
        CHECK(r.lower.value == 3.0);
        CHECK_FALSE(r.lower.inclusive);
        CHECK_FALSE(r.upper.finite);
    }
    SUBCASE("3d, position-data regime") {
        const auto r = admissible_p_range(ModelParams(3, 1, 2, 1.8, 1));
        CHECK(r.lower.value == 2.4);
        CHECK_FALSE(r.lower.inclusive);
        CHECK(r.upper.value == 3.0);
    }
    SUBCASE("refusal outside the covered region") {
        CHECK_THROWS_AS(admissible_p_range(ModelParams(2, 1, 2, 1.5, 1.4)), std::domain_error);
    }
}

TEST_CASE("decay rates") {
    SUBCASE("velocity regime in 3d") {
        const auto r = decay_rates(ModelParams(3, 1, 2, 1, 1), Regime::Regime1);
        CHECK(r.rate_u == -0.5);
        CHECK(r.rate_grad == -1.5);
    }
    SUBCASE("position regime in 3d") {
        const auto r = decay_rates(ModelParams(3, 1, 2, 1.8, 1), Regime::Regime2);
        CHECK(r.rate_u == doctest::Approx(-1.0 / 6.0).epsilon(1e-15));
        CHECK(r.rate_grad == doctest::Approx(-7.0 / 6.0).epsilon(1e-15));
    }
    SUBCASE("rate shift is one power of (1+t) in both regimes") {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> uq(1.5, 4.0), us(1.0, 3.0), un(1.0, 9.0);
        for (int i = 0; i < 500; ++i) {
            const double q = uq(rng);
            std::uniform_real_distribution<double> um(1.0, q - 1e-3);
            const ModelParams mp(un(rng), us(rng), q, um(rng), um(rng));
            const auto r1 = rates_regime1(mp);
            const auto r2 = rates_regime2(mp);
            CHECK(r1.rate_grad - r1.rate_u == doctest::Approx(-1.0).epsilon(1e-12));
            CHECK(r2.rate_grad - r2.rate_u == doctest::Approx(-1.0).epsilon(1e-12));
        }
    }
    SUBCASE("m2 -> q limit recovers the (1+t) growth of the base estimate") {
        const double q = 2.0;
        const ModelParams mp(3, 1, q, 1, q * (1.0 - 1e-10));
        CHECK(rates_regime1(mp).rate_u == doctest::Approx(1.0).epsilon(1e-8));
    }
    SUBCASE("shared boundary agrees and reports the alternate pair") {
        const auto r = decay_rates(ModelParams(2.25, 1, 2, 1.8, 1), Regime::Both);
        REQUIRE(r.alternate.has_value());
        CHECK(std::abs(r.rate_u - r.alternate->first) < 1e-12);
        CHECK(std::abs(r.rate_grad - r.alternate->second) < 1e-12);
    }
    SUBCASE("decay whenever the strict lower-dimension condition holds") {
        std::mt19937_64 rng(5);
        std::uniform_real_distribution<double> uq(1.5, 4.0), us(1.0, 3.0), uf(0.01, 6.0);
        for (int i = 0; i < 2000; ++i) {
            const double q = uq(rng), sigma = us(rng);
            std::uniform_real_distribution<double> um(1.0, q - 1e-3);
            const double m2 = um(rng);
            const double n = m2 * q * sigma / (q - m2) + uf(rng);
            const ModelParams mp(n, sigma, q, 1.0, m2);
            CHECK(rates_regime1(mp).rate_u < 0.0);
            // well-posedness of p1 follows
            CHECK(n - m2 * sigma > 0.0);
        }
    }
}

TEST_CASE("interpolation weight theta") {
    SUBCASE("identity") {
        const auto g = gn_theta(0, 1, 2, 2, 3);
        CHECK(g.theta == 0.0);
        CHECK(g.valid);
    }
    SUBCASE("upper boundary") {
        const auto g = gn_theta(0, 1, 6, 2, 3);
        CHECK(g.theta == 1.0);
        CHECK(g.valid);
    }
    SUBCASE("proof exponent") {
        const auto g = gn_theta(0, 1, 3, 2, 3);
        CHECK(g.theta == 0.5);
        CHECK(g.valid);
    }
    SUBCASE("invalid inputs throw") {
        CHECK_THROWS_AS(gn_theta(0, 1, 2, 1.0, 3), std::invalid_argument);
        CHECK_THROWS_AS(gn_theta(1.0, 1.0, 2, 2, 3), std::invalid_argument);
    }
    SUBCASE("out-of-range theta flagged invalid") {
        CHECK_FALSE(gn_theta(0, 1, 12, 2, 3).valid);  // theta > 1
    }
}

TEST_CASE("integral bound trichotomy") {
    const auto b1 = integral_branch(2, 0.5);
    CHECK(b1.branch == IntegralBranch::MinDecay);
    CHECK(b1.exponent == -0.5);
    CHECK_FALSE(b1.log_factor);

    const auto b2 = integral_branch(1, 1);
    CHECK(b2.branch == IntegralBranch::MinDecayLog);
    CHECK(b2.exponent == -1.0);
    CHECK(b2.log_factor);

    const auto b3 = integral_branch(0.3, 0.4);
    CHECK(b3.branch == IntegralBranch::Growth);
    CHECK(b3.exponent == doctest::Approx(0.3).epsilon(1e-15));
}

TEST_CASE("solution norm weights") {
    SUBCASE("3d values") {
        const auto w = solution_norm_weights(ModelParams(3, 1, 2, 1, 1), Regime::Regime1);
        CHECK(w.w_u == 0.5);
        CHECK(w.w_grad == 1.5);
    }
    SUBCASE("weights negate the decay rates and differ by one") {
        std::mt19937_64 rng(9);
        std::uniform_real_distribution<double> uq(1.5, 4.0), us(1.0, 3.0), uf(0.01, 4.0);
        for (int i = 0; i < 500; ++i) {
            const double q = uq(rng), sigma = us(rng);
            std::uniform_real_distribution<double> um(1.0, q - 1e-3);
            const double m2 = um(rng);
            const double n = m2 * q * sigma / (q - m2) + uf(rng);
            const ModelParams mp(n, sigma, q, m2, m2);
            const auto w = solution_norm_weights(mp, Regime::Regime1);
            const auto r = decay_rates(mp, Regime::Regime1);
            CHECK(w.w_u == doctest::Approx(-r.rate_u).epsilon(1e-14));
            CHECK(w.w_grad == doctest::Approx(-r.rate_grad).epsilon(1e-14));
            CHECK(w.w_grad - w.w_u == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("linear estimate rates") {
    SUBCASE("1d position-data-only values") {
        const auto r = linear_estimate_rates(ModelParams(1, 1, 2, 1, 1), true, false);
        CHECK(r.rate_u == -0.5);
        CHECK(r.rate_grad == -1.5);
    }
    SUBCASE("reduce to the covered-regime rates") {
        std::mt19937_64 rng(23);
        std::uniform_real_distribution<double> uq(1.5, 4.0), us(1.0, 3.0), uf(0.01, 4.0);
        int covered = 0;
        for (int i = 0; i < 4000; ++i) {
            const double q = uq(rng), sigma = us(rng);
            std::uniform_real_distribution<double> um(1.0, q - 1e-3);
            const double m1 = um(rng), m2 = um(rng);
            const double n0 = m2 * q * sigma / (q - m2) + uf(rng);
            if (n0 > 9.5) continue;
            const ModelParams mp(n0, sigma, q, m1, m2);
            const auto cls = classify_regime(mp);
            if (cls.regime == Regime::NotCovered) continue;
            ++covered;
            const auto want = decay_rates(mp, cls.regime);
            const auto got = linear_estimate_rates(mp, true, true);
            CHECK(got.rate_u == doctest::Approx(want.rate_u).epsilon(1e-12));
            CHECK(got.rate_grad == doctest::Approx(want.rate_grad).epsilon(1e-12));
        }
        CHECK(covered > 500);
    }
    SUBCASE("no active data rejected") {
        CHECK_THROWS_AS(linear_estimate_rates(ModelParams(3, 1, 2, 1, 1), false, false),
                        std::invalid_argument);
    }
}

TEST_CASE("canonical range table") {
    const auto rows = example_table();
    REQUIRE(rows.size() == 6);

    // row regions and theorems as published
    CHECK(rows[0].n == 2);
    CHECK(rows[1].n == 2);
    CHECK(rows[0].theorem == 1);
    CHECK(rows[5].theorem == 2);
    CHECK_FALSE(rows[0].upper_printed_finite);
    CHECK_FALSE(rows[1].upper_printed_finite);
    CHECK_FALSE(rows[2].upper_printed_finite);  // as published; computed cap is 3
    CHECK(rows[2].upper_computed_finite);
    CHECK(rows[2].upper_computed == 3.0);
    CHECK(rows[3].upper_printed == 3.0);
    CHECK(rows[4].upper_printed == 3.0);
    CHECK(rows[5].upper_printed == 3.0);

    // representative points reproduce admissible_p_range bit for bit
    for (const auto& row : rows) {
        const ModelParams mp(row.n, 1.0, 2.0, row.rep_m1, row.rep_m2);
        const auto range = admissible_p_range(mp);
        CHECK(range.lower.value == row.rep_lower);
        CHECK_FALSE(range.lower.inclusive);
        CHECK(range.upper.finite == row.upper_computed_finite);
        if (range.upper.finite) CHECK(range.upper.value == row.upper_computed);
    }

    // exact rational endpoints at the representative points
    CHECK(rows[0].rep_lower == 3.0);
    CHECK(rows[1].rep_lower == 3.0);
    CHECK(rows[2].rep_lower == 2.0);
    CHECK(rows[3].rep_lower == 2.0);
    CHECK(rows[4].rep_lower == doctest::Approx(83.0 / 37.0).epsilon(1e-15));
    CHECK(rows[5].rep_lower == 2.4);
}
