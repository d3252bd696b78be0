#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lp4/poisson_series.hpp"

using namespace lp4;

namespace {
const FrequencyPair kF{0.9633, 0.2683};
}

TEST_CASE("parity constraints are enforced") {
    DAlembertSeries s;
    CHECK_NOTHROW(s.add_term({2, 0, 2, 0, Trig::Cos}, 1.0));
    CHECK_NOTHROW(s.add_term({2, 1, 1, 1, Trig::Sin}, 1.0));
    // p parity must match deg - m
    CHECK_THROWS_AS(s.add_term({2, 0, 1, 0, Trig::Cos}, 1.0), std::invalid_argument);
    // |q| must not exceed m
    CHECK_THROWS_AS(s.add_term({2, 1, 1, 3, Trig::Cos}, 1.0), std::invalid_argument);
    // q parity must match m
    CHECK_THROWS_AS(s.add_term({2, 2, 0, 1, Trig::Cos}, 1.0), std::invalid_argument);
}

TEST_CASE("harmonics are folded to a canonical representative") {
    DAlembertSeries a, b;
    a.add_term({2, 1, -1, 1, Trig::Cos}, 0.5);
    b.add_term({2, 1, 1, -1, Trig::Cos}, 0.5);
    CHECK(a.coeff({2, 1, 1, -1, Trig::Cos}) == 0.5);
    CHECK((a - b).max_abs() == 0.0);

    DAlembertSeries c, d;
    c.add_term({2, 1, -1, 1, Trig::Sin}, 0.5);
    d.add_term({2, 1, 1, -1, Trig::Sin}, -0.5);
    CHECK((c - d).max_abs() == 0.0);

    DAlembertSeries e;
    e.add_term({2, 0, 0, 0, Trig::Sin}, 1.0);  // sin(0) is dropped
    CHECK(e.empty());
}

TEST_CASE("evaluate agrees with the term definition") {
    DAlembertSeries s;
    s.add_term({3, 1, 2, -1, Trig::Sin}, 0.7);
    const double I1 = 0.4, I2 = 0.9, f1 = 0.3, f2 = -1.1;
    const double expected = 0.7 * I1 * std::sqrt(I2) * std::sin(2 * f1 - f2);
    CHECK(s.evaluate(I1, I2, f1, f2) == doctest::Approx(expected).epsilon(1e-15));
}

TEST_CASE("product-to-sum multiplication matches pointwise evaluation") {
    DAlembertSeries a, b;
    a.add_term({1, 0, 1, 0, Trig::Cos}, 1.3);
    a.add_term({1, 1, 0, 1, Trig::Sin}, -0.4);
    b.add_term({2, 1, 1, 1, Trig::Cos}, 0.8);
    b.add_term({2, 2, 0, 2, Trig::Sin}, 0.25);
    DAlembertSeries p = mul(a, b, 6);
    const double I1 = 0.5, I2 = 1.25, f1 = 0.7, f2 = 2.1;
    CHECK(p.evaluate(I1, I2, f1, f2) ==
          doctest::Approx(a.evaluate(I1, I2, f1, f2) * b.evaluate(I1, I2, f1, f2))
              .epsilon(1e-13));
}

TEST_CASE("degree cap truncates the product") {
    DAlembertSeries a;
    a.add_term({3, 1, 2, 1, Trig::Cos}, 1.0);
    DAlembertSeries p = mul(a, a, 4);
    CHECK(p.empty());
}

TEST_CASE("apply_D matches the angle-rate definition") {
    DAlembertSeries s;
    s.add_term({2, 1, 1, -1, Trig::Cos}, 2.0);
    DAlembertSeries ds = apply_D(s, kF);
    // d/dt cos(f1 - f2) with f1' = w1, f2' = -w2 gives -(w1 + w2) sin(f1 - f2).
    CHECK(ds.coeff({2, 1, 1, -1, Trig::Sin}) ==
          doctest::Approx(-2.0 * (kF.omega1 + kF.omega2)).epsilon(1e-15));
    CHECK(ds.size() == 1);
}

TEST_CASE("apply_D2 equals apply_D twice") {
    DAlembertSeries s;
    s.add_term({2, 0, 2, 0, Trig::Cos}, 1.0);
    s.add_term({3, 1, 2, 1, Trig::Sin}, -0.6);
    DAlembertSeries d2 = apply_D2(s, kF);
    DAlembertSeries dd = apply_D(apply_D(s, kF), kF);
    CHECK((d2 - dd).max_abs() <= 1e-15);
}

TEST_CASE("first-harmonic divisors vanish exactly") {
    CHECK(delta_pq(1, 0, kF) == 0.0);
    CHECK(delta_pq(0, 1, kF) == 0.0);
    CHECK(delta_pq(2, 0, kF) != 0.0);
}

TEST_CASE("invert_delta round trip and error cases") {
    DAlembertSeries s;
    s.add_term({2, 0, 2, 0, Trig::Cos}, 0.3);
    s.add_term({2, 1, 1, 1, Trig::Sin}, -1.1);
    s.add_term({2, 0, 0, 0, Trig::Cos}, 0.9);
    DAlembertSeries inv = invert_delta(s, kF);
    for (const auto& [k, c] : inv.terms())
        CHECK(c * delta_pq(k.p, k.q, kF) ==
              doctest::Approx(s.coeff(k)).epsilon(1e-14));

    DAlembertSeries bad;
    bad.add_term({2, 1, 1, -1, Trig::Cos}, 1.0);
    bad.add_term({2, 0, 2, 0, Trig::Cos}, 1.0);
    // (p,|q|) = (1,1) is regular; (1,0)/(0,1) are the critical ones.
    CHECK_NOTHROW(invert_delta(bad, kF));
    DAlembertSeries crit;
    crit.add_term({1, 0, 1, 0, Trig::Cos}, 1.0);
    CHECK_THROWS_AS(invert_delta(crit, kF), CriticalTermError);
    DAlembertSeries small;
    small.add_term({2, 2, 0, 2, Trig::Cos}, 1.0);
    // w1 ~ 2 w2 makes the omega1^2 - (2 w2)^2 factor of delta_{0,2} vanish
    CHECK_THROWS_AS(invert_delta(small, FrequencyPair{0.9, 0.45 + 1e-12}),
                    SmallDivisorError);
}

TEST_CASE("critical part extraction") {
    DAlembertSeries s;
    s.add_term({2, 0, 2, 0, Trig::Cos}, 0.3);
    s.add_term({1, 0, 1, 0, Trig::Cos}, 0.5);
    s.add_term({1, 1, 0, 1, Trig::Sin}, -0.2);
    DAlembertSeries c = critical_part(s);
    CHECK(c.size() == 2);
    CHECK(c.coeff({1, 0, 1, 0, Trig::Cos}) == 0.5);
    CHECK(c.coeff({1, 1, 0, 1, Trig::Sin}) == -0.2);
}

TEST_CASE("moser condition flags near-resonant pairs") {
    CHECK(moser_condition(kF).ok);
    MoserCheck bad = moser_condition(FrequencyPair{0.9, 0.45});
    CHECK_FALSE(bad.ok);
    CHECK(std::abs(bad.k1 * 0.9 + bad.k2 * 0.45) <= 1e-8);
}

TEST_CASE("text round trip") {
    DAlembertSeries s;
    s.add_term({2, 1, 1, -1, Trig::Cos}, 0.125);
    s.add_term({3, 3, 0, 3, Trig::Sin}, -7.25e-3);
    DAlembertSeries back = DAlembertSeries::from_text(s.to_text());
    CHECK((s - back).max_abs() == 0.0);
}

TEST_CASE("pruned drops relatively tiny terms") {
    DAlembertSeries s;
    s.add_term({2, 0, 2, 0, Trig::Cos}, 1.0);
    s.add_term({2, 1, 1, 1, Trig::Cos}, 1e-14);
    DAlembertSeries p = s.pruned(1e-12);
    CHECK(p.size() == 1);
    CHECK(p.coeff({2, 0, 2, 0, Trig::Cos}) == 1.0);
}
