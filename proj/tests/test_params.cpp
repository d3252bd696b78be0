#include <doctest.h>

#include <stdexcept>

#include "lp4/params.hpp"

using namespace lp4;

TEST_CASE("validate rejects out-of-range parameters") {
    Params p;
    CHECK_NOTHROW(p.validate());
    p.mu = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p.mu = 0.6;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{};
    p.q1 = 1.2;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{};
    p.A2 = -0.1;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
    p = Params{};
    p.cd = 0.0;
    CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("derived quantities") {
    Params p{0.01, 0.98, 0.01, 2.0};
    Derived d = derive(p);
    CHECK(d.epsilon == doctest::Approx(0.02).epsilon(1e-15));
    CHECK(d.n * d.n == doctest::Approx(1.015).epsilon(1e-15));
    CHECK(d.gamma == doctest::Approx(0.98).epsilon(1e-15));
    CHECK(d.delta * d.delta * d.delta == doctest::Approx(0.98).epsilon(1e-14));
    CHECK(d.W1 == doctest::Approx(0.99 * 0.02 / 2.0).epsilon(1e-15));
    CHECK(d.nW1 == doctest::Approx(d.n * d.W1).epsilon(1e-15));
}

TEST_CASE("perturbation scale endpoints") {
    Params p{0.01, 0.98, 0.01, 2.0};
    Params p0 = perturbation_scale(p, 0.0);
    CHECK(p0.q1 == 1.0);
    CHECK(p0.A2 == 0.0);
    CHECK(p0.mu == p.mu);
    CHECK(p0.cd == p.cd);
    CHECK(perturbation_magnitude(p0) == 0.0);
    Params p1 = perturbation_scale(p, 1.0);
    CHECK(p1.q1 == doctest::Approx(p.q1).epsilon(1e-16));
    CHECK(p1.A2 == p.A2);
    CHECK_THROWS_AS(perturbation_scale(p, 1.5), std::invalid_argument);
}

TEST_CASE("perturbation scale is linear in the small quantities") {
    Params p{0.01, 0.98, 0.01, 2.0};
    Derived d1 = derive(perturbation_scale(p, 1.0));
    Derived dh = derive(perturbation_scale(p, 0.25));
    CHECK(dh.epsilon == doctest::Approx(0.25 * d1.epsilon).epsilon(1e-13));
    CHECK(dh.W1 == doctest::Approx(0.25 * d1.W1).epsilon(1e-13));
}

TEST_CASE("mass reduction factor formula") {
    CHECK(mass_reduction_factor(0.0, 1.0, 1.0) == 1.0);
    CHECK(mass_reduction_factor(1.0, 2e-4, 1.4) ==
          doctest::Approx(1.0 - 5.6e-5 / (2e-4 * 1.4)).epsilon(1e-15));
    CHECK_THROWS_AS(mass_reduction_factor(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST_CASE("json round trip") {
    Params p{0.0123, 0.97, 0.004, 3.5};
    Params q = params_from_json(to_json(p));
    CHECK(q.mu == p.mu);
    CHECK(q.q1 == p.q1);
    CHECK(q.A2 == p.A2);
    CHECK(q.cd == p.cd);
}
