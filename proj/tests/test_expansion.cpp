#include <doctest.h>

#include <cmath>

#include "lp4/expansion.hpp"
#include "lp4/params.hpp"

using namespace lp4;

TEST_CASE("classical quadratic coefficients") {
    Params p;
    p.mu = 0.01;
    QuadraticCoeffs q = quadratic_coeffs(p);
    CHECK(q.E == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(q.F == doctest::Approx(-0.625).epsilon(1e-15));
    CHECK(q.G == doctest::Approx(-0.75 * std::sqrt(3.0) * (1.0 - 2.0 * p.mu))
                     .epsilon(1e-15));
}

TEST_CASE("classical quadratic oracle agrees with the closed form") {
    Params p;
    p.mu = 0.01;
    TaylorTable t = numeric_taylor_oracle(p, 2);
    QuadraticCoeffs qo = oracle_quadratic(t, p);
    QuadraticCoeffs qc = quadratic_coeffs(p);
    CHECK(std::abs(qo.E - qc.E) <= 1e-9);
    CHECK(std::abs(qo.F - qc.F) <= 1e-9);
    CHECK(std::abs(qo.G - qc.G) <= 1e-9);
}

TEST_CASE("oracle orders 2 and 3 agree on the shared entries") {
    Params p{0.01, 0.98, 0.01, 2.0};
    QuadraticCoeffs q2 = oracle_quadratic(numeric_taylor_oracle(p, 2), p);
    QuadraticCoeffs q3 = oracle_quadratic(numeric_taylor_oracle(p, 3), p);
    CHECK(std::abs(q2.E - q3.E) <= 1e-9);
    CHECK(std::abs(q2.F - q3.F) <= 1e-9);
    CHECK(std::abs(q2.G - q3.G) <= 1e-9);
}

TEST_CASE("drag bilinear is linear in velocity and off when drag is off") {
    Params classical;
    classical.mu = 0.01;
    CubicCoeffs c0 = cubic_coeffs(classical);
    CHECK(c0.W1 == 0.0);
    CHECK(t5_value(c0, 0.1, -0.2, 0.5, 0.3) == 0.0);

    Params p{0.01, 0.98, 0.01, 2.0};
    CubicCoeffs c = cubic_coeffs(p);
    const double x = 0.03, y = -0.05;
    const double v1 = t5_value(c, x, y, 0.2, -0.1);
    const double v2 = t5_value(c, x, y, 0.4, -0.2);
    CHECK(v2 == doctest::Approx(2.0 * v1).epsilon(1e-13));
    const double va = t5_value(c, x, y, 0.2, 0.0);
    const double vb = t5_value(c, x, y, 0.0, -0.1);
    CHECK(va + vb == doctest::Approx(v1).epsilon(1e-12));
}

TEST_CASE("quadratic form and its Hamiltonian mirror") {
    Params p{0.01, 0.99, 0.005, 2.0};
    QuadraticCoeffs q = quadratic_coeffs(p);
    H2Form h = h2_form(p);
    CHECK(h.E == q.E);
    CHECK(h.F == q.F);
    CHECK(h.G == q.G);
    CHECK(h.n == doctest::Approx(derive(p).n).epsilon(1e-16));
}

TEST_CASE("independent-argument form matches the parameter form") {
    Params p{0.01, 0.98, 0.01, 2.0};
    Derived d = derive(p);
    QuadraticCoeffs a = quadratic_coeffs(p);
    QuadraticCoeffs b = quadratic_coeffs_from(d.epsilon, p.A2, d.nW1, d.gamma);
    CHECK(a.E == b.E);
    CHECK(a.F == b.F);
    CHECK(a.G == b.G);
}
