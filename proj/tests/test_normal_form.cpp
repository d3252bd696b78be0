#include <doctest.h>

#include <cmath>

#include "lp4/expansion.hpp"
#include "lp4/normal_form.hpp"
#include "lp4/params.hpp"

using namespace lp4;

namespace {
Params classical(double mu = 0.01) {
    Params p;
    p.mu = mu;
    return p;
}
}  // namespace

TEST_CASE("quartic roots match the eigenvalues of the linear system") {
    Params p = classical();
    CharacteristicRoots r = characteristic_roots(quadratic_coeffs(p), derive(p).n);
    CHECK(r.max_mismatch <= 1e-12);
    for (const auto& z : r.quartic) CHECK(std::abs(z.real()) <= 1e-12);
}

TEST_CASE("stability boundary") {
    StabilityReport stable = stability(classical(0.01));
    CHECK(stable.stable);
    CHECK(stable.D > 0.0);
    CHECK(stable.margin > 0.0);
    StabilityReport unstable = stability(classical(0.2));
    CHECK_FALSE(unstable.stable);
    CHECK(unstable.D < 0.0);
    CHECK_THROWS_AS(frequencies(classical(0.2)), UnstableError);
}

TEST_CASE("critical mass series at the classical limit") {
    CHECK(mu_crit_tabulated(0.0, 0.0, 0.0) == 0.0385208965045513718);
    CHECK(std::abs(mu_crit_bisection(0.0, 0.0, 0.0) - 0.0385208965045513718) <= 1e-12);
}

TEST_CASE("classical frequencies from the reduced quartic") {
    const double mu = 0.01;
    Frequencies f = frequencies(classical(mu));
    const double s = std::sqrt(1.0 - 27.0 * mu * (1.0 - mu));
    CHECK(f.omega1 == doctest::Approx(std::sqrt(0.5 * (1.0 + s))).epsilon(1e-13));
    CHECK(f.omega2 == doctest::Approx(std::sqrt(0.5 * (1.0 - s))).epsilon(1e-13));
    CHECK(f.omega1 > f.omega2);
}

TEST_CASE("tabulated sum and product at the classical limit") {
    Params p = classical();
    Frequencies f = frequencies(p);
    SumProduct sp = tabulated_sum_product(p);
    CHECK(sp.sum == doctest::Approx(f.omega1 * f.omega1 + f.omega2 * f.omega2)
                        .epsilon(1e-13));
    CHECK(sp.product ==
          doctest::Approx(f.omega1 * f.omega1 * f.omega2 * f.omega2).epsilon(1e-12));
}

TEST_CASE("gamma identities hold at the classical limit") {
    Params p = classical();
    GammaRelationResidual g = gamma_relation_residual(p, frequencies(p));
    CHECK(g.res_omega1 <= 1e-13);
    CHECK(g.res_omega2 <= 1e-13);
    CHECK(g.res_u <= 1e-13);
}

TEST_CASE("transformation constants satisfy their defining relations") {
    Params p = classical();
    Frequencies f = frequencies(p);
    WhittakerTransform J = whittaker_matrix(p, f);
    CHECK(J.l1 == doctest::Approx(std::sqrt(4 * f.omega1 * f.omega1 + 9)).epsilon(1e-15));
    CHECK(J.l2 == doctest::Approx(std::sqrt(4 * f.omega2 * f.omega2 + 9)).epsilon(1e-15));
    CHECK(J.k1 * J.k1 == doctest::Approx(2 * f.omega1 * f.omega1 - 1).epsilon(1e-13));
    CHECK(J.k2 * J.k2 == doctest::Approx(1 - 2 * f.omega2 * f.omega2).epsilon(1e-13));
}

TEST_CASE("first-order orbit sampling matches the series evaluation") {
    Params p = classical();
    Frequencies f = frequencies(p);
    WhittakerTransform J = whittaker_matrix(p, f);
    FirstOrderSeries s = first_order_series(f, J);
    const double I1 = 0.4, I2 = 0.7, ph1 = 0.3, ph2 = -0.9;
    std::vector<double> t = {0.0, 0.5, 1.7};
    OrbitSamples orb = first_order_orbit(t, f, J, I1, I2, ph1, ph2);
    for (std::size_t i = 0; i < t.size(); ++i) {
        const double f1 = f.omega1 * t[i] + ph1;
        const double f2 = -f.omega2 * t[i] + ph2;
        CHECK(orb.x[i] == doctest::Approx(s.X1.evaluate(I1, I2, f1, f2)).epsilon(1e-13));
        CHECK(orb.y[i] == doctest::Approx(s.Y1.evaluate(I1, I2, f1, f2)).epsilon(1e-13));
    }
}

TEST_CASE("normalization is exact at the classical limit") {
    CHECK(normal_form_residual(classical()) <= 1e-10);
}
