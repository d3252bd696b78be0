#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lp4/birkhoff.hpp"
#include "lp4/normal_form.hpp"
#include "lp4/params.hpp"
#include "lp4/poisson_series.hpp"

using namespace lp4;

namespace {
Params classical() {
    Params p;
    p.mu = 0.01;
    return p;
}
}  // namespace

TEST_CASE("drag-only table entries vanish at the classical limit") {
    FGTables t = fg_tables(classical());
    CHECK(t.F1 == 0.0);
    CHECK(t.F1p == 0.0);
    CHECK(t.F1pp == 0.0);
    CHECK(t.G1 == 0.0);
    CHECK(t.G1p == 0.0);
    CHECK(t.G1pp == 0.0);
}

TEST_CASE("generic solve has no critical harmonics at the classical limit") {
    Params p = classical();
    Frequencies f = frequencies(p);
    WhittakerTransform J = whittaker_matrix(p, f);
    GenericSolve g = generic_second_order_solve(p, f, J);
    CHECK(g.critical_rel <= 1e-10);
    CHECK(critical_part(g.b2.B2_10).max_abs() == 0.0);
    CHECK(critical_part(g.b2.B2_01).max_abs() == 0.0);
}

TEST_CASE("second-order components solve their defining equations") {
    Params p = classical();
    Frequencies f = frequencies(p);
    WhittakerTransform J = whittaker_matrix(p, f);
    GenericSolve g = generic_second_order_solve(p, f, J);
    const FrequencyPair fp{f.omega1, f.omega2};
    auto op = [&](const DAlembertSeries& s) {
        DAlembertSeries a = apply_D2(s, fp) + (f.omega1 * f.omega1) * s;
        return apply_D2(a, fp) + (f.omega2 * f.omega2) * a;
    };
    const double scale = std::max(g.Phi2.max_abs(), g.Psi2.max_abs());
    DAlembertSeries rx = op(g.b2.B2_10) - g.Phi2;
    DAlembertSeries ry = op(g.b2.B2_01) + g.Psi2;
    CHECK(rx.max_abs() <= 1e-10 * scale);
    CHECK(ry.max_abs() <= 1e-10 * scale);
}

TEST_CASE("second-order terms cancel the cubic part of the transformed Hamiltonian") {
    Params p = classical();
    Frequencies f = frequencies(p);
    WhittakerTransform J = whittaker_matrix(p, f);
    GenericSolve g = generic_second_order_solve(p, f, J);
    FirstOrderSeries b1 = first_order_series(f, J);
    H3Coefficients h3 = h3_coefficients(p, f, b1, g.b2);
    CHECK(std::abs(h3.A30) <= 1e-10);
    CHECK(std::abs(h3.A21) <= 1e-10);
    CHECK(std::abs(h3.A12) <= 1e-10);
    CHECK(std::abs(h3.A03) <= 1e-10);
    CHECK(h3.residual_full <= 1e-8);
    CHECK(h3.residual_without_b2 > 1.0);
}

TEST_CASE("route comparison reports per-coefficient differences") {
    RouteComparison cmp = compare_routes(classical());
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        CHECK(std::isfinite(cmp.rel_diff_r[i]));
        CHECK(std::isfinite(cmp.rel_diff_s[i]));
        worst = std::max({worst, cmp.rel_diff_r[i], cmp.rel_diff_s[i]});
    }
    CHECK(cmp.max_rel_diff == doctest::Approx(worst).epsilon(1e-15));
}

TEST_CASE("closed-form assembly places the ten harmonics") {
    RouteComparison cmp = compare_routes(classical());
    B2Pair b2 = b2_closed_form(cmp.closed);
    CHECK(b2.B2_10.coeff({2, 0, 0, 0, Trig::Cos}) == cmp.closed.r[0]);
    CHECK(b2.B2_10.coeff({2, 2, 0, 0, Trig::Cos}) == cmp.closed.r[1]);
    CHECK(b2.B2_10.coeff({2, 0, 2, 0, Trig::Cos}) == cmp.closed.r[2]);
    CHECK(b2.B2_01.coeff({2, 0, 2, 0, Trig::Cos}) == -cmp.closed.s[2]);
    CHECK(b2.B2_10.degree() == 2);
    CHECK(b2.B2_01.degree() == 2);
}

TEST_CASE("near-resonant frequencies are rejected") {
    Params p = classical();
    WhittakerTransform J = whittaker_matrix(p, frequencies(p));
    Frequencies bad{0.9, 0.45 + 1e-12};  // 2*omega2 - omega1 ~ 0
    CHECK_THROWS_AS(rs_coefficients(bad, J, fg_tables(p)), SmallDivisorError);
}
