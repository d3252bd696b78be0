#include "lp4/birkhoff.hpp"

#include <cmath>
#include <sstream>

namespace lp4 {

namespace {
const double kSqrt3 = std::sqrt(3.0);

// One row of either the F or the G tables (shared r/s implementation).
struct Tab {
    double f1, f2, f3, f4;
    double f1p, f2p, f3p, f4p;
    double f1pp, f2pp, f3pp, f4pp;
};
}  // namespace

FGTables fg_tables(const Params& p) {
    const Derived d = derive(p);
    const double eps = d.epsilon, A2 = p.A2, nw = d.nW1, g = d.gamma;
    const double s3 = kSqrt3;
    FGTables t;

    t.F1 = -nw * eps / 6;
    t.F2 = (3.0 / 32) *
           ((16.0 / 3) * eps + 6 * A2 - (979.0 / 18) * A2 * eps +
            (143 + 9 * g) / (6 * s3) * nw + (555 + 376 * g) / (27 * s3) * nw * eps +
            g * (14 + (4.0 / 3) * eps + 25 * A2 - (1507.0 / 18) * A2 * eps -
                 (215 + 29 * g) / (6 * s3) * nw -
                 2 * (1174 + 169 * g) / (27 * s3) * nw * eps));
    t.F3 = (3 * s3 / 16) *
           (14 - (16.0 / 3) * eps + (23.0 / 2) * A2 - (104.0 / 9) * A2 * eps +
            115 * (1 + g) / (18 * s3) * nw - 2 * (439 - 68 * g) / (27 * s3) * nw * eps +
            g * ((32.0 / 3) * eps + 40 * A2 - (310.0 / 9) * A2 * eps +
                 (511 + 53 * g) / (6 * s3) * nw - (2519 - 249 * g) / (27 * s3) * nw * eps));
    t.F4 = (-3.0 / 256) *
           (364 + 420 * A2 - (17801.0 / 9) * A2 * eps + (2821 + 189 * g) / (3 * s3) * nw -
            (23077 + 9592 * g) / (27 * s3) * nw * eps +
            28 * g *
                (23 + (100.0 / 21) * eps + (849.0 / 14) * A2 + (59.0 / 7) * A2 * eps -
                 (125 + 38 * g) / (6 * s3) * nw - (87613 - 213 * g) / (27 * s3) * nw * eps));

    t.F1p = nw * eps / (3 * s3);
    t.F2p = (3 * s3 / 16) *
            (14 - (16.0 / 3) * eps + A2 - (1367.0 / 18) * A2 * eps +
             115 * (1 + g) / (18 * s3) * nw - (863 - 136 * g) / (27 * s3) * nw * eps +
             g * ((32.0 / 3) * eps + 40 * A2 - (382.0 / 9) * A2 * eps +
                  (511 + 53 * g) / (6 * s3) * nw - (2519 - 24 * g) / (27 * s3) * nw * eps));
    t.F3p = (-9.0 / 8) *
            ((8.0 / 3) * eps + (203.0 / 6) * A2 - (721.0 / 54) * A2 * eps -
             (105 + 15 * g) / (18 * s3) * nw - (319 - 114 * g) / (81 * s3) * nw * eps +
             g * (2 - (4.0 / 9) * eps - (173.0 / 6) * A2 - (781.0 / 9) * A2 * eps +
                  (197 + 23 * g) / (18 * s3) * nw - (265 - 32 * g) / (81 * s3) * nw * eps));
    t.F4p = (-3 * s3 / 16) *
            (392 - (532.0 / 3) * eps + (1918.0 / 3) * A2 - (28582.0 / 9) * A2 * eps +
             (203 + 1211 * g) / (9 * s3) * nw + (949 + 4378 * g) / (27 * s3) * nw * eps +
             28 * g *
                 ((108.0 / 7) * eps + (4037.0 / 84) * A2 - (611.0 / 21) * A2 * eps +
                  (8397 + 919 * g) / (84 * s3) * nw -
                  (92266 - 1869 * g) / (27 * s3) * nw * eps));

    t.F1pp = nw * eps / 6;
    t.F2pp = (-9.0 / 32) *
             ((8.0 / 3) * eps + (203.0 / 6) * A2 - (625.0 / 54) * A2 * eps -
              (105 + 15 * g) / (18 * s3) * nw - (307 - 114 * g) / (81 * s3) * nw * eps +
              g * (2 - (4.0 / 9) * eps + (55.0 / 2) * A2 - (797.0 / 54) * A2 * eps +
                   (197 + 23 * g) / (18 * s3) * nw - (211 - 32 * g) / (81 * s3) * nw * eps));
    t.F3pp = (-9 * s3 / 16) *
             (2 - (8.0 / 3) * eps + (55.0 / 6) * A2 - (134.0 / 3) * A2 * eps -
              (37 + g) / (18 * s3) * nw - (93 + 226 * g) / (81 * s3) * nw * eps +
              g * (4 * eps + (169.0 / 27) * A2 * eps + (241 + 45 * g) / (18 * s3) * nw -
                   (1558 - 126 * g) / (81 * s3) * nw * eps));
    t.F4pp = (9.0 / 256) *
             ((212.0 / 3) * eps + (2950.0 / 3) * A2 - (1370.0 / 27) * A2 * eps -
              (771 + 237 * g) / (9 * s3) * nw - 2 * (1907 - 984 * g) / (81 * s3) * nw * eps +
              28 * g *
                  (11.0 / 7 + (4.0 / 9) * eps - (152.0 / 7) * A2 -
                   (36965.0 / 504) * A2 * eps + (2569 + 277 * g) / (252 * s3) * nw +
                   (22603 + 4396 * g) / (1134 * s3) * nw * eps));

    t.G1 = -nw * eps / 6;
    t.G2 = (3.0 / 32) *
           (14 - (16.0 / 3) * eps + A2 - (1367.0 / 18) * A2 * eps +
            115 * (1 + g) / (18 * s3) * nw - (863 - 136 * g) / (27 * s3) * nw * eps +
            g * ((32.0 / 3) * eps + 40 * A2 - (382.0 / 9) * A2 * eps +
                 (511 + 53 * g) / (6 * s3) * nw - (2519 - 24 * g) / (27 * s3) * nw * eps));
    t.G3 = (3 * s3 / 16) *
           ((16.0 / 3) * eps + 6 * A2 - (907.0 / 18) * A2 * eps +
            (143 + 9 * g) / (6 * s3) * nw + (477 + 403 * g) / (27 * s3) * nw * eps +
            g * (14 + (4.0 / 3) * eps + (71.0 / 2) * A2 - (1489.0 / 18) * A2 * eps -
                 (215 + 29 * g) / (6 * s3) * nw -
                 2 * (1174 + 169 * g) / (27 * s3) * nw * eps));
    t.G4 = (3 * s3 / 256) *
           (84 + 52 * eps + 212 * A2 - 267 * A2 * eps + 2 * (299 + 61 * g) / (3 * s3) * nw -
            (14854 + 225 * g) / (27 * s3) * nw * eps +
            g * (32 * eps + 156 * A2 + 649 * A2 * eps - (562 + 8 * g) / (3 * s3) * nw +
                 (13285 + 5169 * g) / (27 * s3) * nw * eps));

    t.G1p = -nw * eps / s3;
    t.G2p = (9.0 / 16) *
            ((8.0 / 3) * eps + (203.0 / 6) * A2 - (625.0 / 54) * A2 * eps -
             (105 + 15 * g) / (18 * s3) * nw - (307 - 114 * g) / (81 * s3) * nw * eps -
             g * (2 - (4.0 / 9) * eps - (55.0 / 2) * A2 - (797.0 / 54) * A2 * eps +
                  (197 + 23 * g) / (18 * s3) * nw - (211 - 32 * g) / (81 * s3) * nw * eps));
    t.G3p = (3 * s3 / 8) *
            (14 - (16.0 / 3) * eps + (65.0 / 6) * A2 - (1439.0 / 18) * A2 * eps +
             115 * (1 + g) / (18 * s3) * nw - (941 - 118 * g) / (27 * s3) * nw * eps +
             g * ((32.0 / 3) * eps - 40 * A2 - (310.0 / 9) * A2 * eps +
                  (511 + 53 * g) / (6 * s3) * nw - (251 - 24 * g) / (27 * s3) * nw * eps));
    t.G4p = (-9.0 / 128) *
            (12 * eps - 287 * A2 + (847.0 / 9) * A2 * eps - 2 * (28 + g) / s3 * nw -
             4 * (2210 - 69 * g) / (27 * s3) * nw * eps -
             g * (96 + (152.0 / 3) * eps + 135 * A2 - (2320.0 / 9) * A2 * eps +
                  (497 - 123 * g) / (3 * s3) * nw -
                  4 * (17697 + 32 * g) / (27 * s3) * nw * eps));

    t.G1pp = -nw * eps / 6;
    t.G2pp = (9 * s3 / 32) *
             (2 - (8.0 / 3) * eps + (23.0 / 3) * A2 - 44 * A2 * eps -
              (37 + g) / (18 * s3) * nw - (123 + 349 * g) / (3 * s3) * nw * eps +
              g * (4 * eps + (88.0 / 27) * A2 + (421 + 45 * g) / (18 * s3) * nw -
                   (1558 - 126 * g) / (81 * s3) * nw * eps));
    t.G3pp = (-9.0 / 16) *
             ((8.0 / 9) * eps + (203.0 / 6) * A2 - (589.0 / 54) * A2 * eps -
              5 * (51 + 2 * g) / (18 * s3) * nw - (349 - 282 * g) / (81 * s3) * nw * eps +
              g * (2 - (4.0 / 9) * eps - 26 * A2 - (412.0 / 27) * A2 * eps +
                   (197 + 23 * g) / (18 * s3) * nw - (211 - 32 * g) / (81 * s3) * nw * eps));
    t.G4pp = (-9 * s3 / 256) *
             (12 + (20.0 / 3) * eps + 76 * A2 - (350.0 / 3) * A2 * eps +
              (32 * g) / (3 * s3) * nw - 2 * (1529 + 450 * g) / (27 * s3) * nw * eps +
              g * (8 * eps - (749.0 / 3) * A2 + (808.0 / 9) * A2 * eps -
                   (109 - 40 * g) / (3 * s3) * nw + (35 - 1269 * g) / (27 * s3) * nw * eps));
    return t;
}

namespace {

void check_divisor(double value, const char* name) {
    if (std::abs(value) < 1e-8) {
        std::ostringstream msg;
        msg << "vanishing denominator " << name << " = " << value;
        throw SmallDivisorError(msg.str());
    }
}

// Tabulated harmonic coefficients, shared by r (F tables) and s (G tables).
std::array<double, 10> rs_from_table(const Frequencies& f, const WhittakerTransform& Jm,
                                     const Tab& t) {
    const double w1 = f.omega1, w2 = f.omega2;
    const double J13 = Jm.J13, J14 = Jm.J14, J21 = Jm.J21, J22 = Jm.J22, J23 = Jm.J23,
                 J24 = Jm.J24;
    check_divisor(4 * w1 * w1 - w2 * w2, "4w1^2 - w2^2");
    check_divisor(4 * w2 * w2 - w1 * w1, "4w2^2 - w1^2");
    check_divisor(2 * w1 - w2, "2w1 - w2");
    check_divisor(2 * w2 - w1, "2w2 - w1");

    std::array<double, 10> r{};
    r[0] = 1 / (w1 * w1 * w2 * w2) *
           (J13 * J13 * w1 * t.f4 + J13 * J23 * w1 * t.f4p +
            (J21 * J21 / w1 + J23 * J23 * w1) * t.f4pp);
    r[1] = 1 / (w1 * w1 * w2 * w2) *
           (J14 * J14 * w2 * t.f4 + J14 * J24 * w2 * t.f4p +
            (J22 * J22 / w2 + J24 * J24 * w2) * t.f4pp);
    // The final bracket multiplies the index-1 double-primed entry as tabulated.
    r[2] = -1 / (3 * w1 * w1 * (4 * w1 * w1 - w2 * w2)) *
           (8 * w1 * w1 * w1 * J21 * (J13 * t.f1p + 2 * J23 * t.f1pp) +
            4 * w1 * w1 *
                ((J13 * t.f2 + J23 * t.f2pp) * J13 * w1 -
                 (J21 * J21 / w1 - J23 * J23 * w1) * t.f1pp) -
            2 * w1 * J21 * (J13 * t.f3p + 2 * J23 * t.f3pp) -
            w1 * J13 * (J13 * t.f4 + J23 * t.f4pp) * w1 +
            (J21 * J21 / w1 - J23 * J23 * w1) * t.f1pp);
    r[3] = 1 / (3 * w2 * w2 * (4 * w2 * w2 - w1 * w1)) *
           (8 * w2 * w2 * w2 * J22 * (J14 * t.f1p + 2 * J24 * t.f1pp) -
            4 * w2 * w2 *
                ((J14 * t.f2 + J24 * t.f2pp) * J14 * w2 -
                 (J22 * J22 / w2 - J24 * J24 * w2) * t.f2pp) -
            2 * w2 * J22 * (J14 * t.f3p + 2 * J24 * t.f3pp) -
            w2 * J14 * (J14 * t.f4 + J24 * t.f4pp) * w2 -
            (J22 * J22 / w2 - J24 * J24 * w2) * t.f4pp);

    const double A = J13 * J22 * std::sqrt(w1 / w2) - J14 * J21 * std::sqrt(w2 / w1);
    const double Bm = J21 * J24 * std::sqrt(w2 / w1) - J22 * J23 * std::sqrt(w1 / w2);
    const double Bp = J21 * J24 * std::sqrt(w2 / w1) + J22 * J23 * std::sqrt(w1 / w2);
    const double rt = std::sqrt(w1 * w2);
    const double Dm = J21 * J22 / rt - J23 * J24 * rt;
    const double Dp = J21 * J22 / rt + J23 * J24 * rt;
    const double E1 = 2 * J13 * J14 * t.f1 + (J13 * J24 + J14 * J23) * t.f1p;
    const double E2 = 2 * (J13 * J14 * t.f2 + (J13 * J24 + J14 * J23) * t.f2p);
    const double E3 = 2 * (J13 * J14 * t.f3 + (J13 * J24 + J14 * J23) * t.f3p);
    const double E4 = 2 * (J13 * J14 * t.f4 + (J13 * J24 + J14 * J23) * t.f4p);
    const double wp = w1 + w2, wm = w1 - w2;

    r[4] = 1 / (w1 * w2 * (2 * w1 + w2) * (4 * w1 + 2 * w2)) *
           (wp * wp * wp * (A * t.f1p - 2 * Bm * t.f1pp) -
            wp * wp * (E2 * rt + Dp * t.f2pp) - wp * (A * t.f3p - 2 * Bm * t.f3pp) +
            (E4 * rt + 2 * Dp * t.f4pp));
    // The second F3'' bracket pairs J21*J22 with J22*J23 as tabulated.
    r[5] = -1 / (w1 * w2 * (2 * w1 - w2) * (4 * w1 - 2 * w2)) *
           (wm * wm * wm * (A * t.f1p + 2 * Bp * t.f1pp) +
            wm * wm * (E2 * rt - 2 * Dm * t.f2pp) -
            wm * (A * t.f3p +
                  2 * (J21 * J22 * std::sqrt(w2 / w1) + J22 * J23 * std::sqrt(w1 / w2)) *
                      t.f3pp) -
            (E4 * rt - 2 * Dm * t.f4pp));
    r[6] = 1 / (3 * w1 * w1 * (4 * w1 * w1 - w2 * w2)) *
           (8 * w1 * w1 * w1 *
                (J13 * (J13 * t.f1 + J23 * t.f1p) * w1 -
                 (J21 * J21 / w1 - J23 * J23 * w1) * t.f1pp) -
            2 * w1 *
                (w1 * J13 * (J13 * t.f3 + J23 * t.f3p) -
                 (J21 * J21 / w1 - J23 * J23 * w1) * t.f3pp) -
            4 * w1 * w1 * J21 * (J13 * t.f2 + J23 * t.f2pp) * w1 +
            J21 * (J13 * t.f4p + 2 * J23 * t.f4pp));
    r[7] = -1 / (3 * w2 * w2 * (4 * w2 * w2 - w1 * w1)) *
           (8 * w2 * w2 * w2 *
                (J14 * (J14 * t.f1 + J24 * t.f1p) * w2 -
                 (J22 * J22 / w2 - J24 * J24 * w2) * t.f1pp) +
            4 * w2 * w2 * J22 * (J14 * t.f2 + 2 * J24 * t.f2pp) * w2 -
            2 * w2 *
                (w2 * J14 * (J14 * t.f3 + J24 * t.f3p) -
                 (J22 * J22 / w2 - J24 * J24 * w2) * t.f3pp) -
            J22 * (J14 * t.f4p + 2 * J24 * t.f4pp));
    r[8] = 1 / (w1 * w2 * (2 * w1 + w2) * (w1 + 2 * w2)) *
           (wp * wp * wp * (E1 * rt + 2 * Dp * t.f1pp) -
            wp * wp * (A * t.f2p - 2 * Bm * t.f2pp) - wp * (E3 * rt + 2 * Dp * t.f3pp) -
            (A * t.f4p - 2 * Bm * t.f4pp));
    r[9] = 1 / (w1 * w2 * (2 * w1 - w2) * (2 * w2 - w1)) *
           (wm * wm * wm * (E1 * rt - 2 * Dm * t.f1pp) -
            wm * wm * (A * t.f2p + 2 * Bp * t.f2pp) - wm * (E3 * rt - 2 * Dm * t.f3pp) +
            (A * t.f4p + 2 * Bp * t.f4pp));
    return r;
}

}  // namespace

RSCoefficients rs_coefficients(const Frequencies& f, const WhittakerTransform& J,
                               const FGTables& t) {
    const Tab ftab{t.F1, t.F2, t.F3, t.F4, t.F1p, t.F2p, t.F3p, t.F4p,
                   t.F1pp, t.F2pp, t.F3pp, t.F4pp};
    const Tab gtab{t.G1, t.G2, t.G3, t.G4, t.G1p, t.G2p, t.G3p, t.G4p,
                   t.G1pp, t.G2pp, t.G3pp, t.G4pp};
    RSCoefficients out;
    out.r = rs_from_table(f, J, ftab);
    out.s = rs_from_table(f, J, gtab);
    return out;
}

B2Pair b2_closed_form(const RSCoefficients& rs) {
    // harmonic layout: 1, I2-const, cos2phi1, cos2phi2, cos(phi1-phi2),
    // cos(phi1+phi2), sin2phi1, sin2phi2, sin(phi1-phi2), sin(phi1+phi2)
    static const SeriesKey keys[10] = {
        {2, 0, 0, 0, Trig::Cos}, {2, 2, 0, 0, Trig::Cos}, {2, 0, 2, 0, Trig::Cos},
        {2, 2, 0, 2, Trig::Cos}, {2, 1, 1, -1, Trig::Cos}, {2, 1, 1, 1, Trig::Cos},
        {2, 0, 2, 0, Trig::Sin}, {2, 2, 0, 2, Trig::Sin}, {2, 1, 1, -1, Trig::Sin},
        {2, 1, 1, 1, Trig::Sin}};
    B2Pair out;
    for (int i = 0; i < 10; ++i) {
        out.B2_10.add_term(keys[i], rs.r[i]);
        out.B2_01.add_term(keys[i], -rs.s[i]);
    }
    return out;
}

GenericSolve generic_second_order_solve(const Params& p, const Frequencies& f,
                                        const WhittakerTransform& J) {
    const Derived d = derive(p);
    const MoserCheck moser = moser_condition({f.omega1, f.omega2});
    if (!moser.ok) {
        std::ostringstream msg;
        msg << "resonance " << moser.k1 << "*w1 + " << moser.k2
            << "*w2 = " << moser.value;
        throw SmallDivisorError(msg.str());
    }

    const QuadraticCoeffs q = quadratic_coeffs(p);
    const CubicCoeffs c = cubic_coeffs(p);
    const FirstOrderSeries b1 = first_order_series(f, J);
    const FrequencyPair fp{f.omega1, f.omega2};

    const DAlembertSeries& X = b1.X1;
    const DAlembertSeries& Y = b1.Y1;
    const DAlembertSeries VX = apply_D(X, fp);
    const DAlembertSeries VY = apply_D(Y, fp);

    // X2 = dL3/dx, Y2 = dL3/dy on the first-order orbit. The drag part comes
    // from the cubic portion of the T5 bilinear functional.
    DAlembertSeries X2 = (-0.5 * c.T1) * mul(X, X) + (-c.T2) * mul(X, Y) +
                         (-0.5 * c.T3) * mul(Y, Y);
    DAlembertSeries Y2 = (-0.5 * c.T2) * mul(X, X) + (-c.T3) * mul(X, Y) +
                         (-0.5 * c.T4) * mul(Y, Y);
    if (c.W1 != 0.0) {
        const double rho2 = c.a * c.a + c.b * c.b;
        const double w6 = c.W1 / (rho2 * rho2 * rho2);
        const DAlembertSeries avbv = c.a * VX + c.b * VY;   // a vx + b vy
        const DAlembertSeries bxay = c.b * X + (-c.a) * Y;  // b x - a y
        const DAlembertSeries axby = c.a * X + c.b * Y;     // a x + b y
        const DAlembertSeries xvyv = mul(X, VX) + mul(Y, VY);
        X2 += w6 * (c.b * mul(avbv, bxay) + rho2 * (mul(VX, axby) + c.a * xvyv));
        Y2 += w6 * ((-c.a) * mul(avbv, bxay) + rho2 * (mul(VY, axby) + c.b * xvyv));
    }

    const DAlembertSeries DX2 = apply_D(X2, fp), D2X2 = apply_D2(X2, fp);
    const DAlembertSeries DY2 = apply_D(Y2, fp), D2Y2 = apply_D2(Y2, fp);
    const double n2 = d.n * d.n;
    DAlembertSeries Phi2 = D2X2 + (2 * q.F - n2) * X2 + 2 * d.n * DY2 + (-q.G) * Y2;
    DAlembertSeries Psi2 = 2 * d.n * DX2 + q.G * X2 - D2Y2 + (-(2 * q.E - n2)) * Y2;

    const double scale = std::max(Phi2.max_abs(), Psi2.max_abs());
    const double crit =
        std::max(critical_part(Phi2).max_abs(), critical_part(Psi2).max_abs());
    GenericSolve out;
    out.critical_rel = (scale > 0.0) ? crit / scale : 0.0;
    if (out.critical_rel > kCriticalTol) {
        std::ostringstream msg;
        msg << "critical harmonics survive at relative magnitude " << out.critical_rel
            << "; second-order solvability fails";
        throw CriticalTermError(msg.str());
    }
    // Strip rounding-level critical residue before inversion.
    Phi2 -= critical_part(Phi2);
    Psi2 -= critical_part(Psi2);

    out.Phi2 = Phi2;
    out.Psi2 = Psi2;
    out.b2.B2_10 = invert_delta(Phi2, fp);
    out.b2.B2_01 = -1.0 * invert_delta(Psi2, fp);
    return out;
}

namespace {
DAlembertSeries truncated(const DAlembertSeries& s, int deg) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms())
        if (k.deg <= deg) out.add_term(k, c);
    return out;
}
DAlembertSeries degree_part(const DAlembertSeries& s, int deg) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms())
        if (k.deg == deg) out.add_term(k, c);
    return out;
}
}  // namespace

H3Coefficients h3_coefficients(const Params& p, const Frequencies& f,
                               const FirstOrderSeries& b1, const B2Pair& b2) {
    const Derived d = derive(p);
    const QuadraticCoeffs q = quadratic_coeffs(p);
    const CubicCoeffs c = cubic_coeffs(p);
    const FrequencyPair fp{f.omega1, f.omega2};

    auto degree3_norm = [&](bool with_b2) {
        DAlembertSeries xt = b1.X1;
        DAlembertSeries yt = b1.Y1;
        if (with_b2) {
            xt += b2.B2_10;
            yt += b2.B2_01;
        }
        const DAlembertSeries Dx = apply_D(xt, fp);
        const DAlembertSeries Dy = apply_D(yt, fp);
        const DAlembertSeries px = Dx - d.n * yt;
        const DAlembertSeries py = Dy + d.n * xt;
        DAlembertSeries H = 0.5 * (truncated(mul(px, px), 3) + truncated(mul(py, py), 3)) +
                            d.n * (truncated(mul(yt, px), 3) - truncated(mul(xt, py), 3)) +
                            q.E * truncated(mul(xt, xt), 3) +
                            q.F * truncated(mul(yt, yt), 3) +
                            q.G * truncated(mul(xt, yt), 3);
        // H3 = -L3 contribution.
        const DAlembertSeries xx = truncated(mul(xt, xt), 3);
        const DAlembertSeries yy = truncated(mul(yt, yt), 3);
        DAlembertSeries L3 = (-1.0 / 6.0) * (c.T1 * truncated(mul(xx, xt), 3) +
                                             3 * c.T2 * truncated(mul(xx, yt), 3) +
                                             3 * c.T3 * truncated(mul(xt, yy), 3) +
                                             c.T4 * truncated(mul(yy, yt), 3));
        if (c.W1 != 0.0) {
            const double rho2 = c.a * c.a + c.b * c.b;
            const DAlembertSeries avbv = c.a * Dx + c.b * Dy;
            const DAlembertSeries axby = c.a * xt + c.b * yt;
            const DAlembertSeries bxay = c.b * xt + (-c.a) * yt;
            const DAlembertSeries t5 =
                c.W1 / (2 * rho2 * rho2 * rho2) *
                (3.0 * truncated(mul(avbv, axby), 3) -
                 truncated(mul(avbv, truncated(mul(bxay, bxay), 3)), 3) -
                 2 * rho2 *
                     truncated(mul(truncated(mul(xt, Dx) + mul(yt, Dy), 3), axby), 3));
            L3 += (-1.0) * t5;  // L3 carries -(1/3!)*6*T5 = -T5
        }
        H -= L3;
        return degree_part(H, 3);
    };

    const DAlembertSeries h3_with = degree3_norm(true);
    const DAlembertSeries h3_without = degree3_norm(false);

    H3Coefficients out;
    // Parity forbids (p,q) = (0,0) harmonics at odd degree, so the literal
    // angle-free coefficients vanish identically.
    out.A30 = h3_with.coeff({3, 0, 0, 0, Trig::Cos});
    out.A21 = h3_with.coeff({3, 1, 0, 0, Trig::Cos});
    out.A12 = h3_with.coeff({3, 2, 0, 0, Trig::Cos});
    out.A03 = h3_with.coeff({3, 3, 0, 0, Trig::Cos});
    out.residual_full = h3_with.max_abs();
    out.residual_without_b2 = h3_without.max_abs();
    return out;
}

RouteComparison compare_routes(const Params& p) {
    const Frequencies f = frequencies(p);
    const WhittakerTransform J = whittaker_matrix(p, f);
    RouteComparison out;
    out.closed = rs_coefficients(f, J, fg_tables(p));
    const GenericSolve gen = generic_second_order_solve(p, f, J);

    static const SeriesKey keys[10] = {
        {2, 0, 0, 0, Trig::Cos}, {2, 2, 0, 0, Trig::Cos}, {2, 0, 2, 0, Trig::Cos},
        {2, 2, 0, 2, Trig::Cos}, {2, 1, 1, -1, Trig::Cos}, {2, 1, 1, 1, Trig::Cos},
        {2, 0, 2, 0, Trig::Sin}, {2, 2, 0, 2, Trig::Sin}, {2, 1, 1, -1, Trig::Sin},
        {2, 1, 1, 1, Trig::Sin}};
    for (int i = 0; i < 10; ++i) {
        out.generic.r[i] = gen.b2.B2_10.coeff(keys[i]);
        out.generic.s[i] = -gen.b2.B2_01.coeff(keys[i]);
        const double dr = std::abs(out.closed.r[i] - out.generic.r[i]);
        const double ds = std::abs(out.closed.s[i] - out.generic.s[i]);
        out.rel_diff_r[i] = dr / std::max(std::abs(out.generic.r[i]), 1e-30);
        out.rel_diff_s[i] = ds / std::max(std::abs(out.generic.s[i]), 1e-30);
        out.max_rel_diff =
            std::max({out.max_rel_diff, out.rel_diff_r[i], out.rel_diff_s[i]});
    }
    return out;
}

}  // namespace lp4
