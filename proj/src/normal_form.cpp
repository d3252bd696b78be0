#include "lp4/normal_form.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace lp4 {

namespace {
const double kSqrt3 = std::sqrt(3.0);
constexpr double kPi = 3.14159265358979323846;

// Quartic in lambda^2: lambda^4 + bq lambda^2 + cq.
void quartic_coeffs(const QuadraticCoeffs& q, double n, double& bq, double& cq) {
    bq = 2.0 * (q.E + q.F + n * n);
    cq = 4.0 * q.E * q.F - q.G * q.G + n * n * n * n - 2.0 * n * n * (q.E + q.F);
}
}  // namespace

CharacteristicRoots characteristic_roots(const QuadraticCoeffs& q, double n) {
    double bq, cq;
    quartic_coeffs(q, n, bq, cq);
    const std::complex<double> disc = std::sqrt(std::complex<double>(bq * bq - 4.0 * cq));
    const std::complex<double> l2a = 0.5 * (-bq + disc);
    const std::complex<double> l2b = 0.5 * (-bq - disc);
    CharacteristicRoots out;
    out.quartic = {std::sqrt(l2a), -std::sqrt(l2a), std::sqrt(l2b), -std::sqrt(l2b)};

    // Hamilton's equations z' = M z for H2.
    Eigen::Matrix4d M;
    M << 0, n, 1, 0,
        -n, 0, 0, 1,
        -2.0 * q.E, -q.G, 0, n,
        -q.G, -2.0 * q.F, -n, 0;
    Eigen::EigenSolver<Eigen::Matrix4d> es(M);
    for (int i = 0; i < 4; ++i) out.matrix[i] = es.eigenvalues()(i);

    // Greedy pairing for the mismatch metric.
    std::array<bool, 4> used{};
    double worst = 0.0;
    for (const auto& r : out.quartic) {
        double best = 1e300;
        int bi = -1;
        for (int i = 0; i < 4; ++i) {
            if (used[i]) continue;
            const double dmag = std::abs(r - out.matrix[i]);
            if (dmag < best) {
                best = dmag;
                bi = i;
            }
        }
        used[bi] = true;
        worst = std::max(worst, best);
    }
    out.max_mismatch = worst;
    return out;
}

double mu_crit_tabulated(double eps, double A2, double nw) {
    return 0.0385208965045513718 - 0.221895916277307669 * eps +
           2.1038871010983331 * A2 + 0.493433373141671349 * eps * A2 +
           0.704139054372097028 * nw + 0.401154273957540929 * eps * nw;
}

double mu_crit_bisection(double eps, double A2, double nw) {
    const double n = std::sqrt(1.0 + 1.5 * A2);
    auto D_of_mu = [&](double mu) {
        const QuadraticCoeffs q = quadratic_coeffs_from(eps, A2, nw, 1.0 - 2.0 * mu);
        double bq, cq;
        quartic_coeffs(q, n, bq, cq);
        return bq * bq - 4.0 * cq;
    };
    double lo = 1e-9, hi = 0.5;
    double flo = D_of_mu(lo), fhi = D_of_mu(hi);
    if (flo * fhi > 0.0)
        throw std::runtime_error("mu_crit_bisection: discriminant does not change sign");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = D_of_mu(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

StabilityReport stability(const Params& p) {
    const Derived d = derive(p);
    const QuadraticCoeffs q = quadratic_coeffs(p);
    double bq, cq;
    quartic_coeffs(q, d.n, bq, cq);
    StabilityReport r;
    r.D = bq * bq - 4.0 * cq;
    r.stable = r.D > 0.0;
    r.mu_crit = mu_crit_tabulated(d.epsilon, p.A2, d.nW1);
    r.margin = r.mu_crit - p.mu;
    return r;
}

Frequencies frequencies(const Params& p) {
    const Derived d = derive(p);
    const QuadraticCoeffs q = quadratic_coeffs(p);
    double bq, cq;
    quartic_coeffs(q, d.n, bq, cq);
    const double disc = bq * bq - 4.0 * cq;
    const CharacteristicRoots roots = characteristic_roots(q, d.n);
    if (!(disc > 0.0))
        throw UnstableError("configuration is linearly unstable (discriminant <= 0)", roots);
    const double l2big = 0.5 * (-bq + std::sqrt(disc));   // closer to zero
    const double l2small = 0.5 * (-bq - std::sqrt(disc)); // more negative
    if (!(l2big < 0.0))
        throw UnstableError("characteristic root lambda^2 is not negative", roots);
    Frequencies f;
    f.omega1 = std::sqrt(-l2small);
    f.omega2 = std::sqrt(-l2big);
    return f;
}

SumProduct tabulated_sum_product(const Params& p) {
    const Derived d = derive(p);
    const double eps = d.epsilon, A2 = p.A2, nw = d.nW1, g = d.gamma;
    SumProduct sp;
    sp.sum = 1.0 - g * eps / 2 + 3 * g * A2 / 2 + 83 * eps * A2 / 12 +
             299 * g * eps * A2 / 144 - nw / (24 * kSqrt3) + 5 * g * nw / (8 * kSqrt3) -
             53 * eps * nw / (54 * kSqrt3) - 5 * g * g * nw / (24 * kSqrt3) +
             173 * g * eps * nw / (54 * kSqrt3) - 3 * g * g * eps * nw / (36 * kSqrt3);
    sp.product = 27.0 / 16 - 27 * g * g / 16 + 9 * eps / 8 + 9 * g * eps / 8 -
                 3 * g * g * eps / 8 + 117 * g * A2 / 16 - 241 * eps * A2 / 32 +
                 2515 * g * eps * A2 / 192 + 35 * nw / (16 * kSqrt3) -
                 55 * kSqrt3 * g * nw / 16 - 5 * kSqrt3 * g * g * nw / 4 -
                 1277 * eps * nw / (288 * kSqrt3) + 5021 * g * eps * nw / (288 * kSqrt3) +
                 991 * g * g * eps * nw / (48 * kSqrt3);
    return sp;
}

GammaRelationResidual gamma_relation_residual(const Params& p, const Frequencies& f) {
    const Derived d = derive(p);
    const double eps = d.epsilon, A2 = p.A2, nw = d.nW1, g = d.gamma;
    const double g2 = g * g;

    auto rhs_j = [&](double w) {
        const double w2 = w * w, w4 = w2 * w2;
        const double c0 = 1.0 + 4 * eps / 9 - 107 * eps * A2 / 27 + 2 * g * eps / 3 +
                          1579 * g * eps * A2 / 324 - 25 * nw / (27 * kSqrt3) -
                          55 * g * nw / (9 * kSqrt3) + 3809 * eps * nw / (486 * kSqrt3) +
                          4961 * g * eps * nw / (486 * kSqrt3);
        const double c2 = -16.0 / 27 + 32 * eps / 243 + 8 * g * eps / 27 + 208 * A2 / 81 -
                          8 * g * A2 / 27 - 4868 * eps * A2 / 729 - 563 * g * eps * A2 / 243 +
                          296 * nw / (243 * kSqrt3) - 10 * g * nw / (27 * kSqrt3) -
                          15892 * eps * nw / (2187 * kSqrt3) -
                          1864 * g * eps * nw / (729 * kSqrt3);
        const double c4 = 16.0 / 27 - 32 * eps / 243 - 208 * A2 / 81 -
                          1880 * eps * A2 / 729 - 2720 * nw / (2187 * kSqrt3) +
                          49552 * eps * nw / (6561 * kSqrt3) -
                          80 * g * eps * nw / (2187 * kSqrt3);
        return c0 + c2 * w2 + c4 * w4;
    };
    const double u = f.omega1 * f.omega2;
    const double rhs_u = 1.0 + 4 * eps / 9 - 107 * eps * A2 / 27 - 25 * nw / (27 * kSqrt3) +
                         3809 * eps * nw / (486 * kSqrt3) +
                         g * (2 * eps / 3 + 1579 * eps * A2 / 324 -
                              55 * g * nw / (9 * kSqrt3) +
                              4961 * g * eps * nw / (486 * kSqrt3)) +
                         (-16.0 / 27 + 32 * eps / 243 + 208 * A2 / 81 -
                          1880 * eps * A2 / 729 + 320 * nw / (243 * kSqrt3) -
                          15856 * eps * nw / (2187 * kSqrt3)) *
                             u * u;

    GammaRelationResidual r;
    r.res_omega1 = std::abs(g2 - rhs_j(f.omega1));
    r.res_omega2 = std::abs(g2 - rhs_j(f.omega2));
    r.res_u = std::abs(g2 - rhs_u);
    return r;
}

WhittakerTransform whittaker_matrix(const Params& p, const Frequencies& f) {
    const Derived d = derive(p);
    const double eps = d.epsilon, A2 = p.A2, nw = d.nW1, g = d.gamma, n = d.n;
    const double w1 = f.omega1, w2 = f.omega2;
    const double k1s = 2 * w1 * w1 - 1;
    const double k2s = 1 - 2 * w2 * w2;
    if (std::abs(2 * w1 * w1 - 1) < 1e-9 || std::abs(2 * w2 * w2 - 1) < 1e-9)
        throw std::domain_error("resonance omega_j^2 = 1/2: transformation is singular");
    if (!(k1s > 0.0) || !(k2s > 0.0))
        throw std::domain_error("frequency ordering violated: k_j^2 <= 0");

    WhittakerTransform J;
    J.l1 = std::sqrt(4 * w1 * w1 + 9);
    J.l2 = std::sqrt(4 * w2 * w2 + 9);
    J.k1 = std::sqrt(k1s);
    J.k2 = std::sqrt(k2s);
    const double l1s = J.l1 * J.l1, l2s = J.l2 * J.l2;
    const double s3 = kSqrt3;

    J.J13 = J.l1 / (2 * w1 * J.k1) *
            (1 -
             1 / (2 * l1s) *
                 (eps + 45 * A2 / 2 - 717 * A2 * eps / 36 + (67 + 19 * g) / (12 * s3) * nw -
                  (431 - 3 * g) / (27 * s3) * nw * eps) +
             g / (2 * l1s) *
                 (3 * eps - 29 * A2 / 36 - (187 + 27 * g) / (12 * s3) * nw -
                  2 * (247 + 3 * g) / (27 * s3) * nw * eps) -
             1 / (2 * k1s) *
                 (eps / 2 - 3 * A2 - 73 * A2 * eps / 24 + (1 - 9 * g) / (24 * s3) * nw +
                  (53 - 39 * g) / (54 * s3) * nw * eps) -
             g / (4 * k1s) *
                 (eps - 3 * A2 - 299 * A2 * eps / 72 - (6 - 5 * g) / (12 * s3) * nw -
                  (266 - 93 * g) / (54 * s3) * nw * eps) +
             eps / (4 * l1s * k1s) * (3 * A2 / 4 + (33 + 14 * g) / (12 * s3) * nw) +
             g * eps / (8 * l1s * k1s) * (347 * A2 / 36 - (43 - 8 * g) / (4 * s3) * nw));

    J.J14 = J.l2 / (2 * w2 * J.k2) *
            (1 -
             1 / (2 * l2s) *
                 (eps + 45 * A2 / 2 - 717 * A2 * eps / 36 + (67 + 19 * g) / (12 * s3) * nw -
                  (431 - 3 * g) / (27 * s3) * nw * eps) -
             g / (2 * l2s) *
                 (3 * eps - 293 * A2 / 36 + (187 + 27 * g) / (12 * s3) * nw -
                  2 * (247 + 3 * g) / (27 * s3) * nw * eps) -
             1 / (2 * k2s) *
                 (eps / 2 - 3 * A2 - 73 * A2 * eps / 24 + (1 - 9 * g) / (24 * s3) * nw +
                  (53 - 39 * g) / (54 * s3) * nw * eps) +
             g / (2 * k2s) *
                 (eps - 3 * A2 - 299 * A2 * eps / 72 - (6 - 5 * g) / (12 * s3) * nw -
                  (268 - 9 * g) / (54 * s3) * nw * eps) -
             eps / (4 * l2s * k2s) * (33 * A2 / 4 + (1643 - 93 * g) / (216 * s3) * nw) +
             g * eps / (4 * l2s * k2s) * (737 * A2 / 72 - (13 + 2 * g) / s3 * nw));

    J.J21 = -4 * n * w1 / (J.l1 * J.k1) *
            (1 +
             1 / (2 * l1s) *
                 (eps + 45 * A2 / 2 - 717 * A2 * eps / 36 + (67 + 19 * g) / (12 * s3) * nw -
                  (413 - 3 * g) / (27 * s3) * nw * eps) -
             g / (2 * l1s) *
                 (3 * eps - 293 * A2 / 36 + (187 + 27 * g) / (12 * s3) * nw -
                  2 * (247 + 3 * g) / (27 * s3) * nw * eps) -
             1 / (2 * k1s) *
                 (eps / 2 - 3 * A2 - 73 * A2 * eps / 24 + (1 - 9 * g) / (24 * s3) * nw +
                  (53 - 39 * g) / (54 * s3) * nw * eps) -
             g / (4 * k1s) *
                 (eps - 3 * A2 - 299 * A2 * eps / 72 - (6 - 5 * g) / (12 * s3) * nw -
                  (268 - 93 * g) / (54 * s3) * nw * eps) +
             eps / (8 * l1s * k1s) * (33 * A2 / 4 + (68 - 10 * g) / (24 * s3) * nw) +
             g * eps / (8 * l1s * k1s) * (242 * A2 / 9 + (43 - 8 * g) / (4 * s3) * nw));

    J.J22 = 4 * n * w2 / (J.l2 * J.k2) *
            (1 +
             1 / (2 * l2s) *
                 (eps + 45 * A2 / 2 - 717 * A2 * eps / 36 + (67 + 19 * g) / (12 * s3) * nw -
                  (413 - 3 * g) / (27 * s3) * nw * eps) -
             g / (2 * l2s) *
                 (3 * eps - 293 * A2 / 36 + (187 + 27 * g) / (12 * s3) * nw -
                  2 * (247 + 3 * g) / (27 * s3) * nw * eps) +
             1 / (2 * k2s) *
                 (eps / 2 - 3 * A2 - 73 * A2 * eps / 24 + (1 - 9 * g) / (24 * s3) * nw +
                  (53 - 39 * g) / (54 * s3) * nw * eps) -
             g / (4 * k2s) *
                 (eps - 3 * A2 - 299 * A2 * eps / 72 - (6 - 5 * g) / (12 * s3) * nw -
                  (268 - 93 * g) / (54 * s3) * nw * eps) +
             eps / (4 * l2s * k2s) * (33 * A2 / 4 + (34 + 5 * g) / (12 * s3) * nw) +
             g * eps / (8 * l2s * k2s) * (75 * A2 / 2 + (43 - 8 * g) / (4 * s3) * nw));

    J.J23 = s3 / (4 * w1 * J.l1 * J.k1) *
            (2 * eps + 6 * A2 + 37 * A2 * eps / 2 - (13 + g) / (2 * s3) * nw +
             2 * (79 - 7 * g) / (9 * s3) * nw * eps -
             g * (6 + 2 * eps / 3 + 13 * A2 - 33 * A2 * eps / 2 + (11 - g) / (2 * s3) * nw -
                  (186 - g) / (9 * s3) * nw * eps) +
             1 / (2 * l1s) * (51 * A2 + (14 + 8 * g) / (3 * s3) * nw) -
             eps / k1s * (3 * A2 + (19 + 6 * g) / (6 * s3) * nw) -
             g / (2 * l1s) *
                 (6 * eps + 135 * A2 - 808 * A2 * eps / 9 - (67 + 19 * g) / (2 * s3) * nw -
                  (755 + 19 * g) / (9 * s3) * nw * eps) -
             g / (2 * k1s) *
                 (3 * eps - 18 * A2 - 55 * A2 * eps / 4 - (1 - 9 * g) / (4 * s3) * nw +
                  (923 - 60 * g) / (12 * s3) * nw * eps) +
             g * eps / (8 * l1s * k1s) * (9 * A2 / 2 + (34 - 5 * g) / (2 * s3) * nw));

    // The last two brackets reference l1, k1 as tabulated.
    J.J24 = s3 / (4 * w2 * J.l2 * J.k2) *
            (2 * eps + 6 * A2 + 37 * A2 * eps / 2 - (13 + g) / (2 * s3) * nw +
             2 * (79 - 7 * g) / (9 * s3) * nw * eps -
             g * (6 + 2 * eps / 3 + 13 * A2 - 33 * A2 * eps / 2 + (11 - g) / (2 * s3) * nw -
                  (186 - g) / (9 * s3) * nw * eps) -
             1 / (2 * l2s) * (51 * A2 + (14 + 8 * g) / (3 * s3) * nw) -
             eps / k2s * (3 * A2 + (19 + 6 * g) / (6 * s3) * nw) -
             g / (2 * l2s) *
                 (6 * eps + 135 * A2 - 808 * A2 * eps / 9 - (67 + 19 * g) / (2 * s3) * nw -
                  (755 + 19 * g) / (9 * s3) * nw * eps) -
             g / (2 * k1s) *
                 (3 * eps - 18 * A2 - 55 * A2 * eps / 4 - (1 - 9 * g) / (4 * s3) * nw +
                  (923 - 60 * g) / (12 * s3) * nw * eps) -
             g * eps / (4 * l1s * k1s) * (99 * A2 / 2 + (34 - 5 * g) / (2 * s3) * nw));
    return J;
}

FirstOrderSeries first_order_series(const Frequencies& f, const WhittakerTransform& J) {
    FirstOrderSeries out;
    const double w1 = f.omega1, w2 = f.omega2;
    out.X1.add_term({1, 0, 1, 0, Trig::Cos}, J.J13 * std::sqrt(2.0 * w1));
    out.X1.add_term({1, 1, 0, 1, Trig::Cos}, J.J14 * std::sqrt(2.0 * w2));
    out.Y1.add_term({1, 0, 1, 0, Trig::Sin}, J.J21 * std::sqrt(2.0 / w1));
    out.Y1.add_term({1, 1, 0, 1, Trig::Sin}, J.J22 * std::sqrt(2.0 / w2));
    out.Y1.add_term({1, 0, 1, 0, Trig::Cos}, J.J23 * std::sqrt(2.0 * w1));
    out.Y1.add_term({1, 1, 0, 1, Trig::Cos}, J.J24 * std::sqrt(2.0 * w2));
    return out;
}

OrbitSamples first_order_orbit(const std::vector<double>& t, const Frequencies& f,
                               const WhittakerTransform& J, double I1, double I2,
                               double phase1, double phase2) {
    if (I1 < 0.0 || I2 < 0.0)
        throw std::invalid_argument("actions must be non-negative");
    const FirstOrderSeries s = first_order_series(f, J);
    OrbitSamples out;
    out.x.reserve(t.size());
    out.y.reserve(t.size());
    for (double ti : t) {
        const double phi1 = f.omega1 * ti + phase1;
        const double phi2 = -f.omega2 * ti + phase2;
        out.x.push_back(s.X1.evaluate(I1, I2, phi1, phi2));
        out.y.push_back(s.Y1.evaluate(I1, I2, phi1, phi2));
    }
    return out;
}

double normal_form_residual(const Params& p) {
    const Derived d = derive(p);
    const QuadraticCoeffs q = quadratic_coeffs(p);
    const Frequencies f = frequencies(p);
    const WhittakerTransform J = whittaker_matrix(p, f);
    const FirstOrderSeries s = first_order_series(f, J);
    const FrequencyPair fp{f.omega1, f.omega2};

    const DAlembertSeries PX = apply_D(s.X1, fp) - d.n * s.Y1;
    const DAlembertSeries PY = apply_D(s.Y1, fp) + d.n * s.X1;
    DAlembertSeries H2 = 0.5 * (mul(PX, PX) + mul(PY, PY)) + d.n * (mul(s.Y1, PX) - mul(s.X1, PY)) +
                         q.E * mul(s.X1, s.X1) + q.F * mul(s.Y1, s.Y1) + q.G * mul(s.X1, s.Y1);
    DAlembertSeries R = H2;
    R.add_term({2, 0, 0, 0, Trig::Cos}, -f.omega1);
    R.add_term({2, 2, 0, 0, Trig::Cos}, f.omega2);

    double worst = 0.0;
    const double Ivals[3] = {0.0, 0.3, 1.0};
    for (double I1 : Ivals) {
        for (double I2 : Ivals) {
            if (I1 + I2 == 0.0) continue;
            for (int a = 0; a < 8; ++a) {
                for (int b = 0; b < 8; ++b) {
                    const double phi1 = 2.0 * kPi * a / 8;
                    const double phi2 = 2.0 * kPi * b / 8;
                    worst = std::max(worst,
                                     std::abs(R.evaluate(I1, I2, phi1, phi2)) / (I1 + I2));
                }
            }
        }
    }
    return worst;
}

}  // namespace lp4
