#include "lp4/expansion.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace lp4 {

namespace {

const double kSqrt3 = std::sqrt(3.0);

using Fun2 = std::function<double(double, double)>;

// 4th-order central stencils.
double d1x(const Fun2& f, double x, double y, double h) {
    return (f(x - 2 * h, y) - 8 * f(x - h, y) + 8 * f(x + h, y) - f(x + 2 * h, y)) / (12 * h);
}
double d2x(const Fun2& f, double x, double y, double h) {
    return (-f(x - 2 * h, y) + 16 * f(x - h, y) - 30 * f(x, y) + 16 * f(x + h, y) -
            f(x + 2 * h, y)) /
           (12 * h * h);
}
double d3x(const Fun2& f, double x, double y, double h) {
    static const double w[7] = {1.0 / 8, -1.0, 13.0 / 8, 0.0, -13.0 / 8, 1.0, -1.0 / 8};
    double s = 0.0;
    for (int k = -3; k <= 3; ++k) s += w[k + 3] * f(x + k * h, y);
    return s / (h * h * h);
}

double richardson(const std::function<double(double)>& fun, double h) {
    return (16.0 * fun(h / 2) - fun(h)) / 15.0;
}

Fun2 swap_args(const Fun2& f) {
    return [f](double u, double v) { return f(v, u); };
}

}  // namespace

QuadraticCoeffs quadratic_coeffs_from(double eps, double A2, double nw, double g) {
    QuadraticCoeffs c;
    c.E = (1.0 / 16) *
          (2 - 6 * eps - 3 * A2 - (31.0 / 2) * A2 * eps - (69 + g) / (6 * kSqrt3) * nw +
           2 * (307 + 75 * g) / (27 * kSqrt3) * eps * nw +
           g * (2 * eps + 12 * A2 + A2 * eps / 3 + (199 + 17 * g) / (6 * kSqrt3) * nw -
                2 * (226 + 99 * g) / (27 * kSqrt3) * eps * nw));
    c.F = -(1.0 / 16) *
          (10 - 2 * eps + 21 * A2 - (717.0 / 18) * A2 * eps -
           (67 + 19 * g) / (6 * kSqrt3) * nw + 2 * (413 - 3 * g) / (27 * kSqrt3) * eps * nw +
           g * (6 * eps - (293.0 / 18) * A2 * eps + (187 + 27 * g) / (6 * kSqrt3) * nw -
                4 * (247 + 3 * g) / (27 * kSqrt3) * eps * nw));
    c.G = (kSqrt3 / 8) *
          (2 * eps + 6 * A2 - (37.0 / 2) * A2 * eps - (13 + g) / (2 * kSqrt3) * nw +
           2 * (79 - 7 * g) / (27 * kSqrt3) * eps * nw -
           g * (6 - eps / 3 + 13 * A2 - (33.0 / 2) * A2 * eps +
                (11 - g) / (2 * kSqrt3) * nw - (186 - g) / (9 * kSqrt3) * eps * nw));
    return c;
}

QuadraticCoeffs quadratic_coeffs(const Params& p) {
    const Derived d = derive(p);
    return quadratic_coeffs_from(d.epsilon, p.A2, d.nW1, d.gamma);
}

CubicCoeffs cubic_coeffs(const Params& p) {
    const Derived d = derive(p);
    const double eps = d.epsilon, A2 = p.A2, nw = d.nW1, g = d.gamma;
    CubicCoeffs c;
    c.T1 = (3.0 / 16) *
           ((16.0 / 3) * eps + 6 * A2 - (979.0 / 18) * A2 * eps +
            (143 + 9 * g) / (6 * kSqrt3) * nw + (459 + 376 * g) / (27 * kSqrt3) * nw * eps +
            g * (14 + (4.0 / 3) * eps + 25 * A2 - (1507.0 / 18) * A2 * eps -
                 (215 + 29 * g) / (6 * kSqrt3) * nw -
                 2 * (1174 + 169 * g) / (27 * kSqrt3) * nw * eps));
    c.T2 = (3 * kSqrt3 / 16) *
           (14 - (16.0 / 3) * eps + A2 / 3 - (367.0 / 18) * A2 * eps +
            115 * (1 + g) / (18 * kSqrt3) * nw - (959 - 136 * g) / (27 * kSqrt3) * nw * eps +
            g * ((32.0 / 3) * eps + 40 * A2 - (382.0 / 9) * A2 * eps +
                 (511 + 53 * g) / (6 * kSqrt3) * nw -
                 (2519 - 24 * g) / (27 * kSqrt3) * nw * eps));
    c.T3 = -(9.0 / 16) *
           ((8.0 / 3) * eps + (203.0 / 6) * A2 - (625.0 / 54) * A2 * eps -
            (105 + 15 * g) / (18 * kSqrt3) * nw - (403 - 114 * g) / (81 * kSqrt3) * nw * eps +
            g * (2 - (4.0 / 9) * eps + (55.0 / 2) * A2 - (797.0 / 54) * A2 * eps +
                 (197 + 23 * g) / (18 * kSqrt3) * nw -
                 (211 - 32 * g) / (81 * kSqrt3) * nw * eps));
    c.T4 = -(9 * kSqrt3 / 16) *
           (2 - (8.0 / 3) * eps + (23.0 / 3) * A2 - 44 * A2 * eps -
            (37 + g) / (18 * kSqrt3) * nw - (219 + 253 * g) / (81 * kSqrt3) * nw * eps +
            g * (4 * eps + (88.0 / 27) * A2 * eps + (241 + 45 * g) / (18 * kSqrt3) * nw -
                 (1558 - 126 * g) / (81 * kSqrt3) * nw * eps));
    c.W1 = d.W1;
    const ShiftConstants s = shift_constants(p);
    c.a = s.a;
    c.b = s.b;
    return c;
}

double t5_value(const CubicCoeffs& c, double x, double y, double vx, double vy) {
    const double rho2 = c.a * c.a + c.b * c.b;
    const double axby = c.a * x + c.b * y;
    const double bxay = c.b * x - c.a * y;
    return c.W1 / (2.0 * rho2 * rho2 * rho2) *
           ((c.a * vx + c.b * vy) * (3.0 * axby - bxay * bxay) -
            2.0 * (x * vx + y * vy) * axby * rho2);
}

TaylorTable numeric_taylor_oracle(const Params& p, int order) {
    if (order != 2 && order != 3)
        throw std::invalid_argument("numeric_taylor_oracle: order must be 2 or 3");
    const Derived d = derive(p);
    EquilibriumPoint pt = series_point(p, Branch::L4);
    pt = refine_point(pt, p);

    // Exact decomposition L = A + Bx vx + By vy + (vx^2+vy^2)/2 in shifted
    // coordinates (u, v) about the refined point.
    const double xs = pt.x, ys = pt.y;
    const Fun2 A = [&, xs, ys](double u, double v) {
        const double X = xs + u, Y = ys + v;
        const double xm = X + p.mu, xm1 = xm - 1.0;
        const double r1 = std::sqrt(xm * xm + Y * Y);
        const double r2 = std::sqrt(xm1 * xm1 + Y * Y);
        return 0.5 * d.n * d.n * (X * X + Y * Y) + (1.0 - p.mu) * p.q1 / r1 + p.mu / r2 +
               0.5 * p.mu * p.A2 / (r2 * r2 * r2) - d.nW1 * std::atan2(Y, xm);
    };
    const Fun2 Bx = [&, xs, ys](double u, double v) {
        const double X = xs + u, Y = ys + v;
        const double xm = X + p.mu;
        const double r1s = xm * xm + Y * Y;
        return -d.n * Y + 0.5 * d.W1 * xm / r1s;
    };
    const Fun2 By = [&, xs, ys](double u, double v) {
        const double X = xs + u, Y = ys + v;
        const double xm = X + p.mu;
        const double r1s = xm * xm + Y * Y;
        return d.n * X + 0.5 * d.W1 * Y / r1s;
    };

    const double h0 = 1e-2;
    auto deriv = [&](const Fun2& f, int i, int j) -> double {
        // i + j <= 3; composed one-dimensional stencils, Richardson once.
        std::function<double(double)> base;
        if (j == 0) {
            base = [&](double h) {
                if (i == 0) return f(0.0, 0.0);
                if (i == 1) return d1x(f, 0.0, 0.0, h);
                if (i == 2) return d2x(f, 0.0, 0.0, h);
                return d3x(f, 0.0, 0.0, h);
            };
        } else if (i == 0) {
            const Fun2 g = swap_args(f);
            base = [&, g](double h) {
                if (j == 1) return d1x(g, 0.0, 0.0, h);
                if (j == 2) return d2x(g, 0.0, 0.0, h);
                return d3x(g, 0.0, 0.0, h);
            };
        } else if (i == 1 && j == 1) {
            base = [&](double h) {
                const Fun2 g = [&, h](double u, double v) {
                    return d1x(swap_args(f), v, u, h);  // d/dv at (u, v)
                };
                return d1x(g, 0.0, 0.0, h);
            };
        } else if (i == 2 && j == 1) {
            base = [&](double h) {
                const Fun2 g = [&, h](double u, double v) {
                    return d1x(swap_args(f), v, u, h);
                };
                return d2x(g, 0.0, 0.0, h);
            };
        } else {  // i == 1, j == 2
            base = [&](double h) {
                const Fun2 g = [&, h](double u, double v) {
                    return d2x(swap_args(f), v, u, h);
                };
                return d1x(g, 0.0, 0.0, h);
            };
        }
        if (i == 0 && j == 0) return base(h0);
        const double val = richardson(base, h0);
        if (!std::isfinite(val))
            throw std::runtime_error("numeric_taylor_oracle: stencil evaluation not finite");
        return val;
    };
    auto fact = [](int k) { return k == 3 ? 6.0 : (k == 2 ? 2.0 : 1.0); };

    TaylorTable t;
    t.x0 = pt.x;
    t.y0 = pt.y;
    for (int i = 0; i <= 3; ++i) {
        for (int j = 0; i + j <= 3; ++j) {
            if (order == 2 && i + j > 2) continue;
            t.a[i][j] = deriv(A, i, j) / (fact(i) * fact(j));
            if (i + j <= 2 && !(order == 2 && i + j > 1)) {
                t.bx[i][j] = deriv(Bx, i, j) / (fact(i) * fact(j));
                t.by[i][j] = deriv(By, i, j) / (fact(i) * fact(j));
            }
        }
    }
    return t;
}

QuadraticCoeffs oracle_quadratic(const TaylorTable& t, const Params& p) {
    const Derived d = derive(p);
    QuadraticCoeffs c;
    c.E = 0.5 * d.n * d.n - t.a[2][0];
    c.F = 0.5 * d.n * d.n - t.a[0][2];
    c.G = -t.a[1][1];
    return c;
}

CubicCoeffs oracle_cubic(const TaylorTable& t, const Params& p) {
    const Derived d = derive(p);
    CubicCoeffs c;
    c.T1 = -6.0 * t.a[3][0];
    c.T2 = -2.0 * t.a[2][1];
    c.T3 = -2.0 * t.a[1][2];
    c.T4 = -6.0 * t.a[0][3];
    c.W1 = d.W1;
    c.a = t.x0 + p.mu;
    c.b = t.y0;
    return c;
}

H2Form h2_form(const Params& p) {
    const Derived d = derive(p);
    const QuadraticCoeffs q = quadratic_coeffs(p);
    return {q.E, q.F, q.G, d.n};
}

}  // namespace lp4
