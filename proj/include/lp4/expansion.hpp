#pragma once

#include "lp4/equilibria.hpp"
#include "lp4/params.hpp"

namespace lp4 {

// Quadratic-form coefficients of L2 = (vx^2+vy^2)/2 + n(x vy - vx y)
//                                     + n^2(x^2+y^2)/2 - E x^2 - F y^2 - G xy.
struct QuadraticCoeffs {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;
};

// Cubic coefficients of L3 = -(1/3!){x^3 T1 + 3x^2y T2 + 3xy^2 T3 + y^3 T4
// + 6 T5}, where T5 is the drag bilinear functional evaluated at the shift
// constants (a, b).
struct CubicCoeffs {
    double T1 = 0.0;
    double T2 = 0.0;
    double T3 = 0.0;
    double T4 = 0.0;
    double W1 = 0.0;  // drag strength entering T5
    double a = 0.5;   // shift constants at which T5 is anchored
    double b = 0.0;
};

// H2 = (px^2+py^2)/2 + n(y px - x py) + E x^2 + F y^2 + G xy.
struct H2Form {
    double E = 0.0;
    double F = 0.0;
    double G = 0.0;
    double n = 1.0;
};

// Numeric Taylor table of the exact Lagrangian about the refined equilibrium,
// in shifted coordinates. The Lagrangian decomposes exactly as
//   L = A(x,y) + Bx(x,y) vx + By(x,y) vy + (vx^2+vy^2)/2;
// a[i][j] is the coefficient of x^i y^j in A (i+j <= 3), bx/by likewise for
// the velocity multipliers (i+j <= 2). (x0, y0) is the expansion point.
struct TaylorTable {
    double a[4][4] = {};
    double bx[3][3] = {};
    double by[3][3] = {};
    double x0 = 0.0;
    double y0 = 0.0;
};

// Tabulated closed-form series (first order in epsilon, A2, n*W1).
QuadraticCoeffs quadratic_coeffs(const Params& p);
CubicCoeffs cubic_coeffs(const Params& p);

// Same series with the four small/derived quantities passed independently;
// used by the root-locus sensitivity analysis.
QuadraticCoeffs quadratic_coeffs_from(double eps, double A2, double nw, double gamma);

// Full drag bilinear functional T5(x, y, vx, vy) — linear in velocities,
// quadratic-or-lower in positions. Identically zero when W1 = 0.
double t5_value(const CubicCoeffs& c, double x, double y, double vx, double vy);

// Finite-difference Taylor oracle (composed 4th-order central stencils with
// one Richardson extrapolation step). order must be 2 or 3. Throws
// std::runtime_error when a stencil evaluation is not finite.
TaylorTable numeric_taylor_oracle(const Params& p, int order = 3);

// Mapping from oracle table to the series conventions:
//   E = n^2/2 - a20, F = n^2/2 - a02, G = -a11,
//   T1 = -6 a30, T2 = -2 a21, T3 = -2 a12, T4 = -6 a03.
QuadraticCoeffs oracle_quadratic(const TaylorTable& t, const Params& p);
CubicCoeffs oracle_cubic(const TaylorTable& t, const Params& p);

H2Form h2_form(const Params& p);

}  // namespace lp4
