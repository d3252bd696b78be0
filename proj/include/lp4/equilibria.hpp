#pragma once

#include "lp4/params.hpp"

namespace lp4 {

enum class Branch { L4, L5 };
enum class PointMethod { Series, EpsilonSeries, Refined };

struct EquilibriumPoint {
    double x = 0.0;
    double y = 0.0;
    Branch branch = Branch::L4;
    PointMethod method = PointMethod::Series;
};

// Origin shift used by the power-series expansion: a = x* + mu, b = y*.
struct ShiftConstants {
    double a = 0.5;
    double b = 0.0;
};

// First-order displaced triangular point in the (x0, y0, delta) form, with
// the W1 and A2 correction fractions. Throws std::domain_error for the
// singular configuration mu < 1e-6 with W1 > 0 (the correction divides by
// mu*(1-mu)), or when the y* radicand goes negative.
EquilibriumPoint series_point(const Params& p, Branch branch);

// Same point in the polynomial (gamma, epsilon, A2, nW1) form. L4 only.
EquilibriumPoint epsilon_form_point(const Params& p);

// The tabulated first-order (a, b) shift constants.
ShiftConstants shift_constants(const Params& p);

// Rest-state force residual (U_x, U_y) at (x, y); zero at an equilibrium.
struct Residual {
    double Ux = 0.0;
    double Uy = 0.0;
};
Residual equilibrium_residual(double x, double y, const Params& p);

// Newton refinement of a starting guess down to max(|Ux|,|Uy|) <= tol.
// Throws std::runtime_error on non-convergence or a singular Jacobian.
EquilibriumPoint refine_point(const EquilibriumPoint& start, const Params& p,
                              double tol = 1e-12, int max_iter = 50);

}  // namespace lp4
