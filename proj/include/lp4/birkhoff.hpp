#pragma once

#include <array>

#include "lp4/expansion.hpp"
#include "lp4/normal_form.hpp"
#include "lp4/params.hpp"
#include "lp4/poisson_series.hpp"

namespace lp4 {

// The 24 tabulated scalars feeding the closed-form second-order coefficients.
// Fk / Fkp / Fkpp are the plain, primed and double-primed F entries; Gk
// likewise. All classical limits of the index-1 entries vanish (pure nW1*eps).
struct FGTables {
    double F1 = 0, F2 = 0, F3 = 0, F4 = 0;
    double F1p = 0, F2p = 0, F3p = 0, F4p = 0;
    double F1pp = 0, F2pp = 0, F3pp = 0, F4pp = 0;
    double G1 = 0, G2 = 0, G3 = 0, G4 = 0;
    double G1p = 0, G2p = 0, G3p = 0, G4p = 0;
    double G1pp = 0, G2pp = 0, G3pp = 0, G4pp = 0;
};

FGTables fg_tables(const Params& p);

// Harmonic coefficients of the closed-form second-order components. s uses
// the identical formulas with the G tables substituted for the F tables.
struct RSCoefficients {
    std::array<double, 10> r = {};
    std::array<double, 10> s = {};
};

// Throws SmallDivisorError when a denominator (4w1^2-w2^2 etc.) is within
// 1e-8 of zero.
RSCoefficients rs_coefficients(const Frequencies& f, const WhittakerTransform& J,
                               const FGTables& t);

struct B2Pair {
    DAlembertSeries B2_10;  // second-order x component
    DAlembertSeries B2_01;  // second-order y component
};

B2Pair b2_closed_form(const RSCoefficients& rs);

// Relative tolerance below which residual critical harmonics are treated as
// rounding noise and stripped before Delta inversion.
inline constexpr double kCriticalTol = 1e-8;

struct GenericSolve {
    B2Pair b2;
    DAlembertSeries Phi2;
    DAlembertSeries Psi2;
    double critical_rel = 0.0;  // |critical part| / max|Phi2,Psi2|
};

// Builds the first-order series, forms X2 = dL3/dx and Y2 = dL3/dy on it
// (including the drag bilinear T5 with velocities D(B1)), assembles Phi2 and
// Psi2 and inverts Delta. Throws CriticalTermError when the critical part
// exceeds kCriticalTol relative, SmallDivisorError from the inversion.
GenericSolve generic_second_order_solve(const Params& p, const Frequencies& f,
                                        const WhittakerTransform& J);

struct H3Coefficients {
    // Angle-free coefficients of I1^{3/2}, I1 I2^{1/2}, I1^{1/2} I2, I2^{3/2}.
    // The series parity constraints force these to vanish identically.
    double A30 = 0, A21 = 0, A12 = 0, A03 = 0;
    double residual_full = 0.0;        // max |coeff| of the full degree-3 part
    double residual_without_b2 = 0.0;  // same with the second-order terms ablated
};

H3Coefficients h3_coefficients(const Params& p, const Frequencies& f,
                               const FirstOrderSeries& b1, const B2Pair& b2);

// Per-coefficient comparison of the closed-form tables against the generic
// solve, for the discrepancy report.
struct RouteComparison {
    RSCoefficients closed;
    RSCoefficients generic;
    std::array<double, 10> rel_diff_r = {};
    std::array<double, 10> rel_diff_s = {};
    double max_rel_diff = 0.0;
};

RouteComparison compare_routes(const Params& p);

}  // namespace lp4
