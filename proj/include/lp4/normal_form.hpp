#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <vector>

#include "lp4/expansion.hpp"
#include "lp4/params.hpp"
#include "lp4/poisson_series.hpp"

namespace lp4 {

struct Frequencies {
    double omega1 = 0.0;  // long-period frequency, the larger one
    double omega2 = 0.0;  // short-period frequency
};

struct StabilityReport {
    double D = 0.0;        // discriminant of the characteristic quartic
    bool stable = false;   // D > 0
    double mu_crit = 0.0;  // tabulated critical mass series
    double margin = 0.0;   // mu_crit - mu
};

struct WhittakerTransform {
    double J13 = 0, J14 = 0, J21 = 0, J22 = 0, J23 = 0, J24 = 0;
    double l1 = 0, l2 = 0;  // l_j = sqrt(4 omega_j^2 + 9)
    double k1 = 0, k2 = 0;  // k1 = sqrt(2 omega1^2 - 1), k2 = sqrt(1 - 2 omega2^2)
};

struct CharacteristicRoots {
    std::array<std::complex<double>, 4> quartic;  // from the closed-form quartic
    std::array<std::complex<double>, 4> matrix;   // eigenvalues of the 4x4 system
    double max_mismatch = 0.0;                    // paired root disagreement
};

class UnstableError : public std::runtime_error {
  public:
    UnstableError(const std::string& what, const CharacteristicRoots& roots)
        : std::runtime_error(what), roots(roots) {}
    CharacteristicRoots roots;
};

// Roots of lambda^4 + 2(E+F+n^2) lambda^2 + 4EF - G^2 + n^4 - 2n^2(E+F) = 0,
// cross-checked against the eigenvalues of the linearized Hamiltonian system.
CharacteristicRoots characteristic_roots(const QuadraticCoeffs& q, double n);

// Tabulated critical-mass series and its numeric root-locus counterpart
// (bisection of D(mu) = 0 with eps, A2, n*W1 held fixed).
double mu_crit_tabulated(double eps, double A2, double nw);
double mu_crit_bisection(double eps, double A2, double nw);

StabilityReport stability(const Params& p);

// Frequencies from the quartic. Throws UnstableError when D <= 0 or a root
// pair is not purely imaginary.
Frequencies frequencies(const Params& p);

// Tabulated first-order series for omega1^2 + omega2^2 and omega1^2 omega2^2.
struct SumProduct {
    double sum = 0.0;
    double product = 0.0;
};
SumProduct tabulated_sum_product(const Params& p);

// Residuals of the two tabulated gamma^2 identities (per-omega_j form and the
// u = omega1*omega2 form).
struct GammaRelationResidual {
    double res_omega1 = 0.0;
    double res_omega2 = 0.0;
    double res_u = 0.0;
};
GammaRelationResidual gamma_relation_residual(const Params& p, const Frequencies& f);

// The six tabulated entries of the linear canonical transformation. Throws
// std::domain_error on resonance |2 omega_j^2 - 1| < 1e-9.
WhittakerTransform whittaker_matrix(const Params& p, const Frequencies& f);

// First-order coordinates as trigonometric series:
//   x = J13 sqrt(2 omega1 I1) cos phi1 + J14 sqrt(2 omega2 I2) cos phi2
//   y = J21 sqrt(2 I1/omega1) sin phi1 + J22 sqrt(2 I2/omega2) sin phi2
//       + J23 sqrt(2 omega1 I1) cos phi1 + J24 sqrt(2 omega2 I2) cos phi2
struct FirstOrderSeries {
    DAlembertSeries X1;
    DAlembertSeries Y1;
};
FirstOrderSeries first_order_series(const Frequencies& f, const WhittakerTransform& J);

// Samples the first-order orbit on a time grid with phi1 = omega1 t + phase1,
// phi2 = -omega2 t + phase2.
struct OrbitSamples {
    std::vector<double> x;
    std::vector<double> y;
};
OrbitSamples first_order_orbit(const std::vector<double>& t, const Frequencies& f,
                               const WhittakerTransform& J, double I1, double I2,
                               double phase1, double phase2);

// max over a grid of I in {0, 0.3, 1}^2 (excluding the origin) and an 8x8
// angle grid of |H2(x,y,px,py) - (omega1 I1 - omega2 I2)| / (I1 + I2), where
// the coordinates come from the tabulated transformation.
double normal_form_residual(const Params& p);

}  // namespace lp4
