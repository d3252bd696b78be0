#pragma once

#include <string>

namespace lp4 {

// Physical parameters of the planar restricted three-body problem with a
// radiating larger primary, an oblate smaller primary and Poynting-Robertson
// drag acting on the massless particle.
struct Params {
    double mu = 0.01;   // mass ratio of the smaller primary, 0 < mu <= 1/2
    double q1 = 1.0;    // mass reduction factor of the radiating primary
    double A2 = 0.0;    // oblateness coefficient of the smaller primary
    double cd = 1.0;    // drag constant (dimensionless speed of light)

    // Throws std::invalid_argument with a descriptive message when a field
    // is out of range.
    void validate() const;
};

// Quantities derived from Params that appear throughout the series.
struct Derived {
    double epsilon;  // 1 - q1
    double n;        // mean motion, n^2 = 1 + 3*A2/2
    double gamma;    // 1 - 2*mu
    double delta;    // q1^(1/3)
    double W1;       // drag strength (1-mu)(1-q1)/cd
    double nW1;      // n * W1, the combination the series are written in
};

Derived derive(const Params& p);

// Scales epsilon, A2 and W1 by h in [0,1], keeping mu and cd fixed.
// h=0 gives the classical problem, h=1 returns p unchanged.
Params perturbation_scale(const Params& p, double h);

// Max of the derived small quantities (epsilon, A2, n*W1); zero means
// classical. Series formulas are first order in these; callers gate series
// validity on this instead of a hard cutoff.
double perturbation_magnitude(const Params& p);

// Mass reduction factor of a spherical grain in CGS-ish units:
// q1 = 1 - 5.6e-5 * chi / (radius_cm * density). Convenience only.
double mass_reduction_factor(double chi, double radius_cm, double density);

std::string to_json(const Params& p);
Params params_from_json(const std::string& text);

}  // namespace lp4
