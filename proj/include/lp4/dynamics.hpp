#pragma once

#include <utility>
#include <vector>

#include "lp4/params.hpp"

namespace lp4 {

struct State {
    double x = 0.0;
    double y = 0.0;
    double vx = 0.0;
    double vy = 0.0;
};

struct Trajectory {
    std::vector<double> t;       // strictly increasing, uniform step
    std::vector<State> states;   // same length as t
    Params params;
};

struct Accel {
    double ax = 0.0;
    double ay = 0.0;
};

// Full equations of motion in the rotating frame, including the
// velocity-dependent drag terms. Throws std::domain_error when r1 or r2
// drops below 1e-9.
Accel accel(const State& s, const Params& p);

// Conservative energy-like quantity
//   v^2/2 - n^2(x^2+y^2)/2 - (1-mu) q1 / r1 - mu / r2 - mu A2 / (2 r2^3);
// exactly conserved along trajectories when W1 = 0.
double jacobi_like(const State& s, const Params& p);

// Adaptive Dormand-Prince 5(4) with output resampled at dt_out.
// Throws std::runtime_error on step-size underflow (near collision).
Trajectory integrate(const State& s0, const Params& p, double t_end, double dt_out,
                     double tol = 1e-12);

struct SpectralPeak {
    double frequency = 0.0;  // radians per time unit
    double amplitude = 0.0;
};

// Top-k peaks of the Hann-windowed periodogram of x(t), refined by local
// quadratic interpolation. Throws std::invalid_argument when the trajectory
// has fewer than 16 samples or non-uniform spacing.
std::vector<SpectralPeak> dominant_frequencies(const Trajectory& traj, int k);

}  // namespace lp4
