#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "lp4/dynamics.hpp"
#include "lp4/equilibria.hpp"
#include "lp4/params.hpp"

using namespace lp4;

TEST_CASE("acceleration vanishes at a refined equilibrium") {
    Params p{0.01, 0.98, 0.01, 2.0};
    EquilibriumPoint eq = refine_point(series_point(p, Branch::L4), p);
    Accel a = accel(State{eq.x, eq.y, 0.0, 0.0}, p);
    CHECK(std::abs(a.ax) <= 1e-11);
    CHECK(std::abs(a.ay) <= 1e-11);
}

TEST_CASE("collision guard") {
    Params p;
    CHECK_THROWS_AS(accel(State{-p.mu, 0.0, 0.0, 0.0}, p), std::domain_error);
}

TEST_CASE("energy-like quantity is conserved without drag") {
    Params p;  // classical: q1 = 1 so W1 = 0
    p.mu = 0.01;
    State s0{0.49 + 1e-3, std::sqrt(3.0) / 2.0, 0.0, 1e-3};
    Trajectory traj = integrate(s0, p, 50.0, 0.05, 1e-12);
    const double e0 = jacobi_like(traj.states.front(), p);
    double worst = 0.0;
    for (const auto& s : traj.states) worst = std::max(worst, std::abs(jacobi_like(s, p) - e0));
    CHECK(worst <= 1e-10);
}

TEST_CASE("output grid is uniform and spans the requested interval") {
    Params p;
    p.mu = 0.01;
    State s0{0.49, std::sqrt(3.0) / 2.0, 0.0, 0.0};
    Trajectory traj = integrate(s0, p, 10.0, 0.25, 1e-10);
    REQUIRE(traj.t.size() == 41);
    CHECK(traj.t.front() == 0.0);
    CHECK(traj.t.back() == doctest::Approx(10.0).epsilon(1e-14));
    for (std::size_t i = 1; i < traj.t.size(); ++i)
        CHECK(traj.t[i] - traj.t[i - 1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(traj.states.size() == traj.t.size());
}

TEST_CASE("spectral peaks of a synthetic two-tone signal") {
    const double w1 = 0.96, w2 = 0.27, dt = 0.1;
    Trajectory traj;
    traj.params = Params{};
    for (int i = 0; i <= 5000; ++i) {
        const double t = i * dt;
        traj.t.push_back(t);
        traj.states.push_back(
            State{1.0 + 0.02 * std::cos(w1 * t + 0.3) + 0.05 * std::cos(w2 * t - 1.0),
                  0.0, 0.0, 0.0});
    }
    auto peaks = dominant_frequencies(traj, 2);
    REQUIRE(peaks.size() == 2);
    double b1 = 1e9, b2 = 1e9, a1 = 0, a2 = 0;
    for (const auto& pk : peaks) {
        if (std::abs(pk.frequency - w1) < b1) { b1 = std::abs(pk.frequency - w1); a1 = pk.amplitude; }
        if (std::abs(pk.frequency - w2) < b2) { b2 = std::abs(pk.frequency - w2); a2 = pk.amplitude; }
    }
    CHECK(b1 <= 1e-3);
    CHECK(b2 <= 1e-3);
    CHECK(a1 == doctest::Approx(0.02).epsilon(0.05));
    CHECK(a2 == doctest::Approx(0.05).epsilon(0.05));
}

TEST_CASE("spectral extraction input validation") {
    Trajectory tiny;
    tiny.params = Params{};
    for (int i = 0; i < 8; ++i) {
        tiny.t.push_back(0.1 * i);
        tiny.states.push_back(State{});
    }
    CHECK_THROWS_AS(dominant_frequencies(tiny, 1), std::invalid_argument);
}
