#include "lp4/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <stdexcept>

namespace lp4 {

namespace {

struct Deriv {
    double dx, dy, dvx, dvy;
};

Deriv rhs(const State& s, const Params& p, const Derived& d) {
    const double xm = s.x + p.mu;
    const double xm1 = xm - 1.0;
    const double r1s = xm * xm + s.y * s.y;
    const double r2s = xm1 * xm1 + s.y * s.y;
    const double r1 = std::sqrt(r1s), r2 = std::sqrt(r2s);
    if (r1 < 1e-9 || r2 < 1e-9) {
        std::ostringstream msg;
        msg << "state too close to a primary: r1=" << r1 << " r2=" << r2;
        throw std::domain_error(msg.str());
    }
    const double r13 = r1s * r1, r23 = r2s * r2, r25 = r23 * r2s;
    const double n2 = d.n * d.n;

    const double U1x = n2 * s.x - (1.0 - p.mu) * p.q1 * xm / r13 - p.mu * xm1 / r23 -
                       1.5 * p.mu * p.A2 * xm1 / r25;
    const double U1y = n2 * s.y - (1.0 - p.mu) * p.q1 * s.y / r13 - p.mu * s.y / r23 -
                       1.5 * p.mu * p.A2 * s.y / r25;

    const double rdot = xm * s.vx + s.y * s.vy;  // r1 * dr1/dt
    const double N1 = xm * rdot / r1s + s.vx - d.n * s.y;
    const double N2 = s.y * rdot / r1s + s.vy + d.n * xm;

    Deriv out;
    out.dx = s.vx;
    out.dy = s.vy;
    out.dvx = 2.0 * d.n * s.vy + U1x - d.W1 * N1 / r1s;
    out.dvy = -2.0 * d.n * s.vx + U1y - d.W1 * N2 / r1s;
    return out;
}

State axpy(const State& s, double h, const Deriv& k) {
    return {s.x + h * k.dx, s.y + h * k.dy, s.vx + h * k.dvx, s.vy + h * k.dvy};
}

}  // namespace

Accel accel(const State& s, const Params& p) {
    const Derived d = derive(p);
    const Deriv k = rhs(s, p, d);
    return {k.dvx, k.dvy};
}

double jacobi_like(const State& s, const Params& p) {
    const Derived d = derive(p);
    const double xm = s.x + p.mu;
    const double xm1 = xm - 1.0;
    const double r1 = std::sqrt(xm * xm + s.y * s.y);
    const double r2 = std::sqrt(xm1 * xm1 + s.y * s.y);
    if (r1 < 1e-9 || r2 < 1e-9)
        throw std::domain_error("state too close to a primary");
    const double v2 = s.vx * s.vx + s.vy * s.vy;
    return 0.5 * v2 - 0.5 * d.n * d.n * (s.x * s.x + s.y * s.y) -
           (1.0 - p.mu) * p.q1 / r1 - p.mu / r2 - 0.5 * p.mu * p.A2 / (r2 * r2 * r2);
}

Trajectory integrate(const State& s0, const Params& p, double t_end, double dt_out,
                     double tol) {
    if (!(t_end > 0.0) || !(dt_out > 0.0) || !(tol > 0.0))
        throw std::invalid_argument("t_end, dt_out and tol must be positive");
    const Derived d = derive(p);

    // Dormand-Prince 5(4) tableau.
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                        e4 = 125.0 / 192 - 393.0 / 640,
                        e5 = -2187.0 / 6784 + 92097.0 / 339200, e6 = 11.0 / 84 - 187.0 / 2100,
                        e7 = -1.0 / 40;

    Trajectory traj;
    traj.params = p;
    traj.t.push_back(0.0);
    traj.states.push_back(s0);

    State s = s0;
    double t = 0.0;
    double h = std::min(dt_out, 1e-2);
    const std::size_t n_out = static_cast<std::size_t>(std::llround(t_end / dt_out));
    std::size_t next_out = 1;

    Deriv k1 = rhs(s, p, d);  // FSAL
    while (next_out <= n_out) {
        const double t_target = std::min(static_cast<double>(next_out) * dt_out, t_end);
        bool hit_output = false;
        if (t + h >= t_target - 1e-14 * std::max(1.0, t_target)) {
            h = t_target - t;
            hit_output = true;
        }
        if (h < 1e-14 * std::max(1.0, t)) {
            if (hit_output) {  // degenerate final sliver: accept current state
                traj.t.push_back(t_target);
                traj.states.push_back(s);
                ++next_out;
                h = dt_out;
                continue;
            }
            throw std::runtime_error("integrate: step size underflow");
        }

        const Deriv k2 = rhs(axpy(s, h * a21, k1), p, d);
        State tmp = axpy(axpy(s, h * a31, k1), h * a32, k2);
        const Deriv k3 = rhs(tmp, p, d);
        tmp = axpy(axpy(axpy(s, h * a41, k1), h * a42, k2), h * a43, k3);
        const Deriv k4 = rhs(tmp, p, d);
        tmp = axpy(axpy(axpy(axpy(s, h * a51, k1), h * a52, k2), h * a53, k3), h * a54, k4);
        const Deriv k5 = rhs(tmp, p, d);
        tmp = axpy(axpy(axpy(axpy(axpy(s, h * a61, k1), h * a62, k2), h * a63, k3), h * a64, k4),
                   h * a65, k5);
        const Deriv k6 = rhs(tmp, p, d);
        State s5 = s;
        s5.x += h * (b1 * k1.dx + b3 * k3.dx + b4 * k4.dx + b5 * k5.dx + b6 * k6.dx);
        s5.y += h * (b1 * k1.dy + b3 * k3.dy + b4 * k4.dy + b5 * k5.dy + b6 * k6.dy);
        s5.vx += h * (b1 * k1.dvx + b3 * k3.dvx + b4 * k4.dvx + b5 * k5.dvx + b6 * k6.dvx);
        s5.vy += h * (b1 * k1.dvy + b3 * k3.dvy + b4 * k4.dvy + b5 * k5.dvy + b6 * k6.dvy);
        const Deriv k7 = rhs(s5, p, d);

        const double err_x = h * (e1 * k1.dx + e3 * k3.dx + e4 * k4.dx + e5 * k5.dx +
                                  e6 * k6.dx + e7 * k7.dx);
        const double err_y = h * (e1 * k1.dy + e3 * k3.dy + e4 * k4.dy + e5 * k5.dy +
                                  e6 * k6.dy + e7 * k7.dy);
        const double err_vx = h * (e1 * k1.dvx + e3 * k3.dvx + e4 * k4.dvx + e5 * k5.dvx +
                                   e6 * k6.dvx + e7 * k7.dvx);
        const double err_vy = h * (e1 * k1.dvy + e3 * k3.dvy + e4 * k4.dvy + e5 * k5.dvy +
                                   e6 * k6.dvy + e7 * k7.dvy);
        auto scale = [&](double e, double ynew, double yold) {
            return std::abs(e) / (tol + tol * std::max(std::abs(ynew), std::abs(yold)));
        };
        const double err = std::max({scale(err_x, s5.x, s.x), scale(err_y, s5.y, s.y),
                                     scale(err_vx, s5.vx, s.vx), scale(err_vy, s5.vy, s.vy)});

        if (err <= 1.0) {
            t += h;
            s = s5;
            k1 = k7;
            if (hit_output) {
                traj.t.push_back(t_target);
                traj.states.push_back(s);
                ++next_out;
            }
        }
        const double fac = (err > 0.0) ? 0.9 * std::pow(err, -0.2) : 5.0;
        h *= std::clamp(fac, 0.2, 5.0);
        if (h < 1e-15) throw std::runtime_error("integrate: step size underflow");
    }
    return traj;
}

std::vector<SpectralPeak> dominant_frequencies(const Trajectory& traj, int k) {
    const std::size_t N = traj.t.size();
    if (N < 16) throw std::invalid_argument("dominant_frequencies: need at least 16 samples");
    const double dt = traj.t[1] - traj.t[0];
    for (std::size_t i = 1; i < N; ++i) {
        if (std::abs((traj.t[i] - traj.t[i - 1]) - dt) > 1e-9 * std::max(1.0, dt))
            throw std::invalid_argument("dominant_frequencies: non-uniform sampling");
    }

    // Hann-windowed, mean-removed signal.
    std::vector<double> w(N);
    double mean = 0.0;
    for (std::size_t i = 0; i < N; ++i) mean += traj.states[i].x;
    mean /= static_cast<double>(N);
    double wsum = 0.0;
    constexpr double kPi = 3.14159265358979323846;
    for (std::size_t i = 0; i < N; ++i) {
        const double hann =
            0.5 * (1.0 - std::cos(2.0 * kPi * static_cast<double>(i) / (N - 1)));
        w[i] = hann * (traj.states[i].x - mean);
        wsum += hann;
    }

    // 4x-oversampled magnitude spectrum on [0, pi/dt).
    const std::size_t M = 4 * N;
    const double dw = kPi / dt / static_cast<double>(M);
    std::vector<double> mag(M);
    for (std::size_t j = 0; j < M; ++j) {
        const double omega = static_cast<double>(j) * dw;
        std::complex<double> acc = 0.0;
        const std::complex<double> rot(std::cos(-omega * dt), std::sin(-omega * dt));
        std::complex<double> ph = 1.0;
        for (std::size_t i = 0; i < N; ++i) {
            acc += w[i] * ph;
            ph *= rot;
        }
        mag[j] = std::abs(acc);
    }

    // Exclude near-DC (below ~3 fundamental bins) and pick separated maxima.
    const double T = dt * static_cast<double>(N - 1);
    const std::size_t j_min = std::max<std::size_t>(
        2, static_cast<std::size_t>(std::ceil(3.0 * 2.0 * kPi / T / dw)));
    const std::size_t sep = std::max<std::size_t>(
        4, static_cast<std::size_t>(std::ceil(2.0 * 2.0 * kPi / T / dw)));

    std::vector<std::size_t> peaks;
    for (std::size_t j = j_min; j + 1 < M; ++j) {
        if (mag[j] > mag[j - 1] && mag[j] >= mag[j + 1]) peaks.push_back(j);
    }
    std::sort(peaks.begin(), peaks.end(),
              [&](std::size_t a, std::size_t b) { return mag[a] > mag[b]; });

    std::vector<SpectralPeak> out;
    std::vector<std::size_t> chosen;
    for (std::size_t j : peaks) {
        if (static_cast<int>(out.size()) >= k) break;
        bool close = false;
        for (std::size_t c : chosen)
            if ((j > c ? j - c : c - j) < sep) close = true;
        if (close) continue;
        chosen.push_back(j);
        // quadratic sub-bin refinement
        const double ym = mag[j - 1], y0 = mag[j], yp = mag[j + 1];
        const double denom = ym - 2.0 * y0 + yp;
        const double delta = (std::abs(denom) > 0.0) ? 0.5 * (ym - yp) / denom : 0.0;
        SpectralPeak pk;
        pk.frequency = (static_cast<double>(j) + std::clamp(delta, -0.5, 0.5)) * dw;
        pk.amplitude = 2.0 * y0 / wsum;
        out.push_back(pk);
    }
    return out;
}

}  // namespace lp4
