#include "lp4/equilibria.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace lp4 {

namespace {
const double kSqrt3 = std::sqrt(3.0);
}

EquilibriumPoint series_point(const Params& p, Branch branch) {
    const Derived d = derive(p);
    if (p.mu < 1e-6 && d.W1 > 0.0)
        throw std::domain_error(
            "series point is singular: the drag correction divides by mu*(1-mu)");

    const double d2h = 0.5 * d.delta * d.delta;  // delta^2 / 2
    const double x0 = d2h - p.mu;
    const double y0mag = d.delta * std::sqrt(1.0 - 0.5 * d2h);
    const double y0 = (branch == Branch::L4) ? y0mag : -y0mag;

    // x* = x0 { 1 - nW1[...] / (3 mu (1-mu) y0 x0) - (delta^2/2)(A2/x0) },
    // written with the x0 factors cancelled so x0 = 0 stays regular.
    const double xw = (1.0 - p.mu) * (1.0 + 2.5 * p.A2) + p.mu * (1.0 - 0.5 * p.A2) * d2h;
    const double x = x0 - d.nW1 * xw / (3.0 * p.mu * (1.0 - p.mu) * y0) - d2h * p.A2;

    const double yw = 2.0 * p.mu - 1.0 - p.mu * (1.0 - 1.5 * p.A2) * d2h +
                      3.5 * (1.0 - p.mu) * p.A2;
    const double radicand = 1.0 -
                            d.nW1 * d.delta * d.delta * yw /
                                (3.0 * p.mu * (1.0 - p.mu) * y0 * y0 * y0) -
                            d.delta * d.delta * (1.0 - d2h) * p.A2 / (y0 * y0);
    if (!(radicand > 0.0)) {
        std::ostringstream msg;
        msg << "singular configuration: y* radicand = " << radicand;
        throw std::domain_error(msg.str());
    }
    const double y = y0 * std::sqrt(radicand);
    return {x, y, branch, PointMethod::Series};
}

EquilibriumPoint epsilon_form_point(const Params& p) {
    const Derived d = derive(p);
    const double g = d.gamma, e = d.epsilon, A2 = p.A2, nw = d.nW1;
    const double x = 0.5 * g - e / 3.0 - 0.5 * A2 + A2 * e / 3.0 -
                     (9.0 + g) / (6.0 * kSqrt3) * nw - 4.0 * g * e / (27.0 * kSqrt3) * nw;
    const double y = 0.5 * kSqrt3 *
                     (1.0 - 2.0 * e / 9.0 - A2 / 3.0 - 2.0 * A2 * e / 9.0 +
                      (1.0 + g) / (9.0 * kSqrt3) * nw - 4.0 * g * e / (27.0 * kSqrt3) * nw);
    return {x, y, Branch::L4, PointMethod::EpsilonSeries};
}

ShiftConstants shift_constants(const Params& p) {
    const Derived d = derive(p);
    const double g = d.gamma, e = d.epsilon, A2 = p.A2, nw = d.nW1;
    ShiftConstants s;
    s.a = 0.5 * (1.0 - 2.0 * e / 3.0 - A2 + 2.0 * A2 * e / 3.0 -
                 (9.0 + g) / (3.0 * kSqrt3) * nw - 8.0 * g * e / (27.0 * kSqrt3) * nw);
    s.b = 0.5 * kSqrt3 *
          (1.0 - 2.0 * e / 9.0 - A2 / 3.0 - 2.0 * A2 * e / 9.0 +
           (1.0 + g) / (9.0 * kSqrt3) * nw - 4.0 * g * e / (27.0 * kSqrt3) * nw);
    return s;
}

Residual equilibrium_residual(double x, double y, const Params& p) {
    const Derived d = derive(p);
    const double xm = x + p.mu;
    const double xm1 = xm - 1.0;
    const double r1s = xm * xm + y * y;
    const double r2s = xm1 * xm1 + y * y;
    const double r1 = std::sqrt(r1s), r2 = std::sqrt(r2s);
    const double r13 = r1s * r1, r23 = r2s * r2;
    const double r25 = r23 * r2s;
    const double n2 = d.n * d.n;

    const double U1x = n2 * x - (1.0 - p.mu) * p.q1 * xm / r13 - p.mu * xm1 / r23 -
                       1.5 * p.mu * p.A2 * xm1 / r25;
    const double U1y = n2 * y - (1.0 - p.mu) * p.q1 * y / r13 - p.mu * y / r23 -
                       1.5 * p.mu * p.A2 * y / r25;

    // rest-state drag: N1 = -n y, N2 = n (x+mu)
    Residual r;
    r.Ux = U1x + d.W1 * d.n * y / r1s;
    r.Uy = U1y - d.W1 * d.n * xm / r1s;
    return r;
}

EquilibriumPoint refine_point(const EquilibriumPoint& start, const Params& p, double tol,
                              int max_iter) {
    double x = start.x, y = start.y;
    for (int it = 0; it < max_iter; ++it) {
        const Residual r = equilibrium_residual(x, y, p);
        if (std::max(std::abs(r.Ux), std::abs(r.Uy)) <= tol)
            return {x, y, start.branch, PointMethod::Refined};

        const double hx = 1e-7 * std::max(1.0, std::abs(x));
        const double hy = 1e-7 * std::max(1.0, std::abs(y));
        const Residual rxp = equilibrium_residual(x + hx, y, p);
        const Residual rxm = equilibrium_residual(x - hx, y, p);
        const Residual ryp = equilibrium_residual(x, y + hy, p);
        const Residual rym = equilibrium_residual(x, y - hy, p);
        const double j11 = (rxp.Ux - rxm.Ux) / (2.0 * hx);
        const double j12 = (ryp.Ux - rym.Ux) / (2.0 * hy);
        const double j21 = (rxp.Uy - rxm.Uy) / (2.0 * hx);
        const double j22 = (ryp.Uy - rym.Uy) / (2.0 * hy);
        const double det = j11 * j22 - j12 * j21;
        if (std::abs(det) < 1e-14)
            throw std::runtime_error("refine_point: singular Jacobian");
        x -= (j22 * r.Ux - j12 * r.Uy) / det;
        y -= (-j21 * r.Ux + j11 * r.Uy) / det;
    }
    const Residual r = equilibrium_residual(x, y, p);
    std::ostringstream msg;
    msg << "refine_point failed to converge; last residual (" << r.Ux << ", " << r.Uy << ")";
    throw std::runtime_error(msg.str());
}

}  // namespace lp4
