#include "lp4/acceptance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <sstream>
#include <stdexcept>

#include "lp4/birkhoff.hpp"
#include "lp4/dynamics.hpp"
#include "lp4/equilibria.hpp"
#include "lp4/expansion.hpp"
#include "lp4/normal_form.hpp"
#include "lp4/params.hpp"
#include "lp4/poisson_series.hpp"

namespace lp4 {

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Base perturbed configuration used by the scaling studies.
Params perturbed_base() {
    Params p;
    p.mu = 0.01;
    p.q1 = 0.98;
    p.A2 = 0.01;
    p.cd = 2.0;
    return p;
}

Params classical(double mu = 0.01) {
    Params p;
    p.mu = mu;
    p.q1 = 1.0;
    p.A2 = 0.0;
    p.cd = 1.0;
    return p;
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& res) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const int n = static_cast<int>(h.size());
    for (int i = 0; i < n; ++i) {
        const double x = std::log(h[i]);
        const double y = std::log(std::max(res[i], 1e-300));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

const std::vector<double> kScaleSteps = {1e-2, 3e-3, 1e-3, 3e-4};

CriterionResult crit1() {
    CriterionResult c{1, "critical-mass constant and root-locus cross-check", false, ""};
    std::ostringstream d;
    const StabilityReport rep = stability(classical());
    const double expected = 0.0385208965045513718;
    const bool const_ok = rep.mu_crit == expected;
    const double bis = mu_crit_bisection(0.0, 0.0, 0.0);
    const double dmu = std::abs(bis - expected);
    const bool bis_ok = dmu <= 1e-12;
    d << "  tabulated mu_crit(classical) = " << num(rep.mu_crit)
      << (const_ok ? " (matches)" : " (MISMATCH)") << "\n";
    d << "  bisection root of D(mu)      = " << num(bis) << ", |delta| = " << num(dmu)
      << (bis_ok ? " <= 1e-12" : " > 1e-12") << "\n";
    c.passed = const_ok && bis_ok;
    c.details = d.str();
    return c;
}

CriterionResult crit2() {
    CriterionResult c{2, "stability-inequality sensitivity coefficients", false, ""};
    std::ostringstream d;
    const double h = 1e-4;
    const double base = mu_crit_bisection(0.0, 0.0, 0.0);
    const double dA2 = (mu_crit_bisection(0.0, h, 0.0) - base) / h;
    const double dnw = (mu_crit_bisection(0.0, 0.0, h) - base) / h;
    const double ref_A2 = 2.1038871010983331;
    const double ref_nw = 0.704139054372097028;
    const double rel_A2 = std::abs(dA2 - ref_A2) / std::abs(ref_A2);
    const double rel_nw = std::abs(dnw - ref_nw) / std::abs(ref_nw);
    const bool ok_A2 = rel_A2 <= 0.05;
    const bool ok_nw = rel_nw <= 0.05;
    d << "  d(mu_crit)/d(A2)   root-locus = " << num(dA2) << ", tabulated = " << num(ref_A2)
      << ", rel diff = " << num(rel_A2) << (ok_A2 ? " (ok)" : " (OUTSIDE 5%)") << "\n";
    d << "  d(mu_crit)/d(nW1)  root-locus = " << num(dnw) << ", tabulated = " << num(ref_nw)
      << ", rel diff = " << num(rel_nw) << (ok_nw ? " (ok)" : " (OUTSIDE 5%)") << "\n";
    if (!(ok_A2 && ok_nw))
        d << "  note: the numeric root locus of the quadratic-form discriminant does not\n"
             "  reproduce the tabulated first-order sensitivities; the discrepancy is\n"
             "  reported rather than hidden.\n";
    c.passed = ok_A2 && ok_nw;
    c.details = d.str();
    return c;
}

CriterionResult crit3() {
    CriterionResult c{3, "frequency values and ordering invariant", false, ""};
    std::ostringstream d;
    const double mu = 0.01;
    const Frequencies f = frequencies(classical(mu));
    const double s = std::sqrt(1.0 - 27.0 * mu * (1.0 - mu));
    const double w1_ref = std::sqrt(0.5 * (1.0 + s));
    const double w2_ref = std::sqrt(0.5 * (1.0 - s));
    const double d1 = std::abs(f.omega1 - w1_ref), d2 = std::abs(f.omega2 - w2_ref);
    const bool val_ok = d1 <= 1e-12 && d2 <= 1e-12;
    d << "  omega1 = " << num(f.omega1) << " vs analytic " << num(w1_ref)
      << ", |delta| = " << num(d1) << "\n";
    d << "  omega2 = " << num(f.omega2) << " vs analytic " << num(w2_ref)
      << ", |delta| = " << num(d2) << "\n";

    bool order_ok = true;
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (int i = 0; i < 100; ++i) {
        const double m = 0.0003 + i * (0.0380 - 0.0003) / 99.0;
        const Frequencies fg = frequencies(classical(m));
        if (!(0.0 < fg.omega2 && fg.omega2 < inv_sqrt2 && inv_sqrt2 < fg.omega1 &&
              fg.omega1 < 1.0)) {
            order_ok = false;
            d << "  ordering violated at mu = " << num(m) << "\n";
        }
    }
    d << "  ordering 0 < omega2 < 1/sqrt(2) < omega1 < 1 on 100-point grid: "
      << (order_ok ? "holds" : "VIOLATED") << "\n";
    c.passed = val_ok && order_ok;
    c.details = d.str();
    return c;
}

CriterionResult crit4() {
    CriterionResult c{4, "tabulated-series vs oracle scaling slopes", false, ""};
    std::ostringstream d;
    const Params base = perturbed_base();
    const std::vector<std::string> names = {
        "omega_sum", "omega_product", "gamma_rel_omega1", "gamma_rel_omega2",
        "gamma_rel_u", "E", "F", "G", "T1", "T2", "T3", "T4"};
    std::vector<std::vector<double>> res(names.size());
    for (double h : kScaleSteps) {
        const Params p = perturbation_scale(base, h);
        const Frequencies f = frequencies(p);
        const SumProduct sp = tabulated_sum_product(p);
        const GammaRelationResidual gr = gamma_relation_residual(p, f);
        const double w1s = f.omega1 * f.omega1, w2s = f.omega2 * f.omega2;
        res[0].push_back(std::abs(w1s + w2s - sp.sum));
        res[1].push_back(std::abs(w1s * w2s - sp.product));
        res[2].push_back(gr.res_omega1);
        res[3].push_back(gr.res_omega2);
        res[4].push_back(gr.res_u);
        const QuadraticCoeffs qp = quadratic_coeffs(p);
        const CubicCoeffs cp = cubic_coeffs(p);
        const TaylorTable t = numeric_taylor_oracle(p, 3);
        const QuadraticCoeffs qo = oracle_quadratic(t, p);
        const CubicCoeffs co = oracle_cubic(t, p);
        res[5].push_back(std::abs(qp.E - qo.E));
        res[6].push_back(std::abs(qp.F - qo.F));
        res[7].push_back(std::abs(qp.G - qo.G));
        res[8].push_back(std::abs(cp.T1 - co.T1));
        res[9].push_back(std::abs(cp.T2 - co.T2));
        res[10].push_back(std::abs(cp.T3 - co.T3));
        res[11].push_back(std::abs(cp.T4 - co.T4));
    }
    bool all_ok = true;
    for (std::size_t i = 0; i < names.size(); ++i) {
        const double slope = loglog_slope(kScaleSteps, res[i]);
        const bool ok = slope >= 1.9;
        all_ok = all_ok && ok;
        d << "  " << names[i] << ": residuals";
        for (double r : res[i]) d << " " << num(r);
        d << ", slope = " << num(slope) << (ok ? " (ok)" : " (BELOW 1.9)") << "\n";
    }
    if (!all_ok)
        d << "  note: slope 1 indicates a first-order error in the tabulated series for\n"
             "  that quantity relative to the numeric oracle.\n";
    c.passed = all_ok;
    c.details = d.str();
    return c;
}

CriterionResult crit5() {
    CriterionResult c{5, "normal-form exactness and scaling", false, ""};
    std::ostringstream d;
    const double r0 = normal_form_residual(classical());
    const bool classical_ok = r0 <= 1e-10;
    d << "  classical residual = " << num(r0) << (classical_ok ? " <= 1e-10" : " > 1e-10")
      << "\n";
    std::vector<double> res;
    for (double h : kScaleSteps)
        res.push_back(normal_form_residual(perturbation_scale(perturbed_base(), h)));
    const double slope = loglog_slope(kScaleSteps, res);
    const bool slope_ok = slope >= 1.9;
    d << "  scaled residuals";
    for (double r : res) d << " " << num(r);
    d << ", slope = " << num(slope) << (slope_ok ? " (ok)" : " (BELOW 1.9)") << "\n";
    c.passed = classical_ok && slope_ok;
    c.details = d.str();
    return c;
}

CriterionResult crit6() {
    CriterionResult c{6, "end-to-end libration frequency oracle", false, ""};
    std::ostringstream d;
    const Params p = classical();
    EquilibriumPoint eq = refine_point(series_point(p, Branch::L4), p);
    State s0{eq.x + 1e-4, eq.y, 0.0, 0.0};
    const Trajectory traj = integrate(s0, p, 500.0, 0.1, 1e-12);
    const auto peaks = dominant_frequencies(traj, 2);
    const Frequencies f = frequencies(p);
    double best1 = 1e9, best2 = 1e9;
    for (const auto& pk : peaks) {
        best1 = std::min(best1, std::abs(pk.frequency - f.omega1));
        best2 = std::min(best2, std::abs(pk.frequency - f.omega2));
    }
    const bool ok = best1 <= 1e-3 && best2 <= 1e-3;
    d << "  predicted omega1 = " << num(f.omega1) << ", omega2 = " << num(f.omega2) << "\n";
    for (const auto& pk : peaks)
        d << "  spectral peak at " << num(pk.frequency) << " amplitude "
          << num(pk.amplitude) << "\n";
    d << "  |measured - predicted|: " << num(best1) << ", " << num(best2)
      << (ok ? " (both <= 1e-3)" : " (EXCEEDS 1e-3)") << "\n";
    c.passed = ok;
    c.details = d.str();
    return c;
}

DAlembertSeries random_series(std::mt19937& rng, int max_terms = 5) {
    std::uniform_int_distribution<int> deg_d(0, 3), cnt_d(2, max_terms), kind_d(0, 1);
    std::uniform_real_distribution<double> coeff_d(-1.0, 1.0);
    DAlembertSeries s;
    const int cnt = cnt_d(rng);
    for (int i = 0; i < cnt; ++i) {
        const int deg = deg_d(rng);
        std::uniform_int_distribution<int> m_d(0, deg);
        const int m = m_d(rng);
        const int nm = deg - m;
        // p in {nm, nm-2, ...} >= 0 with parity of nm
        std::vector<int> pv, qv;
        for (int pp = nm % 2; pp <= nm; pp += 2) pv.push_back(pp);
        for (int qq = -m; qq <= m; qq += 2) qv.push_back(qq);
        if (pv.empty() || qv.empty()) continue;
        std::uniform_int_distribution<int> pi(0, static_cast<int>(pv.size()) - 1);
        std::uniform_int_distribution<int> qi(0, static_cast<int>(qv.size()) - 1);
        s.add_term({deg, m, pv[pi(rng)], qv[qi(rng)],
                    kind_d(rng) == 0 ? Trig::Cos : Trig::Sin},
                   coeff_d(rng));
    }
    return s;
}

bool series_close(const DAlembertSeries& a, const DAlembertSeries& b, double tol) {
    DAlembertSeries diff = a - b;
    const double scale = std::max({a.max_abs(), b.max_abs(), 1e-30});
    return diff.max_abs() <= tol * scale;
}

CriterionResult crit7() {
    CriterionResult c{7, "series-engine property tests", false, ""};
    std::ostringstream d;
    std::mt19937 rng(20240817u);
    std::uniform_real_distribution<double> w1_d(0.75, 0.999), w2_d(0.05, 0.69);
    int fail_comm = 0, fail_dist = 0, fail_deriv = 0, fail_inv = 0, fail_delta = 0,
        fail_parity = 0;
    const int N = 1000;
    for (int it = 0; it < N; ++it) {
        const FrequencyPair f{w1_d(rng), w2_d(rng)};
        DAlembertSeries a = random_series(rng), b = random_series(rng),
                        e = random_series(rng);
        try {
            // ring axioms (cap high enough to avoid truncation asymmetry)
            if (!series_close(mul(a, b, 8), mul(b, a, 8), 1e-14)) ++fail_comm;
            if (!series_close(mul(a, b + e, 8), mul(a, b, 8) + mul(a, e, 8), 1e-13))
                ++fail_dist;
            // derivation property of D
            const DAlembertSeries lhs = apply_D(mul(a, b, 8), f);
            const DAlembertSeries rhs = mul(apply_D(a, f), b, 8) + mul(a, apply_D(b, f), 8);
            if (!series_close(lhs, rhs, 1e-12)) ++fail_deriv;
            // inversion consistency on the non-critical, non-small-divisor part
            DAlembertSeries nc;
            for (const auto& [k, coeff] : a.terms()) {
                const bool critical =
                    (k.p == 1 && std::abs(k.q) == 0) || (k.p == 0 && std::abs(k.q) == 1);
                if (critical) continue;
                if (std::abs(delta_pq(k.p, k.q, f)) < 1e-6) continue;
                nc.add_term(k, coeff);
            }
            const DAlembertSeries inv = invert_delta(nc, f, 1e-8);
            DAlembertSeries t1 = apply_D2(inv, f) + (f.omega1 * f.omega1) * inv;
            DAlembertSeries t2 = apply_D2(t1, f) + (f.omega2 * f.omega2) * t1;
            if (!series_close(t2, nc, 1e-11)) ++fail_inv;
            if (delta_pq(1, 0, f) != 0.0 || delta_pq(0, 1, f) != 0.0) ++fail_delta;
        } catch (const std::invalid_argument&) {
            ++fail_parity;
        }
    }
    d << "  " << N << " randomized series, seed 20240817\n";
    d << "  mul commutativity failures: " << fail_comm << "\n";
    d << "  distributivity failures:    " << fail_dist << "\n";
    d << "  D derivation failures:      " << fail_deriv << "\n";
    d << "  inversion round-trip fails: " << fail_inv << "\n";
    d << "  delta(1,0)/delta(0,1) != 0: " << fail_delta << "\n";
    d << "  parity violations thrown:   " << fail_parity << "\n";
    c.passed = fail_comm + fail_dist + fail_deriv + fail_inv + fail_delta + fail_parity == 0;
    c.details = d.str();
    return c;
}

CriterionResult crit8() {
    CriterionResult c{8, "second-order normalization and route comparison", false, ""};
    std::ostringstream d;
    const Params p = classical();
    const Frequencies f = frequencies(p);
    const WhittakerTransform J = whittaker_matrix(p, f);

    const GenericSolve gen = generic_second_order_solve(p, f, J);
    const bool crit_ok = gen.critical_rel <= 1e-10;
    d << "  critical-part relative magnitude = " << num(gen.critical_rel)
      << (crit_ok ? " <= 1e-10" : " > 1e-10") << "\n";

    const FirstOrderSeries b1 = first_order_series(f, J);
    const H3Coefficients h3 = h3_coefficients(p, f, b1, gen.b2);
    // Reference scale: the cubic form on the first-order orbit.
    const CubicCoeffs cc = cubic_coeffs(p);
    const double l3_scale =
        std::max({std::abs(cc.T1), std::abs(cc.T2), std::abs(cc.T3), std::abs(cc.T4)});
    const double maxA = std::max({std::abs(h3.A30), std::abs(h3.A21), std::abs(h3.A12),
                                  std::abs(h3.A03)});
    const bool h3_ok = maxA <= 1e-8 * l3_scale && h3.residual_full <= 1e-8 * l3_scale;
    d << "  angle-free third-order coefficients A = " << num(h3.A30) << " " << num(h3.A21)
      << " " << num(h3.A12) << " " << num(h3.A03) << "\n";
    d << "  full degree-3 residual with second-order terms = " << num(h3.residual_full)
      << ", ablated = " << num(h3.residual_without_b2)
      << (h3_ok ? " (vanishing verified)" : " (NOT VANISHING)") << "\n";

    const RouteComparison cmp = compare_routes(p);
    const bool routes_ok = cmp.max_rel_diff <= 1e-6;
    d << "  closed-form vs generic second-order coefficients (classical):\n";
    for (int i = 0; i < 10; ++i) {
        d << "    r" << (i + 1) << " closed = " << num(cmp.closed.r[i])
          << ", generic = " << num(cmp.generic.r[i])
          << ", rel diff = " << num(cmp.rel_diff_r[i]) << "\n";
        d << "    s" << (i + 1) << " closed = " << num(cmp.closed.s[i])
          << ", generic = " << num(cmp.generic.s[i])
          << ", rel diff = " << num(cmp.rel_diff_s[i]) << "\n";
    }
    d << "  max relative difference = " << num(cmp.max_rel_diff)
      << (routes_ok ? " <= 1e-6" : " > 1e-6") << "\n";
    if (!routes_ok)
        d << "  note: the tabulated closed-form coefficients disagree with the generic\n"
             "  solve already at the classical limit; the structured comparison above is\n"
             "  the discrepancy report.\n";
    c.passed = crit_ok && h3_ok && routes_ok;
    c.details = d.str();
    return c;
}

std::string verify_report_once() {
    std::vector<CriterionResult> rs;
    for (int i = 1; i <= 8; ++i) rs.push_back(run_criterion(i));
    return acceptance_report(rs);
}

CriterionResult crit9() {
    CriterionResult c{9, "determinism of the verification report", false, ""};
    const std::string r1 = verify_report_once();
    const std::string r2 = verify_report_once();
    std::ostringstream d;
    d << "  report size " << r1.size() << " bytes, second run "
      << (r1 == r2 ? "byte-identical" : "DIFFERS") << "\n";
    c.passed = (r1 == r2);
    c.details = d.str();
    return c;
}

}  // namespace

CriterionResult run_criterion(int id) {
    switch (id) {
        case 1: return crit1();
        case 2: return crit2();
        case 3: return crit3();
        case 4: return crit4();
        case 5: return crit5();
        case 6: return crit6();
        case 7: return crit7();
        case 8: return crit8();
        case 9: return crit9();
        default: throw std::invalid_argument("criterion id must be 1..9");
    }
}

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    for (int i = 1; i <= 9; ++i) out.push_back(run_criterion(i));
    return out;
}

std::string acceptance_report(const std::vector<CriterionResult>& results) {
    std::ostringstream out;
    int passed = 0;
    for (const auto& r : results) {
        out << "criterion " << r.id << ": " << (r.passed ? "PASS" : "FAIL") << " - "
            << r.name << "\n"
            << r.details;
        if (r.passed) ++passed;
    }
    out << passed << "/" << results.size() << " criteria passed\n";
    return out.str();
}

}  // namespace lp4
