// lp4norm — CLI for the triangular-point normalization library.
//
// Subcommands: equilibria, stability, sweep, expand, normal-form, birkhoff,
// simulate, verify. All numeric output uses 17 significant digits and is
// byte-identical for identical configuration.
#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "lp4/acceptance.hpp"
#include "lp4/birkhoff.hpp"
#include "lp4/dynamics.hpp"
#include "lp4/equilibria.hpp"
#include "lp4/expansion.hpp"
#include "lp4/normal_form.hpp"
#include "lp4/params.hpp"
#include "lp4/poisson_series.hpp"

using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// JSON serializer with fixed 17-significant-digit doubles so that reports are
// regression-diffable; nlohmann's default double printer uses the shortest
// round-trip form instead.
void dump17(const json& j, std::string& out, int indent) {
    const std::string pad(indent, ' ');
    const std::string pad2(indent + 2, ' ');
    switch (j.type()) {
        case json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad2 + json(it.key()).dump() + ": ";
                dump17(it.value(), out, indent + 2);
            }
            out += "\n" + pad + "}";
            return;
        }
        case json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad2;
                dump17(v, out, indent + 2);
            }
            out += "\n" + pad + "]";
            return;
        }
        case json::value_t::number_float:
            out += num(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

std::string dump17(const json& j) {
    std::string out;
    dump17(j, out, 0);
    out += "\n";
    return out;
}

void write_output(const std::string& text, const std::string& path) {
    if (path.empty()) {
        std::fputs(text.c_str(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::invalid_argument("cannot open output file: " + path);
    f << text;
}

struct CommonOpts {
    lp4::Params p;
    std::string config_path;
    std::string output_path;
};

void add_common(CLI::App* cmd, CommonOpts& c) {
    cmd->add_option("--config", c.config_path, "JSON config file; flags win on conflict");
    cmd->add_option("--mu", c.p.mu, "mass ratio of the smaller primary");
    cmd->add_option("--q1", c.p.q1, "mass reduction factor of the radiating primary");
    cmd->add_option("--A2", c.p.A2, "oblateness coefficient");
    cmd->add_option("--cd", c.p.cd, "drag constant");
    cmd->add_option("-o,--output", c.output_path, "output file (default stdout)");
}

// Applies the config file underneath any explicitly passed flags.
void resolve_params(const CLI::App* cmd, CommonOpts& c) {
    if (!c.config_path.empty()) {
        std::ifstream f(c.config_path);
        if (!f) throw std::invalid_argument("cannot open config file: " + c.config_path);
        std::stringstream ss;
        ss << f.rdbuf();
        const lp4::Params file_p = lp4::params_from_json(ss.str());
        if (cmd->count("--mu") == 0) c.p.mu = file_p.mu;
        if (cmd->count("--q1") == 0) c.p.q1 = file_p.q1;
        if (cmd->count("--A2") == 0) c.p.A2 = file_p.A2;
        if (cmd->count("--cd") == 0) c.p.cd = file_p.cd;
    }
    c.p.validate();
}

json params_json(const lp4::Params& p) {
    const lp4::Derived d = lp4::derive(p);
    return json{{"mu", p.mu},     {"q1", p.q1},       {"A2", p.A2}, {"cd", p.cd},
                {"epsilon", d.epsilon}, {"n", d.n},   {"gamma", d.gamma},
                {"W1", d.W1},     {"nW1", d.nW1}};
}

// "start:stop:count" inclusive grid.
std::vector<double> parse_grid(const std::string& s) {
    double a = 0, b = 0;
    int n = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%d", &a, &b, &n) != 3 || n < 1)
        throw std::invalid_argument("grid must be start:stop:count with count >= 1: " + s);
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = (n == 1) ? a : a + (b - a) * i / (n - 1);
    return g;
}

int worker_count(std::size_t jobs) {
    unsigned n = std::thread::hardware_concurrency();
    if (n == 0) n = 1;
    if (const char* env = std::getenv("LPNORM_THREADS")) {
        const long cap = std::atol(env);
        if (cap >= 1 && static_cast<unsigned>(cap) < n) n = static_cast<unsigned>(cap);
    }
    if (jobs < n) n = static_cast<unsigned>(jobs);
    return static_cast<int>(n == 0 ? 1 : n);
}

int cmd_equilibria(const CLI::App* cmd, CommonOpts& c, const std::string& branch_s,
                   const std::string& method_s) {
    resolve_params(cmd, c);
    const lp4::Branch branch = (branch_s == "L5") ? lp4::Branch::L5 : lp4::Branch::L4;
    lp4::EquilibriumPoint pt;
    if (method_s == "series") {
        pt = lp4::series_point(c.p, branch);
    } else if (method_s == "epsilon") {
        if (branch == lp4::Branch::L5)
            throw std::invalid_argument("the epsilon-form point is defined for L4 only");
        pt = lp4::epsilon_form_point(c.p);
    } else if (method_s == "refined") {
        pt = lp4::refine_point(lp4::series_point(c.p, branch), c.p);
    } else {
        throw std::invalid_argument("method must be series, epsilon or refined");
    }
    const lp4::Residual res = lp4::equilibrium_residual(pt.x, pt.y, c.p);
    json out{{"branch", branch == lp4::Branch::L4 ? "L4" : "L5"},
             {"method", method_s},
             {"x", pt.x},
             {"y", pt.y},
             {"residual_Ux", res.Ux},
             {"residual_Uy", res.Uy},
             {"params", params_json(c.p)}};
    write_output(dump17(out), c.output_path);
    return 0;
}

int cmd_stability(const CLI::App* cmd, CommonOpts& c) {
    resolve_params(cmd, c);
    const lp4::StabilityReport rep = lp4::stability(c.p);
    json out{{"D", rep.D},
             {"stable", rep.stable},
             {"mu_crit", rep.mu_crit},
             {"margin", rep.margin},
             {"params", params_json(c.p)}};
    if (rep.stable) {
        const lp4::Frequencies f = lp4::frequencies(c.p);
        out["omega1"] = f.omega1;
        out["omega2"] = f.omega2;
    }
    write_output(dump17(out), c.output_path);
    return 0;
}

int cmd_sweep(const CLI::App* cmd, CommonOpts& c, const std::string& mu_grid_s,
              const std::string& q1_grid_s, const std::string& A2_grid_s,
              const std::string& cd_grid_s) {
    resolve_params(cmd, c);
    const auto mu_g = mu_grid_s.empty() ? std::vector<double>{c.p.mu} : parse_grid(mu_grid_s);
    const auto q1_g = q1_grid_s.empty() ? std::vector<double>{c.p.q1} : parse_grid(q1_grid_s);
    const auto A2_g = A2_grid_s.empty() ? std::vector<double>{c.p.A2} : parse_grid(A2_grid_s);
    const auto cd_g = cd_grid_s.empty() ? std::vector<double>{c.p.cd} : parse_grid(cd_grid_s);

    std::vector<lp4::Params> grid;
    for (double mu : mu_g)
        for (double q1 : q1_g)
            for (double A2 : A2_g)
                for (double cd : cd_g) {
                    lp4::Params p{mu, q1, A2, cd};
                    p.validate();
                    grid.push_back(p);
                }

    std::vector<std::string> rows(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= grid.size()) return;
            const lp4::Params& p = grid[i];
            const lp4::Derived d = lp4::derive(p);
            const lp4::StabilityReport rep = lp4::stability(p);
            std::ostringstream row;
            row << i << "," << num(p.mu) << "," << num(p.q1) << "," << num(p.A2) << ","
                << num(p.cd) << "," << num(d.epsilon) << "," << num(d.nW1) << ","
                << num(rep.mu_crit) << "," << num(rep.D) << ","
                << (rep.stable ? 1 : 0) << "\n";
            rows[i] = row.str();
        }
    };
    const int nw = worker_count(grid.size());
    std::vector<std::thread> pool;
    for (int i = 0; i < nw; ++i) pool.emplace_back(work);
    for (auto& t : pool) t.join();

    std::string out = "index,mu,q1,A2,cd,epsilon,nW1,mu_crit,D,stable\n";
    for (const auto& r : rows) out += r;
    write_output(out, c.output_path);
    return 0;
}

int cmd_expand(const CLI::App* cmd, CommonOpts& c) {
    resolve_params(cmd, c);
    const lp4::QuadraticCoeffs q = lp4::quadratic_coeffs(c.p);
    const lp4::CubicCoeffs t = lp4::cubic_coeffs(c.p);
    const lp4::TaylorTable tab = lp4::numeric_taylor_oracle(c.p, 3);
    const lp4::QuadraticCoeffs qo = lp4::oracle_quadratic(tab, c.p);
    const lp4::CubicCoeffs to = lp4::oracle_cubic(tab, c.p);
    auto rel = [](double a, double b) {
        const double s = std::max(std::abs(b), 1e-30);
        return std::abs(a - b) / s;
    };
    const double max_rel =
        std::max({rel(q.E, qo.E), rel(q.F, qo.F), rel(q.G, qo.G), rel(t.T1, to.T1),
                  rel(t.T2, to.T2), rel(t.T3, to.T3), rel(t.T4, to.T4)});
    json out{{"E", q.E},
             {"F", q.F},
             {"G", q.G},
             {"T1", t.T1},
             {"T2", t.T2},
             {"T3", t.T3},
             {"T4", t.T4},
             {"T5_coeffs", json{{"W1", t.W1}, {"a", t.a}, {"b", t.b}}},
             {"oracle",
              json{{"E", qo.E},
                   {"F", qo.F},
                   {"G", qo.G},
                   {"T1", to.T1},
                   {"T2", to.T2},
                   {"T3", to.T3},
                   {"T4", to.T4},
                   {"x0", tab.x0},
                   {"y0", tab.y0}}},
             {"max_rel_diff", max_rel},
             {"params", params_json(c.p)}};
    write_output(dump17(out), c.output_path);
    return 0;
}

int cmd_normal_form(const CLI::App* cmd, CommonOpts& c) {
    resolve_params(cmd, c);
    const lp4::Frequencies f = lp4::frequencies(c.p);
    const lp4::WhittakerTransform J = lp4::whittaker_matrix(c.p, f);
    const lp4::SumProduct sp = lp4::tabulated_sum_product(c.p);
    const lp4::GammaRelationResidual gr = lp4::gamma_relation_residual(c.p, f);
    json out{{"omega1", f.omega1},
             {"omega2", f.omega2},
             {"J", json{{"J13", J.J13},
                        {"J14", J.J14},
                        {"J21", J.J21},
                        {"J22", J.J22},
                        {"J23", J.J23},
                        {"J24", J.J24}}},
             {"l1", J.l1},
             {"l2", J.l2},
             {"k1", J.k1},
             {"k2", J.k2},
             {"sum_tabulated", sp.sum},
             {"sum_computed", f.omega1 * f.omega1 + f.omega2 * f.omega2},
             {"product_tabulated", sp.product},
             {"product_computed", f.omega1 * f.omega1 * f.omega2 * f.omega2},
             {"gamma_relation_residuals",
              json{{"omega1", gr.res_omega1}, {"omega2", gr.res_omega2}, {"u", gr.res_u}}},
             {"normal_form_residual", lp4::normal_form_residual(c.p)},
             {"params", params_json(c.p)}};
    write_output(dump17(out), c.output_path);
    return 0;
}

int cmd_birkhoff(const CLI::App* cmd, CommonOpts& c, const std::string& route,
                 const std::string& dump_prefix) {
    resolve_params(cmd, c);
    const lp4::Frequencies f = lp4::frequencies(c.p);
    const lp4::WhittakerTransform J = lp4::whittaker_matrix(c.p, f);
    json out{{"route", route}, {"params", params_json(c.p)}};

    lp4::B2Pair b2_for_h3;
    bool have_b2 = false;
    if (route == "closed" || route == "both") {
        const lp4::RSCoefficients rs = lp4::rs_coefficients(f, J, lp4::fg_tables(c.p));
        out["r"] = rs.r;
        out["s"] = rs.s;
        if (route == "closed") {
            b2_for_h3 = lp4::b2_closed_form(rs);
            have_b2 = true;
        }
    }
    if (route == "generic" || route == "both") {
        const lp4::GenericSolve gen = lp4::generic_second_order_solve(c.p, f, J);
        std::array<double, 10> gr{}, gs{};
        {
            // Project the generic components back onto the ten-harmonic basis
            // used by the closed-form tables.
            const lp4::RouteComparison cmp = lp4::compare_routes(c.p);
            gr = cmp.generic.r;
            gs = cmp.generic.s;
            if (route == "both") {
                json disc = json::array();
                for (int i = 0; i < 10; ++i) {
                    disc.push_back(json{{"coefficient", "r" + std::to_string(i + 1)},
                                        {"closed", cmp.closed.r[i]},
                                        {"generic", cmp.generic.r[i]},
                                        {"rel_diff", cmp.rel_diff_r[i]}});
                    disc.push_back(json{{"coefficient", "s" + std::to_string(i + 1)},
                                        {"closed", cmp.closed.s[i]},
                                        {"generic", cmp.generic.s[i]},
                                        {"rel_diff", cmp.rel_diff_s[i]}});
                }
                out["discrepancies"] = disc;
                out["max_rel_diff"] = cmp.max_rel_diff;
            }
        }
        out["generic_r"] = gr;
        out["generic_s"] = gs;
        out["critical_rel"] = gen.critical_rel;
        b2_for_h3 = gen.b2;
        have_b2 = true;
        if (!dump_prefix.empty()) {
            write_output(gen.b2.B2_10.to_text(), dump_prefix + "_B2_10.txt");
            write_output(gen.b2.B2_01.to_text(), dump_prefix + "_B2_01.txt");
            write_output(gen.Phi2.to_text(), dump_prefix + "_Phi2.txt");
            write_output(gen.Psi2.to_text(), dump_prefix + "_Psi2.txt");
        }
    }
    if (have_b2) {
        const lp4::FirstOrderSeries b1 = lp4::first_order_series(f, J);
        const lp4::H3Coefficients h3 = lp4::h3_coefficients(c.p, f, b1, b2_for_h3);
        out["h3"] = json{{"A30", h3.A30},
                         {"A21", h3.A21},
                         {"A12", h3.A12},
                         {"A03", h3.A03},
                         {"residual_full", h3.residual_full},
                         {"residual_without_b2", h3.residual_without_b2}};
    }
    write_output(dump17(out), c.output_path);
    return 0;
}

int cmd_simulate(const CLI::App* cmd, CommonOpts& c, double x0, double y0, double vx0,
                 double vy0, double t_end, double dt_out, double tol, bool rel_l4) {
    resolve_params(cmd, c);
    if (t_end <= 0 || dt_out <= 0 || tol <= 0)
        throw std::invalid_argument("t-end, dt-out and tol must be positive");
    lp4::State s0{x0, y0, vx0, vy0};
    if (rel_l4) {
        const lp4::EquilibriumPoint eq =
            lp4::refine_point(lp4::series_point(c.p, lp4::Branch::L4), c.p);
        s0.x += eq.x;
        s0.y += eq.y;
    }
    const lp4::Trajectory traj = lp4::integrate(s0, c.p, t_end, dt_out, tol);
    std::string csv = "t,x,y,vx,vy\n";
    for (std::size_t i = 0; i < traj.t.size(); ++i) {
        const lp4::State& s = traj.states[i];
        csv += num(traj.t[i]) + "," + num(s.x) + "," + num(s.y) + "," + num(s.vx) + "," +
               num(s.vy) + "\n";
    }
    write_output(csv, c.output_path);

    json spec = json::array();
    for (const auto& pk : lp4::dominant_frequencies(traj, 4))
        spec.push_back(json{{"frequency", pk.frequency}, {"amplitude", pk.amplitude}});
    json side{{"peaks", spec},
              {"jacobi_like_start", lp4::jacobi_like(traj.states.front(), c.p)},
              {"jacobi_like_end", lp4::jacobi_like(traj.states.back(), c.p)},
              {"params", params_json(c.p)}};
    const std::string side_path =
        c.output_path.empty() ? std::string() : c.output_path + ".spectrum.json";
    if (side_path.empty())
        std::fputs(dump17(side).c_str(), stdout);
    else
        write_output(dump17(side), side_path);
    return 0;
}

int cmd_verify(int criterion) {
    std::vector<lp4::CriterionResult> results;
    if (criterion == 0)
        results = lp4::run_acceptance();
    else
        results.push_back(lp4::run_criterion(criterion));
    std::fputs(lp4::acceptance_report(results).c_str(), stdout);
    for (const auto& r : results)
        if (!r.passed) return 1;
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Linear and second-order normalization about the triangular points of "
                 "the radiating, oblate, drag-perturbed restricted three-body problem"};
    app.require_subcommand(1);

    CommonOpts eq_c;
    std::string eq_branch = "L4", eq_method = "refined";
    auto* eq = app.add_subcommand("equilibria", "locate a triangular equilibrium point");
    add_common(eq, eq_c);
    eq->add_option("--branch", eq_branch, "L4 or L5")->check(CLI::IsMember({"L4", "L5"}));
    eq->add_option("--method", eq_method, "series, epsilon or refined")
        ->check(CLI::IsMember({"series", "epsilon", "refined"}));

    CommonOpts st_c;
    auto* st = app.add_subcommand("stability", "linear stability report");
    add_common(st, st_c);

    CommonOpts sw_c;
    std::string sw_mu, sw_q1, sw_A2, sw_cd;
    auto* sw = app.add_subcommand("sweep", "stability sweep over parameter grids (CSV)");
    add_common(sw, sw_c);
    sw->add_option("--mu-grid", sw_mu, "mu grid start:stop:count");
    sw->add_option("--q1-grid", sw_q1, "q1 grid start:stop:count");
    sw->add_option("--A2-grid", sw_A2, "A2 grid start:stop:count");
    sw->add_option("--cd-grid", sw_cd, "cd grid start:stop:count");

    CommonOpts ex_c;
    auto* ex = app.add_subcommand("expand",
                                  "quadratic and cubic coefficients vs numeric oracle");
    add_common(ex, ex_c);

    CommonOpts nf_c;
    auto* nf = app.add_subcommand("normal-form", "linear normalization report");
    add_common(nf, nf_c);

    CommonOpts bk_c;
    std::string bk_route = "both", bk_dump;
    auto* bk = app.add_subcommand("birkhoff", "second-order normalization");
    add_common(bk, bk_c);
    bk->add_option("--route", bk_route, "closed, generic or both")
        ->check(CLI::IsMember({"closed", "generic", "both"}));
    bk->add_option("--dump-series", bk_dump, "path prefix for series text dumps");

    CommonOpts sim_c;
    double sx0 = 0, sy0 = 0, svx0 = 0, svy0 = 0, st_end = 100.0, sdt = 0.1, stol = 1e-12;
    bool srel = false;
    auto* sim = app.add_subcommand("simulate", "integrate a trajectory (CSV + spectrum)");
    add_common(sim, sim_c);
    sim->add_option("--x0", sx0, "initial x");
    sim->add_option("--y0", sy0, "initial y");
    sim->add_option("--vx0", svx0, "initial vx");
    sim->add_option("--vy0", svy0, "initial vy");
    sim->add_option("--t-end", st_end, "integration time");
    sim->add_option("--dt-out", sdt, "output step");
    sim->add_option("--tol", stol, "integrator tolerance");
    sim->add_flag("--relative-to-l4", srel, "offset the initial state from refined L4");

    std::string vf_suite = "classical";
    int vf_criterion = 0;
    auto* vf = app.add_subcommand("verify", "run the acceptance suite");
    vf->add_option("--suite", vf_suite, "suite name (classical)");
    vf->add_option("--criterion", vf_criterion, "run a single criterion 1..9")
        ->check(CLI::Range(1, 9));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (*eq) return cmd_equilibria(eq, eq_c, eq_branch, eq_method);
        if (*st) return cmd_stability(st, st_c);
        if (*sw) return cmd_sweep(sw, sw_c, sw_mu, sw_q1, sw_A2, sw_cd);
        if (*ex) return cmd_expand(ex, ex_c);
        if (*nf) return cmd_normal_form(nf, nf_c);
        if (*bk) return cmd_birkhoff(bk, bk_c, bk_route, bk_dump);
        if (*sim)
            return cmd_simulate(sim, sim_c, sx0, sy0, svx0, svy0, st_end, sdt, stol, srel);
        if (*vf) return cmd_verify(vf_criterion);
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
