#include "lp4/poisson_series.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace lp4 {

namespace {

// Folds (p,q) into the p > 0, or p == 0 && q >= 0, half-lattice. sin flips
// sign under the fold; sin(0) vanishes. Returns false when the term is
// identically zero.
bool canonicalize(SeriesKey& k, double& coeff) {
    if (k.p < 0 || (k.p == 0 && k.q < 0)) {
        k.p = -k.p;
        k.q = -k.q;
        if (k.kind == Trig::Sin) coeff = -coeff;
    }
    if (k.kind == Trig::Sin && k.p == 0 && k.q == 0) return false;
    return true;
}

void check_parity(const SeriesKey& k) {
    const int nm = k.deg - k.m;
    bool ok = k.deg >= 0 && k.m >= 0 && k.m <= k.deg;
    ok = ok && k.p >= 0 && k.p <= nm && ((k.p - nm) % 2 == 0);
    ok = ok && std::abs(k.q) <= k.m && (((k.q - k.m) % 2) == 0);
    if (!ok) {
        std::ostringstream msg;
        msg << "series key violates the D'Alembert parity constraints: deg=" << k.deg
            << " m=" << k.m << " p=" << k.p << " q=" << k.q;
        throw std::invalid_argument(msg.str());
    }
}

}  // namespace

DAlembertSeries DAlembertSeries::term(SeriesKey k, double coeff) {
    DAlembertSeries s;
    s.add_term(k, coeff);
    return s;
}

void DAlembertSeries::add_term(SeriesKey k, double coeff) {
    if (!canonicalize(k, coeff)) return;
    check_parity(k);
    if (coeff == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(k, coeff);
    if (!inserted) {
        it->second += coeff;
        if (it->second == 0.0) terms_.erase(it);
    }
}

double DAlembertSeries::coeff(SeriesKey k) const {
    double sign = 1.0;
    if (!canonicalize(k, sign)) return 0.0;
    auto it = terms_.find(k);
    return it == terms_.end() ? 0.0 : sign * it->second;
}

double DAlembertSeries::max_abs() const {
    double m = 0.0;
    for (const auto& [k, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

int DAlembertSeries::degree() const {
    int d = 0;
    for (const auto& [k, c] : terms_) d = std::max(d, k.deg);
    return d;
}

double DAlembertSeries::evaluate(double I1, double I2, double phi1, double phi2) const {
    double total = 0.0;
    for (const auto& [k, c] : terms_) {
        const double amp = std::pow(I1, 0.5 * (k.deg - k.m)) * std::pow(I2, 0.5 * k.m);
        const double arg = k.p * phi1 + k.q * phi2;
        total += c * amp * (k.kind == Trig::Cos ? std::cos(arg) : std::sin(arg));
    }
    return total;
}

DAlembertSeries DAlembertSeries::pruned(double rel_tol) const {
    const double cut = rel_tol * max_abs();
    DAlembertSeries out;
    for (const auto& [k, c] : terms_)
        if (std::abs(c) > cut) out.terms_.emplace(k, c);
    return out;
}

DAlembertSeries& DAlembertSeries::operator+=(const DAlembertSeries& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

DAlembertSeries& DAlembertSeries::operator-=(const DAlembertSeries& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, -c);
    return *this;
}

DAlembertSeries& DAlembertSeries::operator*=(double c) {
    if (c == 0.0) {
        terms_.clear();
        return *this;
    }
    for (auto& [k, v] : terms_) v *= c;
    return *this;
}

std::string DAlembertSeries::to_text() const {
    std::string out;
    char line[128];
    for (const auto& [k, c] : terms_) {
        std::snprintf(line, sizeof line, "%d %d %d %d %s %.17g\n", k.deg, k.m, k.p, k.q,
                      k.kind == Trig::Cos ? "cos" : "sin", c);
        out += line;
    }
    return out;
}

DAlembertSeries DAlembertSeries::from_text(const std::string& text) {
    DAlembertSeries s;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        SeriesKey k;
        std::string kind;
        double c;
        if (!(ls >> k.deg >> k.m >> k.p >> k.q >> kind >> c))
            throw std::invalid_argument("malformed series line: " + line);
        if (kind == "cos")
            k.kind = Trig::Cos;
        else if (kind == "sin")
            k.kind = Trig::Sin;
        else
            throw std::invalid_argument("unknown trig kind: " + kind);
        s.add_term(k, c);
    }
    return s;
}

DAlembertSeries mul(const DAlembertSeries& a, const DAlembertSeries& b, int max_degree) {
    DAlembertSeries out;
    for (const auto& [ka, ca] : a.terms()) {
        for (const auto& [kb, cb] : b.terms()) {
            const int deg = ka.deg + kb.deg;
            if (deg > max_degree) continue;
            const int m = ka.m + kb.m;
            const double c = ca * cb;
            const int pd = ka.p - kb.p, qd = ka.q - kb.q;
            const int ps = ka.p + kb.p, qs = ka.q + kb.q;
            // product-to-sum identities
            if (ka.kind == Trig::Cos && kb.kind == Trig::Cos) {
                out.add_term({deg, m, pd, qd, Trig::Cos}, 0.5 * c);
                out.add_term({deg, m, ps, qs, Trig::Cos}, 0.5 * c);
            } else if (ka.kind == Trig::Sin && kb.kind == Trig::Sin) {
                out.add_term({deg, m, pd, qd, Trig::Cos}, 0.5 * c);
                out.add_term({deg, m, ps, qs, Trig::Cos}, -0.5 * c);
            } else if (ka.kind == Trig::Sin && kb.kind == Trig::Cos) {
                out.add_term({deg, m, pd, qd, Trig::Sin}, 0.5 * c);
                out.add_term({deg, m, ps, qs, Trig::Sin}, 0.5 * c);
            } else {  // cos * sin
                out.add_term({deg, m, pd, qd, Trig::Sin}, -0.5 * c);
                out.add_term({deg, m, ps, qs, Trig::Sin}, 0.5 * c);
            }
        }
    }
    return out;
}

DAlembertSeries apply_D(const DAlembertSeries& s, FrequencyPair f) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms()) {
        const double lam = k.p * f.omega1 - k.q * f.omega2;
        SeriesKey nk = k;
        if (k.kind == Trig::Cos) {
            nk.kind = Trig::Sin;
            out.add_term(nk, -lam * c);
        } else {
            nk.kind = Trig::Cos;
            out.add_term(nk, lam * c);
        }
    }
    return out;
}

DAlembertSeries apply_D2(const DAlembertSeries& s, FrequencyPair f) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms()) {
        const double lam = k.p * f.omega1 - k.q * f.omega2;
        out.add_term(k, -lam * lam * c);
    }
    return out;
}

double delta_pq(int p, int q, FrequencyPair f) {
    const double lam = p * f.omega1 - q * f.omega2;
    const double lam2 = lam * lam;
    return (f.omega1 * f.omega1 - lam2) * (f.omega2 * f.omega2 - lam2);
}

namespace {
bool is_critical(const SeriesKey& k) {
    const int aq = std::abs(k.q);
    return (k.p == 1 && aq == 0) || (k.p == 0 && aq == 1);
}
}  // namespace

DAlembertSeries invert_delta(const DAlembertSeries& s, FrequencyPair f, double tol_div) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms()) {
        if (is_critical(k)) {
            std::ostringstream msg;
            msg << "critical harmonic (p=" << k.p << ", q=" << k.q
                << ") with coefficient " << c << " cannot be inverted";
            throw CriticalTermError(msg.str());
        }
        const double d = delta_pq(k.p, k.q, f);
        if (std::abs(d) < tol_div) {
            std::ostringstream msg;
            msg << "small divisor delta(" << k.p << "," << k.q << ") = " << d;
            throw SmallDivisorError(msg.str());
        }
        SeriesKey nk = k;
        out.add_term(nk, c / d);
    }
    return out;
}

DAlembertSeries critical_part(const DAlembertSeries& s) {
    DAlembertSeries out;
    for (const auto& [k, c] : s.terms())
        if (is_critical(k)) out.add_term(k, c);
    return out;
}

MoserCheck moser_condition(FrequencyPair f, int kmax, double tol_res) {
    MoserCheck best;
    best.value = std::numeric_limits<double>::infinity();
    for (int k1 = -kmax; k1 <= kmax; ++k1) {
        for (int k2 = -kmax; k2 <= kmax; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (std::abs(k1) + std::abs(k2) > kmax) continue;
            const double v = std::abs(k1 * f.omega1 + k2 * f.omega2);
            if (v < best.value) {
                best.value = v;
                best.k1 = k1;
                best.k2 = k2;
            }
        }
    }
    best.ok = best.value > tol_res;
    return best;
}

}  // namespace lp4
