#pragma once

#include <compare>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace lp4 {

// Term shape: I1^((deg-m)/2) * I2^(m/2) * {cos|sin}(p*phi1 + q*phi2).
// Canonical keys satisfy the parity constraints
//   p == deg-m (mod 2), 0 <= p <= deg-m,
//   q == m     (mod 2), -m <= q <= m,
// and p >= 0 with q >= 0 whenever p == 0 (harmonics are folded using the
// evenness of cos and oddness of sin). sin(0) terms are dropped.
enum class Trig : int { Cos = 0, Sin = 1 };

struct SeriesKey {
    int deg = 0;  // total degree in I^(1/2)
    int m = 0;    // I2 half-power index
    int p = 0;    // phi1 multiple
    int q = 0;    // phi2 multiple
    Trig kind = Trig::Cos;
    friend auto operator<=>(const SeriesKey&, const SeriesKey&) = default;
};

struct FrequencyPair {
    double omega1 = 0.0;
    double omega2 = 0.0;
};

class CriticalTermError : public std::runtime_error {
  public:
    explicit CriticalTermError(const std::string& what) : std::runtime_error(what) {}
};

class SmallDivisorError : public std::runtime_error {
  public:
    explicit SmallDivisorError(const std::string& what) : std::runtime_error(what) {}
};

class DAlembertSeries {
  public:
    using Map = std::map<SeriesKey, double>;

    DAlembertSeries() = default;

    // Single-term constructor; canonicalizes and checks parity.
    static DAlembertSeries term(SeriesKey k, double coeff);

    // Adds coeff to the (canonicalized) key. Throws std::invalid_argument on
    // parity violations. Zero results are erased to keep the form canonical.
    void add_term(SeriesKey k, double coeff);

    double coeff(SeriesKey k) const;  // 0.0 when absent
    const Map& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }
    double max_abs() const;
    int degree() const;  // max key degree, 0 when empty

    double evaluate(double I1, double I2, double phi1, double phi2) const;

    // Drops terms with |coeff| <= rel_tol * max_abs().
    DAlembertSeries pruned(double rel_tol) const;

    DAlembertSeries& operator+=(const DAlembertSeries& o);
    DAlembertSeries& operator-=(const DAlembertSeries& o);
    DAlembertSeries& operator*=(double c);

    friend DAlembertSeries operator+(DAlembertSeries a, const DAlembertSeries& b) {
        a += b;
        return a;
    }
    friend DAlembertSeries operator-(DAlembertSeries a, const DAlembertSeries& b) {
        a -= b;
        return a;
    }
    friend DAlembertSeries operator*(double c, DAlembertSeries a) {
        a *= c;
        return a;
    }

    // Text round-trip, one canonical term per line: "deg m p q kind coeff".
    std::string to_text() const;
    static DAlembertSeries from_text(const std::string& text);

  private:
    Map terms_;
};

// Product with degree cap; terms beyond max_degree are truncated.
DAlembertSeries mul(const DAlembertSeries& a, const DAlembertSeries& b, int max_degree = 4);

// D = omega1 * d/dphi1 - omega2 * d/dphi2.
DAlembertSeries apply_D(const DAlembertSeries& s, FrequencyPair f);
DAlembertSeries apply_D2(const DAlembertSeries& s, FrequencyPair f);

// [omega1^2 - (p*omega1 - q*omega2)^2] * [omega2^2 - (p*omega1 - q*omega2)^2]
double delta_pq(int p, int q, FrequencyPair f);

inline constexpr double kDivisorTol = 1e-8;

// Divides each harmonic by delta_pq. Throws CriticalTermError when the input
// contains (p,|q|) in {(1,0),(0,1)} harmonics, SmallDivisorError when some
// 0 < |delta_pq| < tol_div.
DAlembertSeries invert_delta(const DAlembertSeries& s, FrequencyPair f,
                             double tol_div = kDivisorTol);

// Extracts exactly the first-harmonic ((p,|q|) in {(1,0),(0,1)}) terms.
DAlembertSeries critical_part(const DAlembertSeries& s);

struct MoserCheck {
    bool ok = false;
    int k1 = 0;       // minimizing lattice pair
    int k2 = 0;
    double value = 0; // min |k1*omega1 + k2*omega2| over the lattice
};

// Checks k1*omega1 + k2*omega2 != 0 for 0 < |k1|+|k2| <= kmax.
MoserCheck moser_condition(FrequencyPair f, int kmax = 4, double tol_res = 1e-8);

}  // namespace lp4
