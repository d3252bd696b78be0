#include "lp4/params.hpp"

#include <cmath>
#include <stdexcept>

#include <json.hpp>

namespace lp4 {

void Params::validate() const {
    if (!(mu > 0.0) || !(mu <= 0.5))
        throw std::invalid_argument("mu must satisfy 0 < mu <= 1/2");
    if (!(q1 > 0.0) || !(q1 <= 1.0))
        throw std::invalid_argument("q1 must satisfy 0 < q1 <= 1");
    if (!(A2 >= 0.0))
        throw std::invalid_argument("A2 must be non-negative");
    if (!(cd > 0.0))
        throw std::invalid_argument("cd must be positive");
}

Derived derive(const Params& p) {
    p.validate();
    Derived d;
    d.epsilon = 1.0 - p.q1;
    d.n = std::sqrt(1.0 + 1.5 * p.A2);
    d.gamma = 1.0 - 2.0 * p.mu;
    d.delta = std::cbrt(p.q1);
    d.W1 = (1.0 - p.mu) * (1.0 - p.q1) / p.cd;
    d.nW1 = d.n * d.W1;
    return d;
}

Params perturbation_scale(const Params& p, double h) {
    if (h < 0.0 || h > 1.0)
        throw std::invalid_argument("scale factor must lie in [0,1]");
    Params out = p;
    // epsilon -> h*epsilon scales W1 = (1-mu)*epsilon/cd by h as well, so cd
    // stays put and both small drag quantities move together.
    out.q1 = 1.0 - h * (1.0 - p.q1);
    out.A2 = h * p.A2;
    return out;
}

double perturbation_magnitude(const Params& p) {
    Derived d = derive(p);
    return std::max({d.epsilon, p.A2, d.nW1});
}

double mass_reduction_factor(double chi, double radius_cm, double density) {
    if (!(radius_cm > 0.0) || !(density > 0.0))
        throw std::invalid_argument("grain radius and density must be positive");
    return 1.0 - 5.6e-5 * chi / (radius_cm * density);
}

std::string to_json(const Params& p) {
    Derived d = derive(p);
    nlohmann::ordered_json j;
    j["mu"] = p.mu;
    j["q1"] = p.q1;
    j["A2"] = p.A2;
    j["cd"] = p.cd;
    j["epsilon"] = d.epsilon;
    j["n"] = d.n;
    j["gamma"] = d.gamma;
    j["delta"] = d.delta;
    j["W1"] = d.W1;
    return j.dump(2);
}

Params params_from_json(const std::string& text) {
    auto j = nlohmann::json::parse(text);
    Params p;
    p.mu = j.value("mu", p.mu);
    p.q1 = j.value("q1", p.q1);
    p.A2 = j.value("A2", p.A2);
    p.cd = j.value("cd", p.cd);
    p.validate();
    return p;
}

}  // namespace lp4
