#include "mmtool/curve.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

#include "mmtool/render.hpp"

namespace mmtool {

SpectralCurve minimal_curve(int m, const Times& times) {
    if (times.m != m) throw std::invalid_argument("minimal_curve: times/m mismatch");
    SpectralCurve c;
    c.family = SpectralCurve::Family::MinimalModel;
    c.m = m;
    c.times = times;
    c.classical_poly_P = classical_poly(m, times).P;
    RatFunc u0 = RatFunc::var("u0");
    c.ycoef.resize(static_cast<size_t>(m) + 1);
    for (int k = 0; k <= m; ++k) {
        RatFunc acc;
        for (int j = k; j <= m; ++j) {
            Rat num = rat_factorial(2 * j + 1) * rat_factorial(k);
            Rat den = rat_factorial(j) * rat_factorial(j - k) * rat_factorial(2 * k + 1);
            acc += times[j] * (num / den) * (u0 * rat(-1, 2)).pow(j - k);
        }
        c.ycoef[static_cast<size_t>(k)] = acc;
    }
    return c;
}

SpectralCurve kontsevich_curve(const std::vector<RatFunc>& tau) {
    // y = (1 - tau_3/2) z - 1/2 sum_{k>=1} tau_{2k+3} z^{2k+1}
    SpectralCurve c;
    c.family = SpectralCurve::Family::Kontsevich;
    c.ycoef.assign(std::max<size_t>(tau.size(), 1), RatFunc());
    c.ycoef[0] = RatFunc(Rat(1));
    if (!tau.empty()) c.ycoef[0] -= tau[0] * rat(1, 2);
    for (size_t k = 1; k < tau.size(); ++k) c.ycoef[k] = tau[k] * rat(-1, 2);
    c.m = static_cast<int>(c.ycoef.size()) - 1;
    return c;
}

LaurentSeries SpectralCurve::y_series(const std::string& var) const {
    LaurentSeries s(var);
    for (size_t k = 0; k < ycoef.size(); ++k)
        if (!ycoef[k].is_zero_fn()) s.set_coeff(2 * static_cast<int>(k) + 1, ycoef[k]);
    return s;
}

std::string SpectralCurve::fingerprint() const {
    nlohmann::json j;
    j["family"] = family == Family::MinimalModel ? "minimal" : "kontsevich";
    j["x"] = family == Family::MinimalModel ? "z^2-2*u0" : "z^2";
    nlohmann::json y = nlohmann::json::array();
    for (auto& c : ycoef) y.push_back(ratfunc_to_json(c));
    j["y"] = y;
    std::string s = j.dump();
    unsigned long long h = 1469598103934665603ull;  // FNV-1a 64
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

LambdaField lambda_field(const SpectralCurve& curve, int j) {
    if (curve.family != SpectralCurve::Family::MinimalModel)
        throw std::invalid_argument("lambda_field: minimal-model curves only");
    if (j < -1 || j > curve.m) throw std::invalid_argument("lambda_field: j out of range");
    LambdaField f;
    f.j = j;
    RatFunc u0 = RatFunc::var("u0");
    if (j == -1) {
        // Lambda_-1 = -2 u0dot y(z)
        RatFunc du0 = U0Derivation(curve.classical_poly_P).du0_dt();
        f.coef.resize(curve.ycoef.size());
        for (size_t k = 0; k < curve.ycoef.size(); ++k) f.coef[k] = curve.ycoef[k] * du0 * Rat(-2);
        return f;
    }
    // Lambda_j = -2 (2j+1)!/j! u0 sum_l z^(2j+1-2l) (-u0/2)^l (j-l)!/((l+1)!(2j+1-2l)!)
    f.coef.assign(static_cast<size_t>(j) + 1, RatFunc());
    Rat pref = Rat(-2) * rat_factorial(2 * j + 1) / rat_factorial(j);
    for (int l = 0; l <= j; ++l) {
        int k = j - l;  // lands on z^(2k+1)
        Rat num = rat_factorial(j - l);
        Rat den = rat_factorial(l + 1) * rat_factorial(2 * j + 1 - 2 * l);
        f.coef[static_cast<size_t>(k)] = u0 * (pref * num / den) * (u0 * rat(-1, 2)).pow(l);
    }
    return f;
}

LambdaField phi_field(const SpectralCurve& curve) {
    // Phi is the ydx primitive: Phi'(z) = y(z) x'(z) = 2 z y(z), so the
    // z^(2k+1) coefficient is 2 ycoef[k]/(2k+2). (The printed Lambda_j sum
    // does not satisfy this identity; the free-energy residue needs the
    // genuine primitive.)
    LambdaField phi;
    phi.j = -2;
    phi.coef.assign(curve.ycoef.size() + 1, RatFunc());
    for (size_t k = 0; k < curve.ycoef.size(); ++k)
        phi.coef[k + 1] = curve.ycoef[k] * Rat(2, 2 * static_cast<int>(k) + 3);
    return phi;
}

}  // namespace mmtool
