#include "mmtool/diffpoly.hpp"

#include <sstream>

#include "mmtool/render.hpp"

namespace mmtool {

DiffPoly integrate_total_derivative(const DiffPoly& p) {
    DiffPoly rem = p, q;
    while (!rem.is_zero_poly()) {
        auto lead = rem.terms().rbegin();
        const DMonomial& m = lead->first;
        const RatFunc& c = lead->second;
        int k = m.max_deriv();
        if (k <= 0) {
            DiffPoly mm;
            mm.add_term(m, c);
            throw std::domain_error("not a total t-derivative; remainder starts with " +
                                    diffpoly_to_string(mm));
        }
        if (m.exponent(k) != 1)
            throw std::domain_error("not a total t-derivative; leading monomial has repeated top derivative u^(" +
                                    std::to_string(k) + ")");
        // bump u^(k) down to u^(k-1)
        DMonomial n;
        n.nu = m.nu;
        for (auto& [i, e] : m.derivs) {
            if (i == k) continue;
            n.derivs.emplace_back(i, e);
        }
        DMonomial bump;
        bump.derivs.emplace_back(k - 1, 1);
        n = n * bump;
        int denom = n.exponent(k - 1);
        DiffPoly qterm;
        qterm.add_term(n, c * Rat(1, denom));
        q += qterm;
        rem -= qterm.diff_t();
    }
    // integration constant: q built from derivative bumps has no pure-constant
    // term, so q(u == 0) = 0 by construction.
    return q;
}

namespace {

std::string rat_coeff_str(const Rat& q, bool lead) {
    std::string sign = sgn(q) < 0 ? (lead ? "-" : " - ") : (lead ? "" : " + ");
    Rat a = abs(q);
    std::string body;
    if (a.get_den() == 1)
        body = a.get_num().get_str();
    else
        body = "(" + a.get_str() + ")";
    return sign + body;
}

std::string deriv_name(int idx) {
    if (idx == 0) return "u";
    if (idx <= 3) return "u" + std::string(static_cast<size_t>(idx), '\'');
    return "u(" + std::to_string(idx) + ")";
}

}  // namespace

std::string diffpoly_to_string(const DiffPoly& p, bool show_nu_as_eps) {
    if (p.is_zero_poly()) return "0";
    // display order: total u-power first (R_2 reads "3u^2 - eps u''/2"), then
    // the derivative order used for canonical forms
    std::vector<std::pair<DMonomial, RatFunc>> terms(p.terms().begin(), p.terms().end());
    DMonLess less;
    std::sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
        int pa = a.first.total_u_power(), pb = b.first.total_u_power();
        if (pa != pb) return pa > pb;
        return less(b.first, a.first);
    });
    std::ostringstream os;
    bool lead = true;
    for (auto it = terms.begin(); it != terms.end(); ++it) {
        const DMonomial& m = it->first;
        const RatFunc& c = it->second;
        std::vector<std::string> factors;
        if (show_nu_as_eps && m.nu > 0) {
            if (m.nu % 2 == 0)
                factors.push_back(m.nu == 2 ? "eps" : "eps^" + std::to_string(m.nu / 2));
            else
                factors.push_back(m.nu == 1 ? "nu" : "nu^" + std::to_string(m.nu));
        }
        for (auto& [i, e] : m.derivs)
            factors.push_back(e == 1 ? deriv_name(i) : deriv_name(i) + "^" + std::to_string(e));
        std::string mono;
        for (size_t i = 0; i < factors.size(); ++i) mono += (i ? "*" : "") + factors[i];
        if (c.is_constant()) {
            Rat q = c.constant_value();
            if (mono.empty()) {
                os << rat_coeff_str(q, lead);
            } else if (abs(q) == 1) {
                os << (sgn(q) < 0 ? (lead ? "-" : " - ") : (lead ? "" : " + ")) << mono;
            } else {
                os << rat_coeff_str(q, lead) << "*" << mono;
            }
        } else {
            os << (lead ? "" : " + ") << "(" << ratfunc_to_string(c) << ")";
            if (!mono.empty()) os << "*" << mono;
        }
        lead = false;
    }
    return os.str();
}

}  // namespace mmtool
