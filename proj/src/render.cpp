#include "mmtool/render.hpp"

#include <sstream>

#include <nlohmann/json.hpp>

namespace mmtool {

namespace {

std::string monomial_body(const Monomial& m) {
    std::string s;
    for (auto& [n, e] : m.factors) {
        if (!s.empty()) s += "*";
        s += n;
        if (e != 1) s += "^" + std::to_string(e);
    }
    return s;
}

void append_term(std::ostringstream& os, const Rat& c, const std::string& mono, bool lead) {
    std::string sign = sgn(c) < 0 ? (lead ? "-" : " - ") : (lead ? "" : " + ");
    Rat a = abs(c);
    std::string body = a.get_den() == 1 ? a.get_num().get_str() : "(" + a.get_str() + ")";
    if (mono.empty())
        os << sign << body;
    else if (a == 1)
        os << sign << mono;
    else
        os << sign << body << "*" << mono;
}

}  // namespace

std::string multipoly_to_string(const MultiPoly& p) {
    if (p.is_zero_poly()) return "0";
    std::ostringstream os;
    bool lead = true;
    for (auto it = p.terms().rbegin(); it != p.terms().rend(); ++it) {
        append_term(os, it->second, monomial_body(it->first), lead);
        lead = false;
    }
    return os.str();
}

std::string ratfunc_to_string(const RatFunc& f) {
    if (f.is_zero_fn()) return "0";
    std::string num = multipoly_to_string(f.num());
    if (f.is_polynomial()) return num;
    MultiPoly d = f.den_expanded();
    return "(" + num + ")/(" + multipoly_to_string(d) + ")";
}

std::string laurent_to_string(const LaurentSeries& s) {
    std::ostringstream os;
    bool lead = true;
    if (!s.known_zero()) {
        for (int e = s.lowest_exponent(); e <= s.highest_known(); ++e) {
            RatFunc c = s.raw(e);
            if (c.is_zero_fn()) continue;
            std::string mono;
            if (e != 0) {
                mono = s.var();
                if (e != 1) mono += "^" + std::to_string(e);
            }
            if (c.is_constant()) {
                append_term(os, c.constant_value(), mono, lead);
            } else {
                os << (lead ? "" : " + ") << "(" << ratfunc_to_string(c) << ")";
                if (!mono.empty()) os << "*" << mono;
            }
            lead = false;
        }
    }
    if (lead) os << "0";
    if (s.truncation_order() != LaurentSeries::kExact)
        os << " + O(" << s.var() << "^" << s.truncation_order() << ")";
    return os.str();
}

namespace {

nlohmann::json poly_to_json(const MultiPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [m, c] : p.terms()) {
        nlohmann::json mono = nlohmann::json::object();
        for (auto& [n, e] : m.factors) mono[n] = e;
        terms.push_back({{"c", rat_str(c)}, {"m", mono}});
    }
    return terms;
}

MultiPoly poly_from_json(const nlohmann::json& terms) {
    MultiPoly p;
    for (auto& t : terms) {
        Monomial m;
        for (auto it = t.at("m").begin(); it != t.at("m").end(); ++it)
            m.factors.emplace_back(it.key(), it.value().get<int>());
        std::sort(m.factors.begin(), m.factors.end());
        p.add_term(m, rat_parse(t.at("c").get<std::string>()));
    }
    return p;
}

}  // namespace

nlohmann::json ratfunc_to_json(const RatFunc& f) {
    nlohmann::json j;
    j["type"] = "ratfunc";
    j["vars"] = f.variables();
    j["num"] = poly_to_json(f.num());
    j["den"] = poly_to_json(f.is_zero_fn() ? MultiPoly(Rat(1)) : f.den_expanded());
    return j;
}

RatFunc ratfunc_from_json(const nlohmann::json& j) {
    if (j.at("type").get<std::string>() != "ratfunc") throw std::invalid_argument("expected ratfunc node");
    MultiPoly num = poly_from_json(j.at("num"));
    MultiPoly den = poly_from_json(j.at("den"));
    RatFunc r(num);
    r.divide_by_poly(den);
    return r;
}

}  // namespace mmtool
