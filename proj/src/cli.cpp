#include "mmtool/cli.hpp"

#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "mmtool/bkw.hpp"
#include "mmtool/cache.hpp"
#include "mmtool/detcorr.hpp"
#include "mmtool/kontsevich.hpp"
#include "mmtool/mmformal.hpp"
#include "mmtool/render.hpp"
#include "mmtool/toprec.hpp"

namespace mmtool {

namespace {

// exact rational times: "t0=1/3,t1=0"; floating input is rejected
Times parse_times(int m, const std::string& spec) {
    if (spec.empty()) return Times::symbolic(m);
    std::vector<Rat> vals(static_cast<size_t>(m) + 1, Rat(0));
    vals.back() = Rat(1);
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        auto eq = item.find('=');
        if (eq == std::string::npos) throw CLI::ValidationError("--times", "expected tj=p/q entries");
        std::string key = item.substr(0, eq), val = item.substr(eq + 1);
        if (val.find('.') != std::string::npos || val.find('e') != std::string::npos ||
            val.find('E') != std::string::npos)
            throw CLI::ValidationError("--times", "exact rationals only (floating input rejected)");
        if (key.size() < 2 || key[0] != 't') throw CLI::ValidationError("--times", "keys look like t0, t1, ...");
        int j = std::stoi(key.substr(1));
        if (j < 0 || j > m) throw CLI::ValidationError("--times", "index out of range");
        vals[static_cast<size_t>(j)] = rat_parse(val);
    }
    if (vals.back() != 1) throw CLI::ValidationError("--times", "t_m must equal 1");
    return Times::numeric(m, vals);
}

nlohmann::json correlator_json(const CorrelatorForm& w) {
    nlohmann::json terms = nlohmann::json::array();
    for (auto& [d, c] : w.terms) terms.push_back({{"d", d}, {"c", ratfunc_to_json(c)}});
    return {{"type", "correlator"}, {"g", w.g}, {"n", w.n}, {"terms", terms}};
}

std::string correlator_text(const CorrelatorForm& w) {
    std::ostringstream os;
    bool first = true;
    for (auto& [d, c] : w.terms) {
        os << (first ? "" : " + ") << "(" << ratfunc_to_string(c) << ")";
        for (size_t i = 0; i < d.size(); ++i) os << "*z" << i + 1 << "^" << -(2 * d[i] + 2);
        first = false;
    }
    if (first) os << "0";
    return os.str();
}

std::string closed_form_text(const ClosedForm& f) {
    std::ostringstream os;
    bool any = false;
    if (!f.rational.is_zero_fn()) {
        os << ratfunc_to_string(f.rational);
        any = true;
    }
    if (!f.log_coeff.is_zero_fn()) {
        if (any) os << " + ";
        os << "(" << ratfunc_to_string(f.log_coeff) << ")*log(" << ratfunc_to_string(f.log_arg) << ")";
        any = true;
    }
    if (!any) os << "0";
    return os.str();
}

nlohmann::json closed_form_json(const ClosedForm& f) {
    nlohmann::json terms = nlohmann::json::array();
    if (!f.rational.is_zero_fn()) terms.push_back(ratfunc_to_json(f.rational));
    if (!f.log_coeff.is_zero_fn())
        terms.push_back({{"type", "log"},
                         {"coeff", ratfunc_to_json(f.log_coeff)},
                         {"arg", ratfunc_to_json(f.log_arg)}});
    return {{"type", "sum"}, {"terms", terms}};
}

std::string laurent_json_text(const LaurentSeries& s, bool json) {
    if (!json) return laurent_to_string(s);
    nlohmann::json terms = nlohmann::json::array();
    if (!s.known_zero())
        for (int e = s.lowest_exponent(); e <= s.highest_known(); ++e)
            if (!s.raw(e).is_zero_fn()) terms.push_back({{"pow", e}, {"c", ratfunc_to_json(s.raw(e))}});
    return nlohmann::json{{"type", "laurent"}, {"var", s.var()}, {"terms", terms}}.dump();
}

}  // namespace

int cli_dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"mmtool: exact (2m+1,2)/(2m,1) minimal-model toolkit"};
    app.require_subcommand(1);
    std::string format = "text", times_spec;
    app.add_option("--format", format, "text|json")->check(CLI::IsMember({"text", "json"}));

    int m = 0, jmax = 3, j = 0, g = 0, n = 1, kmax = 2, order = 8;
    std::string degrees_spec, s4_spec = "1";
    double s4d = 1.0;
    int grid_n = 20;

    auto* gd_cmd = app.add_subcommand("gd", "Gelfand-Dikii polynomials R_0..R_jmax");
    gd_cmd->add_option("--jmax", jmax)->check(CLI::NonNegativeNumber);
    auto* qpow_cmd = app.add_subcommand("qpow", "(Q^(j+1/2))_+ operator");
    qpow_cmd->add_option("--j", j)->check(CLI::NonNegativeNumber);
    auto* stringeq_cmd = app.add_subcommand("stringeq", "string equation for (2m+1,2)");
    auto* uexp_cmd = app.add_subcommand("uexp", "u(t) expansion in eps");
    auto* lax_cmd = app.add_subcommand("lax", "(2m+1,2) Lax pair");
    auto* mgd_cmd = app.add_subcommand("mgd", "modified Gelfand-Dikii polynomials");
    mgd_cmd->add_option("--kmax", kmax)->check(CLI::NonNegativeNumber);
    auto* curve_cmd = app.add_subcommand("curve", "classical spectral curve");
    auto* corr_cmd = app.add_subcommand("correlator", "W_n^(g) on the minimal-model curve");
    auto* fg_cmd = app.add_subcommand("fg", "free energy F_g (g >= 2)");
    auto* lambda_cmd = app.add_subcommand("lambda", "Lambda_j field");
    auto* dtj_cmd = app.add_subcommand("dtj", "t_j-derivative of W_n^(g)");
    auto* bkw_cmd = app.add_subcommand("bkw", "BKW f-expansion");
    auto* ktimes_cmd = app.add_subcommand("ktimes", "Kontsevich times");
    auto* dualtimes_cmd = app.add_subcommand("dualtimes", "dual times");
    auto* psi_cmd = app.add_subcommand("psi", "psi-class intersection numbers");
    psi_cmd->add_option("--g", g)->check(CLI::NonNegativeNumber);
    psi_cmd->add_option("--degrees", degrees_spec, "comma separated d_i");
    auto* quad_cmd = app.add_subcommand("quad", "quadrangulation closed forms");
    quad_cmd->add_option("--g", g);
    auto* critical_cmd = app.add_subcommand("critical", "Chebyshev critical potential");
    critical_cmd->add_option("--m", m);
    auto* dscale_cmd = app.add_subcommand("dscale", "double-scaling comparison (g = 2)");
    dscale_cmd->add_option("--s4", s4d);
    auto* airy_cmd = app.add_subcommand("airy-check", "Airy loop-equation residuals");
    airy_cmd->add_option("--grid", grid_n);

    for (auto* c : {stringeq_cmd, uexp_cmd, lax_cmd, curve_cmd, corr_cmd, fg_cmd, lambda_cmd,
                    dtj_cmd, bkw_cmd, ktimes_cmd, dualtimes_cmd}) {
        c->add_option("--m", m)->check(CLI::NonNegativeNumber);
        c->add_option("--times", times_spec, "exact rationals, e.g. t0=1/3");
    }
    uexp_cmd->add_option("--kmax", kmax);
    bkw_cmd->add_option("--kmax", kmax);
    dualtimes_cmd->add_option("--kmax", kmax);
    corr_cmd->add_option("--g", g);
    corr_cmd->add_option("--n", n);
    fg_cmd->add_option("--g", g);
    lambda_cmd->add_option("--j", j)->check(CLI::Number);
    dtj_cmd->add_option("--g", g);
    dtj_cmd->add_option("--n", n);
    dtj_cmd->add_option("--j", j)->check(CLI::Number);
    quad_cmd->add_option("--order", order);

    std::vector<const char*> argv;
    argv.push_back("mmtool");
    for (auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return 2;
    }

    bool json = format == "json";
    try {
        if (*gd_cmd) {
            GDSequence s(jmax);
            nlohmann::json arr = nlohmann::json::array();
            for (int i = 0; i <= jmax; ++i) {
                if (json)
                    arr.push_back(diffpoly_to_string(s.R(i)));
                else
                    out << "R_" << i << " = " << diffpoly_to_string(s.R(i)) << "\n";
            }
            if (json) out << nlohmann::json{{"type", "gd"}, {"R", arr}}.dump() << "\n";
        } else if (*qpow_cmd) {
            DiffOperator p = q_half_power(j);
            for (int i = p.order(); i >= 0; --i) {
                if (p.coeff(i).is_zero_poly()) continue;
                out << "d^" << i << ": " << diffpoly_to_string(p.coeff(i), false) << "\n";
            }
        } else if (*stringeq_cmd) {
            StringEquation se = string_equation(m, parse_times(m, times_spec));
            out << diffpoly_to_string(se.equation) << " = 0\n";
        } else if (*uexp_cmd) {
            UExpansion ux = u_expansion(m, parse_times(m, times_spec), kmax);
            for (int k = 1; k <= kmax; ++k)
                out << "u_" << k << " = " << ratfunc_to_string(ux.u[static_cast<size_t>(k)]) << "\n";
        } else if (*lax_cmd) {
            LaxPair lp = lax_pair(m, parse_times(m, times_spec));
            const char* nm[2][2] = {{"D11", "D12"}, {"D21", "D22"}};
            for (int a = 0; a < 2; ++a)
                for (int b = 0; b < 2; ++b) {
                    out << nm[a][b] << " =";
                    for (int k = lp.D.deg(a, b); k >= 0; --k) {
                        if (lp.D.at(a, b, k).is_zero_poly()) continue;
                        out << " [x^" << k << "] " << diffpoly_to_string(lp.D.at(a, b, k), false) << " ;";
                    }
                    out << "\n";
                }
        } else if (*mgd_cmd) {
            MGDSequence s = mgd_sequence(kmax);
            for (int k = 0; k <= kmax; ++k) {
                out << "Rhat_" << k << " = " << diffpoly_to_string(s.hat[static_cast<size_t>(k)], false) << "\n";
                out << "Rchk_" << k << " = " << diffpoly_to_string(s.chk[static_cast<size_t>(k)], false) << "\n";
            }
        } else if (*curve_cmd) {
            SpectralCurve c = minimal_curve(m, parse_times(m, times_spec));
            out << "x(z) = z^2 - 2*u0\n";
            out << "y(z) = " << laurent_to_string(c.y_series()) << "\n";
        } else if (*corr_cmd) {
            Recursion rec(minimal_curve(m, parse_times(m, times_spec)));
            const CorrelatorForm& w = rec.correlator(g, n);
            if (json)
                out << correlator_json(w).dump() << "\n";
            else
                out << "W_" << n << "^(" << g << ") = " << correlator_text(w) << "\n";
        } else if (*fg_cmd) {
            Recursion rec(minimal_curve(m, parse_times(m, times_spec)));
            RatFunc F = rec.free_energy(g);
            if (json)
                out << ratfunc_to_json(F).dump() << "\n";
            else
                out << "F_" << g << " = " << ratfunc_to_string(F) << "\n";
        } else if (*lambda_cmd) {
            LambdaField f = lambda_field(minimal_curve(m, parse_times(m, times_spec)), j);
            out << "Lambda_" << j << "(z) = ";
            bool first = true;
            for (size_t k = 0; k < f.coef.size(); ++k) {
                if (f.coef[k].is_zero_fn()) continue;
                out << (first ? "" : " + ") << "(" << ratfunc_to_string(f.coef[k]) << ")*z^" << 2 * k + 1;
                first = false;
            }
            out << (first ? "0\n" : "\n");
        } else if (*dtj_cmd) {
            Recursion rec(minimal_curve(m, parse_times(m, times_spec)));
            CorrelatorForm w = rec.t_derivative(g, n, j);
            if (json)
                out << correlator_json(w).dump() << "\n";
            else
                out << correlator_text(w) << "\n";
        } else if (*bkw_cmd) {
            BkwExpansion bk = bkw_expansion(m, parse_times(m, times_spec), kmax);
            for (int k = 1; k <= kmax; ++k)
                out << "f_" << k << " = " << laurent_json_text(bk.f[static_cast<size_t>(k)], json) << "\n";
        } else if (*ktimes_cmd) {
            KontsevichTimes kt = kontsevich_times(m, parse_times(m, times_spec));
            for (int k = 0; k <= m; ++k)
                out << "tau_" << 2 * k + 3 << " = " << ratfunc_to_string(kt.tau[static_cast<size_t>(k)]) << "\n";
        } else if (*dualtimes_cmd) {
            DualTimes dt = dual_times(m, parse_times(m, times_spec), kmax);
            for (int k = 1; k <= kmax; ++k)
                out << "taut_" << k << " = " << ratfunc_to_string(dt.tau_tilde[static_cast<size_t>(k)]) << "\n";
        } else if (*psi_cmd) {
            std::vector<int> deg;
            std::stringstream ss(degrees_spec);
            std::string item;
            while (std::getline(ss, item, ',')) deg.push_back(std::stoi(item));
            if (deg.empty()) {
                err << "usage error: --degrees required\n";
                return 2;
            }
            IntersectionNumber v = psi_intersection(g, deg);
            if (!v.dimension_ok)
                out << "0 (dimension)\n";
            else
                out << rat_str(v.value) << "\n";
        } else if (*quad_cmd) {
            ClosedForm f = quad_closed_form(g);
            if (json)
                out << closed_form_json(f).dump() << "\n";
            else
                out << "fhat_" << g << " = " << closed_form_text(f) << "\n";
        } else if (*critical_cmd) {
            CriticalPotential cp = critical_potential(m);
            out << "m = " << cp.m << ", alpha = " << cp.alpha << ", s_c = " << cp.s_c << "\n";
            out << "T_{m+1} - T_m coefficients:";
            for (auto& c : cp.Tdiff) out << " " << rat_str(c);
            out << "\n";
        } else if (*dscale_cmd) {
            double sc = 1.0 / (12.0 * s4d);
            std::vector<double> seq;
            for (int i = 0; i < 12; ++i) seq.push_back(sc * (1.0 - 2e-3 * std::pow(0.5, i)));
            DScaleReport rep = double_scaling_check(2, s4d, seq);
            nlohmann::json r{{"exponent_fit", rep.exponent_fit},
                             {"prefactor", rep.prefactor},
                             {"reference", rep.reference},
                             {"rel_error", rep.rel_error}};
            out << r.dump() << "\n";
        } else if (*airy_cmd) {
            std::vector<double> grid;
            for (int i = 0; i < grid_n; ++i)
                grid.push_back(-2.0 + 4.0 * i / std::max(1, grid_n - 1));
            nlohmann::json r;
            r["grid"] = grid_n;
            double p0 = 0, p1 = 0, wd = 0;
            for (double t : {-1.0, 0.0, 1.0}) {
                for (double N : {1.0, 2.0}) {
                    LoopCheckReport a = loop_check(0, grid, t, N);
                    LoopCheckReport b = loop_check(1, grid, t, N);
                    p0 = std::max(p0, a.max_residual_P0);
                    p1 = std::max(p1, b.max_residual_P1);
                    wd = std::max(wd, a.wronskian_dev);
                }
            }
            r["max_residual_P0"] = p0;
            r["max_residual_P1"] = p1;
            r["wronskian_dev"] = wd;
            out << r.dump() << "\n";
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

int cli_main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return cli_dispatch(args, std::cout, std::cerr);
}

}  // namespace mmtool
