#include "hahnmeasure/driver.hpp"

#include <cmath>
#include <cstdlib>
#include <sstream>

#include "hahnmeasure/instantiate.hpp"

namespace hm {

namespace {

struct Options {
    Rat precision = Rat(8);
    unsigned const_bits = 256;
    GroupPtr group = ExponentGroup::rationals();
    bool json = false;
    Rat oracle_tau = Rat(1, 1000);
    bool with_oracle = false;
};

struct Usage {
    std::string message;
};

Rat parse_rat_arg(const std::string& s) {
    size_t slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rat(Int(s));
        Rat q(Int(s.substr(0, slash)), Int(s.substr(slash + 1)));
        q.canonicalize();
        return q;
    } catch (...) {
        throw Usage{"expected a rational number, got '" + s + "'"};
    }
}

// Pull global flags out of the argument list; returns the rest.
std::vector<std::string> extract_options(std::vector<std::string> args, Options& opt) {
    std::vector<std::string> rest;
    auto need_value = [&](size_t& i, const std::string& flag) -> std::string {
        if (i + 1 >= args.size()) throw Usage{flag + " needs a value"};
        return args[++i];
    };
    for (size_t i = 0; i < args.size(); ++i) {
        const std::string& a = args[i];
        if (a == "--precision") {
            opt.precision = parse_rat_arg(need_value(i, a));
        } else if (a == "--const-bits") {
            opt.const_bits = static_cast<unsigned>(std::stoul(need_value(i, a)));
        } else if (a == "--group") {
            opt.group = parse_group(need_value(i, a));
        } else if (a == "--format") {
            std::string v = need_value(i, a);
            if (v == "json")
                opt.json = true;
            else if (v == "text")
                opt.json = false;
            else
                throw Usage{"--format expects json or text"};
        } else if (a == "--oracle-tau" || a == "--tau") {
            opt.oracle_tau = parse_rat_arg(need_value(i, a));
        } else if (a == "--oracle") {
            opt.with_oracle = true;
        } else {
            rest.push_back(a);
        }
    }
    return rest;
}

std::string flag_value(std::vector<std::string>& args, const std::string& flag,
                       std::optional<std::string> fallback = std::nullopt) {
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == flag) {
            std::string v = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
            return v;
        }
    }
    if (fallback) return *fallback;
    throw Usage{"missing " + flag};
}

std::optional<std::string> flag_value_opt(std::vector<std::string>& args,
                                          const std::string& flag) {
    for (size_t i = 0; i + 1 < args.size(); ++i) {
        if (args[i] == flag) {
            std::string v = args[i + 1];
            args.erase(args.begin() + static_cast<long>(i),
                       args.begin() + static_cast<long>(i) + 2);
            return v;
        }
    }
    return std::nullopt;
}

bool looks_like_region(const std::string& s) {
    return s.find(" in ") != std::string::npos || s.rfind("region", 0) == 0;
}

Json ok_json(const std::string& command) {
    return Json{{"schema", 1}, {"command", command}, {"status", "ok"}};
}

std::string finish(const Options& opt, Json j, const std::string& text) {
    if (opt.json) return j.dump(2) + "\n";
    return text + "\n";
}

// Reported result precision: "exact" or the tightest KnownBelow bound among
// the coefficients.
std::string value_precision(const MeasureValue& m) {
    if (m.infinite) return "exact";
    std::optional<Exponent> kb;
    for (const auto& coeff : m.value.coeffs()) {
        if (coeff.is_exact()) continue;
        if (!kb || compare(*coeff.known_below(), *kb) == Cmp::Less)
            kb = coeff.known_below();
    }
    return kb ? kb->str() : std::string("exact");
}

size_t value_degree(const MeasureValue& m) {
    if (m.infinite || m.value.provably_zero()) return 0;
    try {
        return m.value.degree();
    } catch (const error&) {
        return m.value.degree_bound();
    }
}

// --- oracle -----------------------------------------------------------------

struct OracleOutcome {
    bool available = false;
    double symbolic = 0;
    double numeric = 0;
    double rel_err = 0;
};

OracleOutcome oracle_for_set_integral(const MeasureValue& m, const Expr& e, const SetOneD& s,
                                      const Options& opt) {
    OracleOutcome o;
    if (m.infinite) return o;
    double tau0 = opt.oracle_tau.get_d();
    o.symbolic = m.value.instantiate(tau0);
    o.numeric = numeric_set_integral(e, s, tau0);
    o.rel_err = std::fabs(o.symbolic - o.numeric) /
                std::max({1e-300, std::fabs(o.symbolic), std::fabs(o.numeric)});
    o.available = true;
    return o;
}

OracleOutcome oracle_for_region_integral(const MeasureValue& m, const Expr& e, const Region& r,
                                         const Options& opt) {
    OracleOutcome o;
    if (m.infinite) return o;
    double tau0 = opt.oracle_tau.get_d();
    o.symbolic = m.value.instantiate(tau0);
    o.numeric = numeric_region_integral(e, r, tau0);
    o.rel_err = std::fabs(o.symbolic - o.numeric) /
                std::max({1e-300, std::fabs(o.symbolic), std::fabs(o.numeric)});
    o.available = true;
    return o;
}

Json oracle_json(const OracleOutcome& o, const Options& opt) {
    return Json{{"tau0", rat_string(opt.oracle_tau)},
                {"symbolic", o.symbolic},
                {"numeric", o.numeric},
                {"rel_err", o.rel_err}};
}

// --- commands -----------------------------------------------------------------

std::string cmd_eval(std::vector<std::string> args, const Options& opt) {
    if (args.size() != 1) throw Usage{"eval EXPR"};
    ParseContext ctx{opt.group, {}};
    Value v = parse_value(args[0], ctx);
    Json j = ok_json("eval");
    j["value"] = render_json(v);
    return finish(opt, j, render_text(v));
}

std::string cmd_measure(std::vector<std::string> args, const Options& opt) {
    if (args.size() != 1) throw Usage{"measure SET_OR_REGION"};
    ParseContext ctx{opt.group, {}};
    Json j = ok_json("measure");
    MeasureValue m;
    OracleOutcome oc;
    if (looks_like_region(args[0])) {
        Region r = parse_region(args[0], ctx);
        m = measure_region(r);
        j["dimension"] = r.dimension();
        if (opt.with_oracle)
            oc = oracle_for_region_integral(m, Expr::rational(Rat(1), opt.group), r, opt);
    } else {
        SetOneD s = parse_set(args[0], ctx);
        m = measure_1d(s);
        j["dimension"] = 1;
        if (opt.with_oracle)
            oc = oracle_for_set_integral(m, Expr::rational(Rat(1), opt.group), s, opt);
    }
    j["value"] = render_json(m);
    j["precision"] = value_precision(m);
    if (!m.infinite) j["degree"] = value_degree(m);
    if (oc.available) j["oracle_check"] = oracle_json(oc, opt);
    std::string text = m.str();
    if (oc.available) text += "  (oracle rel_err " + std::to_string(oc.rel_err) + ")";
    return finish(opt, j, text);
}

std::string cmd_integrate(std::vector<std::string> args, const Options& opt) {
    // integrate EXPR [on] SET_OR_REGION
    if (!args.empty() && args.size() == 3 && args[1] == "on") args.erase(args.begin() + 1);
    if (args.size() != 2) throw Usage{"integrate EXPR on SET_OR_REGION"};
    ParseContext ctx{opt.group, {}};
    Json j = ok_json("integrate");
    MeasureValue m;
    OracleOutcome oc;
    if (looks_like_region(args[1])) {
        Region r = parse_region(args[1], ctx);
        // region variables are bound; the integrand uses them by name
        Expr e = parse_expr(args[0], ctx);
        m = integrate_region(e, r);
        j["dimension"] = r.dimension();
        if (opt.with_oracle) oc = oracle_for_region_integral(m, e, r, opt);
    } else {
        Expr e = parse_expr(args[0], ctx);
        SetOneD s = parse_set(args[1], ctx);
        AlgebraElement acc(opt.group);
        bool infinite = false;
        SetOneD n = s.normalize();
        for (const auto& c : n.components()) {
            MeasureValue piece = integrate_interval(e, c.lo, c.hi, 0);
            if (piece.infinite) infinite = true;
            else acc = acc + piece.value;
        }
        m = MeasureValue{infinite, acc};
        j["dimension"] = 1;
        if (opt.with_oracle) oc = oracle_for_set_integral(m, e, s, opt);
    }
    j["value"] = render_json(m);
    j["precision"] = value_precision(m);
    if (!m.infinite) j["degree"] = value_degree(m);
    if (oc.available) j["oracle_check"] = oracle_json(oc, opt);
    std::string text = m.str();
    if (oc.available) text += "  (oracle rel_err " + std::to_string(oc.rel_err) + ")";
    return finish(opt, j, text);
}

std::string cmd_antideriv(std::vector<std::string> args, const Options& opt) {
    auto var = flag_value_opt(args, "--var");
    if (args.size() != 1) throw Usage{"antideriv EXPR [--var NAME]"};
    ParseContext ctx{opt.group, {}};
    if (var) ctx.variables.push_back(*var);
    Expr e = parse_expr(args[0], ctx);
    ConstructibleExpr F = antiderivative(e, 0);
    Json j = ok_json("antideriv");
    j["value"] = Json{{"type", "constructible"}, {"text", F.str(ctx.variables)}};
    return finish(opt, j, F.str(ctx.variables));
}

std::string cmd_limit(std::vector<std::string> args, const Options& opt) {
    std::string at = flag_value(args, "--at", std::string("inf"));
    std::string side = flag_value(args, "--side", std::string("right"));
    if (args.size() != 1) throw Usage{"limit --at inf|POINT [--side left|right] EXPR"};
    ParseContext ctx{opt.group, {}};
    ConstructibleExpr f = parse_constructible(args[0], ctx);
    LimitResult r;
    if (at == "inf" || at == "+inf" || at == "infinity") {
        r = limit_at_infinity(f, 0);
    } else {
        Series a = parse_series(at, ctx);
        r = limit_at_point(f, a, side == "left" ? Side::Left : Side::Right, 0);
    }
    Json j = ok_json("limit");
    std::string text;
    switch (r.kind) {
        case LimitResult::Finite:
            j["value"] = render_json(r.value);
            text = r.value.str();
            break;
        case LimitResult::PlusInfinity:
            j["value"] = Json{{"type", "infinite"}, {"text", "+infinity"}};
            text = "+infinity";
            break;
        case LimitResult::MinusInfinity:
            j["value"] = Json{{"type", "infinite"}, {"text", "-infinity"}};
            text = "-infinity";
            break;
        case LimitResult::NoLimit:
            j["value"] = Json{{"type", "no-limit"}, {"text", "no-limit"}};
            text = "no-limit";
            break;
    }
    return finish(opt, j, text);
}

std::string cmd_convolve(std::vector<std::string> args, const Options& opt) {
    std::string h_text = flag_value(args, "--h");
    if (args.size() != 1) throw Usage{"convolve --h SERIES PIECES"};
    ParseContext ctx{opt.group, {}};
    Series h = parse_series(h_text, ctx);
    ParseContext pctx{opt.group, {"x"}};
    PiecewisePoly g = parse_pieces(args[0], pctx);
    ConstructibleExpr S = convolve(g, h);
    Json j = ok_json("convolve");
    j["value"] = Json{{"type", "constructible"}, {"text", S.str({"x"})}};
    return finish(opt, j, S.str({"x"}));
}

std::string cmd_coeffs(std::vector<std::string> args, const Options& opt) {
    std::string iv = flag_value(args, "--interval");
    if (args.size() != 1) throw Usage{"coeffs --interval [a,b] EXPR"};
    ParseContext ctx{opt.group, {}};
    SetOneD k = parse_set(iv, ctx);
    if (k.components().size() != 1 || !k.components()[0].lo.finite() ||
        !k.components()[0].hi.finite())
        throw Usage{"--interval expects a single bounded interval"};
    ConstructibleExpr f = parse_constructible(args[0], ctx);
    auto hs = extract_coefficients(f, k.components()[0].lo.value, k.components()[0].hi.value);
    Json j = ok_json("coeffs");
    Json arr = Json::array();
    std::string text;
    for (size_t i = 0; i < hs.size(); ++i) {
        arr.push_back(hs[i].str(ctx.variables));
        text += "h" + std::to_string(i) + " = " + hs[i].str(ctx.variables);
        if (i + 1 < hs.size()) text += "\n";
    }
    j["value"] = Json{{"type", "coefficients"}, {"coeffs", arr}};
    return finish(opt, j, text);
}

std::string cmd_compare(std::vector<std::string> args, const Options& opt) {
    if (args.size() != 2) throw Usage{"compare A B"};
    ParseContext ctx{opt.group, {}};
    Value a = parse_value(args[0], ctx);
    Value b = parse_value(args[1], ctx);
    auto alg = [&](const Value& v) {
        if (auto* s = std::get_if<Series>(&v)) return AlgebraElement(*s);
        return std::get<AlgebraElement>(v);
    };
    Cmp c = compare(alg(a), alg(b), opt.const_bits);
    std::string text = c == Cmp::Less ? "less" : (c == Cmp::Greater ? "greater" : "equal");
    Json j = ok_json("compare");
    j["value"] = text;
    return finish(opt, j, text);
}

std::string cmd_stdpart(std::vector<std::string> args, const Options& opt) {
    if (args.size() != 1) throw Usage{"stdpart EXPR"};
    ParseContext ctx{opt.group, {}};
    Value v = parse_value(args[0], ctx);
    auto st = std::holds_alternative<Series>(v)
                  ? std::get<Series>(v).standard_part()
                  : std::get<AlgebraElement>(v).standard_part();
    Json j = ok_json("stdpart");
    std::string text = st.infinite ? "infinite" : st.value.str();
    j["value"] = text;
    return finish(opt, j, text);
}

std::string cmd_transform_check(std::vector<std::string> args, const Options& opt) {
    std::string phi_text = flag_value(args, "--phi");
    std::string f_text = flag_value(args, "--f");
    std::string on_text = flag_value(args, "--on");
    if (!args.empty()) throw Usage{"transform-check --phi EXPR --f EXPR --on SET"};
    ParseContext ctx{opt.group, {"x"}};
    Expr phi = parse_expr(phi_text, ctx);
    Expr f = parse_expr(f_text, ctx);
    SetOneD U = parse_set(on_text, ctx);
    auto r = check_transformation(phi, f, U);
    Json j = ok_json("transform-check");
    j["value"] = Json{{"lhs", render_json(r.lhs)},
                      {"rhs", render_json(r.rhs)},
                      {"equal", r.equal}};
    std::string text = "lhs = " + r.lhs.str() + "\nrhs = " + r.rhs.str() + "\n" +
                       (r.equal ? "equal" : "NOT equal");
    return finish(opt, j, text);
}

std::string cmd_iso(std::vector<std::string> args, const Options& opt) {
    std::string spec = flag_value(args, "--section");
    if (!args.empty()) throw Usage{"iso --section \"IMG -> IMG'\""};
    size_t arrow = spec.find("->");
    if (arrow == std::string::npos) throw Usage{"--section expects \"IMG -> IMG'\""};
    ParseContext ctx{opt.group, {}};
    Series img_a = parse_series(spec.substr(0, arrow), ctx);
    Series img_b = parse_series(spec.substr(arrow + 2), ctx);
    Section sa(opt.group, {img_a});
    Section sb(opt.group, {img_b});
    AlgebraMap phi = build_isomorphism_Q(sa, sb);
    Json j = ok_json("iso");
    j["value"] = Json{{"type", "map"}, {"X", render_json(phi.x_image())}};
    return finish(opt, j, "X -> " + phi.x_image().str());
}

std::string cmd_witness_rank2(std::vector<std::string> args, const Options& opt) {
    std::string zeta_text = flag_value(args, "--zeta");
    std::string unit_text = flag_value(args, "--unit");
    if (!args.empty()) throw Usage{"witness-rank2 --zeta CONST --unit SERIES"};
    Constant zeta = parse_constant(zeta_text);
    ParseContext ctx{ExponentGroup::rationals(), {}};
    Series unit = parse_series(unit_text, ctx);
    auto rep = verify_nonisomorphism_rank2(zeta, unit);
    Json j = ok_json("witness-rank2");
    j["value"] = Json{{"alpha", Json::array({render_json(rep.alpha_A), render_json(rep.alpha_B)})},
                      {"beta", Json::array({render_json(rep.beta_A), render_json(rep.beta_B)})},
                      {"g", render_json(rep.g)},
                      {"verdict", rep.non_isomorphic ? "non-isomorphic" : "inconclusive"}};
    std::string text = "alpha: (" + rep.alpha_A.str() + ", " + rep.alpha_B.str() + ")\n" +
                       "beta:  (" + rep.beta_A.str() + ", " + rep.beta_B.str() + ")\n" +
                       "g = " + rep.g.str() + "\n" +
                       (rep.non_isomorphic ? "non-isomorphic" : "inconclusive") + ": " +
                       rep.explanation;
    return finish(opt, j, text);
}

std::string dispatch(const std::string& cmd, std::vector<std::string> args, Options& opt) {
    if (cmd == "eval") return cmd_eval(std::move(args), opt);
    if (cmd == "measure") return cmd_measure(std::move(args), opt);
    if (cmd == "integrate") return cmd_integrate(std::move(args), opt);
    if (cmd == "antideriv") return cmd_antideriv(std::move(args), opt);
    if (cmd == "limit") return cmd_limit(std::move(args), opt);
    if (cmd == "convolve") return cmd_convolve(std::move(args), opt);
    if (cmd == "coeffs") return cmd_coeffs(std::move(args), opt);
    if (cmd == "compare") return cmd_compare(std::move(args), opt);
    if (cmd == "stdpart") return cmd_stdpart(std::move(args), opt);
    if (cmd == "transform-check") return cmd_transform_check(std::move(args), opt);
    if (cmd == "iso") return cmd_iso(std::move(args), opt);
    if (cmd == "witness-rank2") return cmd_witness_rank2(std::move(args), opt);
    if (cmd == "oracle") {
        // oracle SUBCOMMAND ... : rerun with the numeric check attached
        if (args.empty()) throw Usage{"oracle SUBCOMMAND ..."};
        std::string sub = args.front();
        args.erase(args.begin());
        if (sub != "integrate" && sub != "measure")
            throw domain_error("oracle unavailable: no real instantiation for '" + sub + "'");
        opt.with_oracle = true;
        return dispatch(sub, std::move(args), opt);
    }
    throw Usage{"unknown command '" + cmd + "'"};
}

const char* kUsage =
    "usage: hm [--precision Q] [--const-bits N] [--group G] [--format text|json]\n"
    "          [--oracle] [--oracle-tau Q] COMMAND ARGS...\n"
    "commands:\n"
    "  eval EXPR                         evaluate a closed series/algebra expression\n"
    "  measure SET|REGION                Lebesgue measure\n"
    "  integrate EXPR on SET|REGION      Lebesgue integral\n"
    "  antideriv EXPR [--var NAME]       symbolic antiderivative\n"
    "  limit [--at inf|POINT] [--side left|right] EXPR\n"
    "  convolve --h SERIES PIECES        Cauchy-kernel smoothing S_h g\n"
    "  coeffs --interval [a,b] EXPR      X-coefficient functions on [a,b]\n"
    "  compare A B                       order two values\n"
    "  stdpart EXPR                      standard part\n"
    "  transform-check --phi E --f E --on SET\n"
    "  iso --section \"IMG -> IMG'\"       Lebesgue isomorphism for Gamma = Q\n"
    "  witness-rank2 --zeta C --unit S   rank-2 non-uniqueness witness\n"
    "  oracle integrate|measure ...      rerun with the numeric oracle attached\n";

} // namespace

DriverResult run_command(const std::vector<std::string>& argv) {
    Options opt;
    if (const char* env = std::getenv("HM_PRECISION")) {
        try {
            opt.precision = parse_rat_arg(env);
        } catch (...) {
        }
    }
    try {
        std::vector<std::string> args = extract_options(argv, opt);
        if (args.empty()) return {1, kUsage};
        set_default_precision_units(opt.precision);
        Constant::set_default_budget(opt.const_bits);
        std::string cmd = args.front();
        args.erase(args.begin());
        if (cmd == "help" || cmd == "--help" || cmd == "-h") return {0, kUsage};
        return {0, dispatch(cmd, std::move(args), opt)};
    } catch (const Usage& u) {
        return {1, "usage error: " + u.message + "\n"};
    } catch (const syntax_error& e) {
        return {1, std::string("syntax error: ") + e.what() + "\n"};
    } catch (const precision_exhausted& e) {
        return {3, std::string("precision exhausted: ") + e.what() + "\n"};
    } catch (const unsupported_integrand& e) {
        return {2, std::string("unsupported integrand: ") + e.what() + "\n"};
    } catch (const divergent_integral& e) {
        return {2, std::string("divergent integral: ") + e.what() + "\n"};
    } catch (const domain_error& e) {
        return {2, std::string("domain error: ") + e.what() + "\n"};
    } catch (const error& e) {
        return {2, std::string("error: ") + e.what() + "\n"};
    }
}

} // namespace hm
