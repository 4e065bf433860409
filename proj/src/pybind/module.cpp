#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "hahnmeasure/driver.hpp"
#include "hahnmeasure/instantiate.hpp"

namespace py = pybind11;
using namespace hm;

namespace {

ParseContext default_ctx() { return ParseContext{ExponentGroup::rationals(), {}}; }

AlgebraElement to_algebra(const Value& v) {
    if (auto* s = std::get_if<Series>(&v)) return AlgebraElement(*s);
    return std::get<AlgebraElement>(v);
}

py::object stdpart_py(const AlgebraElement& a) {
    auto st = a.standard_part();
    if (st.infinite) return py::cast(std::string("infinite"));
    return py::cast(st.value.str());
}

} // namespace

PYBIND11_MODULE(_hahnmeasure, m) {
    m.doc() = "Exact Lebesgue measure and integration on Puiseux/Hahn series fields";

    py::register_exception<precision_exhausted>(m, "PrecisionExhausted");
    py::register_exception<unsupported_integrand>(m, "UnsupportedIntegrand");
    py::register_exception<divergent_integral>(m, "DivergentIntegral");
    py::register_exception<syntax_error>(m, "SyntaxError");
    py::register_exception<domain_error>(m, "DomainError");

    py::class_<AlgebraElement>(m, "AlgebraElement")
        .def("__str__", &AlgebraElement::str)
        .def("__repr__", &AlgebraElement::str)
        .def("__add__",
             [](const AlgebraElement& a, const AlgebraElement& b) { return a + b; })
        .def("__sub__",
             [](const AlgebraElement& a, const AlgebraElement& b) { return a - b; })
        .def("__mul__",
             [](const AlgebraElement& a, const AlgebraElement& b) { return a * b; })
        .def("__neg__", [](const AlgebraElement& a) { return -a; })
        .def("__eq__",
             [](const AlgebraElement& a, const AlgebraElement& b) { return a == b; })
        .def("degree",
             [](const AlgebraElement& a) -> py::object {
                 if (a.provably_zero()) return py::none();
                 return py::cast(a.degree());
             })
        .def("standard_part", &stdpart_py)
        .def("instantiate", &AlgebraElement::instantiate, py::arg("tau0"),
             "Numeric value with t := tau0, X := log(1/tau0)")
        .def("coefficient", [](const AlgebraElement& a, size_t i) {
            return AlgebraElement(a.coeff(i));
        });

    m.def(
        "value",
        [](const std::string& text) {
            ParseContext ctx = default_ctx();
            return to_algebra(parse_value(text, ctx));
        },
        py::arg("text"), "Parse a closed series/algebra expression, e.g. 't^(-1) + 2'");

    m.def(
        "compare",
        [](const std::string& a, const std::string& b) {
            ParseContext ctx = default_ctx();
            Cmp c = compare(to_algebra(parse_value(a, ctx)), to_algebra(parse_value(b, ctx)));
            return c == Cmp::Less ? "less" : (c == Cmp::Greater ? "greater" : "equal");
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "measure",
        [](const std::string& set_or_region) -> py::object {
            ParseContext ctx = default_ctx();
            MeasureValue mv;
            if (set_or_region.find(" in ") != std::string::npos ||
                set_or_region.rfind("region", 0) == 0) {
                Region r = parse_region(set_or_region, ctx);
                mv = measure_region(r);
            } else {
                mv = measure_1d(parse_set(set_or_region, ctx));
            }
            if (mv.infinite) return py::cast(std::string("infinite"));
            return py::cast(mv.value);
        },
        py::arg("set_or_region"), "Lebesgue measure of a set or cylindrical region");

    m.def(
        "integrate",
        [](const std::string& expr, const std::string& domain) -> py::object {
            ParseContext ctx = default_ctx();
            MeasureValue mv;
            if (domain.find(" in ") != std::string::npos || domain.rfind("region", 0) == 0) {
                Region r = parse_region(domain, ctx);
                Expr e = parse_expr(expr, ctx);
                mv = integrate_region(e, r);
            } else {
                Expr e = parse_expr(expr, ctx);
                SetOneD s = parse_set(domain, ctx);
                AlgebraElement acc(ctx.group);
                bool infinite = false;
                SetOneD n = s.normalize();
                for (const auto& c : n.components()) {
                    MeasureValue piece = integrate_interval(e, c.lo, c.hi, 0);
                    if (piece.infinite) infinite = true;
                    else acc = acc + piece.value;
                }
                mv = {infinite, acc};
            }
            if (mv.infinite) return py::cast(std::string("infinite"));
            return py::cast(mv.value);
        },
        py::arg("expr"), py::arg("domain"));

    m.def(
        "antiderivative",
        [](const std::string& expr) {
            ParseContext ctx = default_ctx();
            Expr e = parse_expr(expr, ctx);
            return antiderivative(e, 0).str(ctx.variables);
        },
        py::arg("expr"));

    m.def(
        "limit",
        [](const std::string& expr, const std::string& at,
           const std::string& side) -> py::object {
            ParseContext ctx = default_ctx();
            ConstructibleExpr f = parse_constructible(expr, ctx);
            LimitResult r;
            if (at == "inf" || at == "+inf" || at == "infinity") {
                r = limit_at_infinity(f, 0);
            } else {
                Series a = parse_series(at, ctx);
                r = limit_at_point(f, a, side == "left" ? Side::Left : Side::Right, 0);
            }
            switch (r.kind) {
                case LimitResult::Finite:
                    return py::cast(r.value);
                case LimitResult::PlusInfinity:
                    return py::cast(std::string("+infinity"));
                case LimitResult::MinusInfinity:
                    return py::cast(std::string("-infinity"));
                case LimitResult::NoLimit:
                    return py::cast(std::string("no-limit"));
            }
            return py::none();
        },
        py::arg("expr"), py::arg("at") = "inf", py::arg("side") = "right");

    m.def(
        "standard_part",
        [](const std::string& text) {
            ParseContext ctx = default_ctx();
            return stdpart_py(to_algebra(parse_value(text, ctx)));
        },
        py::arg("text"));

    m.def(
        "run",
        [](const std::vector<std::string>& args) {
            DriverResult r = run_command(args);
            return py::make_tuple(r.exit_code, r.output);
        },
        py::arg("args"), "Run a CLI command; returns (exit_code, output)");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
