#include "hahnmeasure/instantiate.hpp"

#include <cmath>

#include "hahnmeasure/quadrature.hpp"

namespace hm {

double instantiate_expr(const Expr& e, const std::vector<double>& point, double tau0) {
    switch (e.kind()) {
        case ExprKind::Const:
            return e.const_value().instantiate(tau0);
        case ExprKind::Var:
            return point.at(e.var_index());
        case ExprKind::Add:
            return instantiate_expr(e.child(0), point, tau0) +
                   instantiate_expr(e.child(1), point, tau0);
        case ExprKind::Sub:
            return instantiate_expr(e.child(0), point, tau0) -
                   instantiate_expr(e.child(1), point, tau0);
        case ExprKind::Mul:
            return instantiate_expr(e.child(0), point, tau0) *
                   instantiate_expr(e.child(1), point, tau0);
        case ExprKind::Div:
            return instantiate_expr(e.child(0), point, tau0) /
                   instantiate_expr(e.child(1), point, tau0);
        case ExprKind::Neg:
            return -instantiate_expr(e.child(0), point, tau0);
        case ExprKind::PowQ: {
            double b = instantiate_expr(e.child(0), point, tau0);
            double q = e.pow_exponent().get_d();
            if (b < 0 && is_integer(e.pow_exponent()))
                return std::pow(b, static_cast<double>(e.pow_exponent().get_num().get_si()));
            return std::pow(b, q);
        }
        case ExprKind::Sqrt: {
            double b = instantiate_expr(e.child(0), point, tau0);
            return std::sqrt(std::max(0.0, b));
        }
        case ExprKind::Abs:
            return std::fabs(instantiate_expr(e.child(0), point, tau0));
        case ExprKind::Arctan:
            return std::atan(instantiate_expr(e.child(0), point, tau0));
        case ExprKind::Piecewise: {
            for (const auto& c : e.cases()) {
                bool all = true;
                for (const auto& [g, rel] : c.conds) {
                    double gv = instantiate_expr(g, point, tau0);
                    bool ok = false;
                    switch (rel) {
                        case Rel::LT: ok = gv < 0; break;
                        case Rel::LE: ok = gv <= 0; break;
                        case Rel::EQ: ok = gv == 0; break;
                        case Rel::GE: ok = gv >= 0; break;
                        case Rel::GT: ok = gv > 0; break;
                    }
                    if (!ok) {
                        all = false;
                        break;
                    }
                }
                if (all) return instantiate_expr(c.value, point, tau0);
            }
            return 0.0;
        }
    }
    return 0.0;
}

double numeric_set_integral(const Expr& e, const SetOneD& s, double tau0) {
    double acc = 0;
    SetOneD n = s.normalize();
    for (const auto& c : n.components()) {
        auto f = [&](double x) { return instantiate_expr(e, {x}, tau0); };
        if (c.lo.kind == Endpoint::Value && c.hi.kind == Endpoint::Value) {
            acc += quad_integrate(f, c.lo.value.instantiate(tau0),
                                  c.hi.value.instantiate(tau0));
        } else if (c.lo.kind == Endpoint::Value) {
            acc += quad_integrate_upper(f, c.lo.value.instantiate(tau0));
        } else if (c.hi.kind == Endpoint::Value) {
            acc += quad_integrate_lower(f, c.hi.value.instantiate(tau0));
        } else {
            acc += quad_integrate_line(f);
        }
    }
    return acc;
}

double numeric_region_integral(const Expr& e, const Region& r, double tau0) {
    // Plain implementation: walk the chain once, collecting bounds, then
    // integrate recursively from the outside in.
    std::vector<const Region*> chain;
    const Region* cur = &r;
    while (!cur->is_base()) {
        chain.push_back(cur);
        cur = &cur->inner();
    }
    const SetOneD base = cur->base_set().normalize();
    size_t dim = r.dimension();
    std::vector<double> point(dim, 0.0);
    // chain[k] corresponds to variable dim-1-k; base is variable 0.
    std::function<double(size_t)> level = [&](size_t varidx) -> double {
        if (varidx == 0) {
            double acc = 0;
            for (const auto& c : base.components()) {
                if (c.lo.kind != Endpoint::Value || c.hi.kind != Endpoint::Value)
                    throw domain_error(
                        "numeric region integration needs finite base components");
                acc += quad_integrate(
                    [&](double x) {
                        point[0] = x;
                        return level(1);
                    },
                    c.lo.value.instantiate(tau0), c.hi.value.instantiate(tau0), 1e-10);
            }
            return acc;
        }
        if (varidx == dim) return instantiate_expr(e, point, tau0);
        const Region* reg = chain[dim - 1 - varidx];
        double lo = instantiate_expr(reg->lower(), point, tau0);
        double hi = instantiate_expr(reg->upper(), point, tau0);
        return quad_integrate(
            [&](double y) {
                point[varidx] = y;
                return level(varidx + 1);
            },
            lo, hi, 1e-10);
    };
    // Integration proceeds from variable 0 outward.
    return level(0);
}

} // namespace hm
