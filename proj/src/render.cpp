#include "hahnmeasure/render.hpp"

namespace hm {

std::string render_text(const Value& v) {
    if (auto* s = std::get_if<Series>(&v)) return s->str();
    return std::get<AlgebraElement>(v).str();
}

static Json exp_json(const Exponent& e) {
    Json coords = Json::array();
    for (const auto& q : e.coords()) coords.push_back(rat_string(q));
    return coords;
}

Json render_json(const Series& s) {
    Json terms = Json::array();
    for (const auto& t : s.terms()) {
        terms.push_back({{"exp", exp_json(t.exp)}, {"coeff", t.coeff.str()}});
    }
    Json j{{"type", "series"}, {"terms", terms}, {"text", s.str()}};
    j["precision"] = s.is_exact() ? Json("exact") : Json(s.known_below()->str());
    return j;
}

Json render_json(const AlgebraElement& a) {
    Json coeffs = Json::array();
    for (const auto& c : a.coeffs()) coeffs.push_back(render_json(c));
    return Json{{"type", "algebra"}, {"coeffs", coeffs}, {"text", a.str()}};
}

Json render_json(const Value& v) {
    if (auto* s = std::get_if<Series>(&v)) return render_json(*s);
    return render_json(std::get<AlgebraElement>(v));
}

Json render_json(const MeasureValue& m) {
    if (m.infinite) return Json{{"type", "infinite"}, {"text", "infinite"}};
    bool deg0 = true;
    for (size_t i = 1; i < m.value.coeffs().size(); ++i)
        if (!m.value.coeffs()[i].provably_zero()) deg0 = false;
    if (deg0) return render_json(m.value.coeff(0));
    return render_json(m.value);
}

} // namespace hm
