#pragma once

#include <json.hpp>

#include "hahnmeasure/parser.hpp"

namespace hm {

using Json = nlohmann::json;

std::string render_text(const Value& v);
Json render_json(const Series& s);
Json render_json(const AlgebraElement& a);
Json render_json(const Value& v);
Json render_json(const MeasureValue& m);

} // namespace hm
