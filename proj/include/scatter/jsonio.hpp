// JSON formats for series, logs, diagrams, and solver reports. Rational
// values are carried as decimal strings {num, den} so round-trips are
// exact at any size; every reader validates shape and throws
// std::invalid_argument on malformed input.
#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "scatter/series.hpp"
#include "scatter/solver.hpp"
#include "scatter/wall.hpp"

namespace scatter {

using Json = nlohmann::json;

namespace jsondetail {

inline const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name))
        throw std::invalid_argument(std::string("missing field '") + name + "'");
    return j.at(name);
}

inline int int_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer())
        throw std::invalid_argument(std::string("field '") + name + "' must be an integer");
    return v.get<int>();
}

inline IVec ivec_field(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number_integer() ||
        !v[1].is_number_integer())
        throw std::invalid_argument(std::string("field '") + name +
                                    "' must be a pair of integers");
    return {v[0].get<long long>(), v[1].get<long long>()};
}

inline Json rat_json(const Rat& r) { return Json{{"num", num_str(r)}, {"den", den_str(r)}}; }

inline Rat rat_from(const Json& j) {
    const Json& n = field(j, "num");
    const Json& d = field(j, "den");
    if (!n.is_string() || !d.is_string())
        throw std::invalid_argument("rational num/den must be decimal strings");
    try {
        return rat_parse(n.get<std::string>(), d.get<std::string>());
    } catch (const std::exception&) {
        throw std::invalid_argument("malformed rational '" + n.get<std::string>() + "/" +
                                    d.get<std::string>() + "'");
    }
}

}  // namespace jsondetail

inline Json series_to_json(const TruncatedSeries& f) {
    Json terms = Json::array();
    for (const auto& [k, c] : f.terms()) {
        terms.push_back(Json{{"m", {k.m.x, k.m.y}},
                             {"j", k.j},
                             {"num", num_str(c)},
                             {"den", den_str(c)}});
    }
    return Json{{"order", f.order()}, {"terms", std::move(terms)}};
}

inline TruncatedSeries series_from_json(const Json& j) {
    using namespace jsondetail;
    TruncatedSeries f(int_field(j, "order"));
    const Json& terms = field(j, "terms");
    if (!terms.is_array()) throw std::invalid_argument("'terms' must be an array");
    for (const Json& t : terms) {
        Rat c = rat_from(Json{{"num", field(t, "num")}, {"den", field(t, "den")}});
        f.add_term(ivec_field(t, "m"), int_field(t, "j"), c);
    }
    return f;
}

// A log term t^j z^m d_n is written with n the primitive normal of the
// mode direction and a scalar rational coefficient; in rank 2 every
// payload perpendicular to m is such a multiple, so this loses nothing.
inline Json lie_to_json(const LieElement& e) {
    Json terms = Json::array();
    for (const auto& [k, payload] : e.terms()) {
        IVec pn = rot90(primitive_part(k.m).direction);
        Rat coeff = (pn.x != 0) ? payload.x / Rat(pn.x) : payload.y / Rat(pn.y);
        terms.push_back(Json{{"coeff", jsondetail::rat_json(coeff)},
                             {"m", {k.m.x, k.m.y}},
                             {"n", {jsondetail::rat_json(Rat(pn.x)), jsondetail::rat_json(Rat(pn.y))}},
                             {"j", k.j}});
    }
    return Json{{"order", e.order()}, {"terms", std::move(terms)}};
}

inline LieElement lie_from_json(const Json& j) {
    using namespace jsondetail;
    LieElement e(int_field(j, "order"));
    const Json& terms = field(j, "terms");
    if (!terms.is_array()) throw std::invalid_argument("'terms' must be an array");
    for (const Json& t : terms) {
        Rat coeff = rat_from(field(t, "coeff"));
        const Json& n = field(t, "n");
        if (!n.is_array() || n.size() != 2)
            throw std::invalid_argument("'n' must be a pair of rationals");
        QVec payload{coeff * rat_from(n[0]), coeff * rat_from(n[1])};
        e.add_term(ivec_field(t, "m"), payload, int_field(t, "j"));
    }
    return e;
}

inline Json wall_to_json(const Wall& w) {
    return Json{{"direction", {w.direction.x, w.direction.y}},
                {"support", w.support == Support::Line ? "line" : "ray"},
                {"log_theta", lie_to_json(w.log_theta)}};
}

inline Wall wall_from_json(const Json& j) {
    using namespace jsondetail;
    const Json& sup = field(j, "support");
    if (!sup.is_string() ||
        (sup.get<std::string>() != "line" && sup.get<std::string>() != "ray"))
        throw std::invalid_argument("'support' must be \"line\" or \"ray\"");
    Support s = sup.get<std::string>() == "line" ? Support::Line : Support::Ray;
    return Wall(ivec_field(j, "direction"), s, lie_from_json(field(j, "log_theta")));
}

inline Json diagram_to_json(const Diagram& d) {
    Json walls = Json::array();
    for (const Wall& w : d.walls) walls.push_back(wall_to_json(w));
    return Json{{"order", d.order}, {"walls", std::move(walls)}};
}

inline Diagram diagram_from_json(const Json& j) {
    using namespace jsondetail;
    Diagram d{int_field(j, "order"), {}};
    const Json& walls = field(j, "walls");
    if (!walls.is_array()) throw std::invalid_argument("'walls' must be an array");
    for (const Json& w : walls) {
        Wall parsed = wall_from_json(w);
        if (parsed.log_theta.order() != d.order)
            throw std::invalid_argument("wall log order disagrees with diagram order");
        d.walls.push_back(std::move(parsed));
    }
    return d;
}

inline Json report_to_json(const VerifyReport& rep) {
    Json per_tree = Json::array();
    for (const TreeRecord& rec : rep.assembled.per_tree) {
        per_tree.push_back(Json{{"tree", rec.tree->key},
                                {"m_T", {rec.eval.m_T.x, rec.eval.m_T.y}},
                                {"j_T", rec.eval.j_T},
                                {"chi", rec.eval.chi_sign},
                                {"measure", rec.measure},
                                {"error", rec.measure_error}});
    }
    Json out{{"order", rep.order},
             {"walls", diagram_to_json(rep.assembled.diagram)["walls"]},
             {"per_tree", std::move(per_tree)},
             {"ks_match", rep.ks_match},
             {"max_dev", rep.max_dev}};
    if (!rep.diagnostics.empty()) out["diagnostics"] = rep.diagnostics;
    return out;
}

}  // namespace scatter
