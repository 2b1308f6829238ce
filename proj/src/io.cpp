#include "torick/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "torick/errors.hpp"

namespace torick
{

void RunConfig::validate() const
{
    if (!(quad_tol > 0.0) || !(tau_a > 0.0) || !(tau_eq > 0.0)) {
        throw Error(ErrorKind::InvalidInput, "tolerances must be positive");
    }
}

Json to_json(const RunConfig& c)
{
    return Json{{"quad_tol", c.quad_tol}, {"tau_a", c.tau_a},   {"tau_eq", c.tau_eq},
                {"creases", c.creases},   {"seed", c.seed},      {"output", c.output}};
}

RunConfig run_config_from_json(const Json& j, RunConfig c)
{
    if (!j.is_object()) {
        throw Error(ErrorKind::InvalidInput, "config must be a JSON object");
    }
    try {
        for (const auto& [key, value] : j.items()) {
            if (key == "quad_tol") {
                c.quad_tol = value.get<double>();
            } else if (key == "tau_a") {
                c.tau_a = value.get<double>();
            } else if (key == "tau_eq") {
                c.tau_eq = value.get<double>();
            } else if (key == "creases") {
                c.creases = value.get<std::size_t>();
            } else if (key == "seed") {
                c.seed = value.get<std::uint64_t>();
            } else if (key == "output") {
                c.output = value.get<std::string>();
            } else {
                throw Error(ErrorKind::InvalidInput, "unknown config key '" + key + "'");
            }
        }
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, std::string("config: ") + e.what());
    }
    c.validate();
    return c;
}

namespace
{

double number(const Json& j, const char* what)
{
    if (!j.is_number()) {
        throw Error(ErrorKind::InvalidInput, std::string(what) + " must be a number");
    }
    return j.get<double>();
}

AffineMap2 affine_from_json(const Json& j, const char* what)
{
    if (j.is_object() && j.size() == 3 && j.contains("c0") && j.contains("c1") && j.contains("c2")) {
        return {number(j["c0"], what), number(j["c1"], what), number(j["c2"], what)};
    }
    if (!j.is_array() || j.size() != 3) {
        throw Error(ErrorKind::InvalidInput,
                    std::string(what) + " must be [c0, c1, c2] or {\"c0\", \"c1\", \"c2\"}");
    }
    return {number(j[0], what), number(j[1], what), number(j[2], what)};
}

}  // namespace

LabelledPolytope2 polytope_from_json(const Json& j)
{
    if (!j.is_object()) {
        throw Error(ErrorKind::InvalidInput, "polytope must be a JSON object");
    }
    if (j.contains("halfplanes")) {
        std::vector<AffineMap2> labels;
        for (const auto& l : j.at("halfplanes")) {
            labels.push_back(affine_from_json(l, "halfplane"));
        }
        return from_halfplanes(labels);
    }
    if (!j.contains("vertices") || !j.contains("labels")) {
        throw Error(ErrorKind::InvalidInput, "polytope needs \"vertices\" and \"labels\" (or \"halfplanes\")");
    }
    std::vector<Point2> vertices;
    for (const auto& v : j.at("vertices")) {
        if (!v.is_array() || v.size() != 2) {
            throw Error(ErrorKind::InvalidInput, "vertex must be [x, y]");
        }
        vertices.emplace_back(number(v[0], "vertex"), number(v[1], "vertex"));
    }
    std::vector<AffineMap2> labels;
    for (const auto& l : j.at("labels")) {
        labels.push_back(affine_from_json(l, "label"));
    }
    return {std::move(vertices), std::move(labels)};
}

LabelledPolytope2 read_polytope(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorKind::InvalidInput, "cannot open '" + path + "'");
    }
    Json j;
    try {
        in >> j;
    } catch (const Json::exception& e) {
        throw Error(ErrorKind::InvalidInput, path + ": " + e.what());
    }
    return polytope_from_json(j);
}

Json to_json(const LabelledPolytope2& p)
{
    Json v = Json::array();
    Json l = Json::array();
    for (std::size_t i = 0; i < p.size(); ++i) {
        v.push_back({p.vertex(i).x(), p.vertex(i).y()});
        const AffineMap2& L = p.labels()[i];
        l.push_back(to_json(L));
    }
    return Json{{"vertices", v}, {"labels", l}};
}

Json to_json(const AffineMap2& a)
{
    return Json{{"c0", a.c0}, {"c1", a.c1}, {"c2", a.c2}};
}

AffineMap2 parse_affine(const std::string& s)
{
    std::stringstream ss(s);
    std::string tok;
    std::vector<double> c;
    while (std::getline(ss, tok, ',')) {
        try {
            std::size_t used = 0;
            c.push_back(std::stod(tok, &used));
            if (tok.find_first_not_of(" \t", used) != std::string::npos) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw Error(ErrorKind::InvalidInput, "cannot parse '" + tok + "' in affine map '" + s + "'");
        }
    }
    if (c.size() != 3) {
        throw Error(ErrorKind::InvalidInput, "affine map needs c0,c1,c2, got '" + s + "'");
    }
    return {c[0], c[1], c[2]};
}

Json to_json(const ConditionASolution& s)
{
    Json j{{"f", to_json(s.f)},
           {"residual_a", s.residual_a},
           {"positive_on_polytope", s.positive_on_polytope},
           {"start_index", s.start_index},
           {"iterations", s.iterations}};
    if (s.matched_family) {
        const auto& m = *s.matched_family;
        Json mj{{"id", to_string(m.id)}, {"sign", m.sign}, {"distance", m.distance}};
        if (m.b) {
            mj["b"] = *m.b;
        }
        j["matched_family"] = mj;
    } else {
        j["matched_family"] = nullptr;
    }
    return j;
}

Json to_json(const CreaseScanReport& r, bool include_values)
{
    Json j{{"count", r.values.size()},
           {"minimum", r.minimum},
           {"violations", r.violations},
           {"zeta", to_json(r.zeta)}};
    if (!r.values.empty()) {
        j["argmin_crease"] = to_json(r.creases[r.argmin].ell);
    }
    if (include_values) {
        j["values"] = r.values;
    }
    return j;
}

namespace
{

void write_string(std::string& out, const std::string& s)
{
    // nlohmann's escaping, reused through a one-element dump.
    out += Json(s).dump();
}

void write(std::string& out, const Json& j, int indent)
{
    const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
    const std::string inner(static_cast<std::size_t>(indent + 1) * 2, ' ');
    switch (j.type()) {
        case Json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            if (j.size() <= 3 && std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
                out += "{";
                for (auto it = j.begin(); it != j.end(); ++it) {
                    if (it != j.begin()) {
                        out += ", ";
                    }
                    write_string(out, it.key());
                    out += ": ";
                    write(out, it.value(), indent + 1);
                }
                out += "}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",\n";
                }
                first = false;
                out += inner;
                write_string(out, it.key());
                out += ": ";
                write(out, it.value(), indent + 1);
            }
            out += "\n" + pad + "}";
            return;
        }
        case Json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
            out += flat ? "[" : "[\n";
            bool first = true;
            for (const auto& e : j) {
                if (!first) {
                    out += flat ? ", " : ",\n";
                }
                first = false;
                if (!flat) {
                    out += inner;
                }
                write(out, e, indent + 1);
            }
            out += flat ? "]" : "\n" + pad + "]";
            return;
        }
        case Json::value_t::number_float: {
            const double v = j.get<double>();
            if (!std::isfinite(v)) {
                out += "null";
                return;
            }
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.17g", v == 0.0 ? 0.0 : v);
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

void flatten(const Json& j, const std::string& path, std::vector<std::pair<std::string, std::string>>& rows)
{
    if (j.is_object()) {
        for (auto it = j.begin(); it != j.end(); ++it) {
            flatten(it.value(), path.empty() ? it.key() : path + "." + it.key(), rows);
        }
    } else if (j.is_array() && !std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); })) {
        for (std::size_t i = 0; i < j.size(); ++i) {
            flatten(j[i], path + "[" + std::to_string(i) + "]", rows);
        }
    } else {
        std::string v;
        write(v, j, 0);
        rows.emplace_back(path, v);
    }
}

}  // namespace

std::string dump(const Json& j)
{
    std::string out;
    write(out, j, 0);
    out += "\n";
    return out;
}

std::string render_human(const Json& j)
{
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(j, "", rows);
    std::size_t width = 0;
    for (const auto& r : rows) {
        width = std::max(width, r.first.size());
    }
    std::string out;
    for (const auto& [k, v] : rows) {
        out += k + std::string(width - k.size() + 2, ' ') + v + "\n";
    }
    return out;
}

}  // namespace torick
