#include <fstream>
#include <map>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "nkconf/incidence.hpp"

namespace nk {

using json = nlohmann::json;

static std::string num(double v) { return fmt::format("{:.17g}", v); }

static std::string quote(const std::string& s) { return json(s).dump(); }

std::string to_json(const Configuration& cfg) {
    std::string o;
    o += "{\n  \"k\": " + std::to_string(cfg.k) + ",\n  \"points\": [";
    for (std::size_t i = 0; i < cfg.points.size(); ++i) {
        const auto& p = cfg.points[i];
        o += (i ? ",\n    " : "\n    ");
        o += fmt::format("{{\"id\": {}, \"x\": {}, \"y\": {}, \"w\": {}}}", cfg.point_ids.at(i), num(p.x),
                         num(p.y), num(p.w));
    }
    o += cfg.points.empty() ? "],\n  \"lines\": [" : "\n  ],\n  \"lines\": [";
    for (std::size_t i = 0; i < cfg.lines.size(); ++i) {
        const auto& l = cfg.lines[i];
        o += (i ? ",\n    " : "\n    ");
        o += fmt::format("{{\"id\": {}, \"a\": {}, \"b\": {}, \"c\": {}}}", cfg.line_ids.at(i), num(l.a),
                         num(l.b), num(l.c));
    }
    o += cfg.lines.empty() ? "],\n  \"flags\": [" : "\n  ],\n  \"flags\": [";
    for (std::size_t i = 0; i < cfg.flags.size(); ++i) {
        auto [p, l] = cfg.flags[i];
        o += (i ? ", " : "");
        o += fmt::format("[{}, {}]", cfg.point_ids.at(p), cfg.line_ids.at(l));
    }
    o += "],\n  \"metadata\": {";
    const Metadata& m = cfg.meta;
    o += "\n    \"expr\": " + quote(m.expr);
    o += ",\n    \"flexible\": " + std::string(m.flexible ? "true" : "false");
    o += ",\n    \"flexible_lines\": [";
    for (std::size_t i = 0; i < m.flexible_lines.size(); ++i)
        o += (i ? ", " : "") + std::to_string(cfg.line_ids.at(m.flexible_lines[i]));
    o += "]";
    o += ",\n    \"central_symmetry\": " + std::string(m.central_symmetry ? "true" : "false");
    if (m.center)
        o += fmt::format(",\n    \"center\": [{}, {}, {}]", num(m.center->x), num(m.center->y), num(m.center->w));
    if (!m.extra_json.empty() && m.extra_json != "{}") {
        json extra = json::parse(m.extra_json);
        for (auto it = extra.begin(); it != extra.end(); ++it)
            o += ",\n    " + quote(it.key()) + ": " + it.value().dump();
    }
    o += "\n  }\n}\n";
    return o;
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object() || !obj.contains(key)) fail("ParseError", "missing field '" + std::string(key) + "' in " + where);
    return obj.at(key);
}

double real(const json& obj, const char* key, const std::string& where) {
    const json& v = field(obj, key, where);
    if (!v.is_number()) fail("ParseError", "field '" + std::string(key) + "' in " + where + " is not a number");
    return v.get<double>();
}

long long ident(const json& obj, const std::string& where) {
    const json& v = field(obj, "id", where);
    if (!v.is_number_integer()) fail("ParseError", "id in " + where + " is not an integer");
    return v.get<long long>();
}

}  // namespace

Configuration from_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail("ParseError", fmt::format("malformed JSON at byte {}: {}", e.byte, e.what()));
    }
    Configuration cfg;
    const json& kk = field(doc, "k", "document");
    if (!kk.is_number_integer()) fail("ParseError", "field 'k' is not an integer");
    cfg.k = kk.get<int>();
    std::map<long long, int> pidx, lidx;
    const json& pts = field(doc, "points", "document");
    if (!pts.is_array()) fail("ParseError", "'points' is not an array");
    for (std::size_t i = 0; i < pts.size(); ++i) {
        std::string where = "points[" + std::to_string(i) + "]";
        long long id = ident(pts[i], where);
        if (pidx.count(id)) fail("ParseError", "duplicate point id " + std::to_string(id));
        try {
            cfg.points.emplace_back(real(pts[i], "x", where), real(pts[i], "y", where), real(pts[i], "w", where));
        } catch (const Error& e) {
            if (e.kind() == "ParseError") throw;
            fail("ParseError", where + ": " + e.what());
        }
        pidx[id] = static_cast<int>(i);
        cfg.point_ids.push_back(id);
    }
    const json& lns = field(doc, "lines", "document");
    if (!lns.is_array()) fail("ParseError", "'lines' is not an array");
    for (std::size_t i = 0; i < lns.size(); ++i) {
        std::string where = "lines[" + std::to_string(i) + "]";
        long long id = ident(lns[i], where);
        if (lidx.count(id)) fail("ParseError", "duplicate line id " + std::to_string(id));
        try {
            cfg.lines.emplace_back(real(lns[i], "a", where), real(lns[i], "b", where), real(lns[i], "c", where));
        } catch (const Error& e) {
            if (e.kind() == "ParseError") throw;
            fail("ParseError", where + ": " + e.what());
        }
        lidx[id] = static_cast<int>(i);
        cfg.line_ids.push_back(id);
    }
    const json& fl = field(doc, "flags", "document");
    if (!fl.is_array()) fail("ParseError", "'flags' is not an array");
    for (std::size_t i = 0; i < fl.size(); ++i) {
        const json& f = fl[i];
        if (!f.is_array() || f.size() != 2 || !f[0].is_number_integer() || !f[1].is_number_integer())
            fail("ParseError", "flags[" + std::to_string(i) + "] is not an id pair");
        auto p = pidx.find(f[0].get<long long>());
        auto l = lidx.find(f[1].get<long long>());
        if (p == pidx.end() || l == lidx.end())
            fail("ParseError", "flags[" + std::to_string(i) + "] names an unknown id");
        cfg.flags.emplace_back(p->second, l->second);
    }
    json extra = json::object();
    if (doc.contains("metadata")) {
        const json& m = doc.at("metadata");
        if (!m.is_object()) fail("ParseError", "'metadata' is not an object");
        for (auto it = m.begin(); it != m.end(); ++it) {
            const std::string& key = it.key();
            const json& v = it.value();
            if (key == "expr") {
                if (!v.is_string()) fail("ParseError", "metadata.expr is not a string");
                cfg.meta.expr = v.get<std::string>();
                if (!cfg.meta.expr.empty()) parse_expr(cfg.meta.expr);
            } else if (key == "flexible") {
                if (!v.is_boolean()) fail("ParseError", "metadata.flexible is not a boolean");
                cfg.meta.flexible = v.get<bool>();
            } else if (key == "flexible_lines") {
                if (!v.is_array()) fail("ParseError", "metadata.flexible_lines is not an array");
                for (const auto& x : v) {
                    if (!x.is_number_integer() || !lidx.count(x.get<long long>()))
                        fail("ParseError", "metadata.flexible_lines names an unknown line");
                    cfg.meta.flexible_lines.push_back(lidx[x.get<long long>()]);
                }
            } else if (key == "central_symmetry") {
                if (!v.is_boolean()) fail("ParseError", "metadata.central_symmetry is not a boolean");
                cfg.meta.central_symmetry = v.get<bool>();
            } else if (key == "center") {
                if (!v.is_array() || v.size() != 3) fail("ParseError", "metadata.center is not a triple");
                cfg.meta.center = HomPoint(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
            } else {
                extra[key] = v;
            }
        }
    }
    cfg.meta.extra_json = extra.dump();
    cfg.tidy();
    return cfg;
}

Configuration load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("IOError", "cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return from_json(ss.str());
}

}  // namespace nk
