#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "fixtures.hpp"
#include "qform.hpp"

namespace qfc {

// {"m": 4, "coefficients": [{"i": 1, "j": 1, "c": 1}, ...], "name": "..."}
inline QuadraticForm parse_form(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        fail(ErrorKind::Parse, std::string("form file: ") + e.what());
    }
    if (!doc.is_object()) fail(ErrorKind::Parse, "form file: top level must be an object");
    for (auto it = doc.begin(); it != doc.end(); ++it)
        if (it.key() != "m" && it.key() != "coefficients" && it.key() != "name")
            fail(ErrorKind::Parse, "form file: unknown field '" + it.key() + "'");
    if (!doc.contains("m") || !doc["m"].is_number_integer()) fail(ErrorKind::Parse, "form file: field 'm' must be an integer");
    if (!doc.contains("coefficients") || !doc["coefficients"].is_array())
        fail(ErrorKind::Parse, "form file: field 'coefficients' must be an array");
    std::vector<Coefficient> cs;
    size_t idx = 0;
    for (const auto& rec : doc["coefficients"]) {
        std::string where = "coefficients[" + std::to_string(idx++) + "]";
        if (!rec.is_object()) fail(ErrorKind::Parse, "form file: " + where + " must be an object");
        for (auto it = rec.begin(); it != rec.end(); ++it)
            if (it.key() != "i" && it.key() != "j" && it.key() != "c")
                fail(ErrorKind::Parse, "form file: " + where + " has unknown field '" + it.key() + "'");
        for (const char* f : {"i", "j", "c"})
            if (!rec.contains(f) || !rec[f].is_number_integer())
                fail(ErrorKind::Parse, "form file: " + where + "." + f + " must be an integer");
        cs.push_back({rec["i"].get<int>(), rec["j"].get<int>(), rec["c"].get<i64>()});
    }
    std::string name = doc.contains("name") && doc["name"].is_string() ? doc["name"].get<std::string>() : "";
    return build_form(doc["m"].get<int>(), cs, name);
}

// A path, or "builtin:<name>" for one of the fixture forms.
inline QuadraticForm load_form(const std::string& path) {
    if (path.rfind("builtin:", 0) == 0) return fixtures::by_name(path.substr(8));
    std::ifstream in(path);
    if (!in) fail(ErrorKind::Parse, "cannot open form file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_form(ss.str());
}

inline nlohmann::json form_to_json(const QuadraticForm& q) {
    nlohmann::json cs = nlohmann::json::array();
    for (const auto& c : q.coefficients()) cs.push_back({{"i", c.i}, {"j", c.j}, {"c", c.c}});
    nlohmann::json doc = {{"m", q.m()}, {"coefficients", cs}};
    if (!q.name().empty()) doc["name"] = q.name();
    return doc;
}

} // namespace qfc
