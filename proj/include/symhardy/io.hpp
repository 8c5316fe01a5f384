#pragma once

// JSON forms of states, spectra and settings. Complex numbers are
// [re, im] pairs, angles are radians, keys are snake_case.
//
// State spec, exactly one of:
//   {"named": {"name": "ghz", "n": 3}}            (k for "dicke")
//   {"dicke_coeffs": [[1, 0], [0, 0], [1, 0]]}
//   {"majorana_points": [{"bloch": [t, phi], "deg": 2},
//                        {"qubit": [[re, im], [re, im]], "deg": 1}]}
// Settings file, either per party or shared:
//   {"parties": [{"setting0": [t, phi], "setting1": [t, phi]}, ...]}
//   {"identical": {"setting0": [t, phi], "setting1": [t, phi]}}
// where [t, phi] is the outcome-0 vector of the basis.

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "symhardy/bell.hpp"
#include "symhardy/majorana.hpp"
#include "symhardy/symcore.hpp"

namespace symhardy {

using json = nlohmann::json;

struct NamedSpec {
    std::string name;
    std::optional<int> n;
    std::optional<int> k;
};

struct StateSpec {
    std::variant<NamedSpec, std::vector<cplx>, MajoranaSpectrum> value;
};

namespace detail {

[[noreturn]] inline void spec_error(const std::string& where, const std::string& what) {
    throw ParseError(where + ": " + what);
}

inline double number_at(const json& j, const std::string& where) {
    if (!j.is_number()) {
        spec_error(where, "expected a number");
    }
    return j.get<double>();
}

inline int integer_at(const json& j, const std::string& where) {
    if (!j.is_number_integer()) {
        spec_error(where, "expected an integer");
    }
    return j.get<int>();
}

inline cplx complex_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) {
        spec_error(where, "expected a complex number [re, im]");
    }
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline std::pair<double, double> angles_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2) {
        spec_error(where, "expected Bloch angles [theta, phi]");
    }
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]")};
}

inline const json& field(const json& j, const char* key, const std::string& where) {
    if (!j.is_object() || !j.contains(key)) {
        spec_error(where, std::string("missing field '") + key + "'");
    }
    return j.at(key);
}

inline int default_size(const std::string& name) {
    return name == "tetrahedron" || name == "d3plus" ? 4 : 0;
}

} // namespace detail

inline json complex_json(cplx z) { return json::array({z.real(), z.imag()}); }

inline StateSpec parse_state_spec(const json& doc) {
    if (!doc.is_object()) {
        detail::spec_error("state", "expected an object");
    }
    int variants = 0;
    for (const char* key : {"named", "dicke_coeffs", "majorana_points"}) {
        variants += doc.contains(key) ? 1 : 0;
    }
    if (variants != 1) {
        detail::spec_error("state", "exactly one of named, dicke_coeffs, majorana_points is required");
    }
    if (doc.contains("named")) {
        const json& j = doc["named"];
        NamedSpec s;
        const json& name = detail::field(j, "name", "named");
        if (!name.is_string()) {
            detail::spec_error("named.name", "expected a string");
        }
        s.name = name.get<std::string>();
        if (j.contains("n")) {
            s.n = detail::integer_at(j["n"], "named.n");
        }
        if (j.contains("k")) {
            s.k = detail::integer_at(j["k"], "named.k");
        }
        return {s};
    }
    if (doc.contains("dicke_coeffs")) {
        const json& j = doc["dicke_coeffs"];
        if (!j.is_array() || j.size() < 2) {
            detail::spec_error("dicke_coeffs", "expected a list of at least two complex numbers");
        }
        std::vector<cplx> c;
        for (std::size_t i = 0; i < j.size(); ++i) {
            c.push_back(detail::complex_at(j[i], "dicke_coeffs[" + std::to_string(i) + "]"));
        }
        return {c};
    }
    const json& j = doc["majorana_points"];
    if (!j.is_array() || j.empty()) {
        detail::spec_error("majorana_points", "expected a non-empty list");
    }
    MajoranaSpectrum sp;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const std::string where = "majorana_points[" + std::to_string(i) + "]";
        const json& e = j[i];
        if (!e.is_object()) {
            detail::spec_error(where, "expected an object");
        }
        MajoranaCluster c;
        if (e.contains("bloch") == e.contains("qubit")) {
            detail::spec_error(where, "exactly one of bloch, qubit is required");
        }
        if (e.contains("bloch")) {
            const auto [t, phi] = detail::angles_at(e["bloch"], where + ".bloch");
            c.point = PureQubit::from_bloch(t, phi);
        } else {
            const json& q = e["qubit"];
            if (!q.is_array() || q.size() != 2) {
                detail::spec_error(where + ".qubit", "expected two complex amplitudes");
            }
            try {
                c.point = PureQubit::normalized(detail::complex_at(q[0], where + ".qubit[0]"),
                                                detail::complex_at(q[1], where + ".qubit[1]"));
            } catch (const DomainError& err) {
                throw DomainError(where + ".qubit: " + err.what());
            }
        }
        c.degeneracy = e.contains("deg") ? detail::integer_at(e["deg"], where + ".deg") : 1;
        if (c.degeneracy < 1) {
            detail::spec_error(where + ".deg", "degeneracy must be positive");
        }
        sp.n += c.degeneracy;
        sp.clusters.push_back(c);
    }
    return {sp};
}

/// Parses JSON text; syntax errors carry nlohmann's line and column.
inline StateSpec parse_state_spec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("state spec: ") + e.what());
    }
    return parse_state_spec(doc);
}

inline SymmetricState to_state(const StateSpec& spec) {
    if (const auto* named = std::get_if<NamedSpec>(&spec.value)) {
        const int n = named->n.value_or(detail::default_size(named->name));
        return from_named(named->name, n, named->k);
    }
    if (const auto* c = std::get_if<std::vector<cplx>>(&spec.value)) {
        return SymmetricState(*c);
    }
    return points_to_state(std::get<MajoranaSpectrum>(spec.value));
}

inline json to_json(const StateSpec& spec) {
    if (const auto* named = std::get_if<NamedSpec>(&spec.value)) {
        json j{{"name", named->name}};
        if (named->n) {
            j["n"] = *named->n;
        }
        if (named->k) {
            j["k"] = *named->k;
        }
        return {{"named", j}};
    }
    if (const auto* c = std::get_if<std::vector<cplx>>(&spec.value)) {
        json a = json::array();
        for (const auto& z : *c) {
            a.push_back(complex_json(z));
        }
        return {{"dicke_coeffs", a}};
    }
    json a = json::array();
    for (const auto& cl : std::get<MajoranaSpectrum>(spec.value).clusters) {
        a.push_back({{"qubit", json::array({complex_json(cl.point.a), complex_json(cl.point.b)})},
                     {"deg", cl.degeneracy}});
    }
    return {{"majorana_points", a}};
}

inline json to_json(const PureQubit& q) {
    const auto [t, phi] = q.angles();
    return {{"bloch", json::array({t, phi})}, {"amplitudes", json::array({complex_json(q.a), complex_json(q.b)})}};
}

inline json to_json(const MeasurementBasis& b) { return {{"outcome0", to_json(b.outcome0)}, {"outcome1", to_json(b.outcome1)}}; }

inline json to_json(const MajoranaSpectrum& s) {
    json clusters = json::array();
    for (const auto& c : s.clusters) {
        json e = to_json(c.point);
        e["degeneracy"] = c.degeneracy;
        clusters.push_back(e);
    }
    return {{"n", s.n}, {"clusters", clusters}, {"degeneracy_profile", degeneracy_profile(s)}};
}

inline json to_json(const SettingsAssignment& s) {
    json parties = json::array();
    for (const auto& p : s.per_party) {
        parties.push_back({{"setting0", to_json(p.setting0)}, {"setting1", to_json(p.setting1)}});
    }
    return parties;
}

inline json state_json(const SymmetricState& s) {
    json a = json::array();
    for (const auto& z : s.coeffs()) {
        a.push_back(complex_json(z));
    }
    return {{"n", s.n()}, {"dicke_coeffs", a}};
}

/// Settings document for n parties.
inline SettingsAssignment parse_settings(const json& doc, int n) {
    auto basis = [](const json& p, const char* key, const std::string& where) {
        const auto [t, phi] = detail::angles_at(detail::field(p, key, where), where + "." + key);
        return MeasurementBasis::from_bloch(t, phi);
    };
    if (!doc.is_object()) {
        detail::spec_error("settings", "expected an object");
    }
    if (doc.contains("identical")) {
        const json& p = doc["identical"];
        return SettingsAssignment::identical(n, basis(p, "setting0", "identical"), basis(p, "setting1", "identical"));
    }
    const json& parties = detail::field(doc, "parties", "settings");
    if (!parties.is_array()) {
        detail::spec_error("parties", "expected a list");
    }
    if (static_cast<int>(parties.size()) != n) {
        detail::spec_error("parties", "lists " + std::to_string(parties.size()) + " parties, state has " +
                                          std::to_string(n));
    }
    SettingsAssignment s;
    for (std::size_t i = 0; i < parties.size(); ++i) {
        const std::string where = "parties[" + std::to_string(i) + "]";
        s.per_party.push_back({basis(parties[i], "setting0", where), basis(parties[i], "setting1", where)});
    }
    return s;
}

inline json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return json::parse(ss.str());
    } catch (const json::parse_error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

} // namespace symhardy
