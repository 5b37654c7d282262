#pragma once

// JSON reading and writing for weights, cone data and arrangements.
// Rationals travel as "p/q" strings; bare integers are accepted on input.

#include "dmcone/chern_bmy.hpp"
#include "dmcone/cone_density.hpp"
#include "dmcone/error.hpp"
#include "dmcone/rational.hpp"
#include "dmcone/stratification.hpp"

#include <json.hpp>

#include <complex>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace dmcone::io {

using json = nlohmann::ordered_json;

inline json read_json_file(const std::string& path) {
    if (!std::filesystem::exists(path)) throw Error(ErrorCode::FileNotFound, "no such file: " + path);
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::FileNotFound, "cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, path + ": " + e.what());
    }
}

inline json parse_json_text(const std::string& text, const std::string& origin) {
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, origin + ": " + e.what());
    }
}

/// A rational from "p/q", "p" or a JSON integer. Floats are refused.
inline Rational rational_from_json(const json& j, const std::string& where) {
    if (j.is_string()) {
        try {
            return Rational::parse(j.get<std::string>());
        } catch (const std::exception& e) {
            throw Error(ErrorCode::ParseError, where + ": " + e.what());
        }
    }
    if (j.is_number_integer()) return Rational(j.get<long long>());
    throw Error(ErrorCode::ParseError, where + ": expected a rational as a \"p/q\" string, got " + j.dump());
}

inline std::vector<Rational> rationals_from_json(const json& j, const std::string& where) {
    if (!j.is_array()) throw Error(ErrorCode::ParseError, where + ": expected an array of \"p/q\" strings");
    std::vector<Rational> out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational_from_json(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

/// Weight file: a bare array, or an object with a "weights" array.
inline std::vector<Rational> load_rationals(const std::string& path) {
    const json j = read_json_file(path);
    if (j.is_object() && j.contains("weights")) return rationals_from_json(j["weights"], path + ":weights");
    return rationals_from_json(j, path);
}

inline WeightSystem load_weights(const std::string& path) { return WeightSystem::validate(load_rationals(path)); }

inline std::string str(const Rational& r) { return r.str(); }

inline json to_json(const std::vector<Rational>& v) {
    json a = json::array();
    for (const auto& r : v) a.push_back(r.str());
    return a;
}

inline json to_json(const IndexSet& s) { return json(std::vector<int>(s.begin(), s.end())); }

inline json to_json(const Partition& p) {
    json a = json::array();
    for (const auto& b : p.blocks()) a.push_back(to_json(b));
    return a;
}

inline json to_json(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

template <class T>
T field(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw Error(ErrorCode::ParseError, where + ": missing field \"" + key + "\"");
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorCode::ParseError, where + "." + key + ": " + e.what());
    }
}

// Cone data ------------------------------------------------------------------------

inline LogFanoConeData cone_data_from_json(const json& j, const std::string& where = "cone data") {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
    LogFanoConeData d;
    d.n = field<int>(j, "n", where);
    d.index = field<int>(j, "index", where);
    d.multiple = j.contains("multiple") ? field<int>(j, "multiple", where) : 1;
    if (!j.contains("c1n")) throw Error(ErrorCode::ParseError, where + ": missing field \"c1n\"");
    d.c1n = rational_from_json(j["c1n"], where + ".c1n");
    if (j.contains("divisors")) {
        if (!j["divisors"].is_array()) throw Error(ErrorCode::ParseError, where + ".divisors: expected an array");
        for (std::size_t i = 0; i < j["divisors"].size(); ++i) {
            const auto& e = j["divisors"][i];
            const std::string w = where + ".divisors[" + std::to_string(i) + "]";
            ConeDivisor c;
            c.degree = e.contains("degree") ? field<int>(e, "degree", w) : 1;
            if (!e.contains("beta")) throw Error(ErrorCode::ParseError, w + ": missing field \"beta\"");
            c.beta = rational_from_json(e["beta"], w + ".beta");
            d.divisors.push_back(c);
        }
    }
    return d;
}

inline json to_json(const LogFanoConeData& d) {
    json divs = json::array();
    for (const auto& c : d.divisors) divs.push_back({{"degree", c.degree}, {"beta", c.beta.str()}});
    return {{"n", d.n}, {"index", d.index}, {"multiple", d.multiple}, {"divisors", divs}, {"c1n", d.c1n.str()}};
}

// Arrangements ---------------------------------------------------------------------

/// {n, ambient: {c1, c2}, divisors: [{name, weight: "p/q" | "symbolic", degree?,
///  anticanonical?, self_intersection?}], intersections: [{divisors: [names],
///  type: "double" | "multiple", class?}]}
inline WeightedArrangement arrangement_from_json(const json& j, const std::string& where = "arrangement") {
    if (!j.is_object()) throw Error(ErrorCode::ParseError, where + ": expected an object");
    WeightedArrangement arr;
    arr.n = field<int>(j, "n", where);
    if (j.contains("ambient")) {
        const auto& a = j["ambient"];
        if (a.contains("c1")) arr.c1_ambient = rational_from_json(a["c1"], where + ".ambient.c1");
        if (a.contains("c2")) arr.c2_ambient = rational_from_json(a["c2"], where + ".ambient.c2");
    } else {
        arr.c1_ambient = Rational(arr.n + 1);
        arr.c2_ambient = binomial(static_cast<unsigned>(arr.n + 1), 2);
    }
    if (!j.contains("divisors") || !j["divisors"].is_array()) throw Error(ErrorCode::ParseError, where + ": missing divisors array");
    for (std::size_t i = 0; i < j["divisors"].size(); ++i) {
        const auto& e = j["divisors"][i];
        const std::string w = where + ".divisors[" + std::to_string(i) + "]";
        ArrangementDivisor d;
        d.name = field<std::string>(e, "name", w);
        if (e.contains("weight") && !(e["weight"].is_string() && e["weight"] == "symbolic"))
            d.weight = rational_from_json(e["weight"], w + ".weight");
        if (e.contains("degree")) d.degree = rational_from_json(e["degree"], w + ".degree");
        if (e.contains("anticanonical")) d.anticanonical = rational_from_json(e["anticanonical"], w + ".anticanonical");
        if (e.contains("self_intersection")) d.self_intersection = rational_from_json(e["self_intersection"], w + ".self_intersection");
        arr.divisors.push_back(std::move(d));
    }
    if (j.contains("intersections")) {
        for (std::size_t i = 0; i < j["intersections"].size(); ++i) {
            const auto& e = j["intersections"][i];
            const std::string w = where + ".intersections[" + std::to_string(i) + "]";
            Codim2Stratum s;
            for (const auto& name : field<std::vector<std::string>>(e, "divisors", w)) {
                auto idx = arr.find(name);
                if (!idx) throw Error(ErrorCode::ParseError, w + ": unknown divisor " + name);
                s.divisors.push_back(*idx);
            }
            const auto type = field<std::string>(e, "type", w);
            if (type == "double") s.type = StratumType::DoublePoint;
            else if (type == "multiple") s.type = StratumType::MultiplePoint;
            else throw Error(ErrorCode::ParseError, w + ".type: expected \"double\" or \"multiple\", got " + type);
            if (e.contains("class")) s.cls = rational_from_json(e["class"], w + ".class");
            arr.strata.push_back(std::move(s));
        }
    }
    arr.validate();
    return arr;
}

inline json to_json(const WeightedArrangement& arr) {
    json divs = json::array();
    for (const auto& d : arr.divisors) divs.push_back({{"name", d.name}, {"weight", d.weight ? d.weight->str() : "symbolic"}});
    json inter = json::array();
    for (const auto& s : arr.strata) {
        json names = json::array();
        for (auto l : s.divisors) names.push_back(arr.divisors[l].name);
        inter.push_back({{"divisors", names}, {"type", to_string(s.type)}});
    }
    return {{"n", arr.n},
            {"ambient", {{"c1", arr.c1_ambient.str()}, {"c2", arr.c2_ambient.str()}}},
            {"divisors", divs},
            {"intersections", inter}};
}

} // namespace dmcone::io
