// io.hpp: JSON state documents and report serialisation

#pragma once

#include "classify.hpp"
#include "criteria.hpp"
#include "entangle.hpp"
#include "invariants.hpp"
#include "statecore.hpp"

#include <json.hpp>

#include <optional>
#include <string>

namespace pauliscope {

using json = nlohmann::json;

enum class InputFormat { automatic, pauli, matrix };

struct StateDocument {
    PauliRep state;
    InputFormat source = InputFormat::pauli;
    std::optional<std::string> label;
};

namespace detail {

inline int line_of(const std::string& text, std::size_t byte) {
    int line = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i)
        if (text[i] == '\n')
            ++line;
    return line;
}

inline double number_at(const json& j, const std::string& where) {
    if (!j.is_number())
        throw parse_error(where + ": expected a number");
    return j.get<double>();
}

inline Vec3 vec3_at(const json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 3)
        throw parse_error(where + ": expected an array of 3 numbers");
    return {number_at(j[0], where + "[0]"), number_at(j[1], where + "[1]"), number_at(j[2], where + "[2]")};
}

inline PauliRep pauli_from_json(const json& j) {
    if (!j.is_object())
        throw parse_error("pauli: expected an object with s, t, C");
    for (const char* key : {"s", "t", "C"})
        if (!j.contains(key))
            throw parse_error(std::string("pauli.") + key + ": missing");
    PauliRep p;
    p.s = vec3_at(j["s"], "pauli.s");
    p.t = vec3_at(j["t"], "pauli.t");
    const json& c = j["C"];
    if (!c.is_array() || c.size() != 3)
        throw parse_error("pauli.C: expected a 3x3 array");
    for (int r = 0; r < 3; ++r)
        p.c.row(r) = vec3_at(c[static_cast<std::size_t>(r)], "pauli.C[" + std::to_string(r) + "]").transpose();
    return p;
}

inline CMat4 matrix_from_json(const json& j) {
    if (!j.is_array() || j.size() != 4)
        throw parse_error("matrix: expected 4 rows");
    CMat4 m;
    for (std::size_t r = 0; r < 4; ++r) {
        const std::string row = "matrix[" + std::to_string(r) + "]";
        if (!j[r].is_array() || j[r].size() != 4)
            throw parse_error(row + ": expected 4 entries");
        for (std::size_t c = 0; c < 4; ++c) {
            const json& e = j[r][c];
            const std::string where = row + "[" + std::to_string(c) + "]";
            if (e.is_number()) {
                m(static_cast<int>(r), static_cast<int>(c)) = e.get<double>();
                continue;
            }
            if (!e.is_array() || e.size() != 2)
                throw parse_error(where + ": expected [re, im]");
            m(static_cast<int>(r), static_cast<int>(c)) = cplx{number_at(e[0], where), number_at(e[1], where)};
        }
    }
    return m;
}

} // namespace detail

/// Reads a state document. Schema problems raise parse_error; a matrix that
/// is not Hermitian with unit trace raises invalid_input with the defect.
inline StateDocument parse_state(const std::string& text, InputFormat fmt = InputFormat::automatic,
                                 double tol = default_tol) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw parse_error("line " + std::to_string(detail::line_of(text, e.byte)) + ": " + e.what());
    }
    if (!doc.is_object())
        throw parse_error("document: expected a JSON object");
    const bool has_p = doc.contains("pauli"), has_m = doc.contains("matrix");
    if (has_p == has_m)
        throw parse_error("document: exactly one of \"pauli\" and \"matrix\" is required");
    if (fmt == InputFormat::pauli && !has_p)
        throw parse_error("document: --format pauli but no \"pauli\" field");
    if (fmt == InputFormat::matrix && !has_m)
        throw parse_error("document: --format matrix but no \"matrix\" field");

    StateDocument out;
    if (doc.contains("label")) {
        if (!doc["label"].is_string())
            throw parse_error("label: expected a string");
        out.label = doc["label"].get<std::string>();
    }
    if (has_p) {
        out.source = InputFormat::pauli;
        out.state = detail::pauli_from_json(doc["pauli"]);
        if (!out.state.all_finite())
            throw invalid_input("pauli: non-finite entries");
    } else {
        out.source = InputFormat::matrix;
        out.state = from_matrix(detail::matrix_from_json(doc["matrix"]), tol);
    }
    return out;
}

// ---------------------------------------------------------------------------
// writers

inline json to_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

inline json to_json(const Mat3& m) {
    return json::array({to_json(Vec3(m.row(0))), to_json(Vec3(m.row(1))), to_json(Vec3(m.row(2)))});
}

inline json to_json(const CMat4& m) {
    json rows = json::array();
    for (int r = 0; r < 4; ++r) {
        json row = json::array();
        for (int c = 0; c < 4; ++c)
            row.push_back(json::array({m(r, c).real(), m(r, c).imag()}));
        rows.push_back(row);
    }
    return rows;
}

inline json pauli_document(const PauliRep& p, const std::optional<std::string>& label = {}) {
    json j = {{"pauli", {{"s", to_json(p.s)}, {"t", to_json(p.t)}, {"C", to_json(p.c)}}}};
    if (label)
        j["label"] = *label;
    return j;
}

inline json matrix_document(const PauliRep& p, const std::optional<std::string>& label = {}) {
    json j = {{"matrix", to_json(to_operator(p))}};
    if (label)
        j["label"] = *label;
    return j;
}

inline json to_json(const ClassLabel& l) {
    return {{"class", std::string(1, class_letter(l.label))}, {"sign", std::string(1, sign_char(l.sign))}};
}

inline json to_json(const FamilyDescriptor& f) {
    json j = to_json(f.cls);
    j["c"] = to_json(f.c);
    j["s"] = to_json(f.s);
    j["t"] = to_json(f.t);
    return j;
}

inline json to_json(const CriterionReport& r) {
    return {{"satisfied", r.satisfied},
            {"margins", {r.margins[0], r.margins[1], r.margins[2]}},
            {"min_eigenvalue", r.min_eigenvalue},
            {"negative_count", r.negative_count}};
}

inline json to_json(const GlobalInvariants& g) { return json::array({g.a2, g.a1, g.a0}); }

inline json to_json(const LocalInvariants& li) {
    return {{"tr_ctc", li.tr_ctc}, {"det_c", li.det_c},   {"tr_ctc_sq", li.tr_ctc_sq},
            {"s_sq", li.s_sq},     {"t_sq", li.t_sq},     {"s_c_t", li.s_c_t},
            {"s_cct_s", li.s_cct_s}, {"t_ctc_t", li.t_ctc_t}, {"det_e", li.det_e}};
}

inline json to_json(const ConcurrenceResult& c) {
    return {{"value", c.value}, {"r_values", {c.r_values[0], c.r_values[1], c.r_values[2], c.r_values[3]}}};
}

inline json to_json(const LsdResult& r) {
    return {{"lambda", r.lambda},
            {"converged", r.converged},
            {"sep_part", to_json(r.sep_part.matrix())},
            {"pure_part", to_json(r.pure_part.matrix())},
            {"pure_part_used", r.pure_part_used},
            {"certificates",
             {{"min_eig_sep", r.certificates.min_eig_sep},
              {"min_eig_ph3_sep", r.certificates.min_eig_ph3_sep},
              {"pure_defect", r.certificates.pure_defect},
              {"reconstruction_error", r.certificates.reconstruction_error}}},
            {"search_stats",
             {{"restarts", r.search_stats.restarts},
              {"evaluations", r.search_stats.evaluations},
              {"seed", r.search_stats.seed},
              {"best_restart", r.search_stats.best_restart}}}};
}

} // namespace pauliscope
