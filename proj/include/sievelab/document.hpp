#pragma once

#include "sievelab/abelian.hpp"
#include "sievelab/finset.hpp"
#include "sievelab/fintop.hpp"
#include "sievelab/verdict.hpp"
#include "sievelab/zsieve.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sievelab::doc {

using json = nlohmann::json;

/// Schema violation carrying the path of the offending field.
struct schema_error : invalid_input {
    schema_error(const std::string& path, const std::string& what)
        : invalid_input(path + ": " + what), path(path) {}
    std::string path;
};

inline const json& field(const json& j, const std::string& key, const std::string& path) {
    if (!j.is_object()) throw schema_error(path, "expected an object");
    auto it = j.find(key);
    if (it == j.end()) throw schema_error(path + "/" + key, "missing field");
    return *it;
}

inline int int_field(const json& j, const std::string& key, const std::string& path) {
    const json& v = field(j, key, path);
    if (!v.is_number_integer()) throw schema_error(path + "/" + key, "expected an integer");
    return v.get<int>();
}

inline void check_format(const json& j, const std::string& path) {
    if (int_field(j, "format", path) != 1)
        throw schema_error(path + "/format", "unsupported document format version");
}

// ---------------------------------------------------------------------------
// integers and matrices
// ---------------------------------------------------------------------------

// Entries within the double-safe range serialize as numbers, larger ones as
// decimal strings; both forms parse.
inline json integer_to_json(const Integer& v) {
    static const Integer lo = -(Integer(1) << 53), hi = Integer(1) << 53;
    if (v >= lo && v <= hi) return json(static_cast<std::int64_t>(v));
    return json(v.str());
}

inline Integer integer_from_json(const json& j, const std::string& path) {
    if (j.is_number_integer()) return Integer(j.get<std::int64_t>());
    if (j.is_string()) {
        try {
            return Integer(j.get<std::string>());
        } catch (const std::exception&) {
            throw schema_error(path, "not a decimal integer string");
        }
    }
    throw schema_error(path, "expected an integer or decimal string");
}

inline json matrix_to_json(const IntMatrix& m) {
    json entries = json::array();
    for (const auto& e : m.entries()) entries.push_back(integer_to_json(e));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"entries", entries}};
}

inline IntMatrix matrix_from_json(const json& j, const std::string& path) {
    int rows = int_field(j, "rows", path);
    int cols = int_field(j, "cols", path);
    if (rows < 0 || cols < 0) throw schema_error(path, "negative matrix dimension");
    const json& entries = field(j, "entries", path);
    if (!entries.is_array()) throw schema_error(path + "/entries", "expected an array");
    if (static_cast<int>(entries.size()) != rows * cols)
        throw schema_error(path + "/entries", "expected " + std::to_string(rows * cols) +
                                                  " entries, got " + std::to_string(entries.size()));
    std::vector<Integer> vals;
    vals.reserve(entries.size());
    for (size_t i = 0; i < entries.size(); ++i)
        vals.push_back(integer_from_json(entries[i], path + "/entries/" + std::to_string(i)));
    return IntMatrix(rows, cols, std::move(vals));
}

// ---------------------------------------------------------------------------
// groups, homs, sieves
// ---------------------------------------------------------------------------

inline json group_to_json(const FgAbGroup& g) {
    return json{{"generators", g.generators}, {"relations", matrix_to_json(g.relations)}};
}

inline FgAbGroup group_from_json(const json& j, const std::string& path) {
    int gens = int_field(j, "generators", path);
    IntMatrix rel = matrix_from_json(field(j, "relations", path), path + "/relations");
    if (rel.rows() != gens)
        throw schema_error(path + "/relations", "relation rows must equal the generator count");
    return make_group(rel);
}

inline json zsieve_to_json(const ZSieve& s) {
    json gens = json::array();
    for (const auto& g : s.generators) gens.push_back(matrix_to_json(g));
    return json{{"format", 1},
                {"category", "zmod"},
                {"target_rank", s.target_rank},
                {"generators", gens}};
}

inline ZSieve zsieve_from_json(const json& j, const std::string& path) {
    int n = int_field(j, "target_rank", path);
    const json& gens = field(j, "generators", path);
    if (!gens.is_array() || gens.empty())
        throw schema_error(path + "/generators", "expected a nonempty array");
    std::vector<IntMatrix> mats;
    for (size_t i = 0; i < gens.size(); ++i) {
        std::string p = path + "/generators/" + std::to_string(i);
        IntMatrix m = matrix_from_json(gens[i], p);
        if (m.rows() != n) throw schema_error(p, "generator must have target_rank rows");
        mats.push_back(std::move(m));
    }
    return make_sieve(n, std::move(mats));
}

/// Sieve on a finitely presented group, with an optional chosen surjection
/// from a free module (defaults to the quotient map on the generators).
struct FpSieveDoc {
    FpSieve sieve;
    GroupHom surjection;
};

inline FpSieveDoc fp_sieve_from_json(const json& j, const std::string& path) {
    FgAbGroup target = group_from_json(field(j, "target", path), path + "/target");
    const json& gens = field(j, "generators", path);
    if (!gens.is_array() || gens.empty())
        throw schema_error(path + "/generators", "expected a nonempty array");
    FpSieve s;
    s.target = target;
    for (size_t i = 0; i < gens.size(); ++i) {
        std::string p = path + "/generators/" + std::to_string(i);
        FgAbGroup src = group_from_json(field(gens[i], "source", p), p + "/source");
        if (gens[i].contains("target")) {
            FgAbGroup t = group_from_json(gens[i]["target"], p + "/target");
            if (t.generators != target.generators || t.relations != target.relations)
                throw schema_error(p + "/target", "generator target differs from the sieve target");
        }
        IntMatrix m = matrix_from_json(field(gens[i], "matrix", p), p + "/matrix");
        try {
            s.generators.push_back(make_hom(src, target, m));
        } catch (const invalid_input& e) {
            throw schema_error(p, e.what());
        }
    }
    GroupHom p;
    if (j.contains("surjection")) {
        IntMatrix m = matrix_from_json(j["surjection"], path + "/surjection");
        try {
            p = make_hom(free_group(m.cols()), target, m);
        } catch (const invalid_input& e) {
            throw schema_error(path + "/surjection", e.what());
        }
    } else {
        p = make_hom(free_group(target.generators), target,
                     IntMatrix::identity(target.generators));
    }
    return FpSieveDoc{std::move(s), std::move(p)};
}

// ---------------------------------------------------------------------------
// finite sets
// ---------------------------------------------------------------------------

inline std::vector<std::string> labels_from_json(const json& j, const std::string& path) {
    if (!j.is_array()) throw schema_error(path, "expected an array of labels");
    std::vector<std::string> out;
    for (size_t i = 0; i < j.size(); ++i) {
        if (!j[i].is_string())
            throw schema_error(path + "/" + std::to_string(i), "expected a string label");
        out.push_back(j[i].get<std::string>());
    }
    return out;
}

inline std::map<std::string, std::string> assignment_from_json(const json& j,
                                                               const std::string& path) {
    if (!j.is_object()) throw schema_error(path, "expected an object {label: label}");
    std::map<std::string, std::string> out;
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!it.value().is_string())
            throw schema_error(path + "/" + it.key(), "expected a string label");
        out[it.key()] = it.value().get<std::string>();
    }
    return out;
}

inline SetFamily setfamily_from_json(const json& j, const std::string& path) {
    FinSet target;
    try {
        target = make_finset(labels_from_json(field(j, "target", path), path + "/target"));
    } catch (const invalid_input& e) {
        throw schema_error(path + "/target", e.what());
    }
    const json& maps = field(j, "maps", path);
    if (!maps.is_array()) throw schema_error(path + "/maps", "expected an array");
    SetFamily f;
    f.target = target;
    for (size_t i = 0; i < maps.size(); ++i) {
        std::string p = path + "/maps/" + std::to_string(i);
        try {
            FinSet src = make_finset(labels_from_json(field(maps[i], "source", p), p + "/source"));
            f.maps.push_back(make_setmap(src, target,
                                         assignment_from_json(field(maps[i], "assignment", p),
                                                              p + "/assignment")));
        } catch (const schema_error&) {
            throw;
        } catch (const invalid_input& e) {
            throw schema_error(p, e.what());
        }
    }
    return f;
}

inline json setmap_to_json(const SetMap& m) {
    json assign = json::object();
    for (int i = 0; i < m.source.size(); ++i)
        assign[m.source.labels[static_cast<size_t>(i)]] = m.image_label(i);
    return json{{"source", m.source.labels}, {"assignment", assign}};
}

inline json setfamily_to_json(const SetFamily& f) {
    json maps = json::array();
    for (const auto& m : f.maps) maps.push_back(setmap_to_json(m));
    return json{{"format", 1}, {"category", "finset"}, {"target", f.target.labels}, {"maps", maps}};
}

// ---------------------------------------------------------------------------
// finite spaces
// ---------------------------------------------------------------------------

inline FinSpace finspace_from_json(const json& j, const std::string& path) {
    std::vector<std::string> points = labels_from_json(field(j, "points", path), path + "/points");
    const json& opens = field(j, "opens", path);
    if (!opens.is_array()) throw schema_error(path + "/opens", "expected an array of label arrays");
    std::vector<std::vector<std::string>> open_sets;
    for (size_t i = 0; i < opens.size(); ++i)
        open_sets.push_back(labels_from_json(opens[i], path + "/opens/" + std::to_string(i)));
    try {
        return make_finspace(std::move(points), open_sets);
    } catch (const invalid_input& e) {
        throw schema_error(path, e.what());
    }
}

inline json finspace_to_json(const FinSpace& s) {
    json opens = json::array();
    for (OpenMask o : s.opens) opens.push_back(s.mask_labels(o));
    return json{{"points", s.labels}, {"opens", opens}};
}

inline TopFamily topfamily_from_json(const json& j, const std::string& path) {
    FinSpace target = finspace_from_json(field(j, "target", path), path + "/target");
    const json& maps = field(j, "maps", path);
    if (!maps.is_array()) throw schema_error(path + "/maps", "expected an array");
    TopFamily f;
    f.target = target;
    for (size_t i = 0; i < maps.size(); ++i) {
        std::string p = path + "/maps/" + std::to_string(i);
        FinSpace src = finspace_from_json(field(maps[i], "source", p), p + "/source");
        try {
            f.maps.push_back(make_contmap(src, target,
                                          assignment_from_json(field(maps[i], "assignment", p),
                                                               p + "/assignment")));
        } catch (const schema_error&) {
            throw;
        } catch (const invalid_input& e) {
            throw schema_error(p, e.what());
        }
    }
    return f;
}

inline json contmap_to_json(const ContMap& m) {
    json assign = json::object();
    for (int i = 0; i < m.source.size(); ++i)
        assign[m.source.labels[static_cast<size_t>(i)]] =
            m.target.labels[static_cast<size_t>(m.assignment[static_cast<size_t>(i)])];
    return json{{"source", finspace_to_json(m.source)}, {"assignment", assign}};
}

inline json topfamily_to_json(const TopFamily& f) {
    json maps = json::array();
    for (const auto& m : f.maps) maps.push_back(contmap_to_json(m));
    return json{{"format", 1},
                {"category", "fintop"},
                {"target", finspace_to_json(f.target)},
                {"maps", maps}};
}

// ---------------------------------------------------------------------------
// verdicts
// ---------------------------------------------------------------------------

inline json invariants_to_json(const GroupInvariants& inv) {
    json torsion = json::array();
    for (const auto& t : inv.torsion) torsion.push_back(integer_to_json(t));
    return json{{"free_rank", inv.free_rank}, {"torsion", torsion}};
}

inline json verdict_to_json(const Verdict& v) {
    json witness = json::object();
    if (v.witness_map) witness["map"] = matrix_to_json(*v.witness_map);
    if (v.witness_vector) {
        json vec = json::array();
        for (const auto& e : *v.witness_vector) vec.push_back(integer_to_json(e));
        witness["vector"] = vec;
    }
    if (v.witness_prime) witness["prime"] = integer_to_json(*v.witness_prime);
    if (v.colim_invariants) witness["colim_invariants"] = invariants_to_json(*v.colim_invariants);
    if (v.witness_point) witness["point"] = *v.witness_point;
    if (v.witness_labels) witness["labels"] = *v.witness_labels;
    return json{{"status", status_name(v.status)},
                {"rule", v.rule},
                {"witness", witness},
                {"reverification", v.transcript}};
}

} // namespace sievelab::doc
