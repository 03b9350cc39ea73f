#pragma once

#include "sievelab/document.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sievelab::runner {

using doc::json;

constexpr int exit_canonical = 0;
constexpr int exit_negative = 1;   // NotCanonical or NotColimSieve
constexpr int exit_unknown = 2;    // ColimOnlyUnknown
constexpr int exit_input_error = 64;

struct Options {
    int budget = 3;
    bool universal = true; // question: universal vs colim-only
    std::optional<std::string> seed;
    json test_objects; // descent only
};

struct Report {
    json body;
    int exit_code = 0;
};

inline int exit_for(Status s) {
    switch (s) {
        case Status::Canonical: return exit_canonical;
        case Status::NotCanonical: return exit_negative;
        case Status::NotColimSieve: return exit_negative;
        case Status::ColimOnlyUnknown: return exit_unknown;
    }
    return exit_input_error;
}

inline std::string category_of(const json& request) {
    const json& c = doc::field(request, "category", "");
    if (!c.is_string()) throw doc::schema_error("/category", "expected a string");
    std::string cat = c.get<std::string>();
    if (cat != "zmod" && cat != "finset" && cat != "fintop")
        throw doc::schema_error("/category", "unknown category '" + cat + "'");
    return cat;
}

inline json base_report(const std::string& category, const Options& opt) {
    json body;
    body["format"] = 1;
    body["category"] = category;
    body["budget"] = opt.budget;
    body["question"] = opt.universal ? "universal" : "colim";
    body["seed"] = opt.seed ? json(*opt.seed) : json(nullptr);
    return body;
}

// ---------------------------------------------------------------------------
// check
// ---------------------------------------------------------------------------

inline Verdict check_zmod(const json& request, const Options& opt) {
    ZSieve sieve;
    if (request.contains("target_rank")) {
        sieve = doc::zsieve_from_json(request, "");
    } else {
        doc::FpSieveDoc fp = doc::fp_sieve_from_json(request, "");
        sieve = reduce_to_free(fp.sieve, fp.surjection);
    }
    if (!opt.universal) {
        ColimDiagnostics d = is_colim_sieve(sieve);
        Verdict v;
        if (d.iso) {
            v.status = Status::ColimOnlyUnknown;
            v.rule = "colim-sieve";
            v.note("canonical map is an isomorphism; universality was not evaluated");
        } else {
            v.status = Status::NotColimSieve;
            v.rule = "colimit-comparison";
            v.colim_invariants = d.colim.invariants;
            v.note("colimit invariants " + d.colim.invariants.to_string());
        }
        return v;
    }
    ProbeBudget budget;
    budget.entry_bound = opt.budget;
    return decide(sieve, budget);
}

inline Verdict check_finset(const json& request, const Options&) {
    SetFamily f = doc::setfamily_from_json(request, "");
    Verdict v;
    if (is_jointly_surjective(f)) {
        SetColimit c = colim_oracle(f);
        if (!setmap_bijective(c.to_target))
            throw std::logic_error("internal consistency: joint surjectivity vs oracle");
        v.status = Status::Canonical;
        v.rule = "jointly-surjective";
        v.note("every target element is hit; the colimit maps bijectively onto the target");
        v.note("in finite sets every colim sieve is universal");
    } else {
        v.status = Status::NotColimSieve;
        v.rule = "not-jointly-surjective";
        v.witness_labels = uncovered_labels(f);
        v.witness_point = v.witness_labels->front();
        v.note("uncovered target elements: " + std::to_string(v.witness_labels->size()));
    }
    return v;
}

inline Verdict check_fintop(const json& request, const Options& opt) {
    TopFamily f = doc::topfamily_from_json(request, "");
    return sieve_verdict_top(f, opt.universal);
}

inline Report run_check(const json& request, const Options& opt) {
    doc::check_format(request, "");
    std::string cat = category_of(request);
    auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    if (cat == "zmod")
        v = check_zmod(request, opt);
    else if (cat == "finset")
        v = check_finset(request, opt);
    else
        v = check_fintop(request, opt);
    auto t1 = std::chrono::steady_clock::now();

    Report r;
    r.body = base_report(cat, opt);
    r.body["verdict"] = doc::verdict_to_json(v);
    r.body["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    r.exit_code = exit_for(v.status);
    return r;
}

// ---------------------------------------------------------------------------
// colim: colimit diagnostics
// ---------------------------------------------------------------------------

inline Report run_colim(const json& request, const Options& opt) {
    doc::check_format(request, "");
    std::string cat = category_of(request);
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.body = base_report(cat, opt);
    if (cat == "zmod") {
        ZSieve s;
        if (request.contains("target_rank")) {
            s = doc::zsieve_from_json(request, "");
        } else {
            doc::FpSieveDoc fp = doc::fp_sieve_from_json(request, "");
            s = reduce_to_free(fp.sieve, fp.surjection);
        }
        ColimDiagnostics d = colim_of_sieve(s);
        r.body["colim"] = json{{"invariants", doc::invariants_to_json(d.colim.invariants)},
                               {"combined_surjective", d.combined_surjective},
                               {"kernel_in_image", d.kernel_in_image},
                               {"canonical_map_iso", d.iso}};
        r.exit_code = d.iso ? exit_canonical : exit_negative;
    } else if (cat == "finset") {
        SetFamily f = doc::setfamily_from_json(request, "");
        SetColimit c = colim_oracle(f);
        bool bij = setmap_bijective(c.to_target);
        r.body["colim"] = json{{"elements", c.set.labels},
                               {"map", doc::setmap_to_json(c.to_target)},
                               {"injective", setmap_injective(c.to_target)},
                               {"bijective", bij}};
        r.exit_code = bij ? exit_canonical : exit_negative;
    } else {
        TopFamily f = doc::topfamily_from_json(request, "");
        TopColimit c = colim_oracle_top(f);
        bool homeo = is_homeomorphism(c.to_target);
        r.body["colim"] = json{{"space", doc::finspace_to_json(c.space)},
                               {"map", doc::contmap_to_json(c.to_target)},
                               {"homeomorphism", homeo}};
        r.exit_code = homeo ? exit_canonical : exit_negative;
    }
    auto t1 = std::chrono::steady_clock::now();
    r.body["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    return r;
}

// ---------------------------------------------------------------------------
// pullback: emit the pulled-back sieve/family as a document
// ---------------------------------------------------------------------------

inline Report run_pullback(const json& request, const Options& opt) {
    doc::check_format(request, "");
    std::string cat = category_of(request);
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.body = base_report(cat, opt);
    if (cat == "zmod") {
        ZSieve s = doc::zsieve_from_json(doc::field(request, "sieve", ""), "/sieve");
        IntMatrix f = doc::matrix_from_json(doc::field(request, "map", ""), "/map");
        if (f.rows() != s.target_rank)
            throw doc::schema_error("/map", "map must have target_rank rows");
        r.body["result"] = doc::zsieve_to_json(pullback_sieve(s, f));
    } else if (cat == "finset") {
        SetFamily f = doc::setfamily_from_json(doc::field(request, "family", ""), "/family");
        const json& mj = doc::field(request, "map", "");
        FinSet src = make_finset(doc::labels_from_json(doc::field(mj, "source", "/map"), "/map/source"));
        SetMap g = make_setmap(src, f.target,
                               doc::assignment_from_json(doc::field(mj, "assignment", "/map"),
                                                         "/map/assignment"));
        r.body["result"] = doc::setfamily_to_json(pullback_family(f, g));
    } else {
        TopFamily f = doc::topfamily_from_json(doc::field(request, "family", ""), "/family");
        const json& mj = doc::field(request, "map", "");
        FinSpace src = doc::finspace_from_json(doc::field(mj, "source", "/map"), "/map/source");
        ContMap g = make_contmap(src, f.target,
                                 doc::assignment_from_json(doc::field(mj, "assignment", "/map"),
                                                           "/map/assignment"));
        r.body["result"] = doc::topfamily_to_json(pullback_family_top(f, g));
    }
    auto t1 = std::chrono::steady_clock::now();
    r.body["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    r.exit_code = exit_canonical;
    return r;
}

// ---------------------------------------------------------------------------
// descent
// ---------------------------------------------------------------------------

inline Report run_descent(const json& request, const Options& opt) {
    doc::check_format(request, "");
    std::string cat = category_of(request);
    auto t0 = std::chrono::steady_clock::now();
    Report r;
    r.body = base_report(cat, opt);
    json results = json::array();
    bool all = true;
    if (cat == "zmod") {
        ZSieve s;
        if (request.contains("target_rank")) {
            s = doc::zsieve_from_json(request, "");
        } else {
            doc::FpSieveDoc fp = doc::fp_sieve_from_json(request, "");
            s = reduce_to_free(fp.sieve, fp.surjection);
        }
        std::vector<std::pair<std::string, FgAbGroup>> objects;
        if (opt.test_objects.is_array() && !opt.test_objects.empty()) {
            for (size_t i = 0; i < opt.test_objects.size(); ++i) {
                const json& o = opt.test_objects[i];
                std::string p = "/test_objects/" + std::to_string(i);
                if (o.is_string() && o.get<std::string>() == "target")
                    objects.emplace_back("target", free_group(s.target_rank));
                else if (o.is_string() && o.get<std::string>() == "colim")
                    objects.emplace_back("colim", colim_of_sieve(s).colim);
                else
                    objects.emplace_back("object " + std::to_string(i),
                                         doc::group_from_json(o, p));
            }
        } else {
            objects.emplace_back("target", free_group(s.target_rank));
            objects.emplace_back("colim", colim_of_sieve(s).colim);
        }
        for (auto& [name, g] : objects) {
            bool ok = descent_check(s, g);
            all = all && ok;
            results.push_back(json{{"object", name},
                                   {"invariants", doc::invariants_to_json(g.invariants)},
                                   {"descent", ok}});
        }
    } else if (cat == "finset") {
        SetFamily f = doc::setfamily_from_json(request, "");
        std::vector<FinSet> objects;
        if (opt.test_objects.is_array() && !opt.test_objects.empty()) {
            for (size_t i = 0; i < opt.test_objects.size(); ++i)
                objects.push_back(make_finset(doc::labels_from_json(
                    opt.test_objects[i], "/test_objects/" + std::to_string(i))));
        } else {
            objects.push_back(make_finset({"0", "1"}));
            objects.push_back(make_finset({"0", "1", "2"}));
        }
        for (const auto& z : objects) {
            bool ok = descent_check_sets(f, z);
            all = all && ok;
            results.push_back(json{{"object", z.labels}, {"descent", ok}});
        }
    } else {
        throw doc::schema_error("/category",
                                "descent is supported for zmod and finset documents only");
    }
    auto t1 = std::chrono::steady_clock::now();
    r.body["descent"] = results;
    r.body["all_pass"] = all;
    r.body["timing_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
    r.exit_code = all ? exit_canonical : exit_negative;
    return r;
}

// ---------------------------------------------------------------------------
// corpus
// ---------------------------------------------------------------------------

struct FixtureResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct CorpusResult {
    std::vector<FixtureResult> fixtures;
    int exit_code = 0;
};

inline Options options_from_json(const json& j) {
    Options opt;
    if (!j.is_object()) return opt;
    if (j.contains("budget")) opt.budget = j["budget"].get<int>();
    if (j.contains("question")) {
        std::string q = j["question"].get<std::string>();
        if (q != "universal" && q != "colim")
            throw doc::schema_error("/options/question", "expected 'universal' or 'colim'");
        opt.universal = (q == "universal");
    }
    if (j.contains("test_objects")) opt.test_objects = j["test_objects"];
    return opt;
}

inline FixtureResult run_fixture(const std::filesystem::path& file) {
    FixtureResult fr;
    fr.name = file.filename().string();
    try {
        std::ifstream in(file);
        if (!in) throw invalid_input("cannot open fixture");
        json fixture = json::parse(in);
        doc::check_format(fixture, "");
        const json& request = doc::field(fixture, "request", "");
        Options opt = options_from_json(fixture.contains("options") ? fixture["options"] : json());
        const json& expect = doc::field(fixture, "expect", "");
        Report rep = run_check(request, opt);
        std::string got = rep.body["verdict"]["status"].get<std::string>();
        std::string want = doc::field(expect, "verdict", "/expect").get<std::string>();
        if (got != want) {
            fr.detail = "verdict " + got + ", expected " + want;
            return fr;
        }
        if (expect.contains("rule")) {
            std::string rule = rep.body["verdict"]["rule"].get<std::string>();
            if (rule != expect["rule"].get<std::string>()) {
                fr.detail = "rule " + rule + ", expected " + expect["rule"].get<std::string>();
                return fr;
            }
        }
        if (expect.contains("exit") && rep.exit_code != expect["exit"].get<int>()) {
            fr.detail = "exit " + std::to_string(rep.exit_code) + ", expected " +
                        std::to_string(expect["exit"].get<int>());
            return fr;
        }
        fr.pass = true;
    } catch (const std::exception& e) {
        fr.detail = std::string("error: ") + e.what();
    }
    return fr;
}

/// Runs every *.json fixture in the directory, ordered by name. Any
/// mismatch or fixture error makes the whole run fail; a corrupted fixture
/// is reported as its own failure, never a crash.
inline CorpusResult run_corpus(const std::filesystem::path& dir) {
    CorpusResult out;
    if (!std::filesystem::is_directory(dir))
        throw invalid_input("corpus: not a directory: " + dir.string());
    std::vector<std::filesystem::path> files;
    for (const auto& e : std::filesystem::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
        FixtureResult fr = run_fixture(f);
        if (!fr.pass) out.exit_code = exit_negative;
        out.fixtures.push_back(std::move(fr));
    }
    return out;
}

// ---------------------------------------------------------------------------
// plain-text rendering
// ---------------------------------------------------------------------------

inline std::string render_text(const json& body) {
    std::ostringstream os;
    if (body.contains("verdict")) {
        const json& v = body["verdict"];
        os << "verdict: " << v["status"].get<std::string>() << "\n";
        os << "rule: " << v["rule"].get<std::string>() << "\n";
        const json& w = v["witness"];
        for (auto it = w.begin(); it != w.end(); ++it)
            os << "witness " << it.key() << ": " << it.value().dump() << "\n";
        os << "reverification:\n";
        for (const auto& line : v["reverification"]) os << "  - " << line.get<std::string>() << "\n";
    }
    if (body.contains("colim")) os << "colim: " << body["colim"].dump(2) << "\n";
    if (body.contains("result")) os << "result: " << body["result"].dump(2) << "\n";
    if (body.contains("descent")) {
        os << "descent: " << body["descent"].dump(2) << "\n";
        os << "all_pass: " << (body["all_pass"].get<bool>() ? "true" : "false") << "\n";
    }
    return os.str();
}

} // namespace sievelab::runner
