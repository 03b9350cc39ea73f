#pragma once

#include "sievelab/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

namespace sievelab {

/// Finite set: a list of distinct opaque string labels. Order is preserved
/// as given; equality of sets is equality of label sequences.
struct FinSet {
    std::vector<std::string> labels;

    int size() const { return static_cast<int>(labels.size()); }

    int index_of(const std::string& label) const {
        for (size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i);
        return -1;
    }

    bool operator==(const FinSet& o) const { return labels == o.labels; }
    bool operator!=(const FinSet& o) const { return !(*this == o); }
};

inline FinSet make_finset(std::vector<std::string> labels) {
    std::set<std::string> seen;
    for (const auto& l : labels)
        if (!seen.insert(l).second) throw invalid_input("make_finset: duplicate label '" + l + "'");
    return FinSet{std::move(labels)};
}

/// Total map of finite sets, stored as target indices per source element.
struct SetMap {
    FinSet source;
    FinSet target;
    std::vector<int> assignment; // assignment[i] = index in target of source element i

    std::string image_label(int i) const {
        return target.labels[static_cast<size_t>(assignment[static_cast<size_t>(i)])];
    }
};

inline SetMap make_setmap(FinSet source, FinSet target,
                          const std::map<std::string, std::string>& assignment) {
    std::vector<int> idx(static_cast<size_t>(source.size()), -1);
    for (int i = 0; i < source.size(); ++i) {
        auto it = assignment.find(source.labels[static_cast<size_t>(i)]);
        if (it == assignment.end())
            throw invalid_input("make_setmap: no image for '" + source.labels[static_cast<size_t>(i)] + "'");
        int t = target.index_of(it->second);
        if (t < 0)
            throw invalid_input("make_setmap: image '" + it->second + "' is not a target label");
        idx[static_cast<size_t>(i)] = t;
    }
    if (assignment.size() != static_cast<size_t>(source.size()))
        throw invalid_input("make_setmap: assignment mentions labels outside the source");
    return SetMap{std::move(source), std::move(target), std::move(idx)};
}

inline SetMap identity_setmap(const FinSet& x) {
    SetMap m{x, x, std::vector<int>(static_cast<size_t>(x.size()))};
    std::iota(m.assignment.begin(), m.assignment.end(), 0);
    return m;
}

/// Generating family {A_i -> X}. The list may be empty; the empty family on
/// the empty set is the vacuous cover.
struct SetFamily {
    FinSet target;
    std::vector<SetMap> maps;
};

inline SetFamily make_setfamily(FinSet target, std::vector<SetMap> maps) {
    for (const auto& m : maps)
        if (m.target != target)
            throw invalid_input("make_setfamily: map target differs from the family target");
    return SetFamily{std::move(target), std::move(maps)};
}

/// Joint surjectivity of the family decides canonicity outright in Sets.
inline bool is_jointly_surjective(const SetFamily& f) {
    std::vector<char> hit(static_cast<size_t>(f.target.size()), 0);
    for (const auto& m : f.maps)
        for (int i = 0; i < m.source.size(); ++i)
            hit[static_cast<size_t>(m.assignment[static_cast<size_t>(i)])] = 1;
    return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

inline std::vector<std::string> uncovered_labels(const SetFamily& f) {
    std::vector<char> hit(static_cast<size_t>(f.target.size()), 0);
    for (const auto& m : f.maps)
        for (int i = 0; i < m.source.size(); ++i)
            hit[static_cast<size_t>(m.assignment[static_cast<size_t>(i)])] = 1;
    std::vector<std::string> out;
    for (int i = 0; i < f.target.size(); ++i)
        if (!hit[static_cast<size_t>(i)]) out.push_back(f.target.labels[static_cast<size_t>(i)]);
    return out;
}

namespace detail {

// Union-find with path compression over the disjoint union of the sources.
class UnionFind {
public:
    explicit UnionFind(int n) : parent_(static_cast<size_t>(n)) {
        std::iota(parent_.begin(), parent_.end(), 0);
    }
    int find(int i) {
        while (parent_[static_cast<size_t>(i)] != i) {
            parent_[static_cast<size_t>(i)] = parent_[static_cast<size_t>(parent_[static_cast<size_t>(i)])];
            i = parent_[static_cast<size_t>(i)];
        }
        return i;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[static_cast<size_t>(b)] = a;
    }

private:
    std::vector<int> parent_;
};

// Elements of the disjoint union are tagged "mapIndex:label".
inline std::string tagged_label(int map_index, const std::string& label) {
    return std::to_string(map_index) + ":" + label;
}

} // namespace detail

/// Coequalizer of the two projections from the pairwise fiber products into
/// the disjoint union of the sources, computed by union-find. Class labels
/// are the lexicographically least tagged member, so output is deterministic.
struct SetColimit {
    FinSet set;                          // C
    SetMap to_target;                    // always injective in Sets
    std::vector<std::vector<int>> classes; // class index -> union elements (map,src flattened)
};

inline SetColimit colim_oracle(const SetFamily& f) {
    std::vector<int> offset;
    int total = 0;
    for (const auto& m : f.maps) {
        offset.push_back(total);
        total += m.source.size();
    }
    detail::UnionFind uf(total);
    // (i,a) ~ (j,b) precisely when f_i(a) = f_j(b): fuse target fibers
    std::vector<int> fiber_rep(static_cast<size_t>(f.target.size()), -1);
    for (size_t i = 0; i < f.maps.size(); ++i)
        for (int a = 0; a < f.maps[i].source.size(); ++a) {
            int x = f.maps[i].assignment[static_cast<size_t>(a)];
            int e = offset[i] + a;
            if (fiber_rep[static_cast<size_t>(x)] < 0)
                fiber_rep[static_cast<size_t>(x)] = e;
            else
                uf.unite(fiber_rep[static_cast<size_t>(x)], e);
        }

    std::map<int, std::vector<int>> groups; // root -> members
    std::vector<std::string> tag(static_cast<size_t>(total));
    for (size_t i = 0; i < f.maps.size(); ++i)
        for (int a = 0; a < f.maps[i].source.size(); ++a) {
            int e = offset[i] + a;
            tag[static_cast<size_t>(e)] =
                detail::tagged_label(static_cast<int>(i), f.maps[i].source.labels[static_cast<size_t>(a)]);
            groups[uf.find(e)].push_back(e);
        }

    struct ClassInfo {
        std::string label;
        int target_index;
        std::vector<int> members;
    };
    std::vector<ClassInfo> infos;
    for (auto& [root, members] : groups) {
        std::string least = tag[static_cast<size_t>(members.front())];
        for (int e : members)
            if (tag[static_cast<size_t>(e)] < least) least = tag[static_cast<size_t>(e)];
        // recover the common target point from any member
        int e = members.front();
        int mi = 0;
        while (mi + 1 < static_cast<int>(offset.size()) && offset[static_cast<size_t>(mi) + 1] <= e) ++mi;
        int x = f.maps[static_cast<size_t>(mi)].assignment[static_cast<size_t>(e - offset[static_cast<size_t>(mi)])];
        infos.push_back(ClassInfo{least, x, members});
    }
    std::sort(infos.begin(), infos.end(),
              [](const ClassInfo& a, const ClassInfo& b) { return a.label < b.label; });

    SetColimit out;
    std::vector<std::string> labels;
    std::vector<int> assign;
    for (auto& ci : infos) {
        labels.push_back(ci.label);
        assign.push_back(ci.target_index);
        out.classes.push_back(ci.members);
    }
    out.set = make_finset(labels);
    out.to_target = SetMap{out.set, f.target, assign};
    return out;
}

inline bool setmap_injective(const SetMap& m) {
    std::set<int> seen;
    for (int v : m.assignment)
        if (!seen.insert(v).second) return false;
    return true;
}

inline bool setmap_bijective(const SetMap& m) {
    return setmap_injective(m) && static_cast<int>(m.assignment.size()) == m.target.size();
}

/// Fiber-product family {A_i x_X W -> W} along g: W -> X. Pair labels are
/// "a|w"; inputs with '|' inside labels are rejected at construction by the
/// document layer, not here.
inline SetFamily pullback_family(const SetFamily& f, const SetMap& g) {
    if (g.target != f.target)
        throw invalid_input("pullback_family: map does not target the family's set");
    SetFamily out;
    out.target = g.source;
    for (const auto& m : f.maps) {
        std::vector<std::string> labels;
        std::vector<int> assign;
        for (int a = 0; a < m.source.size(); ++a)
            for (int w = 0; w < g.source.size(); ++w)
                if (m.assignment[static_cast<size_t>(a)] == g.assignment[static_cast<size_t>(w)]) {
                    labels.push_back(m.source.labels[static_cast<size_t>(a)] + "|" +
                                     g.source.labels[static_cast<size_t>(w)]);
                    assign.push_back(w);
                }
        SetMap pm;
        pm.source = make_finset(labels);
        pm.target = g.source;
        pm.assignment = assign;
        out.maps.push_back(std::move(pm));
    }
    return out;
}

/// Sheaf condition for Hom(-, Z) against the family, by exhaustive
/// enumeration. A matching family is forced to be constant on the union-find
/// classes (the pairwise conditions generate exactly those identifications),
/// so matching families are the functions classes -> Z.
inline bool descent_check_sets(const SetFamily& f, const FinSet& z) {
    SetColimit colim = colim_oracle(f);
    const int classes = colim.set.size();
    const int zn = z.size();
    const int xn = f.target.size();

    double homs = 1;
    for (int i = 0; i < xn; ++i) homs *= zn;
    double families = 1;
    for (int i = 0; i < classes; ++i) families *= zn;
    if (homs > 2e6 || families > 2e6)
        throw scale_exceeded("descent_check_sets: enumeration too large");

    // element -> class index
    std::vector<int> offset;
    int total = 0;
    for (const auto& m : f.maps) {
        offset.push_back(total);
        total += m.source.size();
    }
    std::vector<int> cls(static_cast<size_t>(total), -1);
    for (int c = 0; c < classes; ++c)
        for (int e : colim.classes[static_cast<size_t>(c)]) cls[static_cast<size_t>(e)] = c;

    // every restriction tuple of h: X -> Z, recorded as its class function
    std::set<std::vector<int>> restrictions;
    long long hom_count = 0;
    std::vector<int> h(static_cast<size_t>(xn), 0);
    if (xn == 0) {
        ++hom_count;
        restrictions.insert(std::vector<int>(static_cast<size_t>(classes), 0));
    } else if (zn > 0) {
        while (true) {
            std::vector<int> r(static_cast<size_t>(classes), -1);
            bool consistent = true;
            for (size_t i = 0; i < f.maps.size() && consistent; ++i)
                for (int a = 0; a < f.maps[i].source.size(); ++a) {
                    int c = cls[static_cast<size_t>(offset[i] + a)];
                    int val = h[static_cast<size_t>(f.maps[i].assignment[static_cast<size_t>(a)])];
                    if (r[static_cast<size_t>(c)] < 0)
                        r[static_cast<size_t>(c)] = val;
                    else if (r[static_cast<size_t>(c)] != val)
                        consistent = false;
                }
            if (!consistent)
                throw std::logic_error("descent_check_sets: restriction not constant on classes");
            ++hom_count;
            restrictions.insert(r);
            int pos = xn - 1;
            while (pos >= 0 && h[static_cast<size_t>(pos)] == zn - 1) {
                h[static_cast<size_t>(pos)] = 0;
                --pos;
            }
            if (pos < 0) break;
            ++h[static_cast<size_t>(pos)];
        }
    }

    // matching families = all functions classes -> Z (classes with no
    // elements cannot occur; empty classes list means the single empty family)
    long long matching = 1;
    for (int i = 0; i < classes; ++i) {
        matching *= zn;
        if (matching > 4000000) throw scale_exceeded("descent_check_sets: too many matching families");
    }

    // bijective iff injective (no collisions) and surjective (all matched)
    bool injective = restrictions.size() == static_cast<size_t>(hom_count);
    bool surjective = static_cast<long long>(restrictions.size()) == matching;
    return injective && surjective;
}

} // namespace sievelab
