#pragma once

#include "sievelab/normal_forms.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sievelab {

/// Finitely generated abelian group presented by a relation matrix: the
/// group is Z^generators / colLat(relations). Elements are generator
/// coordinate vectors; two vectors are equal in the group iff their
/// difference lies in the relation lattice.
struct FgAbGroup {
    int generators = 0;       // p
    IntMatrix relations;      // p x q, columns are relations
    GroupInvariants invariants;

    bool is_free() const { return invariants.is_free(); }
    bool is_trivial() const { return invariants.is_trivial(); }
};

inline FgAbGroup make_group(const IntMatrix& relations) {
    FgAbGroup g;
    g.generators = relations.rows();
    g.relations = relations;
    g.invariants = cokernel_invariants(relations);
    return g;
}

inline FgAbGroup free_group(int n) { return make_group(IntMatrix(n, 0)); }

inline FgAbGroup trivial_group() { return free_group(0); }

/// Z/d1 + ... + Z/dk + Z^free, presented minimally with a diagonal relation
/// matrix. Useful as the canonical representative of an isomorphism class.
inline FgAbGroup group_from_invariants(const GroupInvariants& inv) {
    int t = static_cast<int>(inv.torsion.size());
    IntMatrix rel(t + inv.free_rank, t);
    for (int i = 0; i < t; ++i) rel.at(i, i) = inv.torsion[static_cast<size_t>(i)];
    return make_group(rel);
}

/// Structure theorem: isomorphic iff the invariants agree.
inline bool is_isomorphic(const FgAbGroup& g, const FgAbGroup& h) {
    return g.invariants == h.invariants;
}

/// Two generator-coordinate vectors name the same element iff their
/// difference is a relation.
inline bool elements_equal(const FgAbGroup& g, const std::vector<Integer>& a,
                           const std::vector<Integer>& b) {
    std::vector<Integer> diff(a.size());
    for (size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    return LatticeSolver(g.relations).contains(diff);
}

/// Homomorphism between finitely presented groups, stored as the matrix of
/// generator images (target.generators x source.generators), un-reduced.
/// Well-definedness — every source relation maps into the target relation
/// lattice — is checked at construction.
struct GroupHom {
    FgAbGroup source;
    FgAbGroup target;
    IntMatrix matrix;
};

inline GroupHom make_hom(const FgAbGroup& source, const FgAbGroup& target,
                         const IntMatrix& matrix) {
    if (matrix.rows() != target.generators || matrix.cols() != source.generators)
        throw invalid_input("make_hom: matrix shape does not match source/target generators");
    IntMatrix pushed = matrix * source.relations;
    if (!LatticeSolver(target.relations).solve_matrix(pushed))
        throw invalid_input("make_hom: matrix does not respect the source relations");
    return GroupHom{source, target, matrix};
}

inline GroupHom identity_hom(const FgAbGroup& g) {
    return GroupHom{g, g, IntMatrix::identity(g.generators)};
}

inline GroupHom zero_hom(const FgAbGroup& source, const FgAbGroup& target) {
    return GroupHom{source, target, IntMatrix(target.generators, source.generators)};
}

inline GroupHom compose(const GroupHom& g, const GroupHom& f) {
    if (g.source.generators != f.target.generators)
        throw invalid_input("compose: inner objects disagree");
    return GroupHom{f.source, g.target, g.matrix * f.matrix};
}

/// Equality as homomorphisms: matrices agree columnwise modulo the target
/// relations.
inline bool hom_equal(const GroupHom& f, const GroupHom& g) {
    if (f.matrix.rows() != g.matrix.rows() || f.matrix.cols() != g.matrix.cols()) return false;
    return LatticeSolver(f.target.relations).solve_matrix(f.matrix - g.matrix).has_value();
}

// ---------------------------------------------------------------------------
// direct sums
// ---------------------------------------------------------------------------

struct DirectSum {
    FgAbGroup group;
    std::vector<GroupHom> injections;
    std::vector<GroupHom> projections;
};

inline DirectSum direct_sum(const std::vector<FgAbGroup>& parts) {
    std::vector<IntMatrix> rels;
    rels.reserve(parts.size());
    int total = 0;
    for (const auto& g : parts) { rels.push_back(g.relations); total += g.generators; }
    DirectSum out;
    out.group = make_group(IntMatrix::block_diag(rels));
    int offset = 0;
    for (const auto& g : parts) {
        IntMatrix in(total, g.generators);
        IntMatrix pr(g.generators, total);
        for (int i = 0; i < g.generators; ++i) {
            in.at(offset + i, i) = 1;
            pr.at(i, offset + i) = 1;
        }
        out.injections.push_back(GroupHom{g, out.group, in});
        out.projections.push_back(GroupHom{out.group, g, pr});
        offset += g.generators;
    }
    return out;
}

// ---------------------------------------------------------------------------
// kernels (subgroup machinery shared by pullbacks and descent)
// ---------------------------------------------------------------------------

/// The kernel of h: G -> H as a presented group with its inclusion into G.
/// The inclusion matrix's columns are a canonical basis of the lattice
/// L = {v in Z^{G.gens} : M_h * v lies in the relation lattice of H};
/// relations express G's relations in that basis (they always lie in L).
struct Kernel {
    FgAbGroup group;
    GroupHom inclusion;
};

inline Kernel kernel(const GroupHom& h) {
    const int p = h.source.generators;
    IntMatrix aug = IntMatrix::hstack(h.matrix, h.target.relations);
    IntMatrix full = kernel_basis(aug);
    IntMatrix basis = column_hermite(full.top_rows(p));
    auto rel = LatticeSolver(basis).solve_matrix(h.source.relations);
    if (!rel) throw invalid_input("kernel: source relations escape the kernel lattice");
    Kernel out;
    out.group = make_group(*rel);
    out.inclusion = GroupHom{out.group, h.source, basis};
    return out;
}

inline bool is_injective_hom(const GroupHom& h) {
    // trivial kernel: every vector of the kernel lattice is already a relation
    IntMatrix aug = IntMatrix::hstack(h.matrix, h.target.relations);
    IntMatrix basis = column_hermite(kernel_basis(aug).top_rows(h.source.generators));
    return LatticeSolver(h.source.relations).solve_matrix(basis).has_value();
}

inline bool is_surjective_hom(const GroupHom& h) {
    return cokernel_invariants(IntMatrix::hstack(h.matrix, h.target.relations)).is_trivial();
}

inline bool is_isomorphism_hom(const GroupHom& h) {
    return is_surjective_hom(h) && is_injective_hom(h);
}

// ---------------------------------------------------------------------------
// pullbacks and coequalizers
// ---------------------------------------------------------------------------

struct Pullback {
    FgAbGroup group;       // P = {(a,b) : f(a) = g(b)}
    GroupHom to_left;      // P -> source(f)
    GroupHom to_right;     // P -> source(g)
};

/// Fiber product of f and g over their common target. When everything is
/// free this is the free group on kernel_basis([M_f | -M_g]); in general the
/// target relations are adjoined before taking the kernel and the result is
/// projected back to the (a,b) block.
inline Pullback pullback(const GroupHom& f, const GroupHom& g) {
    if (f.target.generators != g.target.generators ||
        f.target.relations != g.target.relations)
        throw invalid_input("pullback: maps do not share a target");
    const int pa = f.source.generators, pb = g.source.generators;
    IntMatrix h = IntMatrix::hstack(f.matrix, -g.matrix);
    IntMatrix aug = IntMatrix::hstack(h, f.target.relations);
    IntMatrix basis = column_hermite(kernel_basis(aug).top_rows(pa + pb));
    IntMatrix rel_ab = IntMatrix::block_diag({f.source.relations, g.source.relations});
    auto rel = LatticeSolver(basis).solve_matrix(rel_ab);
    if (!rel) throw invalid_input("pullback: source relations escape the pullback lattice");
    Pullback out;
    out.group = make_group(*rel);
    out.to_left = GroupHom{out.group, f.source, basis.top_rows(pa)};
    out.to_right = GroupHom{out.group, g.source, basis.bottom_rows(pb)};
    return out;
}

/// Mediating map for a cone (h1, h2) with f*h1 = g*h2; exists and is unique.
inline GroupHom pullback_mediator(const Pullback& pb, const GroupHom& h1, const GroupHom& h2) {
    IntMatrix stacked = IntMatrix::vstack(h1.matrix, h2.matrix);
    IntMatrix basis = IntMatrix::vstack(pb.to_left.matrix, pb.to_right.matrix);
    auto u = LatticeSolver(basis).solve_matrix(stacked);
    if (!u) throw invalid_input("pullback_mediator: cone does not land in the pullback lattice");
    return GroupHom{h1.source, pb.group, *u};
}

struct Coequalizer {
    FgAbGroup group;  // target / im(u - v)
    GroupHom proj;
};

/// In an abelian category the coequalizer of u, v is the cokernel of u - v:
/// same generators as the target, relations extended by the difference.
inline Coequalizer coequalizer(const GroupHom& u, const GroupHom& v) {
    if (u.source.generators != v.source.generators ||
        u.target.generators != v.target.generators)
        throw invalid_input("coequalizer: maps do not share source and target");
    IntMatrix rel = IntMatrix::hstack(u.target.relations, u.matrix - v.matrix);
    Coequalizer out;
    out.group = make_group(rel);
    out.proj = GroupHom{u.target, out.group, IntMatrix::identity(u.target.generators)};
    return out;
}

// ---------------------------------------------------------------------------
// image data for homs between free groups
// ---------------------------------------------------------------------------

inline void require_free(const GroupHom& f, const char* who) {
    if (!f.source.is_free() || f.source.relations.cols() != 0 ||
        !f.target.is_free() || f.target.relations.cols() != 0)
        throw invalid_input(std::string(who) + ": source and target must be presented free");
}

inline int hom_image_rank(const GroupHom& f) {
    require_free(f, "hom_image_rank");
    return rank(f.matrix);
}

/// Saturated sublattice {v : k*v in im(f) for some k != 0}, canonical basis.
inline IntMatrix image_saturation(const GroupHom& f) {
    require_free(f, "image_saturation");
    return saturation_basis(f.matrix);
}

} // namespace sievelab
