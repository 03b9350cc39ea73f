#pragma once

#include "sievelab/int_matrix.hpp"

#include <algorithm>
#include <optional>
#include <vector>

namespace sievelab {

/// Smith normal form U*A*V = diag(d) padded with zeros, where U, V are
/// unimodular and d holds the positive invariant factors d1 | d2 | ... | dr.
/// d is unique given A; U and V are whatever the reduction produced.
struct SmithForm {
    IntMatrix U;             // rows x rows, |det| = 1
    IntMatrix V;             // cols x cols, |det| = 1
    std::vector<Integer> d;  // positive invariant factors, length = rank
    int rows = 0;
    int cols = 0;

    int rank() const { return static_cast<int>(d.size()); }

    IntMatrix diagonal() const {
        IntMatrix m(rows, cols);
        for (int i = 0; i < rank(); ++i) m.at(i, i) = d[static_cast<size_t>(i)];
        return m;
    }
};

namespace detail {

// g = gcd(a, b) > 0 with x*a + y*b = g.
inline Integer ext_gcd(const Integer& a, const Integer& b, Integer& x, Integer& y) {
    Integer r0 = a, r1 = b, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        Integer q = r0 / r1;
        Integer r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        Integer x2 = x0 - q * x1;
        x0 = x1; x1 = x2;
        Integer y2 = y0 - q * y1;
        y0 = y1; y1 = y2;
    }
    if (r0 < 0) { r0 = -r0; x0 = -x0; y0 = -y0; }
    x = x0; y = y0;
    return r0;
}

// Replace rows (t, i) by (x*row_t + y*row_i, -(b/g)*row_t + (a/g)*row_i),
// a unimodular transform making w(c, t) = gcd(a, b) and w(c, i) = 0 at the
// pivot column c. Single combined updates keep entries from compounding the
// way repeated quotient subtraction does.
inline void gcd_rows_at(IntMatrix& w, IntMatrix* u, int c, int t, int i) {
    Integer a = w.at(t, c), b = w.at(i, c), x, y;
    Integer g = ext_gcd(a, b, x, y);
    Integer as = a / g, bs = b / g;
    for (IntMatrix* mat : {&w, u}) {
        if (!mat) continue;
        for (int j = 0; j < mat->cols(); ++j) {
            Integer top = x * mat->at(t, j) + y * mat->at(i, j);
            Integer bot = -bs * mat->at(t, j) + as * mat->at(i, j);
            mat->at(t, j) = top;
            mat->at(i, j) = bot;
        }
    }
}

inline void gcd_cols_at(IntMatrix& w, IntMatrix* v, int r, int t, int j) {
    Integer a = w.at(r, t), b = w.at(r, j), x, y;
    Integer g = ext_gcd(a, b, x, y);
    Integer as = a / g, bs = b / g;
    for (IntMatrix* mat : {&w, v}) {
        if (!mat) continue;
        for (int i = 0; i < mat->rows(); ++i) {
            Integer left = x * mat->at(i, t) + y * mat->at(i, j);
            Integer right = -bs * mat->at(i, t) + as * mat->at(i, j);
            mat->at(i, t) = left;
            mat->at(i, j) = right;
        }
    }
}

} // namespace detail

/// Row/column reduction with the minimal-|entry| pivot rule and extended-gcd
/// clearing. Divisibility of successive invariant factors is enforced by
/// folding offending entries into the pivot row and re-reducing.
inline SmithForm snf(const IntMatrix& a) {
    const int m = a.rows(), n = a.cols();
    SmithForm out;
    out.rows = m;
    out.cols = n;
    out.U = IntMatrix::identity(m);
    out.V = IntMatrix::identity(n);
    IntMatrix w(a);

    const int steps = std::min(m, n);
    int t = 0;
    while (t < steps) {
        // locate minimal nonzero |entry| in the trailing submatrix
        int pi = -1, pj = -1;
        Integer best = 0;
        for (int i = t; i < m; ++i)
            for (int j = t; j < n; ++j) {
                if (w.at(i, j) == 0) continue;
                Integer v = abs_val(w.at(i, j));
                if (pi < 0 || v < best) { best = v; pi = i; pj = j; }
            }
        if (pi < 0) break; // trailing submatrix is zero

        if (pi != t) { w.swap_rows(t, pi); out.U.swap_rows(t, pi); }
        if (pj != t) { w.swap_cols(t, pj); out.V.swap_cols(t, pj); }

        bool clean = false;
        while (!clean) {
            clean = true;
            for (int j = t + 1; j < n; ++j) {
                if (w.at(t, j) == 0) continue;
                if (w.at(t, j) % w.at(t, t) == 0) {
                    Integer q = w.at(t, j) / w.at(t, t);
                    w.add_col_multiple(j, t, -q);
                    out.V.add_col_multiple(j, t, -q);
                } else {
                    detail::gcd_cols_at(w, &out.V, t, t, j);
                }
            }
            // row t is now (pivot, 0, ..., 0); clearing the column below can
            // dirty it again only when a gcd transform fires
            for (int i = t + 1; i < m; ++i) {
                if (w.at(i, t) == 0) continue;
                if (w.at(i, t) % w.at(t, t) == 0) {
                    Integer q = w.at(i, t) / w.at(t, t);
                    w.add_row_multiple(i, t, -q);
                    out.U.add_row_multiple(i, t, -q);
                } else {
                    detail::gcd_rows_at(w, &out.U, t, t, i);
                    clean = false;
                }
            }
        }

        // divisibility: pivot must divide every remaining entry
        bool divides = true;
        for (int i = t + 1; i < m && divides; ++i)
            for (int j = t + 1; j < n && divides; ++j)
                if (w.at(i, j) % w.at(t, t) != 0) {
                    w.add_row_multiple(t, i, 1);
                    out.U.add_row_multiple(t, i, 1);
                    divides = false;
                }
        if (!divides) continue; // re-reduce at the same t

        if (w.at(t, t) < 0) { w.negate_row(t); out.U.negate_row(t); }
        ++t;
    }

    out.d.reserve(static_cast<size_t>(t));
    for (int i = 0; i < t; ++i) out.d.push_back(w.at(i, i));
    return out;
}

inline int rank(const IntMatrix& a) { return snf(a).rank(); }

/// Canonical basis of the column lattice: column-style Hermite normal form
/// with zero columns dropped. Each pivot column's first nonzero entry is
/// positive and entries in the pivot row to its left are reduced into
/// [0, pivot). Unique for a given lattice.
inline IntMatrix column_hermite(const IntMatrix& b) {
    IntMatrix h(b);
    const int m = h.rows(), n = h.cols();
    int piv = 0; // next pivot column slot
    for (int r = 0; r < m && piv < n; ++r) {
        // clear row r across columns >= piv down to a single gcd entry
        int lead = -1;
        for (int j = piv; j < n; ++j)
            if (h.at(r, j) != 0) { lead = j; break; }
        if (lead < 0) continue;
        if (lead != piv) h.swap_cols(piv, lead);
        for (int j = piv + 1; j < n; ++j) {
            if (h.at(r, j) == 0) continue;
            if (h.at(r, j) % h.at(r, piv) == 0) {
                Integer q = h.at(r, j) / h.at(r, piv);
                h.add_col_multiple(j, piv, -q);
            } else {
                detail::gcd_cols_at(h, nullptr, r, piv, j);
            }
        }
        if (h.at(r, piv) < 0) h.negate_col(piv);
        // reduce earlier pivot columns at row r into [0, pivot)
        for (int j = 0; j < piv; ++j) {
            Integer q = floor_div(h.at(r, j), h.at(r, piv));
            h.add_col_multiple(j, piv, -q);
        }
        ++piv;
    }
    return h.submatrix(0, 0, m, piv);
}

/// Canonical basis (column_hermite) of {x : A*x = 0}, as matrix columns.
/// The free columns of V in U*A*V = D span the kernel.
inline IntMatrix kernel_basis(const IntMatrix& a) {
    SmithForm s = snf(a);
    const int n = a.cols(), r = s.rank();
    if (n == r) return IntMatrix(n, 0);
    return column_hermite(s.V.submatrix(0, r, n, n - r));
}

/// Integral linear solver for a fixed matrix: factor once, solve many.
class LatticeSolver {
public:
    explicit LatticeSolver(const IntMatrix& a) : a_(a), s_(snf(a)) {}

    /// x with A*x = b, or nullopt when b is outside the column lattice.
    std::optional<std::vector<Integer>> solve(const std::vector<Integer>& b) const {
        if (static_cast<int>(b.size()) != a_.rows())
            throw invalid_input("LatticeSolver::solve: vector length does not match rows");
        std::vector<Integer> c = s_.U.apply(b);
        const int r = s_.rank();
        std::vector<Integer> y(static_cast<size_t>(a_.cols()));
        for (int i = 0; i < a_.rows(); ++i) {
            if (i < r) {
                if (c[static_cast<size_t>(i)] % s_.d[static_cast<size_t>(i)] != 0) return std::nullopt;
                if (i < a_.cols()) y[static_cast<size_t>(i)] = c[static_cast<size_t>(i)] / s_.d[static_cast<size_t>(i)];
            } else if (c[static_cast<size_t>(i)] != 0) {
                return std::nullopt;
            }
        }
        return s_.V.apply(y);
    }

    /// Columnwise solve A*X = B; nullopt if any column is not in the lattice.
    std::optional<IntMatrix> solve_matrix(const IntMatrix& b) const {
        if (b.rows() != a_.rows())
            throw invalid_input("LatticeSolver::solve_matrix: row counts disagree");
        IntMatrix x(a_.cols(), b.cols());
        for (int j = 0; j < b.cols(); ++j) {
            auto sol = solve(b.col(j));
            if (!sol) return std::nullopt;
            for (int i = 0; i < a_.cols(); ++i) x.at(i, j) = (*sol)[static_cast<size_t>(i)];
        }
        return x;
    }

    bool contains(const std::vector<Integer>& b) const { return solve(b).has_value(); }

    const SmithForm& smith() const { return s_; }

private:
    IntMatrix a_;
    SmithForm s_;
};

/// Coordinates x with A*x = b when b lies in the column lattice of A.
inline std::optional<std::vector<Integer>> lattice_contains(const IntMatrix& a,
                                                            const std::vector<Integer>& b) {
    return LatticeSolver(a).solve(b);
}

/// True iff the column lattice is all of Z^rows: full row rank and every
/// invariant factor equal to 1.
inline bool is_surjective(const IntMatrix& a) {
    SmithForm s = snf(a);
    if (s.rank() != a.rows()) return false;
    for (const auto& v : s.d)
        if (v != 1) return false;
    return true;
}

/// Invariants of a finitely generated abelian group: free rank plus the
/// torsion coefficients in divisibility order (each > 1).
struct GroupInvariants {
    int free_rank = 0;
    std::vector<Integer> torsion;

    bool operator==(const GroupInvariants& o) const {
        return free_rank == o.free_rank && torsion == o.torsion;
    }
    bool operator!=(const GroupInvariants& o) const { return !(*this == o); }

    bool is_trivial() const { return free_rank == 0 && torsion.empty(); }
    bool is_free() const { return torsion.empty(); }

    std::string to_string() const {
        std::string s = "(" + std::to_string(free_rank) + ", [";
        for (size_t i = 0; i < torsion.size(); ++i) {
            if (i) s += ",";
            s += torsion[i].str();
        }
        return s + "])";
    }
};

/// Invariants of coker(A) = Z^rows / colLat(A).
inline GroupInvariants cokernel_invariants(const IntMatrix& a) {
    SmithForm s = snf(a);
    GroupInvariants g;
    g.free_rank = a.rows() - s.rank();
    for (const auto& v : s.d)
        if (v > 1) g.torsion.push_back(v);
    return g;
}

/// Inverse of a unimodular square matrix: if U2*M*V2 = I then M^{-1} = V2*U2.
inline IntMatrix inverse_unimodular(const IntMatrix& m) {
    if (!m.is_square()) throw invalid_input("inverse_unimodular: matrix not square");
    SmithForm s = snf(m);
    if (s.rank() != m.rows())
        throw invalid_input("inverse_unimodular: matrix is singular");
    for (const auto& v : s.d)
        if (v != 1) throw invalid_input("inverse_unimodular: matrix not unimodular");
    IntMatrix inv = s.V * s.U;
    if (inv * m != IntMatrix::identity(m.rows()))
        throw invalid_input("inverse_unimodular: internal check failed");
    return inv;
}

/// Canonical basis of the column lattice (image) of A.
inline IntMatrix image_basis(const IntMatrix& a) { return column_hermite(a); }

/// Canonical basis of the saturation {v : k*v in im(A) for some k != 0}.
/// With U*A*V = D the image saturates to U^{-1} * span(e_1..e_r).
inline IntMatrix saturation_basis(const IntMatrix& a) {
    SmithForm s = snf(a);
    const int r = s.rank();
    IntMatrix uinv = inverse_unimodular(s.U);
    return column_hermite(uinv.submatrix(0, 0, a.rows(), r));
}

} // namespace sievelab
