#pragma once

#include "sievelab/errors.hpp"
#include "sievelab/integer.hpp"

#include <initializer_list>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace sievelab {

/// Dense integer matrix with arbitrary-precision entries, row-major.
/// Zero-dimensional matrices are legal and act as maps to/from the trivial
/// group. Values are immutable in spirit: the mutating helpers exist for
/// construction and for the normal-form kernels, everything else copies.
class IntMatrix {
public:
    IntMatrix() : rows_(0), cols_(0) {}

    IntMatrix(int rows, int cols)
        : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows) * cols) {
        if (rows < 0 || cols < 0) throw invalid_input("IntMatrix: negative dimension");
    }

    IntMatrix(int rows, int cols, std::vector<Integer> entries)
        : rows_(rows), cols_(cols), entries_(std::move(entries)) {
        if (rows < 0 || cols < 0) throw invalid_input("IntMatrix: negative dimension");
        if (entries_.size() != static_cast<size_t>(rows_) * cols_)
            throw invalid_input("IntMatrix: entry count does not match dimensions");
    }

    /// Row-of-rows construction, mostly for tests and fixtures.
    static IntMatrix from_rows(std::initializer_list<std::initializer_list<long long>> rows) {
        int r = static_cast<int>(rows.size());
        int c = r == 0 ? 0 : static_cast<int>(rows.begin()->size());
        IntMatrix m(r, c);
        int i = 0;
        for (const auto& row : rows) {
            if (static_cast<int>(row.size()) != c)
                throw invalid_input("IntMatrix::from_rows: ragged rows");
            int j = 0;
            for (long long v : row) m.at(i, j++) = v;
            ++i;
        }
        return m;
    }

    static IntMatrix identity(int n) {
        IntMatrix m(n, n);
        for (int i = 0; i < n; ++i) m.at(i, i) = 1;
        return m;
    }

    static IntMatrix zero(int rows, int cols) { return IntMatrix(rows, cols); }

    static IntMatrix column(const std::vector<Integer>& v) {
        IntMatrix m(static_cast<int>(v.size()), 1);
        for (size_t i = 0; i < v.size(); ++i) m.at(static_cast<int>(i), 0) = v[i];
        return m;
    }

    int rows() const { return rows_; }
    int cols() const { return cols_; }

    Integer& at(int i, int j) { return entries_[static_cast<size_t>(i) * cols_ + j]; }
    const Integer& at(int i, int j) const { return entries_[static_cast<size_t>(i) * cols_ + j]; }

    const std::vector<Integer>& entries() const { return entries_; }

    std::vector<Integer> col(int j) const {
        std::vector<Integer> v(rows_);
        for (int i = 0; i < rows_; ++i) v[static_cast<size_t>(i)] = at(i, j);
        return v;
    }

    std::vector<Integer> row(int i) const {
        std::vector<Integer> v(cols_);
        for (int j = 0; j < cols_; ++j) v[static_cast<size_t>(j)] = at(i, j);
        return v;
    }

    bool is_zero() const {
        for (const auto& e : entries_)
            if (e != 0) return false;
        return true;
    }

    bool is_square() const { return rows_ == cols_; }

    bool operator==(const IntMatrix& o) const {
        return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
    }
    bool operator!=(const IntMatrix& o) const { return !(*this == o); }

    IntMatrix transpose() const {
        IntMatrix t(cols_, rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
        return t;
    }

    IntMatrix operator-() const {
        IntMatrix m(*this);
        for (auto& e : m.entries_) e = -e;
        return m;
    }

    IntMatrix operator+(const IntMatrix& o) const {
        require_same_shape(o, "operator+");
        IntMatrix m(*this);
        for (size_t k = 0; k < entries_.size(); ++k) m.entries_[k] += o.entries_[k];
        return m;
    }

    IntMatrix operator-(const IntMatrix& o) const {
        require_same_shape(o, "operator-");
        IntMatrix m(*this);
        for (size_t k = 0; k < entries_.size(); ++k) m.entries_[k] -= o.entries_[k];
        return m;
    }

    IntMatrix operator*(const IntMatrix& o) const {
        if (cols_ != o.rows_)
            throw invalid_input("IntMatrix::operator*: inner dimensions disagree");
        IntMatrix m(rows_, o.cols_);
        for (int i = 0; i < rows_; ++i)
            for (int k = 0; k < cols_; ++k) {
                const Integer& a = at(i, k);
                if (a == 0) continue;
                for (int j = 0; j < o.cols_; ++j) m.at(i, j) += a * o.at(k, j);
            }
        return m;
    }

    std::vector<Integer> apply(const std::vector<Integer>& v) const {
        if (static_cast<int>(v.size()) != cols_)
            throw invalid_input("IntMatrix::apply: vector length does not match columns");
        std::vector<Integer> out(rows_);
        for (int i = 0; i < rows_; ++i)
            for (int j = 0; j < cols_; ++j) out[static_cast<size_t>(i)] += at(i, j) * v[static_cast<size_t>(j)];
        return out;
    }

    /// [A | B], matching row counts.
    static IntMatrix hstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.rows_ != b.rows_) throw invalid_input("hstack: row counts disagree");
        IntMatrix m(a.rows_, a.cols_ + b.cols_);
        for (int i = 0; i < a.rows_; ++i) {
            for (int j = 0; j < a.cols_; ++j) m.at(i, j) = a.at(i, j);
            for (int j = 0; j < b.cols_; ++j) m.at(i, a.cols_ + j) = b.at(i, j);
        }
        return m;
    }

    /// [A; B], matching column counts.
    static IntMatrix vstack(const IntMatrix& a, const IntMatrix& b) {
        if (a.cols_ != b.cols_) throw invalid_input("vstack: column counts disagree");
        IntMatrix m(a.rows_ + b.rows_, a.cols_);
        for (int i = 0; i < a.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) m.at(i, j) = a.at(i, j);
        for (int i = 0; i < b.rows_; ++i)
            for (int j = 0; j < a.cols_; ++j) m.at(a.rows_ + i, j) = b.at(i, j);
        return m;
    }

    static IntMatrix block_diag(const std::vector<IntMatrix>& blocks) {
        int r = 0, c = 0;
        for (const auto& b : blocks) { r += b.rows_; c += b.cols_; }
        IntMatrix m(r, c);
        int ro = 0, co = 0;
        for (const auto& b : blocks) {
            for (int i = 0; i < b.rows_; ++i)
                for (int j = 0; j < b.cols_; ++j) m.at(ro + i, co + j) = b.at(i, j);
            ro += b.rows_;
            co += b.cols_;
        }
        return m;
    }

    IntMatrix submatrix(int row0, int col0, int nrows, int ncols) const {
        if (row0 < 0 || col0 < 0 || row0 + nrows > rows_ || col0 + ncols > cols_)
            throw invalid_input("IntMatrix::submatrix: out of range");
        IntMatrix m(nrows, ncols);
        for (int i = 0; i < nrows; ++i)
            for (int j = 0; j < ncols; ++j) m.at(i, j) = at(row0 + i, col0 + j);
        return m;
    }

    IntMatrix top_rows(int n) const { return submatrix(0, 0, n, cols_); }
    IntMatrix bottom_rows(int n) const { return submatrix(rows_ - n, 0, n, cols_); }

    Integer max_abs_entry() const {
        Integer m = 0;
        for (const auto& e : entries_) {
            Integer a = abs_val(e);
            if (a > m) m = a;
        }
        return m;
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    Integer determinant() const {
        if (rows_ != cols_) throw invalid_input("determinant: matrix not square");
        int n = rows_;
        if (n == 0) return 1;
        IntMatrix a(*this);
        Integer prev = 1;
        int sign = 1;
        for (int k = 0; k < n - 1; ++k) {
            if (a.at(k, k) == 0) {
                int p = -1;
                for (int i = k + 1; i < n; ++i)
                    if (a.at(i, k) != 0) { p = i; break; }
                if (p < 0) return 0;
                for (int j = 0; j < n; ++j) std::swap(a.at(k, j), a.at(p, j));
                sign = -sign;
            }
            for (int i = k + 1; i < n; ++i)
                for (int j = k + 1; j < n; ++j)
                    a.at(i, j) = (a.at(i, j) * a.at(k, k) - a.at(i, k) * a.at(k, j)) / prev;
            prev = a.at(k, k);
        }
        return sign > 0 ? a.at(n - 1, n - 1) : Integer(-a.at(n - 1, n - 1));
    }

    std::string to_string() const {
        std::ostringstream os;
        os << rows_ << "x" << cols_ << "[";
        for (int i = 0; i < rows_; ++i) {
            if (i) os << "; ";
            for (int j = 0; j < cols_; ++j) {
                if (j) os << " ";
                os << at(i, j).str();
            }
        }
        os << "]";
        return os.str();
    }

    // row/column primitives used by the normal-form algorithms
    void swap_rows(int a, int b) {
        for (int j = 0; j < cols_; ++j) std::swap(at(a, j), at(b, j));
    }
    void swap_cols(int a, int b) {
        for (int i = 0; i < rows_; ++i) std::swap(at(i, a), at(i, b));
    }
    void negate_row(int r) {
        for (int j = 0; j < cols_; ++j) at(r, j) = -at(r, j);
    }
    void negate_col(int c) {
        for (int i = 0; i < rows_; ++i) at(i, c) = -at(i, c);
    }
    void add_row_multiple(int dst, int src, const Integer& q) {
        if (q == 0) return;
        for (int j = 0; j < cols_; ++j) at(dst, j) += q * at(src, j);
    }
    void add_col_multiple(int dst, int src, const Integer& q) {
        if (q == 0) return;
        for (int i = 0; i < rows_; ++i) at(i, dst) += q * at(i, src);
    }

private:
    void require_same_shape(const IntMatrix& o, const char* op) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw invalid_input(std::string("IntMatrix::") + op + ": shapes disagree");
    }

    int rows_;
    int cols_;
    std::vector<Integer> entries_;
};

} // namespace sievelab
